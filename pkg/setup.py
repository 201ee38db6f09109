# setup.py

import codecs
from pathlib import Path

from setuptools import setup, find_packages

def read_requirements(source: str | Path) -> list[str]:
    """
    Parses the requirements file.

    :param source: The source of the requirements.

    :return: The requirement names.
    """

    with codecs.open(str(source), 'r') as requirements_txt:
        lines = [line.split("#")[0].strip() for line in requirements_txt.readlines()]

    return [line for line in lines if line]

def main() -> None:
    """Runs the function to distribute the package."""

    with codecs.open('README.md', 'r') as desc_file:
        long_description = desc_file.read()

    setup(
        packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
        package_data={
            "sinkhornpoly": ["data/*.txt", "data/tables/*.tsv"]
        },
        include_package_data=True,
        install_requires=read_requirements("requirements.txt"),
        extras_require={"dev": ["twine", "pytest"]},
        entry_points={
            "console_scripts": ["sinkhornpoly=sinkhornpoly.cli:main"]
        },
        name='sinkhorn-polynomials',
        version='0.0.0',
        description=(
            "Exact integer polynomials of Sinkhorn and Kruithof scaling "
            "limit entries, with high precision limits, PSLQ recognition "
            "and an interpolation pipeline for the coefficient tables."
        ),
        license='MIT',
        long_description=long_description,
        long_description_content_type='text/markdown',
        python_requires=">=3.11",
        classifiers=[
            "Intended Audience :: Science/Research",
            "License :: OSI Approved :: MIT License",
            "Programming Language :: Python",
            "Programming Language :: Python :: 3.11",
            "Programming Language :: Python :: 3.12",
            "Topic :: Scientific/Engineering :: Mathematics",
            "Operating System :: OS Independent"
        ]
    )

if __name__ == "__main__":
    main()
