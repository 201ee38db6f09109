# config.py

import json
from pathlib import Path
from dataclasses import dataclass, asdict
from typing import Self, ClassVar

from sinkhornpoly.errors import DomainError
from sinkhornpoly.minors import basis_size
from sinkhornpoly.recognition import DEFAULT_REDUNDANCY, default_precision
from sinkhornpoly.scaling import MIN_PRECISION

__all__ = [
    "RunConfig",
    "DEFAULT_DATA_DIR",
    "DEFAULT_MARGIN"
]

DEFAULT_DATA_DIR = "sinkhorn-data"
DEFAULT_MARGIN = 0.25

@dataclass
class RunConfig:
    """The settings of one interpolation run."""

    m: int
    n: int
    precision: int = None
    seed: int = 0
    data_dir: str = DEFAULT_DATA_DIR
    workers: int = 1
    count: int = None
    harvest: bool = False
    margin: float = DEFAULT_MARGIN
    redundancy: int = DEFAULT_REDUNDANCY

    M: ClassVar[str] = "m"
    N: ClassVar[str] = "n"
    PRECISION: ClassVar[str] = "precision"
    SEED: ClassVar[str] = "seed"
    DATA_DIR: ClassVar[str] = "data_dir"
    WORKERS: ClassVar[str] = "workers"
    COUNT: ClassVar[str] = "count"
    HARVEST: ClassVar[str] = "harvest"
    MARGIN: ClassVar[str] = "margin"
    REDUNDANCY: ClassVar[str] = "redundancy"

    FILE: ClassVar[str] = "config.json"

    def __post_init__(self) -> None:

        if self.precision is None and self.m >= 1 and self.n >= 1:
            self.precision = default_precision(basis_size(self.m, self.n))

        self.validate()

    def validate(self) -> None:
        """Checks the settings, otherwise raises an error."""

        if self.m < 1 or self.n < 1:
            raise DomainError(f"Ambient dimensions must be positive, got ({self.m}, {self.n}).")

        if self.precision is None or self.precision < MIN_PRECISION:
            raise DomainError(
                f"Precision must be at least {MIN_PRECISION} bits, got {self.precision}."
            )

        if self.workers < 1:
            raise DomainError(f"Worker count must be at least 1, got {self.workers}.")

        if self.margin < 0:
            raise DomainError(f"Redundancy margin must be non-negative, got {self.margin}.")

    @property
    def ambient(self) -> tuple[int, int]:
        """
        Returns the target ambient.

        :return: The pair (m, n).
        """

        return self.m, self.n

    @property
    def directory(self) -> Path:
        """
        Returns the run directory inside the data directory.

        :return: The directory of this ambient.
        """

        return Path(self.data_dir) / f"{self.m}x{self.n}"

    @property
    def dataset_path(self) -> Path:
        """
        Returns the dataset file path.

        :return: The dataset path.
        """

        return self.directory / "dataset.txt"

    @property
    def table_path(self) -> Path:
        """
        Returns the solved table file path.

        :return: The table path.
        """

        return self.directory / f"{self.m}x{self.n}.tsv"

    @property
    def config_path(self) -> Path:
        """
        Returns the stored configuration file path.

        :return: The configuration path.
        """

        return self.directory / self.FILE

    @classmethod
    def load(cls, data: dict[str, ...]) -> Self:
        """
        Loads the data into a new config object.

        :param data: The data to load.

        :return: The new config object.
        """

        return cls(
            m=data[cls.M],
            n=data[cls.N],
            precision=data.get(cls.PRECISION),
            seed=data.get(cls.SEED, 0),
            data_dir=data.get(cls.DATA_DIR, DEFAULT_DATA_DIR),
            workers=data.get(cls.WORKERS, 1),
            count=data.get(cls.COUNT),
            harvest=data.get(cls.HARVEST, False),
            margin=data.get(cls.MARGIN, DEFAULT_MARGIN),
            redundancy=data.get(cls.REDUNDANCY, DEFAULT_REDUNDANCY)
        )

    def dump(self) -> dict[str, ...]:
        """
        Dumps the data of the object.

        :return: The data of the object.
        """

        return asdict(self)

    @classmethod
    def encode(cls, data: dict[str, ...] | Self) -> str:
        """
        Encodes the data to a json string.

        :param data: The data to encode.

        :return: The json text.
        """

        if isinstance(data, cls):
            data = data.dump()

        return json.dumps(data, indent=4)

    @classmethod
    def decode(cls, data: str) -> dict[str, ...]:
        """
        Decodes a json string into data.

        :param data: The text to decode.

        :return: The json data.
        """

        return json.loads(data)

    def save(self) -> Path:
        """
        Writes the configuration into the run directory.

        :return: The configuration path.
        """

        self.directory.mkdir(parents=True, exist_ok=True)

        with open(self.config_path, "w") as file:
            file.write(self.encode(self))

        return self.config_path

    @classmethod
    def read(cls, path: str | Path) -> Self:
        """
        Reads a stored configuration.

        :param path: The configuration path.

        :return: The config object.
        """

        with open(path, "r") as file:
            return cls.load(cls.decode(file.read()))
