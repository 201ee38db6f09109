# test_cli.py

from fractions import Fraction
from pathlib import Path

import pytest

from sinkhornpoly import (
    ConjectureFalsifiedError, DomainError, InsufficientPrecisionError, CoefficientTable,
    ExactMatrix, MinorSet, Provenance, table_dump
)
from sinkhornpoly.cli import (
    EXIT_FAILURE, EXIT_FALSIFIED, EXIT_OK, EXIT_PRECONDITION, exit_code, main
)

SQRT6_MINUS_2 = "0.4494897427831780981972840747058913919659"

def _matrix_file(tmp_path: Path, matrix: ExactMatrix, name: str = "matrix.txt") -> str:

    path = tmp_path / name
    path.write_text(matrix.format())

    return str(path)

@pytest.mark.parametrize("k, expected", enumerate([1, 3, 5, 6, 5, 3, 1]))
def test_classes(k: int, expected: int, capsys: pytest.CaptureFixture) -> None:

    assert main(["classes", "3", "3", str(k)]) == EXIT_OK
    assert capsys.readouterr().out.split() == [str(expected)]

def test_classes_listing(capsys: pytest.CaptureFixture) -> None:

    assert main(["classes", "2", "2", "1", "--list"]) == EXIT_OK

    lines = capsys.readouterr().out.splitlines()

    assert lines[0] == "2"
    assert len(lines) == 3

def test_poly(tmp_path: Path, sample_3x3: ExactMatrix, capsys: pytest.CaptureFixture) -> None:

    assert main(["poly", _matrix_file(tmp_path, sample_3x3)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == (
        "374752x^6 - 220388x^5 - 844359x^4 - 125796x^3 + 210897x^2 + 14346x - 12312"
    )

def test_poly_exact(tmp_path: Path, sample_2x2: ExactMatrix, capsys: pytest.CaptureFixture) -> None:

    assert main(["poly", _matrix_file(tmp_path, sample_2x2), "--exact"]) == EXIT_OK

    lines = capsys.readouterr().out.splitlines()

    assert lines == ["x^2 + 4x - 2", "-2x^2 - 8x + 4"]

def test_poly_entry(tmp_path: Path, sample_2x2: ExactMatrix, capsys: pytest.CaptureFixture) -> None:

    path = _matrix_file(tmp_path, sample_2x2)

    assert main(["poly", path, "--entry", "2", "2"]) == EXIT_OK

    swapped = _matrix_file(tmp_path, ExactMatrix.from_rows([[4, 3], [2, 1]]), "swapped.txt")
    first = capsys.readouterr().out

    assert main(["poly", swapped]) == EXIT_OK
    assert capsys.readouterr().out == first

def test_poly_degenerate(
        tmp_path: Path, degenerate_matrix: ExactMatrix, capsys: pytest.CaptureFixture
) -> None:

    assert main(["poly", _matrix_file(tmp_path, degenerate_matrix)]) == EXIT_OK

    lines = capsys.readouterr().out.splitlines()

    assert "proportional" in lines[0]
    assert lines[1] == "3x^3 - 25x^2 + 48x - 16"

def test_poly_unsupported_ambient(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:

    matrix = ExactMatrix.from_rows([[i + j + 1 for j in range(5)] for i in range(5)])

    assert main(["poly", _matrix_file(tmp_path, matrix)]) == EXIT_PRECONDITION
    assert "interpolate 5 5" in capsys.readouterr().err

def test_recognize(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:

    path = tmp_path / "value.txt"
    path.write_text(SQRT6_MINUS_2 + "\n")

    assert main(["recognize", str(path), "--degree", "2"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "x^2 + 4x - 2"

def test_recognize_invalid_number(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:

    path = tmp_path / "value.txt"
    path.write_text("zero point four\n")

    assert main(["recognize", str(path), "--degree", "2"]) == EXIT_PRECONDITION
    assert "error" in capsys.readouterr().err

def test_limit(tmp_path: Path, sample_2x2: ExactMatrix, capsys: pytest.CaptureFixture) -> None:

    assert main(["limit", _matrix_file(tmp_path, sample_2x2), "--precision", "128"]) == EXIT_OK

    lines = capsys.readouterr().out.splitlines()

    assert lines[0].startswith("0.4494897427831")
    assert lines[0].split()[0].endswith("±")
    assert lines[-1].startswith("certified digits: ")

def test_limit_kruithof(
        tmp_path: Path, traffic_matrix: ExactMatrix, capsys: pytest.CaptureFixture
) -> None:

    rows = tmp_path / "rows.txt"
    columns = tmp_path / "columns.txt"
    rows.write_text("6000 4000 2500 1000\n")
    columns.write_text("6225 4000 2340 935\n")

    assert main(
        [
            "limit", _matrix_file(tmp_path, traffic_matrix), "--precision", "128",
            "--kruithof", str(rows), str(columns)
        ]
    ) == EXIT_OK
    assert capsys.readouterr().out.startswith("3246.387")

def test_missing_file(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:

    assert main(["limit", str(tmp_path / "missing.txt")]) == EXIT_PRECONDITION
    assert capsys.readouterr().err.startswith("error: ")

def test_verify(capsys: pytest.CaptureFixture) -> None:

    assert main(["verify", "2", "3", "--trials", "2", "--precision", "256"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "2/2 pass"

def test_interpolate_two_by_two(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:

    args = ["-q", "interpolate", "2", "2", "--count", "8", "--data-dir", str(tmp_path)]

    assert main(args) == EXIT_OK
    assert "coefficients for 2x2" in capsys.readouterr().out
    assert (tmp_path / "2x2" / "2x2.tsv").exists()
    assert (tmp_path / "2x2" / "config.json").exists()

    assert main(args + ["--resume"]) == EXIT_OK

def test_poly_reads_pipeline_tables(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:

    matrix = ExactMatrix.from_rows([[1, 2, 3, 4], [2, 3, 5, 7], [3, 5, 8, 13]])
    path = _matrix_file(tmp_path, matrix)
    data_dir = tmp_path / "runs"

    assert main(["poly", path, "--data-dir", str(data_dir)]) == EXIT_PRECONDITION
    assert "interpolate 3 4" in capsys.readouterr().err

    (data_dir / "3x4").mkdir(parents=True)
    table_dump(
        CoefficientTable(
            ambient=(3, 4), entries={MinorSet(): Fraction(1)},
            provenance=Provenance.PIPELINE_INTERPOLATED
        ),
        data_dir / "3x4" / "3x4.tsv"
    )

    assert main(["poly", path, "--data-dir", str(data_dir)]) == EXIT_OK

def test_interpolate_install(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:

    tables = tmp_path / "tables"
    args = [
        "-q", "interpolate", "2", "2", "--count", "8",
        "--data-dir", str(tmp_path), "--install", str(tables)
    ]

    assert main(args) == EXIT_OK
    assert "table installed at" in capsys.readouterr().out
    assert (tables / "2x2.tsv").exists()

def test_exit_codes() -> None:

    assert exit_code(ConjectureFalsifiedError("no fit", k=2)) == EXIT_FALSIFIED
    assert exit_code(InsufficientPrecisionError("too coarse")) == EXIT_FAILURE
    assert exit_code(DomainError("bad")) == EXIT_PRECONDITION
    assert exit_code(FileNotFoundError("missing")) == EXIT_PRECONDITION

    with pytest.raises(RuntimeError):
        exit_code(RuntimeError("unexpected"))
