# store.py

import os
import hashlib
import logging
from pathlib import Path

from sinkhornpoly.errors import CorruptRecordError, DimensionError
from sinkhornpoly.pipeline.data import Dataset, DatumRecord

__all__ = [
    "CHECKSUM_SEPARATOR",
    "checksum",
    "encode_line",
    "decode_line",
    "dataset_store",
    "dataset_load",
    "append_record",
    "append_tried",
    "quarantine_path"
]

_logger = logging.getLogger(__name__)

CHECKSUM_SEPARATOR = " # "
HEADER = "#"
TRIED = "#tried"

def checksum(text: str) -> str:
    """
    Returns the checksum of a record line.

    :param text: The record text.

    :return: The first 16 hex digits of its sha256 digest.
    """

    return hashlib.sha256(text.encode()).hexdigest()[:16]

def encode_line(record: DatumRecord) -> str:
    """
    Encodes a record as a line with a checksum suffix.

    :param record: The record.

    :return: The line, without a newline.
    """

    text = record.encode()

    return f"{text}{CHECKSUM_SEPARATOR}{checksum(text)}"

def decode_line(line: str) -> DatumRecord:
    """
    Decodes a checksummed record line.

    :param line: The line.

    :return: The record.
    """

    text, separator, digest = line.rstrip("\n").rpartition(CHECKSUM_SEPARATOR)

    if not separator or checksum(text) != digest.strip():
        raise CorruptRecordError(f"Checksum mismatch in record line: {line.strip()!r}")

    return DatumRecord.decode(text)

def quarantine_path(path: str | Path) -> Path:
    """
    Returns the file that receives the corrupt lines of a dataset file.

    :param path: The dataset file path.

    :return: The quarantine file path.
    """

    path = Path(path)

    return path.with_name(f"{path.name}.quarantine")

def _header(ambient: tuple[int, int], seed: int) -> str:

    m, n = ambient

    return f"{HEADER} {m} {n} {seed}\n"

def dataset_store(dataset: Dataset, path: str | Path) -> None:
    """
    Writes a whole dataset, replacing the file.

    :param dataset: The dataset.
    :param path: The file path.
    """

    with open(path, "w") as file:
        file.write(_header(dataset.ambient, dataset.seed))

        for record in dataset:
            file.write(encode_line(record) + "\n")

        if dataset.tried >= 0:
            file.write(f"{TRIED} {dataset.tried}\n")

def _ends_with_newline(path: Path) -> bool:

    with open(path, "rb") as file:
        if file.seek(0, os.SEEK_END) == 0:
            return True

        file.seek(-1, os.SEEK_END)

        return file.read(1) == b"\n"

def _append(path: str | Path, ambient: tuple[int, int], seed: int, line: str) -> None:

    path = Path(path)
    new = not path.exists()

    # a crash can leave the last line without its newline
    broken = not new and not _ends_with_newline(path)

    with open(path, "a") as file:
        if new:
            file.write(_header(ambient, seed))

        elif broken:
            _logger.warning(f"Closed an incomplete last line in {path}.")

            file.write("\n")

        file.write(line + "\n")
        file.flush()

def append_record(record: DatumRecord, path: str | Path, seed: int = 0) -> None:
    """
    Appends one record to a dataset file, creating it when missing.

    :param record: The record.
    :param path: The file path.
    :param seed: The run seed written to the header of a new file.
    """

    _append(path, record.ambient, seed, encode_line(record))

def append_tried(
        index: int,
        path: str | Path,
        ambient: tuple[int, int],
        seed: int = 0
) -> None:
    """
    Appends a marker of a seed index tried without a record.

    :param index: The seed index of the discarded matrix.
    :param path: The file path.
    :param ambient: The shape written to the header of a new file.
    :param seed: The run seed written to the header of a new file.
    """

    _append(path, ambient, seed, f"{TRIED} {index}")

def _quarantine(path: Path, lines: list[str]) -> int:

    target = quarantine_path(path)
    known = set(target.read_text().splitlines()) if target.exists() else set()
    new = [line for line in dict.fromkeys(lines) if line not in known]

    if new:
        with open(target, "a") as file:
            for line in new:
                file.write(line + "\n")

    return len(new)

def dataset_load(path: str | Path, ambient: tuple[int, int] = None) -> Dataset:
    """
    Reads a dataset file.

    Lines that are incomplete or fail their checksum are skipped with a
    warning and copied to the quarantine file once. Duplicate matrices
    are dropped.

    :param path: The file path.
    :param ambient: The expected shape, read from the header by default.

    :return: The dataset.
    """

    path = Path(path)
    seed = 0
    tried = -1
    records = []
    corrupt = []

    with open(path, "r") as file:
        lines = file.read().split("\n")

    for line in lines:
        if not line.strip():
            continue

        if line.startswith(TRIED):
            try:
                tried = max(tried, int(line[len(TRIED):]))

            except ValueError:
                corrupt.append(line)

            continue

        if line.startswith(HEADER):
            try:
                m, n, seed = (int(value) for value in line[len(HEADER):].split())

            except ValueError:
                continue

            if ambient is None:
                ambient = (m, n)

            elif ambient != (m, n):
                raise DimensionError(f"Dataset {path} holds {m}x{n} records, expected {ambient}.")

            continue

        try:
            records.append(decode_line(line))

        except CorruptRecordError as e:
            _logger.warning(f"Skipped a corrupt record in {path}: {e}")

            corrupt.append(line)

    if corrupt and (count := _quarantine(path, corrupt)):
        _logger.warning(f"Quarantined {count} new corrupt lines of {path}.")

    if ambient is None:
        ambient = records[0].ambient if records else (0, 0)

    dataset = Dataset(ambient=ambient, seed=seed, tried=tried)
    dataset.extend(record for record in records if record.ambient == ambient)

    _logger.debug(f"Loaded {len(dataset)} records from {path}.")

    return dataset
