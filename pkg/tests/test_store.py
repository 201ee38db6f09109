# test_store.py

from pathlib import Path

from sinkhornpoly import ExactMatrix, IntPolynomial
from sinkhornpoly.pipeline import (
    Dataset, DatasetWriter, DatumRecord, DiscardReport, append_record,
    append_tried, dataset_load, dataset_store, encode_line, quarantine_path
)

def _record(seed: int) -> DatumRecord:

    return DatumRecord(
        matrix=ExactMatrix.from_rows([[1, seed + 2], [seed + 3, 1]]),
        polynomial=IntPolynomial.from_descending([1, 4, -2]),
        precision=512, seed=seed
    )

def test_append_after_a_partial_line(tmp_path: Path) -> None:

    path = tmp_path / "dataset.txt"

    append_record(_record(0), path)

    with open(path, "a") as file:
        file.write(encode_line(_record(1))[:20])

    append_record(_record(2), path)

    loaded = dataset_load(path)

    assert [record.seed for record in loaded.sorted()] == [0, 2]
    assert quarantine_path(path).read_text().splitlines() == [encode_line(_record(1))[:20]]

def test_quarantine_does_not_grow_on_reload(tmp_path: Path) -> None:

    path = tmp_path / "dataset.txt"

    append_record(_record(0), path)

    with open(path, "a") as file:
        file.write("2 2 | 1 | 1 3 3 5 | 512 | broken\n")
        file.write("2 2 | 1 | 1 3 3 5 | 512 | broken\n")

    for _ in range(3):
        assert len(dataset_load(path)) == 1

    assert len(quarantine_path(path).read_text().splitlines()) == 1

def test_clean_file_has_no_quarantine(tmp_path: Path) -> None:

    path = tmp_path / "dataset.txt"

    append_record(_record(0), path)
    append_record(_record(1), path)

    assert len(dataset_load(path)) == 2
    assert not quarantine_path(path).exists()

def test_tried_seeds_survive_a_reload(tmp_path: Path) -> None:

    path = tmp_path / "dataset.txt"

    append_record(_record(0), path, seed=3)
    append_tried(1, path, (2, 2), seed=3)
    append_tried(4, path, (2, 2), seed=3)

    loaded = dataset_load(path)

    assert len(loaded) == 1
    assert loaded.tried == 4
    assert loaded.next_seed == 5

    dataset_store(loaded, tmp_path / "copy.txt")

    assert dataset_load(tmp_path / "copy.txt").next_seed == 5

def test_tried_marker_creates_the_file(tmp_path: Path) -> None:

    path = tmp_path / "dataset.txt"

    append_tried(6, path, (3, 4), seed=2)

    loaded = dataset_load(path)

    assert path.read_text().startswith("# 3 4 2\n")
    assert loaded.ambient == (3, 4)
    assert len(loaded) == 0
    assert loaded.next_seed == 7

def test_next_seed_follows_discards() -> None:

    dataset = Dataset(ambient=(2, 2))

    dataset.append(_record(2))
    dataset.mark_tried(5)
    dataset.mark_tried(3)

    assert dataset.next_seed == 6

def test_writer_marks_discards(tmp_path: Path) -> None:

    dataset = Dataset(ambient=(2, 2))
    path = tmp_path / "dataset.txt"
    writer = DatasetWriter(dataset=dataset, path=path)

    writer.write(_record(0))
    writer.write(
        DiscardReport(matrix=ExactMatrix.from_rows([[1, 2], [2, 1]]), seed=1, reason="unstable")
    )
    writer.close()

    assert writer.written == 1
    assert dataset.next_seed == 2
    assert dataset_load(path).next_seed == 2

def test_writer_close_writes_each_record_once(tmp_path: Path) -> None:

    for attempt in range(5):
        dataset = Dataset(ambient=(2, 2))
        path = tmp_path / f"dataset{attempt}.txt"
        records = [_record(seed) for seed in range(40)]

        writer = DatasetWriter(dataset=dataset, path=path)
        writer.run(block=False)

        for record in records:
            writer.write(record)

        writer.close()

        lines = [line for line in path.read_text().splitlines() if not line.startswith("#")]

        assert writer.written == len(records)
        assert len(lines) == len(records)
        assert len(set(lines)) == len(records)
        assert not writer.pending
