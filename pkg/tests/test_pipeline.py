# test_pipeline.py

from pathlib import Path

import pytest

from sinkhornpoly import (
    ConjectureFalsifiedError, CorruptRecordError, DimensionError,
    NeedsMoreDataError, ExactMatrix, IntPolynomial, MinorSet, Provenance,
    RunConfig, builtin_table, polynomial_for, table_identities
)
from sinkhornpoly.pipeline import (
    Campaign, Dataset, DatasetWriter, DatumRecord, DiscardReport,
    append_record, assemble_system, collect_datum, dataset_load,
    dataset_store, decode_line, encode_line, harvest_data, has_zero_minor,
    leading_ratio, matrix_rng, quarantine_path, random_matrix,
    required_records, solve_table
)

SAMPLE_POLYNOMIAL = IntPolynomial.from_descending(
    [374752, -220388, -844359, -125796, 210897, 14346, -12312]
)

def _record(matrix: ExactMatrix, seed: int, poly: IntPolynomial = None) -> DatumRecord:

    if poly is None:
        poly = polynomial_for(matrix, builtin_table(*matrix.shape)).primitive

    return DatumRecord(matrix=matrix, polynomial=poly, precision=512, seed=seed)

def _dataset(m: int, n: int, count: int) -> Dataset:

    dataset = Dataset(ambient=(m, n))

    for index in range(count):
        dataset.append(_record(random_matrix(m, n, matrix_rng(3, index)), index))

    return dataset

def test_record_encoding(sample_2x2: ExactMatrix) -> None:

    record = _record(sample_2x2, 4)

    assert record.encode() == "2 2 | 4 | 1 2 3 4 | 512 | -2 4 1 | rs"
    assert DatumRecord.decode(record.encode()) == record
    assert record.degree == 2

    unchecked = DatumRecord(
        matrix=sample_2x2, polynomial=record.polynomial, precision=512,
        seed=4, ratio_check=False, stability=False
    )

    assert unchecked.flags == "-"
    assert DatumRecord.decode(unchecked.encode()) == unchecked

def test_record_decoding_errors() -> None:

    with pytest.raises(CorruptRecordError):
        DatumRecord.decode("2 2 | 4 | 1 2 3 4 | 512")

    with pytest.raises(CorruptRecordError):
        DatumRecord.decode("2 2 | 4 | 1 2 3 | 512 | -2 4 1 | rs")

    with pytest.raises(CorruptRecordError):
        DatumRecord.decode("2 2 | x | 1 2 3 4 | 512 | -2 4 1 | rs")

def test_checksummed_lines(sample_2x2: ExactMatrix) -> None:

    line = encode_line(_record(sample_2x2, 0))

    assert decode_line(line) == _record(sample_2x2, 0)

    with pytest.raises(CorruptRecordError):
        decode_line(line.replace("512", "513"))

    with pytest.raises(CorruptRecordError):
        decode_line(line[:-20])

def test_random_matrices_are_reproducible() -> None:

    first = random_matrix(3, 4, matrix_rng(11, 5))

    assert first == random_matrix(3, 4, matrix_rng(11, 5))
    assert first != random_matrix(3, 4, matrix_rng(11, 6))
    assert first.shape == (3, 4)
    assert all(1 <= value <= 20 for value in first.entries)
    assert not has_zero_minor(first)

    with pytest.raises(DimensionError):
        random_matrix(0, 3, matrix_rng(0, 0))

def test_zero_minors(degenerate_matrix: ExactMatrix, sample_3x3: ExactMatrix) -> None:

    assert has_zero_minor(degenerate_matrix)
    assert not has_zero_minor(sample_3x3)

def test_leading_ratio(sample_3x3: ExactMatrix) -> None:

    assert leading_ratio(sample_3x3, SAMPLE_POLYNOMIAL) == 1

def test_dataset_rejects_duplicates(sample_2x2: ExactMatrix, sample_3x3: ExactMatrix) -> None:

    dataset = Dataset(ambient=(2, 2))

    assert dataset.append(_record(sample_2x2, 0))
    assert not dataset.append(_record(sample_2x2, 1))
    assert len(dataset) == 1
    assert sample_2x2 in dataset
    assert dataset.next_seed == 1
    assert dataset.reference_ratio() == 1

    with pytest.raises(DimensionError):
        dataset.append(_record(sample_3x3, 2))

def test_store_round_trip(tmp_path: Path) -> None:

    dataset = _dataset(2, 3, 4)
    path = tmp_path / "dataset.txt"

    dataset_store(dataset, path)
    loaded = dataset_load(path)

    assert loaded.ambient == (2, 3)
    assert loaded.sorted() == dataset.sorted()

def test_store_skips_corrupt_lines(tmp_path: Path, sample_2x2: ExactMatrix) -> None:

    path = tmp_path / "dataset.txt"
    dataset = _dataset(2, 2, 3)

    dataset_store(dataset, path)

    lines = path.read_text().splitlines()
    lines[2] = lines[2].replace(" | 512 | ", " | 511 | ")
    lines.append(encode_line(dataset.records[0]))
    lines.append(encode_line(_record(sample_2x2, 9))[:25])

    path.write_text("\n".join(lines))

    loaded = dataset_load(path)

    assert len(loaded) == 2
    assert quarantine_path(path).exists()
    assert len(quarantine_path(path).read_text().splitlines()) == 2

def test_append_creates_the_file(tmp_path: Path, sample_2x2: ExactMatrix) -> None:

    path = tmp_path / "dataset.txt"

    append_record(_record(sample_2x2, 0), path, seed=5)
    append_record(_record(ExactMatrix.from_rows([[2, 1], [1, 3]]), 1), path, seed=5)

    assert path.read_text().startswith("# 2 2 5\n")

    loaded = dataset_load(path, ambient=(2, 2))

    assert loaded.seed == 5
    assert len(loaded) == 2

    with pytest.raises(DimensionError):
        dataset_load(path, ambient=(3, 3))

def test_writer(tmp_path: Path) -> None:

    dataset = Dataset(ambient=(2, 2))
    path = tmp_path / "dataset.txt"
    records = _dataset(2, 2, 3).records

    writer = DatasetWriter(dataset=dataset, path=path)
    writer.run(block=False)

    for record in records + records[:1]:
        writer.write(record)

    writer.close()

    assert writer.written == 3
    assert len(dataset) == 3
    assert len(dataset_load(path)) == 3

def test_collect_sample(sample_3x3: ExactMatrix) -> None:

    record = collect_datum(sample_3x3, 512, seed=2)

    assert isinstance(record, DatumRecord)
    assert record.polynomial == SAMPLE_POLYNOMIAL
    assert record.ratio_check and record.stability
    assert record.verify()

def test_collect_discards_low_degree(degenerate_matrix: ExactMatrix) -> None:

    report = collect_datum(degenerate_matrix, 512)

    assert isinstance(report, DiscardReport)
    assert "below 6" in report.reason

def test_collect_moves_the_entry(sample_2x2: ExactMatrix) -> None:

    results = harvest_data(sample_2x2, 256)

    assert len(results) == 4
    assert all(isinstance(result, DatumRecord) for result in results)
    assert results[0].polynomial == IntPolynomial.from_descending([1, 4, -2])
    assert results[3].matrix.to_rows() == [[4, 3], [2, 1]]

def test_system_needs_enough_records() -> None:

    dataset = _dataset(3, 3, 4)

    assert required_records(6, 0.25) == 8

    with pytest.raises(NeedsMoreDataError) as info:
        assemble_system((3, 3), 3, dataset)

    assert info.value.required == 8
    assert info.value.available == 4

def test_solve_recovers_the_polynomials() -> None:

    dataset = _dataset(3, 3, 12)

    table = solve_table((3, 3), dataset)

    for record in dataset:
        assert polynomial_for(record.matrix, table).primitive == record.polynomial

    for index in range(20, 25):
        matrix = random_matrix(3, 3, matrix_rng(3, index))

        assert polynomial_for(matrix, table).primitive == (
            polynomial_for(matrix, builtin_table(3, 3)).primitive
        )

def test_solve_two_by_three_table() -> None:

    table = solve_table((2, 3), _dataset(2, 3, 8))

    assert table.provenance is Provenance.PIPELINE_INTERPOLATED
    assert table.coefficient(MinorSet()) == 1

    for index in range(30, 34):
        matrix = random_matrix(2, 3, matrix_rng(3, index))

        assert polynomial_for(matrix, table).primitive == (
            polynomial_for(matrix, builtin_table(2, 3)).primitive
        )

def test_inconsistent_data_falsifies_the_form() -> None:

    dataset = Dataset(ambient=(2, 2))

    for index in range(4):
        matrix = random_matrix(2, 2, matrix_rng(5, index))
        poly = polynomial_for(matrix, builtin_table(2, 2)).primitive
        shifted = IntPolynomial(
            (poly.coefficients[0], poly.coefficients[1] + index + 1, poly.coefficients[2])
        )

        dataset.append(_record(matrix, index, shifted))

    with pytest.raises(ConjectureFalsifiedError) as info:
        solve_table((2, 2), dataset)

    assert info.value.k == 1

def test_two_by_two_campaign(tmp_path: Path) -> None:

    config = RunConfig(m=2, n=2, data_dir=str(tmp_path), count=8)
    campaign = Campaign(config)

    dataset = campaign.collect(progress=False)

    assert campaign.required() == 3
    assert len(dataset) + len(campaign.discarded) == 8
    assert len(dataset) >= 3

    table = campaign.solve()

    assert table.entries == builtin_table(2, 2).entries
    assert config.table_path.exists()
    assert len(Campaign.resume(config).dataset) == len(dataset)
    assert Campaign.resume(config).dataset.next_seed == 8

@pytest.mark.slow
def test_three_by_three_campaign(tmp_path: Path) -> None:

    config = RunConfig(m=3, n=3, data_dir=str(tmp_path), count=16, workers=2)
    campaign = Campaign(config)

    campaign.collect(progress=False)
    table = campaign.solve()

    for index in range(5):
        matrix = random_matrix(3, 3, matrix_rng(99, index))

        assert polynomial_for(matrix, table).primitive == (
            polynomial_for(matrix, builtin_table(3, 3)).primitive
        )

@pytest.mark.slow
def test_three_by_four_campaign(tmp_path: Path) -> None:

    config = RunConfig(m=3, n=4, data_dir=str(tmp_path), workers=4)
    campaign = Campaign(config)

    campaign.collect(progress=False)
    table = campaign.solve()

    assert all(check.passed for check in table_identities(table))

@pytest.mark.slow
def test_four_by_four_record(sample_4x4: ExactMatrix) -> None:

    record = collect_datum(sample_4x4, 4096)

    assert isinstance(record, DatumRecord)
    assert record.degree == 20
    assert record.polynomial.leading == 11788927150
    assert record.polynomial.constant == -5950778711040
    assert record.ratio_check and record.stability
