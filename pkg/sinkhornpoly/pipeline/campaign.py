# campaign.py

import math
import logging
from fractions import Fraction
from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Iterable, Self, Sequence

from tqdm import tqdm
from looperation import Handler

from sinkhornpoly.config import RunConfig, DEFAULT_MARGIN
from sinkhornpoly.errors import (
    ConjectureFalsifiedError, InconsistentSystemError, NeedsMoreDataError
)
from sinkhornpoly.exact_linalg import ExactMatrix, solve_affine
from sinkhornpoly.minors import MinorSet, MinorCache, basis_size
from sinkhornpoly.symmetry import DEFAULT_WORK_LIMIT, class_sum_ratio, enumerate_classes
from sinkhornpoly.tables import (
    CoefficientTable, Provenance, table_dump, table_identities
)
from sinkhornpoly.pipeline.data import (
    Dataset, DatumRecord, DiscardReport, collect_datum, harvest_data,
    leading_ratio, matrix_rng, random_matrix
)
from sinkhornpoly.pipeline.store import dataset_load
from sinkhornpoly.pipeline.writer import DatasetWriter

__all__ = [
    "ClassSystem",
    "Campaign",
    "required_records",
    "assemble_system",
    "solve_table"
]

_logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class ClassSystem:
    """The exact linear system in the unknowns c_S of one subset size."""

    k: int
    classes: tuple[MinorSet, ...]
    matrix: ExactMatrix
    vector: tuple[Fraction, ...]

def required_records(classes: int, margin: float = DEFAULT_MARGIN) -> int:
    """
    Returns the number of equations needed for some unknowns.

    :param classes: The number of unknowns.
    :param margin: The redundancy margin.

    :return: The unknown count raised by the margin, rounded up.
    """

    return math.ceil(classes * (1 + margin))

def assemble_system(
        ambient: tuple[int, int],
        k: int,
        dataset: Dataset,
        margin: float = DEFAULT_MARGIN,
        classes: Sequence[MinorSet] = None,
        caches: Sequence[MinorCache] = None
) -> ClassSystem:
    """
    Builds one equation per record for the coefficients of x^k.

    Each record contributes coefficient_k / coefficient_0 =
    Σ_classes c_S·Σ(S)/M({}), with the class sums evaluated as
    products of Δ/Γ ratios.

    :param ambient: The shape (m, n).
    :param k: The subset size.
    :param dataset: The records.
    :param margin: The redundancy margin over the unknown count.
    :param classes: The class representatives of size k, enumerated by default.
    :param caches: The minor caches of the records in seed order.

    :return: The system.
    """

    if classes is None:
        classes = [rep.rep for rep in enumerate_classes(*ambient, k)]

    records = dataset.sorted()
    required = required_records(len(classes), margin)

    if len(records) < required:
        raise NeedsMoreDataError(
            f"Size {k} of {ambient[0]}x{ambient[1]} has {len(classes)} unknowns and "
            f"needs {required} records, the dataset has {len(records)}.",
            required=required, available=len(records)
        )

    if caches is None:
        caches = [MinorCache(record.matrix) for record in records]

    rows = []
    vector = []

    for record, cache in zip(records, caches):
        coefficients = record.polynomial.coefficients
        value = coefficients[k] if k < len(coefficients) else 0

        rows.append([class_sum_ratio(cache, rep) for rep in classes])
        vector.append(Fraction(value, record.polynomial.constant))

    return ClassSystem(
        k=k, classes=tuple(classes),
        matrix=ExactMatrix.from_rows(rows), vector=tuple(vector)
    )

def solve_table(
        ambient: tuple[int, int],
        dataset: Dataset,
        margin: float = DEFAULT_MARGIN,
        limit: int = DEFAULT_WORK_LIMIT
) -> CoefficientTable:
    """
    Solves the coefficients of every subset size from a dataset.

    Free variables are pinned to 0 and listed in the table pinning.
    An inconsistent system falsifies the conjectured form for the
    ambient and raises an error.

    :param ambient: The shape (m, n).
    :param dataset: The records.
    :param margin: The redundancy margin over the unknown count.
    :param limit: The enumeration work limit per size.

    :return: The interpolated table.
    """

    m, n = ambient
    records = dataset.sorted()
    caches = [MinorCache(record.matrix) for record in records]
    entries = {MinorSet(): Fraction(1)}
    pinning = []

    for k in range(1, basis_size(m, n) + 1):
        classes = [rep.rep for rep in enumerate_classes(m, n, k, limit=limit)]
        system = assemble_system(
            ambient, k, dataset, margin=margin, classes=classes, caches=caches
        )

        try:
            solution = solve_affine(system.matrix, system.vector)

        except InconsistentSystemError as e:
            _logger.error(
                f"The {m}x{n} system of size {k} is inconsistent, "
                f"no coefficients of the conjectured form fit the data: {e}"
            )

            raise ConjectureFalsifiedError(
                f"No coefficients of size {k} fit the {m}x{n} data "
                f"(record {records[e.row].seed if e.row is not None else '?'}).",
                k=k
            ) from e

        for rep, value in zip(classes, solution.particular):
            entries[rep] = value

        pinned = [classes[i] for i, _ in solution.pinned_report]
        pinning.extend(pinned)

        _logger.info(
            f"Size {k}: {len(classes)} unknowns, {len(records)} equations, "
            f"nullspace dimension {solution.dimension}, "
            f"{len(solution.determined())} determined."
        )

        if pinned:
            _logger.info(f"Size {k}: pinned {len(pinned)} free coefficients to 0.")

    return CoefficientTable(
        ambient=ambient, entries=entries,
        provenance=Provenance.PIPELINE_INTERPOLATED, pinning=tuple(pinning)
    )

def _collect(task: tuple) -> list[DatumRecord | DiscardReport]:

    m, n, seed, index, precision, harvest, reference, redundancy = task

    matrix = random_matrix(m, n, matrix_rng(seed, index))

    if harvest:
        return harvest_data(
            matrix, precision, seed=index, reference=reference, redundancy=redundancy
        )

    return [
        collect_datum(
            matrix, precision, seed=index, reference=reference, redundancy=redundancy
        )
    ]

class Campaign:
    """A class to collect records with a worker pool and solve the coefficient table."""

    def __init__(self, config: RunConfig, dataset: Dataset = None) -> None:
        """
        Defines the attributes of the campaign.

        :param config: The run settings.
        :param dataset: The records collected so far.
        """

        self.config = config
        self.dataset = (
            dataset if dataset is not None else
            Dataset(ambient=config.ambient, seed=config.seed)
        )

        self.discarded: list[DiscardReport] = []
        self.next_index = self.dataset.next_seed
        self.reference = (
            None if config.m == config.n else self.dataset.reference_ratio()
        )

    @classmethod
    def resume(cls, config: RunConfig) -> Self:
        """
        Creates a campaign from the records already stored for the run.

        :param config: The run settings.

        :return: The campaign.
        """

        if config.dataset_path.exists():
            dataset = dataset_load(config.dataset_path, ambient=config.ambient)

            _logger.info(f"Resuming {config.m}x{config.n} with {len(dataset)} records.")

        else:
            dataset = None

        return cls(config=config, dataset=dataset)

    def required(self, limit: int = DEFAULT_WORK_LIMIT) -> int:
        """
        Returns the number of records the largest system needs.

        :param limit: The enumeration work limit per size.

        :return: The record count.
        """

        m, n = self.config.ambient

        return max(
            required_records(len(enumerate_classes(m, n, k, limit=limit)), self.config.margin)
            for k in range(basis_size(m, n) + 1)
        )

    def _accept(self, result: DatumRecord | DiscardReport, writer: DatasetWriter) -> None:

        if isinstance(result, DiscardReport):
            _logger.info(str(result))

            self.discarded.append(result)
            writer.write(result)

            return

        if result.matrix.rows != result.matrix.cols:
            ratio = leading_ratio(result.matrix, result.polynomial)

            if self.reference is None:
                self.reference = ratio

            elif ratio != self.reference:
                report = DiscardReport(
                    matrix=result.matrix, seed=result.seed,
                    reason=f"leading ratio {ratio} differs from {self.reference}"
                )

                _logger.info(str(report))

                self.discarded.append(report)
                writer.write(report)

                return

        _logger.info(f"Accepted matrix {result.seed} with degree {result.degree}.")

        writer.write(result)

    def tasks(self, count: int) -> Iterable[tuple]:
        """
        Returns the work items of the next matrices.

        :param count: The number of matrices.

        :return: The work items.
        """

        config = self.config
        start = max(self.dataset.next_seed, self.next_index)
        self.next_index = start + count

        return [
            (
                config.m, config.n, config.seed, index, config.precision,
                config.harvest, self.reference, config.redundancy
            )
            for index in range(start, start + count)
        ]

    def collect(self, count: int = None, progress: bool = True) -> Dataset:
        """
        Collects records from new random matrices.

        :param count: The number of matrices, the configured count by default.
        :param progress: The value to show a progress bar.

        :return: The dataset.
        """

        config = self.config

        if count is None:
            count = config.count or self.required()

        config.directory.mkdir(parents=True, exist_ok=True)

        writer = DatasetWriter(
            dataset=self.dataset,
            path=config.dataset_path,
            handler=Handler(
                catch=False,
                exception_callback=lambda h: _logger.error(
                    f"The dataset writer of {config.m}x{config.n} stopped after an error."
                )
            )
        )

        writer.run(block=False)

        tasks = self.tasks(count)
        bar = tqdm(total=len(tasks), disable=not progress, desc=f"{config.m}x{config.n}")

        try:
            if config.workers == 1:
                for task in tasks:
                    for result in _collect(task):
                        self._accept(result, writer)

                    bar.update(1)

            else:
                with ProcessPoolExecutor(max_workers=config.workers) as executor:
                    futures = [executor.submit(_collect, task) for task in tasks]

                    for future in as_completed(futures):
                        for result in future.result():
                            self._accept(result, writer)

                        bar.update(1)

        finally:
            bar.close()
            writer.close()

        _logger.info(
            f"Collected {writer.written} records, discarded {len(self.discarded)}, "
            f"{len(self.dataset)} in total."
        )

        return self.dataset

    def solve(self, limit: int = DEFAULT_WORK_LIMIT) -> CoefficientTable:
        """
        Solves the table from the collected records and stores it.

        :param limit: The enumeration work limit per size.

        :return: The interpolated table.
        """

        table = solve_table(
            self.config.ambient, self.dataset, margin=self.config.margin, limit=limit
        )

        self.config.directory.mkdir(parents=True, exist_ok=True)

        table_dump(table, self.config.table_path)

        for check in table_identities(table):
            _logger.info(f"Identity {check.name}: {'passed' if check.passed else 'failed'}.")

        return table
