# data.py

import random
import logging
from fractions import Fraction
from itertools import combinations
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Self, ClassVar

from sinkhornpoly.errors import (
    ConvergenceError, CorruptRecordError, DimensionError, GenerationError
)
from sinkhornpoly.exact_linalg import ExactMatrix, det
from sinkhornpoly.minors import MinorSet, MinorCache, basis_size, swap_to_entry
from sinkhornpoly.polynomials import IntPolynomial
from sinkhornpoly.scaling import sinkhorn_limit
from sinkhornpoly.recognition import (
    DEFAULT_REDUNDANCY, RecognitionFailure, RootCheck, minimal_polynomial, verify_root
)

__all__ = [
    "DatumRecord",
    "DiscardReport",
    "Dataset",
    "ENTRY_RANGE",
    "MAX_REJECTIONS",
    "matrix_rng",
    "has_zero_minor",
    "random_matrix",
    "leading_ratio",
    "collect_datum",
    "harvest_data"
]

_logger = logging.getLogger(__name__)

ENTRY_RANGE = (1, 20)
MAX_REJECTIONS = 10 ** 4

@dataclass(frozen=True)
class DatumRecord:
    """One recognized limit-entry polynomial of a random integer matrix."""

    matrix: ExactMatrix
    polynomial: IntPolynomial
    precision: int
    seed: int
    ratio_check: bool = True
    stability: bool = True

    SEPARATOR: ClassVar[str] = " | "
    RATIO: ClassVar[str] = "r"
    STABLE: ClassVar[str] = "s"
    NO_FLAGS: ClassVar[str] = "-"

    @property
    def degree(self) -> int:
        """
        Returns the degree of the recognized polynomial.

        :return: The degree.
        """

        return self.polynomial.degree

    @property
    def ambient(self) -> tuple[int, int]:
        """
        Returns the shape of the matrix.

        :return: The pair (m, n).
        """

        return self.matrix.shape

    @property
    def flags(self) -> str:
        """
        Returns the check flags as text.

        :return: "r" for the ratio check and "s" for stability, "-" for none.
        """

        return (
            (self.RATIO if self.ratio_check else "") +
            (self.STABLE if self.stability else "")
        ) or self.NO_FLAGS

    def encode(self) -> str:
        """
        Encodes the record as "m n | seed | entries | precision | polynomial | flags".

        :return: The record line, without a checksum.
        """

        return self.SEPARATOR.join(
            [
                f"{self.matrix.rows} {self.matrix.cols}",
                str(self.seed),
                " ".join(str(value) for value in self.matrix.entries),
                str(self.precision),
                self.polynomial.encode(),
                self.flags
            ]
        )

    @classmethod
    def decode(cls, text: str) -> Self:
        """
        Decodes a record line written by encode.

        :param text: The record line, without a checksum.

        :return: The record.
        """

        try:
            shape, seed, entries, precision, polynomial, flags = (
                text.strip().split(cls.SEPARATOR.strip())
            )
            m, n = (int(value) for value in shape.split())

            return cls(
                matrix=ExactMatrix(
                    rows=m, cols=n,
                    entries=tuple(Fraction(value) for value in entries.split())
                ),
                polynomial=IntPolynomial.parse(polynomial),
                precision=int(precision),
                seed=int(seed),
                ratio_check=cls.RATIO in flags,
                stability=cls.STABLE in flags
            )

        except ValueError as e:
            raise CorruptRecordError(f"Invalid record line: {text!r}") from e

    def verify(self, precision: int = None) -> RootCheck:
        """
        Checks the polynomial against the limit entry computed again.

        :param precision: The precision to check at, twice the recorded one by default.

        :return: The root check.
        """

        if precision is None:
            precision = 2 * self.precision

        return verify_root(self.polynomial, sinkhorn_limit(self.matrix, precision).top_left)

@dataclass(frozen=True)
class DiscardReport:
    """The reason a matrix produced no record."""

    matrix: ExactMatrix
    seed: int
    reason: str

    def __str__(self) -> str:

        return f"matrix {self.seed} discarded: {self.reason}"

@dataclass
class Dataset:
    """The append-only records collected for one ambient."""

    ambient: tuple[int, int]
    records: list[DatumRecord] = field(default_factory=list)
    seed: int = 0
    tried: int = -1

    def __post_init__(self) -> None:

        records = self.records
        self.records = []
        self._matrices: set[ExactMatrix] = set()

        for record in records:
            self.append(record)

    def __len__(self) -> int:

        return len(self.records)

    def __iter__(self) -> Iterator[DatumRecord]:

        return iter(self.records)

    def __contains__(self, matrix: ExactMatrix) -> bool:

        return matrix in self._matrices

    def append(self, record: DatumRecord) -> bool:
        """
        Appends a record, rejecting records for matrices already present.

        :param record: The record.

        :return: The value of the record being appended.
        """

        if record.ambient != self.ambient:
            raise DimensionError(
                f"A {record.ambient} record does not belong to a {self.ambient} dataset."
            )

        if record.matrix in self._matrices:
            _logger.warning(f"Rejected a duplicate record for matrix {record.seed}.")

            return False

        self._matrices.add(record.matrix)
        self.records.append(record)

        return True

    def extend(self, records: Iterable[DatumRecord]) -> int:
        """
        Appends records, rejecting duplicates.

        :param records: The records.

        :return: The number of records appended.
        """

        return sum(self.append(record) for record in records)

    def sorted(self) -> list[DatumRecord]:
        """
        Returns the records in seed order.

        :return: The sorted records.
        """

        return sorted(
            self.records,
            key=lambda record: (record.seed, tuple(record.matrix.entries))
        )

    def mark_tried(self, seed: int) -> None:
        """
        Marks a seed index as tried without a record.

        :param seed: The seed index of a discarded matrix.
        """

        self.tried = max(self.tried, seed)

    @property
    def next_seed(self) -> int:
        """
        Returns the first seed index after every record and every tried index.

        :return: The next seed index.
        """

        return max(
            max((record.seed for record in self.records), default=-1), self.tried
        ) + 1

    def reference_ratio(self) -> Fraction | None:
        """
        Returns leading·M({}) / (constant·M(D)) of the first record in seed order.

        :return: The ratio, or None for an empty dataset.
        """

        if not self.records:
            return None

        return leading_ratio(self.sorted()[0].matrix, self.sorted()[0].polynomial)

def matrix_rng(seed: int, index: int) -> random.Random:
    """
    Returns the random generator of one matrix in a seeded run.

    :param seed: The run seed.
    :param index: The matrix index.

    :return: The generator.
    """

    return random.Random(f"{seed}/{index}")

def has_zero_minor(matrix: ExactMatrix) -> bool:
    """
    Checks if any minor of any size of the matrix vanishes.

    :param matrix: The matrix.

    :return: The validation value.
    """

    for size in range(1, min(matrix.shape) + 1):
        for rows in combinations(range(matrix.rows), size):
            for cols in combinations(range(matrix.cols), size):
                if det(matrix.submatrix(rows, cols)) == 0:
                    return True

    return False

def random_matrix(m: int, n: int, rng: random.Random) -> ExactMatrix:
    """
    Draws an integer matrix with entries in 1..20 and no vanishing minor.

    :param m: The number of rows.
    :param n: The number of columns.
    :param rng: The random generator.

    :return: The matrix.
    """

    if m < 1 or n < 1:
        raise DimensionError(f"Matrix dimensions must be positive, got ({m}, {n}).")

    low, high = ENTRY_RANGE

    for _ in range(MAX_REJECTIONS):
        matrix = ExactMatrix.from_rows(
            [[rng.randint(low, high) for _ in range(n)] for _ in range(m)]
        )

        if not has_zero_minor(matrix):
            return matrix

    raise GenerationError(
        f"Rejected {MAX_REJECTIONS} consecutive {m}x{n} matrices for a vanishing minor."
    )

def leading_ratio(matrix: ExactMatrix | MinorCache, polynomial: IntPolynomial) -> Fraction:
    """
    Returns leading·M({}) / (constant·M(D)) for a recognized polynomial.

    The ratio is c_D, which is 1 for square matrices.

    :param matrix: The matrix, or its minor cache.
    :param polynomial: The recognized polynomial.

    :return: The ratio.
    """

    cache = matrix if isinstance(matrix, MinorCache) else MinorCache(matrix)

    return Fraction(polynomial.leading) * cache.monomial(MinorSet()) / (
        polynomial.constant * cache.monomial(cache.basis.full())
    )

def collect_datum(
        matrix: ExactMatrix,
        precision: int,
        seed: int = 0,
        entry: tuple[int, int] = (1, 1),
        reference: Fraction = None,
        redundancy: int = DEFAULT_REDUNDANCY
) -> DatumRecord | DiscardReport:
    """
    Recognizes the polynomial of one limit entry of a matrix and checks it.

    The entry is moved to the top left by row and column swaps. The
    matrix is discarded when recognition fails, when the degree is
    below |D(m, n)|, when the result is not stable or when the ratio
    check fails. Square matrices check against the ratio 1, rectangular
    ones against the reference when one is given.

    :param matrix: The positive integer matrix.
    :param precision: The working precision in bits.
    :param seed: The seed index of the matrix.
    :param entry: The one-based entry to recognize.
    :param reference: The expected leading ratio of rectangular matrices.
    :param redundancy: The number of extra powers searched.

    :return: The record, or the discard report.
    """

    if entry != (1, 1):
        matrix = swap_to_entry(matrix, *entry)

    m, n = matrix.shape
    degree = basis_size(m, n)

    try:
        limit = sinkhorn_limit(matrix, precision)

    except ConvergenceError as e:
        return DiscardReport(matrix=matrix, seed=seed, reason=str(e))

    result = minimal_polynomial(
        limit.top_left, degree,
        refine=lambda bits: sinkhorn_limit(matrix, bits).top_left.value,
        redundancy=redundancy
    )

    if isinstance(result, RecognitionFailure):
        return DiscardReport(matrix=matrix, seed=seed, reason=str(result))

    if result.degree < degree:
        return DiscardReport(
            matrix=matrix, seed=seed,
            reason=f"recognized degree {result.degree} is below {degree}"
        )

    if not result.stable:
        return DiscardReport(matrix=matrix, seed=seed, reason="recognition is not stable")

    if result.poly.constant == 0:
        return DiscardReport(matrix=matrix, seed=seed, reason="constant coefficient is zero")

    ratio = leading_ratio(matrix, result.poly)

    if m == n:
        reference = Fraction(1)

    if reference is not None and ratio != reference:
        return DiscardReport(
            matrix=matrix, seed=seed,
            reason=f"leading ratio {ratio} differs from {reference}"
        )

    return DatumRecord(
        matrix=matrix, polynomial=result.poly, precision=precision,
        seed=seed, ratio_check=True, stability=True
    )

def harvest_data(
        matrix: ExactMatrix,
        precision: int,
        seed: int = 0,
        reference: Fraction = None,
        redundancy: int = DEFAULT_REDUNDANCY
) -> list[DatumRecord | DiscardReport]:
    """
    Collects one datum per entry of a matrix.

    :param matrix: The positive integer matrix.
    :param precision: The working precision in bits.
    :param seed: The seed index of the matrix.
    :param reference: The expected leading ratio of rectangular matrices.
    :param redundancy: The number of extra powers searched.

    :return: The records and discard reports, one per entry.
    """

    return [
        collect_datum(
            matrix, precision, seed=seed, entry=(i, j),
            reference=reference, redundancy=redundancy
        )
        for i in range(1, matrix.rows + 1)
        for j in range(1, matrix.cols + 1)
    ]
