# scaling.py

import math
import logging
from fractions import Fraction
from dataclasses import dataclass, replace
from typing import Self, ClassVar

from mpmath import mp, mpf

from sinkhornpoly.errors import (
    ConvergenceError, DomainError, DimensionError, InconsistentTargetsError
)
from sinkhornpoly.exact_linalg import ExactMatrix, to_rational

__all__ = [
    "GUARD_BITS",
    "MIN_PRECISION",
    "PreciseValue",
    "FloatMatrix",
    "KruithofTargets",
    "ScalingResult",
    "to_mpf",
    "sinkhorn_limit",
    "kruithof_limit",
    "certified",
    "agreeing_digits",
    "format_decimal"
]

_logger = logging.getLogger(__name__)

GUARD_BITS = 64
MIN_PRECISION = 64

def to_mpf(value: int | Fraction, precision: int) -> mpf:
    """
    Rounds an exact rational to a binary float of the given precision.

    :param value: The exact value.
    :param precision: The precision in bits.

    :return: The correctly rounded float.
    """

    value = to_rational(value)

    with mp.workprec(precision):
        return mpf(value.numerator) / value.denominator

@dataclass(frozen=True)
class PreciseValue:
    """A real value carried with its binary precision."""

    value: mpf
    precision: int

    def __float__(self) -> float:

        return float(self.value)

    def digits(self) -> int:
        """
        Returns the number of decimal digits the precision represents.

        :return: The decimal digit count.
        """

        return int(self.precision * math.log10(2))

    def format(self, digits: int = None) -> str:
        """
        Formats the value with a "±" tail marker.

        :param digits: The number of significant digits, all by default.

        :return: The decimal text.
        """

        return format_decimal(self.value, self.digits() if digits is None else digits)

@dataclass(frozen=True)
class FloatMatrix:
    """A row-major matrix of binary floats sharing one precision."""

    rows: int
    cols: int
    entries: tuple[mpf, ...]
    precision: int

    def __post_init__(self) -> None:

        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"A {self.rows}x{self.cols} float matrix needs "
                f"{self.rows * self.cols} entries, got {len(self.entries)}."
            )

    def __getitem__(self, key: tuple[int, int]) -> mpf:

        i, j = key

        return self.entries[i * self.cols + j]

    def entry(self, i: int, j: int) -> PreciseValue:
        """
        Returns an entry with its precision.

        :param i: The zero-based row index.
        :param j: The zero-based column index.

        :return: The entry.
        """

        return PreciseValue(value=self[i, j], precision=self.precision)

    def row_sums(self) -> list[mpf]:
        """
        Returns the row sums.

        :return: The sums of every row.
        """

        with mp.workprec(self.precision):
            return [
                mp.fsum(self.entries[i * self.cols:(i + 1) * self.cols])
                for i in range(self.rows)
            ]

    def column_sums(self) -> list[mpf]:
        """
        Returns the column sums.

        :return: The sums of every column.
        """

        with mp.workprec(self.precision):
            return [mp.fsum(self.entries[j::self.cols]) for j in range(self.cols)]

    def transpose(self) -> Self:
        """
        Returns the transposed matrix.

        :return: The transpose.
        """

        return type(self)(
            rows=self.cols, cols=self.rows, precision=self.precision,
            entries=tuple(
                self.entries[i * self.cols + j]
                for j in range(self.cols) for i in range(self.rows)
            )
        )

@dataclass(frozen=True)
class KruithofTargets:
    """Positive target row sums V and column sums W with equal totals."""

    rows: tuple[Fraction, ...]
    columns: tuple[Fraction, ...]

    ROWS: ClassVar[str] = "rows"
    COLUMNS: ClassVar[str] = "columns"

    def __post_init__(self) -> None:

        rows = tuple(to_rational(value) for value in self.rows)
        columns = tuple(to_rational(value) for value in self.columns)

        if not rows or not columns:
            raise DimensionError("Targets need at least one row and one column.")

        for value in rows + columns:
            if value <= 0:
                raise DomainError(f"Target sums must be positive, got {value}.")

        if sum(rows) != sum(columns):
            raise InconsistentTargetsError(
                f"Row targets sum to {sum(rows)} but column targets sum to {sum(columns)}."
            )

        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", columns)

    @classmethod
    def sinkhorn(cls, m: int, n: int) -> Self:
        """
        Creates the Sinkhorn targets: rows sum to 1, columns to m/n.

        :param m: The number of matrix rows.
        :param n: The number of matrix columns.

        :return: The targets.
        """

        return cls(rows=(Fraction(1),) * m, columns=(Fraction(m, n),) * n)

    @classmethod
    def parse(cls, rows: str, columns: str) -> Self:
        """
        Parses whitespace separated row and column targets.

        :param rows: The row targets text.
        :param columns: The column targets text.

        :return: The targets.
        """

        return cls(
            rows=tuple(to_rational(value) for value in rows.split()),
            columns=tuple(to_rational(value) for value in columns.split())
        )

    @classmethod
    def load(cls, data: dict[str, ...]) -> Self:
        """
        Loads the data into a new targets object.

        :param data: The data to load.

        :return: The new targets object.
        """

        return cls(rows=tuple(data[cls.ROWS]), columns=tuple(data[cls.COLUMNS]))

    def dump(self) -> dict[str, ...]:
        """
        Dumps the data of the object.

        :return: The data of the object.
        """

        return {
            self.ROWS: [str(value) for value in self.rows],
            self.COLUMNS: [str(value) for value in self.columns]
        }

@dataclass(frozen=True)
class ScalingResult:
    """The limit of iterative scaling with its multipliers and accuracy."""

    limit: FloatMatrix
    row_multipliers: tuple[mpf, ...]
    col_multipliers: tuple[mpf, ...]
    iterations: int
    residual: PreciseValue
    certified_digits: int | None = None

    @property
    def precision(self) -> int:
        """
        Returns the working precision of the result.

        :return: The precision in bits.
        """

        return self.limit.precision

    @property
    def top_left(self) -> PreciseValue:
        """
        Returns the (1, 1) entry of the limit.

        :return: The top left entry.
        """

        return self.limit.entry(0, 0)

    def entry(self, i: int, j: int) -> PreciseValue:
        """
        Returns an entry of the limit by one-based indices.

        :param i: The one-based row index.
        :param j: The one-based column index.

        :return: The entry.
        """

        return self.limit.entry(i - 1, j - 1)

    def reconstruct(self, matrix: ExactMatrix) -> FloatMatrix:
        """
        Rebuilds diag(row_multipliers)·A·diag(col_multipliers).

        :param matrix: The scaled matrix A.

        :return: The reconstructed limit.
        """

        precision = self.precision

        with mp.workprec(precision):
            return FloatMatrix(
                rows=matrix.rows, cols=matrix.cols, precision=precision,
                entries=tuple(
                    self.row_multipliers[i] * to_mpf(matrix[i, j], precision) *
                    self.col_multipliers[j]
                    for i in range(matrix.rows) for j in range(matrix.cols)
                )
            )

def _validate_positive(matrix: ExactMatrix) -> None:

    if matrix.rows == 0 or matrix.cols == 0:
        raise DimensionError("Scaling needs a nonempty matrix.")

    for i in range(matrix.rows):
        for j in range(matrix.cols):
            if matrix[i, j] <= 0:
                raise DomainError(
                    f"Scaling needs positive entries, entry ({i + 1}, {j + 1}) "
                    f"is {matrix[i, j]}."
                )

def _scale(
        matrix: ExactMatrix,
        targets: KruithofTargets,
        precision: int,
        max_iterations: int = None
) -> ScalingResult:

    _validate_positive(matrix)

    if precision < MIN_PRECISION:
        raise DomainError(f"Precision must be at least {MIN_PRECISION} bits, got {precision}.")

    if len(targets.rows) != matrix.rows or len(targets.columns) != matrix.cols:
        raise DimensionError(
            f"Targets of shape {len(targets.rows)}x{len(targets.columns)} do not "
            f"fit a {matrix.rows}x{matrix.cols} matrix."
        )

    m, n = matrix.shape

    if max_iterations is None:
        max_iterations = 10 * precision

    with mp.workprec(precision):
        rows = [[to_mpf(matrix[i, j], precision) for j in range(n)] for i in range(m)]
        row_targets = [to_mpf(value, precision) for value in targets.rows]
        column_targets = [to_mpf(value, precision) for value in targets.columns]
        row_multipliers = [mpf(1)] * m
        col_multipliers = [mpf(1)] * n
        scale = max(1, max(max(targets.rows), max(targets.columns)))
        tolerance = mpf(2) ** (-(precision - GUARD_BITS)) * to_mpf(scale, precision)
        residual = mp.inf
        iteration = 0

        def result() -> ScalingResult:

            return ScalingResult(
                limit=FloatMatrix(
                    rows=m, cols=n, precision=precision,
                    entries=tuple(value for row in rows for value in row)
                ),
                row_multipliers=tuple(row_multipliers),
                col_multipliers=tuple(col_multipliers),
                iterations=iteration,
                residual=PreciseValue(value=residual, precision=precision)
            )

        for iteration in range(1, max_iterations + 1):
            for i in range(m):
                factor = row_targets[i] / mp.fsum(rows[i])
                rows[i] = [value * factor for value in rows[i]]
                row_multipliers[i] *= factor

            for j in range(n):
                factor = column_targets[j] / mp.fsum(rows[i][j] for i in range(m))

                for i in range(m):
                    rows[i][j] *= factor

                col_multipliers[j] *= factor

            residual = max(
                max(abs(mp.fsum(rows[i]) - row_targets[i]) for i in range(m)),
                max(
                    abs(mp.fsum(rows[i][j] for i in range(m)) - column_targets[j])
                    for j in range(n)
                )
            )

            if residual < tolerance:
                _logger.debug(
                    f"Scaling converged after {iteration} iterations "
                    f"at {precision} bits, residual {mp.nstr(residual, 5)}."
                )

                return result()

        best = result()

    _logger.warning(
        f"Scaling did not converge in {max_iterations} iterations at {precision} bits, "
        f"residual {mp.nstr(best.residual.value, 5)}."
    )

    raise ConvergenceError(
        f"Scaling did not converge in {max_iterations} iterations at "
        f"{precision} bits (residual {mp.nstr(best.residual.value, 5)}).",
        best=best
    )

def sinkhorn_limit(matrix: ExactMatrix, precision: int, max_iterations: int = None) -> ScalingResult:
    """
    Scales rows to sum 1 and columns to sum m/n alternately until the sums settle.

    Iteration stops when every row and column sum is within
    2^-(precision - 64) of its target.

    :param matrix: The positive matrix A.
    :param precision: The working precision in bits.
    :param max_iterations: The iteration cap, 10·precision by default.

    :return: The scaling result.
    """

    return _scale(
        matrix, KruithofTargets.sinkhorn(matrix.rows, matrix.cols),
        precision=precision, max_iterations=max_iterations
    )

def kruithof_limit(
        matrix: ExactMatrix,
        targets: KruithofTargets,
        precision: int,
        max_iterations: int = None
) -> ScalingResult:
    """
    Scales rows and columns alternately towards arbitrary positive target sums.

    The tolerance is 2^-(precision - 64) relative to the largest target.

    :param matrix: The positive matrix A.
    :param targets: The target row and column sums.
    :param precision: The working precision in bits.
    :param max_iterations: The iteration cap, 10·precision by default.

    :return: The scaling result.
    """

    return _scale(matrix, targets, precision=precision, max_iterations=max_iterations)

def agreeing_digits(first: mpf, second: mpf, precision: int) -> int:
    """
    Counts the leading decimal digits on which two values agree.

    :param first: The lower precision value.
    :param second: The higher precision value.
    :param precision: The precision of the lower value in bits.

    :return: The number of agreeing significant digits.
    """

    full = int(precision * math.log10(2))

    with mp.workprec(2 * precision):
        difference = abs(first - second)

        if difference == 0:
            return full

        magnitude = max(abs(second), mpf(2) ** (-precision))
        digits = int(mp.floor(-mp.log10(difference / magnitude)))

    return max(0, min(full, digits))

def certified(
        matrix: ExactMatrix,
        precision: int,
        targets: KruithofTargets = None
) -> ScalingResult:
    """
    Scales at precision and at twice the precision and counts the agreeing digits.

    :param matrix: The positive matrix A.
    :param precision: The working precision in bits.
    :param targets: Kruithof targets, the Sinkhorn ones by default.

    :return: The result at precision, with certified digits set.
    """

    if targets is None:
        targets = KruithofTargets.sinkhorn(matrix.rows, matrix.cols)

    low = _scale(matrix, targets, precision=precision)
    high = _scale(matrix, targets, precision=2 * precision)

    digits = min(
        agreeing_digits(a, b, precision)
        for a, b in zip(low.limit.entries, high.limit.entries)
    )

    return replace(low, certified_digits=digits)

def format_decimal(value: mpf, digits: int) -> str:
    """
    Formats a value to some significant digits with a "±" tail marker.

    :param value: The value.
    :param digits: The number of significant digits.

    :return: The decimal text.
    """

    digits = max(1, digits)

    with mp.workdps(digits + 10):
        return f"{mp.nstr(value, digits, strip_zeros=False)}±"
