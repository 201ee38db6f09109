# exact_linalg.py

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Self, Sequence, ClassVar

from sinkhornpoly.errors import DimensionError, DomainError, InconsistentSystemError

__all__ = [
    "Rational",
    "to_rational",
    "ExactMatrix",
    "AffineSolution",
    "det",
    "bareiss_det",
    "solve_affine"
]

Rational = Fraction

def to_rational(value: int | str | Fraction) -> Fraction:
    """
    Converts an integer, a fraction or a decimal/fraction text into an exact rational.

    :param value: The value to convert.

    :return: The exact rational value.
    """

    if isinstance(value, float):
        raise DomainError(
            f"Floating point value {value!r} cannot be used as an exact rational, "
            f"pass an integer, a Fraction or a text like '3/4'."
        )

    try:
        return Fraction(value)

    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"Invalid rational value: {value!r}.") from e

@dataclass(frozen=True)
class ExactMatrix:
    """An immutable matrix of exact rationals, stored row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...] = field(repr=False)

    ROWS: ClassVar[str] = "rows"
    COLS: ClassVar[str] = "cols"
    ENTRIES: ClassVar[str] = "entries"

    def __post_init__(self) -> None:

        if self.rows < 0 or self.cols < 0:
            raise DimensionError(
                f"Matrix dimensions must be non-negative, got {self.rows}x{self.cols}."
            )

        entries = tuple(to_rational(value) for value in self.entries)

        if len(entries) != self.rows * self.cols:
            raise DimensionError(
                f"A {self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(entries)}."
            )

        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int | str | Fraction]]) -> Self:
        """
        Creates a matrix from nested row sequences.

        :param rows: The rows of the matrix.

        :return: The new matrix.
        """

        rows = [list(row) for row in rows]
        width = len(rows[0]) if rows else 0

        for i, row in enumerate(rows):
            if len(row) != width:
                raise DimensionError(
                    f"Row {i + 1} has {len(row)} entries, expected {width}."
                )

        return cls(
            rows=len(rows), cols=width,
            entries=tuple(value for row in rows for value in row)
        )

    @classmethod
    def identity(cls, size: int) -> Self:
        """
        Creates an identity matrix.

        :param size: The number of rows and columns.

        :return: The identity matrix.
        """

        return cls.from_rows(
            [[int(i == j) for j in range(size)] for i in range(size)]
        ) if size else cls(rows=0, cols=0, entries=())

    @classmethod
    def parse(cls, text: str) -> Self:
        """
        Parses the matrix text format: a "m n" header line, then m rows of n values.

        :param text: The text to parse.

        :return: The parsed matrix.
        """

        lines = [
            line.split("#")[0].split()
            for line in text.splitlines()
        ]
        lines = [line for line in lines if line]

        if not lines or len(lines[0]) != 2:
            raise DimensionError("Matrix text must start with an 'm n' header line.")

        try:
            m, n = (int(value) for value in lines[0])

        except ValueError as e:
            raise DimensionError(f"Invalid matrix header: {' '.join(lines[0])}") from e

        matrix = cls.from_rows(lines[1:]) if len(lines) > 1 else None

        if matrix is None or (matrix.rows, matrix.cols) != (m, n):
            raise DimensionError(
                f"Matrix header declares {m}x{n} but the body is "
                f"{matrix.rows if matrix else 0}x{matrix.cols if matrix else 0}."
            )

        return matrix

    def format(self) -> str:
        """
        Formats the matrix in the text format read by parse.

        :return: The matrix text.
        """

        return "\n".join(
            [f"{self.rows} {self.cols}"] +
            [" ".join(str(value) for value in row) for row in self.to_rows()]
        ) + "\n"

    @classmethod
    def load(cls, data: dict[str, ...]) -> Self:
        """
        Loads the data into a new matrix object.

        :param data: The data to load.

        :return: The new matrix object.
        """

        return cls(
            rows=data[cls.ROWS],
            cols=data[cls.COLS],
            entries=tuple(data[cls.ENTRIES])
        )

    def dump(self) -> dict[str, ...]:
        """
        Dumps the data of the object.

        :return: The data of the object.
        """

        return {
            self.ROWS: self.rows,
            self.COLS: self.cols,
            self.ENTRIES: [str(value) for value in self.entries]
        }

    @property
    def shape(self) -> tuple[int, int]:
        """
        Returns the shape of the matrix.

        :return: The pair (rows, cols).
        """

        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        """
        Checks if the matrix is square.

        :return: The validation value.
        """

        return self.rows == self.cols

    @property
    def is_positive(self) -> bool:
        """
        Checks if every entry is strictly positive.

        :return: The validation value.
        """

        return all(value > 0 for value in self.entries)

    @property
    def is_integral(self) -> bool:
        """
        Checks if every entry is an integer.

        :return: The validation value.
        """

        return all(value.denominator == 1 for value in self.entries)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:

        i, j = key

        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise DimensionError(
                f"Index ({i}, {j}) is outside a {self.rows}x{self.cols} matrix."
            )

        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        """
        Returns a row of the matrix.

        :param i: The zero-based row index.

        :return: The row entries.
        """

        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        """
        Returns a column of the matrix.

        :param j: The zero-based column index.

        :return: The column entries.
        """

        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[Fraction]]:
        """
        Returns the matrix as nested lists.

        :return: The rows of the matrix.
        """

        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Self:
        """
        Returns the submatrix on the given zero-based rows and columns.

        :param rows: The row indices.
        :param cols: The column indices.

        :return: The submatrix.
        """

        for i in rows:
            if not 0 <= i < self.rows:
                raise DimensionError(f"Row index {i} is outside {self.rows} rows.")

        for j in cols:
            if not 0 <= j < self.cols:
                raise DimensionError(f"Column index {j} is outside {self.cols} columns.")

        return type(self)(
            rows=len(rows), cols=len(cols),
            entries=tuple(self.entries[i * self.cols + j] for i in rows for j in cols)
        )

    def transpose(self) -> Self:
        """
        Returns the transposed matrix.

        :return: The transpose.
        """

        return type(self)(
            rows=self.cols, cols=self.rows,
            entries=tuple(
                self.entries[i * self.cols + j]
                for j in range(self.cols) for i in range(self.rows)
            )
        )

    def scale(self, factor: int | Fraction) -> Self:
        """
        Multiplies every entry by a rational factor.

        :param factor: The factor.

        :return: The scaled matrix.
        """

        factor = to_rational(factor)

        return type(self)(
            rows=self.rows, cols=self.cols,
            entries=tuple(value * factor for value in self.entries)
        )

    def scale_row(self, i: int, factor: int | Fraction) -> Self:
        """
        Multiplies a single row by a rational factor.

        :param i: The zero-based row index.
        :param factor: The factor.

        :return: The new matrix.
        """

        rows = self.to_rows()
        rows[i] = [value * to_rational(factor) for value in rows[i]]

        return type(self).from_rows(rows)

    def permute(self, rows: Sequence[int] = None, cols: Sequence[int] = None) -> Self:
        """
        Reorders rows and columns, row i of the result is row rows[i] of self.

        :param rows: The row order.
        :param cols: The column order.

        :return: The permuted matrix.
        """

        return self.submatrix(
            rows=list(rows) if rows is not None else list(range(self.rows)),
            cols=list(cols) if cols is not None else list(range(self.cols))
        )

    def swap_rows(self, i: int, j: int) -> Self:
        """
        Swaps two rows.

        :param i: The first zero-based row index.
        :param j: The second zero-based row index.

        :return: The new matrix.
        """

        order = list(range(self.rows))
        order[i], order[j] = order[j], order[i]

        return self.permute(rows=order)

    def swap_columns(self, i: int, j: int) -> Self:
        """
        Swaps two columns.

        :param i: The first zero-based column index.
        :param j: The second zero-based column index.

        :return: The new matrix.
        """

        order = list(range(self.cols))
        order[i], order[j] = order[j], order[i]

        return self.permute(cols=order)

    def __matmul__(self, other: Self) -> Self:

        if self.cols != other.rows:
            raise DimensionError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}."
            )

        return type(self)(
            rows=self.rows, cols=other.cols,
            entries=tuple(
                sum(
                    (self.entries[i * self.cols + k] * other.entries[k * other.cols + j]
                    for k in range(self.cols)),
                    Fraction(0)
                )
                for i in range(self.rows) for j in range(other.cols)
            )
        )

    def apply(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """
        Multiplies the matrix by a column vector.

        :param vector: The vector.

        :return: The product vector.
        """

        if len(vector) != self.cols:
            raise DimensionError(
                f"Cannot apply a {self.rows}x{self.cols} matrix to "
                f"a vector of length {len(vector)}."
            )

        return tuple(
            sum((a * b for a, b in zip(self.row(i), vector)), Fraction(0))
            for i in range(self.rows)
        )

def bareiss_det(rows: list[list[int]]) -> int:
    """
    Computes the determinant of an integer matrix by fraction-free elimination.

    The rows are modified in place.

    :param rows: The square integer matrix.

    :return: The determinant.
    """

    size = len(rows)

    if size == 0:
        return 1

    sign = 1
    previous = 1

    for p in range(size - 1):
        if rows[p][p] == 0:
            swap = next((i for i in range(p + 1, size) if rows[i][p] != 0), None)

            if swap is None:
                return 0

            rows[p], rows[swap] = rows[swap], rows[p]
            sign = -sign

        pivot = rows[p][p]

        for i in range(p + 1, size):
            factor = rows[i][p]
            row = rows[i]

            for j in range(p + 1, size):
                row[j] = (row[j] * pivot - factor * rows[p][j]) // previous

        previous = pivot

    return sign * rows[size - 1][size - 1]

def det(matrix: ExactMatrix) -> Fraction:
    """
    Computes the exact determinant of a square matrix.

    Each row is scaled to integers by the lcm of its denominators,
    the integer determinant is computed fraction-free and the scaling
    is divided out.

    :param matrix: The square matrix.

    :return: The determinant, 1 for the 0x0 matrix.
    """

    if not matrix.is_square:
        raise DimensionError(
            f"Determinant needs a square matrix, got {matrix.rows}x{matrix.cols}."
        )

    scale = 1
    rows = []

    for i in range(matrix.rows):
        row = matrix.row(i)
        denominator = math.lcm(*(value.denominator for value in row)) if row else 1
        scale *= denominator
        rows.append([int(value * denominator) for value in row])

    return Fraction(bareiss_det(rows), scale)

@dataclass(frozen=True)
class AffineSolution:
    """The exact solution set particular + span(nullspace_basis) of a linear system."""

    particular: tuple[Fraction, ...]
    nullspace_basis: tuple[tuple[Fraction, ...], ...] = ()
    pinned_report: tuple[tuple[int, Fraction], ...] = ()

    @property
    def dimension(self) -> int:
        """
        Returns the dimension of the solution space.

        :return: The nullspace dimension.
        """

        return len(self.nullspace_basis)

    @property
    def is_unique(self) -> bool:
        """
        Checks if the system has exactly one solution.

        :return: The validation value.
        """

        return not self.nullspace_basis

    def determined(self) -> tuple[int, ...]:
        """
        Returns the indices of the unknowns that take the same value in every solution.

        :return: The uniquely determined unknown indices.
        """

        return tuple(
            i for i in range(len(self.particular))
            if all(vector[i] == 0 for vector in self.nullspace_basis)
        )

    def member(self, parameters: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
        """
        Returns the solution particular + Σ parameters[i]·basis[i].

        :param parameters: One parameter per nullspace vector.

        :return: The solution vector.
        """

        if len(parameters) != len(self.nullspace_basis):
            raise DimensionError(
                f"Expected {len(self.nullspace_basis)} parameters, got {len(parameters)}."
            )

        values = list(self.particular)

        for t, vector in zip(parameters, self.nullspace_basis):
            for i, value in enumerate(vector):
                values[i] += to_rational(t) * value

        return tuple(values)

def solve_affine(matrix: ExactMatrix, vector: Sequence[int | Fraction]) -> AffineSolution:
    """
    Solves the system matrix·x = vector exactly.

    Pivots are chosen column by column as the first nonzero entry in
    the remaining rows, so the output is deterministic. Free variables
    are set to zero in the particular solution and listed in the pinned report.

    :param matrix: The coefficient matrix.
    :param vector: The right hand side.

    :return: The affine solution space.
    """

    if matrix.rows != len(vector):
        raise DimensionError(
            f"System has {matrix.rows} equations but the right hand side "
            f"has {len(vector)} entries."
        )

    n = matrix.cols
    rows = [
        list(matrix.row(i)) + [to_rational(vector[i])]
        for i in range(matrix.rows)
    ]
    origins = list(range(matrix.rows))
    pivots: list[int] = []
    rank = 0

    for c in range(n):
        if rank == len(rows):
            break

        pivot = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)

        if pivot is None:
            continue

        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        origins[rank], origins[pivot] = origins[pivot], origins[rank]

        lead = rows[rank][c]
        pivot_row = [value / lead for value in rows[rank]]
        rows[rank] = pivot_row
        tail = range(c, n + 1)

        for i, row in enumerate(rows):
            if i != rank and row[c] != 0:
                factor = row[c]

                for j in tail:
                    if pivot_row[j]:
                        row[j] -= factor * pivot_row[j]

        pivots.append(c)
        rank += 1

    for i in range(rank, len(rows)):
        if rows[i][n] != 0:
            raise InconsistentSystemError(
                f"Equation {origins[i]} is inconsistent with the others "
                f"(reduces to 0 = {rows[i][n]}).",
                row=origins[i]
            )

    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    particular = [Fraction(0)] * n

    for r, c in enumerate(pivots):
        particular[c] = rows[r][n]

    basis = []

    for f in free:
        solution = [Fraction(0)] * n
        solution[f] = Fraction(1)

        for r, c in enumerate(pivots):
            solution[c] = -rows[r][f]

        basis.append(tuple(solution))

    return AffineSolution(
        particular=tuple(particular),
        nullspace_basis=tuple(basis),
        pinned_report=tuple((f, Fraction(0)) for f in free)
    )
