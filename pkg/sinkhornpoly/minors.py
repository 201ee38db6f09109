# minors.py

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from dataclasses import dataclass
from typing import Iterable, Iterator, Self, ClassVar

from sinkhornpoly.errors import DimensionError, DegenerateInputError
from sinkhornpoly.exact_linalg import ExactMatrix, det

__all__ = [
    "MinorSpec",
    "MinorSet",
    "MinorBasis",
    "MinorCache",
    "minor_basis",
    "basis_size",
    "delta_gamma",
    "monomial",
    "monomial_ratio",
    "swap_to_entry"
]

def _parse_indices(text: str) -> tuple[int, ...]:

    text = text.strip()

    if not (text.startswith("{") and text.endswith("}")):
        raise DimensionError(f"Index set must be written like {{2,3}}, got {text!r}.")

    body = text[1:-1].strip()

    try:
        return tuple(int(value) for value in body.split(",")) if body else ()

    except ValueError as e:
        raise DimensionError(f"Invalid index set: {text!r}.") from e

@dataclass(frozen=True)
class MinorSpec:
    """A minor specification (R, C) with R ⊆ {2..m} and C ⊆ {2..n} of equal size."""

    rows: tuple[int, ...]
    columns: tuple[int, ...]

    SEPARATOR: ClassVar[str] = ";"

    def __post_init__(self) -> None:

        rows = tuple(sorted(int(i) for i in self.rows))
        columns = tuple(sorted(int(j) for j in self.columns))

        if len(rows) != len(columns):
            raise DimensionError(
                f"Minor specification needs as many rows as columns, "
                f"got R={set(rows) or '{}'} and C={set(columns) or '{}'}."
            )

        if len(set(rows)) != len(rows) or len(set(columns)) != len(columns):
            raise DegenerateInputError(
                f"Minor specification has repeated indices: {rows}, {columns}."
            )

        if any(i < 2 for i in rows + columns):
            raise DimensionError(
                f"Minor specification indices start at 2, got {rows}, {columns}."
            )

        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", columns)

    @property
    def size(self) -> int:
        """
        Returns the number of rows (and columns) in the specification.

        :return: The size |R|.
        """

        return len(self.rows)

    def key(self) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        """
        Returns the sort key: size, then rows, then columns.

        :return: The sort key.
        """

        return self.size, self.rows, self.columns

    def fits(self, m: int, n: int) -> bool:
        """
        Checks if the specification lies inside D(m, n).

        :param m: The number of matrix rows.
        :param n: The number of matrix columns.

        :return: The validation value.
        """

        return all(i <= m for i in self.rows) and all(j <= n for j in self.columns)

    def validate(self, m: int, n: int) -> None:
        """
        Checks if the specification lies inside D(m, n), otherwise raises an error.

        :param m: The number of matrix rows.
        :param n: The number of matrix columns.
        """

        if not self.fits(m, n):
            raise DimensionError(
                f"Minor specification {self.encode()} is outside D({m}, {n})."
            )

    def transpose(self) -> Self:
        """
        Swaps the roles of rows and columns.

        :return: The transposed specification (C, R).
        """

        return type(self)(rows=self.columns, columns=self.rows)

    def encode(self) -> str:
        """
        Encodes the specification as text, like "{2,3};{2,4}".

        :return: The canonical text.
        """

        return (
            "{" + ",".join(str(i) for i in self.rows) + "}" + self.SEPARATOR +
            "{" + ",".join(str(j) for j in self.columns) + "}"
        )

    @classmethod
    def decode(cls, text: str) -> Self:
        """
        Decodes a specification from its canonical text.

        :param text: The text to decode.

        :return: The specification.
        """

        parts = text.strip().split(cls.SEPARATOR)

        if len(parts) != 2:
            raise DimensionError(f"Invalid minor specification text: {text!r}.")

        return cls(rows=_parse_indices(parts[0]), columns=_parse_indices(parts[1]))

    def __str__(self) -> str:

        return self.encode()

@dataclass(frozen=True)
class MinorSet:
    """A set S of distinct minor specifications, kept in basis order."""

    members: tuple[MinorSpec, ...] = ()

    JOIN: ClassVar[str] = " | "
    EMPTY: ClassVar[str] = "-"

    def __post_init__(self) -> None:

        members = tuple(sorted(set(self.members), key=MinorSpec.key))

        if len(members) != len(self.members):
            raise DegenerateInputError(
                f"Subset has repeated specifications: "
                f"{', '.join(spec.encode() for spec in self.members)}."
            )

        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, *specs: MinorSpec | str) -> Self:
        """
        Creates a subset from specifications or their encodings.

        :param specs: The members.

        :return: The subset.
        """

        return cls(
            tuple(
                MinorSpec.decode(spec) if isinstance(spec, str) else spec
                for spec in specs
            )
        )

    def __len__(self) -> int:

        return len(self.members)

    def __iter__(self) -> Iterator[MinorSpec]:

        return iter(self.members)

    def __contains__(self, spec: MinorSpec) -> bool:

        return spec in self.members

    def transpose(self) -> Self:
        """
        Transposes every member.

        :return: The transposed subset.
        """

        return type(self)(tuple(spec.transpose() for spec in self.members))

    def validate(self, m: int, n: int) -> None:
        """
        Checks if every member lies inside D(m, n), otherwise raises an error.

        :param m: The number of matrix rows.
        :param n: The number of matrix columns.
        """

        for spec in self.members:
            spec.validate(m, n)

    def encode(self) -> str:
        """
        Encodes the subset as text, members joined by " | ", "-" when empty.

        :return: The canonical text.
        """

        if not self.members:
            return self.EMPTY

        return self.JOIN.join(spec.encode() for spec in self.members)

    @classmethod
    def decode(cls, text: str) -> Self:
        """
        Decodes a subset from its canonical text.

        :param text: The text to decode.

        :return: The subset.
        """

        text = text.strip()

        if text == cls.EMPTY or not text:
            return cls()

        return cls(tuple(MinorSpec.decode(part) for part in text.split(cls.JOIN.strip())))

    def __str__(self) -> str:

        return self.encode()

def basis_size(m: int, n: int) -> int:
    """
    Returns |D(m, n)| = C(m + n - 2, m - 1).

    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: The number of minor specifications.
    """

    return math.comb(m + n - 2, m - 1)

class MinorBasis:
    """The ordered set D(m, n) of all minor specifications avoiding row 1 and column 1."""

    def __init__(self, m: int, n: int) -> None:
        """
        Defines the attributes of the basis.

        :param m: The number of matrix rows.
        :param n: The number of matrix columns.
        """

        if m < 1 or n < 1:
            raise DimensionError(f"Basis needs positive dimensions, got ({m}, {n}).")

        self.m = m
        self.n = n

        specs = []

        for size in range(min(m, n)):
            for rows in combinations(range(2, m + 1), size):
                for columns in combinations(range(2, n + 1), size):
                    specs.append(MinorSpec(rows=rows, columns=columns))

        self._specs = tuple(specs)
        self._index = {spec: i for i, spec in enumerate(self._specs)}

    @property
    def specs(self) -> tuple[MinorSpec, ...]:
        """
        Returns the specifications in basis order.

        :return: The ordered specifications.
        """

        return self._specs

    @property
    def ambient(self) -> tuple[int, int]:
        """
        Returns the matrix shape of the basis.

        :return: The pair (m, n).
        """

        return self.m, self.n

    def __len__(self) -> int:

        return len(self._specs)

    def __iter__(self) -> Iterator[MinorSpec]:

        return iter(self._specs)

    def index(self, spec: MinorSpec) -> int:
        """
        Returns the position of a specification in the basis.

        :param spec: The specification.

        :return: The basis index.
        """

        try:
            return self._index[spec]

        except KeyError:
            raise DimensionError(
                f"Minor specification {spec.encode()} is outside D({self.m}, {self.n})."
            )

    def full(self) -> MinorSet:
        """
        Returns the whole basis as a subset.

        :return: The subset D(m, n).
        """

        return MinorSet(self._specs)

    def complement(self, subset: MinorSet) -> MinorSet:
        """
        Returns D(m, n) without the members of the subset.

        :param subset: The subset.

        :return: The complement.
        """

        subset.validate(self.m, self.n)

        return MinorSet(tuple(spec for spec in self._specs if spec not in subset))

    def mask(self, subset: MinorSet | Iterable[MinorSpec]) -> int:
        """
        Encodes a subset as a bit mask over the basis indices.

        :param subset: The subset.

        :return: The bit mask.
        """

        value = 0

        for spec in subset:
            value |= 1 << self.index(spec)

        return value

    def from_mask(self, mask: int) -> MinorSet:
        """
        Decodes a bit mask over the basis indices into a subset.

        :param mask: The bit mask.

        :return: The subset.
        """

        return MinorSet(
            tuple(spec for i, spec in enumerate(self._specs) if mask >> i & 1)
        )

    def __repr__(self) -> str:

        return f"{type(self).__name__}(m={self.m}, n={self.n}, size={len(self)})"

@lru_cache(maxsize=None)
def minor_basis(m: int, n: int) -> MinorBasis:
    """
    Returns the basis D(m, n) ordered by size, then rows, then columns.

    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: The basis.
    """

    return MinorBasis(m, n)

def delta_gamma(matrix: ExactMatrix, spec: MinorSpec) -> tuple[Fraction, Fraction]:
    """
    Evaluates Δ(R, C) = det A[{1} ∪ R, {1} ∪ C] and Γ(R, C) = a11·det A[R, C].

    :param matrix: The matrix A.
    :param spec: The minor specification (R, C).

    :return: The pair (Δ, Γ).
    """

    spec.validate(matrix.rows, matrix.cols)

    rows = [i - 1 for i in spec.rows]
    columns = [j - 1 for j in spec.columns]

    delta = det(matrix.submatrix([0] + rows, [0] + columns))
    gamma = matrix[0, 0] * det(matrix.submatrix(rows, columns))

    return delta, gamma

class MinorCache:
    """The Δ and Γ values of one matrix over its whole basis, evaluated once."""

    def __init__(self, matrix: ExactMatrix) -> None:
        """
        Defines the attributes of the cache.

        :param matrix: The matrix A.
        """

        self.matrix = matrix
        self.basis = minor_basis(matrix.rows, matrix.cols)

        self._deltas: list[Fraction] = []
        self._gammas: list[Fraction] = []

        for spec in self.basis:
            delta, gamma = delta_gamma(matrix, spec)

            self._deltas.append(delta)
            self._gammas.append(gamma)

        self._ratios: tuple[Fraction, ...] | None = None

    def delta(self, spec: MinorSpec) -> Fraction:
        """
        Returns Δ of a specification.

        :param spec: The specification.

        :return: The Δ minor.
        """

        return self._deltas[self.basis.index(spec)]

    def gamma(self, spec: MinorSpec) -> Fraction:
        """
        Returns Γ of a specification.

        :param spec: The specification.

        :return: The Γ minor.
        """

        return self._gammas[self.basis.index(spec)]

    def has_zero_minor(self) -> bool:
        """
        Checks if any Δ or Γ minor of the matrix vanishes.

        :return: The validation value.
        """

        return any(value == 0 for value in self._deltas + self._gammas)

    def monomial(self, subset: MinorSet) -> Fraction:
        """
        Returns M(S), the product of Δ over S and Γ over the complement.

        :param subset: The subset S.

        :return: The monomial value.
        """

        return self.masked_monomial(self.basis.mask(subset))

    @property
    def ratios(self) -> tuple[Fraction, ...]:
        """
        Returns the Δ/Γ ratio of every basis specification.

        :return: The ratios in basis order.
        """

        if self._ratios is None:
            for spec, gamma in zip(self.basis, self._gammas):
                if gamma == 0:
                    raise ZeroDivisionError(
                        f"Γ minor of {spec.encode()} is zero, "
                        f"monomial ratios are undefined for this matrix."
                    )

            self._ratios = tuple(
                delta / gamma for delta, gamma in zip(self._deltas, self._gammas)
            )

        return self._ratios

    def ratio(self, subset: MinorSet | int) -> Fraction:
        """
        Returns M(S)/M({}) as the product of Δ/Γ over S.

        :param subset: The subset S, or its basis mask.

        :return: The monomial ratio.
        """

        ratios = self.ratios
        mask = subset if isinstance(subset, int) else self.basis.mask(subset)
        value = Fraction(1)
        i = 0

        while mask:
            if mask & 1:
                value *= ratios[i]

            mask >>= 1
            i += 1

        return value

    def masked_monomial(self, mask: int) -> Fraction:
        """
        Returns M(S) for a subset given by its basis mask.

        :param mask: The bit mask of S.

        :return: The monomial value.
        """

        value = Fraction(1)

        for i in range(len(self.basis)):
            value *= self._deltas[i] if mask >> i & 1 else self._gammas[i]

        return value

def monomial(matrix: ExactMatrix, subset: MinorSet) -> Fraction:
    """
    Returns M(S), the product of Δ over S and Γ over D(m, n) ∖ S.

    :param matrix: The matrix A.
    :param subset: The subset S.

    :return: The monomial value.
    """

    return MinorCache(matrix).monomial(subset)

def monomial_ratio(matrix: ExactMatrix, subset: MinorSet) -> Fraction:
    """
    Returns M(S)/M({}) as the product of Δ/Γ ratios over S only.

    :param matrix: The matrix A, with no vanishing Γ minor.
    :param subset: The subset S.

    :return: The monomial ratio.
    """

    return MinorCache(matrix).ratio(subset)

def swap_to_entry(matrix: ExactMatrix, i: int, j: int) -> ExactMatrix:
    """
    Moves entry (i, j) to position (1, 1) by swapping row 1 with row i and column 1 with column j.

    The (i, j) entry of the scaling limit of A equals the (1, 1) entry
    of the scaling limit of the swapped matrix.

    :param matrix: The matrix A.
    :param i: The one-based row index.
    :param j: The one-based column index.

    :return: The swapped matrix.
    """

    if not (1 <= i <= matrix.rows and 1 <= j <= matrix.cols):
        raise DimensionError(
            f"Entry ({i}, {j}) is outside a {matrix.rows}x{matrix.cols} matrix."
        )

    return matrix.swap_rows(0, i - 1).swap_columns(0, j - 1)
