# tables.py

import math
import logging
from enum import Enum
from pathlib import Path
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Sequence, ClassVar

from sympy import Poly, Rational as SympyRational, Symbol, QQ

from sinkhornpoly.errors import (
    DegenerateInputError, DimensionError, DomainError, UnsupportedAmbientError
)
from sinkhornpoly.exact_linalg import ExactMatrix, to_rational
from sinkhornpoly.minors import MinorSpec, MinorSet, MinorCache, minor_basis
from sinkhornpoly.polynomials import IntPolynomial, RationalPolynomial, primitive_part
from sinkhornpoly.symmetry import (
    DEFAULT_WORK_LIMIT, canonical_form, class_rep, class_sum, dual_subset,
    enumerate_classes
)
from sinkhornpoly.links import SignStore, conjectured_coefficient
from sinkhornpoly.scaling import sinkhorn_limit
from sinkhornpoly.recognition import RootCheck, verify_root

__all__ = [
    "Provenance",
    "CoefficientTable",
    "TablePolynomial",
    "IdentityCheck",
    "Relation",
    "TABLES_PATH",
    "THREE_BY_THREE_RELATION",
    "THREE_BY_FOUR_RELATION",
    "builtin_table",
    "table_file",
    "install_table",
    "transpose_table",
    "conjectured_table",
    "polynomial_for",
    "degenerate_3x3",
    "degenerate_3x3_class_sums",
    "table_identities",
    "verify_polynomial",
    "table_load",
    "table_dump",
    "power_target",
    "relation_residual"
]

_logger = logging.getLogger(__name__)

TABLES_PATH = Path(__file__).parent / "data" / "tables"

class Provenance(Enum):
    """Where the values of a coefficient table come from."""

    PROVED = "proved"
    CONJECTURED_FORM = "conjectured"
    PIPELINE_INTERPOLATED = "interpolated"

@dataclass(frozen=True)
class CoefficientTable:
    """The coefficients c_S(m, n), one per equivalence class of subsets of D(m, n)."""

    ambient: tuple[int, int]
    entries: dict[MinorSet, Fraction]
    provenance: Provenance
    pinning: tuple[MinorSet, ...] = ()
    _sizes: dict[MinorSet, int] = field(default_factory=dict, compare=False, repr=False)

    SEPARATOR: ClassVar[str] = "\t"
    PINNED: ClassVar[str] = "# pinned"

    def __post_init__(self) -> None:

        if self.entries.get(MinorSet(), Fraction(1)) != 1:
            raise DomainError(
                f"A coefficient table needs c_{{}} = 1, got {self.entries[MinorSet()]}."
            )

    @property
    def degree(self) -> int:
        """
        Returns the size of D(m, n), the degree of the table polynomials.

        :return: The degree |D(m, n)|.
        """

        return len(minor_basis(*self.ambient))

    def __len__(self) -> int:

        return len(self.entries)

    def __contains__(self, subset: MinorSet) -> bool:

        return canonical_form(subset, *self.ambient) in self.entries

    def __getitem__(self, subset: MinorSet) -> Fraction:

        return self.coefficient(subset)

    def coefficient(self, subset: MinorSet) -> Fraction:
        """
        Returns c_S for any member of a class.

        :param subset: The subset S.

        :return: The coefficient of its class, zero when the table has none.
        """

        return self.entries.get(canonical_form(subset, *self.ambient), Fraction(0))

    def classes(self, k: int = None) -> list[MinorSet]:
        """
        Returns the class representatives in the table.

        :param k: The subset size to select, all sizes by default.

        :return: The representatives, sorted by size and encoding.
        """

        return sorted(
            (rep for rep in self.entries if k is None or len(rep) == k),
            key=lambda rep: (len(rep), rep.encode())
        )

    def class_size(self, rep: MinorSet) -> int:
        """
        Returns the number of subsets in the class of a representative.

        :param rep: The representative.

        :return: The orbit size.
        """

        if rep not in self._sizes:
            self._sizes[rep] = class_rep(rep, *self.ambient).size

        return self._sizes[rep]

    def power_sum(self) -> RationalPolynomial:
        """
        Returns Σ_S c_S·x^|S| over all subsets S, each class counted with its size.

        :return: The power sum polynomial.
        """

        coefficients = [Fraction(0)] * (self.degree + 1)

        for rep, value in self.entries.items():
            if value:
                coefficients[len(rep)] += value * self.class_size(rep)

        return RationalPolynomial(tuple(coefficients))

    def is_complete(self, limit: int = DEFAULT_WORK_LIMIT) -> bool:
        """
        Checks if every class of every size has an entry.

        :param limit: The enumeration work limit.

        :return: The validation value.
        """

        return all(
            rep.rep in self.entries
            for k in range(self.degree + 1)
            for rep in enumerate_classes(*self.ambient, k, limit=limit)
        )

@dataclass(frozen=True)
class TablePolynomial:
    """The polynomial a table gives for a matrix, exact and primitive."""

    exact: RationalPolynomial
    primitive: IntPolynomial | None

    @property
    def degenerate(self) -> bool:
        """
        Checks if the polynomial vanishes identically.

        :return: The validation value.
        """

        return self.exact.is_zero

@dataclass(frozen=True)
class IdentityCheck:
    """The outcome of one table-level identity."""

    name: str
    passed: bool
    detail: str = ""

    def __bool__(self) -> bool:

        return self.passed

@dataclass(frozen=True)
class Relation:
    """An exact linear relation between monomials or class sums of a matrix."""

    name: str
    ambient: tuple[int, int]
    lhs: tuple[tuple[int, MinorSet], ...]
    rhs: tuple[tuple[int, MinorSet], ...]
    class_sums: bool = False

def _spec(rows: Sequence[int], columns: Sequence[int]) -> MinorSpec:

    return MinorSpec(rows=tuple(rows), columns=tuple(columns))

def _table(
        ambient: tuple[int, int],
        values: Iterable[tuple[MinorSet, Fraction | int]],
        provenance: Provenance,
        complete: bool = True
) -> CoefficientTable:

    entries = {}

    for subset, value in values:
        entries[canonical_form(subset, *ambient)] = Fraction(value)

    if complete:
        for k in range(len(minor_basis(*ambient)) + 1):
            for rep in enumerate_classes(*ambient, k):
                entries.setdefault(rep.rep, Fraction(0))

    return CoefficientTable(ambient=ambient, entries=entries, provenance=provenance)

def _line_table(m: int, n: int) -> CoefficientTable:

    return _table(
        (m, n), [(MinorSet(), 1), (MinorSet.of(_spec((), ())), -n)],
        Provenance.PROVED
    )

def _two_by_n_table(n: int) -> CoefficientTable:

    empty = _spec((), ())
    singles = [_spec((2,), (j,)) for j in range(2, n + 1)]
    values = []

    for k in range(1, n + 1):
        values.append(
            (
                MinorSet((empty, *singles[:k - 1])),
                Fraction(-n) ** (k - 1) * (2 * k - 2 * n - 2) / 2 ** k
            )
        )

    for k in range(0, n):
        values.append(
            (MinorSet(tuple(singles[:k])), Fraction(-n) ** (k - 1) * (2 * k - n) / 2 ** k)
        )

    return _table(
        (2, n), values,
        Provenance.PROVED if n == 2 else Provenance.CONJECTURED_FORM
    )

def _three_by_three_table() -> CoefficientTable:

    e = _spec((), ())
    a = _spec((2,), (2,))
    b = _spec((2,), (3,))
    c = _spec((3,), (2,))
    d = _spec((3,), (3,))
    f = _spec((2, 3), (2, 3))

    values = [
        ((), 1),
        ((e,), -3), ((a,), -1), ((f,), 1),
        ((e, a), 4), ((e, f), -3), ((a, d), 1), ((a, b), 0), ((a, f), 0),
        ((e, a, b), -4), ((e, a, d), -5), ((e, a, f), 1), ((a, b, c), 1),
        ((a, d, f), -1), ((a, b, f), 0),
        ((e, a, b, c), 4), ((e, a, d, f), 1), ((a, b, c, d), -3),
        ((e, a, b, f), 0), ((a, b, c, f), 0),
        ((e, a, b, c, d), -3), ((e, a, b, c, f), -1), ((a, b, c, d, f), 1),
        ((e, a, b, c, d, f), 1)
    ]

    return _table(
        (3, 3), [(MinorSet(specs), value) for specs, value in values],
        Provenance.PROVED
    )

def transpose_table(table: CoefficientTable) -> CoefficientTable:
    """
    Moves a table from (m, n) to (n, m) by m^|S|·c_S(m, n) = n^|S|·c_Sᵀ(n, m).

    :param table: The table for (m, n).

    :return: The table for (n, m).
    """

    m, n = table.ambient

    return CoefficientTable(
        ambient=(n, m),
        entries={
            canonical_form(rep.transpose(), n, m): value * Fraction(m, n) ** len(rep)
            for rep, value in table.entries.items()
        },
        provenance=table.provenance,
        pinning=tuple(canonical_form(rep.transpose(), n, m) for rep in table.pinning)
    )

def table_file(m: int, n: int, directories: Iterable[str | Path] = ()) -> Path | None:
    """
    Finds the interpolated table file of an ambient.

    Each directory is searched for "{m}x{n}.tsv" and for the
    "{m}x{n}/{m}x{n}.tsv" layout of a pipeline run, before the
    package tables.

    :param m: The number of matrix rows.
    :param n: The number of matrix columns.
    :param directories: The directories searched before the package tables.

    :return: The file path, or None when no directory holds one.
    """

    name = f"{m}x{n}"

    for directory in (*(Path(directory) for directory in directories), TABLES_PATH):
        for path in (directory / f"{name}.tsv", directory / name / f"{name}.tsv"):
            if path.is_file():
                return path

    return None

def install_table(table: CoefficientTable, directory: str | Path = TABLES_PATH) -> Path:
    """
    Writes an interpolated table where builtin_table finds it.

    :param table: The table, which must pass its identities.
    :param directory: The target directory, the package tables by default.

    :return: The written file path.
    """

    failed = [check.name for check in table_identities(table) if not check.passed]

    if failed:
        raise DomainError(
            f"The {table.ambient[0]}x{table.ambient[1]} table fails the "
            f"{', '.join(failed)} identities and is not installed."
        )

    m, n = table.ambient
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{m}x{n}.tsv"

    table_dump(table, path)

    _logger.info(f"Installed the {m}x{n} table at {path}.")

    return path

def builtin_table(m: int, n: int, directories: Iterable[str | Path] = ()) -> CoefficientTable:
    """
    Returns the exact coefficient table of an ambient with known coefficients.

    Covers 1×n and m×1, 2×n and n×2, 3×3, and any interpolated table
    (or the one of the transposed ambient) found by table_file.

    :param m: The number of matrix rows.
    :param n: The number of matrix columns.
    :param directories: The directories searched before the package tables.

    :return: The coefficient table.
    """

    if m < 1 or n < 1:
        raise DimensionError(f"Ambient dimensions must be positive, got ({m}, {n}).")

    if m == 1 or n == 1:
        return _line_table(m, n)

    if m == 2:
        return _two_by_n_table(n)

    if n == 2:
        return transpose_table(_two_by_n_table(m))

    if (m, n) == (3, 3):
        return _three_by_three_table()

    directories = tuple(directories)

    for (a, b), transpose in (((m, n), False), ((n, m), True)):
        path = table_file(a, b, directories)

        if path is not None:
            table = table_load(path)

            if table.ambient != (a, b):
                raise DomainError(f"Table file {path} holds a {table.ambient} table.")

            return transpose_table(table) if transpose else table

    raise UnsupportedAmbientError(
        f"No coefficient table is available for ({m}, {n}), "
        f"run the interpolation pipeline (sinkhornpoly interpolate {m} {n}) to build one."
    )

def conjectured_table(
        m: int,
        n: int,
        sign_store: SignStore = None,
        limit: int = DEFAULT_WORK_LIMIT
) -> CoefficientTable:
    """
    Builds a table from the conjectured link-graph determinant form of every class.

    :param m: The number of matrix rows.
    :param n: The number of matrix columns.
    :param sign_store: The sign store, the shipped one by default.
    :param limit: The enumeration work limit per size.

    :return: The conjectured table.
    """

    entries = {}

    for k in range(len(minor_basis(m, n)) + 1):
        for rep in enumerate_classes(m, n, k, limit=limit):
            entries[rep.rep] = conjectured_coefficient(
                rep.rep, m, n, sign_store=sign_store
            ).value

    return CoefficientTable(
        ambient=(m, n), entries=entries,
        provenance=Provenance.CONJECTURED_FORM
    )

def polynomial_for(matrix: ExactMatrix, table: CoefficientTable) -> TablePolynomial:
    """
    Assembles Σ_k (Σ_classes c_S·Σ(S))·x^k exactly.

    :param matrix: The positive matrix A.
    :param table: The table for the shape of A.

    :return: The exact polynomial and its primitive form.
    """

    if matrix.shape != table.ambient:
        raise DimensionError(
            f"A {matrix.rows}x{matrix.cols} matrix does not fit a table "
            f"for {table.ambient[0]}x{table.ambient[1]}."
        )

    cache = MinorCache(matrix)
    coefficients = [Fraction(0)] * (table.degree + 1)

    for rep, value in table.entries.items():
        if value:
            coefficients[len(rep)] += value * class_sum(cache, rep)

    exact = RationalPolynomial(tuple(coefficients))

    if exact.is_zero:
        _logger.warning(f"The table polynomial of {matrix.to_rows()} vanishes identically.")

    return TablePolynomial(
        exact=exact, primitive=None if exact.is_zero else primitive_part(exact)
    )

def _check_proportional_rows(matrix: ExactMatrix) -> None:

    if matrix.shape != (3, 3):
        raise DimensionError(f"Expected a 3x3 matrix, got {matrix.rows}x{matrix.cols}.")

    if not matrix.is_positive:
        raise DomainError("The matrix entries must be positive.")

    for j in range(3):
        if matrix[1, 0] * matrix[2, j] != matrix[2, 0] * matrix[1, j]:
            raise DegenerateInputError("Rows 2 and 3 of the matrix are not proportional.")

def degenerate_3x3(matrix: ExactMatrix) -> TablePolynomial:
    """
    Returns the cubic satisfied by the top left limit entry when rows 2 and 3 are proportional.

    The cubic depends on rows 1 and 2 only.

    :param matrix: The 3x3 matrix with proportional rows 2 and 3.

    :return: The cubic e₃x³ + e₂x² + e₁x + e₀.
    """

    _check_proportional_rows(matrix)

    a11, a12, a13 = matrix.row(0)
    a21, a22, a23 = matrix.row(1)

    e3 = a11 * (a11 * a22 - a12 * a21) * (a11 * a23 - a13 * a21)
    e2 = a11 * (
        a11 * a12 * a21 * a23 + a11 * a13 * a21 * a22 -
        3 * a11 ** 2 * a22 * a23 + a12 * a13 * a21 ** 2
    )
    e1 = 3 * a11 ** 3 * a22 * a23
    e0 = -a11 ** 3 * a22 * a23

    exact = RationalPolynomial((e0, e1, e2, e3))

    return TablePolynomial(exact=exact, primitive=primitive_part(exact))

def degenerate_3x3_class_sums(matrix: ExactMatrix) -> TablePolynomial:
    """
    Returns the same cubic as degenerate_3x3 written with class sums of the top two rows.

    :param matrix: The 3x3 matrix with proportional rows 2 and 3.

    :return: The cubic.
    """

    _check_proportional_rows(matrix)

    cache = MinorCache(matrix.submatrix((0, 1), (0, 1, 2)))

    e = _spec((), ())
    a = _spec((2,), (2,))
    b = _spec((2,), (3,))

    exact = RationalPolynomial(
        (
            -class_sum(cache, MinorSet()),
            3 * class_sum(cache, MinorSet((e,))),
            -2 * class_sum(cache, MinorSet((e, a))) + class_sum(cache, MinorSet((a, b))),
            class_sum(cache, MinorSet((e, a, b)))
        )
    )

    return TablePolynomial(exact=exact, primitive=primitive_part(exact))

_X = Symbol("x")

def _from_sympy(poly: Poly) -> RationalPolynomial:

    return RationalPolynomial(
        tuple(
            Fraction(int(SympyRational(value).p), int(SympyRational(value).q))
            for value in reversed(poly.all_coeffs())
        )
    )

def power_target(r: Fraction, c: Fraction, m: int, n: int) -> RationalPolynomial:
    """
    Returns (x - r)^C(m+n-3, n-1)·(x - c)^C(m+n-3, m-1) scaled to constant term 1.

    :param r: The first row target.
    :param c: The first column target.
    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: The normalized target polynomial.
    """

    if m < 2 or n < 2:
        raise DimensionError(f"The power target needs m, n ≥ 2, got ({m}, {n}).")

    r = SympyRational(r.numerator, r.denominator)
    c = SympyRational(c.numerator, c.denominator)
    poly = Poly(
        (_X - r) ** math.comb(m + n - 3, n - 1) * (_X - c) ** math.comb(m + n - 3, m - 1),
        _X, domain=QQ
    )
    target = _from_sympy(poly)

    return target.scale(1 / target.constant)

def table_identities(table: CoefficientTable) -> list[IdentityCheck]:
    """
    Checks the table-level identities.

    Square tables are checked against Σ_S c_S·x^|S| = (x - 1)^|D| and
    the duality c_S = c_dual(S). Rectangular tables are checked for
    proportionality of the power sum to (x - 1)^C(m+n-3, n-1)·(x - m/n)^C(m+n-3, m-1).

    :param table: The table.

    :return: One check per identity.
    """

    m, n = table.ambient
    checks = []
    power_sum = table.power_sum()

    if m == n:
        expected = _from_sympy(Poly((_X - 1) ** table.degree, _X, domain=QQ))
        checks.append(
            IdentityCheck(
                name="power", passed=power_sum == expected,
                detail=f"sum is {power_sum}, expected {expected}"
            )
        )

        failures = [
            rep.encode() for rep in table.entries
            if table.entries[rep] != table.coefficient(dual_subset(rep, n, m))
        ]
        checks.append(
            IdentityCheck(
                name="duality", passed=not failures,
                detail=f"{len(failures)} of {len(table)} classes differ from their dual"
                + (f": {', '.join(failures[:5])}" if failures else "")
            )
        )

    elif min(m, n) >= 2:
        expected = power_target(Fraction(1), Fraction(m, n), m, n)
        checks.append(
            IdentityCheck(
                name="rectangular power", passed=power_sum == expected,
                detail=f"sum is {power_sum}, expected {expected}"
            )
        )

    for check in checks:
        if not check.passed:
            _logger.warning(f"Identity {check.name} fails for {m}x{n}: {check.detail}")

    return checks

def verify_polynomial(matrix: ExactMatrix, table: CoefficientTable, precision: int) -> RootCheck:
    """
    Checks that the table polynomial of a matrix vanishes at its computed limit entry.

    :param matrix: The positive matrix A.
    :param table: The table for the shape of A.
    :param precision: The working precision in bits.

    :return: The root check.
    """

    poly = polynomial_for(matrix, table)

    if poly.degenerate:
        raise DegenerateInputError("The table polynomial of the matrix vanishes identically.")

    return verify_root(poly.primitive, sinkhorn_limit(matrix, precision).top_left)

def table_dump(table: CoefficientTable, path: str | Path) -> None:
    """
    Writes a table as a "m n provenance" header and "encoding<TAB>value" lines.

    :param table: The table.
    :param path: The file path.
    """

    m, n = table.ambient

    with open(path, "w") as file:
        file.write(f"{m} {n} {table.provenance.value}\n")

        for rep in table.pinning:
            file.write(f"{table.PINNED}{table.SEPARATOR}{rep.encode()}\n")

        for rep in table.classes():
            file.write(f"{rep.encode()}{table.SEPARATOR}{table.entries[rep]}\n")

def table_load(path: str | Path) -> CoefficientTable:
    """
    Reads a table written by table_dump.

    :param path: The file path.

    :return: The table.
    """

    with open(path, "r") as file:
        lines = [line.rstrip("\n") for line in file if line.strip()]

    try:
        m, n, provenance = lines[0].split()
        m, n = int(m), int(n)
        provenance = Provenance(provenance)

    except (IndexError, ValueError) as e:
        raise DomainError(f"Invalid table header in {path}.") from e

    entries = {}
    pinning = []

    for line in lines[1:]:
        key, value = line.split(CoefficientTable.SEPARATOR)

        if key == CoefficientTable.PINNED:
            pinning.append(MinorSet.decode(value))

        elif not key.startswith("#"):
            entries[MinorSet.decode(key)] = to_rational(value)

    _logger.debug(f"Loaded {len(entries)} coefficients for {m}x{n} from {path}.")

    return CoefficientTable(
        ambient=(m, n), entries=entries, provenance=provenance, pinning=tuple(pinning)
    )

def relation_residual(matrix: ExactMatrix | MinorCache, relation: Relation) -> Fraction:
    """
    Evaluates lhs - rhs of a relation at a matrix.

    :param matrix: The matrix, or its minor cache.
    :param relation: The relation.

    :return: The exact difference, zero when the relation holds.
    """

    cache = matrix if isinstance(matrix, MinorCache) else MinorCache(matrix)

    if cache.basis.ambient != relation.ambient:
        raise DimensionError(
            f"Relation {relation.name} is for {relation.ambient}, "
            f"the matrix is {cache.basis.ambient}."
        )

    evaluate = (
        (lambda subset: class_sum(cache, subset)) if relation.class_sums
        else cache.monomial
    )

    return (
        sum((coefficient * evaluate(subset) for coefficient, subset in relation.lhs), Fraction(0)) -
        sum((coefficient * evaluate(subset) for coefficient, subset in relation.rhs), Fraction(0))
    )

def _terms(*terms: tuple[int, Sequence[MinorSpec]]) -> tuple[tuple[int, MinorSet], ...]:

    return tuple((coefficient, MinorSet(tuple(specs))) for coefficient, specs in terms)

_E = _spec((), ())
_A = _spec((2,), (2,))
_B = _spec((2,), (3,))
_C = _spec((3,), (2,))
_D = _spec((3,), (3,))
_F = _spec((2, 3), (2, 3))
_B4 = _spec((2,), (4,))
_F24 = _spec((2, 3), (2, 4))
_F34 = _spec((2, 3), (3, 4))
_D4 = _spec((3,), (4,))

THREE_BY_THREE_RELATION = Relation(
    name="3x3 twelve monomials",
    ambient=(3, 3),
    lhs=_terms(
        (1, (_E, _A, _D)), (1, (_E, _B, _F)), (1, (_E, _C, _F)),
        (1, (_A, _B, _C)), (1, (_A, _D, _F)), (1, (_B, _C, _D))
    ),
    rhs=_terms(
        (1, (_E, _A, _F)), (1, (_E, _B, _C)), (1, (_E, _D, _F)),
        (1, (_A, _B, _D)), (1, (_A, _C, _D)), (1, (_B, _C, _F))
    )
)

THREE_BY_FOUR_RELATION = Relation(
    name="3x4 class sums of size 5",
    ambient=(3, 4),
    lhs=_terms(
        (1, (_E, _A, _B, _D4, _F24)),
        (1, (_E, _A, _B, _F, _F24)),
        (1, (_A, _B, _C, _D4, _F)),
        (2, (_E, _A, _D, _F24, _F34)),
        (2, (_A, _B, _B4, _C, _F34)),
        (2, (_A, _B, _D4, _F24, _F34))
    ),
    rhs=_terms(
        (1, (_E, _A, _D, _F, _F24)),
        (1, (_A, _B, _B4, _C, _F)),
        (1, (_A, _B, _D4, _F, _F24)),
        (2, (_E, _A, _B, _D4, _F)),
        (2, (_E, _A, _B, _F24, _F34)),
        (2, (_A, _B, _C, _D4, _F34))
    ),
    class_sums=True
)
