# recognition.py

import math
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from mpmath import mp, mpf

from sinkhornpoly.errors import (
    DegenerateInputError, DomainError, InsufficientPrecisionError
)
from sinkhornpoly.polynomials import IntPolynomial, primitive_part
from sinkhornpoly.scaling import GUARD_BITS, PreciseValue

__all__ = [
    "RecognitionResult",
    "RecognitionFailure",
    "RootCheck",
    "DEFAULT_REDUNDANCY",
    "pslq",
    "minimal_polynomial",
    "verify_root",
    "default_precision",
    "required_precision"
]

_logger = logging.getLogger(__name__)

DEFAULT_REDUNDANCY = 2

@dataclass(frozen=True)
class RecognitionResult:
    """A recognized minimal polynomial of a high precision real number."""

    poly: IntPolynomial
    degree: int
    residual: PreciseValue
    stable: bool
    target: int
    precision: int

    @property
    def reduced(self) -> bool:
        """
        Checks if the polynomial has a lower degree than the target.

        :return: The validation value.
        """

        return self.degree < self.target

@dataclass(frozen=True)
class RecognitionFailure:
    """A report of a number that could not be recognized."""

    target: int
    precision: int
    reason: str

    def __str__(self) -> str:

        return f"no polynomial of degree {self.target} at {self.precision} bits: {self.reason}"

@dataclass(frozen=True)
class RootCheck:
    """The outcome of checking that a polynomial vanishes at a point."""

    passed: bool
    residual: PreciseValue
    threshold: PreciseValue

    def __bool__(self) -> bool:

        return self.passed

def default_precision(degree: int) -> int:
    """
    Returns the working precision used for recognizing a polynomial of some degree.

    :param degree: The target degree.

    :return: The precision in bits.
    """

    if degree <= 6:
        return 512

    if degree <= 15:
        return 1024

    return 4096

def required_precision(degree: int, coefficient_bits: int) -> int:
    """
    Estimates the precision needed to recognize a polynomial.

    :param degree: The target degree.
    :param coefficient_bits: The bit size of the largest expected coefficient.

    :return: The precision in bits, 1.2·(degree + 3)·coefficient_bits.
    """

    return math.ceil(1.2 * (degree + 3) * coefficient_bits)

def _default_bound(precision: int, size: int) -> int:

    return 2 ** ((precision - GUARD_BITS) // max(1, size - 1))

def pslq(
        values: Sequence[PreciseValue],
        bound: int = None,
        max_iter: int = None
) -> tuple[int, ...] | None:
    """
    Searches for a small integer relation Σ aᵢxᵢ = 0.

    The relation is normalized so that its last nonzero entry is
    positive. A relation is accepted only when
    |Σ aᵢxᵢ| < 2^(64 - p)·‖a‖₂·‖x‖₂ at the full precision p.

    :param values: The numbers, all at the same precision.
    :param bound: The largest allowed coefficient magnitude.
    :param max_iter: The iteration cap.

    :return: The relation, or None when there is none within the bounds.
    """

    if len(values) < 2:
        raise DomainError(f"An integer relation needs at least 2 numbers, got {len(values)}.")

    precisions = {value.precision for value in values}

    if len(precisions) != 1:
        raise DomainError(f"Numbers must share one precision, got {sorted(precisions)}.")

    precision = precisions.pop()
    size = len(values)
    capacity = (precision - GUARD_BITS) // (size - 1)

    if bound is None:
        bound = _default_bound(precision, size)

    if bound < 1:
        raise DomainError(f"The coefficient bound must be positive, got {bound}.")

    if bound.bit_length() - 1 > capacity:
        raise InsufficientPrecisionError(
            f"Precision of {precision} bits supports coefficients up to 2^{capacity} "
            f"for {size} numbers, the bound {bound} needs more."
        )

    if max_iter is None:
        max_iter = size * precision

    with mp.workprec(precision):
        xs = [+value.value for value in values]

        if all(x == 0 for x in xs):
            raise DegenerateInputError("An integer relation needs a nonzero vector.")

        if any(x == 0 for x in xs):
            i = next(i for i, x in enumerate(xs) if x == 0)

            return tuple(1 if j == i else 0 for j in range(size))

        guard = mpf(2) ** (GUARD_BITS - precision)
        relation = mp.pslq(xs, tol=guard * bound, maxcoeff=bound, maxsteps=max_iter)

        if relation is None:
            _logger.debug(f"No relation among {size} numbers below {bound} at {precision} bits.")

            return None

        relation = [int(a) for a in relation]
        residual = abs(mp.fsum(a * x for a, x in zip(relation, xs)))
        limit = guard * mp.norm(relation) * mp.norm(xs)

        if residual >= limit:
            _logger.debug(
                f"Rejected relation {relation}: residual {mp.nstr(residual, 5)} "
                f"is above {mp.nstr(limit, 5)}."
            )

            return None

    last = next(a for a in reversed(relation) if a != 0)

    if last < 0:
        relation = [-a for a in relation]

    return tuple(relation)

def _relative_residual(poly: IntPolynomial, x: mpf) -> mpf:

    return abs(poly(x)) / (poly.norm1() * max(mpf(1), abs(x)) ** poly.degree)

def _search(x: mpf, precision: int, degree: int) -> IntPolynomial | None:

    with mp.workprec(precision):
        x = +x
        powers = [PreciseValue(value=x ** k, precision=precision) for k in range(degree + 1)]

        try:
            relation = pslq(powers)

        except InsufficientPrecisionError:
            return None

        if relation is None:
            return None

        poly = IntPolynomial(relation)

        if poly.degree < 1:
            return None

        factors = poly.factors()

        if not factors:
            return None

        return min(factors, key=lambda factor: _relative_residual(factor, x))

def minimal_polynomial(
        x: PreciseValue,
        degree: int,
        refine: Callable[[int], mpf] = None,
        redundancy: int = DEFAULT_REDUNDANCY
) -> RecognitionResult | RecognitionFailure:
    """
    Recognizes a real number as a root of an integer polynomial of bounded degree.

    An integer relation is searched among 1, x, ..., x^(degree + redundancy)
    and the irreducible factor of it that vanishes at x is kept. The
    result is stable when the same polynomial is found with two more
    powers and at twice the precision. Without a refine source the
    second check compares half the precision against the full one.

    :param x: The number.
    :param degree: The target degree d.
    :param refine: Computes the number again at a given precision.
    :param redundancy: The number of extra powers searched.

    :return: The recognized polynomial, or a failure report.
    """

    if degree < 1:
        raise DomainError(f"The target degree must be positive, got {degree}.")

    precision = x.precision

    if not mp.isfinite(x.value):
        raise DomainError(f"Cannot recognize a non-finite number {x.value}.")

    if x.value == 0:
        poly = IntPolynomial((0, 1))

        return RecognitionResult(
            poly=poly, degree=1, residual=PreciseValue(mpf(0), precision),
            stable=True, target=degree, precision=precision
        )

    found = _search(x.value, precision, degree + redundancy)

    if found is None:
        return RecognitionFailure(
            target=degree, precision=precision,
            reason=f"no integer relation among powers up to {degree + redundancy}"
        )

    poly = primitive_part(found)

    if poly.degree > degree:
        return RecognitionFailure(
            target=degree, precision=precision,
            reason=f"the relation found has degree {poly.degree}"
        )

    wider = _search(x.value, precision, degree + redundancy + 2)

    if refine is not None:
        other = _search(refine(2 * precision), 2 * precision, degree + redundancy)

    else:
        with mp.workprec(precision // 2):
            other = _search(+x.value, precision // 2, degree + redundancy)

    stable = (
        wider is not None and primitive_part(wider) == poly and
        other is not None and primitive_part(other) == poly
    )

    with mp.workprec(precision):
        residual = abs(poly(+x.value))

    if not stable:
        _logger.debug(f"Recognized {poly} at {precision} bits is not stable.")

    return RecognitionResult(
        poly=poly, degree=poly.degree,
        residual=PreciseValue(value=residual, precision=precision),
        stable=stable, target=degree, precision=precision
    )

def verify_root(poly: IntPolynomial, x: PreciseValue) -> RootCheck:
    """
    Checks that |p(x)| < 2^(-p/2)·‖p‖₁·max(1, |x|)^deg.

    :param poly: The polynomial.
    :param x: The point, with its precision p.

    :return: The check outcome with the residual.
    """

    precision = x.precision

    with mp.workprec(precision):
        point = +x.value
        residual = abs(poly(point))
        threshold = (
            mpf(2) ** (-(precision // 2)) * poly.norm1() *
            max(mpf(1), abs(point)) ** max(0, poly.degree)
        )

    return RootCheck(
        passed=bool(residual < threshold),
        residual=PreciseValue(value=residual, precision=precision),
        threshold=PreciseValue(value=threshold, precision=precision)
    )
