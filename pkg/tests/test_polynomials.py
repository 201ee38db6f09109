# test_polynomials.py

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from sinkhornpoly import (
    DegenerateInputError, DomainError, IntPolynomial, RationalPolynomial, primitive_part
)

def test_coefficients_are_stripped_and_ordered() -> None:

    poly = IntPolynomial.from_descending([0, 0, 3, -1, 1])

    assert poly.coefficients == (1, -1, 3)
    assert poly.degree == 2
    assert poly.leading == 3
    assert poly.constant == 1
    assert IntPolynomial(()).degree == -1
    assert IntPolynomial((0, 0)).is_zero

def test_format() -> None:

    assert str(IntPolynomial.from_descending([3, -1, 1])) == "3x^2 - x + 1"
    assert str(IntPolynomial.from_descending([-2, -8, 4])) == "-2x^2 - 8x + 4"
    assert str(IntPolynomial((0, 1))) == "x"
    assert str(IntPolynomial(())) == "0"
    assert str(RationalPolynomial((Fraction(1, 2), 0, Fraction(-3, 4)))) == "-(3/4)x^2 + 1/2"

def test_parse_and_dump() -> None:

    poly = IntPolynomial.parse("4\n-8\n-2\n")

    assert poly == IntPolynomial.from_descending([-2, -8, 4])
    assert IntPolynomial.parse(poly.dump()) == poly
    assert IntPolynomial.parse(poly.encode()) == poly

    with pytest.raises(DomainError):
        IntPolynomial.parse("1 x 2")

def test_integer_coefficients_only() -> None:

    assert IntPolynomial((Fraction(4, 2), 1)).coefficients == (2, 1)

    with pytest.raises(DomainError):
        IntPolynomial((Fraction(1, 2), 1))

def test_primitive_part() -> None:

    poly = IntPolynomial.from_descending([-2, -8, 4])

    assert poly.content == 2
    assert primitive_part(poly) == IntPolynomial.from_descending([1, 4, -2])
    assert RationalPolynomial(
        (Fraction(-1, 3), Fraction(1, 2), Fraction(1, 6))
    ).primitive() == IntPolynomial.from_descending([1, 3, -2])

    with pytest.raises(DegenerateInputError):
        primitive_part(IntPolynomial(()))

def test_evaluation() -> None:

    poly = IntPolynomial.from_descending([1, 4, -2])

    assert poly(Fraction(1, 2)) == Fraction(1, 4)
    assert poly(3) == 19

    with mp.workprec(200):
        assert abs(poly(mp.sqrt(6) - 2)) < mpf(2) ** -190

def test_factors() -> None:

    first = IntPolynomial.from_descending([2, 6, -4]).to_sympy()
    second = IntPolynomial.from_descending([1, 0, -2]).to_sympy()

    factors = IntPolynomial.from_sympy(first * second).factors()

    assert sorted(factor.coefficients for factor in factors) == sorted(
        [(-2, 3, 1), (-2, 0, 1)]
    )

def test_rational_polynomial() -> None:

    poly = RationalPolynomial((Fraction(2), Fraction(0), Fraction(-4), Fraction(0)))

    assert poly.degree == 2
    assert poly.coefficient(1) == 0
    assert poly.coefficient(7) == 0
    assert poly.is_integral()
    assert poly.to_integral() == IntPolynomial((2, 0, -4))
    assert poly.scale(Fraction(1, 2)).coefficients == (1, 0, -2)
