# polynomials.py

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterable, Self, ClassVar

from mpmath import mpf
from sympy import Poly, Symbol, ZZ

from sinkhornpoly.errors import DegenerateInputError, DomainError

__all__ = [
    "IntPolynomial",
    "RationalPolynomial",
    "primitive_part",
    "format_terms"
]

def _strip(coefficients: Iterable) -> tuple:

    coefficients = list(coefficients)

    while coefficients and coefficients[-1] == 0:
        coefficients.pop()

    return tuple(coefficients)

def format_terms(coefficients: Iterable[int | Fraction], variable: str = "x") -> str:
    """
    Formats ascending coefficients as a descending polynomial expression.

    :param coefficients: The ascending coefficients.
    :param variable: The variable name.

    :return: The expression text, like "3x^2 - x + 1".
    """

    terms = []

    for power, value in reversed(list(enumerate(coefficients))):
        if value == 0:
            continue

        magnitude = abs(value)

        if power == 0:
            body = str(magnitude)

        else:
            monomial = variable if power == 1 else f"{variable}^{power}"
            body = monomial if magnitude == 1 else (
                f"{magnitude}{monomial}" if isinstance(magnitude, int) or
                magnitude.denominator == 1 else f"({magnitude}){monomial}"
            )

        if not terms:
            terms.append(f"-{body}" if value < 0 else body)

        else:
            terms.append(f"{'-' if value < 0 else '+'} {body}")

    return " ".join(terms) if terms else "0"

@dataclass(frozen=True)
class IntPolynomial:
    """A univariate polynomial with integer coefficients, in ascending degree."""

    coefficients: tuple[int, ...]

    SYMBOL: ClassVar[Symbol] = Symbol("x")

    def __post_init__(self) -> None:

        coefficients = []

        for value in self.coefficients:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise DomainError(
                        f"Integer polynomial got a non-integer coefficient {value}."
                    )

                value = value.numerator

            coefficients.append(int(value))

        object.__setattr__(self, "coefficients", _strip(coefficients))

    @classmethod
    def from_descending(cls, coefficients: Iterable[int]) -> Self:
        """
        Creates a polynomial from coefficients listed from the highest degree down.

        :param coefficients: The descending coefficients.

        :return: The polynomial.
        """

        return cls(tuple(reversed(list(coefficients))))

    @classmethod
    def from_sympy(cls, poly: Poly) -> Self:
        """
        Creates a polynomial from a sympy polynomial over the integers.

        :param poly: The sympy polynomial.

        :return: The polynomial.
        """

        return cls.from_descending(int(value) for value in poly.all_coeffs())

    def to_sympy(self) -> Poly:
        """
        Converts the polynomial into a sympy polynomial over the integers.

        :return: The sympy polynomial.
        """

        return Poly(
            list(reversed(self.coefficients)) or [0], self.SYMBOL, domain=ZZ
        )

    @classmethod
    def parse(cls, text: str) -> Self:
        """
        Parses ascending decimal coefficients, one per line or whitespace separated.

        :param text: The text to parse.

        :return: The polynomial.
        """

        try:
            return cls(tuple(int(value) for value in text.split()))

        except ValueError as e:
            raise DomainError(f"Invalid polynomial coefficients: {text!r}") from e

    def dump(self) -> str:
        """
        Serializes the ascending coefficients, one per line.

        :return: The coefficient lines.
        """

        return "\n".join(str(value) for value in self.coefficients) + "\n"

    def encode(self) -> str:
        """
        Encodes the ascending coefficients on a single line.

        :return: The space separated coefficients.
        """

        return " ".join(str(value) for value in self.coefficients)

    @property
    def degree(self) -> int:
        """
        Returns the degree of the polynomial, -1 for the zero polynomial.

        :return: The degree.
        """

        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        """
        Checks if the polynomial is identically zero.

        :return: The validation value.
        """

        return not self.coefficients

    @property
    def leading(self) -> int:
        """
        Returns the leading coefficient.

        :return: The coefficient of the highest power.
        """

        return self.coefficients[-1] if self.coefficients else 0

    @property
    def constant(self) -> int:
        """
        Returns the constant coefficient.

        :return: The coefficient of x^0.
        """

        return self.coefficients[0] if self.coefficients else 0

    @property
    def content(self) -> int:
        """
        Returns the gcd of the coefficients.

        :return: The content.
        """

        return math.gcd(*self.coefficients)

    def norm1(self) -> int:
        """
        Returns the sum of the absolute values of the coefficients.

        :return: The l1 norm.
        """

        return sum(abs(value) for value in self.coefficients)

    def __call__(self, x: mpf | Fraction | int) -> mpf | Fraction | int:
        """
        Evaluates the polynomial by Horner's rule in the arithmetic of x.

        :param x: The point.

        :return: The value at x.
        """

        value = 0 * x

        for coefficient in reversed(self.coefficients):
            value = value * x + coefficient

        return value

    def __neg__(self) -> Self:

        return type(self)(tuple(-value for value in self.coefficients))

    def scale(self, factor: int) -> Self:
        """
        Multiplies all coefficients by an integer.

        :param factor: The factor.

        :return: The scaled polynomial.
        """

        return type(self)(tuple(value * factor for value in self.coefficients))

    def primitive(self) -> Self:
        """
        Returns the primitive part of the polynomial.

        :return: The primitive polynomial.
        """

        return primitive_part(self)

    def factors(self) -> list[Self]:
        """
        Factors the polynomial into primitive irreducible factors over the integers.

        :return: The distinct irreducible factors of positive degree.
        """

        if self.degree < 1:
            return []

        _, factors = self.to_sympy().factor_list()

        return [
            primitive_part(type(self).from_sympy(factor))
            for factor, _ in factors
            if factor.degree() > 0
        ]

    def format(self, variable: str = "x") -> str:
        """
        Formats the polynomial as a descending expression.

        :param variable: The variable name.

        :return: The expression text.
        """

        return format_terms(self.coefficients, variable=variable)

    def __str__(self) -> str:

        return self.format()

@dataclass(frozen=True)
class RationalPolynomial:
    """A univariate polynomial with exact rational coefficients, in ascending degree."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:

        object.__setattr__(
            self, "coefficients",
            _strip(Fraction(value) for value in self.coefficients)
        )

    @property
    def degree(self) -> int:
        """
        Returns the degree of the polynomial, -1 for the zero polynomial.

        :return: The degree.
        """

        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        """
        Checks if the polynomial is identically zero.

        :return: The validation value.
        """

        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        """
        Returns the leading coefficient.

        :return: The coefficient of the highest power.
        """

        return self.coefficients[-1] if self.coefficients else Fraction(0)

    @property
    def constant(self) -> Fraction:
        """
        Returns the constant coefficient.

        :return: The coefficient of x^0.
        """

        return self.coefficients[0] if self.coefficients else Fraction(0)

    def coefficient(self, power: int) -> Fraction:
        """
        Returns the coefficient of x^power.

        :param power: The power.

        :return: The coefficient, zero beyond the degree.
        """

        return self.coefficients[power] if 0 <= power < len(self.coefficients) else Fraction(0)

    def __call__(self, x: mpf | Fraction | int) -> mpf | Fraction:
        """
        Evaluates the polynomial by Horner's rule.

        :param x: The point.

        :return: The value at x.
        """

        value = 0 * x

        for coefficient in reversed(self.coefficients):
            if isinstance(x, (Fraction, int)):
                value = value * x + coefficient

            else:
                value = value * x + mpf(coefficient.numerator) / coefficient.denominator

        return value

    def scale(self, factor: int | Fraction) -> Self:
        """
        Multiplies all coefficients by a rational factor.

        :param factor: The factor.

        :return: The scaled polynomial.
        """

        return type(self)(tuple(value * factor for value in self.coefficients))

    def is_integral(self) -> bool:
        """
        Checks if every coefficient is an integer.

        :return: The validation value.
        """

        return all(value.denominator == 1 for value in self.coefficients)

    def to_integral(self) -> IntPolynomial:
        """
        Converts an integral polynomial to an integer polynomial without rescaling.

        :return: The integer polynomial.
        """

        return IntPolynomial(self.coefficients)

    def primitive(self) -> IntPolynomial:
        """
        Returns the primitive integer polynomial proportional to this one.

        :return: The primitive polynomial.
        """

        return primitive_part(self)

    def format(self, variable: str = "x") -> str:
        """
        Formats the polynomial as a descending expression.

        :param variable: The variable name.

        :return: The expression text.
        """

        return format_terms(self.coefficients, variable=variable)

    def __str__(self) -> str:

        return self.format()

def primitive_part(polynomial: IntPolynomial | RationalPolynomial) -> IntPolynomial:
    """
    Returns the primitive integer polynomial proportional to the given one.

    Denominators are cleared, the coefficient gcd is divided out and the
    leading coefficient is made positive.

    :param polynomial: The polynomial to normalize.

    :return: The primitive polynomial.
    """

    if polynomial.is_zero:
        raise DegenerateInputError("The zero polynomial has no primitive part.")

    coefficients = [Fraction(value) for value in polynomial.coefficients]
    denominator = math.lcm(*(value.denominator for value in coefficients))
    integers = [int(value * denominator) for value in coefficients]
    content = math.gcd(*integers)

    if integers[-1] < 0:
        content = -content

    return IntPolynomial(tuple(value // content for value in integers))
