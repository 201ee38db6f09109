# test_exact_linalg.py

import random
from fractions import Fraction

import pytest

from sinkhornpoly import (
    DimensionError, DomainError, InconsistentSystemError, ExactMatrix,
    bareiss_det, det, solve_affine, to_rational
)

from conftest import rational_matrix

def test_to_rational_rejects_floats() -> None:

    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational(7) == 7

    with pytest.raises(DomainError):
        to_rational(0.5)

    with pytest.raises(DomainError):
        to_rational("1/0")

def test_parse_and_format(sample_3x3: ExactMatrix) -> None:

    text = "# sample\n3 3\n3 9 1  # first row\n3 2 9\n\n5 3 4\n"

    matrix = ExactMatrix.parse(text)

    assert matrix == sample_3x3
    assert ExactMatrix.parse(matrix.format()) == matrix
    assert matrix[1, 2] == 9

def test_parse_rejects_bad_shapes() -> None:

    with pytest.raises(DimensionError):
        ExactMatrix.parse("2 2\n1 2\n3 4\n5 6\n")

    with pytest.raises(DimensionError):
        ExactMatrix.parse("1 2 3\n1 2 3\n")

    with pytest.raises(DimensionError):
        ExactMatrix.from_rows([[1, 2], [3]])

def test_determinants(sample_3x3: ExactMatrix) -> None:

    assert det(sample_3x3) == 239
    assert det(sample_3x3.transpose()) == 239
    assert det(ExactMatrix.from_rows([["1/2", "1/3"], ["1/4", 1]])) == Fraction(5, 12)
    assert det(ExactMatrix.identity(0)) == 1
    assert bareiss_det([[0, 2], [3, 0]]) == -6
    assert bareiss_det([[1, 2], [2, 4]]) == 0

    with pytest.raises(DimensionError):
        det(ExactMatrix.from_rows([[1, 2, 3]]))

def test_row_operations_scale_the_determinant(sample_3x3: ExactMatrix) -> None:

    assert det(sample_3x3.swap_rows(0, 2)) == -239
    assert det(sample_3x3.scale_row(1, Fraction(1, 3))) == Fraction(239, 3)
    assert det(sample_3x3 @ sample_3x3) == 239 ** 2

def test_determinant_identities_on_random_matrices(rng: random.Random) -> None:

    for _ in range(30):
        size = rng.randint(1, 5)
        a = rational_matrix(rng, size, size)
        b = rational_matrix(rng, size, size)
        i, j = rng.sample(range(size), 2) if size > 1 else (0, 0)

        assert det(a @ b) == det(a) * det(b)
        assert det(a.transpose()) == det(a)

        if i != j:
            assert det(a.swap_rows(i, j)) == -det(a)
            assert det(a.swap_columns(i, j)) == -det(a)

        factor = Fraction(rng.randint(1, 9), rng.randint(1, 9))

        assert det(a.scale_row(i, factor)) == factor * det(a)
        assert det(a.scale(factor)) == factor ** size * det(a)

def test_submatrix_and_transpose(sample_3x3: ExactMatrix) -> None:

    assert sample_3x3.submatrix((0, 2), (1, 2)).to_rows() == [[9, 1], [3, 4]]
    assert sample_3x3.transpose().row(0) == (3, 3, 5)
    assert sample_3x3.column(1) == (9, 2, 3)

    with pytest.raises(DimensionError):
        sample_3x3.submatrix((0, 3), (0, 1))

def test_unique_solution() -> None:

    solution = solve_affine(ExactMatrix.from_rows([[1, 1], [1, -1]]), [3, 1])

    assert solution.is_unique
    assert solution.particular == (2, 1)
    assert solution.determined() == (0, 1)

def test_underdetermined_solution_pins_free_variables() -> None:

    matrix = ExactMatrix.from_rows([[1, 1, 0], [0, 0, 1], [2, 2, 1]])
    vector = [2, 5, 9]

    solution = solve_affine(matrix, vector)

    assert solution.dimension == 1
    assert solution.particular == (2, 0, 5)
    assert solution.pinned_report == ((1, 0),)
    assert solution.determined() == (2,)

    for t in (0, 3, Fraction(-7, 2)):
        assert matrix.apply(solution.member([t])) == tuple(Fraction(v) for v in vector)

def test_inconsistent_system_names_the_row() -> None:

    matrix = ExactMatrix.from_rows([[1, 1], [2, 2], [1, 0]])

    with pytest.raises(InconsistentSystemError) as info:
        solve_affine(matrix, [1, 3, 0])

    assert info.value.row == 1

def test_solution_needs_matching_vector() -> None:

    with pytest.raises(DimensionError):
        solve_affine(ExactMatrix.identity(2), [1, 2, 3])
