# test_links.py

import random
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest

from sinkhornpoly import (
    DomainError, Confidence, LinkKind, MinorSet, MinorSpec, SignAlteration,
    SignStore, adjacency_matrix, builtin_table, conjectured_coefficient,
    conjectured_table, default_sign_store, det, fingerprint, link_graph,
    link_type, minor_basis, sign_switch, switching_equivalent, transpose_subset
)

TYPE1 = MinorSet.of("{};{}", "{2};{2}")
TYPE2 = MinorSet.of("{2};{2}", "{2};{3}")
COMPONENT = MinorSet.of("{2};{2}", "{3};{3}", "{2,3};{2,3}")
CLIQUE = MinorSet.of("{2,3};{2,3}", "{2,3};{2,4}", "{2,3};{2,5}")

TYPE2_TABLE = {
    2: [-3, 0, 5, 12],
    3: [0, 16, 40, 72],
    4: [9, 48, 105, 180],
    5: [24, 96, 200, 336],
    6: [45, 160, 325]
}

COMPONENT_TABLE = {
    3: [-27, -70, -161, -324],
    4: [-70, -256, -682, -1456],
    5: [-161, -682, -1875, -4028],
    6: [-324, -1456, -4028]
}

def _coefficient(subset: MinorSet, m: int, n: int, store: SignStore = None) -> Fraction:

    return conjectured_coefficient(subset, m, n, sign_store=store or SignStore()).value

def test_link_types() -> None:

    empty = MinorSpec.decode("{};{}")
    a = MinorSpec.decode("{2};{2}")

    assert link_type(empty, a) is LinkKind.TYPE1
    assert link_type(a, MinorSpec.decode("{2,3};{2,4}")) is LinkKind.TYPE1
    assert link_type(MinorSpec.decode("{3};{3}"), MinorSpec.decode("{2,4};{2,3}")) is LinkKind.NONE
    assert link_type(a, MinorSpec.decode("{2};{3}")) is LinkKind.TYPE2_ROW
    assert link_type(a, MinorSpec.decode("{3};{2}")) is LinkKind.TYPE2_COL
    assert link_type(a, MinorSpec.decode("{3};{3}")) is LinkKind.NONE
    assert link_type(empty, MinorSpec.decode("{2,3};{2,3}")) is LinkKind.NONE

def test_link_graph_structure() -> None:

    graph = link_graph(COMPONENT)

    assert graph.components == [(0, 1, 2)]
    assert graph.is_forest()
    assert graph.neighbors(2) == [0, 1]
    assert graph.labels() == [["*", ".", "<"], [".", "*", "<"], [">", ">", "*"]]

    clique = link_graph(CLIQUE)

    assert not clique.is_forest()
    assert link_graph(
        MinorSet.of("{};{}", "{2};{2}", "{2,3};{3,4}")
    ).components == [(0, 1), (2,)]

def test_size_one_coefficients() -> None:

    for m, n in ((2, 2), (3, 3), (3, 5), (4, 6)):
        assert _coefficient(MinorSet.of("{};{}"), m, n) == -n
        assert _coefficient(MinorSet.of("{2};{2}"), m, n) == Fraction(m + n - m * n, m)

    assert _coefficient(MinorSet.of("{2,3};{2,3}"), 3, 3) == 1

def test_type1_pair() -> None:

    for n, expected in zip(range(2, 6), (4, 12, 24, 40)):
        assert 4 * _coefficient(TYPE1, 2, n) == expected

    for m in range(2, 6):
        for n in range(2, 6):
            assert m ** 2 * _coefficient(TYPE1, m, n) == (m - m * n) * (n - m * n)

def test_type2_pair() -> None:

    for m, row in TYPE2_TABLE.items():
        for n, expected in zip(range(3, 7), row):
            assert m ** 2 * _coefficient(TYPE2, m, n) == expected
            assert expected == (n - m * n) * (2 * m + n - m * n)

def test_path_component() -> None:

    for m, row in COMPONENT_TABLE.items():
        for n, expected in zip(range(3, 7), row):
            assert m ** 3 * _coefficient(COMPONENT, m, n) == expected

def test_identity_sign_determinant() -> None:

    subset = MinorSet.of("{};{}", "{2};{2}", "{3};{3}")
    matrix = adjacency_matrix(subset, SignAlteration.identity(3), 3, 3)

    assert matrix.to_rows() == [[-3, 1, 1], [-1, -1, 0], [-1, 0, -1]]
    assert det(matrix) == -5
    assert builtin_table(3, 3).coefficient(subset) == -5

def test_clique_signs() -> None:

    identity = det(adjacency_matrix(CLIQUE, SignAlteration.identity(3), 3, 5))
    negated = det(
        adjacency_matrix(CLIQUE, SignAlteration.negating(3, [(0, 1), (0, 2), (1, 2)]), 3, 5)
    )

    assert identity == Fraction(-80, 27)
    assert negated == Fraction(28, 27)

def test_sign_store_lookup() -> None:

    store = SignStore.parse("*rr/r*r/rr* 1 -1 -1 -1 1 -1 -1 -1 1\n")

    assert "*cc/c*c/cc*" in store

    verified = conjectured_coefficient(CLIQUE, 3, 5, sign_store=store)
    unverified = conjectured_coefficient(CLIQUE, 3, 5, sign_store=SignStore())

    assert verified.value == Fraction(28, 27)
    assert verified.confidence is Confidence.VERIFIED_FORM
    assert unverified.value == Fraction(-80, 27)
    assert unverified.confidence is Confidence.UNVERIFIED_SIGNS
    assert conjectured_coefficient(
        transpose_subset(CLIQUE), 5, 3, sign_store=store
    ).confidence is Confidence.VERIFIED_FORM

def test_forests_need_no_record() -> None:

    result = conjectured_coefficient(COMPONENT, 4, 5, sign_store=SignStore())

    assert result.confidence is Confidence.VERIFIED_FORM
    assert conjectured_coefficient(MinorSet(), 4, 5).confidence is Confidence.PROVED_CASE
    assert conjectured_coefficient(
        MinorSet.of("{};{}"), 1, 4
    ).dump() == {"value": "-4", "confidence": "proved"}

def test_transpose_identity_on_forests() -> None:

    for subset, m, n in ((TYPE1, 2, 5), (TYPE2, 3, 4), (COMPONENT, 3, 4)):
        k = len(subset)

        assert m ** k * _coefficient(subset, m, n) == (
            n ** k * _coefficient(transpose_subset(subset), n, m)
        )

def test_switching() -> None:

    identity = SignAlteration.identity(3)
    switched = sign_switch(identity, [0])

    assert switched == SignAlteration.negating(3, [(0, 1), (0, 2)])
    assert switching_equivalent(identity, switched)
    assert not switching_equivalent(
        identity, SignAlteration.negating(3, [(0, 1), (0, 2), (1, 2)])
    )

def test_switching_keeps_the_determinant(rng: random.Random) -> None:

    basis = minor_basis(3, 4)

    for _ in range(100):
        size = rng.randint(1, 6)
        subset = MinorSet(tuple(rng.sample(basis.specs, size)))
        pairs = [pair for pair in combinations(range(size), 2) if rng.random() < 0.5]
        sigma = SignAlteration.negating(size, pairs)
        switched = sign_switch(sigma, [i for i in range(size) if rng.random() < 0.5])

        assert switching_equivalent(sigma, switched)
        assert det(adjacency_matrix(subset, switched, 3, 4)) == (
            det(adjacency_matrix(subset, sigma, 3, 4))
        )

def test_sign_alteration_validation() -> None:

    with pytest.raises(DomainError):
        SignAlteration(((1, -1), (1, 1)))

    with pytest.raises(DomainError):
        SignAlteration(((-1, 1), (1, 1)))

def test_fingerprint_is_a_class_invariant() -> None:

    image = MinorSet.of("{2};{4}", "{3};{2}", "{2,3};{2,4}")
    moved = MinorSet.of("{2};{3}", "{3};{2}", "{2,3};{2,3}")

    assert fingerprint(image) == fingerprint(COMPONENT)
    assert fingerprint(moved) == fingerprint(COMPONENT)
    assert fingerprint(CLIQUE) == "*rr/r*r/rr*"

def test_sign_store_round_trip(tmp_path: Path) -> None:

    store = default_sign_store()
    path = tmp_path / "signs.txt"

    store.dump(path)

    loaded = SignStore.load(path)

    assert len(loaded) == len(store)
    assert set(loaded.records) == set(store.records)

def test_conjectured_three_by_three_table() -> None:

    assert conjectured_table(3, 3).entries == builtin_table(3, 3).entries
