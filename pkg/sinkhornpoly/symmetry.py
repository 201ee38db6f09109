# symmetry.py

import math
import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from dataclasses import dataclass
from typing import Self, ClassVar

from sinkhornpoly.errors import UnsupportedAmbientError, WorkLimitError
from sinkhornpoly.exact_linalg import ExactMatrix
from sinkhornpoly.minors import (
    MinorSpec, MinorSet, MinorCache, minor_basis
)

__all__ = [
    "ClassRep",
    "DEFAULT_WORK_LIMIT",
    "group_order",
    "group_actions",
    "apply_action",
    "orbit",
    "orbit_masks",
    "canonical_form",
    "class_rep",
    "enumerate_classes",
    "class_sum",
    "class_sum_ratio",
    "dual_subset",
    "transpose_subset"
]

_logger = logging.getLogger(__name__)

DEFAULT_WORK_LIMIT = 10 ** 7

def group_order(m: int, n: int) -> int:
    """
    Returns the order of the symmetry group acting on D(m, n).

    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: (m - 1)!·(n - 1)!, doubled when the matrix is square.
    """

    return math.factorial(m - 1) * math.factorial(n - 1) * (2 if m == n else 1)

@lru_cache(maxsize=None)
def group_actions(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    """
    Returns every group element as a permutation of the basis indices of D(m, n).

    Row permutations fix row 1, column permutations fix column 1 and
    transposition is included when m = n. Row permutations are applied
    before column permutations.

    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: One basis permutation per group element.
    """

    basis = minor_basis(m, n)
    rows = list(range(2, m + 1))
    columns = list(range(2, n + 1))
    actions = []

    for row_image in permutations(rows):
        row_map = dict(zip(rows, row_image))

        for column_image in permutations(columns):
            column_map = dict(zip(columns, column_image))

            for transpose in ((False, True) if m == n else (False,)):
                images = []

                for spec in basis:
                    image = MinorSpec(
                        rows=tuple(row_map[i] for i in spec.rows),
                        columns=tuple(column_map[j] for j in spec.columns)
                    )

                    if transpose:
                        image = image.transpose()

                    images.append(basis.index(image))

                actions.append(tuple(images))

    return tuple(actions)

def apply_action(action: tuple[int, ...], mask: int) -> int:
    """
    Applies a basis permutation to a subset mask.

    :param action: The basis permutation.
    :param mask: The subset mask.

    :return: The image mask.
    """

    image = 0
    i = 0

    while mask:
        if mask & 1:
            image |= 1 << action[i]

        mask >>= 1
        i += 1

    return image

def orbit_masks(mask: int, m: int, n: int) -> set[int]:
    """
    Returns the orbit of a subset mask under the symmetry group.

    :param mask: The subset mask over D(m, n).
    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: The set of image masks.
    """

    return {apply_action(action, mask) for action in group_actions(m, n)}

def orbit(subset: MinorSet, m: int, n: int) -> list[MinorSet]:
    """
    Returns the orbit of a subset, sorted by encoding.

    :param subset: The subset S.
    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: The distinct images of S.
    """

    basis = minor_basis(m, n)

    return sorted(
        (basis.from_mask(image) for image in orbit_masks(basis.mask(subset), m, n)),
        key=MinorSet.encode
    )

@lru_cache(maxsize=None)
def _spec_texts(m: int, n: int) -> tuple[str, ...]:

    return tuple(spec.encode() for spec in minor_basis(m, n))

def _encode_mask(mask: int, texts: tuple[str, ...]) -> str:

    if not mask:
        return MinorSet.EMPTY

    return MinorSet.JOIN.join(
        texts[i] for i in range(mask.bit_length()) if mask >> i & 1
    )

def _least(masks: set[int], m: int, n: int) -> tuple[int, MinorSet]:

    texts = _spec_texts(m, n)
    mask = min(masks, key=lambda value: _encode_mask(value, texts))

    return mask, minor_basis(m, n).from_mask(mask)

def canonical_form(subset: MinorSet, m: int, n: int) -> MinorSet:
    """
    Returns the image of a subset with the least encoding under the symmetry group.

    :param subset: The subset S.
    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: The canonical representative of the class of S.
    """

    subset.validate(m, n)

    return _least(orbit_masks(minor_basis(m, n).mask(subset), m, n), m, n)[1]

@dataclass(frozen=True)
class ClassRep:
    """An equivalence class of subsets, named by its canonical representative."""

    rep: MinorSet
    size: int
    ambient: tuple[int, int]

    SEPARATOR: ClassVar[str] = "\t"

    @property
    def k(self) -> int:
        """
        Returns the number of specifications in each member of the class.

        :return: The subset size |S|.
        """

        return len(self.rep)

    def members(self) -> list[MinorSet]:
        """
        Returns every subset in the class.

        :return: The orbit of the representative.
        """

        return orbit(self.rep, *self.ambient)

    def encode(self) -> str:
        """
        Encodes the class as the representative encoding and the class size.

        :return: The class text.
        """

        return f"{self.rep.encode()}{self.SEPARATOR}{self.size}"

    @classmethod
    def decode(cls, text: str, m: int, n: int) -> Self:
        """
        Decodes a class from its text.

        :param text: The class text.
        :param m: The number of matrix rows.
        :param n: The number of matrix columns.

        :return: The class.
        """

        rep, size = text.rstrip("\n").split(cls.SEPARATOR)

        return cls(rep=MinorSet.decode(rep), size=int(size), ambient=(m, n))

def class_rep(subset: MinorSet, m: int, n: int) -> ClassRep:
    """
    Returns the class of a subset.

    :param subset: Any member of the class.
    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: The class with its canonical representative and size.
    """

    subset.validate(m, n)

    masks = orbit_masks(minor_basis(m, n).mask(subset), m, n)

    return ClassRep(rep=_least(masks, m, n)[1], size=len(masks), ambient=(m, n))

def enumerate_classes(m: int, n: int, k: int, limit: int = None) -> list[ClassRep]:
    """
    Partitions the size-k subsets of D(m, n) into their equivalence classes.

    Subsets are visited in combination order. The orbit of each
    unseen subset is computed once and its members are marked, so each
    class is found exactly once and the marks are dropped as the
    members are visited.

    :param m: The number of matrix rows.
    :param n: The number of matrix columns.
    :param k: The subset size.
    :param limit: The maximum number of subsets to visit.

    :return: The classes, sorted by representative encoding.
    """

    basis = minor_basis(m, n)

    if not 0 <= k <= len(basis):
        return []

    if limit is None:
        limit = DEFAULT_WORK_LIMIT

    total = math.comb(len(basis), k)

    if total > limit:
        raise WorkLimitError(
            f"D({m}, {n}) has {total} subsets of size {k}, "
            f"more than the work limit of {limit}."
        )

    pending: set[int] = set()
    classes = []

    for indices in combinations(range(len(basis)), k):
        mask = 0

        for i in indices:
            mask |= 1 << i

        if mask in pending:
            pending.discard(mask)

            continue

        masks = orbit_masks(mask, m, n)
        masks.discard(mask)
        pending |= masks

        classes.append(
            ClassRep(
                rep=_least(masks | {mask}, m, n)[1],
                size=len(masks) + 1,
                ambient=(m, n)
            )
        )

    _logger.debug(f"D({m}, {n}) has {len(classes)} classes of size {k}.")

    return sorted(classes, key=lambda c: c.rep.encode())

def class_sum(matrix: ExactMatrix | MinorCache, rep: ClassRep | MinorSet) -> Fraction:
    """
    Returns Σ(S), the sum of M(T) over the class of S.

    :param matrix: The matrix A, or its minor cache.
    :param rep: The class, or any member of it.

    :return: The exact class sum.
    """

    cache = matrix if isinstance(matrix, MinorCache) else MinorCache(matrix)
    m, n = cache.basis.ambient
    subset = rep.rep if isinstance(rep, ClassRep) else rep

    return sum(
        (
            cache.masked_monomial(mask)
            for mask in orbit_masks(cache.basis.mask(subset), m, n)
        ),
        Fraction(0)
    )

def class_sum_ratio(matrix: ExactMatrix | MinorCache, rep: ClassRep | MinorSet) -> Fraction:
    """
    Returns Σ(S)/M({}), summing Δ/Γ ratio products over the class of S.

    :param matrix: The matrix A, or its minor cache.
    :param rep: The class, or any member of it.

    :return: The exact class sum ratio.
    """

    cache = matrix if isinstance(matrix, MinorCache) else MinorCache(matrix)
    m, n = cache.basis.ambient
    subset = rep.rep if isinstance(rep, ClassRep) else rep

    return sum(
        (
            cache.ratio(mask)
            for mask in orbit_masks(cache.basis.mask(subset), m, n)
        ),
        Fraction(0)
    )

def dual_subset(subset: MinorSet, n: int, m: int = None) -> MinorSet:
    """
    Returns the complement-flip dual {(E ∖ R, E ∖ C) : (R, C) ∈ D(n, n) ∖ S} with E = {2..n}.

    :param subset: The subset S.
    :param n: The size of the square matrix.
    :param m: The number of matrix rows, when it needs checking against n.

    :return: The dual subset.
    """

    if m is not None and m != n:
        raise UnsupportedAmbientError(
            f"Subset duality is defined for square matrices only, got ({m}, {n})."
        )

    basis = minor_basis(n, n)
    everything = set(range(2, n + 1))

    return MinorSet(
        tuple(
            MinorSpec(
                rows=tuple(everything - set(spec.rows)),
                columns=tuple(everything - set(spec.columns))
            )
            for spec in basis.complement(subset)
        )
    )

def transpose_subset(subset: MinorSet) -> MinorSet:
    """
    Replaces every (R, C) by (C, R), moving the subset from D(m, n) to D(n, m).

    :param subset: The subset S.

    :return: The transposed subset.
    """

    return subset.transpose()
