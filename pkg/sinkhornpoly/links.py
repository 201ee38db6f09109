# links.py

import math
import logging
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from pathlib import Path
from dataclasses import dataclass, field
from typing import Iterable, Self, Sequence, ClassVar

from sinkhornpoly.errors import (
    DegenerateInputError, DimensionError, WorkLimitError, DomainError
)
from sinkhornpoly.exact_linalg import ExactMatrix, det
from sinkhornpoly.minors import MinorSpec, MinorSet

__all__ = [
    "LinkKind",
    "Confidence",
    "LinkGraph",
    "SignAlteration",
    "ConjecturedCoefficient",
    "SignStore",
    "link_type",
    "link_graph",
    "adjacency_matrix",
    "sign_switch",
    "switching_equivalent",
    "canonical_labels",
    "fingerprint",
    "default_sign_store",
    "conjectured_coefficient",
    "SIGN_STORE_PATH",
    "MAX_SWITCHING_VERTICES",
    "MAX_FINGERPRINT_VERTICES"
]

_logger = logging.getLogger(__name__)

SIGN_STORE_PATH = Path(__file__).parent / "data" / "sign_store.txt"

MAX_SWITCHING_VERTICES = 20
MAX_FINGERPRINT_VERTICES = 12
MAX_CANONICAL_ORDERINGS = 10 ** 6

class LinkKind(Enum):
    """The kind of link between two minor specifications."""

    TYPE1 = "type1"
    TYPE2_ROW = "type2-row"
    TYPE2_COL = "type2-col"
    NONE = "none"

class Confidence(Enum):
    """How much a conjectured coefficient can be trusted."""

    PROVED_CASE = "proved"
    VERIFIED_FORM = "verified"
    UNVERIFIED_SIGNS = "unverified"

def link_type(p: MinorSpec, q: MinorSpec) -> LinkKind:
    """
    Classifies the link between two distinct specifications.

    Sizes differing by one with componentwise containment give a type-1
    link. Equal sizes with equal rows and exactly one differing column
    give a row type-2 link, and symmetrically for columns.

    :param p: The first specification.
    :param q: The second specification.

    :return: The link kind.
    """

    if p == q:
        raise DegenerateInputError(
            f"A specification is not linked to itself: {p.encode()}."
        )

    if abs(p.size - q.size) == 1:
        small, large = (p, q) if p.size < q.size else (q, p)

        if (
            set(small.rows) <= set(large.rows) and
            set(small.columns) <= set(large.columns)
        ):
            return LinkKind.TYPE1

        return LinkKind.NONE

    if p.size != q.size:
        return LinkKind.NONE

    if p.rows == q.rows and len(set(p.columns) - set(q.columns)) == 1:
        return LinkKind.TYPE2_ROW

    if p.columns == q.columns and len(set(p.rows) - set(q.rows)) == 1:
        return LinkKind.TYPE2_COL

    return LinkKind.NONE

@dataclass(frozen=True)
class LinkGraph:
    """The graph on the members of S whose edges join linked pairs."""

    vertices: tuple[MinorSpec, ...]
    edges: dict[tuple[int, int], LinkKind] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:

        for (i, j), kind in self.edges.items():
            if not 0 <= i < j < len(self.vertices):
                raise DimensionError(f"Invalid edge ({i}, {j}) in a link graph.")

            if kind is LinkKind.NONE:
                raise DomainError(f"Edge ({i}, {j}) has no link.")

    def kind(self, i: int, j: int) -> LinkKind:
        """
        Returns the link kind between two vertices.

        :param i: The first vertex index.
        :param j: The second vertex index.

        :return: The link kind, NONE when not adjacent.
        """

        return self.edges.get((min(i, j), max(i, j)), LinkKind.NONE)

    def neighbors(self, i: int) -> list[int]:
        """
        Returns the vertices adjacent to a vertex.

        :param i: The vertex index.

        :return: The adjacent vertex indices.
        """

        return [
            j for j in range(len(self.vertices))
            if j != i and self.kind(i, j) is not LinkKind.NONE
        ]

    @property
    def components(self) -> list[tuple[int, ...]]:
        """
        Returns the connected components as sorted vertex index tuples.

        :return: The components, ordered by their first vertex.
        """

        seen = set()
        components = []

        for start in range(len(self.vertices)):
            if start in seen:
                continue

            stack = [start]
            component = set()

            while stack:
                vertex = stack.pop()

                if vertex in component:
                    continue

                component.add(vertex)
                stack.extend(self.neighbors(vertex))

            seen |= component
            components.append(tuple(sorted(component)))

        return components

    def is_forest(self) -> bool:
        """
        Checks if the graph has no cycles.

        :return: The validation value.
        """

        return len(self.edges) == len(self.vertices) - len(self.components)

    def subgraph(self, indices: Sequence[int]) -> Self:
        """
        Returns the induced subgraph on some vertices, in the given order.

        :param indices: The vertex indices.

        :return: The induced subgraph.
        """

        position = {old: new for new, old in enumerate(indices)}

        return type(self)(
            vertices=tuple(self.vertices[i] for i in indices),
            edges={
                (min(position[i], position[j]), max(position[i], position[j])): kind
                for (i, j), kind in self.edges.items()
                if i in position and j in position
            }
        )

    def label(self, i: int, j: int) -> str:
        """
        Returns the fingerprint label of the ordered vertex pair (i, j).

        :param i: The row vertex.
        :param j: The column vertex.

        :return: One of "*", "<", ">", "r", "c", ".".
        """

        if i == j:
            return "*"

        kind = self.kind(i, j)

        if kind is LinkKind.TYPE1:
            return "<" if self.vertices[i].size < self.vertices[j].size else ">"

        return {LinkKind.TYPE2_ROW: "r", LinkKind.TYPE2_COL: "c"}.get(kind, ".")

    def labels(self) -> list[list[str]]:
        """
        Returns the full label matrix of the graph.

        :return: The labels of every ordered vertex pair.
        """

        return [
            [self.label(i, j) for j in range(len(self.vertices))]
            for i in range(len(self.vertices))
        ]

def link_graph(subset: MinorSet | Iterable[MinorSpec]) -> LinkGraph:
    """
    Builds the link graph of a subset, with vertices in basis order.

    :param subset: The subset S.

    :return: The link graph, whose components partition S.
    """

    vertices = tuple(subset) if isinstance(subset, MinorSet) else MinorSet(tuple(subset)).members
    edges = {}

    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            kind = link_type(vertices[i], vertices[j])

            if kind is not LinkKind.NONE:
                edges[i, j] = kind

    return LinkGraph(vertices=vertices, edges=edges)

@dataclass(frozen=True)
class SignAlteration:
    """A symmetric ±1 matrix with unit diagonal, altering the off-diagonal signs."""

    signs: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:

        signs = tuple(tuple(int(value) for value in row) for row in self.signs)
        size = len(signs)

        for i, row in enumerate(signs):
            if len(row) != size:
                raise DimensionError(
                    f"Sign alteration must be square, row {i} has {len(row)} entries."
                )

            if row[i] != 1:
                raise DomainError(f"Sign alteration diagonal must be +1 at {i}.")

            for j, value in enumerate(row):
                if value not in (1, -1):
                    raise DomainError(f"Sign alteration entries must be ±1, got {value}.")

                if value != signs[j][i]:
                    raise DomainError(f"Sign alteration is not symmetric at ({i}, {j}).")

        object.__setattr__(self, "signs", signs)

    @classmethod
    def identity(cls, size: int) -> Self:
        """
        Creates the alteration that changes no sign.

        :param size: The number of vertices.

        :return: The all +1 alteration.
        """

        return cls(tuple(tuple(1 for _ in range(size)) for _ in range(size)))

    @classmethod
    def negating(cls, size: int, pairs: Iterable[tuple[int, int]]) -> Self:
        """
        Creates the alteration that negates the given vertex pairs.

        :param size: The number of vertices.
        :param pairs: The negated pairs.

        :return: The alteration.
        """

        signs = [[1] * size for _ in range(size)]

        for i, j in pairs:
            signs[i][j] = signs[j][i] = -1

        return cls(tuple(tuple(row) for row in signs))

    @property
    def size(self) -> int:
        """
        Returns the number of vertices.

        :return: The matrix size.
        """

        return len(self.signs)

    def __getitem__(self, key: tuple[int, int]) -> int:

        return self.signs[key[0]][key[1]]

    def permute(self, order: Sequence[int]) -> Self:
        """
        Reorders the vertices, position p of the result is vertex order[p].

        :param order: The vertex order.

        :return: The reordered alteration.
        """

        return type(self)(
            tuple(tuple(self.signs[a][b] for b in order) for a in order)
        )

    def encode(self) -> str:
        """
        Encodes the entries in row-major order.

        :return: The space separated ±1 entries.
        """

        return " ".join(str(value) for row in self.signs for value in row)

def adjacency_matrix(
        subset: MinorSet | LinkGraph,
        sigma: SignAlteration,
        m: int,
        n: int
) -> ExactMatrix:
    """
    Builds the signed adjacency-style matrix of S, scaled by 1/m.

    Diagonal entries are (|R|(m + n) - mn)/m. Off-diagonal entries are
    σ/m times +m in the row of the smaller vertex of a type-1 link and
    -n in the row of the larger one, -m for row type-2 links, -n for
    column type-2 links and 0 otherwise.

    :param subset: The subset S or its link graph.
    :param sigma: The sign alteration.
    :param m: The number of matrix rows.
    :param n: The number of matrix columns.

    :return: The |S|x|S| matrix.
    """

    graph = subset if isinstance(subset, LinkGraph) else link_graph(subset)
    size = len(graph.vertices)

    if sigma.size != size:
        raise DimensionError(
            f"Sign alteration has size {sigma.size} but the subset has {size} members."
        )

    rows = []

    for i, p in enumerate(graph.vertices):
        row = []

        for j, q in enumerate(graph.vertices):
            if i == j:
                row.append(Fraction(p.size * (m + n) - m * n, m))

                continue

            kind = graph.kind(i, j)

            if kind is LinkKind.TYPE1:
                base = m if p.size < q.size else -n

            elif kind is LinkKind.TYPE2_ROW:
                base = -m

            elif kind is LinkKind.TYPE2_COL:
                base = -n

            else:
                base = 0

            row.append(Fraction(sigma[i, j] * base, m))

        rows.append(row)

    return ExactMatrix.from_rows(rows) if rows else ExactMatrix(0, 0, ())

def sign_switch(sigma: SignAlteration, vertices: Iterable[int]) -> SignAlteration:
    """
    Negates the rows and columns of some vertices, keeping the diagonal at +1.

    :param sigma: The sign alteration.
    :param vertices: The zero-based vertex indices to switch.

    :return: The switched alteration.
    """

    switched = set(vertices)

    for i in switched:
        if not 0 <= i < sigma.size:
            raise DimensionError(f"Vertex {i} is outside a size {sigma.size} alteration.")

    return SignAlteration(
        tuple(
            tuple(
                value if (i in switched) == (j in switched) else -value
                for j, value in enumerate(row)
            )
            for i, row in enumerate(sigma.signs)
        )
    )

def switching_equivalent(first: SignAlteration, second: SignAlteration) -> bool:
    """
    Decides if two alterations differ by a switching, searching every vertex set.

    :param first: The first alteration.
    :param second: The second alteration.

    :return: The equivalence value.
    """

    if first.size != second.size:
        return False

    if first.size > MAX_SWITCHING_VERTICES:
        raise WorkLimitError(
            f"Switching search over {first.size} vertices exceeds the limit "
            f"of {MAX_SWITCHING_VERTICES}."
        )

    size = first.size

    for mask in range(1 << size):
        vertices = [i for i in range(size) if mask >> i & 1]

        if sign_switch(first, vertices) == second:
            return True

    return False

def _transpose_labels(labels: Sequence[Sequence[str]]) -> list[list[str]]:

    swap = {"r": "c", "c": "r"}

    return [[swap.get(label, label) for label in row] for row in labels]

def _is_twin(labels: Sequence[Sequence[str]], u: int, v: int) -> bool:

    if labels[u][v] != labels[v][u]:
        return False

    return all(
        labels[u][w] == labels[v][w]
        for w in range(len(labels)) if w not in (u, v)
    )

def canonical_labels(labels: Sequence[Sequence[str]]) -> tuple[str, tuple[int, ...]]:
    """
    Finds the least label-matrix string over invariant-respecting vertex orders.

    Vertices are split into cells by their label multiset, refined once
    by their neighbors' cells. A cell of mutual twins keeps one order,
    other cells are searched over all their orders.

    :param labels: The square label matrix.

    :return: The fingerprint and the order, position p holding vertex order[p].
    """

    size = len(labels)

    if size > MAX_FINGERPRINT_VERTICES:
        raise WorkLimitError(
            f"Fingerprints support at most {MAX_FINGERPRINT_VERTICES} "
            f"vertices, got {size}."
        )

    first = ["".join(sorted(row)) for row in labels]
    second = [
        first[i] + "|" + ",".join(
            sorted(labels[i][j] + first[j] for j in range(size) if j != i)
        )
        for i in range(size)
    ]

    cells: dict[str, list[int]] = {}

    for i in range(size):
        cells.setdefault(second[i], []).append(i)

    options = []
    work = 1

    for key in sorted(cells):
        cell = cells[key]

        if all(_is_twin(labels, u, v) for u in cell for v in cell if u < v):
            options.append([tuple(cell)])

        else:
            work *= math.factorial(len(cell))
            options.append(list(permutations(cell)))

    if work > MAX_CANONICAL_ORDERINGS:
        raise WorkLimitError(
            f"Fingerprint search needs {work} orderings, more than "
            f"the limit of {MAX_CANONICAL_ORDERINGS}."
        )

    best: tuple[str, tuple[int, ...]] | None = None

    for choice in product(*options):
        order = tuple(vertex for part in choice for vertex in part)
        text = "/".join("".join(labels[a][b] for b in order) for a in order)

        if best is None or text < best[0]:
            best = (text, order)

    return best if best is not None else ("", ())

def fingerprint(subset: MinorSet | LinkGraph) -> str:
    """
    Returns the canonical link-structure fingerprint of a subset.

    :param subset: The subset S or its link graph.

    :return: The fingerprint text.
    """

    graph = subset if isinstance(subset, LinkGraph) else link_graph(subset)

    return canonical_labels(graph.labels())[0]

def _parse_labels(text: str) -> list[list[str]]:

    labels = [list(row) for row in text.split("/")]

    for i, row in enumerate(labels):
        if len(row) != len(labels) or row[i] != "*":
            raise DomainError(f"Invalid link-structure fingerprint: {text!r}.")

        if any(label not in "*<>rc." for label in row):
            raise DomainError(f"Invalid label in fingerprint: {text!r}.")

    return labels

class SignStore:
    """Verified sign alterations keyed by link-structure fingerprint."""

    def __init__(self, records: dict[str, SignAlteration] = None) -> None:
        """
        Defines the attributes of the store.

        :param records: Canonical fingerprints mapped to alterations in canonical order.
        """

        if records is None:
            records = {}

        self.records = records

    def __len__(self) -> int:

        return len(self.records)

    def __contains__(self, key: str) -> bool:

        return key in self.records

    def insert(self, labels: Sequence[Sequence[str]], sigma: SignAlteration) -> str:
        """
        Stores an alteration given in any vertex order, with its transposed structure.

        :param labels: The label matrix of the structure.
        :param sigma: The alteration in the same vertex order.

        :return: The canonical fingerprint.
        """

        if sigma.size != len(labels):
            raise DimensionError(
                f"Sign alteration of size {sigma.size} does not fit "
                f"a structure of {len(labels)} vertices."
            )

        key = None

        for variant in (labels, _transpose_labels(labels)):
            text, order = canonical_labels(variant)
            canonical = sigma.permute(order)
            key = key or text

            existing = self.records.get(text)

            if existing is None:
                self.records[text] = canonical

            elif existing != canonical and not switching_equivalent(existing, canonical):
                _logger.warning(
                    f"Conflicting sign alteration for structure {text}, "
                    f"keeping the first record."
                )

        return key

    def insert_graph(self, graph: LinkGraph, sigma: SignAlteration) -> str:
        """
        Stores an alteration for a link graph.

        :param graph: The link graph.
        :param sigma: The alteration in the graph's vertex order.

        :return: The canonical fingerprint.
        """

        return self.insert(graph.labels(), sigma)

    def lookup(self, graph: LinkGraph) -> SignAlteration | None:
        """
        Finds the verified alteration of a connected structure, in the graph's vertex order.

        Forests need no record since every alteration of a forest is a
        switching of the identity.

        :param graph: The link graph.

        :return: The alteration, or None when nothing is on file.
        """

        if graph.is_forest():
            return SignAlteration.identity(len(graph.vertices))

        text, order = canonical_labels(graph.labels())
        canonical = self.records.get(text)

        if canonical is None:
            return None

        size = len(order)
        signs = [[1] * size for _ in range(size)]

        for p in range(size):
            for q in range(size):
                signs[order[p]][order[q]] = canonical[p, q]

        return SignAlteration(tuple(tuple(row) for row in signs))

    @classmethod
    def parse(cls, text: str) -> Self:
        """
        Parses the store text: one record per line, a fingerprint then |S|² signs.

        :param text: The store text.

        :return: The store.
        """

        store = cls()

        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split("#")[0].strip()

            if not line:
                continue

            parts = line.split()
            labels = _parse_labels(parts[0])
            size = len(labels)

            if len(parts) != 1 + size * size:
                raise DimensionError(
                    f"Sign store line {number} needs {size * size} signs, "
                    f"got {len(parts) - 1}."
                )

            values = [int(value) for value in parts[1:]]
            sigma = SignAlteration(
                tuple(tuple(values[i * size:(i + 1) * size]) for i in range(size))
            )

            store.insert(labels, sigma)

        return store

    @classmethod
    def load(cls, path: str | Path = None) -> Self:
        """
        Loads a store file, the shipped store by default.

        :param path: The store file path.

        :return: The store.
        """

        with open(path or SIGN_STORE_PATH, "r", encoding="utf-8") as file:
            return cls.parse(file.read())

    def dump(self, path: str | Path) -> None:
        """
        Writes the store in canonical form.

        :param path: The store file path.
        """

        with open(path, "w", encoding="utf-8") as file:
            for text in sorted(self.records):
                file.write(f"{text} {self.records[text].encode()}\n")

@lru_cache(maxsize=1)
def default_sign_store() -> SignStore:
    """
    Returns the shipped sign store, loaded once.

    :return: The shipped store.
    """

    return SignStore.load()

@dataclass(frozen=True)
class ConjecturedCoefficient:
    """A conjectured c_S(m, n) with the confidence of its sign alterations."""

    value: Fraction
    confidence: Confidence

    VALUE: ClassVar[str] = "value"
    CONFIDENCE: ClassVar[str] = "confidence"

    def dump(self) -> dict[str, str]:
        """
        Dumps the data of the object.

        :return: The data of the object.
        """

        return {self.VALUE: str(self.value), self.CONFIDENCE: self.confidence.value}

def conjectured_coefficient(
        subset: MinorSet,
        m: int,
        n: int,
        sign_store: SignStore = None
) -> ConjecturedCoefficient:
    """
    Evaluates the conjectured c_S(m, n) as a product over link-graph components.

    Each component contributes the determinant of its adjacency matrix
    under the stored sign alteration, or under identity signs when none
    is on file.

    :param subset: The subset S.
    :param m: The number of matrix rows.
    :param n: The number of matrix columns.
    :param sign_store: The sign store, the shipped one by default.

    :return: The value and its confidence.
    """

    subset.validate(m, n)

    if sign_store is None:
        sign_store = default_sign_store()

    graph = link_graph(subset)
    value = Fraction(1)
    verified = True

    for component in graph.components:
        subgraph = graph.subgraph(component)
        sigma = sign_store.lookup(subgraph)

        if sigma is None:
            sigma = SignAlteration.identity(len(component))
            verified = False

        value *= det(adjacency_matrix(subgraph, sigma, m, n))

    if not subset.members or min(m, n) == 1:
        confidence = Confidence.PROVED_CASE

    elif verified:
        confidence = Confidence.VERIFIED_FORM

    else:
        confidence = Confidence.UNVERIFIED_SIGNS

    return ConjecturedCoefficient(value=value, confidence=confidence)
