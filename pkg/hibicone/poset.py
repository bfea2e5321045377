"""Finite posets and their augmentation by a bottom and a top element.

This module validates poset input, builds the Hasse diagram of
P̂ = P ∪ {0̂, 1̂} with a deterministic edge order, and exposes the
linear forms σ_e attached to its edges.
"""
import json
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Self

import networkx as nx

from hibicone.config import POSET
from hibicone.errors import PosetParseError, SpanningTreeError
from hibicone.utils import natural_key

logger = logging.getLogger(__name__)

Edge = tuple[str, str]


@dataclass(frozen=True)
class Poset:
    """A finite poset given by its elements and cover relations.

    A pair (a, b) in ``covers`` means b covers a.
    """

    elements: tuple[str, ...]
    covers: frozenset[Edge]

    @classmethod
    def from_covers(cls, elements: Iterable[str], covers: Iterable[Sequence[str]]) -> Self:
        """
        Build and validate a poset.

        Args:
            elements: Element labels
            covers: Pairs (a, b) meaning a ≺ b is a cover

        Returns:
            The validated poset

        Raises:
            PosetParseError: If labels repeat or are reserved, a cover names an
                unknown element, the covers contain a cycle, or a cover is
                implied by transitivity
        """
        labels = tuple(elements)
        if not labels:
            raise PosetParseError("Poset has no elements")
        seen: set[str] = set()
        for label in labels:
            if label in seen:
                raise PosetParseError(f"Duplicate label: {label!r}")
            if label in (POSET.bottom_label, POSET.top_label):
                raise PosetParseError(f"Label {label!r} is reserved for the augmented poset")
            seen.add(label)

        pairs: set[Edge] = set()
        for cover in covers:
            if len(cover) != 2:
                raise PosetParseError(f"Cover must be a pair, got {list(cover)!r}")
            lower, upper = cover
            for label in (lower, upper):
                if label not in seen:
                    raise PosetParseError(
                        f"Cover {lower!r} ≺ {upper!r} uses unknown label {label!r}"
                    )
            pairs.add((lower, upper))

        digraph = nx.DiGraph()
        digraph.add_nodes_from(labels)
        digraph.add_edges_from(pairs)
        if not nx.is_directed_acyclic_graph(digraph):
            cycle = nx.find_cycle(digraph)
            raise PosetParseError(
                "Covers contain a cycle: " + " ≺ ".join(lower for lower, _ in cycle)
            )
        reduced = set(nx.transitive_reduction(digraph).edges())
        redundant = sorted(pairs - reduced)
        if redundant:
            lower, upper = redundant[0]
            raise PosetParseError(
                f"Cover {lower!r} ≺ {upper!r} is implied by transitivity"
            )
        return cls(labels, frozenset(pairs))

    def __len__(self) -> int:
        return len(self.elements)

    def minimal(self) -> list[str]:
        uppers = {upper for _, upper in self.covers}
        return [p for p in self.elements if p not in uppers]

    def maximal(self) -> list[str]:
        lowers = {lower for lower, _ in self.covers}
        return [p for p in self.elements if p not in lowers]

    def to_dict(self) -> dict[str, Any]:
        """Serialize to the poset document format."""
        return {
            "elements": list(self.elements),
            "covers": [list(pair) for pair in sorted(self.covers, key=_edge_sort_key)],
        }


def _vertex_key(label: str) -> tuple[int, tuple[str | int, ...]]:
    if label == POSET.bottom_label:
        return (0, ())
    if label == POSET.top_label:
        return (2, ())
    return (1, natural_key(label))


def _edge_sort_key(edge: Edge) -> tuple[Any, ...]:
    return (_vertex_key(edge[0]), _vertex_key(edge[1]))


def parse_poset(text: str) -> Poset:
    """
    Parse a poset document.

    The document is JSON of the form
    {"elements": ["p1", ...], "covers": [["p1", "p2"], ...]}.

    Args:
        text: UTF-8 document text

    Returns:
        The validated poset

    Raises:
        PosetParseError: If the document is malformed or the poset is invalid
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise PosetParseError(f"Malformed poset document: {e}") from e

    if not isinstance(document, dict):
        raise PosetParseError("Poset document must be a JSON object")
    elements = document.get("elements")
    covers = document.get("covers", [])
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise PosetParseError('"elements" must be a list of strings')
    if not isinstance(covers, list) or not all(
        isinstance(c, list) and all(isinstance(x, str) for x in c) for c in covers
    ):
        raise PosetParseError('"covers" must be a list of label pairs')
    return Poset.from_covers(elements, covers)


def disjoint_chains(lengths: Sequence[int]) -> Poset:
    """
    Build the disjoint union of chains.

    Chain i (1-based) has elements p{i}_1 ≺ p{i}_2 ≺ ... ≺ p{i}_{lengths[i-1]}.
    This is the poset whose Hibi ring is a Segre product of polynomial rings.

    Args:
        lengths: Number of elements in each chain

    Returns:
        The poset

    Raises:
        PosetParseError: If a chain length is not positive
    """
    if any(length < 1 for length in lengths):
        raise PosetParseError(f"Chain lengths must be positive, got {list(lengths)}")
    elements = [f"p{i}_{j}" for i, length in enumerate(lengths, 1) for j in range(1, length + 1)]
    covers = [
        (f"p{i}_{j}", f"p{i}_{j + 1}")
        for i, length in enumerate(lengths, 1)
        for j in range(1, length)
    ]
    return Poset.from_covers(elements, covers)


@dataclass(frozen=True)
class AugmentedPoset:
    """P̂ = P ∪ {0̂, 1̂} with its Hasse edges e_1..e_n in a fixed order.

    Coordinates are x_0 for 0̂ and x_k for the k-th element of the base
    poset; 1̂ carries no coordinate. Edge indices are 0-based internally
    and labelled e1..en for display.
    """

    base: Poset
    edges: tuple[Edge, ...]
    _coordinates: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        coordinates = {POSET.bottom_label: 0}
        coordinates.update({label: k for k, label in enumerate(self.base.elements, 1)})
        object.__setattr__(self, "_coordinates", coordinates)

    @property
    def n(self) -> int:
        """Number of Hasse edges of P̂."""
        return len(self.edges)

    @property
    def d(self) -> int:
        """Dimension of the Hibi ring, |P| + 1."""
        return len(self.base) + 1

    @property
    def bottom(self) -> str:
        return POSET.bottom_label

    @property
    def top(self) -> str:
        return POSET.top_label

    @property
    def vertices(self) -> tuple[str, ...]:
        return (self.bottom, *self.base.elements, self.top)

    def coordinate(self, label: str) -> int | None:
        """Index of the coordinate of an element of P̂ (None for 1̂)."""
        if label == self.top:
            return None
        try:
            return self._coordinates[label]
        except KeyError as e:
            raise PosetParseError(f"Unknown element {label!r}") from e

    def vertex_key(self, label: str) -> tuple[int, tuple[str | int, ...]]:
        return _vertex_key(label)

    @cached_property
    def _edge_indices(self) -> dict[Edge, int]:
        return {edge: i for i, edge in enumerate(self.edges)}

    def edge_index(self, lower: str, upper: str) -> int:
        """
        Look up the index of the Hasse edge lower ≺ upper.

        Raises:
            SpanningTreeError: If there is no such edge
        """
        try:
            return self._edge_indices[(lower, upper)]
        except KeyError as e:
            raise SpanningTreeError(f"No Hasse edge {lower!r} ≺ {upper!r}") from e

    def edge_label(self, index: int) -> str:
        return f"{POSET.edge_prefix}{index + 1}"

    def parse_edge_ref(self, token: str) -> int:
        """
        Resolve an edge reference: a label such as "e3" or a pair "lower-upper".

        Raises:
            SpanningTreeError: If the reference names no edge
        """
        token = token.strip()
        prefix = POSET.edge_prefix
        if token.startswith(prefix) and token[len(prefix) :].isdigit():
            index = int(token[len(prefix) :]) - 1
            if not 0 <= index < self.n:
                raise SpanningTreeError(f"Edge {token!r} out of range 1..{self.n}")
            return index
        if "-" in token:
            lower, upper = token.split("-", 1)
            return self.edge_index(lower, upper)
        raise SpanningTreeError(f"Cannot read edge reference {token!r}")

    def graph(self) -> nx.Graph:
        """Undirected Hasse diagram; each edge carries its ``index``."""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for i, (lower, upper) in enumerate(self.edges):
            graph.add_edge(lower, upper, index=i)
        return graph

    def digraph(self) -> nx.DiGraph:
        """Hasse diagram oriented upward."""
        digraph = nx.DiGraph()
        digraph.add_nodes_from(self.vertices)
        for i, (lower, upper) in enumerate(self.edges):
            digraph.add_edge(lower, upper, index=i)
        return digraph

    def sigma(self, index: int) -> tuple[int, ...]:
        """Coefficient vector of σ_e over R^d for the edge with the given index."""
        lower, upper = self.edges[index]
        vector = [0] * self.d
        vector[self._coordinates[lower]] += 1
        if upper != self.top:
            vector[self._coordinates[upper]] -= 1
        return tuple(vector)

    def is_pure(self) -> bool:
        return is_pure(self.base)


def augment(poset: Poset) -> AugmentedPoset:
    """
    Add 0̂ below every minimal and 1̂ above every maximal element.

    Edges are sorted by (lower, upper) with 0̂ first, 1̂ last and element
    labels in natural order.

    Args:
        poset: Validated poset

    Returns:
        The augmented poset
    """
    edges = list(poset.covers)
    edges.extend((POSET.bottom_label, p) for p in poset.minimal())
    edges.extend((p, POSET.top_label) for p in poset.maximal())
    edges.sort(key=_edge_sort_key)
    logger.debug("Augmented poset with %d elements has %d Hasse edges", len(poset), len(edges))
    return AugmentedPoset(poset, tuple(edges))


def is_pure(poset: Poset) -> bool:
    """
    Check whether all maximal chains of P̂ have the same length.

    Maximal chains of P̂ are exactly the 0̂ → 1̂ paths of the upward
    Hasse diagram, so the poset is pure iff the shortest and the longest
    such path agree. Pure posets give Gorenstein Hibi rings.

    Args:
        poset: Validated poset

    Returns:
        True if the poset is pure
    """
    digraph = augment(poset).digraph()
    longest = nx.dag_longest_path_length(digraph)
    shortest = nx.shortest_path_length(digraph, POSET.bottom_label, POSET.top_label)
    return bool(longest == shortest)


def sigma_forms(ap: AugmentedPoset) -> list[tuple[int, ...]]:
    """
    Get the σ_e coefficient vectors of all edges, in edge order.

    For e = (p_i, p_j) the form is x_i − x_j, with x_j = 0 when p_j = 1̂.

    Args:
        ap: Augmented poset

    Returns:
        One integer vector of length d per edge
    """
    return [ap.sigma(i) for i in range(ap.n)]
