"""Spanning trees, fundamental cycles and circuits of the Hasse diagram of P̂."""
import logging
import random
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Self

import networkx as nx

from hibicone.errors import SpanningTreeError
from hibicone.poset import AugmentedPoset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree of the Hasse diagram of P̂, by edge index."""

    poset: AugmentedPoset = field(repr=False, compare=False)
    tree_edges: frozenset[int]
    cotree_edges: tuple[int, ...]

    @classmethod
    def from_edges(cls, ap: AugmentedPoset, edges: Iterable[int]) -> Self:
        """
        Validate an edge set as a spanning tree.

        Raises:
            SpanningTreeError: If an index is out of range or the edges do not
                form a spanning tree
        """
        chosen = frozenset(edges)
        if any(not 0 <= i < ap.n for i in chosen):
            raise SpanningTreeError(f"Edge index out of range 0..{ap.n - 1}: {sorted(chosen)}")
        subgraph = nx.Graph()
        subgraph.add_nodes_from(ap.vertices)
        subgraph.add_edges_from(ap.edges[i] for i in chosen)
        if len(chosen) != ap.d or not nx.is_tree(subgraph):
            labels = ", ".join(ap.edge_label(i) for i in sorted(chosen))
            raise SpanningTreeError(f"Edges {{{labels}}} do not form a spanning tree of P̂")
        cotree = tuple(i for i in range(ap.n) if i not in chosen)
        return cls(ap, chosen, cotree)

    @property
    def rank(self) -> int:
        return len(self.cotree_edges)

    def labels(self) -> list[str]:
        return [self.poset.edge_label(i) for i in sorted(self.tree_edges)]

    def path(self, source: str, target: str) -> list[str]:
        """Vertices of the unique tree path from source to target."""
        graph = nx.Graph()
        graph.add_nodes_from(self.poset.vertices)
        graph.add_edges_from(self.poset.edges[i] for i in self.tree_edges)
        return list(nx.shortest_path(graph, source, target))


@dataclass(frozen=True)
class Cycle:
    """A cycle of the Hasse diagram as a cyclic vertex sequence."""

    vertices: tuple[str, ...]
    is_circuit: bool

    def __len__(self) -> int:
        return len(self.vertices)

    def reversed(self) -> "Cycle":
        return Cycle(self.vertices[::-1], self.is_circuit)

    def steps(self) -> list[tuple[str, str]]:
        m = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % m]) for i in range(m)]

    def edges(self, ap: AugmentedPoset) -> list[tuple[int, bool]]:
        """
        Traverse the cycle.

        Returns:
            (edge index, traversed upward) for each step, in traversal order
        """
        result = []
        digraph = ap.digraph()
        for u, v in self.steps():
            if digraph.has_edge(u, v):
                result.append((ap.edge_index(u, v), True))
            else:
                result.append((ap.edge_index(v, u), False))
        return result


@dataclass(frozen=True)
class CyclePartition:
    """Edges of a cycle split by orientation (X), then by tree (Y) and cotree (Z)."""

    x_plus: frozenset[int]
    x_minus: frozenset[int]
    y_plus: frozenset[int]
    y_minus: frozenset[int]
    z_plus: frozenset[int]
    z_minus: frozenset[int]


def choose_spanning_tree(ap: AugmentedPoset, seed: Iterable[int] | None = None) -> SpanningTree:
    """
    Fix a spanning tree of P̂.

    Without a seed this is the breadth-first tree from 0̂ that scans the
    edges at each vertex in index order.

    Args:
        ap: Augmented poset
        seed: Explicit edge indices to use instead

    Returns:
        The spanning tree

    Raises:
        SpanningTreeError: If the seed is not a spanning tree
    """
    if seed is not None:
        return SpanningTree.from_edges(ap, seed)

    incident: dict[str, list[int]] = {v: [] for v in ap.vertices}
    for i, (lower, upper) in enumerate(ap.edges):
        incident[lower].append(i)
        incident[upper].append(i)

    visited = {ap.bottom}
    queue = deque([ap.bottom])
    chosen: list[int] = []
    while queue:
        vertex = queue.popleft()
        for i in incident[vertex]:
            lower, upper = ap.edges[i]
            other = upper if lower == vertex else lower
            if other not in visited:
                visited.add(other)
                chosen.append(i)
                queue.append(other)
    return SpanningTree.from_edges(ap, chosen)


def random_spanning_tree(ap: AugmentedPoset, seed: int) -> SpanningTree:
    """
    Draw a reproducible pseudo-random spanning tree.

    Kruskal's algorithm on seeded random edge weights.

    Args:
        ap: Augmented poset
        seed: Random seed

    Returns:
        The spanning tree
    """
    rng = random.Random(seed)
    graph = ap.graph()
    for _, _, data in graph.edges(data=True):
        data["weight"] = rng.random()
    tree = nx.minimum_spanning_tree(graph, algorithm="kruskal")
    return SpanningTree.from_edges(ap, (data["index"] for _, _, data in tree.edges(data=True)))


def fundamental_cycle(tree: SpanningTree, cotree_edge: int) -> Cycle:
    """
    Get the unique cycle formed by a cotree edge and the tree path joining its ends.

    The cycle starts at the upper endpoint of the cotree edge and walks the
    tree down to its lower endpoint, so the cotree edge is traversed upward.

    Args:
        tree: Spanning tree
        cotree_edge: Index of an edge outside the tree

    Returns:
        The fundamental cycle

    Raises:
        SpanningTreeError: If the edge belongs to the tree
    """
    ap = tree.poset
    if cotree_edge in tree.tree_edges:
        raise SpanningTreeError("Not a cotree edge", ap.edge_label(cotree_edge))
    lower, upper = ap.edges[cotree_edge]
    vertices = tuple(tree.path(upper, lower))
    return Cycle(vertices, _is_chordless(ap.graph(), vertices))


def _is_chordless(graph: nx.Graph, vertices: Sequence[str]) -> bool:
    m = len(vertices)
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if graph.has_edge(vertices[i], vertices[j]):
                return False
    return True


def _canonical(ap: AugmentedPoset, vertices: Sequence[str]) -> tuple[str, ...]:
    """Rotate to the least vertex, then head toward its lesser neighbour."""
    start = min(range(len(vertices)), key=lambda i: ap.vertex_key(vertices[i]))
    rotated = tuple(vertices[start:]) + tuple(vertices[:start])
    if ap.vertex_key(rotated[-1]) < ap.vertex_key(rotated[1]):
        rotated = (rotated[0], *rotated[:0:-1])
    return rotated


def enumerate_cycles(ap: AugmentedPoset) -> list[Cycle]:
    """
    List every simple cycle of the Hasse diagram once, in canonical form.

    Args:
        ap: Augmented poset

    Returns:
        Cycles sorted by length, then by vertex sequence
    """
    graph = ap.graph()
    found = {_canonical(ap, cycle) for cycle in nx.simple_cycles(graph)}
    cycles = [Cycle(vertices, _is_chordless(graph, vertices)) for vertices in found]
    return sorted(cycles, key=lambda c: (len(c), [ap.vertex_key(v) for v in c.vertices]))


def enumerate_circuits(ap: AugmentedPoset) -> list[Cycle]:
    """
    List the circuits (chordless cycles) of the Hasse diagram, in canonical form.

    Args:
        ap: Augmented poset

    Returns:
        Circuits sorted by length, then by vertex sequence
    """
    found = {_canonical(ap, cycle) for cycle in nx.chordless_cycles(ap.graph())}
    logger.debug("Found %d circuits among %d edges", len(found), ap.n)
    return sorted(
        (Cycle(vertices, True) for vertices in found),
        key=lambda c: (len(c), [ap.vertex_key(v) for v in c.vertices]),
    )


def cycle_partition(cycle: Cycle, tree: SpanningTree) -> CyclePartition:
    """
    Split the edges of a cycle by orientation and tree membership.

    X⁺ holds the edges traversed upward (from the lower to the upper end of
    the cover), X⁻ the others; Y± = X± ∩ tree and Z± = X± ∩ cotree.

    Args:
        cycle: Cycle of the Hasse diagram
        tree: Spanning tree

    Returns:
        The partition
    """
    steps = cycle.edges(tree.poset)
    x_plus = frozenset(i for i, upward in steps if upward)
    x_minus = frozenset(i for i, upward in steps if not upward)
    return CyclePartition(
        x_plus=x_plus,
        x_minus=x_minus,
        y_plus=x_plus & tree.tree_edges,
        y_minus=x_minus & tree.tree_edges,
        z_plus=x_plus - tree.tree_edges,
        z_minus=x_minus - tree.tree_edges,
    )
