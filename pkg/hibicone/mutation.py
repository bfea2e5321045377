"""Mutations of splitting NCCR character sets of Segre products.

A one-parameter subgroup λ is admissible for (L, χ) when it separates χ
from L ∖ {χ} (⟨λ, χ⟩ < ⟨λ, μ⟩ for every other μ) and every partial sum
χ + β_{i_1} + ... + β_{i_p}, 0 < p < d_λ, of weights pairing positively
with λ lies in L ∖ {χ}. Right mutation replaces χ by
ν = χ + (sum of all positively paired weights, with multiplicity).
Admissibility and ν depend on λ only through its positive pattern
B_λ ⊆ {β̄_1, ..., β̄_t}, so the search runs over sign patterns.
"""
import itertools
import logging
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Literal, Self

import networkx as nx

from hibicone.config import SEARCH
from hibicone.errors import MutationConflictError, NotAdmissibleError
from hibicone.exact import LinearConstraint, Sense, format_rational, strict_feasibility
from hibicone.segre import Character, SegreSpec, is_rank_one_mcm, weight_system
from hibicone.utils import parallel_map

logger = logging.getLogger(__name__)

Direction = Literal["right", "left"]


def _add(a: Sequence[int], b: Sequence[int], times: int = 1) -> Character:
    return tuple(x + times * y for x, y in zip(a, b, strict=True))


def _negate(chi: Sequence[int]) -> Character:
    return tuple(-x for x in chi)


def _pair(lam: Sequence[Fraction], chi: Sequence[int]) -> Fraction:
    return sum((x * c for x, c in zip(lam, chi, strict=True)), Fraction(0))


@dataclass(frozen=True)
class OneParamSubgroup:
    """A nonzero λ ∈ Y(G)_Q, paired with characters by the dot product."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not any(self.coords):
            raise NotAdmissibleError("One-parameter subgroup must be nonzero")

    def pairing(self, chi: Sequence[int]) -> Fraction:
        return _pair(self.coords, chi)

    def __neg__(self) -> "OneParamSubgroup":
        return OneParamSubgroup(tuple(-c for c in self.coords))

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class NCCRSet:
    """A finite set of characters; ``canonical`` marks the chosen translate."""

    chars: frozenset[Character]
    canonical: bool = field(default=False, compare=False)

    @classmethod
    def of(cls, chars: Iterable[Sequence[int]], canonical: bool = False) -> Self:
        return cls(frozenset(tuple(c) for c in chars), canonical)

    def __contains__(self, chi: object) -> bool:
        return chi in self.chars

    def __len__(self) -> int:
        return len(self.chars)

    def sorted(self) -> list[Character]:
        return sorted(self.chars)

    def negated(self) -> "NCCRSet":
        return NCCRSet(frozenset(_negate(c) for c in self.chars))

    def translate(self, eta: Sequence[int]) -> "NCCRSet":
        """The set L − η."""
        return NCCRSet(frozenset(_add(c, eta, -1) for c in self.chars))

    def label(self) -> str:
        return "{" + " ".join("(" + ",".join(map(str, c)) + ")" for c in self.sorted()) + "}"


@dataclass(frozen=True)
class Admissible:
    """An admissible λ with its positive pattern B (weight indices), d_λ and ν."""

    subgroup: OneParamSubgroup
    positive: tuple[int, ...]
    degree: int
    target: Character


def canonicalize(chars: NCCRSet) -> NCCRSet:
    """
    Pick the representative of a translation class.

    The canonical translate is L − η for the lexicographically least η ∈ L,
    so it contains 0 as its least element.

    Raises:
        NotAdmissibleError: If the set is empty
    """
    if not chars.chars:
        raise NotAdmissibleError("Cannot canonicalize an empty character set")
    shifted = chars.translate(min(chars.chars))
    return NCCRSet(shifted.chars, canonical=True)


def _separation(chars: NCCRSet, chi: Character) -> list[LinearConstraint]:
    """⟨λ, μ − χ⟩ > 0 for every μ ∈ L ∖ {χ}."""
    return [
        LinearConstraint.of(_add(mu, chi, -1), Sense.GT, 0)
        for mu in sorted(chars.chars)
        if mu != chi
    ]


def _partial_sums_inside(
    chars: NCCRSet, chi: Character, weights: Sequence[Character], r: int
) -> bool:
    """χ plus any p of the weights (each at most r times), 0 < p < d_λ, lies in L ∖ {χ}."""
    degree = r * len(weights)
    for counts in itertools.product(range(r + 1), repeat=len(weights)):
        if not 0 < sum(counts) < degree:
            continue
        point = chi
        for weight, times in zip(weights, counts, strict=True):
            point = _add(point, weight, times)
        if point == chi or point not in chars.chars:
            return False
    return True


def _pattern_admissible(
    chars: NCCRSet, chi: Character, spec: SegreSpec, pattern: tuple[int, ...]
) -> Admissible | None:
    system = weight_system(spec)
    dim = spec.t - 1
    constraints = _separation(chars, chi)
    for i, weight in enumerate(system.weights):
        sense = Sense.GT if i in pattern else Sense.LE
        constraints.append(LinearConstraint.of(weight, sense, 0))
    result = strict_feasibility(constraints, dim)
    if not result.feasible or result.witness is None:
        return None
    chosen = [system.weights[i] for i in pattern]
    if not _partial_sums_inside(chars, chi, chosen, system.multiplicity):
        return None
    target = chi
    for weight in chosen:
        target = _add(target, weight, system.multiplicity)
    return Admissible(
        OneParamSubgroup(result.witness), pattern, system.multiplicity * len(pattern), target
    )


def _patterns(t: int) -> Iterable[tuple[int, ...]]:
    """Nonempty proper weight subsets, by size and then lexicographically."""
    for size in range(1, t):
        yield from itertools.combinations(range(t), size)


def _require_member(chars: NCCRSet, chi: Sequence[int]) -> Character:
    chi = tuple(chi)
    if chi not in chars.chars:
        raise NotAdmissibleError(f"Character {chi} is not in {chars.label()}")
    return chi


def admissible_patterns(chars: NCCRSet, chi: Sequence[int], spec: SegreSpec) -> list[Admissible]:
    """
    Every admissible positive pattern at χ, with a witness λ for each.

    Raises:
        NotAdmissibleError: If χ is not in the set
    """
    chi = _require_member(chars, chi)
    found = []
    for pattern in _patterns(spec.t):
        admissible = _pattern_admissible(chars, chi, spec, pattern)
        if admissible is not None:
            found.append(admissible)
    return found


def find_admissible_lambda(
    chars: NCCRSet, chi: Sequence[int], spec: SegreSpec
) -> Admissible | None:
    """
    Search for an admissible one-parameter subgroup at χ.

    Sign patterns are tried by size, then lexicographically; the empty
    pattern never qualifies (d_λ = 0).

    Args:
        chars: Character set L
        chi: Character of L to mutate at
        spec: Gorenstein Segre product

    Returns:
        The first admissible pattern with its witness, or None

    Raises:
        NotAdmissibleError: If χ is not in the set
        NotGorensteinError: If the factors differ in size
    """
    chi = _require_member(chars, chi)
    for pattern in _patterns(spec.t):
        admissible = _pattern_admissible(chars, chi, spec, pattern)
        if admissible is not None:
            return admissible
    return None


def find_left_lambda(chars: NCCRSet, chi: Sequence[int], spec: SegreSpec) -> Admissible | None:
    """
    Search for λ such that −λ is admissible for (−L, −χ).

    The returned ``target`` is the ν of the left mutation, χ − r·Σ_B β̄.
    """
    chi = _require_member(chars, chi)
    dual = find_admissible_lambda(chars.negated(), _negate(chi), spec)
    if dual is None:
        return None
    return Admissible(-dual.subgroup, dual.positive, dual.degree, _negate(dual.target))


def _positive_pattern(lam: OneParamSubgroup, spec: SegreSpec) -> tuple[int, ...]:
    return tuple(i for i, w in enumerate(weight_system(spec).weights) if lam.pairing(w) > 0)


def _verify(chars: NCCRSet, chi: Character, lam: OneParamSubgroup, spec: SegreSpec) -> Admissible:
    """Check admissibility of an explicit λ and return its data."""
    system = weight_system(spec)
    pattern = _positive_pattern(lam, spec)
    if not pattern:
        raise NotAdmissibleError(f"λ = {lam} pairs positively with no weight (d_λ = 0)")
    if any(not c.holds(lam.coords) for c in _separation(chars, chi)):
        raise NotAdmissibleError(f"λ = {lam} does not separate {chi} from the rest of the set")
    chosen = [system.weights[i] for i in pattern]
    if not _partial_sums_inside(chars, chi, chosen, system.multiplicity):
        raise NotAdmissibleError(f"λ = {lam} leaves a partial sum outside the set")
    target = chi
    for weight in chosen:
        target = _add(target, weight, system.multiplicity)
    return Admissible(lam, pattern, system.multiplicity * len(pattern), target)


def right_mutation(
    chars: NCCRSet, chi: Sequence[int], lam: OneParamSubgroup, spec: SegreSpec
) -> NCCRSet:
    """
    Replace χ by ν = χ + Σ (weights pairing positively with λ, with multiplicity r).

    Args:
        chars: Character set L
        chi: Character to remove
        lam: Admissible one-parameter subgroup
        spec: Gorenstein Segre product

    Returns:
        (L ∖ {χ}) ∪ {ν}, not canonicalized

    Raises:
        NotAdmissibleError: If χ is not in L or λ is not admissible
        MutationConflictError: If ν already lies in L
    """
    chi = _require_member(chars, chi)
    admissible = _verify(chars, chi, lam, spec)
    rest = chars.chars - {chi}
    if admissible.target in rest:
        raise MutationConflictError(f"Mutation at {chi} reintroduces {admissible.target}")
    return NCCRSet(rest | {admissible.target})


def left_mutation(
    chars: NCCRSet, chi: Sequence[int], lam: OneParamSubgroup, spec: SegreSpec
) -> NCCRSet:
    """
    Left mutation: negate, right-mutate at −χ with −λ, negate back.

    Raises:
        NotAdmissibleError: If χ is not in L or −λ is not admissible for (−L, −χ)
        MutationConflictError: If ν already lies in L
    """
    chi = _require_member(chars, chi)
    return right_mutation(chars.negated(), _negate(chi), -lam, spec).negated()


@dataclass(frozen=True)
class ExchangeEdge:
    """A mutation between two generators: χ removed, ν added."""

    source: NCCRSet
    target: NCCRSet
    removed: Character
    added: Character
    positive: tuple[int, ...]
    direction: Direction

    def key(self) -> frozenset[frozenset[Character]]:
        return frozenset((self.source.chars, self.target.chars))


@dataclass(frozen=True)
class ExchangeGraph:
    """Generators (character sets containing 0) joined by mutations."""

    vertices: tuple[NCCRSet, ...]
    edges: tuple[ExchangeEdge, ...]
    truncated: bool = False

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(v.chars for v in self.vertices)
        for edge in self.edges:
            graph.add_edge(
                edge.source.chars,
                edge.target.chars,
                removed=edge.removed,
                added=edge.added,
                direction=edge.direction,
            )
        return graph

    def is_connected(self) -> bool:
        return bool(self.vertices) and nx.is_connected(self.to_networkx())

    def translation_classes(self) -> dict[frozenset[Character], list[NCCRSet]]:
        """Vertices grouped by their canonical translate."""
        classes: dict[frozenset[Character], list[NCCRSet]] = defaultdict(list)
        for vertex in self.vertices:
            classes[canonicalize(vertex).chars].append(vertex)
        return dict(sorted(classes.items(), key=lambda item: sorted(item[0])))


def _generator_edges(
    source: NCCRSet, result: NCCRSet, chi: Character, admissible: Admissible, direction: Direction
) -> list[ExchangeEdge]:
    """Edges between generators recording the mutation source → result at χ."""
    if chi != tuple(0 for _ in chi):
        edge = ExchangeEdge(source, result, chi, admissible.target, admissible.positive, direction)
        return [edge]
    # Mutating at 0 removes the origin; translate both sides by every other η ∈ L.
    return [
        ExchangeEdge(
            source.translate(eta),
            result.translate(eta),
            _add(chi, eta, -1),
            _add(admissible.target, eta, -1),
            admissible.positive,
            direction,
        )
        for eta in source.sorted()
        if eta != chi
    ]


def _expand(vertex: NCCRSet, spec: SegreSpec) -> list[ExchangeEdge]:
    """All mutations out of one generator, right before left, by character."""
    edges: list[ExchangeEdge] = []
    for chi in vertex.sorted():
        options = admissible_patterns(vertex, chi, spec)
        targets = {a.target for a in options}
        if len(targets) > 1:
            raise MutationConflictError(
                f"Admissible patterns at {chi} in {vertex.label()} disagree: {sorted(targets)}"
            )
        if options:
            right = options[0]
            result = right_mutation(vertex, chi, right.subgroup, spec)
            edges.extend(_generator_edges(vertex, result, chi, right, "right"))
        left = find_left_lambda(vertex, chi, spec)
        if left is not None:
            result = left_mutation(vertex, chi, left.subgroup, spec)
            edges.extend(_generator_edges(vertex, result, chi, left, "left"))
    return edges


def exchange_graph(
    start: NCCRSet, spec: SegreSpec, cap: int | None = None, jobs: int = 1
) -> ExchangeGraph:
    """
    Explore generators reachable by right and left mutations.

    The search is level-synchronous: each frontier is expanded (optionally
    in a process pool) and merged in sorted order, so the result does not
    depend on ``jobs``. An edge is kept once per unordered pair of vertices,
    as first discovered.

    Args:
        start: Initial character set (translated to contain 0 if needed)
        spec: Gorenstein Segre product
        cap: Maximum number of vertices (defaults to the configured cap)
        jobs: Worker processes

    Returns:
        The explored graph; ``truncated`` is set when the cap stopped the search

    Raises:
        MutationConflictError: If admissible patterns disagree on ν
    """
    cap = SEARCH.graph_cap if cap is None else cap
    origin = tuple(0 for _ in range(spec.t - 1))
    root = start if origin in start else NCCRSet(canonicalize(start).chars)
    seen: dict[frozenset[Character], NCCRSet] = {root.chars: root}
    edges: dict[frozenset[frozenset[Character]], ExchangeEdge] = {}
    frontier = [root]
    truncated = False
    while frontier and not truncated:
        expansions = parallel_map(partial(_expand, spec=spec), frontier, jobs)
        next_frontier: list[NCCRSet] = []
        for edge in itertools.chain.from_iterable(expansions):
            for vertex in (edge.source, edge.target):
                if vertex.chars not in seen:
                    if len(seen) >= cap:
                        truncated = True
                        continue
                    seen[vertex.chars] = vertex
                    next_frontier.append(vertex)
            if edge.source.chars in seen and edge.target.chars in seen:
                edges.setdefault(edge.key(), edge)
        frontier = sorted(next_frontier, key=lambda v: v.sorted())
        logger.debug("Exchange graph: %d vertices, %d edges", len(seen), len(edges))
    if truncated:
        logger.warning("Exchange graph search stopped at the cap of %d vertices", cap)
    vertices = tuple(sorted(seen.values(), key=lambda v: v.sorted()))
    ordered = sorted(edges.values(), key=lambda e: (e.source.sorted(), e.target.sorted()))
    return ExchangeGraph(vertices, tuple(ordered), truncated)


def mutation_asymmetries(
    graph: ExchangeGraph, spec: SegreSpec
) -> list[tuple[NCCRSet, Character, Character, Character]]:
    """
    Places where right and left mutation both exist but differ.

    Returns:
        (vertex, χ, ν of the right mutation, ν of the left mutation)
    """
    found = []
    for vertex in graph.vertices:
        for chi in vertex.sorted():
            right = find_admissible_lambda(vertex, chi, spec)
            left = find_left_lambda(vertex, chi, spec)
            if right is not None and left is not None and right.target != left.target:
                found.append((vertex, chi, right.target, left.target))
    return found


def has_mcm_differences(chars: NCCRSet, spec: SegreSpec) -> bool:
    """Check that χ − χ′ is rank-one MCM for every pair of characters in the set."""
    return all(is_rank_one_mcm(_add(a, b, -1), spec) for a in chars.chars for b in chars.chars)
