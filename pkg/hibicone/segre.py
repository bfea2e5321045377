"""Segre products of polynomial rings as Hibi rings of disjoint chains.

This module fixes the spanning tree that gives the Segre class group its
standard coordinates, builds the weight system, and implements the NCCR
character set L, its envelope L̃ and the rank-one MCM criterion. It also
carries the closed forms of the conic set and of the F-signatures that
the general engines are checked against.
"""
import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Self

from hibicone.classgroup import class_matrix
from hibicone.conic import enumerate_conic
from hibicone.errors import (
    ConfigError,
    DimensionMismatchError,
    InfeasibleRequestError,
    NotGorensteinError,
)
from hibicone.geometry import eulerian
from hibicone.hasse import SpanningTree, choose_spanning_tree
from hibicone.poset import AugmentedPoset, Poset, augment, disjoint_chains

logger = logging.getLogger(__name__)

Character = tuple[int, ...]


@dataclass(frozen=True)
class SegreSpec:
    """Segre product S_1 # ... # S_t, factor i having chain_lengths[i] + 1 variables."""

    chain_lengths: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.chain_lengths) < 2:
            raise ConfigError(
                f"A Segre product needs t ≥ 2 factors, got {len(self.chain_lengths)}"
            )
        if any(length < 1 for length in self.chain_lengths):
            raise ConfigError(f"Chain lengths must be positive, got {list(self.chain_lengths)}")

    @classmethod
    def nccr(cls, r: int, t: int) -> Self:
        """The Gorenstein product of t polynomial rings in r variables each."""
        if r < 2:
            raise ConfigError(f"NCCR products need r ≥ 2, got r = {r}")
        return cls((r - 1,) * t)

    @property
    def t(self) -> int:
        return len(self.chain_lengths)

    @property
    def is_gorenstein(self) -> bool:
        return len(set(self.chain_lengths)) == 1

    @property
    def r(self) -> int:
        """
        Number of variables of each factor.

        Raises:
            NotGorensteinError: If the factors differ in size
        """
        if not self.is_gorenstein:
            raise NotGorensteinError(
                f"Segre product with chain lengths {list(self.chain_lengths)} is not Gorenstein; "
                "NCCR operations need equal factors"
            )
        return self.chain_lengths[0] + 1

    def label(self) -> str:
        return ",".join(str(length) for length in self.chain_lengths)


def segre_poset(spec: SegreSpec) -> Poset:
    """Disjoint union of t chains, chain i holding chain_lengths[i] elements."""
    return disjoint_chains(spec.chain_lengths)


def segre_tree(ap: AugmentedPoset, spec: SegreSpec) -> SpanningTree:
    """
    The spanning tree giving the standard Segre coordinates.

    Every edge except (0̂, p{i}_1) for i < t; cotree coordinate i is then
    the edge (0̂, p{i}_1).
    """
    cotree = {ap.edge_index(ap.bottom, f"p{i}_1") for i in range(1, spec.t)}
    return choose_spanning_tree(ap, (i for i in range(ap.n) if i not in cotree))


@dataclass(frozen=True)
class WeightSystem:
    """The distinct weights β̄_1..β̄_t of X(G) ≅ Z^(t−1), each of multiplicity r."""

    weights: tuple[Character, ...]
    multiplicity: int

    @property
    def t(self) -> int:
        return len(self.weights)

    def multiset(self) -> list[Character]:
        return [w for w in self.weights for _ in range(self.multiplicity)]


def weight_system(spec: SegreSpec) -> WeightSystem:
    """
    β̄_i is the i-th unit vector for i < t and β̄_t = (−1, ..., −1).

    Raises:
        NotGorensteinError: If the factors differ in size
    """
    t = spec.t
    weights = [tuple(1 if k == i else 0 for k in range(t - 1)) for i in range(t - 1)]
    weights.append(tuple([-1] * (t - 1)))
    return WeightSystem(tuple(weights), spec.r)


def weight_classes(ap: AugmentedPoset, spec: SegreSpec) -> list[list[Character]]:
    """
    Classes of the prime divisors D_e, grouped by chain.

    The edges of chain i run from 0̂ through p{i}_1..p{i}_k to 1̂; in the
    Segre coordinates each of their classes is β̄_i.

    Returns:
        For each chain, the class of every one of its edges
    """
    tree = segre_tree(ap, spec)
    matrix = class_matrix(tree)
    grouped: list[list[Character]] = []
    for i, length in enumerate(spec.chain_lengths, 1):
        chain = [ap.bottom, *(f"p{i}_{j}" for j in range(1, length + 1)), ap.top]
        edges = [ap.edge_index(lower, upper) for lower, upper in itertools.pairwise(chain)]
        grouped.append([tuple(int(v) for v in matrix[e]) for e in edges])
    return grouped


def _check_length(chi: Sequence[int], spec: SegreSpec) -> None:
    if len(chi) != spec.t - 1:
        raise DimensionMismatchError(f"Character of length {len(chi)}, expected {spec.t - 1}")


def nccr_set(spec: SegreSpec) -> tuple[Character, ...]:
    """
    The NCCR character set L = C(R) ∩ {0 ≤ c_i ≤ r − 1}.

    Args:
        spec: Gorenstein Segre product

    Returns:
        The r^(t−1) characters, sorted

    Raises:
        NotGorensteinError: If the factors differ in size
    """
    r = spec.r
    ap = augment(segre_poset(spec))
    conic = enumerate_conic(segre_tree(ap, spec))
    chars = tuple(cls.coords for cls in conic if all(0 <= c <= r - 1 for c in cls.coords))
    logger.debug("NCCR set for r=%d, t=%d has %d characters", r, spec.t, len(chars))
    return chars


def in_L_tilde(chi: Sequence[int], spec: SegreSpec) -> bool:
    """Membership in L̃ = X(G) ∩ {|c_i| ≤ r − 1}."""
    _check_length(chi, spec)
    return all(abs(c) <= spec.r - 1 for c in chi)


def l_tilde(spec: SegreSpec) -> tuple[Character, ...]:
    """All characters of L̃, sorted."""
    bound = spec.r - 1
    return tuple(itertools.product(range(-bound, bound + 1), repeat=spec.t - 1))


def is_rank_one_mcm(chi: Sequence[int], spec: SegreSpec) -> bool:
    """
    Check the rank-one MCM criterion.

    Extend χ by c_t = 0; M_χ is MCM iff the sorted values (c_1, ..., c_t)
    have every consecutive gap at most r − 1.
    """
    _check_length(chi, spec)
    values = sorted([*chi, 0])
    return all(b - a <= spec.r - 1 for a, b in itertools.pairwise(values))


def segre_conic_closed_form(spec: SegreSpec) -> frozenset[Character]:
    """
    Conic classes from the explicit Segre inequalities.

    −r_t ≤ z_i ≤ r_i and −r_j ≤ z_i − z_j ≤ r_i for i ≠ j < t, where r_i is
    the length of chain i.
    """
    lengths = spec.chain_lengths
    last = lengths[-1]
    ranges = [range(-last, lengths[i] + 1) for i in range(spec.t - 1)]
    return frozenset(
        z
        for z in itertools.product(*ranges)
        if all(
            -lengths[j] <= z[i] - z[j] <= lengths[i]
            for i in range(spec.t - 1)
            for j in range(spec.t - 1)
            if i != j
        )
    )


def segre_signature_closed_form(spec: SegreSpec, chi: Sequence[int]) -> Fraction:
    """
    Closed-form generalized F-signature.

    For t factors in two variables each, a class whose extension
    (c_1, ..., c_{t−1}, 0) takes the values m and m + 1, with q entries
    equal to m + 1, has signature 2/(t+1) if q = 0 and
    1/(C(t, q)·(t+1)) otherwise. For two factors with chains of lengths
    r and s, class c ∈ [−s, r] has signature A(d, c + s + 1)/d! with
    d = r + s + 1.

    Raises:
        InfeasibleRequestError: If no closed form covers the product or the
            class is not conic
    """
    _check_length(chi, spec)
    if spec.t == 2:
        r, s = spec.chain_lengths
        (c,) = chi
        if not -s <= c <= r:
            raise InfeasibleRequestError(f"Class {c} is not conic for chains ({r}, {s})")
        d = r + s + 1
        return Fraction(eulerian(d, c + s + 1), math.factorial(d))
    if set(spec.chain_lengths) == {1}:
        values = [*chi, 0]
        low = min(values)
        shifted = [v - low for v in values]
        if max(shifted) > 1:
            raise InfeasibleRequestError(f"Class {list(chi)} is not conic")
        t, q = spec.t, sum(shifted)
        if q == 0:
            return Fraction(2, t + 1)
        return Fraction(1, math.comb(t, q) * (t + 1))
    raise InfeasibleRequestError(
        f"No closed-form signature for chain lengths {list(spec.chain_lengths)}"
    )
