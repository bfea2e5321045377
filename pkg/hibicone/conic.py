"""Conic divisorial classes of Hibi rings.

This module builds the circuit polytope C(P) in cotree coordinates,
enumerates its lattice points (the conic classes), describes the cell of
each class in tree coordinates, and decides conicity independently from
the definition with the strict-feasibility LP.
"""
import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

import numpy as np

from hibicone.classgroup import DivisorClass, DivisorVector, lift_class
from hibicone.config import SEARCH
from hibicone.errors import DimensionMismatchError
from hibicone.exact import LinearConstraint, Sense, format_rational, strict_feasibility
from hibicone.hasse import (
    Cycle,
    SpanningTree,
    cycle_partition,
    enumerate_circuits,
    fundamental_cycle,
)
from hibicone.poset import AugmentedPoset
from hibicone.utils import BoxKind, parallel_map

logger = logging.getLogger(__name__)

Box = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ConicSystem:
    """Circuit inequalities −|X⁻|+1 ≤ Σ_{Z⁺} z − Σ_{Z⁻} z ≤ |X⁺|−1 on cotree coordinates."""

    ambient_dim: int
    constraints: tuple[LinearConstraint, ...]
    cycles: tuple[Cycle, ...]

    def contains(self, point: Sequence[int]) -> bool:
        return all(constraint.holds(point) for constraint in self.constraints)

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer arrays (A, b) with the system written as A·z ≤ b."""
        rows, bounds = [], []
        for constraint in self.constraints:
            flip = -1 if constraint.sense is Sense.GE else 1
            rows.append([int(flip * c) for c in constraint.coefficients])
            bounds.append(int(flip * constraint.bound))
        shape = (len(rows), self.ambient_dim)
        return np.array(rows, dtype=np.int64).reshape(shape), np.array(bounds, dtype=np.int64)


@dataclass(frozen=True)
class Cell:
    """Half-open cell of a class in tree coordinates y ∈ R^d (one y per tree edge)."""

    cls: DivisorClass
    ambient_dim: int
    constraints: tuple[LinearConstraint, ...]

    def closure(self) -> tuple[LinearConstraint, ...]:
        return tuple(constraint.closure() for constraint in self.constraints)

    def contains(self, point: Sequence[Fraction | int]) -> bool:
        return all(constraint.holds(point) for constraint in self.constraints)

    def to_dict(self) -> dict[str, object]:
        return {
            "class": list(self.cls.coords),
            "constraints": [
                {
                    "coefficients": [format_rational(c) for c in constraint.coefficients],
                    "sense": constraint.sense.value,
                    "bound": format_rational(constraint.bound),
                }
                for constraint in self.constraints
            ],
        }


def cycle_inequalities(tree: SpanningTree, cycles: Iterable[Cycle]) -> ConicSystem:
    """
    Build the inequality pair of each given cycle in cotree coordinates.

    Args:
        tree: Spanning tree fixing the coordinates
        cycles: Any cycles of the Hasse diagram

    Returns:
        The system, one pair of constraints per cycle
    """
    position = {j: k for k, j in enumerate(tree.cotree_edges)}
    constraints: list[LinearConstraint] = []
    kept = []
    for cycle in cycles:
        part = cycle_partition(cycle, tree)
        coefficients = [0] * tree.rank
        for j in part.z_plus:
            coefficients[position[j]] += 1
        for j in part.z_minus:
            coefficients[position[j]] -= 1
        constraints.append(LinearConstraint.of(coefficients, Sense.GE, 1 - len(part.x_minus)))
        constraints.append(LinearConstraint.of(coefficients, Sense.LE, len(part.x_plus) - 1))
        kept.append(cycle)
    return ConicSystem(tree.rank, tuple(constraints), tuple(kept))


def conic_polytope(tree: SpanningTree) -> ConicSystem:
    """The system C(P): one inequality pair per circuit of the Hasse diagram."""
    return cycle_inequalities(tree, enumerate_circuits(tree.poset))


def fundamental_bounds(tree: SpanningTree) -> Box:
    """
    Per-coordinate bounds from the fundamental cycles.

    The fundamental cycle of cotree edge j has Z⁺ = {j} and Z⁻ = ∅, so its
    inequality reads −|X⁻|+1 ≤ z_j ≤ |X⁺|−1.

    Returns:
        (low, high) for each cotree coordinate
    """
    bounds = []
    for j in tree.cotree_edges:
        part = cycle_partition(fundamental_cycle(tree, j), tree)
        bounds.append((1 - len(part.x_minus), len(part.x_plus) - 1))
    return tuple(bounds)


def _box_points(box: Box) -> np.ndarray:
    ranges = [range(low, high + 1) for low, high in box]
    points = list(itertools.product(*ranges))
    return np.array(points, dtype=np.int64).reshape(len(points), len(box))


def lattice_points(system: ConicSystem, box: Box) -> list[tuple[int, ...]]:
    """Integer points of a box satisfying the system, in lexicographic order."""
    points = _box_points(box)
    a, b = system.as_arrays()
    mask = (points @ a.T <= b).all(axis=1)
    logger.debug("%d of %d box points satisfy the system", int(mask.sum()), len(points))
    return [tuple(int(v) for v in row) for row in points[mask]]


def enumerate_conic(tree: SpanningTree) -> tuple[DivisorClass, ...]:
    """
    List the lattice points of C(P), i.e. the conic classes.

    Points of the fundamental-cycle box are filtered by every circuit
    inequality.

    Args:
        tree: Spanning tree fixing the coordinates

    Returns:
        Conic classes sorted by coordinates
    """
    points = lattice_points(conic_polytope(tree), fundamental_bounds(tree))
    return tuple(DivisorClass(point, tree) for point in points)


def cell_of(cls: DivisorClass) -> Cell:
    """
    Describe the cell of a class in tree coordinates.

    With y_i = σ_i(x) on the tree edges, the cell is −1 < y_i ≤ 0 together
    with m_j − 1 < Σ_{Y⁻} y − Σ_{Y⁺} y ≤ m_j for each cotree edge j.

    Args:
        cls: Divisor class; its tree fixes both coordinate systems

    Returns:
        The half-open cell
    """
    tree = cls.tree
    tree_order = sorted(tree.tree_edges)
    position = {i: k for k, i in enumerate(tree_order)}
    dim = len(tree_order)
    constraints: list[LinearConstraint] = []
    for k in range(dim):
        unit = [0] * dim
        unit[k] = 1
        constraints.append(LinearConstraint.of(unit, Sense.GT, -1))
        constraints.append(LinearConstraint.of(unit, Sense.LE, 0))
    for j, m in zip(tree.cotree_edges, cls.coords, strict=True):
        part = cycle_partition(fundamental_cycle(tree, j), tree)
        coefficients = [0] * dim
        for i in part.y_minus:
            coefficients[position[i]] += 1
        for i in part.y_plus:
            coefficients[position[i]] -= 1
        constraints.append(LinearConstraint.of(coefficients, Sense.GT, m - 1))
        constraints.append(LinearConstraint.of(coefficients, Sense.LE, m))
    return Cell(cls, dim, tuple(constraints))


def conic_oracle(a: Sequence[int], ap: AugmentedPoset) -> bool:
    """
    Decide conicity from the definition.

    T(a) is conic iff some x ∈ R^d has a_i − 1 < σ_i(x) ≤ a_i on every edge.

    Args:
        a: Divisor vector of length n
        ap: Augmented poset

    Returns:
        True if the region is nonempty

    Raises:
        DimensionMismatchError: If a does not have length n
    """
    if len(a) != ap.n:
        raise DimensionMismatchError(f"Divisor vector of length {len(a)}, expected n = {ap.n}")
    constraints = []
    for i, value in enumerate(a):
        sigma = ap.sigma(i)
        constraints.append(LinearConstraint.of(sigma, Sense.GT, value - 1))
        constraints.append(LinearConstraint.of(sigma, Sense.LE, value))
    return strict_feasibility(constraints, ap.d).feasible


def _oracle_point(tree: SpanningTree, point: tuple[int, ...]) -> bool:
    cls = DivisorClass(point, tree)
    return conic_oracle(lift_class(cls), tree.poset)


def sweep_box(tree: SpanningTree, kind: BoxKind = "tight", margin: int | None = None) -> Box:
    """
    Box of cotree coordinates checked by ``oracle_sweep``.

    "tight" widens the fundamental-cycle bounds by ``margin`` on each side;
    "generic" is [−d, d] in every coordinate.
    """
    if kind == "generic":
        d = tree.poset.d
        return tuple((-d, d) for _ in tree.cotree_edges)
    margin = SEARCH.oracle_margin if margin is None else margin
    return tuple((low - margin, high + margin) for low, high in fundamental_bounds(tree))


def oracle_sweep(
    tree: SpanningTree, box: Box | None = None, jobs: int = 1
) -> frozenset[DivisorVector]:
    """
    Run the LP oracle on every lattice point of a box of cotree coordinates.

    Args:
        tree: Spanning tree fixing the coordinates
        box: Coordinate ranges (defaults to the tight sweep box)
        jobs: Worker processes

    Returns:
        Coordinates of the points the oracle accepts
    """
    box = sweep_box(tree) if box is None else box
    points = [tuple(int(v) for v in row) for row in _box_points(box)]
    verdicts = parallel_map(partial(_oracle_point, tree), points, jobs)
    logger.debug("Oracle accepted %d of %d points", sum(verdicts), len(points))
    return frozenset(p for p, ok in zip(points, verdicts, strict=True) if ok)
