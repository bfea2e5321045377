"""Exact polytope geometry and generalized F-signatures.

The generalized F-signature of a conic class is the Euclidean volume of
the closure of its cell. Two engines compute it:

- ``polytope``: enumerate the vertices of each closed cell and sum the
  volumes of a pulling triangulation;
- ``alcove``: the hyperplanes x_u − x_v ∈ Z cut the cube (−1, 0]^d into
  d! simplices of volume 1/d!, one per ordering of the coordinates, and
  the rounded divisor ⌈σ(x)⌉ is constant on each. Counting orderings per
  class gives every signature at once.
"""
import itertools
import logging
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, partial

import numpy as np
import pandas as pd

from hibicone.classgroup import DivisorClass, class_matrix
from hibicone.config import OUTPUT, PARALLEL
from hibicone.conic import cell_of, enumerate_conic
from hibicone.errors import (
    DegenerateCellError,
    DimensionMismatchError,
    GeometryError,
    UnboundedPolytopeError,
)
from hibicone.exact import (
    LinearConstraint,
    RationalMatrix,
    Sense,
    format_rational,
    integer_determinant,
    rank,
    strict_feasibility,
)
from hibicone.hasse import SpanningTree
from hibicone.utils import SignatureMethod, parallel_map

logger = logging.getLogger(__name__)

Point = tuple[Fraction, ...]

# Above this magnitude integer arrays switch from int64 to Python ints.
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class VPolytope:
    """A polytope by its vertices.

    ``facets`` lists, for every hyperplane of the H-representation it was
    computed from, the ids of the vertices lying on it.
    """

    dim: int
    vertices: tuple[Point, ...]
    facets: tuple[frozenset[int], ...] = field(default=(), repr=False)

    @cached_property
    def full_dimensional(self) -> bool:
        if len(self.vertices) <= self.dim:
            return False
        origin = self.vertices[0]
        differences = RationalMatrix.from_rows(
            ([a - b for a, b in zip(v, origin, strict=True)] for v in self.vertices[1:]),
            cols=self.dim,
        )
        return rank(differences) == self.dim


@dataclass(frozen=True)
class _Halfspace:
    """Primitive integer normal with a rational level: normal·x (sense) level."""

    normal: tuple[int, ...]
    level: Fraction
    sense: Sense


def _primitive(constraint: LinearConstraint) -> _Halfspace | None:
    """Scale a weak constraint to a primitive integer normal with a positive leading entry."""
    scale = math.lcm(*(c.denominator for c in constraint.coefficients))
    normal = [int(c * scale) for c in constraint.coefficients]
    divisor = math.gcd(*normal)
    if divisor == 0:
        if not constraint.holds([0] * constraint.dim):
            raise GeometryError("Constraint 0 (sense) bound is never satisfied")
        return None
    level = constraint.bound * scale / divisor
    normal = [c // divisor for c in normal]
    sense = constraint.sense
    if next(c for c in normal if c != 0) < 0:
        normal = [-c for c in normal]
        level = -level
        sense = {Sense.LE: Sense.GE, Sense.GE: Sense.LE}.get(sense, sense)
    return _Halfspace(tuple(normal), level, sense)


def _as_upper_bounds(halfspaces: Sequence[_Halfspace]) -> tuple[list[list[int]], list[Fraction]]:
    rows: list[list[int]] = []
    bounds: list[Fraction] = []
    for h in halfspaces:
        if h.sense in (Sense.LE, Sense.EQ):
            rows.append(list(h.normal))
            bounds.append(h.level)
        if h.sense in (Sense.GE, Sense.EQ):
            rows.append([-c for c in h.normal])
            bounds.append(-h.level)
    return rows, bounds


def _is_boxed(halfspaces: Sequence[_Halfspace], dim: int) -> bool:
    upper, lower = set(), set()
    for h in halfspaces:
        if sum(1 for c in h.normal if c != 0) != 1:
            continue
        axis = next(i for i, c in enumerate(h.normal) if c != 0)
        if h.sense in (Sense.LE, Sense.EQ):
            upper.add(axis)
        if h.sense in (Sense.GE, Sense.EQ):
            lower.add(axis)
    return len(upper & lower) == dim


def _check_bounded(constraints: Sequence[LinearConstraint], dim: int) -> None:
    """Raise if the recession cone {A·y ≤ 0} contains a nonzero direction."""
    cone = [LinearConstraint(c.coefficients, Fraction(0), c.sense) for c in constraints]
    for axis in range(dim):
        unit = [0] * dim
        unit[axis] = 1
        for sense in (Sense.GT, Sense.LT):
            ray = [*cone, LinearConstraint.of(unit, sense, 0)]
            if strict_feasibility(ray, dim).feasible:
                raise UnboundedPolytopeError(
                    f"Polytope is unbounded along coordinate {axis} ({sense.value} 0)"
                )


def _adjugate(matrix: list[list[int]]) -> list[list[int]]:
    size = len(matrix)
    if size == 1:
        return [[1]]
    adjugate = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            minor = [row[:i] + row[i + 1 :] for k, row in enumerate(matrix) if k != j]
            adjugate[i][j] = (-1) ** (i + j) * integer_determinant(minor)
    return adjugate


def _int_array(rows: Iterable[Iterable[int]], width: int, wide: bool = False) -> np.ndarray:
    data = [list(row) for row in rows]
    return np.array(data, dtype=object if wide else np.int64).reshape(len(data), width)


def _largest(values: Iterable[int | Fraction]) -> int:
    return max((abs(int(v)) for v in values), default=0) + 1


def vertex_enumeration(constraints: Sequence[LinearConstraint], dim: int) -> VPolytope:
    """
    Compute the vertices of the polytope cut out by the closures of the constraints.

    Hyperplanes are grouped by primitive normal. Every choice of d
    independent normals is inverted once through its integer adjugate, and
    every choice of one level per normal gives a candidate point, which is
    kept when it satisfies all constraints exactly.

    Args:
        constraints: H-representation (strict senses are relaxed to weak ones)
        dim: Ambient dimension

    Returns:
        The vertices, with the hyperplane incidences used by ``volume``

    Raises:
        DimensionMismatchError: If a constraint has the wrong length
        UnboundedPolytopeError: If the constraints do not bound a polytope
    """
    weak = [c.closure() for c in constraints]
    for constraint in weak:
        if constraint.dim != dim:
            raise DimensionMismatchError(
                f"Constraint of length {constraint.dim} in dimension {dim}"
            )
    halfspaces = [h for h in (_primitive(c) for c in weak) if h is not None]
    if not _is_boxed(halfspaces, dim):
        _check_bounded(weak, dim)

    levels: dict[tuple[int, ...], set[Fraction]] = {}
    for h in halfspaces:
        levels.setdefault(h.normal, set()).add(h.level)
    normals = sorted(levels)
    denominator = math.lcm(1, *(h.level.denominator for h in halfspaces))

    rows, bounds = _as_upper_bounds(halfspaces)
    max_level = _largest(b * denominator for b in bounds)
    max_normal = _largest(v for row in rows for v in row)
    found: set[Point] = set()
    for chosen in itertools.combinations(normals, dim):
        matrix = [list(normal) for normal in chosen]
        det = integer_determinant(matrix)
        if det == 0:
            continue
        adjugate = _adjugate(matrix)
        scale = det * denominator
        if scale < 0:
            adjugate = [[-v for v in row] for row in adjugate]
            scale = -scale
        magnitude = max_level * _largest(v for row in adjugate for v in row) * max_normal * dim**2
        wide = magnitude * abs(det) >= _INT64_SAFE
        level_grid = _int_array(
            itertools.product(*(sorted(int(v * denominator) for v in levels[n]) for n in chosen)),
            dim,
            wide,
        )
        numerators = level_grid @ _int_array(adjugate, dim, wide).T
        limits = _int_array([[int(b * scale) for b in bounds]], len(bounds), wide)
        inside = (numerators @ _int_array(rows, dim, wide).T <= limits).all(axis=1)
        for row in numerators[inside]:
            found.add(tuple(Fraction(int(v), scale) for v in row))

    vertices = tuple(sorted(found))
    hyperplanes = {(h.normal, h.level) for h in halfspaces}
    facets = []
    for normal, level in sorted(hyperplanes):
        on = frozenset(
            k
            for k, v in enumerate(vertices)
            if sum((c * x for c, x in zip(normal, v, strict=True)), Fraction(0)) == level
        )
        if on:
            facets.append(on)
    logger.debug(
        "Found %d vertices from %d hyperplanes in dimension %d",
        len(vertices),
        len(hyperplanes),
        dim,
    )
    return VPolytope(dim, vertices, tuple(sorted(set(facets), key=sorted)))


def _pulling_triangulation(polytope: VPolytope) -> list[tuple[int, ...]]:
    """Simplices of the triangulation that pulls the least vertex id of every face."""
    memo: dict[frozenset[int], list[tuple[int, ...]]] = {}

    def triangulate(face: frozenset[int]) -> list[tuple[int, ...]]:
        if face in memo:
            return memo[face]
        if len(face) == 1:
            return [tuple(face)]
        apex = min(face)
        proper = {face & facet for facet in polytope.facets} - {face, frozenset()}
        maximal = [g for g in proper if not any(g < other for other in proper)]
        simplices = [
            (apex, *simplex)
            for g in sorted(maximal, key=sorted)
            if apex not in g
            for simplex in triangulate(g)
        ]
        memo[face] = simplices
        return simplices

    return triangulate(frozenset(range(len(polytope.vertices))))


def volume(polytope: VPolytope) -> Fraction:
    """
    Exact Euclidean volume.

    Args:
        polytope: Vertices with hyperplane incidences, as built by ``vertex_enumeration``

    Returns:
        The volume; 0 for an empty or lower-dimensional polytope
    """
    if not polytope.vertices:
        return Fraction(0)
    if not polytope.full_dimensional:
        logger.warning("Polytope with %d vertices is not full-dimensional", len(polytope.vertices))
        return Fraction(0)
    dim = polytope.dim
    scale = math.lcm(*(x.denominator for v in polytope.vertices for x in v))
    points = [[int(x * scale) for x in v] for v in polytope.vertices]
    total = 0
    for simplex in _pulling_triangulation(polytope):
        base = points[simplex[0]]
        edges = [[a - b for a, b in zip(points[k], base, strict=True)] for k in simplex[1:]]
        total += abs(integer_determinant(edges))
    return Fraction(total, math.factorial(dim) * scale**dim)


def eulerian(d: int, p: int) -> int:
    """
    Eulerian number A(d, p): permutations of d letters with p − 1 descents.

    Args:
        d: Number of letters
        p: Between 1 and d

    Returns:
        Σ_{i=0}^{p} (−1)^i C(d+1, i) (p − i)^d

    Raises:
        GeometryError: If p is out of range
    """
    if not 1 <= p <= d:
        raise GeometryError(f"Eulerian number A({d}, {p}) needs 1 ≤ p ≤ d")
    return sum((-1) ** i * math.comb(d + 1, i) * (p - i) ** d for i in range(p + 1))


def _unit(dim: int, axis: int) -> list[int]:
    return [1 if k == axis else 0 for k in range(dim)]


def box(dim: int, low: int, high: int) -> tuple[LinearConstraint, ...]:
    """The cube [low, high]^dim."""
    return tuple(
        LinearConstraint.of(_unit(dim, axis), sense, bound)
        for axis in range(dim)
        for sense, bound in ((Sense.GE, low), (Sense.LE, high))
    )


def unit_cube(dim: int) -> tuple[LinearConstraint, ...]:
    return box(dim, 0, 1)


def standard_simplex(dim: int) -> tuple[LinearConstraint, ...]:
    """{y ≥ 0, Σy ≤ 1}."""
    return (
        *(LinearConstraint.of(_unit(dim, axis), Sense.GE, 0) for axis in range(dim)),
        LinearConstraint.of([1] * dim, Sense.LE, 1),
    )


def hypersimplex(dim: int, k: int) -> tuple[LinearConstraint, ...]:
    """The slab {0 ≤ y ≤ 1, k ≤ Σy ≤ k + 1}; its volume is A(dim, k + 1)/dim!."""
    return (
        *unit_cube(dim),
        LinearConstraint.of([1] * dim, Sense.GE, k),
        LinearConstraint.of([1] * dim, Sense.LE, k + 1),
    )


def join_polytope(e: int, e2: int) -> tuple[tuple[LinearConstraint, ...], frozenset[Point]]:
    """
    The join of the cubes [−1, 0]^e and [−1, 0]^e2 in R^(1+e+e2).

    Coordinates are (λ, u, w): the second cube sits at λ = 0 in w, the
    first at λ = 1 in u.

    Returns:
        H-representation {0 ≤ λ ≤ 1, −λ ≤ u ≤ 0, λ − 1 ≤ w ≤ 0} and the vertex set
    """
    dim = 1 + e + e2
    constraints = [
        LinearConstraint.of(_unit(dim, 0), Sense.GE, 0),
        LinearConstraint.of(_unit(dim, 0), Sense.LE, 1),
    ]
    for axis in range(1, dim):
        constraints.append(LinearConstraint.of(_unit(dim, axis), Sense.LE, 0))
        coupling = _unit(dim, axis)
        if axis <= e:
            coupling[0] = 1
            constraints.append(LinearConstraint.of(coupling, Sense.GE, 0))
        else:
            coupling[0] = -1
            constraints.append(LinearConstraint.of(coupling, Sense.GE, -1))

    zero, one = Fraction(0), Fraction(1)
    vertices = {
        (zero, *([zero] * e), *(Fraction(v) for v in alpha))
        for alpha in itertools.product((-1, 0), repeat=e2)
    }
    vertices |= {
        (one, *(Fraction(v) for v in alpha), *([zero] * e2))
        for alpha in itertools.product((-1, 0), repeat=e)
    }
    return tuple(constraints), frozenset(vertices)


def join_volume_check(e: int, e2: int) -> bool:
    """
    Check vol(Δ * Δ′)·(e + e2 + 1)! = vol(Δ)·vol(Δ′)·e!·e2! for the cubes Δ, Δ′.

    The join is rebuilt from its H-representation; its computed vertices
    must match the explicit vertex set.
    """
    constraints, expected_vertices = join_polytope(e, e2)
    polytope = vertex_enumeration(constraints, 1 + e + e2)
    if frozenset(polytope.vertices) != expected_vertices:
        logger.warning("Join of cubes %d and %d has unexpected vertices", e, e2)
        return False
    lhs = volume(polytope) * math.factorial(e + e2 + 1)
    return lhs == math.factorial(e) * math.factorial(e2)


@dataclass(frozen=True)
class _AlcoveTask:
    d: int
    n: int
    inner: np.ndarray
    lowers: np.ndarray
    uppers: np.ndarray
    classes: np.ndarray
    chunk: int


def _count_alcoves(task: _AlcoveTask, lead: int) -> Counter[tuple[int, ...]]:
    """Count orderings with coordinate x_0 at the given rank, grouped by class."""
    counts: Counter[tuple[int, ...]] = Counter()
    others = [r for r in range(task.d) if r != lead]
    for batch in itertools.batched(itertools.permutations(others), task.chunk):
        rest = np.array(batch, dtype=np.int64)
        ranks = np.column_stack([np.full(len(rest), lead, dtype=np.int64), rest])
        divisors = np.ones((len(rest), task.n), dtype=np.int64)
        divisors[:, task.inner] = ranks[:, task.lowers] > ranks[:, task.uppers]
        rows, multiplicity = np.unique(divisors @ task.classes, axis=0, return_counts=True)
        for row, count in zip(rows, multiplicity, strict=True):
            counts[tuple(int(v) for v in row)] += int(count)
    return counts


def alcove_counts(tree: SpanningTree, jobs: int = 1) -> Counter[tuple[int, ...]]:
    """
    Count coordinate orderings of (−1, 0]^d by the class of ⌈σ(x)⌉.

    For x with a fixed ordering, ⌈σ_e(x)⌉ on an inner edge is 1 when the
    lower end of e has the larger coordinate and 0 otherwise. Edges into 1̂
    are set to 1 rather than 0; the difference is σ(1, ..., 1), which is
    principal.

    Args:
        tree: Spanning tree fixing the class coordinates
        jobs: Worker processes (the work is split by the rank of x_0)

    Returns:
        Number of orderings per class; the counts sum to d!
    """
    ap = tree.poset
    if tree.rank == 0:
        return Counter({(): math.factorial(ap.d)})
    inner = [i for i, (_, upper) in enumerate(ap.edges) if upper != ap.top]
    task = _AlcoveTask(
        d=ap.d,
        n=ap.n,
        inner=np.array(inner, dtype=np.int64),
        lowers=np.array([ap.coordinate(ap.edges[i][0]) for i in inner], dtype=np.int64),
        uppers=np.array([ap.coordinate(ap.edges[i][1]) for i in inner], dtype=np.int64),
        classes=class_matrix(tree),
        chunk=PARALLEL.alcove_chunk,
    )
    total: Counter[tuple[int, ...]] = Counter()
    for counts in parallel_map(partial(_count_alcoves, task), list(range(ap.d)), jobs):
        total.update(counts)
    return total


@dataclass(frozen=True)
class SignatureTable:
    """Generalized F-signature of every conic class."""

    tree: SpanningTree = field(repr=False)
    entries: dict[tuple[int, ...], Fraction] = field(hash=False)
    method: SignatureMethod = "alcove"

    def __getitem__(self, coords: Sequence[int]) -> Fraction:
        return self.entries[tuple(coords)]

    def __len__(self) -> int:
        return len(self.entries)

    def classes(self) -> list[tuple[int, ...]]:
        return sorted(self.entries)

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def to_frame(self, decimal_places: int = OUTPUT.decimal_places) -> pd.DataFrame:
        """Table with columns class, volume (exact) and approx (decimal)."""
        classes = self.classes()
        return pd.DataFrame(
            {
                "class": [" ".join(str(c) for c in coords) for coords in classes],
                "volume": [format_rational(self.entries[c]) for c in classes],
                "approx": [round(float(self.entries[c]), decimal_places) for c in classes],
            },
            columns=list(OUTPUT.csv_columns),
        )


def _cell_volume(cls: DivisorClass) -> Fraction:
    cell = cell_of(cls)
    value = volume(vertex_enumeration(cell.closure(), cell.ambient_dim))
    if value == 0:
        raise DegenerateCellError(f"Cell of class {list(cls.coords)} has zero volume")
    return value


def signature_table(
    tree: SpanningTree, method: SignatureMethod = "alcove", jobs: int = 1
) -> SignatureTable:
    """
    Compute the generalized F-signature of every conic class.

    Args:
        tree: Spanning tree fixing the class coordinates
        method: "alcove" (ordering count) or "polytope" (cell volumes)
        jobs: Worker processes

    Returns:
        The signature table

    Raises:
        DegenerateCellError: If a conic cell has zero volume (polytope method)
    """
    if method == "polytope":
        classes = enumerate_conic(tree)
        volumes = parallel_map(_cell_volume, classes, jobs)
        entries = {cls.coords: v for cls, v in zip(classes, volumes, strict=True)}
    else:
        denominator = math.factorial(tree.poset.d)
        counts = alcove_counts(tree, jobs)
        entries = {coords: Fraction(count, denominator) for coords, count in sorted(counts.items())}
    logger.info("Computed %d signatures with the %s engine", len(entries), method)
    return SignatureTable(tree, entries, method)
