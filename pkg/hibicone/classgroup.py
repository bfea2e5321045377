"""The divisor class group Cl(k[P]) ≅ Z^(n−d) in spanning-tree coordinates.

A divisor vector a ∈ Z^n assigns an integer to every Hasse edge; its
class is found by subtracting the principal divisor σ(y) that vanishes
on the tree edges, which leaves the cotree entries as coordinates.
"""
import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from hibicone.errors import DimensionMismatchError
from hibicone.exact import RationalMatrix
from hibicone.hasse import SpanningTree
from hibicone.poset import AugmentedPoset

logger = logging.getLogger(__name__)

DivisorVector = tuple[int, ...]


@dataclass(frozen=True)
class DivisorClass:
    """Class coordinates indexed by the cotree edges of ``tree``.

    Equality compares coordinates only; classes from different trees are
    compared through ``transfer_class``.
    """

    coords: tuple[int, ...]
    tree: SpanningTree = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.coords) != self.tree.rank:
            raise DimensionMismatchError(
                f"Class has {len(self.coords)} coordinates, tree has {self.tree.rank} cotree edges"
            )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-c for c in self.coords), self.tree)

    def to_dict(self) -> dict[str, list]:
        return {"tree": self.tree.labels(), "class": list(self.coords)}


def class_group_rank(ap: AugmentedPoset) -> int:
    """Rank n − d of the (free) class group."""
    return ap.n - ap.d


def principal_divisor(ap: AugmentedPoset, x: Sequence[int]) -> DivisorVector:
    """
    Evaluate σ at an integer point.

    Args:
        ap: Augmented poset
        x: Integer vector of length d

    Returns:
        (σ_1(x), ..., σ_n(x))

    Raises:
        DimensionMismatchError: If x does not have length d
    """
    if len(x) != ap.d:
        raise DimensionMismatchError(f"Point of length {len(x)}, expected d = {ap.d}")
    return tuple(sum(c * v for c, v in zip(ap.sigma(i), x, strict=True)) for i in range(ap.n))


def _tree_potential(tree: SpanningTree, a: Sequence[int]) -> dict[str, int]:
    """Solve σ_e(y) = a_e on tree edges by walking the tree out from 1̂ (where y = 0)."""
    ap = tree.poset
    incident: dict[str, list[int]] = {v: [] for v in ap.vertices}
    for i in tree.tree_edges:
        lower, upper = ap.edges[i]
        incident[lower].append(i)
        incident[upper].append(i)

    values = {ap.top: 0}
    queue = deque([ap.top])
    while queue:
        vertex = queue.popleft()
        for i in sorted(incident[vertex]):
            lower, upper = ap.edges[i]
            if lower == vertex and upper not in values:
                values[upper] = values[lower] - a[i]
                queue.append(upper)
            elif upper == vertex and lower not in values:
                values[lower] = a[i] + values[upper]
                queue.append(lower)
    return values


def project_divisor(a: Sequence[int], tree: SpanningTree) -> DivisorClass:
    """
    Get the class of a divisor vector in the tree's coordinates.

    The tree's σ-matrix is unimodular, so σ_e(y) = a_e on the tree edges
    has a unique integer solution y; the class is m_j = a_j − σ_j(y) on
    the cotree edges.

    Args:
        a: Integer vector of length n, one entry per Hasse edge
        tree: Spanning tree fixing the coordinates

    Returns:
        The divisor class

    Raises:
        DimensionMismatchError: If a does not have length n
    """
    ap = tree.poset
    if len(a) != ap.n:
        raise DimensionMismatchError(f"Divisor vector of length {len(a)}, expected n = {ap.n}")
    y = _tree_potential(tree, a)
    coords = []
    for j in tree.cotree_edges:
        lower, upper = ap.edges[j]
        sigma = y[lower] - (y[upper] if upper != ap.top else 0)
        coords.append(int(a[j]) - sigma)
    return DivisorClass(tuple(coords), tree)


def lift_class(cls: DivisorClass) -> DivisorVector:
    """Representative divisor vector: zero on tree edges, class coordinates on cotree edges."""
    tree = cls.tree
    vector = [0] * tree.poset.n
    for j, value in zip(tree.cotree_edges, cls.coords, strict=True):
        vector[j] = value
    return tuple(vector)


def transfer_class(cls: DivisorClass, tree: SpanningTree) -> DivisorClass:
    """Re-express a class in the coordinates of another spanning tree."""
    return project_divisor(lift_class(cls), tree)


def tree_transform(tree: SpanningTree) -> RationalMatrix:
    """
    The d × d matrix whose rows are the σ forms of the tree edges (in index order).

    It is unimodular and maps the unit cube onto {−1 < σ_i(x) ≤ 0, i in the tree}.
    """
    ap = tree.poset
    return RationalMatrix.from_rows((ap.sigma(i) for i in sorted(tree.tree_edges)), cols=ap.d)


def class_matrix(tree: SpanningTree) -> np.ndarray:
    """
    Classes of the n edge indicator vectors, one row per edge.

    Since project_divisor is linear, the class of a is ``a @ class_matrix(tree)``.

    Returns:
        Integer array of shape (n, n − d)
    """
    ap = tree.poset
    rows = []
    for i in range(ap.n):
        unit = [0] * ap.n
        unit[i] = 1
        rows.append(project_divisor(unit, tree).coords)
    return np.array(rows, dtype=np.int64).reshape(ap.n, tree.rank)
