"""Exact rational arithmetic, dense linear algebra and the strict-feasibility LP.

Every scalar is a ``fractions.Fraction``, which is always kept in lowest
terms with a positive denominator, so value equality is structural
equality. Tableaux are numpy object arrays of Fractions.
"""
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Self

import numpy as np

from hibicone.errors import DimensionMismatchError

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Fraction | int | str


def parse_rational(text: str | int | Fraction) -> Fraction:
    """
    Parse a rational written as "p/q" or "p".

    Args:
        text: Rational in string form, or an int/Fraction passed through

    Returns:
        The rational in lowest terms

    Raises:
        ValueError: If the text is not a rational literal
    """
    if isinstance(text, Fraction | int):
        return Fraction(text)
    cleaned = text.strip()
    if "." in cleaned or "e" in cleaned.lower():
        raise ValueError(f"Not an exact rational: {text!r}")
    return Fraction(cleaned)


def format_rational(value: Fraction | int) -> str:
    """Format a rational as "p/q", or "p" when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _dot(left: Sequence[Fraction], right: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(left, right, strict=True)), Fraction(0))


def _vector(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


@dataclass(frozen=True)
class RationalMatrix:
    """Rectangular matrix with exact rational entries."""

    entries: tuple[tuple[Fraction, ...], ...]
    cols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]], cols: int | None = None) -> Self:
        """
        Build a matrix from row iterables.

        Args:
            rows: Row entries (ints, Fractions or rational strings)
            cols: Column count, required only when there are no rows

        Returns:
            The matrix

        Raises:
            DimensionMismatchError: If rows have different lengths
        """
        entries = tuple(_vector(row) for row in rows)
        widths = {len(row) for row in entries}
        if len(widths) > 1:
            raise DimensionMismatchError(f"Ragged matrix rows with lengths {sorted(widths)}")
        width = widths.pop() if widths else (cols or 0)
        if cols is not None and width != cols:
            raise DimensionMismatchError(f"Expected {cols} columns, got {width}")
        return cls(entries, width)

    @classmethod
    def identity(cls, size: int) -> Self:
        """Create the size × size identity matrix."""
        return cls.from_rows(
            ([1 if i == j else 0 for j in range(size)] for i in range(size)), cols=size
        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, index: int) -> tuple[Fraction, ...]:
        return self.entries[index]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(zip(*self.entries, strict=True), cols=self.rows)

    def to_array(self) -> np.ndarray:
        """Copy the entries into a numpy object array of Fractions."""
        array = np.empty((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                array[i, j] = value
        return array

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"Cannot multiply {self.rows}×{self.cols} by {other.rows}×{other.cols}"
            )
        columns = list(zip(*other.entries, strict=True)) if other.rows else []
        return RationalMatrix.from_rows(
            ([_dot(row, col) for col in columns] for row in self.entries), cols=other.cols
        )


class Sense(str, Enum):
    """Comparison sense of a linear constraint."""

    LE = "<="
    LT = "<"
    GE = ">="
    GT = ">"
    EQ = "="

    @property
    def is_strict(self) -> bool:
        return self in (Sense.LT, Sense.GT)


@dataclass(frozen=True)
class LinearConstraint:
    """A constraint ⟨coefficients, x⟩ (sense) bound."""

    coefficients: tuple[Fraction, ...]
    bound: Fraction
    sense: Sense

    @classmethod
    def of(cls, coefficients: Iterable[RationalLike], sense: Sense, bound: RationalLike) -> Self:
        return cls(_vector(coefficients), parse_rational(bound), sense)

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    @property
    def is_strict(self) -> bool:
        return self.sense.is_strict

    def value(self, point: Sequence[RationalLike]) -> Fraction:
        if len(point) != self.dim:
            raise DimensionMismatchError(
                f"Point of length {len(point)} for a constraint in dimension {self.dim}"
            )
        return _dot(self.coefficients, [Fraction(x) for x in point])

    def holds(self, point: Sequence[RationalLike]) -> bool:
        """Check the constraint exactly at a point."""
        lhs = self.value(point)
        match self.sense:
            case Sense.LE:
                return lhs <= self.bound
            case Sense.LT:
                return lhs < self.bound
            case Sense.GE:
                return lhs >= self.bound
            case Sense.GT:
                return lhs > self.bound
            case Sense.EQ:
                return lhs == self.bound

    def closure(self) -> "LinearConstraint":
        """Weak version of the constraint (< becomes ≤, > becomes ≥)."""
        if self.sense is Sense.LT:
            return LinearConstraint(self.coefficients, self.bound, Sense.LE)
        if self.sense is Sense.GT:
            return LinearConstraint(self.coefficients, self.bound, Sense.GE)
        return self


class SolveStatus(str, Enum):
    """Outcome of an exact linear solve."""

    UNIQUE = "unique"
    NO_SOLUTION = "no solution"
    UNDERDETERMINED = "underdetermined"


@dataclass(frozen=True)
class LinearSolution:
    """Result of ``solve_linear_system``; ``values`` is set only for a unique solution."""

    status: SolveStatus
    values: tuple[Fraction, ...] | None = None


def solve_linear_system(matrix: RationalMatrix, rhs: Sequence[RationalLike]) -> LinearSolution:
    """
    Solve A·x = b exactly by Gauss-Jordan elimination.

    Args:
        matrix: Coefficient matrix A
        rhs: Right-hand side b, one entry per row of A

    Returns:
        The unique solution, or the classification "no solution" / "underdetermined"

    Raises:
        DimensionMismatchError: If b does not have one entry per row of A
    """
    if len(rhs) != matrix.rows:
        raise DimensionMismatchError(
            f"Right-hand side has {len(rhs)} entries for {matrix.rows} equations"
        )
    rows, cols = matrix.rows, matrix.cols
    augmented = np.empty((rows, cols + 1), dtype=object)
    if rows:
        augmented[:, :cols] = matrix.to_array()
        augmented[:, cols] = _vector(rhs)

    pivots: list[int] = []
    rank = 0
    for col in range(cols):
        pivot = next((i for i in range(rank, rows) if augmented[i, col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            augmented[[rank, pivot]] = augmented[[pivot, rank]]
        augmented[rank] = augmented[rank] / augmented[rank, col]
        for i in range(rows):
            if i != rank and augmented[i, col] != 0:
                augmented[i] = augmented[i] - augmented[i, col] * augmented[rank]
        pivots.append(col)
        rank += 1

    if any(augmented[i, cols] != 0 for i in range(rank, rows)):
        return LinearSolution(SolveStatus.NO_SOLUTION)
    if rank < cols:
        return LinearSolution(SolveStatus.UNDERDETERMINED)

    values = [Fraction(0)] * cols
    for i, col in enumerate(pivots):
        values[col] = augmented[i, cols]
    return LinearSolution(SolveStatus.UNIQUE, tuple(values))


def rank(matrix: RationalMatrix) -> int:
    """Exact rank by row reduction."""
    work = matrix.to_array()
    rows, cols = work.shape
    current = 0
    for col in range(cols):
        pivot = next((i for i in range(current, rows) if work[i, col] != 0), None)
        if pivot is None:
            continue
        work[[current, pivot]] = work[[pivot, current]]
        for i in range(current + 1, rows):
            if work[i, col] != 0:
                work[i] = work[i] - (work[i, col] / work[current, col]) * work[current]
        current += 1
        if current == rows:
            break
    return current


def determinant(matrix: RationalMatrix) -> Fraction:
    """
    Exact determinant by Bareiss fraction-free elimination.

    Rows are first scaled to integers; every intermediate entry of the
    elimination is then an integer minor.

    Args:
        matrix: Square matrix

    Returns:
        The determinant

    Raises:
        DimensionMismatchError: If the matrix is not square
    """
    if not matrix.is_square:
        raise DimensionMismatchError(
            f"Determinant of a non-square {matrix.rows}×{matrix.cols} matrix"
        )
    size = matrix.rows
    if size == 0:
        return Fraction(1)

    scale = 1
    work: list[list[int]] = []
    for row in matrix.entries:
        denominator = math.lcm(*(value.denominator for value in row))
        scale *= denominator
        work.append([int(value * denominator) for value in row])

    return Fraction(integer_determinant(work), scale)


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant of a square integer matrix (the input is not modified)."""
    work = [list(row) for row in rows]
    size = len(work)
    if size == 0:
        return 1
    sign = 1
    previous = 1
    for k in range(size - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if work[i][k] != 0), None)
            if swap is None:
                return 0
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        pivot = work[k][k]
        for i in range(k + 1, size):
            factor = work[i][k]
            row_i, row_k = work[i], work[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
        previous = pivot
    return sign * work[size - 1][size - 1]


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of ``strict_feasibility``.

    ``margin`` is the optimal slack t* given to the strict constraints
    (capped at 1); ``witness`` satisfies every constraint exactly.
    """

    feasible: bool
    witness: tuple[Fraction, ...] | None = None
    margin: Fraction | None = None


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tableau[row] = tableau[row] / tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0:
            tableau[i] = tableau[i] - tableau[i, col] * tableau[row]
    basis[row] = col


def _run_simplex(tableau: np.ndarray, basis: list[int], columns: Sequence[int]) -> bool:
    """
    Maximize over the tableau with Bland's rule.

    The last row holds reduced costs, the last column the right-hand side.

    Returns:
        False if the objective is unbounded, True at an optimum
    """
    objective = tableau.shape[0] - 1
    while True:
        entering = next((j for j in columns if tableau[objective, j] < 0), None)
        if entering is None:
            return True
        best: tuple[tuple[Fraction, int], int] | None = None
        for i in range(objective):
            coefficient = tableau[i, entering]
            if coefficient > 0:
                key = (tableau[i, -1] / coefficient, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(tableau, basis, best[1], entering)


def _maximize(
    rows: list[list[Fraction]],
    rhs: list[Fraction],
    equality: list[bool],
    objective: list[Fraction],
) -> tuple[Fraction, list[Fraction]] | None:
    """
    Two-phase exact simplex for max c·z s.t. rows·z (≤ or =) rhs, z ≥ 0.

    Returns:
        Optimal value and solution, or None if infeasible
    """
    m, nvar = len(rows), len(objective)
    slack_cols: dict[int, int] = {}
    for i in range(m):
        if not equality[i]:
            slack_cols[i] = nvar + len(slack_cols)
    needs_artificial = [equality[i] or rhs[i] < 0 for i in range(m)]
    art_start = nvar + len(slack_cols)
    width = art_start + sum(needs_artificial) + 1

    tableau = np.full((m + 1, width), Fraction(0), dtype=object)
    basis = [0] * m
    next_art = art_start
    for i in range(m):
        flip = -1 if rhs[i] < 0 else 1
        for j, value in enumerate(rows[i]):
            tableau[i, j] = flip * value
        if i in slack_cols:
            tableau[i, slack_cols[i]] = Fraction(flip)
        tableau[i, -1] = flip * rhs[i]
        if needs_artificial[i]:
            tableau[i, next_art] = Fraction(1)
            basis[i] = next_art
            next_art += 1
        else:
            basis[i] = slack_cols[i]

    # Phase 1: maximize −Σ artificials.
    tableau[m, art_start : width - 1] = Fraction(1)
    for i in range(m):
        if basis[i] >= art_start:
            tableau[m] = tableau[m] - tableau[i]
    _run_simplex(tableau, basis, range(width - 1))
    if tableau[m, -1] < 0:
        return None

    keep = []
    for i in range(m):
        if basis[i] >= art_start:
            col = next((j for j in range(art_start) if tableau[i, j] != 0), None)
            if col is None:
                continue
            _pivot(tableau, basis, i, col)
        keep.append(i)

    columns = [*range(art_start), width - 1]
    phase2 = tableau[np.ix_([*keep, m], columns)]
    basis = [basis[i] for i in keep]
    phase2[-1] = Fraction(0)
    for j, value in enumerate(objective):
        phase2[-1, j] = -value
    for i, col in enumerate(basis):
        if phase2[-1, col] != 0:
            phase2[-1] = phase2[-1] - phase2[-1, col] * phase2[i]
    if not _run_simplex(phase2, basis, range(art_start)):
        raise ArithmeticError("margin objective is bounded by construction")

    solution = [Fraction(0)] * art_start
    for i, col in enumerate(basis):
        solution[col] = phase2[i, -1]
    return phase2[-1, -1], solution[:nvar]


def strict_feasibility(constraints: Sequence[LinearConstraint], dim: int) -> FeasibilityResult:
    """
    Decide whether a system of strict and weak linear constraints has a solution.

    A margin variable t ≥ 0 is subtracted from the bound of every strict
    constraint and maximized (capped at 1) by an exact simplex method with
    Bland's rule; the system is feasible iff t* > 0.

    Args:
        constraints: Constraints over R^dim
        dim: Ambient dimension

    Returns:
        Feasibility verdict, with an exact witness and the margin when feasible

    Raises:
        DimensionMismatchError: If a constraint has the wrong length
    """
    for constraint in constraints:
        if constraint.dim != dim:
            raise DimensionMismatchError(
                f"Constraint of length {constraint.dim} in dimension {dim}"
            )

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    equality: list[bool] = []
    zero, one = Fraction(0), Fraction(1)
    for constraint in constraints:
        flip = -1 if constraint.sense in (Sense.GE, Sense.GT) else 1
        coefficients = [flip * c for c in constraint.coefficients]
        margin = one if constraint.is_strict else zero
        rows.append([*coefficients, *(-c for c in coefficients), margin])
        rhs.append(flip * constraint.bound)
        equality.append(constraint.sense is Sense.EQ)
    rows.append([zero] * (2 * dim) + [one])
    rhs.append(one)
    equality.append(False)

    objective = [zero] * (2 * dim) + [one]
    result = _maximize(rows, rhs, equality, objective)
    if result is None:
        logger.debug("Closure of a %d-constraint system is empty", len(constraints))
        return FeasibilityResult(False)
    margin, solution = result
    if margin <= 0:
        return FeasibilityResult(False, margin=margin)
    witness = tuple(solution[i] - solution[dim + i] for i in range(dim))
    return FeasibilityResult(True, witness, margin)
