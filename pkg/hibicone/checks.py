"""Property checks that cross-validate the engines on a poset.

Each check recomputes a result two independent ways (lattice points
against the LP oracle, two volume engines, several spanning trees) and
records whether they agree.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from hibicone.classgroup import transfer_class
from hibicone.config import CHECK
from hibicone.conic import (
    conic_polytope,
    cycle_inequalities,
    enumerate_conic,
    fundamental_bounds,
    lattice_points,
    oracle_sweep,
    sweep_box,
)
from hibicone.errors import CheckFailedError
from hibicone.geometry import signature_table
from hibicone.hasse import (
    SpanningTree,
    choose_spanning_tree,
    enumerate_circuits,
    enumerate_cycles,
    random_spanning_tree,
)
from hibicone.poset import AugmentedPoset
from hibicone.utils import BoxKind

logger = logging.getLogger(__name__)

# Largest d for which the polytope engine is cross-checked against the alcove engine.
POLYTOPE_CHECK_MAX_D = 5


@dataclass(frozen=True)
class CheckResult:
    """One check; ``count`` is the number of objects it compared, when it counts any."""

    name: str
    passed: bool
    detail: str = ""
    count: int | None = None


@dataclass
class CheckReport:
    """Outcome of the property suite on one poset."""

    poset: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def add(self, name: str, passed: bool, detail: str = "", count: int | None = None) -> None:
        if not passed:
            logger.warning("Check %s failed on %s: %s", name, self.poset, detail)
        self.results.append(CheckResult(name, passed, detail, count))

    def result(self, name: str) -> CheckResult:
        """
        Raises:
            KeyError: If no check of that name ran
        """
        for result in self.results:
            if result.name == name:
                return result
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [result for result in self.results if not result.passed]

    def raise_on_failure(self) -> None:
        """
        Raises:
            CheckFailedError: If any check failed
        """
        failed = self.failures()
        if failed:
            names = ", ".join(f"{r.name} ({r.detail})" for r in failed)
            raise CheckFailedError(f"{self.poset}: {names}")

    def to_dict(self) -> dict[str, object]:
        return {
            "poset": self.poset,
            "passed": self.passed,
            "checks": [_result_dict(r) for r in self.results],
        }


def _result_dict(result: CheckResult) -> dict[str, object]:
    entry: dict[str, object] = {
        "name": result.name,
        "passed": result.passed,
        "detail": result.detail,
    }
    if result.count is not None:
        entry["count"] = result.count
    return entry


def check_oracle(
    tree: SpanningTree, box: BoxKind = "tight", jobs: int = 1
) -> tuple[bool, str, int]:
    """Lattice points of C(P) against the LP oracle on every point of the sweep box."""
    enumerated = {cls.coords for cls in enumerate_conic(tree)}
    accepted = oracle_sweep(tree, sweep_box(tree, box), jobs)
    missing = sorted(accepted - enumerated)
    extra = sorted(enumerated - accepted)
    if missing or extra:
        return False, f"oracle-only {missing[:5]}, enumeration-only {extra[:5]}", len(enumerated)
    return True, f"{len(enumerated)} classes", len(enumerated)


def check_partition(tree: SpanningTree, jobs: int = 1) -> tuple[bool, str]:
    """Signatures are positive exactly on the conic classes and sum to 1."""
    table = signature_table(tree, "alcove", jobs)
    conic = {cls.coords for cls in enumerate_conic(tree)}
    if set(table.entries) != conic:
        return False, "classes with positive volume differ from the conic classes"
    if table.total() != 1:
        return False, f"volumes sum to {table.total()}"
    if tree.poset.d <= POLYTOPE_CHECK_MAX_D:
        cells = signature_table(tree, "polytope", jobs)
        if cells.entries != table.entries:
            return False, "polytope and alcove engines disagree"
        return True, "both engines"
    return True, "alcove engine"


def check_tree_independence(
    tree: SpanningTree, samples: int = CHECK.tree_samples, seed: int = CHECK.tree_seed
) -> tuple[bool, str]:
    """Conic classes and their signatures agree after changing the spanning tree."""
    ap = tree.poset
    conic = enumerate_conic(tree)
    table = signature_table(tree)
    for k in range(samples):
        other = random_spanning_tree(ap, seed + k)
        moved = {cls.coords: transfer_class(cls, other).coords for cls in conic}
        if set(moved.values()) != {cls.coords for cls in enumerate_conic(other)}:
            return False, f"conic classes change under tree {other.labels()}"
        other_table = signature_table(other)
        if any(table.entries.get(c) != other_table.entries.get(m) for c, m in moved.items()):
            return False, f"signatures change under tree {other.labels()}"
    return True, f"{samples} trees"


def check_circuits(ap: AugmentedPoset) -> tuple[bool, str, int]:
    """The chordless-cycle enumeration matches filtering all cycles for chords."""
    circuits = [c.vertices for c in enumerate_circuits(ap)]
    reference = [c.vertices for c in enumerate_cycles(ap) if c.is_circuit]
    if circuits != reference:
        detail = f"{len(circuits)} circuits against {len(reference)} chordless cycles"
        return False, detail, len(circuits)
    return True, f"{len(circuits)} circuits", len(circuits)


def check_redundancy(tree: SpanningTree) -> tuple[bool, str]:
    """Inequalities from every cycle cut out the same lattice points as the circuits alone."""
    box = fundamental_bounds(tree)
    circuits = lattice_points(conic_polytope(tree), box)
    everything = lattice_points(cycle_inequalities(tree, enumerate_cycles(tree.poset)), box)
    if circuits != everything:
        return False, f"{len(circuits)} points from circuits, {len(everything)} from all cycles"
    return True, ""


def check_duality(tree: SpanningTree) -> tuple[bool, str]:
    """For a pure poset, C(P) is symmetric under negation and s(c) = s(−c)."""
    table = signature_table(tree)
    for coords, value in table.entries.items():
        negated = tuple(-c for c in coords)
        if table.entries.get(negated, Fraction(0)) != value:
            return False, f"s({list(coords)}) ≠ s({list(negated)})"
    return True, ""


def run_checks(
    ap: AugmentedPoset,
    name: str = "poset",
    jobs: int = 1,
    box: BoxKind = "tight",
    tree: SpanningTree | None = None,
) -> CheckReport:
    """
    Run the property suite on one poset.

    Args:
        ap: Augmented poset
        name: Name used in the report
        jobs: Worker processes for the sweeps
        box: Oracle sweep box
        tree: Spanning tree (defaults to the breadth-first tree)

    Returns:
        The report; failures are logged, not raised
    """
    tree = choose_spanning_tree(ap) if tree is None else tree
    report = CheckReport(name)
    report.add("oracle-equivalence", *check_oracle(tree, box, jobs))
    report.add("partition-of-unity", *check_partition(tree, jobs))
    report.add("tree-independence", *check_tree_independence(tree))
    report.add("circuits", *check_circuits(ap))
    report.add("cycle-redundancy", *check_redundancy(tree))
    if ap.is_pure():
        report.add("duality", *check_duality(tree))
    logger.info("%s: %d checks, %d failed", name, len(report.results), len(report.failures()))
    return report
