import pytest

from hibicone.classgroup import DivisorClass, lift_class
from hibicone.conic import (
    cell_of,
    conic_oracle,
    conic_polytope,
    cycle_inequalities,
    enumerate_conic,
    fundamental_bounds,
    lattice_points,
    oracle_sweep,
    sweep_box,
)
from hibicone.corpus import load_corpus
from hibicone.errors import DimensionMismatchError
from hibicone.exact import strict_feasibility
from hibicone.hasse import choose_spanning_tree, enumerate_cycles
from hibicone.poset import augment
from hibicone.segre import SegreSpec, segre_conic_closed_form

from tests.support import segre


def _coords(classes):
    return {cls.coords for cls in classes}


class TestCircuitPolytope:
    def test_figure_one(self, figure_tree):
        system = conic_polytope(figure_tree)
        assert len(system.cycles) == 2
        assert len(system.constraints) == 4
        assert fundamental_bounds(figure_tree) == ((-3, 3), (-1, 1))

    def test_figure_one_classes(self, figure_tree):
        coords = _coords(enumerate_conic(figure_tree))
        assert len(coords) == 15
        assert coords == {
            (z1, z2) for z1 in range(-3, 4) for z2 in (-1, 0, 1) if abs(z1 - z2) <= 2
        }

    def test_factorial_ring(self, chain):
        assert [cls.coords for cls in enumerate_conic(choose_spanning_tree(chain))] == [()]

    def test_nccr_product(self):
        _, tree = segre(2, 2, 2)
        assert len(enumerate_conic(tree)) == 19

    @pytest.mark.parametrize("t", [2, 3, 4, 5])
    def test_two_variable_factors(self, t):
        _, tree = segre(*[1] * t)
        assert len(enumerate_conic(tree)) == 2**t - 1

    @pytest.mark.parametrize(
        "lengths", [(1, 1), (1, 2), (2, 2), (1, 3), (2, 2, 2), (2, 1, 1), (1, 2, 2), (1, 1, 1, 1)]
    )
    def test_segre_closed_form(self, lengths):
        _, tree = segre(*lengths)
        assert _coords(enumerate_conic(tree)) == segre_conic_closed_form(SegreSpec(lengths))

    @pytest.mark.parametrize("name", sorted(load_corpus()))
    def test_non_circuits_are_redundant(self, name):
        tree = choose_spanning_tree(augment(load_corpus()[name]))
        every_cycle = cycle_inequalities(tree, enumerate_cycles(tree.poset))
        box = fundamental_bounds(tree)
        assert lattice_points(every_cycle, box) == lattice_points(conic_polytope(tree), box)

    def test_contains(self, figure_tree):
        system = conic_polytope(figure_tree)
        assert system.contains((3, 1))
        assert not system.contains((3, 0))


class TestOracle:
    def test_zero_is_conic(self, figure_one):
        assert conic_oracle([0] * figure_one.n, figure_one)

    def test_outside_segre_range(self):
        _, tree = segre(1, 1)
        assert not conic_oracle(lift_class(DivisorClass((2,), tree)), tree.poset)

    def test_nccr_corner(self):
        _, tree = segre(2, 2, 2)
        assert conic_oracle(lift_class(DivisorClass((2, 2), tree)), tree.poset)

    def test_wrong_length(self, figure_one):
        with pytest.raises(DimensionMismatchError):
            conic_oracle([0, 0], figure_one)

    @pytest.mark.parametrize("name", sorted(load_corpus()))
    def test_sweep_matches_enumeration(self, name):
        tree = choose_spanning_tree(augment(load_corpus()[name]))
        assert oracle_sweep(tree) == _coords(enumerate_conic(tree))

    def test_generic_box(self):
        _, tree = segre(1, 1)
        box = sweep_box(tree, "generic")
        assert box == ((-3, 3),)
        assert oracle_sweep(tree, box) == {(-1,), (0,), (1,)}

    def test_tight_box_margin(self, figure_tree):
        assert sweep_box(figure_tree, margin=2) == ((-5, 5), (-3, 3))

    def test_parallel_sweep(self, figure_tree):
        assert oracle_sweep(figure_tree, jobs=2) == oracle_sweep(figure_tree)


class TestCells:
    def test_zero_class_contains_origin(self, figure_tree):
        cell = cell_of(DivisorClass((0, 0), figure_tree))
        assert cell.ambient_dim == 7
        assert cell.contains((0,) * 7)
        assert not cell_of(DivisorClass((1, 0), figure_tree)).contains((0,) * 7)

    def test_conic_cells_are_open(self, figure_tree):
        for cls in enumerate_conic(figure_tree):
            cell = cell_of(cls)
            assert strict_feasibility(cell.constraints, cell.ambient_dim).feasible

    def test_non_conic_cell_is_empty(self, figure_tree):
        cell = cell_of(DivisorClass((3, -1), figure_tree))
        assert not strict_feasibility(cell.constraints, cell.ambient_dim).feasible

    def test_document(self):
        _, tree = segre(1, 1)
        document = cell_of(DivisorClass((1,), tree)).to_dict()
        assert document["class"] == [1]
        assert len(document["constraints"]) == 2 * 3 + 2
        assert {c["sense"] for c in document["constraints"]} <= {">", "<=", ">=", "<", "="}
