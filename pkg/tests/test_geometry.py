import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest

from hibicone.conic import enumerate_conic
from hibicone.corpus import load_corpus
from hibicone.errors import GeometryError, UnboundedPolytopeError
from hibicone.exact import LinearConstraint, Sense
from hibicone.geometry import (
    alcove_counts,
    eulerian,
    hypersimplex,
    join_volume_check,
    signature_table,
    standard_simplex,
    unit_cube,
    vertex_enumeration,
    volume,
)
from hibicone.hasse import choose_spanning_tree
from hibicone.poset import augment
from hibicone.segre import segre_signature_closed_form

from tests.support import segre

SMALL = [name for name, poset in load_corpus().items() if len(poset) + 1 <= 5]
JOIN_PAIRS = [(e, e2) for e in range(1, 5) for e2 in range(e, 9 - e)]


class TestPolytopes:
    @pytest.mark.parametrize("dim", [1, 2, 3, 4])
    def test_unit_cube(self, dim):
        polytope = vertex_enumeration(unit_cube(dim), dim)
        assert len(polytope.vertices) == 2**dim
        assert volume(polytope) == 1

    @pytest.mark.parametrize("dim", [1, 2, 3, 4])
    def test_standard_simplex(self, dim):
        polytope = vertex_enumeration(standard_simplex(dim), dim)
        assert len(polytope.vertices) == dim + 1
        assert volume(polytope) == Fraction(1, math.factorial(dim))

    @pytest.mark.parametrize(("dim", "k"), [(3, 0), (3, 1), (4, 1), (4, 2)])
    def test_hypersimplex(self, dim, k):
        polytope = vertex_enumeration(hypersimplex(dim, k), dim)
        assert volume(polytope) == Fraction(eulerian(dim, k + 1), math.factorial(dim))

    def test_strict_constraints_are_closed(self):
        constraints = [
            LinearConstraint.of([1, 0], Sense.GT, -1),
            LinearConstraint.of([1, 0], Sense.LE, 0),
            LinearConstraint.of([0, 1], Sense.GT, 0),
            LinearConstraint.of([1, 1], Sense.LT, 1),
        ]
        polytope = vertex_enumeration(constraints, 2)
        assert set(polytope.vertices) == {(-1, 0), (-1, 2), (0, 0), (0, 1)}
        assert volume(polytope) == Fraction(3, 2)

    def test_lower_dimensional(self):
        flat = [*unit_cube(2), LinearConstraint.of([1, -1], Sense.EQ, 0)]
        assert volume(vertex_enumeration(flat, 2)) == 0

    def test_empty(self):
        empty = [*unit_cube(2), LinearConstraint.of([1, 1], Sense.GE, 3)]
        assert volume(vertex_enumeration(empty, 2)) == 0

    def test_unbounded(self):
        with pytest.raises(UnboundedPolytopeError):
            vertex_enumeration([LinearConstraint.of([1, 0], Sense.GE, 0)], 2)

    # the join for (e2, e) is congruent to the one for (e, e2) under λ ↦ 1 − λ
    @pytest.mark.parametrize(("e", "e2"), [*JOIN_PAIRS, (2, 1), (3, 1), (4, 2)])
    def test_join_of_cubes(self, e, e2):
        assert join_volume_check(e, e2)


class TestEulerian:
    def test_values(self):
        assert [eulerian(4, p) for p in range(1, 5)] == [1, 11, 11, 1]
        assert eulerian(5, 3) == 66

    @pytest.mark.parametrize("d", range(1, 8))
    def test_row_sums(self, d):
        assert sum(eulerian(d, p) for p in range(1, d + 1)) == math.factorial(d)

    @pytest.mark.parametrize("d", range(1, 7))
    def test_descent_counts(self, d):
        counts = Counter(
            1 + sum(a > b for a, b in itertools.pairwise(perm))
            for perm in itertools.permutations(range(d))
        )
        assert counts == {p: eulerian(d, p) for p in range(1, d + 1)}

    @pytest.mark.parametrize("d", range(1, 11))
    def test_symmetry(self, d):
        assert all(eulerian(d, p) == eulerian(d, d + 1 - p) for p in range(1, d + 1))

    @pytest.mark.parametrize("p", [0, 5])
    def test_out_of_range(self, p):
        with pytest.raises(GeometryError):
            eulerian(4, p)


class TestSignatures:
    @pytest.mark.parametrize("name", sorted(load_corpus()))
    def test_total_volume_is_one(self, name):
        tree = choose_spanning_tree(augment(load_corpus()[name]))
        assert signature_table(tree).total() == 1

    @pytest.mark.parametrize("name", sorted(load_corpus()))
    def test_supported_exactly_on_conic_classes(self, name):
        tree = choose_spanning_tree(augment(load_corpus()[name]))
        table = signature_table(tree)
        assert table.classes() == [cls.coords for cls in enumerate_conic(tree)]
        assert all(value > 0 for value in table.entries.values())

    def test_factorial_ring(self, chain):
        counts = alcove_counts(choose_spanning_tree(chain))
        assert counts == {(): 24}

    @pytest.mark.parametrize("t", [2, 3, 4, 5])
    def test_two_variable_factors(self, t):
        spec, tree = segre(*[1] * t)
        table = signature_table(tree)
        assert len(table) == 2**t - 1
        for coords in table.classes():
            assert table[coords] == segre_signature_closed_form(spec, coords)

    @pytest.mark.parametrize(("r", "s"), [(r, s) for r in range(1, 5) for s in range(1, 5)])
    def test_two_factors(self, r, s):
        spec, tree = segre(r, s)
        table = signature_table(tree)
        assert table.classes() == [(c,) for c in range(-s, r + 1)]
        for coords in table.classes():
            assert table[coords] == segre_signature_closed_form(spec, coords)

    def test_single_lambda_cell(self):
        _, tree = segre(1, 1, 1)
        assert signature_table(tree)[(0, 1)] == Fraction(1, 12)

    def test_figure_one_duality(self, figure_tree):
        table = signature_table(figure_tree)
        assert len(table) == 15
        for coords in table.classes():
            assert table[coords] == table[tuple(-c for c in coords)]

    @pytest.mark.parametrize("name", SMALL)
    def test_engines_agree(self, name):
        tree = choose_spanning_tree(augment(load_corpus()[name]))
        assert signature_table(tree, "polytope").entries == signature_table(tree).entries

    def test_parallel_matches_serial(self, figure_tree):
        serial = signature_table(figure_tree)
        assert signature_table(figure_tree, jobs=2).entries == serial.entries

    def test_frame(self):
        _, tree = segre(1, 1)
        frame = signature_table(tree).to_frame()
        assert list(frame.columns) == ["class", "volume", "approx"]
        assert frame["class"].tolist() == ["-1", "0", "1"]
        assert frame["volume"].tolist() == ["1/6", "2/3", "1/6"]
        assert frame["approx"].tolist() == [0.166667, 0.666667, 0.166667]

