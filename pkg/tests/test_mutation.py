import pytest

from hibicone.errors import NotAdmissibleError
from hibicone.mutation import (
    NCCRSet,
    OneParamSubgroup,
    admissible_patterns,
    canonicalize,
    exchange_graph,
    find_admissible_lambda,
    find_left_lambda,
    has_mcm_differences,
    left_mutation,
    mutation_asymmetries,
    right_mutation,
)
from hibicone.segre import SegreSpec, nccr_set

SPEC = SegreSpec.nccr(2, 3)
SQUARE = NCCRSet.of([(0, 0), (1, 0), (0, 1), (1, 1)])


@pytest.fixture(scope="module")
def graph():
    return exchange_graph(SQUARE, SPEC)


class TestSets:
    def test_canonicalize(self):
        canonical = canonicalize(NCCRSet.of([(1, 0), (2, 0)]))
        assert canonical.sorted() == [(0, 0), (1, 0)]
        assert canonical.canonical

    def test_canonicalize_empty(self):
        with pytest.raises(NotAdmissibleError):
            canonicalize(NCCRSet.of([]))

    def test_translate_and_negate(self):
        assert SQUARE.translate((1, 1)).sorted() == [(-1, -1), (-1, 0), (0, -1), (0, 0)]
        assert SQUARE.negated() == SQUARE.translate((1, 1))
        assert SQUARE.label() == "{(0,0) (0,1) (1,0) (1,1)}"

    def test_zero_subgroup(self):
        with pytest.raises(NotAdmissibleError):
            OneParamSubgroup((0, 0))


class TestRightMutation:
    def test_at_corner(self):
        admissible = find_admissible_lambda(SQUARE, (1, 0), SPEC)
        assert admissible is not None
        assert admissible.positive == (1,)
        assert admissible.degree == 2
        assert admissible.target == (1, 2)
        result = right_mutation(SQUARE, (1, 0), admissible.subgroup, SPEC)
        assert result.sorted() == [(0, 0), (0, 1), (1, 1), (1, 2)]

    def test_left_undoes_right(self):
        admissible = find_admissible_lambda(SQUARE, (1, 0), SPEC)
        result = right_mutation(SQUARE, (1, 0), admissible.subgroup, SPEC)
        back = find_left_lambda(result, (1, 2), SPEC)
        assert back is not None
        assert back.target == (1, 0)
        assert left_mutation(result, (1, 2), back.subgroup, SPEC) == SQUARE

    def test_origin_has_no_right_mutation(self):
        assert find_admissible_lambda(SQUARE, (0, 0), SPEC) is None

    def test_rejects_non_separating_subgroup(self):
        with pytest.raises(NotAdmissibleError):
            right_mutation(SQUARE, (1, 0), OneParamSubgroup((-1, -1)), SPEC)

    def test_rejects_non_member(self):
        with pytest.raises(NotAdmissibleError):
            find_admissible_lambda(SQUARE, (2, 2), SPEC)


class TestLeftMutation:
    def test_at_corner(self):
        left = find_left_lambda(SQUARE, (1, 0), SPEC)
        assert left is not None
        assert left.target == (-1, 0)
        result = left_mutation(SQUARE, (1, 0), left.subgroup, SPEC)
        assert result.sorted() == [(-1, 0), (0, 0), (0, 1), (1, 1)]

    def test_at_origin(self):
        left = find_left_lambda(SQUARE, (0, 0), SPEC)
        assert left is not None
        assert left.target == (2, 2)


class TestExchangeGraph:
    def test_shape(self, graph):
        assert len(graph.vertices) == 20
        assert not graph.truncated
        assert graph.is_connected()
        assert all((0, 0) in vertex for vertex in graph.vertices)

    def test_translation_classes(self, graph):
        classes = graph.translation_classes()
        assert len(classes) == 5
        assert all(len(members) == 4 for members in classes.values())
        assert frozenset(SQUARE.chars) in classes

    def test_edges_are_mutations(self, graph):
        for edge in graph.edges:
            assert edge.removed in edge.source
            assert edge.added in edge.target
            assert edge.source.chars - {edge.removed} == edge.target.chars - {edge.added}

    def test_known_edges(self, graph):
        pairs = {edge.key() for edge in graph.edges}
        corner_right = NCCRSet.of([(0, 0), (0, 1), (1, 1), (1, 2)])
        corner_left = NCCRSet.of([(-1, 0), (0, 0), (0, 1), (1, 1)])
        assert frozenset((SQUARE.chars, corner_right.chars)) in pairs
        assert frozenset((SQUARE.chars, corner_left.chars)) in pairs

    def test_patterns_agree(self, graph):
        for vertex in graph.vertices:
            for chi in vertex.sorted():
                targets = {a.target for a in admissible_patterns(vertex, chi, SPEC)}
                assert len(targets) <= 1

    def test_left_patterns_agree(self, graph):
        for vertex in graph.vertices:
            for chi in vertex.sorted():
                mirrored = tuple(-c for c in chi)
                options = admissible_patterns(vertex.negated(), mirrored, SPEC)
                targets = {tuple(-c for c in a.target) for a in options}
                assert len(targets) <= 1
                left = find_left_lambda(vertex, chi, SPEC)
                assert (left is None) == (not targets)
                if left is not None:
                    assert {left.target} == targets

    def test_left_undoes_every_right_mutation(self, graph):
        trips = 0
        for vertex in graph.vertices:
            for chi in vertex.sorted():
                right = find_admissible_lambda(vertex, chi, SPEC)
                if right is None:
                    continue
                result = right_mutation(vertex, chi, right.subgroup, SPEC)
                back = find_left_lambda(result, right.target, SPEC)
                assert back is not None
                assert back.target == chi
                restored = left_mutation(result, right.target, back.subgroup, SPEC)
                assert restored.chars == vertex.chars
                trips += 1
        assert trips > 0

    def test_right_undoes_every_left_mutation(self, graph):
        trips = 0
        for vertex in graph.vertices:
            for chi in vertex.sorted():
                left = find_left_lambda(vertex, chi, SPEC)
                if left is None:
                    continue
                result = left_mutation(vertex, chi, left.subgroup, SPEC)
                back = find_admissible_lambda(result, left.target, SPEC)
                assert back is not None
                assert back.target == chi
                restored = right_mutation(result, left.target, back.subgroup, SPEC)
                assert restored.chars == vertex.chars
                trips += 1
        assert trips > 0

    def test_vertices_have_mcm_differences(self, graph):
        assert all(has_mcm_differences(vertex, SPEC) for vertex in graph.vertices)

    def test_asymmetry(self, graph):
        found = {
            (vertex.chars, chi): (right, left)
            for vertex, chi, right, left in mutation_asymmetries(graph, SPEC)
        }
        assert found[(SQUARE.chars, (1, 0))] == ((1, 2), (-1, 0))

    def test_start_from_nccr_set(self, graph):
        assert exchange_graph(NCCRSet.of(nccr_set(SPEC)), SPEC).vertices == graph.vertices

    def test_translated_start(self, graph):
        shifted = exchange_graph(SQUARE.translate((-3, 5)), SPEC)
        assert {v.chars for v in shifted.vertices} == {v.chars for v in graph.vertices}

    def test_independent_of_jobs(self, graph):
        parallel = exchange_graph(SQUARE, SPEC, jobs=2)
        assert parallel.vertices == graph.vertices
        assert parallel.edges == graph.edges

    def test_cap(self):
        partial = exchange_graph(SQUARE, SPEC, cap=3)
        assert partial.truncated
        assert len(partial.vertices) == 3

    def test_two_factors(self):
        spec = SegreSpec.nccr(3, 2)
        line = exchange_graph(NCCRSet.of(nccr_set(spec)), spec)
        assert line.is_connected()
        assert all(has_mcm_differences(vertex, spec) for vertex in line.vertices)
