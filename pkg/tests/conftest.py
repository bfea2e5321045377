import pytest

from hibicone.corpus import corpus_poset
from hibicone.hasse import SpanningTree, choose_spanning_tree
from hibicone.poset import AugmentedPoset, augment
from tests.support import FIGURE_TREE


@pytest.fixture
def figure_one() -> AugmentedPoset:
    return augment(corpus_poset("figure1"))


@pytest.fixture
def figure_tree(figure_one: AugmentedPoset) -> SpanningTree:
    """The tree whose cotree is the 0̂-p1 edge and the p5-p3 edge."""
    return choose_spanning_tree(figure_one, [figure_one.parse_edge_ref(e) for e in FIGURE_TREE])


@pytest.fixture
def chain() -> AugmentedPoset:
    return augment(corpus_poset("chain3"))
