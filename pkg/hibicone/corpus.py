"""Named test posets.

Twenty small posets (at most seven elements) used by the property checks,
the corpus sweep script and the test suite.
"""
from collections.abc import Callable
from functools import cache

from hibicone.poset import Poset, disjoint_chains


def _poset(elements: str, covers: str) -> Callable[[], Poset]:
    """Posets written compactly: "a b c" and "a<b b<c"."""

    def build() -> Poset:
        pairs = [tuple(cover.split("<")) for cover in covers.split()]
        return Poset.from_covers(elements.split(), pairs)

    return build


def _segre(*lengths: int) -> Callable[[], Poset]:
    return lambda: disjoint_chains(lengths)


def _grid(rows: int, cols: int) -> Callable[[], Poset]:
    """Product of a chain of ``rows`` and a chain of ``cols`` elements."""

    def build() -> Poset:
        elements = [f"g{i}{j}" for i in range(1, rows + 1) for j in range(1, cols + 1)]
        covers = [(f"g{i}{j}", f"g{i + 1}{j}") for i in range(1, rows) for j in range(1, cols + 1)]
        covers += [(f"g{i}{j}", f"g{i}{j + 1}") for i in range(1, rows + 1) for j in range(1, cols)]
        return Poset.from_covers(elements, covers)

    return build


FIGURE_ONE = _poset("p1 p2 p3 p4 p5 p6", "p1<p2 p2<p3 p4<p5 p5<p3 p5<p6")

_BUILDERS: dict[str, Callable[[], Poset]] = {
    "chain1": _poset("a", ""),
    "chain3": _poset("a b c", "a<b b<c"),
    "figure1": FIGURE_ONE,
    "segre-1,1": _segre(1, 1),
    "segre-1,1,1": _segre(1, 1, 1),
    "segre-1,1,1,1": _segre(1, 1, 1, 1),
    "segre-1,2": _segre(1, 2),
    "segre-2,2": _segre(2, 2),
    "segre-2,2,2": _segre(2, 2, 2),
    "segre-1,3": _segre(1, 3),
    "segre-2,1,1": _segre(2, 1, 1),
    "segre-1,2,2": _segre(1, 2, 2),
    "diamond": _poset("a b c d", "a<b a<c b<d c<d"),
    "N": _poset("a b c d", "a<c b<c b<d"),
    "V": _poset("a b c", "a<b a<c"),
    "lambda": _poset("a b c", "a<c b<c"),
    "bowtie": _poset("a b c d", "a<c a<d b<c b<d"),
    "zigzag": _poset("a b c d e", "a<b c<b c<d e<d"),
    "pendant": _poset("a b c d", "a<b b<c a<d"),
    "grid-2x3": _grid(2, 3),
}

CORPUS_NAMES: tuple[str, ...] = tuple(_BUILDERS)


@cache
def corpus_poset(name: str) -> Poset:
    """
    Build a corpus poset by name.

    Raises:
        KeyError: If the name is unknown
    """
    return _BUILDERS[name]()


def load_corpus() -> dict[str, Poset]:
    """All corpus posets, in a fixed order."""
    return {name: corpus_poset(name) for name in CORPUS_NAMES}
