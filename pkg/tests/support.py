from hibicone.hasse import SpanningTree
from hibicone.poset import augment
from hibicone.segre import SegreSpec, segre_poset, segre_tree

# Figure-1 edges in index order:
#   e1 0̂-p1, e2 0̂-p4, e3 p1-p2, e4 p2-p3, e5 p3-1̂, e6 p4-p5, e7 p5-p3, e8 p5-p6, e9 p6-1̂
FIGURE_TREE = ("e2", "e3", "e4", "e5", "e6", "e8", "e9")


def segre(*lengths: int) -> tuple[SegreSpec, SpanningTree]:
    """A Segre product with its standard spanning tree."""
    spec = SegreSpec(lengths)
    ap = augment(segre_poset(spec))
    return spec, segre_tree(ap, spec)
