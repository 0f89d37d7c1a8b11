"""The running example graph G0 and query P0."""
from __future__ import annotations

from .graph import LabeledGraph, disjoint_union, load_graph

G0_TEXT = """\
# G0: nodes 0..7, edge labels a, b, c, no node labels
node 0
node 1
node 2
node 3
node 4
node 5
node 6
node 7
edge a 0 1
edge a 0 4
edge a 0 6
edge b 1 2
edge b 4 2
edge b 5 2
edge c 2 3
"""

P0_TEXT = "a/?([b/c])"


def g0() -> LabeledGraph:
    return load_graph(G0_TEXT)


def padded_g0(k: int) -> LabeledGraph:
    """G0 plus ``k`` disjoint copies whose node ids are prefixed ``p<n>_``."""
    base = g0()
    return disjoint_union([base] * (k + 1), [""] + [f"p{n}_" for n in range(k)])
