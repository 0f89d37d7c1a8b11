"""Indexes: binary relations defined by NRPQs, stored as fresh edge labels.

A query is rewritten to *jump* over an index by replacing every subtree
equal to the index definition with a single edge step.  Matching is
syntactic on desugared ASTs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import GraphError, LabeledGraph, add_edge_relation
from .reference import eval_path_rel
from .syntax import (
    Concat, Edge, FilterStep, Not, Star, _map, desugar, is_desugared, union,
)


@dataclass(frozen=True)
class IndexDef:
    name: str
    definition: object  # Path; may contain negation

    def __post_init__(self) -> None:
        if not self.name or any(ch.isspace() for ch in self.name):
            raise GraphError(f"invalid index name {self.name!r}")


def check_names(g: LabeledGraph, defs: Sequence[IndexDef]) -> None:
    seen: set[str] = set()
    for d in defs:
        if d.name in g.edges:
            raise GraphError(f"index name {d.name!r} collides with an edge label of the graph")
        if d.name in seen:
            raise GraphError(f"index name {d.name!r} is defined twice")
        seen.add(d.name)


def build_index(g: LabeledGraph, d: IndexDef) -> LabeledGraph:
    """Add ``d``'s relation, computed by the reference evaluator, as edge label ``d.name``."""
    if d.name in g.edges:
        raise GraphError(f"index name {d.name!r} collides with an edge label of the graph")
    return add_edge_relation(g, d.name, eval_path_rel(g, d.definition))


def build_indexes(g: LabeledGraph, defs: Iterable[IndexDef]) -> LabeledGraph:
    """Every definition is evaluated on ``g`` itself, not on earlier enrichments."""
    defs = list(defs)
    check_names(g, defs)
    rels = [(d.name, eval_path_rel(g, d.definition)) for d in defs]
    for name, rel in rels:
        g = add_edge_relation(g, name, rel)
    return g


def rewrite_with_indexes(p, defs: Sequence[IndexDef]):
    """Replace subtrees equal to each definition by an index edge, in list order.

    Replaced subtrees are not scanned again, so an earlier definition wins
    where two overlap.
    """
    for d in defs:
        if not is_desugared(d.definition):
            raise ValueError(f"index {d.name!r} has an undesugared definition")
        p = _replace(p, d.definition, Edge(d.name))
    return p


def _replace(t, pattern, edge: Edge):
    def go(u):
        if u == pattern:
            return edge
        return _map(u, go, go)

    return go(t)


def make_top_index(t: str, structural: Iterable[str], labeled_test) -> IndexDef:
    """``top_t = (e/?(not F))*/e/?(F)`` with ``e`` the union of the structural labels.

    Relates a node to the first ``F``-nodes below it along ``e`` steps.
    """
    labels = sorted(set(structural))
    if not labels:
        raise ValueError("make_top_index needs at least one structural edge label")
    e = union(*(Edge(a) for a in labels))
    body = Concat(
        Concat(Star(Concat(e, FilterStep(Not(labeled_test)))), e),
        FilterStep(labeled_test),
    )
    return IndexDef("top_" + t, desugar(body))
