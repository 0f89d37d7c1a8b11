"""Direct set-based semantics of NRPQs, including negation.

Used as the correctness oracle and to materialize index relations.  It
touches the whole graph by design.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable

from .graph import LabeledGraph
from .syntax import (
    And, AnyEdge, Concat, Edge, EdgeInv, FilterStep, Goto, HasPath, NodeLabel,
    Not, Or, Plus, Star, Truth, Union,
)

NodeRel = frozenset  # of (NodeId, NodeId)


class StartNodeError(ValueError):
    pass


def _succ(rel: Iterable[tuple[str, str]]) -> dict[str, set[str]]:
    out: dict[str, set[str]] = defaultdict(set)
    for u, v in rel:
        out[u].add(v)
    return out


def compose(r: Iterable[tuple[str, str]], s: Iterable[tuple[str, str]]) -> frozenset:
    s_succ = _succ(s)
    return frozenset((u, w) for u, v in r for w in s_succ.get(v, ()))


def transitive_closure(rel: Iterable[tuple[str, str]]) -> frozenset:
    """Least transitive relation containing ``rel``, by semi-naive iteration."""
    base = _succ(rel)
    closure = {(u, v) for u, vs in base.items() for v in vs}
    delta = set(closure)
    while delta:
        new = set()
        for u, v in delta:
            for w in base.get(v, ()):
                if (u, w) not in closure:
                    new.add((u, w))
        closure |= new
        delta = new
    return frozenset(closure)


def _undesugared(t):
    raise ValueError(f"reference evaluator needs a desugared query, got {t!r}")


def eval_path_rel(g: LabeledGraph, p) -> frozenset:
    if isinstance(p, Edge):
        return g.edge_rel(p.label)
    if isinstance(p, EdgeInv):
        return frozenset((v, u) for u, v in g.edge_rel(p.label))
    if isinstance(p, FilterStep):
        return frozenset((v, v) for v in eval_filter(g, p.filter))
    if isinstance(p, Concat):
        return compose(eval_path_rel(g, p.left), eval_path_rel(g, p.right))
    if isinstance(p, Union):
        return eval_path_rel(g, p.left) | eval_path_rel(g, p.right)
    if isinstance(p, Plus):
        return transitive_closure(eval_path_rel(g, p.arg))
    if isinstance(p, Goto):
        targets = eval_filter(g, p.filter)
        return frozenset((u, v) for u in g.nodes for v in targets)
    if isinstance(p, (Star, AnyEdge)):
        _undesugared(p)
    raise TypeError(f"not a path: {p!r}")


def eval_filter(g: LabeledGraph, f) -> frozenset[str]:
    if isinstance(f, Truth):
        return g.nodes
    if isinstance(f, NodeLabel):
        return g.labeled(f.label)
    if isinstance(f, And):
        return eval_filter(g, f.left) & eval_filter(g, f.right)
    if isinstance(f, Or):
        return eval_filter(g, f.left) | eval_filter(g, f.right)
    if isinstance(f, Not):
        return g.nodes - eval_filter(g, f.arg)
    if isinstance(f, HasPath):
        return frozenset(u for u, _ in eval_path_rel(g, f.path))
    raise TypeError(f"not a filter: {f!r}")


def check_start(g: LabeledGraph, start: Iterable[str]) -> frozenset[str]:
    s = frozenset(start)
    bad = s - g.nodes
    if bad:
        raise StartNodeError(f"start node {min(bad)!r} is not a node of the graph")
    return s


def eval_path_from(g: LabeledGraph, p, start: Iterable[str]) -> frozenset[str]:
    """Forward image of the start set, computed by set navigation."""
    return _forward(g, p, check_start(g, start))


def _forward(g: LabeledGraph, p, s: frozenset[str]) -> frozenset[str]:
    if not s:
        return frozenset()
    if isinstance(p, Edge):
        return frozenset(v for u, v in g.edge_rel(p.label) if u in s)
    if isinstance(p, EdgeInv):
        return frozenset(u for u, v in g.edge_rel(p.label) if v in s)
    if isinstance(p, FilterStep):
        return s & eval_filter(g, p.filter)
    if isinstance(p, Concat):
        return _forward(g, p.right, _forward(g, p.left, s))
    if isinstance(p, Union):
        return _forward(g, p.left, s) | _forward(g, p.right, s)
    if isinstance(p, Plus):
        seen: set[str] = set()
        frontier = _forward(g, p.arg, s)
        while frontier - seen:
            frontier = frontier - seen
            seen |= frontier
            frontier = _forward(g, p.arg, frozenset(frontier))
        return frozenset(seen)
    if isinstance(p, Goto):
        return eval_filter(g, p.filter)
    if isinstance(p, (Star, AnyEdge)):
        _undesugared(p)
    raise TypeError(f"not a path: {p!r}")


def eval_filter_from(g: LabeledGraph, f, start: Iterable[str]) -> frozenset[str]:
    return eval_filter(g, f) & check_start(g, start)
