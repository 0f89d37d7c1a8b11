"""Facts of top-down needed subgraphs of negation-free NRPQs.

Computed straight from the defining equations, with the reference
evaluator supplying every ``[[.]](S)`` occurrence.  This is a
specification object; evaluation that respects the same bound lives in
:mod:`nrpq.engine`.
"""
from __future__ import annotations

from typing import Iterable

from .graph import FactDb, LabeledGraph, edge_fact, from_facts, label_fact, node_fact
from .reference import check_start, _forward, eval_filter
from .syntax import (
    And, Concat, Edge, EdgeInv, FilterStep, Goto, HasPath, NodeLabel, Not, Or,
    Plus, Truth, Union,
)


class NegationNotSupported(ValueError):
    pass


def _negation(t):
    raise NegationNotSupported(
        f"top-down needed subgraphs are defined for negation-free queries only: {t!r}"
    )


def tdn_path(g: LabeledGraph, start: Iterable[str], p) -> FactDb:
    return FactDb(_path(g, check_start(g, start), p))


def tdn_filter(g: LabeledGraph, start: Iterable[str], f) -> FactDb:
    return FactDb(_filter(g, check_start(g, start), f))


def tdn_goto_path(g: LabeledGraph, p) -> FactDb:
    return FactDb(_goto_path(g, p))


def tdn_goto_filter(g: LabeledGraph, f) -> FactDb:
    return FactDb(_goto_filter(g, f))


def _nodes(s) -> set:
    return {node_fact(v) for v in s}


def _path(g: LabeledGraph, s: frozenset, p) -> set:
    if isinstance(p, FilterStep):
        return _filter(g, s, p.filter)
    if isinstance(p, Edge):
        out = _nodes(s)
        for u, v in g.edge_rel(p.label):
            if u in s:
                out.add(edge_fact(p.label, u, v))
                out.add(node_fact(v))
        return out
    if isinstance(p, EdgeInv):
        # the fact stored for the traversed edge is edge_a(v, v') with v' in S
        out = _nodes(s)
        for u, v in g.edge_rel(p.label):
            if v in s:
                out.add(edge_fact(p.label, u, v))
                out.add(node_fact(u))
        return out
    if isinstance(p, Concat):
        return _path(g, s, p.left) | _path(g, _forward(g, p.left, s), p.right)
    if isinstance(p, Plus):
        # restart from S as well as everything P+ reaches from S
        return _path(g, s | _forward(g, p, s), p.arg)
    if isinstance(p, Union):
        return _path(g, s, p.left) | _path(g, s, p.right)
    if isinstance(p, Goto):
        return _goto_filter(g, p.filter)
    raise TypeError(f"not a desugared path: {p!r}")


def _filter(g: LabeledGraph, s: frozenset, f) -> set:
    if isinstance(f, Truth):
        return _nodes(s)
    if isinstance(f, NodeLabel):
        return _nodes(s) | {label_fact(f.label, v) for v in g.labeled(f.label) & s}
    if isinstance(f, And):
        survivors = eval_filter(g, f.left) & s
        return _filter(g, s, f.left) | _filter(g, survivors, f.right)
    if isinstance(f, Or):
        return _filter(g, s, f.left) | _filter(g, s, f.right)
    if isinstance(f, HasPath):
        return _path(g, s, f.path)
    if isinstance(f, Not):
        _negation(f)
    raise TypeError(f"not a filter: {f!r}")


def _goto_filter(g: LabeledGraph, f) -> set:
    if isinstance(f, Truth):
        return _nodes(g.nodes)
    if isinstance(f, NodeLabel):
        return {label_fact(f.label, v) for v in g.labeled(f.label)}
    if isinstance(f, And):
        return _goto_filter(g, f.left) | _filter(g, eval_filter(g, f.left), f.right)
    if isinstance(f, Or):
        return _goto_filter(g, f.left) | _goto_filter(g, f.right)
    if isinstance(f, HasPath):
        return _goto_path(g, f.path)
    if isinstance(f, Not):
        _negation(f)
    raise TypeError(f"not a filter: {f!r}")


def _goto_path(g: LabeledGraph, p) -> set:
    if isinstance(p, FilterStep):
        return _goto_filter(g, p.filter)
    if isinstance(p, (Edge, EdgeInv)):
        return {edge_fact(p.label, u, v) for u, v in g.edge_rel(p.label)}
    if isinstance(p, Concat):
        return _goto_path(g, p.left) | _path(g, _forward(g, p.left, g.nodes), p.right)
    if isinstance(p, Plus):
        return _goto_path(g, p.arg) | _path(g, _forward(g, p, g.nodes), p.arg)
    if isinstance(p, Union):
        return _goto_path(g, p.left) | _goto_path(g, p.right)
    if isinstance(p, Goto):
        return _goto_filter(g, p.filter)
    raise TypeError(f"not a desugared path: {p!r}")


def facts_to_subgraph(d: Iterable) -> LabeledGraph:
    """Graph of a fact set, closing it with node facts for mentioned constants."""
    facts = set(d)
    for f in list(facts):
        facts.update(node_fact(v) for v in f.args)
    return from_facts(facts)
