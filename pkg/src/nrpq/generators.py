"""Seeded random graphs and queries for property checks and experiments."""
from __future__ import annotations

import random

from .graph import LabeledGraph
from .syntax import (
    And, Concat, Edge, EdgeInv, FilterStep, Goto, HasPath, NodeLabel, Not, Or,
    Plus, Truth, Union,
)


def random_graph(
    rng: random.Random,
    max_nodes: int = 20,
    edge_labels: tuple[str, ...] = ("a", "b", "c"),
    node_labels: tuple[str, ...] = ("a", "b"),
    density: float | None = None,
) -> LabeledGraph:
    n = rng.randint(1, max_nodes)
    nodes = [str(v) for v in range(n)]
    density = rng.uniform(0.02, 0.25) if density is None else density
    edges = {
        a: {(u, v) for u in nodes for v in nodes if rng.random() < density}
        for a in edge_labels
    }
    labels = {a: {v for v in nodes if rng.random() < 0.3} for a in node_labels}
    return LabeledGraph(
        frozenset(nodes),
        {a: vs for a, vs in labels.items() if vs},
        {a: es for a, es in edges.items() if es},
    )


def random_start(rng: random.Random, g: LabeledGraph, max_size: int = 3) -> frozenset[str]:
    nodes = sorted(g.nodes)
    k = rng.randint(0, min(max_size, len(nodes)))
    return frozenset(rng.sample(nodes, k))


class QueryGen:
    """Random desugared paths and filters of bounded depth."""

    def __init__(
        self,
        rng: random.Random,
        edge_labels: tuple[str, ...] = ("a", "b", "c"),
        node_labels: tuple[str, ...] = ("a", "b"),
        negation: bool = False,
        goto: bool = True,
    ):
        self.rng = rng
        self.edge_labels = edge_labels
        self.node_labels = node_labels
        self.negation = negation
        self.goto = goto

    def path(self, depth: int):
        rng = self.rng
        if depth <= 1:
            kind = rng.choice(["edge", "edge", "inv", "filter"])
        else:
            kinds = ["edge", "inv", "filter", "concat", "concat", "union", "plus"]
            if self.goto:
                kinds.append("goto")
            kind = rng.choice(kinds)
        if kind == "edge":
            return Edge(rng.choice(self.edge_labels))
        if kind == "inv":
            return EdgeInv(rng.choice(self.edge_labels))
        if kind == "filter":
            return FilterStep(self.filter(depth - 1))
        if kind == "concat":
            return Concat(self.path(depth - 1), self.path(depth - 1))
        if kind == "union":
            return Union(self.path(depth - 1), self.path(depth - 1))
        if kind == "plus":
            return Plus(self.path(depth - 1))
        return Goto(self.filter(depth - 1))

    def filter(self, depth: int):
        rng = self.rng
        if depth <= 1:
            kind = rng.choice(["true", "label", "label"])
        else:
            kinds = ["true", "label", "and", "or", "has", "has"]
            if self.negation:
                kinds.append("not")
            kind = rng.choice(kinds)
        if kind == "true":
            return Truth()
        if kind == "label":
            return NodeLabel(rng.choice(self.node_labels))
        if kind == "and":
            return And(self.filter(depth - 1), self.filter(depth - 1))
        if kind == "or":
            return Or(self.filter(depth - 1), self.filter(depth - 1))
        if kind == "has":
            return HasPath(self.path(depth - 1))
        return Not(self.filter(depth - 1))
