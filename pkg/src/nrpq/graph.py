"""Labeled digraphs, their fact-database encoding, and the text graph format.

A graph is ``(V, (V_a), (E_a))``: a node set, per-label node sets and
per-label edge relations.  The fact encoding uses the extensional
predicates ``node``, ``node_<label>`` and ``edge_<label>``.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

NODE = "node"
NODE_PREFIX = "node_"
EDGE_PREFIX = "edge_"

_TOKEN = re.compile(r"\S+")


class GraphError(ValueError):
    """Malformed graph text or an inconsistent graph construction."""


class Fact(NamedTuple):
    pred: str
    args: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.pred}({','.join(self.args)})"


def node_fact(v: str) -> Fact:
    return Fact(NODE, (v,))


def label_fact(label: str, v: str) -> Fact:
    return Fact(NODE_PREFIX + label, (v,))


def edge_fact(label: str, src: str, dst: str) -> Fact:
    return Fact(EDGE_PREFIX + label, (src, dst))


def is_extensional(pred: str) -> bool:
    return pred == NODE or pred.startswith(NODE_PREFIX) or pred.startswith(EDGE_PREFIX)


def _check_name(kind: str, name: str) -> str:
    if not isinstance(name, str) or not name or any(ch.isspace() for ch in name):
        raise GraphError(f"invalid {kind} {name!r}: must be a non-empty string without whitespace")
    return name


class FactDb:
    """Immutable set of ground extensional facts.

    Iteration is sorted by predicate then arguments.  Per-position hash
    indexes are built lazily, once, on the first probe.
    """

    __slots__ = ("_facts", "_index", "_lock", "_by_pred")

    def __init__(self, facts: Iterable[Fact] = ()):
        self._facts = frozenset(Fact(f[0], tuple(f[1])) for f in facts)
        self._index: dict | None = None
        self._by_pred: dict | None = None
        self._lock = threading.Lock()

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self._facts))

    def __len__(self) -> int:
        return len(self._facts)

    def __contains__(self, fact: object) -> bool:
        return fact in self._facts

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FactDb):
            return self._facts == other._facts
        if isinstance(other, (set, frozenset)):
            return self._facts == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._facts)

    def __repr__(self) -> str:
        return "FactDb({" + ", ".join(map(str, self)) + "})"

    @property
    def facts(self) -> frozenset[Fact]:
        return self._facts

    def __or__(self, other: FactDb | Iterable[Fact]) -> FactDb:
        return FactDb(self._facts | set(other))

    def __sub__(self, other: FactDb | Iterable[Fact]) -> FactDb:
        return FactDb(self._facts - set(other))

    def __le__(self, other: FactDb | Iterable[Fact]) -> bool:
        return self._facts <= set(other)

    def predicates(self) -> set[str]:
        return {f.pred for f in self._facts}

    def _build_index(self) -> None:
        with self._lock:
            if self._index is not None:
                return
            by_pred: dict[str, list[tuple[str, ...]]] = {}
            index: dict[tuple[str, int, str], list[tuple[str, ...]]] = {}
            for pred, args in self._facts:
                by_pred.setdefault(pred, []).append(args)
                for pos, a in enumerate(args):
                    index.setdefault((pred, pos, a), []).append(args)
            self._by_pred = by_pred
            self._index = index

    def probe(self, pred: str, pattern: tuple[str | None, ...]) -> list[tuple[str, ...]]:
        """Argument tuples of ``pred`` agreeing with the bound positions of ``pattern``.

        ``None`` marks a free position.  Only the bucket of the first bound
        position is scanned.
        """
        if self._index is None:
            self._build_index()
        bound = [(i, a) for i, a in enumerate(pattern) if a is not None]
        if not bound:
            rows = self._by_pred.get(pred, ())
            return [r for r in rows if len(r) == len(pattern)]
        pos, val = bound[0]
        rows = self._index.get((pred, pos, val), ())
        return [
            r for r in rows
            if len(r) == len(pattern) and all(r[i] == a for i, a in bound[1:])
        ]


@dataclass(frozen=True)
class LabeledGraph:
    nodes: frozenset[str] = frozenset()
    node_labels: dict[str, frozenset[str]] = field(default_factory=dict)
    edges: dict[str, frozenset[tuple[str, str]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(
            self, "node_labels", {a: frozenset(vs) for a, vs in self.node_labels.items()}
        )
        object.__setattr__(
            self, "edges", {a: frozenset((u, v) for u, v in es) for a, es in self.edges.items()}
        )
        for v in self.nodes:
            _check_name("node id", v)
        for a, vs in self.node_labels.items():
            _check_name("label", a)
            missing = vs - self.nodes
            if missing:
                raise GraphError(f"label {a!r} on unknown node {min(missing)!r}")
        for a, es in self.edges.items():
            _check_name("label", a)
            for u, v in es:
                if u not in self.nodes or v not in self.nodes:
                    bad = u if u not in self.nodes else v
                    raise GraphError(f"edge {a} {u} {v} refers to unknown node {bad!r}")

    __hash__ = None  # type: ignore[assignment]

    @property
    def edge_alphabet(self) -> frozenset[str]:
        return frozenset(self.edges)

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.edges) | frozenset(self.node_labels)

    def labeled(self, label: str) -> frozenset[str]:
        return self.node_labels.get(label, frozenset())

    def edge_rel(self, label: str) -> frozenset[tuple[str, str]]:
        return self.edges.get(label, frozenset())

    def size(self) -> int:
        return (
            len(self.nodes)
            + sum(len(vs) for vs in self.node_labels.values())
            + sum(len(es) for es in self.edges.values())
        )


def to_facts(g: LabeledGraph) -> FactDb:
    facts = [node_fact(v) for v in g.nodes]
    for a, vs in g.node_labels.items():
        facts.extend(label_fact(a, v) for v in vs)
    for a, es in g.edges.items():
        facts.extend(edge_fact(a, u, v) for u, v in es)
    return FactDb(facts)


def check_well_formed(d: Iterable[Fact]) -> None:
    facts = set(d)
    for f in sorted(facts):
        if f.pred == NODE:
            continue
        if not is_extensional(f.pred):
            raise GraphError(f"fact {f} is not a graph fact")
        for v in f.args:
            if node_fact(v) not in facts:
                raise GraphError(f"fact {f} mentions {v!r} without node({v})")


def from_facts(d: FactDb | Iterable[Fact]) -> LabeledGraph:
    facts = list(d)
    check_well_formed(facts)
    nodes: set[str] = set()
    labels: dict[str, set[str]] = {}
    edges: dict[str, set[tuple[str, str]]] = {}
    for pred, args in facts:
        if pred == NODE:
            if len(args) != 1:
                raise GraphError(f"node fact with arity {len(args)}")
            nodes.add(args[0])
        elif pred.startswith(NODE_PREFIX):
            if len(args) != 1:
                raise GraphError(f"{pred} fact with arity {len(args)}")
            labels.setdefault(pred[len(NODE_PREFIX):], set()).add(args[0])
        else:
            if len(args) != 2:
                raise GraphError(f"{pred} fact with arity {len(args)}")
            edges.setdefault(pred[len(EDGE_PREFIX):], set()).add((args[0], args[1]))
    return LabeledGraph(frozenset(nodes), labels, edges)


def add_edge_relation(
    g: LabeledGraph, label: str, pairs: Iterable[tuple[str, str]]
) -> LabeledGraph:
    _check_name("label", label)
    if label in g.edges:
        raise GraphError(f"edge label {label!r} already exists in the graph")
    pairs = frozenset(pairs)
    for u, v in pairs:
        for w in (u, v):
            if w not in g.nodes:
                raise GraphError(f"index edge {label} {u} {v} has unknown endpoint {w!r}")
    edges = dict(g.edges)
    edges[label] = pairs
    return LabeledGraph(g.nodes, g.node_labels, edges)


def load_graph(text: str) -> LabeledGraph:
    nodes: set[str] = set()
    labels: list[tuple[int, str, str]] = []
    edges: list[tuple[int, str, str, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = _TOKEN.findall(stripped)
        kind = toks[0]
        if kind == "node" and len(toks) == 2:
            nodes.add(toks[1])
        elif kind == "label" and len(toks) == 3:
            labels.append((lineno, toks[1], toks[2]))
        elif kind == "edge" and len(toks) == 4:
            edges.append((lineno, toks[1], toks[2], toks[3]))
        else:
            raise GraphError(f"line {lineno}: cannot parse {stripped!r}")
    node_labels: dict[str, set[str]] = {}
    for lineno, a, v in labels:
        if v not in nodes:
            raise GraphError(f"line {lineno}: label {a} on undeclared node {v!r}")
        node_labels.setdefault(a, set()).add(v)
    rels: dict[str, set[tuple[str, str]]] = {}
    for lineno, a, u, v in edges:
        for w in (u, v):
            if w not in nodes:
                raise GraphError(f"line {lineno}: edge {a} refers to undeclared node {w!r}")
        rels.setdefault(a, set()).add((u, v))
    return LabeledGraph(frozenset(nodes), node_labels, rels)


def dump_facts(d: Iterable[Fact]) -> str:
    """Render facts as graph-file records: nodes, then labels, then edges."""
    nodes, labels, edges = [], [], []
    for pred, args in d:
        if pred == NODE:
            nodes.append(f"node {args[0]}")
        elif pred.startswith(NODE_PREFIX):
            labels.append((pred[len(NODE_PREFIX):], args[0]))
        elif pred.startswith(EDGE_PREFIX):
            edges.append((pred[len(EDGE_PREFIX):], args[0], args[1]))
        else:
            raise GraphError(f"fact {pred}{args} has no graph-file form")
    lines = sorted(nodes)
    lines += [f"label {a} {v}" for a, v in sorted(labels)]
    lines += [f"edge {a} {u} {v}" for a, u, v in sorted(edges)]
    return "".join(line + "\n" for line in lines)


def dump_graph(g: LabeledGraph) -> str:
    return dump_facts(to_facts(g))


def disjoint_union(graphs: Iterable[LabeledGraph], prefixes: Iterable[str]) -> LabeledGraph:
    """Union of graphs with node ids prefixed per component."""
    nodes: set[str] = set()
    labels: dict[str, set[str]] = {}
    edges: dict[str, set[tuple[str, str]]] = {}
    for g, p in zip(graphs, prefixes):
        nodes.update(p + v for v in g.nodes)
        for a, vs in g.node_labels.items():
            labels.setdefault(a, set()).update(p + v for v in vs)
        for a, es in g.edges.items():
            edges.setdefault(a, set()).update((p + u, p + v) for u, v in es)
    return LabeledGraph(frozenset(nodes), labels, edges)
