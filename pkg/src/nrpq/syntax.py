"""Abstract syntax of nested regular path queries, parser and printer.

Grammar (paths and filters are mutually recursive)::

    path   := alt
    alt    := seq ('|' seq)*
    seq    := post ('/' post)*
    post   := atom ('+' | '*')*
    atom   := IDENT | IDENT '^' | 'any' | '?(' filter ')' | 'goto(' filter ')' | '(' path ')'
    filter := fconj ('or' fconj)*
    fconj  := funit ('and' funit)*
    funit  := 'not' funit | 'true' | '.' IDENT | '[' path ']' | '(' filter ')'

``/`` and ``|`` associate to the left.  ``P*`` is parsed as ``P+ | ?(true)``;
``any`` stays a marker until :func:`desugar` resolves it against an alphabet.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
import typing
from typing import Iterable, Iterator


class QuerySyntaxError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        super().__init__(msg if pos is None else f"{msg} at position {pos}")
        self.pos = pos


class NotInvertibleError(ValueError):
    pass


# -- filters ---------------------------------------------------------------

@dataclass(frozen=True)
class Truth:
    pass


@dataclass(frozen=True)
class NodeLabel:
    label: str


@dataclass(frozen=True)
class And:
    left: "Filter"
    right: "Filter"


@dataclass(frozen=True)
class Or:
    left: "Filter"
    right: "Filter"


@dataclass(frozen=True)
class Not:
    arg: "Filter"


@dataclass(frozen=True)
class HasPath:
    path: "Path"


# -- paths -----------------------------------------------------------------

@dataclass(frozen=True)
class FilterStep:
    filter: "Filter"


@dataclass(frozen=True)
class Edge:
    label: str


@dataclass(frozen=True)
class EdgeInv:
    label: str


@dataclass(frozen=True)
class Concat:
    left: "Path"
    right: "Path"


@dataclass(frozen=True)
class Union:
    left: "Path"
    right: "Path"


@dataclass(frozen=True)
class Plus:
    arg: "Path"


@dataclass(frozen=True)
class Goto:
    filter: "Filter"


# markers removed by desugar
@dataclass(frozen=True)
class Star:
    arg: "Path"


@dataclass(frozen=True)
class AnyEdge:
    pass


Filter = typing.Union[Truth, NodeLabel, And, Or, Not, HasPath]
Path = typing.Union[FilterStep, Edge, EdgeInv, Concat, Union, Plus, Goto, Star, AnyEdge]

FILTER_TYPES = (Truth, NodeLabel, And, Or, Not, HasPath)
PATH_TYPES = (FilterStep, Edge, EdgeInv, Concat, Union, Plus, Goto, Star, AnyEdge)

TRUE = Truth()


def concat(*parts: Path) -> Path:
    return reduce(Concat, parts)


def union(*parts: Path) -> Path:
    return reduce(Union, parts)


def children(t: Path | Filter) -> tuple:
    if isinstance(t, (Truth, NodeLabel, Edge, EdgeInv, AnyEdge)):
        return ()
    if isinstance(t, (And, Or, Concat, Union)):
        return (t.left, t.right)
    if isinstance(t, (Not, Plus, Star)):
        return (t.arg,)
    if isinstance(t, HasPath):
        return (t.path,)
    if isinstance(t, (FilterStep, Goto)):
        return (t.filter,)
    raise TypeError(f"not a query term: {t!r}")


def subterms(t: Path | Filter) -> Iterator[Path | Filter]:
    """Pre-order traversal, left child first."""
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        stack.extend(reversed(children(u)))


def size(t: Path | Filter) -> int:
    """Number of AST constructors."""
    return sum(1 for _ in subterms(t))


def is_negation_free(t: Path | Filter) -> bool:
    return not any(isinstance(u, Not) for u in subterms(t))


def has_goto(t: Path | Filter) -> bool:
    return any(isinstance(u, Goto) for u in subterms(t))


def edge_labels(t: Path | Filter) -> set[str]:
    return {u.label for u in subterms(t) if isinstance(u, (Edge, EdgeInv))}


def _map(t, fp, ff):
    """Rebuild ``t`` applying ``fp`` to sub-paths and ``ff`` to sub-filters."""
    if isinstance(t, (Truth, NodeLabel, Edge, EdgeInv, AnyEdge)):
        return t
    if isinstance(t, (And, Or)):
        return type(t)(ff(t.left), ff(t.right))
    if isinstance(t, (Concat, Union)):
        return type(t)(fp(t.left), fp(t.right))
    if isinstance(t, Not):
        return Not(ff(t.arg))
    if isinstance(t, (Plus, Star)):
        return type(t)(fp(t.arg))
    if isinstance(t, HasPath):
        return HasPath(fp(t.path))
    if isinstance(t, (FilterStep, Goto)):
        return type(t)(ff(t.filter))
    raise TypeError(f"not a query term: {t!r}")


def desugar(t: Path | Filter, alphabet: Iterable[str] = ()) -> Path | Filter:
    """Expand ``Star`` and ``AnyEdge`` markers.

    ``P*`` becomes ``P+ | ?(true)``; ``any`` becomes the union of ``Edge``
    over the sorted alphabet.
    """
    labels = sorted(set(alphabet))

    def go(u):
        if isinstance(u, Star):
            return Union(Plus(go(u.arg)), FilterStep(TRUE))
        if isinstance(u, AnyEdge):
            if not labels:
                raise ValueError("wildcard edge 'any' needs a non-empty label alphabet")
            return union(*(Edge(a) for a in labels))
        return _map(u, go, go)

    return go(t)


def is_desugared(t: Path | Filter) -> bool:
    return not any(isinstance(u, (Star, AnyEdge)) for u in subterms(t))


def invert(p: Path) -> Path:
    """Converse path: ``(P/P')^ = P'^/P^``, ``?(F)^ = ?(F)``."""
    if isinstance(p, Edge):
        return EdgeInv(p.label)
    if isinstance(p, EdgeInv):
        return Edge(p.label)
    if isinstance(p, FilterStep):
        return p
    if isinstance(p, Concat):
        return Concat(invert(p.right), invert(p.left))
    if isinstance(p, Union):
        return Union(invert(p.left), invert(p.right))
    if isinstance(p, Plus):
        return Plus(invert(p.arg))
    if isinstance(p, Goto):
        raise NotInvertibleError("goto(F) has no defined inverse")
    raise NotInvertibleError(f"cannot invert undesugared term {p!r}")


# -- printing --------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")
_PATH_KEYWORDS = {"any", "goto", "true", "not", "and", "or"}


def _name(label: str, keywords: set[str] = _PATH_KEYWORDS) -> str:
    if _IDENT.match(label) and label not in keywords:
        return label
    return "'" + label.replace("\\", "\\\\").replace("'", "\\'") + "'"


def to_text(t: Path | Filter) -> str:
    """Canonical, fully parenthesized rendering; ``parse`` inverts it."""
    if isinstance(t, Edge):
        return _name(t.label)
    if isinstance(t, EdgeInv):
        return _name(t.label) + "^"
    if isinstance(t, AnyEdge):
        return "any"
    if isinstance(t, FilterStep):
        return f"?({to_text(t.filter)})"
    if isinstance(t, Goto):
        return f"goto({to_text(t.filter)})"
    if isinstance(t, Concat):
        return f"({to_text(t.left)}/{to_text(t.right)})"
    if isinstance(t, Union):
        return f"({to_text(t.left)}|{to_text(t.right)})"
    if isinstance(t, Plus):
        return to_text(t.arg) + "+"
    if isinstance(t, Star):
        return to_text(t.arg) + "*"
    if isinstance(t, Truth):
        return "true"
    if isinstance(t, NodeLabel):
        return "." + _name(t.label, set())
    if isinstance(t, And):
        return f"({to_text(t.left)} and {to_text(t.right)})"
    if isinstance(t, Or):
        return f"({to_text(t.left)} or {to_text(t.right)})"
    if isinstance(t, Not):
        return f"not {to_text(t.arg)}"
    if isinstance(t, HasPath):
        return f"[{to_text(t.path)}]"
    raise TypeError(f"not a query term: {t!r}")


# -- parsing ---------------------------------------------------------------

_TOKENS = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<qopen>\?\()
  | (?P<goto>goto\()
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<sym>[/|+*^().\[\]])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "quoted":
                val = re.sub(r"\\(.)", r"\1", val[1:-1])
                if not val:
                    raise QuerySyntaxError("empty quoted name", pos)
                kind = "name"
            elif kind == "ident":
                kind = "name" if val not in _PATH_KEYWORDS else val
            elif kind == "sym":
                kind = val
            toks.append((kind, val, pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        if not text.strip():
            raise QuerySyntaxError("empty query")
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "eof" else repr(kind)
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise QuerySyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def label(self) -> str:
        kind, val, pos = self.toks[self.i]
        if kind == "name" or kind in _PATH_KEYWORDS:
            self.i += 1
            return val
        raise QuerySyntaxError(f"expected a label, found {val or 'end of input'!r}", pos)

    def path(self) -> Path:
        p = self.seq()
        while self.peek() == "|":
            self.take()
            p = Union(p, self.seq())
        return p

    def seq(self) -> Path:
        p = self.post()
        while self.peek() == "/":
            self.take()
            p = Concat(p, self.post())
        return p

    def post(self) -> Path:
        p = self.atom()
        while self.peek() in ("+", "*"):
            if self.take()[0] == "+":
                p = Plus(p)
            else:
                p = Union(Plus(p), FilterStep(TRUE))
        return p

    def atom(self) -> Path:
        kind, val, pos = self.toks[self.i]
        if kind == "name":
            self.take()
            if self.peek() == "^":
                self.take()
                return EdgeInv(val)
            return Edge(val)
        if kind == "any":
            self.take()
            return AnyEdge()
        if kind in ("qopen", "goto"):
            self.take()
            f = self.filter()
            self.take(")")
            return FilterStep(f) if kind == "qopen" else Goto(f)
        if kind == "(":
            self.take()
            p = self.path()
            self.take(")")
            return p
        raise QuerySyntaxError(f"expected a path, found {val or 'end of input'!r}", pos)

    def filter(self) -> Filter:
        f = self.fconj()
        while self.peek() == "or":
            self.take()
            f = Or(f, self.fconj())
        return f

    def fconj(self) -> Filter:
        f = self.funit()
        while self.peek() == "and":
            self.take()
            f = And(f, self.funit())
        return f

    def funit(self) -> Filter:
        kind, val, pos = self.toks[self.i]
        if kind == "not":
            self.take()
            return Not(self.funit())
        if kind == "true":
            self.take()
            return TRUE
        if kind == ".":
            self.take()
            return NodeLabel(self.label())
        if kind == "[":
            self.take()
            p = self.path()
            self.take("]")
            return HasPath(p)
        if kind == "(":
            self.take()
            f = self.filter()
            self.take(")")
            return f
        raise QuerySyntaxError(f"expected a filter, found {val or 'end of input'!r}", pos)


def parse_path(text: str) -> Path:
    p = _Parser(text)
    result = p.path()
    p.take("eof")
    return result


def parse_filter(text: str) -> Filter:
    p = _Parser(text)
    result = p.filter()
    p.take("eof")
    return result
