"""Datalog terms, literals, clauses and programs.

Constants are plain strings (node ids); variables are :class:`Var`.
Extensional predicates are ``node``, ``node_<label>`` and ``edge_<label>``;
everything else is intensional.

Text syntax::

    f1(X) :- i0(Y), edge_a(Y,X).
    i0(0).
    j4 :- i0(X).

Variables start with an uppercase letter or ``_``.  Constants and
predicate names that are not bare lowercase/digit identifiers are single
quoted.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .graph import is_extensional


class DatalogError(ValueError):
    pass


class DatalogSyntaxError(DatalogError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Var, str]
Substitution = Mapping[Var, Term]


@dataclass(frozen=True)
class Literal:
    pred: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def extensional(self) -> bool:
        return is_extensional(self.pred)

    def variables(self) -> list[Var]:
        return [a for a in self.args if isinstance(a, Var)]

    def constants(self) -> list[str]:
        return [a for a in self.args if not isinstance(a, Var)]

    def __str__(self) -> str:
        return literal_text(self)


@dataclass(frozen=True)
class Clause:
    head: Literal
    body: tuple[Literal, ...] = ()

    def __post_init__(self) -> None:
        if self.head.extensional:
            raise DatalogError(f"clause head {self.head} uses extensional predicate")

    def variables(self) -> set[Var]:
        return set(self.head.variables()).union(*(l.variables() for l in self.body))

    def __str__(self) -> str:
        return clause_text(self)


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...] = ()

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __or__(self, other: "Program") -> "Program":
        return Program(self.clauses + tuple(other.clauses))

    def predicates(self) -> set[str]:
        preds = set()
        for c in self.clauses:
            preds.add(c.head.pred)
            preds.update(l.pred for l in c.body)
        return preds

    def intensional(self) -> set[str]:
        return {p for p in self.predicates() if not is_extensional(p)}


@dataclass(frozen=True)
class Query:
    goal: tuple[Literal, ...]
    program: Program
    # intensional predicates that may legitimately have no clauses
    declared: frozenset[str] = frozenset()


def free_vars(lits: Iterable[Literal]) -> list[Var]:
    """Variables in order of first occurrence."""
    seen: dict[Var, None] = {}
    for l in lits:
        for v in l.variables():
            seen.setdefault(v, None)
    return list(seen)


# -- substitutions ---------------------------------------------------------

def walk(t: Term, s: Mapping[Var, Term]) -> Term:
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def apply(s: Mapping[Var, Term], lit: Literal) -> Literal:
    return Literal(lit.pred, tuple(walk(a, s) for a in lit.args))


def unify(l1: Literal, l2: Literal, s: Mapping[Var, Term] | None = None) -> dict[Var, Term] | None:
    """Most general unifier of two literals, fully resolved, or ``None``."""
    if l1.pred != l2.pred or l1.arity != l2.arity:
        return None
    s = dict(s or {})
    for a, b in zip(l1.args, l2.args):
        a, b = walk(a, s), walk(b, s)
        if a == b:
            continue
        if isinstance(a, Var):
            s[a] = b
        elif isinstance(b, Var):
            s[b] = a
        else:
            return None
    return {v: walk(v, s) for v in s}


def join(s1: Mapping[Var, Term], s2: Mapping[Var, Term]) -> dict[Var, Term] | None:
    """Union of two substitutions if it is functional."""
    out = dict(s1)
    for v, t in s2.items():
        if v in out and out[v] != t:
            return None
        out[v] = t
    return out


def project(s: Mapping[Var, Term], vs: Iterable[Var]) -> dict[Var, Term]:
    vs = set(vs)
    return {v: t for v, t in s.items() if v in vs}


_fresh = itertools.count()


def rename_apart(c: Clause, avoid: Iterable[Var] = ()) -> Clause:
    """Bijectively rename the clause's variables to fresh ``X<n>`` names."""
    avoid = {v.name for v in avoid} | {v.name for v in c.variables()}
    mapping = {}
    for v in sorted(c.variables()):
        while True:
            name = f"X{next(_fresh)}"
            if name not in avoid:
                break
        mapping[v] = Var(name)
    return Clause(apply(mapping, c.head), tuple(apply(mapping, l) for l in c.body))


# -- safety and SCL --------------------------------------------------------

def is_safe(c: Clause) -> bool:
    return set(c.head.variables()) <= set(free_vars(c.body))


def is_scl_goal(goal: Sequence[Literal]) -> bool:
    """Every prefix has at most one variable or is guarded by one extensional literal of the goal."""
    guards = [set(l.variables()) for l in goal if l.extensional]
    fv: set[Var] = set()
    for lit in goal:
        fv.update(lit.variables())
        if len(fv) > 1 and not any(fv <= g for g in guards):
            return False
    return True


def is_scl_query(q: Query) -> bool:
    return is_scl_goal(q.goal) and all(
        is_scl_goal((c.head,) + c.body) for c in q.program
    )


# -- text ------------------------------------------------------------------

_BARE_CONST = re.compile(r"[a-z0-9][A-Za-z0-9_]*\Z")
_BARE_PRED = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def _quote(s: str) -> str:
    return "'" + s.replace("\\", "\\\\").replace("'", "\\'") + "'"


def term_text(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    return t if _BARE_CONST.match(t) else _quote(t)


def literal_text(l: Literal) -> str:
    pred = l.pred if _BARE_PRED.match(l.pred) else _quote(l.pred)
    if not l.args:
        return pred
    return f"{pred}({','.join(term_text(a) for a in l.args)})"


def goal_text(goal: Sequence[Literal]) -> str:
    return ", ".join(literal_text(l) for l in goal)


def clause_text(c: Clause) -> str:
    if not c.body:
        return literal_text(c.head) + "."
    return f"{literal_text(c.head)} :- {goal_text(c.body)}."


def emit_text(p: Program | Query, header: Sequence[str] = ()) -> str:
    """Clauses sorted by head predicate then text; a query adds a goal comment."""
    lines = [f"% {h}" for h in header]
    if isinstance(p, Query):
        lines.append(f"% goal: {goal_text(p.goal)}")
        p = p.program
    lines += [t for _, t in sorted((c.head.pred, clause_text(c)) for c in p.clauses)]
    return "".join(line + "\n" for line in lines)


_DL_TOKENS = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<implies>:-)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z0-9][A-Za-z0-9_]*)
  | (?P<sym>[(),.])
    """,
    re.VERBOSE,
)


class _DlParser:
    def __init__(self, text: str):
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _DL_TOKENS.match(text, pos)
            if m is None:
                raise DatalogSyntaxError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            if kind != "ws":
                val = m.group()
                if kind == "quoted":
                    val, kind = re.sub(r"\\(.)", r"\1", val[1:-1]), "name"
                elif kind == "sym" or kind == "implies":
                    kind = val
                self.toks.append((kind, val, pos))
            pos = m.end()
        self.toks.append(("eof", "", len(text)))
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, kind: str) -> str:
        k, v, pos = self.toks[self.i]
        if k != kind:
            raise DatalogSyntaxError(f"expected {kind!r}, found {v or 'end of input'!r}", pos)
        self.i += 1
        return v

    def literal(self) -> Literal:
        pred = self.take("name")
        args: list[Term] = []
        if self.peek() == "(":
            self.take("(")
            if self.peek() != ")":
                args.append(self.term())
                while self.peek() == ",":
                    self.take(",")
                    args.append(self.term())
            self.take(")")
        return Literal(pred, tuple(args))

    def term(self) -> Term:
        if self.peek() == "var":
            return Var(self.take("var"))
        return self.take("name")

    def goal(self) -> tuple[Literal, ...]:
        lits = [self.literal()]
        while self.peek() == ",":
            self.take(",")
            lits.append(self.literal())
        return tuple(lits)

    def clause(self) -> Clause:
        pos = self.toks[self.i][2]
        head = self.literal()
        body: tuple[Literal, ...] = ()
        if self.peek() == ":-":
            self.take(":-")
            body = self.goal()
        self.take(".")
        try:
            return Clause(head, body)
        except DatalogError as e:
            raise DatalogSyntaxError(str(e), pos) from None


def parse_program(text: str) -> Program:
    p = _DlParser(text)
    clauses = []
    while p.peek() != "eof":
        clauses.append(p.clause())
    return Program(tuple(clauses))


def parse_goal(text: str) -> tuple[Literal, ...]:
    p = _DlParser(text.strip().rstrip("."))
    g = p.goal()
    p.take("eof")
    return g


def parse_query(text: str) -> Query:
    """Program text with a ``% goal: ...`` comment line.

    A ``% start: p`` line declares ``p``, which has no clauses when the
    start set is empty.
    """
    goal = None
    declared = set()
    for line in text.splitlines():
        m = re.match(r"\s*%\s*(goal|start):\s*(.*)$", line)
        if m and m.group(1) == "goal":
            goal = parse_goal(m.group(2))
        elif m:
            declared.add(m.group(2).strip())
    if goal is None:
        raise DatalogError("query text has no '% goal:' line")
    return Query(goal, parse_program(text), frozenset(declared))
