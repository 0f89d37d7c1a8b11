"""Compile negation-free NRPQs with a start set to monadic datalog.

Three mutually recursive schemes:

* ``acc(P, i, f)``: ``f`` holds the nodes reached over ``P`` from ``i``;
* ``filt(F, c)``: ``c(v)`` holds when ``v`` satisfies ``F``;
* ``ex(P, c, r)``: ``c(v)`` holds when some ``P``-successor of ``v`` satisfies ``r``.

Fresh predicates are named by role letter plus a counter shared by the
whole compilation (``i0``, ``f1``, ``c2``, ``r3``, ``j4``), allocated in
pre-order, left child first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .datalog import Clause, Literal, Program, Query, Var
from .graph import EDGE_PREFIX, NODE, NODE_PREFIX
from .syntax import (
    And, Concat, Edge, EdgeInv, FilterStep, Goto, HasPath, NodeLabel, Not, Or,
    Plus, Truth, Union,
)

X, Y = Var("X"), Var("Y")

ROLES = {
    "i": "initial",
    "f": "final",
    "c": "check",
    "r": "continuation",
    "j": "nullary",
}


class CompileError(ValueError):
    pass


class NegationNotSupported(CompileError):
    pass


def _lit(pred: str, *args) -> Literal:
    return Literal(pred, tuple(args))


def _clause(head: Literal, *body: Literal) -> Clause:
    return Clause(head, tuple(body))


def _edge(label: str, a, b) -> Literal:
    return _lit(EDGE_PREFIX + label, a, b)


@dataclass
class CompilationUnit:
    program: Program
    goal: tuple[Literal, ...]
    roles: dict[str, str]
    answer_predicate: str
    start_predicate: str
    continuation: str | None = None

    @property
    def query(self) -> Query:
        return Query(self.goal, self.program, frozenset(self.roles))

    @property
    def header(self) -> list[str]:
        return [f"start: {self.start_predicate}"]


@dataclass
class Compiler:
    counter: int = 0
    roles: dict[str, str] = field(default_factory=dict)
    clauses: list[Clause] = field(default_factory=list)

    def fresh(self, role: str) -> str:
        name = f"{role}{self.counter}"
        self.counter += 1
        self.roles[name] = ROLES[role]
        return name

    def emit(self, *clauses: Clause) -> None:
        self.clauses.extend(clauses)

    def program(self) -> Program:
        return Program(tuple(self.clauses))

    def acc(self, p, i: str, f: str, own_i: bool = True, own_f: bool = True) -> None:
        """``own_i``: only this subterm reads ``i``; ``own_f``: only it writes ``f``."""
        if isinstance(p, Edge):
            self.emit(_clause(_lit(f, X), _lit(i, Y), _edge(p.label, Y, X)))
        elif isinstance(p, EdgeInv):
            self.emit(_clause(_lit(f, X), _lit(i, Y), _edge(p.label, X, Y)))
        elif isinstance(p, Concat):
            mid = self.fresh("f")
            n = len(self.clauses)
            self.acc(p.left, i, mid, own_i, True)
            # the right side may only grow mid if the left never reads it back
            reads_mid = any(
                l.pred == mid for c in self.clauses[n:] for l in c.body
            )
            self.acc(p.right, mid, f, not reads_mid, own_f)
        elif isinstance(p, Plus):
            if own_i and own_f:
                self.acc(p.arg, i, f)
                self.emit(_clause(_lit(i, X), _lit(f, X)))
            else:
                # looping back into a shared i (or from a shared f) would leak
                # facts between branches, so iterate over private copies
                i2, f2 = self.fresh("i"), self.fresh("f")
                self.acc(p.arg, i2, f2)
                self.emit(
                    _clause(_lit(i2, X), _lit(i, X)),
                    _clause(_lit(i2, X), _lit(f2, X)),
                    _clause(_lit(f, X), _lit(f2, X)),
                )
        elif isinstance(p, Union):
            self.acc(p.left, i, f, False, False)
            self.acc(p.right, i, f, False, False)
        elif isinstance(p, FilterStep):
            c = self.fresh("c")
            self.filt(p.filter, c)
            self.emit(_clause(_lit(f, X), _lit(i, X), _lit(c, X)))
        elif isinstance(p, Goto):
            c, j = self.fresh("c"), self.fresh("j")
            self.filt(p.filter, c)
            self.emit(
                _clause(_lit(f, X), _lit(j), _lit(c, X)),
                _clause(_lit(j), _lit(i, X)),
            )
        else:
            self._reject(p)

    def filt(self, fl, c: str) -> None:
        if isinstance(fl, NodeLabel):
            self.emit(_clause(_lit(c, X), _lit(NODE_PREFIX + fl.label, X)))
        elif isinstance(fl, Truth):
            self.emit(_clause(_lit(c, X), _lit(NODE, X)))
        elif isinstance(fl, And):
            c1, c2 = self.fresh("c"), self.fresh("c")
            self.filt(fl.left, c1)
            self.filt(fl.right, c2)
            self.emit(_clause(_lit(c, X), _lit(c1, X), _lit(c2, X)))
        elif isinstance(fl, Or):
            c1, c2 = self.fresh("c"), self.fresh("c")
            self.filt(fl.left, c1)
            self.filt(fl.right, c2)
            self.emit(_clause(_lit(c, X), _lit(c1, X)), _clause(_lit(c, X), _lit(c2, X)))
        elif isinstance(fl, HasPath):
            r = self.fresh("r")
            self.ex(fl.path, c, r)
            self.emit(_clause(_lit(r, X), _lit(NODE, X)))
        else:
            self._reject(fl)

    def ex(self, p, c: str, r: str, own_c: bool = True, own_r: bool = True) -> None:
        """``own_c``: only this subterm writes ``c``; ``own_r``: only it reads ``r``."""
        if isinstance(p, Edge):
            self.emit(_clause(_lit(c, X), _edge(p.label, X, Y), _lit(r, Y)))
        elif isinstance(p, EdgeInv):
            self.emit(_clause(_lit(c, X), _edge(p.label, Y, X), _lit(r, Y)))
        elif isinstance(p, Concat):
            mid = self.fresh("r")
            n = len(self.clauses)
            self.ex(p.left, c, mid, own_c, True)
            writes_mid = any(cl.head.pred == mid for cl in self.clauses[n:])
            self.ex(p.right, mid, r, not writes_mid, own_r)
        elif isinstance(p, Plus):
            if own_c and own_r:
                self.ex(p.arg, c, r)
                self.emit(_clause(_lit(r, X), _lit(c, X)))
            else:
                c2, r2 = self.fresh("c"), self.fresh("r")
                self.ex(p.arg, c2, r2)
                self.emit(
                    _clause(_lit(c, X), _lit(c2, X)),
                    _clause(_lit(r2, X), _lit(r, X)),
                    _clause(_lit(r2, X), _lit(c2, X)),
                )
        elif isinstance(p, Union):
            self.ex(p.left, c, r, False, False)
            self.ex(p.right, c, r, False, False)
        elif isinstance(p, FilterStep):
            c1 = self.fresh("c")
            self.filt(p.filter, c1)
            self.emit(_clause(_lit(c, X), _lit(c1, X), _lit(r, X)))
        elif isinstance(p, Goto):
            c1, j = self.fresh("c"), self.fresh("j")
            self.filt(p.filter, c1)
            # node(X) guard keeps the clause safe
            self.emit(
                _clause(_lit(c, X), _lit(NODE, X), _lit(j)),
                _clause(_lit(j), _lit(c1, Y), _lit(r, Y)),
            )
        else:
            self._reject(p)

    def start(self, start: Iterable[str], i: str) -> None:
        self.emit(*(_clause(_lit(i, v)) for v in sorted(start)))

    @staticmethod
    def _reject(t) -> None:
        if isinstance(t, Not):
            raise NegationNotSupported(
                "negated filters cannot be compiled; evaluate this query with the reference engine"
            )
        raise CompileError(f"cannot compile {t!r}; desugar the query first")


def start_program(start: Iterable[str], i: str) -> Program:
    comp = Compiler()
    comp.start(start, i)
    return comp.program()


def compile_acc(p, i: str, f: str) -> Program:
    comp = Compiler()
    comp.acc(p, i, f)
    return comp.program()


def compile_filt(fl, c: str) -> Program:
    comp = Compiler()
    comp.filt(fl, c)
    return comp.program()


def compile_ex(p, c: str, r: str) -> Program:
    comp = Compiler()
    comp.ex(p, c, r)
    return comp.program()


def compile_query(p, start: Iterable[str]) -> CompilationUnit:
    """Path query: answers of ``f(X), node(X)`` are the nodes reached from the start set.

    The trailing ``node(X)`` probe does not change the answers; it makes
    the visited sub-database contain the answer nodes themselves.
    """
    comp = Compiler()
    i, f = comp.fresh("i"), comp.fresh("f")
    comp.acc(p, i, f)
    comp.start(start, i)
    goal = (_lit(f, X), _lit(NODE, X))
    return CompilationUnit(comp.program(), goal, comp.roles, f, i)


def compile_filter_query(fl, start: Iterable[str]) -> CompilationUnit:
    """Filter query: answers of ``i(X), c(X)`` are the start nodes satisfying the filter."""
    comp = Compiler()
    i, c = comp.fresh("i"), comp.fresh("c")
    comp.filt(fl, c)
    comp.start(start, i)
    return CompilationUnit(comp.program(), (_lit(i, X), _lit(c, X)), comp.roles, c, i)


def compile_exists_query(p, start: Iterable[str]) -> CompilationUnit:
    """Existential path check with an unconstrained continuation ``r(X) :- node(X)``.

    Answers are the start nodes with some ``p``-successor; the constants
    ``r`` is called with are the nodes reached from the start set.
    """
    comp = Compiler()
    i, c, r = comp.fresh("i"), comp.fresh("c"), comp.fresh("r")
    comp.ex(p, c, r)
    comp.emit(_clause(_lit(r, X), _lit(NODE, X)))
    comp.start(start, i)
    return CompilationUnit(comp.program(), (_lit(i, X), _lit(c, X)), comp.roles, c, i, r)
