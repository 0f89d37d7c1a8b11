"""Tabled top-down evaluation of positive datalog queries.

Calls are memoized by variant (predicate plus the pattern of constants
and variable sharing).  Each table keeps its answers and the clause-body
continuations waiting on it; a new answer resumes every waiting
continuation exactly once.  Evaluation is a worklist fixpoint, so cyclic
programs terminate.

The evaluator records the visited sub-database (every extensional fact a
probe matches, plus ``node(c)`` for each constant of a probed or called
literal) and, for unary predicates, the constants they were called with.

:func:`eval_bottomup_naive` is an independent least-model oracle.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Mapping

from .datalog import (
    Clause, DatalogError, Literal, Program, Query, Var, free_vars, is_safe,
    walk,
)
from .graph import Fact, FactDb, is_extensional, node_fact


class UnsafeProgramError(DatalogError):
    pass


class UnknownPredicateError(DatalogError):
    pass


@dataclass
class EvalStats:
    calls: int = 0          # distinct call variants (tables)
    call_sites: int = 0     # intensional calls issued, repeats included
    resumptions: int = 0    # clause-body prefixes processed
    probes: int = 0         # extensional lookups
    answers: int = 0        # distinct answers over all tables

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


@dataclass
class EvalResult:
    variables: tuple[Var, ...]
    answers: frozenset[tuple[str, ...]]
    visited: FactDb
    reached: dict[str, frozenset[str]]
    stats: EvalStats = field(default_factory=EvalStats)

    def substitutions(self) -> list[dict[Var, str]]:
        return [dict(zip(self.variables, a)) for a in sorted(self.answers)]

    def values(self, var: Var | None = None) -> frozenset[str]:
        """Constants bound to ``var`` (default: the goal's first variable)."""
        i = 0 if var is None else self.variables.index(var)
        return frozenset(a[i] for a in self.answers)


def _check_program(q: Query) -> None:
    for c in q.program:
        if not is_safe(c):
            raise UnsafeProgramError(f"unsafe clause: {c}")
    known = q.program.predicates() | q.declared
    for lit in q.goal:
        if not lit.extensional and lit.pred not in known:
            raise UnknownPredicateError(f"goal predicate {lit.pred!r} is not defined by the program")


def _variant(lit: Literal) -> tuple:
    seen: dict[Var, int] = {}
    key = [lit.pred]
    for a in lit.args:
        if isinstance(a, Var):
            key.append(("v", seen.setdefault(a, len(seen))))
        else:
            key.append(a)
    return tuple(key)


def _match(args: tuple, row: tuple, s: dict) -> dict | None:
    """Extend ``s`` so that ``args`` instantiate to the ground ``row``."""
    out = None
    for a, c in zip(args, row):
        if isinstance(a, Var):
            a = walk(a, out if out is not None else s)
            if isinstance(a, Var):
                if out is None:
                    out = dict(s)
                out[a] = c
                continue
        if a != c:
            return None
    return out if out is not None else dict(s)


class _Table:
    __slots__ = ("answers", "order", "consumers")

    def __init__(self) -> None:
        self.answers: set[tuple] = set()
        self.order: list[tuple] = []
        self.consumers: list[tuple] = []


def eval_topdown(q: Query, d: FactDb) -> EvalResult:
    _check_program(q)
    clauses: dict[str, list[Clause]] = {}
    for c in q.program:
        clauses.setdefault(c.head.pred, []).append(c)

    goal_vars = tuple(free_vars(q.goal))
    stats = EvalStats()
    tables: dict[tuple, _Table] = {}
    visited: set[Fact] = set()
    reached: dict[str, set[str]] = {p: set() for p in q.program.intensional()}
    answers: set[tuple] = set()

    # frame: (body, position, substitution, target); target None = the goal
    stack: list = [(q.goal, 0, {}, None)]
    push = stack.append
    while stack:
        item = stack.pop()
        if len(item) == 2:
            (lits, pos, s, target, inst), row = item
            s2 = _match(inst.args, row, s)
            if s2 is None:
                continue
            push((lits, pos + 1, s2, target))
            continue

        lits, pos, s, target = item
        stats.resumptions += 1
        if pos == len(lits):
            if target is None:
                answers.add(tuple(walk(v, s) for v in goal_vars))
                continue
            key, head = target
            row = tuple(walk(a, s) for a in head.args)
            if any(isinstance(a, Var) for a in row):
                raise UnsafeProgramError(f"non-ground answer {head.pred}{row}")
            table = tables[key]
            if row not in table.answers:
                table.answers.add(row)
                table.order.append(row)
                stats.answers += 1
                for consumer in table.consumers:
                    push((consumer, row))
            continue

        lit = lits[pos]
        args = tuple(walk(a, s) for a in lit.args)
        for a in args:
            if not isinstance(a, Var):
                visited.add(node_fact(a))

        if is_extensional(lit.pred):
            stats.probes += 1
            pattern = tuple(None if isinstance(a, Var) else a for a in args)
            for row in d.probe(lit.pred, pattern):
                s2 = _match(args, row, s)
                if s2 is None:
                    continue
                visited.add(Fact(lit.pred, row))
                push((lits, pos + 1, s2, target))
            continue

        stats.call_sites += 1
        inst = Literal(lit.pred, args)
        if len(args) == 1 and not isinstance(args[0], Var):
            reached.setdefault(lit.pred, set()).add(args[0])
        key = _variant(inst)
        table = tables.get(key)
        consumer = (lits, pos, s, target, inst)
        if table is None:
            table = tables[key] = _Table()
            stats.calls += 1
            table.consumers.append(consumer)
            # each activation has its own substitution, so clause variables
            # are renamed apart from the caller's implicitly
            for c in clauses.get(lit.pred, ()):
                s0 = _match_head(c.head, inst)
                if s0 is not None:
                    push((c.body, 0, s0, (key, c.head)))
        else:
            table.consumers.append(consumer)
            for row in table.order:
                push((consumer, row))

    return EvalResult(
        variables=goal_vars,
        answers=frozenset(answers),
        visited=FactDb(visited),
        reached={p: frozenset(vs) for p, vs in reached.items()},
        stats=stats,
    )


def _match_head(head: Literal, call: Literal) -> dict | None:
    """Bindings for the (renamed) clause head that make it an instance of ``call``.

    Call variables only constrain which head positions must agree.
    """
    s: dict = {}
    call_bind: dict[Var, object] = {}
    for h, c in zip(head.args, call.args):
        h = walk(h, s)
        if isinstance(c, Var):
            if c in call_bind:
                other = walk(call_bind[c], s)
                if other == h:
                    continue
                if isinstance(h, Var):
                    s[h] = other
                elif isinstance(other, Var):
                    s[other] = h
                else:
                    return None
            else:
                call_bind[c] = h
            continue
        if isinstance(h, Var):
            s[h] = c
        elif h != c:
            return None
    return s


# -- naive bottom-up oracle ------------------------------------------------

def _matches(body: tuple[Literal, ...], s: dict, rels: Mapping[str, set]) -> Iterator[dict]:
    if not body:
        yield s
        return
    lit, rest = body[0], body[1:]
    for row in list(rels.get(lit.pred, ())):
        if len(row) != lit.arity:
            continue
        s2 = dict(s)
        ok = True
        for a, c in zip(lit.args, row):
            if isinstance(a, Var):
                if a in s2:
                    if s2[a] != c:
                        ok = False
                        break
                else:
                    s2[a] = c
            elif a != c:
                ok = False
                break
        if ok:
            yield from _matches(rest, s2, rels)


def eval_bottomup_naive(m: Program, d: Iterable[Fact]) -> frozenset[Fact]:
    """Least model of ``m`` over ``d``, restricted to intensional facts."""
    for c in m:
        if not is_safe(c):
            raise UnsafeProgramError(f"unsafe clause: {c}")
    rels: dict[str, set] = {}
    for pred, args in d:
        rels.setdefault(pred, set()).add(tuple(args))
    model: set[Fact] = set()
    changed = True
    while changed:
        changed = False
        derived = []
        for c in m:
            for s in _matches(c.body, {}, rels):
                derived.append(Fact(c.head.pred, tuple(s.get(a, a) for a in c.head.args)))
        for f in derived:
            if f not in model:
                model.add(f)
                rels.setdefault(f.pred, set()).add(f.args)
                changed = True
    return frozenset(model)


def answers_from_model(goal: tuple[Literal, ...], facts: Iterable[Fact]) -> tuple[tuple[Var, ...], frozenset]:
    rels: dict[str, set] = {}
    for pred, args in facts:
        rels.setdefault(pred, set()).add(tuple(args))
    variables = tuple(free_vars(goal))
    answers = frozenset(tuple(s[v] for v in variables) for s in _matches(tuple(goal), {}, rels))
    return variables, answers


def eval_bottomup(q: Query, d: FactDb) -> tuple[tuple[Var, ...], frozenset]:
    model = eval_bottomup_naive(q.program, d)
    return answers_from_model(q.goal, set(model) | set(d))
