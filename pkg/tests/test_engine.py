import random

import pytest
from hypothesis import given, settings, strategies as st

from nrpq.compiler import compile_query
from nrpq.datalog import Clause, Literal, Program, Query, Var, is_safe
from nrpq.engine import (
    UnknownPredicateError, UnsafeProgramError, answers_from_model,
    eval_bottomup, eval_bottomup_naive, eval_topdown,
)
from nrpq.graph import Fact, FactDb, edge_fact, node_fact, to_facts
from nrpq.syntax import Edge, Plus, parse_path

from strategies import graph_and_start

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def lit(p, *args):
    return Literal(p, tuple(args))


def test_p0_answers(D0):
    u = compile_query(parse_path("a/?([b/c])"), {"0"})
    r = eval_topdown(u.query, D0)
    assert r.values() == {"1", "4"}
    assert r.substitutions() == [{X: "1"}, {X: "4"}]
    assert eval_bottomup(u.query, D0)[1] == r.answers


def test_single_extensional_goal(D0):
    r = eval_topdown(Query((lit("edge_a", "0", X),), Program()), D0)
    assert r.values() == {"1", "4", "6"}
    assert set(r.visited) == {node_fact("0")} | {edge_fact("a", "0", v) for v in "146"}


def test_empty_goal(D0):
    r = eval_topdown(Query((), Program()), D0)
    assert r.answers == {()} and len(r.visited) == 0


def test_unsafe_and_unknown():
    with pytest.raises(UnsafeProgramError):
        eval_topdown(Query((lit("c", X),), Program((Clause(lit("c", X), (lit("j"),)),))), FactDb())
    with pytest.raises(UnknownPredicateError):
        eval_topdown(Query((lit("nope", X),), Program()), FactDb())
    # declared predicates without clauses simply have no answers
    r = eval_topdown(Query((lit("i", X),), Program(), frozenset({"i"})), FactDb())
    assert r.answers == frozenset()
    with pytest.raises(UnsafeProgramError):
        eval_bottomup_naive(Program((Clause(lit("c", X), (lit("j"),)),)), [])


def test_bottomup_examples():
    assert eval_bottomup_naive(Program((Clause(lit("i", "0")),)), []) == {Fact("i", ("0",))}
    cyc = Program((Clause(lit("i", X), (lit("f", X),)), Clause(lit("f", X), (lit("i", X),))))
    assert eval_bottomup_naive(cyc, []) == frozenset()
    assert answers_from_model((lit("i", X),), [Fact("i", ("0",))]) == ((X,), frozenset({("0",)}))


def test_cyclic_plus_terminates():
    # a 3-cycle under a+: each node reaches all three
    d = FactDb([node_fact(v) for v in "012"] + [edge_fact("a", u, v) for u, v in ("01", "12", "20")])
    r = eval_topdown(compile_query(Plus(Edge("a")), {"0"}).query, d)
    assert r.values() == {"0", "1", "2"}


def test_reached_records_unary_constants(D0):
    u = compile_query(parse_path("a/?([b/c])"), {"0"})
    r = eval_topdown(u.query, D0)
    assert r.reached["c3"] == {"1", "4", "6"}
    assert r.reached["r5"] == {"2"}


def test_binary_intensional_predicates():
    # path(X,Y) with shared call variables: tabling handles non-monadic programs too
    d = FactDb([node_fact(v) for v in "0123"] + [edge_fact("e", u, v) for u, v in ("01", "12", "23", "30")])
    prog = Program((
        Clause(lit("path", X, Y), (lit("edge_e", X, Y),)),
        Clause(lit("path", X, Y), (lit("path", X, Z), lit("edge_e", Z, Y))),
    ))
    q = Query((lit("path", X, X),), prog)
    r = eval_topdown(q, d)
    assert r.values() == {"0", "1", "2", "3"}
    assert r.answers == eval_bottomup(q, d)[1]
    q2 = Query((lit("path", "1", Y),), prog)
    assert eval_topdown(q2, d).answers == eval_bottomup(q2, d)[1]


@st.composite
def random_programs(draw):
    """Small safe programs over unary/binary intensional predicates."""
    preds = {"p": 1, "q": 1, "s": 2}
    ext = {"node": 1, "edge_a": 2, "edge_b": 2}
    allp = {**preds, **ext}
    vars_ = [X, Y, Z]
    clauses = []
    for _ in range(draw(st.integers(1, 6))):
        head_pred = draw(st.sampled_from(sorted(preds)))
        body = []
        for _ in range(draw(st.integers(1, 3))):
            bp = draw(st.sampled_from(sorted(allp)))
            args = tuple(draw(st.sampled_from(vars_ + ["0", "1"])) for _ in range(allp[bp]))
            body.append(lit(bp, *args))
        bvars = sorted({a for l in body for a in l.args if isinstance(a, Var)})
        if not bvars:
            continue
        head = lit(head_pred, *(draw(st.sampled_from(bvars)) for _ in range(preds[head_pred])))
        clauses.append(Clause(head, tuple(body)))
    clauses.append(Clause(lit("p", "0")))
    goal_pred = draw(st.sampled_from(sorted(preds)))
    goal = lit(goal_pred, *(draw(st.sampled_from([X, Y, "0"])) for _ in range(preds[goal_pred])))
    return Query((goal,), Program(tuple(clauses)), frozenset(preds))


@settings(max_examples=150, deadline=None)
@given(graph_and_start(6), random_programs())
def test_topdown_equals_bottomup_on_random_programs(gs, q):
    g, _ = gs
    d = to_facts(g)
    assert all(is_safe(c) for c in q.program)
    assert eval_topdown(q, d).answers == eval_bottomup(q, d)[1]


def test_visited_counts_node_facts_for_called_constants():
    prog = Program((Clause(lit("r", X), (lit("node", X),)),))
    r = eval_topdown(Query((lit("r", "z"),), prog), FactDb())
    assert node_fact("z") in r.visited and r.answers == frozenset()
