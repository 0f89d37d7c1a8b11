import pytest
from hypothesis import given, settings

from nrpq.compiler import (
    NegationNotSupported, compile_acc, compile_ex, compile_exists_query,
    compile_filt, compile_filter_query, compile_query, start_program,
)
from nrpq.datalog import emit_text, is_safe, is_scl_query, parse_program
from nrpq.engine import eval_bottomup, eval_topdown
from nrpq.graph import LabeledGraph, to_facts
from nrpq.reference import eval_filter_from, eval_path_from
from nrpq.syntax import (
    TRUE, And, Concat, Edge, FilterStep, Goto, HasPath, NodeLabel, Not, Or,
    Plus, Union, has_goto, parse_filter, parse_path, size,
)
from nrpq.tdn import tdn_path

from strategies import FILTERS, PATHS, graph_and_start

BC = HasPath(Concat(Edge("b"), Edge("c")))


def clauses(text):
    return set(parse_program(text).clauses)


def test_start_program():
    assert set(start_program({"0"}, "i").clauses) == clauses("i(0).")
    assert len(start_program(set(), "i")) == 0
    assert len(start_program({"0", "1", "2"}, "i")) == 3


def test_acc_examples():
    assert set(compile_acc(Edge("a"), "i", "f").clauses) == clauses("f(X) :- i(Y), edge_a(Y,X).")
    assert set(compile_acc(Plus(Edge("a")), "i", "f").clauses) == clauses(
        "f(X) :- i(Y), edge_a(Y,X). i(X) :- f(X).")
    assert set(compile_acc(Goto(NodeLabel("a")), "i", "f").clauses) == clauses(
        "c0(X) :- node_a(X). f(X) :- j1, c0(X). j1 :- i(X).")


def test_filt_examples():
    assert set(compile_filt(TRUE, "c").clauses) == clauses("c(X) :- node(X).")
    assert set(compile_filt(BC, "c").clauses) == clauses(
        "c(X) :- edge_b(X,Y), r1(Y). r1(X) :- edge_c(X,Y), r0(Y). r0(X) :- node(X).")
    assert set(compile_filt(Or(NodeLabel("a"), NodeLabel("b")), "c").clauses) == clauses(
        "c0(X) :- node_a(X). c1(X) :- node_b(X). c(X) :- c0(X). c(X) :- c1(X).")


def test_ex_examples():
    assert set(compile_ex(Edge("b"), "c", "r").clauses) == clauses("c(X) :- edge_b(X,Y), r(Y).")
    assert set(compile_ex(Plus(Edge("b")), "c", "r").clauses) == clauses(
        "c(X) :- edge_b(X,Y), r(Y). r(X) :- c(X).")
    assert set(compile_ex(Goto(TRUE), "c", "r").clauses) == clauses(
        "c0(X) :- node(X). c(X) :- node(X), j1. j1 :- c0(Y), r(Y).")


def test_p0_program_shape():
    u = compile_query(parse_path("a/?([b/c])"), {"0"})
    assert emit_text(u.query, u.header) == (
        "% start: i0\n"
        "% goal: f1(X), node(X)\n"
        "c3(X) :- edge_b(X,Y), r5(Y).\n"
        "f1(X) :- f2(X), c3(X).\n"
        "f2(X) :- i0(Y), edge_a(Y,X).\n"
        "i0(0).\n"
        "r4(X) :- node(X).\n"
        "r5(X) :- edge_c(X,Y), r4(Y).\n"
    )


def test_query_examples(G0, D0):
    assert eval_topdown(compile_query(parse_path("a/?([b/c])"), {"0"}).query, D0).values() == {"1", "4"}
    assert eval_topdown(compile_query(FilterStep(TRUE), {"2", "7"}).query, D0).values() == {"2", "7"}
    assert eval_topdown(compile_query(Edge("a"), set()).query, D0).values() == frozenset()
    fq = compile_filter_query(BC, {"1", "4", "5", "0"})
    assert eval_topdown(fq.query, D0).values() == {"1", "4", "5"}
    assert eval_topdown(compile_filter_query(TRUE, {"3"}).query, D0).values() == {"3"}
    assert eval_topdown(compile_filter_query(NodeLabel("a"), G0.nodes).query, D0).values() == frozenset()


def test_negation_rejected():
    with pytest.raises(NegationNotSupported, match="reference"):
        compile_query(FilterStep(Not(TRUE)), {"0"})


def test_union_with_plus_does_not_leak(G0, D0):
    # looping the plus branch back into the shared start predicate would
    # let the c branch start from node 2, reached by b+
    p = parse_path("c|b+")
    u = compile_query(p, {"1"})
    assert eval_topdown(u.query, D0).values() == eval_path_from(G0, p, {"1"}) == {"2"}


def test_exists_union_with_plus_does_not_leak():
    # 0 -b-> 1 -c-> 2, only 2 labeled x; [(b|c+)/?(.x)] holds at 1 but not at 0
    g = LabeledGraph(frozenset("012"), {"x": {"2"}}, {"b": {("0", "1")}, "c": {("1", "2")}})
    f = parse_filter("[(b|c+)/?(.x)]")
    r = eval_topdown(compile_filter_query(f, g.nodes).query, to_facts(g))
    assert r.values() == eval_filter_from(g, f, g.nodes) == {"1"}


@settings(deadline=None)
@given(PATHS)
def test_compiled_programs_are_safe_scl_and_linear(p):
    for s in (set(), {"0", "1"}):
        u = compile_query(p, s)
        assert all(is_safe(c) for c in u.program)
        assert is_scl_query(u.query)
        assert len(u.program) <= 2 * size(p) + len(s) + 1


@settings(deadline=None)
@given(graph_and_start(8), PATHS)
def test_answers_visited_reached(gs, p):
    g, s = gs
    d = to_facts(g)
    ref = eval_path_from(g, p, s)
    r = eval_topdown(compile_query(p, s).query, d)
    assert r.values() == ref
    tdn = tdn_path(g, s, p)
    if has_goto(p):
        assert all(f.pred == "node" for f in set(r.visited) - set(tdn))
    else:
        assert r.visited == tdn
    e = compile_exists_query(p, s)
    re_ = eval_topdown(e.query, d)
    assert re_.reached.get(e.continuation, frozenset()) == ref
    assert re_.values() == {v for v in s if eval_path_from(g, p, {v})}
    assert eval_bottomup(compile_query(p, s).query, d)[1] == r.answers


@settings(deadline=None)
@given(graph_and_start(8), FILTERS)
def test_filter_queries(gs, f):
    g, s = gs
    r = eval_topdown(compile_filter_query(f, s).query, to_facts(g))
    assert r.values() == eval_filter_from(g, f, s)
