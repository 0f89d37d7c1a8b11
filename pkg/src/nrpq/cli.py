"""Command line front end: ``python3 -m nrpq <command> ...``.

Exit codes: 0 on success (including empty answer sets), 1 on domain
errors (bad graph, query, start node, ...), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from .compiler import compile_exists_query, compile_filter_query, compile_query
from .datalog import emit_text
from .engine import eval_bottomup, eval_topdown
from .fixtures import P0_TEXT, padded_g0
from .graph import LabeledGraph, dump_facts, dump_graph, load_graph, to_facts
from .indexing import IndexDef, build_indexes, rewrite_with_indexes
from .reference import check_start, eval_filter_from, eval_path_from
from .syntax import desugar, parse_filter, parse_path, to_text
from .tdn import tdn_filter, tdn_path
from .xmlfront import (
    gen_synthetic_doc, indexed_q05, xml_to_graph, xpath_parse, xpath_to_nrpq,
)

REPORTS = ("visited", "tdn", "reached", "stats")


class CliError(ValueError):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _text_arg(value: str) -> str:
    """``@file`` reads the argument from a file."""
    return _read(value[1:]).strip() if value.startswith("@") else value


def _start(value: str | None, g: LabeledGraph | None, default_all: bool = False) -> frozenset[str]:
    if value is None:
        if default_all and g is not None:
            return g.nodes
        raise CliError("--start is required for path queries")
    text = _text_arg(value)
    if text.strip() == "*" and g is not None:
        return g.nodes
    start = frozenset(t for t in text.replace(",", " ").split() if t)
    return check_start(g, start) if g is not None else start


def _query(args, g: LabeledGraph | None):
    text = _text_arg(args.query)
    alphabet = g.edge_alphabet if g is not None else ()
    if getattr(args, "filter", False):
        return desugar(parse_filter(text), alphabet)
    return desugar(parse_path(text), alphabet)


def _defs(values: Sequence[str] | None) -> list[IndexDef]:
    defs = []
    for v in values or ():
        name, sep, q = v.partition("=")
        if not sep or not name.strip():
            raise CliError(f"index definition {v!r} is not of the form name=QUERY")
        defs.append(IndexDef(name.strip(), desugar(parse_path(_text_arg(q)))))
    return defs


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- commands --------------------------------------------------------------

def cmd_eval(args) -> int:
    reports = [r for r in (args.report or "").split(",") if r]
    for r in reports:
        if r not in REPORTS:
            raise CliError(f"unknown report {r!r}; choose from {', '.join(REPORTS)}")
    g = load_graph(_read(args.graph))
    q = _query(args, g)
    start = _start(args.start, g, default_all=args.filter)
    d = to_facts(g)

    result = None
    if args.engine == "reference":
        answers = (eval_filter_from if args.filter else eval_path_from)(g, q, start)
    else:
        unit = (compile_filter_query if args.filter else compile_query)(q, start)
        if args.engine == "topdown":
            result = eval_topdown(unit.query, d)
            answers = result.values()
        else:
            _, rows = eval_bottomup(unit.query, d)
            answers = frozenset(r[0] for r in rows)
    needs_topdown = [r for r in reports if r in ("visited", "reached", "stats")]
    if needs_topdown and result is None:
        raise CliError(f"report {needs_topdown[0]!r} needs --engine topdown")

    if args.json:
        out = {
            "answers": sorted(answers),
            "visited_count": len(result.visited) if result else None,
            "stats": result.stats.as_dict() if result else None,
        }
        if "tdn" in reports:
            out["tdn_count"] = len(_tdn(g, q, start, args.filter))
        print(json.dumps(out))
        return 0

    for v in sorted(answers):
        print(v)
    for r in reports:
        print(f"# {r}")
        if r == "visited":
            sys.stdout.write(dump_facts(result.visited))
        elif r == "tdn":
            sys.stdout.write(dump_facts(_tdn(g, q, start, args.filter)))
        elif r == "reached":
            for p, vs in sorted(result.reached.items()):
                if vs:
                    print(p, " ".join(sorted(vs)))
        else:
            for k, v in result.stats.as_dict().items():
                print(k, v)
    return 0


def _tdn(g, q, start, is_filter: bool):
    return (tdn_filter if is_filter else tdn_path)(g, start, q)


def cmd_compile(args) -> int:
    q = _query(args, None)
    start = _start(args.start, None) if args.start is not None else frozenset()
    if args.filter:
        unit = compile_filter_query(q, start)
    elif args.exists:
        unit = compile_exists_query(q, start)
    else:
        unit = compile_query(q, start)
    sys.stdout.write(emit_text(unit.query, unit.header))
    return 0


def cmd_tdn(args) -> int:
    g = load_graph(_read(args.graph))
    q = _query(args, g)
    start = _start(args.start, g, default_all=args.filter)
    sys.stdout.write(dump_facts(_tdn(g, q, start, args.filter)))
    return 0


def cmd_index_build(args) -> int:
    g = load_graph(_read(args.graph))
    _write(dump_graph(build_indexes(g, _defs(args.defs))), args.output)
    return 0


def cmd_rewrite(args) -> int:
    q = _query(args, None)
    print(to_text(rewrite_with_indexes(q, _defs(args.defs))))
    return 0


def cmd_xml2graph(args) -> int:
    enc = xml_to_graph(_read(args.input))
    text = dump_graph(enc.graph)
    if args.emit_docnode:
        text = f"# document {enc.document_node}\n" + text
    _write(text, args.output)
    return 0


def cmd_xpath2nrpq(args) -> int:
    print(to_text(xpath_to_nrpq(xpath_parse(args.expr))))
    return 0


def cmd_gen_xml(args) -> int:
    text = gen_synthetic_doc(args.depth, args.fanout, args.density, args.seed)
    _write(text, args.output)
    return 0


def _bench_rows(args):
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if args.family == "padded":
        q = desugar(parse_path(_text_arg(args.query or P0_TEXT)))
        for k in sizes:
            yield k, padded_g0(k), q, frozenset({"0"})
    else:
        defs, q = indexed_q05()
        if not args.indexed:
            q = xpath_to_nrpq(xpath_parse(args.query or "//listitem//keyword"))
        for depth in sizes:
            enc = xml_to_graph(gen_synthetic_doc(depth, args.fanout, args.density, args.seed))
            # index edges are present either way so plain and indexed runs share a graph
            g = build_indexes(enc.graph, defs)
            yield depth, g, q, frozenset({enc.document_node})


def cmd_bench(args) -> int:
    rows = []
    for param, g, q, start in _bench_rows(args):
        t0 = time.perf_counter()
        r = eval_topdown(compile_query(q, start).query, to_facts(g))
        rows.append({
            "param": param,
            "graph_size": g.size(),
            "answers": len(r.answers),
            "visited": len(r.visited),
            "resumptions": r.stats.resumptions,
            "seconds": round(time.perf_counter() - t0, 4),
        })
    if args.json:
        print(json.dumps(rows))
        return 0
    cols = list(rows[0]) if rows else []
    print("\t".join(cols))
    for row in rows:
        print("\t".join(str(row[c]) for c in cols))
    return 0


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nrpq", description="Nested regular path queries via monadic datalog.")
    sub = p.add_subparsers(dest="command", required=True)

    def query_args(sp, graph=True, start=True):
        if graph:
            sp.add_argument("--graph", required=True, help="graph file (node/label/edge lines)")
        sp.add_argument("--query", required=True, help="NRPQ text or @file")
        sp.add_argument("--filter", action="store_true", help="treat the query as a filter")
        if start:
            sp.add_argument("--start", help="start nodes: comma list, @file or '*'")

    sp = sub.add_parser("eval", help="answer a query")
    query_args(sp)
    sp.add_argument("--engine", choices=("topdown", "bottomup", "reference"), default="topdown")
    sp.add_argument("--report", help="comma list of: " + ",".join(REPORTS))
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("compile", help="print the datalog query")
    query_args(sp, graph=False)
    sp.add_argument("--emit", choices=("datalog",), default="datalog")
    sp.add_argument("--exists", action="store_true", help="compile the existential check of a path")
    sp.set_defaults(fn=cmd_compile)

    sp = sub.add_parser("tdn", help="print the top-down needed subgraph")
    query_args(sp)
    sp.set_defaults(fn=cmd_tdn)

    sp = sub.add_parser("index", help="index operations")
    isub = sp.add_subparsers(dest="index_command", required=True)
    bp = isub.add_parser("build", help="add index relations as edges")
    bp.add_argument("--graph", required=True)
    bp.add_argument("--def", dest="defs", action="append", required=True, metavar="NAME=QUERY")
    bp.add_argument("-o", "--output")
    bp.set_defaults(fn=cmd_index_build)

    sp = sub.add_parser("rewrite", help="rewrite a query to jump along indexes")
    sp.add_argument("--query", required=True)
    sp.add_argument("--def", dest="defs", action="append", metavar="NAME=QUERY")
    sp.set_defaults(fn=cmd_rewrite, filter=False)

    sp = sub.add_parser("xml2graph", help="encode an XML document as a graph")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.add_argument("--emit-docnode", action="store_true", help="add a '# document <id>' header line")
    sp.set_defaults(fn=cmd_xml2graph)

    sp = sub.add_parser("xpath2nrpq", help="translate a navigational XPath expression")
    sp.add_argument("expr")
    sp.set_defaults(fn=cmd_xpath2nrpq)

    sp = sub.add_parser("gen-xml", help="generate a synthetic document")
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--fanout", type=int, default=2)
    sp.add_argument("--density", type=float, default=0.3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_gen_xml)

    sp = sub.add_parser("bench", help="work and visited size over growing graphs")
    sp.add_argument("--family", choices=("padded", "xml"), default="padded")
    sp.add_argument("--sizes", default="1,4,16,64", help="padding copies or document depths")
    sp.add_argument("--query", help="NRPQ (padded) or XPath (xml)")
    sp.add_argument("--indexed", action="store_true", help="xml: use the top-index query")
    sp.add_argument("--fanout", type=int, default=3)
    sp.add_argument("--density", type=float, default=0.3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
