"""Visited facts for //listitem//keyword, plain versus jumping along top indexes."""
import argparse
import time

from nrpq.compiler import compile_query
from nrpq.engine import eval_topdown
from nrpq.graph import to_facts
from nrpq.indexing import build_indexes
from nrpq.xmlfront import gen_synthetic_doc, indexed_q05, xml_to_graph, xpath_parse, xpath_to_nrpq


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depths", default="1,2,3,4")
    ap.add_argument("--fanout", type=int, default=3)
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    plain = xpath_to_nrpq(xpath_parse("//listitem//keyword"))
    defs, indexed = indexed_q05()
    print(f"{'depth':>5} {'elements':>8} {'answers':>7} {'plain':>7} {'indexed':>7} {'index s':>7} {'eval s':>7}")
    for depth in (int(s) for s in args.depths.split(",")):
        enc = xml_to_graph(gen_synthetic_doc(depth, args.fanout, args.density, args.seed))
        t0 = time.perf_counter()
        d = to_facts(build_indexes(enc.graph, defs))
        t1 = time.perf_counter()
        rp = eval_topdown(compile_query(plain, {enc.document_node}).query, d)
        ri = eval_topdown(compile_query(indexed, {enc.document_node}).query, d)
        t2 = time.perf_counter()
        assert rp.answers == ri.answers
        print(f"{depth:>5} {enc.element_count:>8} {len(rp.answers):>7} {len(rp.visited):>7} "
              f"{len(ri.visited):>7} {t1 - t0:>7.2f} {t2 - t1:>7.2f}")


if __name__ == "__main__":
    main()
