"""Top-down work on G0 padded with k disconnected copies.

Resumptions and visited facts should stay flat while the graph grows.
"""
import argparse

from nrpq.compiler import compile_query
from nrpq.engine import eval_topdown
from nrpq.fixtures import P0_TEXT, padded_g0
from nrpq.graph import to_facts
from nrpq.syntax import desugar, parse_path


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1,4,16,64,256")
    ap.add_argument("--query", default=P0_TEXT)
    args = ap.parse_args()
    q = desugar(parse_path(args.query))
    print(f"{'k':>5} {'|G|':>7} {'resumptions':>12} {'visited':>8} {'answers':>8}")
    for k in (int(s) for s in args.sizes.split(",")):
        g = padded_g0(k)
        r = eval_topdown(compile_query(q, {"0"}).query, to_facts(g))
        print(f"{k:>5} {g.size():>7} {r.stats.resumptions:>12} {len(r.visited):>8} {len(r.answers):>8}")


if __name__ == "__main__":
    main()
