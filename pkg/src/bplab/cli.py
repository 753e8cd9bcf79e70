"""Command line entry point: ``bplab <subcommand> ...``.

Exit codes: 0 success, 1 bad input, 2 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bkr, numerics
from .construct import FkParams, check_fk, fk_decomposition, search_fkprime
from .experiments import CampaignConfig, run_campaign
from .graphcore import GnpSpec, Graph, GraphFormatError, parse_graph, sample_gnp, serialize_graph
from .solver import BudgetExhausted, SearchBudget, exact_bp, has_special_subgraph, max_independent_set

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


def _gnp(text: str) -> GnpSpec:
    try:
        n, p, seed = text.split(",")
        return GnpSpec(int(n), float(p), int(seed))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--gnp expects n,p,seed: {exc}") from None


def _read_graph(args) -> Graph:
    if args.gnp is not None:
        return sample_gnp(args.gnp)
    if args.graph is None:
        raise ValueError("give a graph file (--graph) or --gnp n,p,seed")
    text = sys.stdin.read() if args.graph == "-" else open(args.graph).read()
    return parse_graph(text, args.format)


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def _budget(args) -> SearchBudget:
    return SearchBudget(args.max_nodes, args.max_seconds)


def cmd_sample(args):
    g = _read_graph(args)
    _emit({"n": g.n, "edges": [list(e) for e in g.edges()], "m": g.num_edges(),
           "graph6": serialize_graph(g, "graph6") if g.n <= 62 else None})


def cmd_alpha(args):
    g = _read_graph(args)
    s = max_independent_set(g)
    _emit({"alpha": len(s), "set": s})


def cmd_bp(args):
    g = _read_graph(args)
    try:
        res = exact_bp(g, _budget(args))
    except BudgetExhausted as exc:
        _emit(exc.result.to_dict() if exc.result else {"optimal": False})
        return EXIT_BUDGET
    _emit(res.to_dict())


def cmd_special(args):
    g = _read_graph(args)
    try:
        w = has_special_subgraph(g, args.k, _budget(args))
    except BudgetExhausted:
        _emit({"found": False, "exhausted": True})
        return EXIT_BUDGET
    _emit({"found": False} if w is None else dict(w.to_dict(), found=True))


def cmd_fk_search(args):
    g = _read_graph(args)
    params = FkParams(args.k, args.r)
    try:
        w = search_fkprime(g, params, seed=args.seed, budget=_budget(args))
    except BudgetExhausted:
        _emit({"found": False, "exhausted": True})
        return EXIT_BUDGET
    if w is None:
        _emit({"found": False})
        return
    part = fk_decomposition(g, w)
    _emit(dict(w.to_dict(), found=True, regular=check_fk(g, w), blocks=len(part.blocks),
               upper_bound=g.n - w.k + w.r))


def cmd_bounds(args):
    kw = {k: getattr(args, k) for k in ("n", "p", "k", "r", "s", "m", "i", "gamma", "a", "c")}
    kw = {k: v for k, v in kw.items() if v is not None}
    try:
        rep = numerics.evaluate(args.op, **kw)
    except KeyError as exc:
        raise ValueError(f"--op {args.op} needs --{exc.args[0]}") from None
    _emit(rep.to_dict())


def cmd_bkr_check(args):
    rng = np.random.default_rng(args.seed)
    bad = 0
    for t in range(args.trials):
        space = bkr.ProductSpace.random(args.alphabet, args.dims, rng)
        events = [bkr.random_event(space, rng) for _ in range(args.r)]
        rep = bkr.verify_bkr(space, events)
        bad += not rep.holds
        _emit({"trial": t, "lhs": rep.lhs, "rhs": rep.rhs, "holds": rep.holds})
    return EXIT_INPUT if bad else EXIT_OK


def cmd_campaign(args):
    cfg = CampaignConfig.from_json(open(args.config).read())
    if args.seed is not None:
        cfg.base_seed = args.seed
    res = run_campaign(cfg)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(res.to_csv())
    if args.jsonl:
        with open(args.jsonl, "w") as fh:
            fh.write(res.to_jsonl())
    for s in res.summary:
        _emit(s)
    if any(getattr(r, "status", "") == "budget" for r in res.records):
        return EXIT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bplab", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def graph_cmd(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--graph", help="graph file, '-' for stdin")
        sp.add_argument("--format", choices=["edge-list", "graph6"], default="edge-list")
        sp.add_argument("--gnp", type=_gnp, help="sample G(n,p) instead: n,p,seed")
        sp.add_argument("--max-nodes", type=int, default=10_000_000)
        sp.add_argument("--max-seconds", type=float, default=600.0)
        sp.set_defaults(func=fn)
        return sp

    graph_cmd("sample", cmd_sample, "sample or read a graph and print it")
    graph_cmd("alpha", cmd_alpha, "maximum independent set")
    graph_cmd("bp", cmd_bp, "exact biclique partition number")
    graph_cmd("special", cmd_special, "special subgraph of order k").add_argument("--k", type=int, required=True)
    fk = graph_cmd("fk-search", cmd_fk_search, "search for a paired bipartite witness")
    fk.add_argument("--k", type=int, required=True)
    fk.add_argument("--r", type=int, required=True)
    fk.add_argument("--seed", type=int, default=0)

    bd = sub.add_parser("bounds", help="evaluate a closed-form quantity")
    bd.add_argument("--op", required=True)
    for name, typ in (("n", int), ("p", float), ("k", int), ("r", int), ("s", int), ("m", int), ("i", int),
                      ("gamma", float), ("a", float), ("c", float)):
        bd.add_argument(f"--{name}", type=typ)
    bd.set_defaults(func=cmd_bounds)

    bk = sub.add_parser("bkr-check", help="random exhaustive BKR checks")
    bk.add_argument("--alphabet", type=int, default=2)
    bk.add_argument("--dims", type=int, default=3)
    bk.add_argument("--trials", type=int, default=10)
    bk.add_argument("--seed", type=int, default=0)
    bk.add_argument("--r", type=int, default=2)
    bk.set_defaults(func=cmd_bkr_check)

    cp = sub.add_parser("campaign", help="run a seeded experiment campaign from a JSON config")
    cp.add_argument("--config", required=True)
    cp.add_argument("--out", help="CSV output path")
    cp.add_argument("--jsonl", help="JSON-lines output path")
    cp.add_argument("--seed", type=int, help="override base_seed")
    cp.set_defaults(func=cmd_campaign)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage; here 2 is reserved for budgets
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        code = args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
