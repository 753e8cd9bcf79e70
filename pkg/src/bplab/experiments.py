"""Seeded campaigns over an (n, p) grid.

Each trial samples G(n, p) from a seed derived from the base seed and the
cell coordinates, computes the independence number and (depending on the
mode) the biclique partition number, and checks

    eigen bound <= bp <= n - alpha.

Output is deterministic: identical configs give identical CSV bytes, even
with several workers.  Wall-clock timings are only written when asked for,
since they are the one non-reproducible column.

The frequencies reported here are desk-scale observations; they say nothing
directly about the n -> infinity behaviour.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from . import bkr, numerics
from .construct import FkParams, check_fk, fk_decomposition, search_fkprime
from .graphcore import GnpSpec, sample_gnp, serialize_graph
from .solver import (BudgetExhausted, SearchBudget, bp_via_special_subgraphs, eigen_lower_bound, exact_bp,
                     max_independent_set)

CSV_COLUMNS = ["n", "p", "seed", "alpha", "bp", "star_bound", "equal", "lb_eigen", "nodes", "ms", "status"]
GRAPH_MODES = ("exact-bp", "special-subgraph", "fk-search")
MODES = GRAPH_MODES + ("bounds", "bkr")


class SandwichViolation(AssertionError):
    """eigen <= bp <= n - alpha failed; ``dump`` holds the graph and seed."""

    def __init__(self, dump: dict):
        super().__init__(f"sandwich invariant violated: {json.dumps(dump)}")
        self.dump = dump


def resolve_p(p: Union[float, str]) -> float:
    if isinstance(p, str):
        if p.lower() == "p0":
            return numerics.P0
        return float(p)
    return float(p)


def trial_seed(base_seed: int, n: int, p: float, trial: int) -> int:
    h = hashlib.blake2b(f"{n}|{p!r}|{trial}".encode(), digest_size=8).digest()
    return (base_seed ^ int.from_bytes(h, "little")) & (2**64 - 1)


@dataclass
class CampaignConfig:
    n_values: list
    p_values: list
    trials: int = 1
    base_seed: int = 0
    mode: str = "exact-bp"
    max_nodes: int = 10_000_000
    max_seconds: float = 600.0
    fk_k: int = 6
    fk_r: int = 1
    workers: int = 1
    record_timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.mode in ("exact-bp", "special-subgraph") and any(n > 14 for n in self.n_values):
            raise ValueError("exact modes are limited to n <= 14")

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(self.max_nodes, self.max_seconds)

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        d = dict(d)
        budget = d.pop("budget", None)
        if budget:
            d.setdefault("max_nodes", budget.get("max_nodes", 10_000_000))
            d.setdefault("max_seconds", budget.get("max_seconds", 600.0))
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "CampaignConfig":
        return cls.from_dict(json.loads(text))


@dataclass
class TrialRecord:
    n: int
    p: float
    seed: int
    alpha: int
    bp: Optional[int]
    star_bound: int
    equal: Optional[bool]
    lb_eigen: int
    nodes: int
    ms: Optional[float]
    status: str
    detail: dict = field(default_factory=dict)

    def csv_row(self) -> list:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return int(x)
            if isinstance(x, float):
                return repr(x)
            return x
        return [fmt(getattr(self, c)) for c in CSV_COLUMNS]


def _run_graph_trial(args) -> TrialRecord:
    cfg, n, p, t = args
    seed = trial_seed(cfg.base_seed, n, p, t)
    g = sample_gnp(GnpSpec(n, p, seed))
    t0 = time.perf_counter()
    alpha = len(max_independent_set(g))
    lb = eigen_lower_bound(g)
    bp, nodes, status, detail = None, 0, "ok", {}
    try:
        if cfg.mode == "exact-bp":
            res = exact_bp(g, cfg.budget)
            bp, nodes = res.value, res.nodes_explored
        elif cfg.mode == "special-subgraph":
            bp = bp_via_special_subgraphs(g, cfg.budget)
        else:
            params = FkParams(cfg.fk_k, cfg.fk_r)
            w = search_fkprime(g, params, seed=seed, budget=cfg.budget) if cfg.fk_k <= n else None
            if w is None:
                status = "fk_absent"
            else:
                status = "fk_found"
                part = fk_decomposition(g, w)
                detail = {"witness": w.to_dict(), "blocks": len(part.blocks), "regular": check_fk(g, w),
                          "upper_bound": n - w.k + w.r}
    except BudgetExhausted as exc:
        status = "budget"
        if exc.result is not None:
            nodes = exc.result.nodes_explored
    ms = (time.perf_counter() - t0) * 1000.0 if cfg.record_timing else None
    rec = TrialRecord(n, p, seed, alpha, bp, n - alpha, None if bp is None else bp == n - alpha,
                      lb, nodes, ms, status, detail)
    if bp is not None and not lb <= bp <= n - alpha:
        raise SandwichViolation({"n": n, "p": p, "seed": seed, "graph6": serialize_graph(g, "graph6"),
                                 "alpha": alpha, "bp": bp, "lb_eigen": lb})
    return rec


def _run_bounds_cell(cfg: CampaignConfig, n: int, p: float) -> dict:
    if p < numerics.P0:
        k = numerics.k_constant(n, p)
        selector = "k_constant"
    else:
        k = numerics.k_constant(n, p, eps=0.0)
        selector = "first_moment_threshold"
    w = numerics.expected_W_bound(n, k, p)
    wp = numerics.expected_Wprime_bound(n, k, p)
    return {"mode": "bounds", "n": n, "p": p, "k": k, "k_selector": selector,
            "log10_W": w.log10_value, "argmax_r": w.extra["argmax_r"], "log10_Wprime": wp.log10_value}


def _run_bkr_cell(cfg: CampaignConfig, d: int, p: float, t: int) -> dict:
    seed = trial_seed(cfg.base_seed, d, p, t)
    rng = np.random.default_rng(seed)
    space = bkr.ProductSpace.random(2, d, rng)
    A, B = bkr.random_event(space, rng), bkr.random_event(space, rng)
    rep = bkr.verify_bkr(space, [A, B])
    return {"mode": "bkr", "d": d, "seed": seed, "lhs": rep.lhs, "rhs": rep.rhs, "holds": rep.holds}


def summarize(records: Iterable[TrialRecord]) -> list[dict]:
    cells: dict = {}
    for rec in records:
        cells.setdefault((rec.n, rec.p), []).append(rec)
    out = []
    for (n, p), recs in cells.items():
        solved = [r for r in recs if r.bp is not None]
        out.append({
            "n": n, "p": p, "trials": len(recs), "solved": len(solved),
            "equality_frequency": (sum(r.equal for r in solved) / len(solved)) if solved else None,
            "mean_alpha": float(np.mean([r.alpha for r in recs])),
            "mean_bp": float(np.mean([r.bp for r in solved])) if solved else None,
            "note": "desk-scale frequency; the equality bp = n - alpha is an asymptotic statement",
        })
    return out


@dataclass
class CampaignResult:
    records: list
    summary: list

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in self.records:
            if isinstance(rec, TrialRecord):
                w.writerow(rec.csv_row())
        return buf.getvalue()

    def to_jsonl(self) -> str:
        lines = []
        for rec in self.records:
            lines.append(json.dumps(asdict(rec) if isinstance(rec, TrialRecord) else rec, sort_keys=True))
        for s in self.summary:
            lines.append(json.dumps({"summary": s}, sort_keys=True))
        return "\n".join(lines) + "\n"


def run_campaign(cfg: CampaignConfig) -> CampaignResult:
    """Run every (n, p, trial) cell; records come back in grid-then-trial order."""
    ps = [resolve_p(p) for p in cfg.p_values]
    if cfg.mode in GRAPH_MODES:
        jobs = [(cfg, n, p, t) for n in cfg.n_values for p in ps for t in range(cfg.trials)]
        if cfg.workers > 1:
            with ProcessPoolExecutor(cfg.workers) as pool:
                records = list(pool.map(_run_graph_trial, jobs, chunksize=8))
        else:
            records = [_run_graph_trial(j) for j in jobs]
        return CampaignResult(records, summarize(records))
    if cfg.mode == "bounds":
        return CampaignResult([_run_bounds_cell(cfg, n, p) for n in cfg.n_values for p in ps], [])
    records = [_run_bkr_cell(cfg, d, p, t) for d in cfg.n_values for p in ps for t in range(cfg.trials)]
    return CampaignResult(records, [{"trials": len(records), "violations": sum(not r["holds"] for r in records)}])
