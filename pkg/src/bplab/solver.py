"""Exact solvers: independence number, biclique partition number, non-star
partitions, special subgraphs and induced matchings.

Everything here is exponential and meant for small graphs.  The biclique
searches branch on the lexicographically least uncovered edge and try every
biclique of the uncovered-edge graph that contains it, largest first, pruning
with the spectral inertia bound of what is left uncovered.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .bicliques import Biclique, BicliquePartition, SpecialWitness, star_cover
from .graphcore import SOLVER_MAX_N, Graph, bits, complement, induced_subgraph

EIG_TOL = 1e-9


class BudgetExhausted(RuntimeError):
    """Search stopped by its budget; ``result`` holds the best incumbent, if any."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10_000_000
    max_seconds: float = 600.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class BpResult:
    value: int
    witness: BicliquePartition
    nodes_explored: int
    optimal: bool = True
    lower_bound: int = 0

    def to_dict(self) -> dict:
        d = self.witness.to_dict()
        d.update(value=self.value, optimal=self.optimal, nodes=self.nodes_explored)
        return d


def _check_solver_size(g: Graph):
    if g.n > SOLVER_MAX_N:
        raise ValueError(f"exact solvers accept n <= {SOLVER_MAX_N}, got {g.n}")


# ------------------------------------------------------------ clique / MIS

def _color_order(P: int, adj) -> tuple[list[int], list[int]]:
    order, bound = [], []
    color = 0
    while P:
        color += 1
        Q = P
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~adj[v] & ~low
            P &= ~low
            order.append(v)
            bound.append(color)
    return order, bound


def max_clique_mask(adj, candidates: int, target: Optional[int] = None) -> int:
    """Maximum clique inside ``candidates`` for bitset rows ``adj`` (any size).

    Greedy-colouring branch and bound.  With ``target`` set, stops as soon as a
    clique of that size is found.
    """
    best = [0, 0]  # mask, size

    def expand(C: int, csize: int, P: int) -> bool:
        order, bound = _color_order(P, adj)
        for i in range(len(order) - 1, -1, -1):
            if csize + bound[i] <= best[1]:
                return False
            v = order[i]
            C2 = C | 1 << v
            P2 = P & adj[v]
            if P2:
                if expand(C2, csize + 1, P2):
                    return True
            elif csize + 1 > best[1]:
                best[0], best[1] = C2, csize + 1
                if target is not None and best[1] >= target:
                    return True
            P &= ~(1 << v)
        return False

    if candidates:
        expand(0, 0, candidates)
    return best[0]


def max_independent_set(g: Graph) -> list[int]:
    _check_solver_size(g)
    comp = complement(g)
    return list(bits(max_clique_mask(comp.adj, (1 << g.n) - 1)))


def independence_number(g: Graph) -> int:
    return len(max_independent_set(g))


# ------------------------------------------------------------ spectral bound

def _rows_to_matrix(rows, n: int) -> np.ndarray:
    r = np.array(rows, dtype=np.uint64)
    return ((r[:, None] >> np.arange(n, dtype=np.uint64)) & np.uint64(1)).astype(float)


def inertia_bound(rows, n: int) -> int:
    if n == 0 or not any(rows):
        return 0
    ev = np.linalg.eigvalsh(_rows_to_matrix(rows, n))
    return int(max((ev > EIG_TOL).sum(), (ev < -EIG_TOL).sum()))


def eigen_lower_bound(g: Graph) -> int:
    """max(#positive, #negative) adjacency eigenvalues; a lower bound on bp(g)."""
    return inertia_bound(g.adj, g.n)


# ------------------------------------------------------------ biclique search

def _candidates(R, u: int, v: int, nonstar: bool) -> list[tuple[int, int]]:
    """All bicliques (X, Y) of the residual graph with u in X, v in Y."""
    out = []
    others = R[v] & ~(1 << u)
    pool = list(bits(others))
    for size in range(len(pool) + 1):
        for extra in combinations(pool, size):
            X = 1 << u
            cn = R[u]
            for w in extra:
                X |= 1 << w
                cn &= R[w]
            if nonstar and X.bit_count() < 2:
                continue
            ypool = list(bits(cn & ~(1 << v)))
            for ysize in range(len(ypool) + 1):
                if nonstar and ysize < 1:
                    continue
                for yextra in combinations(ypool, ysize):
                    Y = 1 << v
                    for w in yextra:
                        Y |= 1 << w
                    out.append((X, Y))
    out.sort(key=lambda xy: (-(xy[0].bit_count() * xy[1].bit_count()), xy[0], xy[1]))
    return out


class _PartitionSearch:
    def __init__(self, g: Graph, nonstar: bool, budget: SearchBudget):
        self.n = g.n
        self.nonstar = nonstar
        self.budget = budget
        self.nodes = 0
        self.t0 = time.monotonic()
        self.best: Optional[list] = None
        self.bound = 0
        self.seen: dict = {}
        self.lb_cache: dict = {}

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise BudgetExhausted(f"node budget {self.budget.max_nodes} exhausted")
        if self.nodes & 255 == 0 and time.monotonic() - self.t0 > self.budget.max_seconds:
            raise BudgetExhausted(f"time budget {self.budget.max_seconds}s exhausted")

    def _lb(self, R) -> int:
        lb = self.lb_cache.get(R)
        if lb is None:
            lb = self.lb_cache[R] = inertia_bound(R, self.n)
        return lb

    def run(self, rows, bound: int):
        """Find a partition with fewer than ``bound`` blocks, then keep improving."""
        self.bound = bound
        self._dfs(tuple(rows), [])
        return self.best

    def _dfs(self, R, chosen: list):
        self._tick()
        used = len(chosen)
        u = next((i for i in range(self.n) if R[i]), None)
        if u is None:
            if used < self.bound:
                self.best = list(chosen)
                self.bound = used
            return
        if used + max(self._lb(R), 1) >= self.bound:
            return
        prev = self.seen.get(R)
        if prev is not None and prev <= used:
            return
        self.seen[R] = used
        v = (R[u] & -R[u]).bit_length() - 1
        for X, Y in _candidates(R, u, v, self.nonstar):
            if used + 1 >= self.bound:
                return
            rows = list(R)
            for x in bits(X):
                rows[x] &= ~Y
            for y in bits(Y):
                rows[y] &= ~X
            chosen.append((X, Y))
            self._dfs(tuple(rows), chosen)
            chosen.pop()


def _to_bicliques(blocks) -> list[Biclique]:
    return [Biclique(bits(X), bits(Y)) for X, Y in blocks]


def exact_bp(g: Graph, budget: SearchBudget = SearchBudget()) -> BpResult:
    """Biclique partition number with an optimal certifying partition.

    Raises :class:`BudgetExhausted` carrying the best partition found so far
    (``optimal=False``) when the budget runs out.
    """
    _check_solver_size(g)
    incumbent = star_cover(g, max_independent_set(g))
    lb = eigen_lower_bound(g)
    if lb >= len(incumbent):
        return BpResult(len(incumbent), incumbent, 0, True, lb)
    search = _PartitionSearch(g, nonstar=False, budget=budget)
    try:
        found = search.run(g.adj, len(incumbent))
    except BudgetExhausted as exc:
        best = BicliquePartition(g, _to_bicliques(search.best)) if search.best is not None else incumbent
        exc.result = BpResult(len(best), best, search.nodes, False, lb)
        raise
    best = BicliquePartition(g, _to_bicliques(found)) if found is not None else incumbent
    return BpResult(len(best), best, search.nodes, True, lb)


def _nonstar_blocks(h: Graph, r_max: int, budget: SearchBudget) -> Optional[list[Biclique]]:
    if h.num_edges() == 0:
        return [] if r_max >= 0 else None
    if r_max <= 0:
        return None
    found = _PartitionSearch(h, nonstar=True, budget=budget).run(h.adj, r_max + 1)
    return None if found is None else _to_bicliques(found)


def min_nonstar_partition(h: Graph, r_max: int, budget: SearchBudget = SearchBudget()) -> Optional[int]:
    """Least r <= r_max such that E(h) splits into r bicliques with both sides >= 2."""
    _check_solver_size(h)
    blocks = _nonstar_blocks(h, r_max, budget)
    return None if blocks is None else len(blocks)


def has_special_subgraph(g: Graph, k: int, budget: SearchBudget = SearchBudget()) -> Optional[SpecialWitness]:
    """Search for an induced subgraph on k + r vertices with <= r non-star blocks.

    Tries r = 0, 1, ..., n - k and vertex sets in lexicographic order.  For
    n <= 12 this is exhaustive; ``None`` then means no such subgraph exists.
    """
    _check_solver_size(g)
    if not 0 <= k <= g.n:
        raise ValueError(f"order k={k} outside [0, {g.n}]")
    t0 = time.monotonic()
    nodes = 0
    for r in range(0, g.n - k + 1):
        for S in combinations(range(g.n), k + r):
            nodes += 1
            if nodes > budget.max_nodes or time.monotonic() - t0 > budget.max_seconds:
                raise BudgetExhausted("special-subgraph search budget exhausted")
            h = induced_subgraph(g, S)
            if r == 0:
                if h.num_edges() == 0:
                    return SpecialWitness(k, 0, S, ())
                continue
            blocks = _nonstar_blocks(h, r, budget)
            if blocks is not None:
                mapped = tuple(Biclique([S[x] for x in b.part1], [S[y] for y in b.part2]) for b in blocks)
                return SpecialWitness(k, r, S, mapped)
    return None


def bp_via_special_subgraphs(g: Graph, budget: SearchBudget = SearchBudget()) -> int:
    """bp(g) = n - (largest k admitting a special subgraph of order k)."""
    _check_solver_size(g)
    if g.num_edges() == 0:
        return 0
    k = independence_number(g)  # an independent set is a special subgraph with r = 0
    while k < g.n and has_special_subgraph(g, k + 1, budget) is not None:
        k += 1
    return g.n - k


# ------------------------------------------------------------ induced matchings

def _compatible_edge_rows(h: Graph):
    es = h.edges()
    closed = [h.adj[v] | 1 << v for v in range(h.n)]
    reach = [closed[a] | closed[b] for a, b in es]
    rows = []
    for i, (a, b) in enumerate(es):
        row = 0
        for j, (c, d) in enumerate(es):
            if i != j and not (reach[i] >> c & 1 or reach[i] >> d & 1):
                row |= 1 << j
        rows.append(row)
    return es, rows


def induced_matching_complement(g: Graph, exact: bool = True) -> int:
    """Largest induced matching of the complement (a greedy lower bound if not exact)."""
    h = complement(g)
    es, rows = _compatible_edge_rows(h)
    if not es:
        return 0
    if exact:
        if g.n > 20:
            raise ValueError("exact induced matching limited to n <= 20")
        return max_clique_mask(rows, (1 << len(es)) - 1).bit_count()
    chosen = (1 << len(es)) - 1
    picked = 0
    for i in range(len(es)):
        if chosen >> i & 1:
            picked += 1
            chosen &= rows[i]
    return picked
