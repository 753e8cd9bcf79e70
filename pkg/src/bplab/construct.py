"""Paired-bipartite induced subgraphs and the biclique partitions they give.

A witness is a vertex set ``K`` split into pairs ``A_1..A_r`` and a rest
``B``.  It is *admissible* (the F_k' family) when ``G[K]`` is bipartite
between ``A`` and ``B`` and every ``b in B`` sees both or neither vertex of
each pair.  Then ``G[K]`` is the edge-disjoint union of the bicliques
``(A_i, N_B(A_i))``, and stars on the remaining vertices finish a partition
of ``G`` with at most ``n - k + r`` blocks.  The *regular* family (F_k) adds
a minimum degree for pair vertices and pairwise-distinct pair neighbourhoods.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bicliques import Biclique, BicliquePartition
from .graphcore import Graph, bits, complement, to_mask
from .solver import BudgetExhausted, SearchBudget, max_clique_mask

DEGREE_FRACTION = 0.15
SYMDIFF_FRACTION = 0.25


class MalformedWitness(ValueError):
    pass


class NotInFkPrime(ValueError):
    pass


def even_round(x: float) -> int:
    """Nearest even integer to ``x`` (ties go up)."""
    return 2 * int(np.floor(x / 2.0 + 0.5))


@dataclass(frozen=True)
class FkParams:
    k: int
    r: int
    a: float = 0.0
    c: float = 0.0
    generalized: bool = True

    def __post_init__(self):
        if not self.k >= 2 * self.r >= 2:
            raise ValueError(f"need k >= 2r >= 2, got k={self.k}, r={self.r}")
        if not self.generalized and 2 * self.r != even_round(self.a * self.k):
            raise ValueError(f"strict mode needs |A| = 2r = round(a k) = {even_round(self.a * self.k)}")

    @classmethod
    def strict(cls, k: int, a: float, c: float) -> "FkParams":
        """Parameters tied to |A| = a k rounded to an even size."""
        return cls(k, even_round(a * k) // 2, a, c, generalized=False)

    @property
    def b_size(self) -> int:
        return self.k - 2 * self.r


@dataclass(frozen=True)
class FkWitness:
    K: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    B: tuple[int, ...]

    @property
    def A(self) -> tuple[int, ...]:
        return tuple(sorted(v for pr in self.pairs for v in pr))

    @property
    def k(self) -> int:
        return len(self.K)

    @property
    def r(self) -> int:
        return len(self.pairs)

    def to_dict(self) -> dict:
        return {"K": list(self.K), "pairs": [list(p) for p in self.pairs], "B": list(self.B)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "FkWitness":
        return cls(tuple(d["K"]), tuple(tuple(p) for p in d["pairs"]), tuple(d["B"]))


def _check_shape(g: Graph, w: FkWitness):
    flat = [v for pr in w.pairs for v in pr]
    if any(len(pr) != 2 for pr in w.pairs):
        raise MalformedWitness("every pair must have two vertices")
    if len(set(flat)) != len(flat):
        raise MalformedWitness("pairs must be disjoint")
    A, B, K = set(flat), set(w.B), set(w.K)
    if len(B) != len(w.B) or len(K) != len(w.K):
        raise MalformedWitness("repeated vertices")
    if A & B or A | B != K:
        raise MalformedWitness("A and B must split K")
    if any(not 0 <= v < g.n for v in K):
        raise MalformedWitness("witness vertex outside the graph")


def pair_neighbourhood(g: Graph, w: FkWitness, i: int) -> int:
    """Bitmask of B-vertices adjacent to pair i (meaningful once admissible)."""
    x, _ = w.pairs[i]
    return g.adj[x] & to_mask(w.B)


def check_fkprime(g: Graph, w: FkWitness) -> bool:
    _check_shape(g, w)
    A, B = to_mask(w.A), to_mask(w.B)
    if any(g.adj[v] & A for v in bits(A)) or any(g.adj[v] & B for v in bits(B)):
        return False
    return all((g.adj[x] ^ g.adj[y]) & B == 0 for x, y in w.pairs)


def fk_condition_values(g: Graph, w: FkWitness) -> tuple[list[int], list[int]]:
    """Pair-vertex degrees into B and pairwise neighbourhood symmetric differences."""
    nbhd = [pair_neighbourhood(g, w, i) for i in range(w.r)]
    degrees = [m.bit_count() for m in nbhd for _ in range(2)]
    diffs = [(nbhd[i] ^ nbhd[j]).bit_count() for i in range(w.r) for j in range(i + 1, w.r)]
    return degrees, diffs


def check_fk(g: Graph, w: FkWitness) -> bool:
    if not check_fkprime(g, w):
        raise NotInFkPrime("witness is not admissible")
    degrees, diffs = fk_condition_values(g, w)
    k = w.k
    return all(d >= DEGREE_FRACTION * k for d in degrees) and all(s >= SYMDIFF_FRACTION * k for s in diffs)


def fk_decomposition(g: Graph, w: FkWitness) -> BicliquePartition:
    """Pair bicliques on K, then stars centred outside K in ascending order."""
    if not check_fkprime(g, w):
        raise NotInFkPrime("witness is not admissible")
    blocks = []
    for i, pr in enumerate(w.pairs):
        nb = pair_neighbourhood(g, w, i)
        if nb:
            blocks.append(Biclique(pr, bits(nb)))
    K = to_mask(w.K)
    later = ((1 << g.n) - 1) & ~K
    for c in range(g.n):
        if K >> c & 1:
            continue
        later &= ~(1 << c)
        leaves = g.adj[c] & (K | later)
        if leaves:
            blocks.append(Biclique([c], bits(leaves)))
    return BicliquePartition(g, blocks)


def search_fkprime(g: Graph, params: FkParams, seed: int = 0,
                   budget: SearchBudget = SearchBudget(max_nodes=200_000, max_seconds=30.0)) -> Optional[FkWitness]:
    """Backtracking search for an admissible witness with the given (k, r).

    Candidate pairs (non-adjacent) are tried in order of decreasing twin-set
    size, ties broken by a seeded shuffle.  After r pairs are fixed, B is an
    independent set of size k - 2r inside the vertices that are twins for
    every pair.  ``None`` means nothing was found, not that nothing exists;
    an exhausted budget raises :class:`BudgetExhausted`.
    """
    n = g.n
    full = (1 << n) - 1
    need_b = params.b_size
    rng = np.random.default_rng(seed)
    comp = complement(g).adj

    def twins(x, y):
        return ~(g.adj[x] ^ g.adj[y]) & full & ~(1 << x | 1 << y)

    pairs = [(x, y) for x in range(n) for y in range(x + 1, n) if not g.adj[x] >> y & 1]
    tw = {pr: twins(*pr) for pr in pairs}
    tie = rng.permutation(len(pairs))
    pairs = [pairs[i] for i in sorted(range(len(pairs)), key=lambda i: (-tw[pairs[i]].bit_count(), tie[i]))]

    nodes = 0
    t0 = time.monotonic()

    def tick():
        nonlocal nodes
        nodes += 1
        if nodes > budget.max_nodes or (nodes & 63 == 0 and time.monotonic() - t0 > budget.max_seconds):
            raise BudgetExhausted("fk search budget exhausted")

    def grow(start: int, chosen: list, A: int, nbA: int, pool: int):
        tick()
        if len(chosen) == params.r:
            cand = pool & ~A
            if cand.bit_count() < need_b:
                return None
            if need_b == 0:
                return 0
            B = max_clique_mask(comp, cand, target=need_b)
            return B if B.bit_count() >= need_b else None
        for idx in range(start, len(pairs)):
            x, y = pairs[idx]
            bit = 1 << x | 1 << y
            if A & bit or nbA & bit:
                continue
            new_pool = pool & tw[(x, y)] & ~bit
            if (new_pool & ~A).bit_count() < need_b:
                continue
            chosen.append((x, y))
            B = grow(idx + 1, chosen, A | bit, nbA | g.adj[x] | g.adj[y], new_pool)
            if B is not None:
                return B
            chosen.pop()
        return None

    chosen: list = []
    B = grow(0, chosen, 0, 0, full)
    if B is None:
        return None
    Bv = tuple(bits(B))[:need_b]
    K = tuple(sorted(set(Bv) | {v for pr in chosen for v in pr}))
    return FkWitness(K, tuple(chosen), Bv)


def plant_fkprime(n: int, p: float, k: int, r: int, seed: int) -> tuple[Graph, FkWitness]:
    """G(n, p) with an admissible witness planted on a random k-set, labels shuffled.

    Pair/B adjacencies are drawn with the conditional probability
    p^2 / ((1-p)^2 + p^2) of "both" given "both or neither".
    """
    if not k >= 2 * r >= 2 or k > n:
        raise ValueError("need n >= k >= 2r >= 2")
    rng = np.random.default_rng(seed)
    a = rng.random((n, n)) < p
    a = np.triu(a, 1)
    a = a | a.T
    K = rng.choice(n, size=k, replace=False)
    A, B = K[: 2 * r], K[2 * r:]
    a[np.ix_(K, K)] = False
    q = p * p / ((1 - p) ** 2 + p * p)
    for i in range(r):
        x, y = A[2 * i], A[2 * i + 1]
        for b in B:
            if rng.random() < q:
                a[x, b] = a[b, x] = a[y, b] = a[b, y] = True
    np.fill_diagonal(a, False)
    perm = rng.permutation(n)
    shuffled = np.zeros_like(a)
    shuffled[np.ix_(perm, perm)] = a
    g = Graph.from_matrix(shuffled)
    pairs = tuple(tuple(sorted((int(perm[A[2 * i]]), int(perm[A[2 * i + 1]])))) for i in range(r))
    Bv = tuple(sorted(int(perm[b]) for b in B))
    return g, FkWitness(tuple(sorted(Bv + tuple(v for pr in pairs for v in pr))), pairs, Bv)


def conditional_fk_rate(k: int, r: int, p: float, trials: int, seed: int) -> float:
    """Fraction of conditioned admissible fillings on k vertices that are regular.

    Pairs are ``(0,1), (2,3), ...``; B is the rest; each (pair, b) is
    adjacent with probability p^2 / ((1-p)^2 + p^2).
    """
    rng = np.random.default_rng(seed)
    q = p * p / ((1 - p) ** 2 + p * p)
    pairs = tuple((2 * i, 2 * i + 1) for i in range(r))
    B = tuple(range(2 * r, k))
    w = FkWitness(tuple(range(k)), pairs, B)
    hits = 0
    for _ in range(trials):
        fill = rng.random((r, len(B))) < q
        edges = [(v, b) for i, pr in enumerate(pairs) for j, b in enumerate(B) if fill[i, j] for v in pr]
        if check_fk(Graph.from_edges(k, edges), w):
            hits += 1
    return hits / trials
