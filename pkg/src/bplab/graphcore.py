"""Dense simple graphs with bitset rows, seeded G(n, p) sampling and text I/O.

Vertices are ``0..n-1``; ``adj[v]`` is an int whose bit ``u`` is set iff
``u ~ v``.  Graphs are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

SOLVER_MAX_N = 64
GRAPH6_MAX_N = 62


class GraphFormatError(ValueError):
    """Malformed graph text; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency must have one row per vertex")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"row {v} references a vertex >= n")
            if row >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency {v}-{u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def from_matrix(cls, a) -> "Graph":
        a = np.asarray(a)
        n = a.shape[0]
        return cls.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if a[i, j]])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def to_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def is_independent(self, vertices: Iterable[int]) -> bool:
        m = to_mask(vertices)
        return all(self.adj[v] & m == 0 for v in bits(m))


@dataclass(frozen=True)
class GnpSpec:
    n: int
    p: float
    seed: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


def sample_gnp(spec: GnpSpec) -> Graph:
    """Sample G(n, p) reproducibly.

    Uses numpy's PCG64 seeded with ``spec.seed`` and draws exactly one 53-bit
    uniform per unordered pair ``(i, j)``, ``i < j``, in lexicographic order;
    the pair is an edge iff the draw is ``< p``.
    """
    n = spec.n
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    draws = rng.random(n * (n - 1) // 2)
    hit = draws < spec.p
    rows = [0] * n
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if hit[idx]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            idx += 1
    return Graph(n, tuple(rows))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full ^ row ^ (1 << v) for v, row in enumerate(g.adj)))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph on ``vertices`` relabelled ``0..|s|-1`` in ascending order."""
    vs = sorted(set(vertices))
    for v in vs:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    pos = {v: i for i, v in enumerate(vs)}
    rows = []
    for v in vs:
        rows.append(to_mask(pos[u] for u in bits(g.adj[v]) if u in pos))
    return Graph(len(vs), tuple(rows))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    rows = list(g.adj) + [row << g.n for row in h.adj]
    return Graph(g.n + h.n, tuple(rows))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cocktail_party(ell: int) -> Graph:
    """K_{2l} minus the perfect matching {2i, 2i+1}."""
    n = 2 * ell
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if u // 2 != v // 2])


# ---------------------------------------------------------------- text formats

def _serialize_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def _parse_edge_list(text: str) -> Graph:
    data = text.encode()
    offset = 0
    n = None
    edges = []
    for raw in data.splitlines(keepends=True):
        line = raw.split(b"#", 1)[0].strip()
        if line:
            fields = line.split()
            try:
                nums = [int(f) for f in fields]
            except ValueError:
                raise GraphFormatError(f"non-integer token in line {raw!r}", offset) from None
            if n is None:
                if len(nums) != 1 or nums[0] < 0:
                    raise GraphFormatError("first line must hold the vertex count", offset)
                n = nums[0]
            else:
                if len(nums) != 2:
                    raise GraphFormatError("edge line must hold two vertex ids", offset)
                u, v = nums
                if not (0 <= u < n and 0 <= v < n) or u == v:
                    raise GraphFormatError(f"invalid edge {u} {v} for n={n}", offset)
                edges.append((u, v))
        offset += len(raw)
    if n is None:
        raise GraphFormatError("missing vertex count", 0)
    return Graph.from_edges(n, edges)


def _serialize_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 writer supports n <= {GRAPH6_MAX_N}")
    out = [chr(g.n + 63)]
    bitseq = [g.adj[i] >> j & 1 for j in range(1, g.n) for i in range(j)]
    bitseq += [0] * (-len(bitseq) % 6)
    for k in range(0, len(bitseq), 6):
        val = 0
        for b in bitseq[k:k + 6]:
            val = val << 1 | b
        out.append(chr(val + 63))
    return "".join(out)


def _parse_graph6(text: str) -> Graph:
    data = text.strip().encode()
    start = 0
    if data.startswith(b">>graph6<<"):
        start = 10
    if len(data) <= start:
        raise GraphFormatError("empty graph6 string", start)
    n = data[start] - 63
    if not 0 <= n <= GRAPH6_MAX_N:
        raise GraphFormatError(f"graph6 vertex count byte out of range (n <= {GRAPH6_MAX_N})", start)
    nbits = n * (n - 1) // 2
    body = data[start + 1:]
    need = -(-nbits // 6)
    if len(body) != need:
        raise GraphFormatError(f"expected {need} data bytes, found {len(body)}", start + 1 + min(len(body), need))
    bitseq = []
    for i, c in enumerate(body):
        if not 63 <= c <= 126:
            raise GraphFormatError(f"byte {c} outside graph6 range", start + 1 + i)
        val = c - 63
        bitseq.extend(val >> s & 1 for s in range(5, -1, -1))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bitseq[k]:
                edges.append((i, j))
            k += 1
    if any(bitseq[nbits:]):
        raise GraphFormatError("nonzero padding bits", len(data) - 1)
    return Graph.from_edges(n, edges)


def parse_graph(text: str, format: str = "edge-list") -> Graph:
    if format == "edge-list":
        return _parse_edge_list(text)
    if format == "graph6":
        return _parse_graph6(text)
    raise ValueError(f"unknown graph format {format!r}")


def serialize_graph(g: Graph, format: str = "edge-list") -> str:
    if format == "edge-list":
        return _serialize_edge_list(g)
    if format == "graph6":
        return _serialize_graph6(g)
    raise ValueError(f"unknown graph format {format!r}")
