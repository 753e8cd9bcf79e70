"""Bicliques, biclique partitions, and the special-subgraph certificate.

A biclique is stored as two disjoint vertex sets; its edges are all the
cross pairs.  A partition is valid when the blocks' edge sets are pairwise
disjoint, lie inside the host graph, and together cover every host edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .graphcore import Graph, bits, induced_subgraph, to_mask


class NotIndependent(ValueError):
    pass


class InvalidPartition(ValueError):
    pass


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Biclique:
    part1: frozenset
    part2: frozenset

    def __init__(self, part1: Iterable[int], part2: Iterable[int]):
        a, b = frozenset(part1), frozenset(part2)
        if not a or not b:
            raise ValueError("biclique parts must be nonempty")
        if a & b:
            raise ValueError("biclique parts must be disjoint")
        object.__setattr__(self, "part1", a)
        object.__setattr__(self, "part2", b)

    def edges(self) -> set[tuple[int, int]]:
        return {_pair(u, v) for u in self.part1 for v in self.part2}

    def num_edges(self) -> int:
        return len(self.part1) * len(self.part2)

    @property
    def vertices(self) -> frozenset:
        return self.part1 | self.part2

    def to_dict(self) -> dict:
        return {"a": sorted(self.part1), "b": sorted(self.part2)}

    @classmethod
    def from_dict(cls, d: dict) -> "Biclique":
        return cls(d["a"], d["b"])


def is_star(b: Biclique) -> bool:
    return min(len(b.part1), len(b.part2)) == 1


def base_sets(b: Biclique) -> list[frozenset]:
    """The part(s) of minimum size; both parts when the biclique is balanced."""
    s1, s2 = len(b.part1), len(b.part2)
    if s1 < s2:
        return [b.part1]
    if s2 < s1:
        return [b.part2]
    return [b.part1, b.part2]


@dataclass(frozen=True)
class BicliquePartition:
    host: Graph
    blocks: tuple[Biclique, ...]

    def __init__(self, host: Graph, blocks: Iterable[Biclique]):
        object.__setattr__(self, "host", host)
        object.__setattr__(self, "blocks", tuple(blocks))

    def __len__(self):
        return len(self.blocks)

    def to_dict(self) -> dict:
        return {"blocks": [b.to_dict() for b in self.blocks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class ValidityReport:
    non_edges: list[tuple[int, int]] = field(default_factory=list)
    doubly_covered: list[tuple[int, int]] = field(default_factory=list)
    uncovered: list[tuple[int, int]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.non_edges or self.doubly_covered or self.uncovered)

    def __bool__(self):
        return self.valid


def validate_partition(p: BicliquePartition) -> ValidityReport:
    report = ValidityReport()
    seen: set[tuple[int, int]] = set()
    doubled: set[tuple[int, int]] = set()
    bad: set[tuple[int, int]] = set()
    for b in p.blocks:
        for e in b.edges():
            if not (max(e) < p.host.n and p.host.has_edge(*e)):
                bad.add(e)
            elif e in seen:
                doubled.add(e)
            seen.add(e)
    report.non_edges = sorted(bad)
    report.doubly_covered = sorted(doubled)
    report.uncovered = sorted(set(p.host.edges()) - seen)
    return report


def star_cover(g: Graph, independent: Iterable[int]) -> BicliquePartition:
    """Stars centred at the vertices outside ``independent``, ascending by id.

    Each centre takes its edges into the independent set and to later centres;
    empty stars are left out.
    """
    ind = to_mask(independent)
    if ind >> g.n:
        raise NotIndependent("independent set references vertices outside the graph")
    for v in bits(ind):
        if g.adj[v] & ind:
            raise NotIndependent(f"vertex {v} has a neighbour inside the given set")
    blocks = []
    remaining = ((1 << g.n) - 1) & ~ind
    for c in range(g.n):
        if ind >> c & 1:
            continue
        remaining &= ~(1 << c)
        leaves = g.adj[c] & (ind | remaining)
        if leaves:
            blocks.append(Biclique([c], bits(leaves)))
    return BicliquePartition(g, blocks)


@dataclass(frozen=True)
class SpecialWitness:
    """Vertex set of size ``k + r`` whose induced edges split into <= r non-star bicliques.

    ``vertices`` and block members are labels in the host graph.
    """

    k: int
    r: int
    vertices: tuple[int, ...]
    blocks: tuple[Biclique, ...]

    def check(self, g: Graph) -> bool:
        if len(self.vertices) != self.k + self.r or len(self.blocks) > self.r:
            return False
        if any(is_star(b) for b in self.blocks):
            return False
        vs = sorted(self.vertices)
        if any(not b.vertices <= set(vs) for b in self.blocks):
            return False
        pos = {v: i for i, v in enumerate(vs)}
        h = induced_subgraph(g, vs)
        relabelled = [Biclique([pos[v] for v in b.part1], [pos[v] for v in b.part2]) for b in self.blocks]
        return validate_partition(BicliquePartition(h, relabelled)).valid

    def to_dict(self) -> dict:
        return {
            "blocks": [b.to_dict() for b in self.blocks],
            "vertices": list(self.vertices),
            "k": self.k,
            "r": self.r,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpecialWitness":
        return cls(d["k"], d["r"], tuple(d["vertices"]), tuple(Biclique.from_dict(b) for b in d["blocks"]))


def _center(b: Biclique) -> int:
    sides = [s for s in (b.part1, b.part2) if len(s) == 1]
    return min(next(iter(s)) for s in sides)


def star_peel(p: BicliquePartition) -> SpecialWitness:
    """Turn a partition with ``b`` blocks into a special subgraph of order ``n - b``.

    Repeatedly deletes the centre of the star block with the smallest centre
    id.  Deleting a vertex strips it from every block, so blocks may shrink
    into stars (and get peeled later) or vanish.
    """
    if not validate_partition(p).valid:
        raise InvalidPartition("star_peel needs a valid partition")
    g = p.host
    order = g.n - len(p.blocks)
    blocks = [(set(b.part1), set(b.part2)) for b in p.blocks]
    alive = set(range(g.n))
    while True:
        stars = [Biclique(a, b) for a, b in blocks if min(len(a), len(b)) == 1]
        if not stars:
            break
        c = min(_center(s) for s in stars)
        alive.discard(c)
        for a, b in blocks:
            a.discard(c)
            b.discard(c)
        blocks = [(a, b) for a, b in blocks if a and b]
    vertices = tuple(sorted(alive))
    out = tuple(Biclique(a, b) for a, b in blocks)
    return SpecialWitness(order, len(vertices) - order, vertices, out)


def partition_to_json(p: BicliquePartition, **extra) -> str:
    d = p.to_dict()
    d.update(extra)
    return json.dumps(d, sort_keys=True)
