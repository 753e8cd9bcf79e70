"""Finite product spaces S^d, cylinders, entry sets and disjoint occurrence.

Outcomes are enumerated in mixed-radix order with coordinate 0 most
significant (the order of ``itertools.product``).  An event is a boolean
numpy vector over that enumeration.  Coordinates are 0-based here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

EXHAUSTIVE_LIMIT = 2 ** 24
PROB_TOL = 1e-12


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ProductSpace:
    alphabet_size: int
    d: int
    weights: np.ndarray  # shape (d, alphabet_size)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.d, self.alphabet_size):
            raise ValueError(f"weights must have shape ({self.d}, {self.alphabet_size})")
        if np.any(w < 0) or np.any(np.abs(w.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("each coordinate's weights must be a probability vector")
        if self.alphabet_size ** self.d > EXHAUSTIVE_LIMIT:
            raise TooLarge(f"|S|^d = {self.alphabet_size ** self.d} exceeds {EXHAUSTIVE_LIMIT}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, alphabet_size: int, d: int) -> "ProductSpace":
        return cls(alphabet_size, d, np.full((d, alphabet_size), 1.0 / alphabet_size))

    @classmethod
    def random(cls, alphabet_size: int, d: int, rng: np.random.Generator) -> "ProductSpace":
        return cls(alphabet_size, d, rng.dirichlet(np.ones(alphabet_size), size=d))

    @property
    def size(self) -> int:
        return self.alphabet_size ** self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.alphabet_size,) * self.d

    def outcome_probs(self) -> np.ndarray:
        p = np.ones(1)
        for i in range(self.d):
            p = np.multiply.outer(p, self.weights[i]).ravel()
        return p

    def index(self, omega: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(omega), self.shape)) if self.d else 0

    def outcomes(self) -> list[tuple[int, ...]]:
        return list(product(range(self.alphabet_size), repeat=self.d))

    def event(self, outcomes: Iterable[Sequence[int]]) -> np.ndarray:
        ev = np.zeros(self.size, dtype=bool)
        for w in outcomes:
            ev[self.index(w)] = True
        return ev

    def event_where(self, predicate) -> np.ndarray:
        return np.array([bool(predicate(w)) for w in self.outcomes()], dtype=bool)

    def probability(self, event: np.ndarray) -> float:
        return float(self.outcome_probs()[np.asarray(event, dtype=bool)].sum())


def _axes(space: ProductSpace, K: Iterable[int]) -> frozenset:
    K = frozenset(K)
    if any(not 0 <= i < space.d for i in K):
        raise ValueError(f"index set {sorted(K)} outside 0..{space.d - 1}")
    return K


def cylinder(space: ProductSpace, omega: Sequence[int], K: Iterable[int]) -> np.ndarray:
    """All outcomes agreeing with ``omega`` on the coordinates in ``K``."""
    K = _axes(space, K)
    grid = np.ones(space.shape, dtype=bool)
    for i in K:
        mask = np.zeros(space.alphabet_size, dtype=bool)
        mask[omega[i]] = True
        shape = [1] * space.d
        shape[i] = space.alphabet_size
        grid &= mask.reshape(shape)
    return grid.ravel()


def entry_set(space: ProductSpace, A: np.ndarray, J: Iterable[int]) -> np.ndarray:
    """[A]_J: outcomes of A whose whole J-cylinder lies in A."""
    J = _axes(space, J)
    free = tuple(i for i in range(space.d) if i not in J)
    grid = np.asarray(A, dtype=bool).reshape(space.shape)
    if free:
        grid = np.broadcast_to(grid.all(axis=free, keepdims=True), space.shape)
    return grid.ravel().copy()


def _all_entry_sets(space: ProductSpace, A: np.ndarray) -> list[np.ndarray]:
    """[A]_J for every J, indexed by the bitmask of J."""
    return [entry_set(space, A, [i for i in range(space.d) if m >> i & 1]) for m in range(1 << space.d)]


def box2(space: ProductSpace, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """A box B: outcomes with some K where Cyl(w, K) is in A and Cyl(w, K^c) is in B."""
    full = (1 << space.d) - 1
    ea, eb = _all_entry_sets(space, A), _all_entry_sets(space, B)
    out = np.zeros(space.size, dtype=bool)
    for K in range(1 << space.d):
        out |= ea[K] & eb[full ^ K]
    return out


def box_many(space: ProductSpace, events: Sequence[np.ndarray], max_tuples: int = 5 ** 8) -> np.ndarray:
    """Union over disjoint J_1..J_r of the intersection of the [A_i]_{J_i}.

    Disjoint tuples are enumerated as colourings of the coordinates with
    colours 0..r-1 plus "unused".
    """
    r = len(events)
    if r < 1:
        raise ValueError("need at least one event")
    if (r + 1) ** space.d > max_tuples:
        raise TooLarge(f"{(r + 1) ** space.d} disjoint index tuples exceed {max_tuples}")
    entries = [_all_entry_sets(space, A) for A in events]
    out = np.zeros(space.size, dtype=bool)
    for colours in product(range(r + 1), repeat=space.d):
        masks = [0] * r
        for coord, c in enumerate(colours):
            if c < r:
                masks[c] |= 1 << coord
        acc = entries[0][masks[0]].copy()
        for i in range(1, r):
            acc &= entries[i][masks[i]]
            if not acc.any():
                break
        out |= acc
    return out


@dataclass
class BkrReport:
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + PROB_TOL


def verify_bkr(space: ProductSpace, events: Sequence[np.ndarray]) -> BkrReport:
    """Exact P(box of events) against the product of the P(A_i)."""
    probs = space.outcome_probs()
    boxed = box2(space, *events) if len(events) == 2 else box_many(space, events)
    rhs = 1.0
    for A in events:
        rhs *= float(probs[A].sum())
    return BkrReport(float(probs[boxed].sum()), rhs)


def random_event(space: ProductSpace, rng: np.random.Generator, density: float | None = None) -> np.ndarray:
    if density is None:
        density = rng.random()
    return rng.random(space.size) < density
