import json
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bplab.bicliques import (Biclique, BicliquePartition, InvalidPartition, NotIndependent, SpecialWitness,
                             base_sets, is_star, star_cover, star_peel, validate_partition)
from bplab.graphcore import GnpSpec, Graph, complete_bipartite, cycle, sample_gnp
from bplab.solver import exact_bp, max_independent_set


def brute_alpha(g):
    for size in range(g.n, -1, -1):
        if any(g.is_independent(s) for s in combinations(range(g.n), size)):
            return size


def test_biclique_invariants():
    with pytest.raises(ValueError):
        Biclique([], [1])
    with pytest.raises(ValueError):
        Biclique([0, 1], [1, 2])


def test_validate_examples():
    k23 = complete_bipartite(2, 3)
    assert validate_partition(BicliquePartition(k23, [Biclique([0, 1], [2, 3, 4])])).valid

    k3 = Graph.complete(3)
    assert validate_partition(BicliquePartition(k3, [Biclique([0], [1, 2]), Biclique([1], [2])])).valid

    c4 = cycle(4)  # edges 01 12 23 03
    rep = validate_partition(BicliquePartition(c4, [Biclique([1], [0, 2]), Biclique([0], [1, 3])]))
    assert not rep.valid
    assert rep.doubly_covered == [(0, 1)]
    assert rep.uncovered == [(2, 3)]


def test_validate_reports_non_edges():
    rep = validate_partition(BicliquePartition(cycle(4), [Biclique([0], [2])]))
    assert rep.non_edges == [(0, 2)]


def test_is_star_examples():
    assert is_star(Biclique([0], [1, 2, 3, 4, 5]))
    assert not is_star(Biclique([0, 1], [2, 3]))
    assert is_star(Biclique([0, 1], [2]))


def test_base_sets_examples():
    assert base_sets(Biclique([0, 1], [2, 3, 4])) == [frozenset({0, 1})]
    assert base_sets(Biclique([0, 1], [2, 3])) == [frozenset({0, 1}), frozenset({2, 3})]
    assert base_sets(Biclique([0], [1, 2, 3, 4])) == [frozenset({0})]


@given(st.integers(1, 6), st.integers(1, 6))
def test_base_sets_minimal(a, b):
    res = base_sets(Biclique(range(a), range(a, a + b)))
    assert len(res) in (1, 2)
    assert all(len(s) == min(a, b) for s in res)


def test_star_cover_examples():
    assert len(star_cover(Graph.complete(3), [0])) == 2
    c5 = cycle(5)
    p = star_cover(c5, [0, 2])
    assert validate_partition(p).valid and len(p) <= 3
    assert len(star_cover(Graph.empty(4), range(4))) == 0
    with pytest.raises(NotIndependent):
        star_cover(c5, [0, 1])


def test_star_cover_on_random_graphs():
    for seed in range(150):
        g = sample_gnp(GnpSpec(8, 0.4, seed))
        ind = max_independent_set(g)
        assert len(ind) == brute_alpha(g)
        p = star_cover(g, ind)
        assert validate_partition(p).valid
        assert all(is_star(b) for b in p.blocks)
        nonempty_centres = [c for c in range(g.n) if c not in ind and g.degree(c) > 0
                            and any(u in ind or u > c for u in g.neighbors(c))]
        assert len(p) == len(nonempty_centres) <= g.n - len(ind)


def test_star_peel_examples():
    w = star_peel(star_cover(Graph.complete(4), [3]))
    assert (w.k, w.r, w.vertices, w.blocks) == (1, 0, (3,), ())

    c4 = cycle(4)
    w = star_peel(BicliquePartition(c4, [Biclique([0, 2], [1, 3])]))
    assert (w.k, w.r, len(w.blocks)) == (3, 1, 1) and w.vertices == (0, 1, 2, 3)
    assert w.check(c4)

    w = star_peel(BicliquePartition(Graph.empty(5), []))
    assert (w.k, w.r, w.vertices) == (5, 0, (0, 1, 2, 3, 4))


def test_star_peel_rejects_invalid():
    with pytest.raises(InvalidPartition):
        star_peel(BicliquePartition(cycle(4), [Biclique([0], [1])]))


def test_star_peel_cascades():
    # K_{2,2} on {0,1}x{2,3} plus the star 0-4: deleting 0 turns the K_{2,2} into a star
    g = Graph.from_edges(5, [(0, 2), (0, 3), (1, 2), (1, 3), (0, 4)])
    p = BicliquePartition(g, [Biclique([0, 1], [2, 3]), Biclique([0], [4])])
    w = star_peel(p)
    assert w.k == 3 and w.check(g)
    assert w.blocks == ()


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.2, 0.4, 0.6]))
def test_star_peel_on_optimal_partitions(seed, p):
    g = sample_gnp(GnpSpec(7, p, seed))
    part = exact_bp(g).witness
    w = star_peel(part)
    assert w.k == g.n - len(part.blocks)
    assert w.check(g)


def test_witness_json_round_trip():
    w = star_peel(BicliquePartition(cycle(4), [Biclique([0, 2], [1, 3])]))
    d = json.loads(json.dumps(w.to_dict()))
    assert set(d) == {"blocks", "vertices", "k", "r"}
    assert d["blocks"] == [{"a": [0, 2], "b": [1, 3]}]
    assert SpecialWitness.from_dict(d) == w


def test_witness_check_rejects_stars_and_size():
    c4 = cycle(4)
    assert not SpecialWitness(3, 1, (0, 1, 2, 3), (Biclique([0], [1, 3]),)).check(c4)
    assert not SpecialWitness(2, 1, (0, 1, 2, 3), (Biclique([0, 2], [1, 3]),)).check(c4)
