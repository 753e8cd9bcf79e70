"""Exact biclique partitions of a few small graphs, and how they compare with
the two cheap bounds: the spectral inertia bound from below and the star
cover n - alpha from above.
"""
from bplab import exact_bp, eigen_lower_bound, max_independent_set, star_peel
from bplab.graphcore import Graph, cocktail_party, cycle, complete_bipartite

graphs = {
    "K_5": Graph.complete(5),
    "C_5": cycle(5),
    "C_6": cycle(6),
    "K_{3,3}": complete_bipartite(3, 3),
    "octahedron": cocktail_party(3),
}

for name, g in graphs.items():
    res = exact_bp(g)
    alpha = len(max_independent_set(g))
    print(f"{name:>11}: {eigen_lower_bound(g)} <= bp = {res.value} <= n - alpha = {g.n - alpha}")

# the optimal partition of the octahedron uses two K_{2,2}'s, neither a star
res = exact_bp(cocktail_party(3))
for block in res.witness.blocks:
    print(sorted(block.part1), "x", sorted(block.part2))

# peeling stars off an optimal partition leaves the certificate behind bp <= n - k
w = star_peel(res.witness)
print("special subgraph of order", w.k, "on", w.vertices, "with", len(w.blocks), "non-star blocks")
