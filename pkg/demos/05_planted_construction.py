"""Plant a paired bipartite subgraph, find it again, and turn it into a partition."""
from bplab.bicliques import validate_partition
from bplab.construct import FkParams, check_fk, fk_decomposition, plant_fkprime, search_fkprime
from bplab.solver import exact_bp

g, planted = plant_fkprime(n=12, p=0.4, k=8, r=2, seed=7)
print("planted:", planted.to_dict())

w = search_fkprime(g, FkParams(8, 2), seed=0)
print("found:  ", w.to_dict(), "regular:", check_fk(g, w))

part = fk_decomposition(g, w)
print(len(part.blocks), "blocks, valid =", validate_partition(part).valid,
      "| bound n - k + r =", g.n - w.k + w.r, "| exact bp =", exact_bp(g).value)
