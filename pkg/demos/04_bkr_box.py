"""Disjoint occurrence on a tiny product space, checked exhaustively."""
import numpy as np

from bplab.bkr import ProductSpace, box2, random_event, verify_bkr

space = ProductSpace.uniform(2, 2)
A = space.event_where(lambda w: w[0] == 1)
B = space.event_where(lambda w: w[1] == 1)
print("A box B =", [w for w, hit in zip(space.outcomes(), box2(space, A, B)) if hit])
print("A box A =", [w for w, hit in zip(space.outcomes(), box2(space, A, A)) if hit])

rng = np.random.default_rng(0)
worst = 0.0
for _ in range(2000):
    sp = ProductSpace.random(2, 4, rng)
    rep = verify_bkr(sp, [random_event(sp, rng), random_event(sp, rng)])
    worst = max(worst, rep.lhs - rep.rhs)
print("largest P(A box B) - P(A)P(B) over 2000 random pairs:", worst)
