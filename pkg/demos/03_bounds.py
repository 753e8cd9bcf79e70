"""Closed-form quantities behind the result, evaluated in log space."""
import numpy as np

from bplab import numerics as nm

print("p0 =", nm.P0)
for p in (0.2, 0.3, nm.P0, 0.35, 0.45):
    print(f"  root_sign({p:.4f}) = {nm.root_sign(p):+.3e}")

# the first-moment sum only becomes small for very large n
p = 0.25
for e in (10, 16, 24, 32):
    n = 2**e
    k = nm.k_constant(n, p)
    rep = nm.expected_W_bound(n, k, p)
    print(f"n = 2^{e:<2}  k = {k:>3}  log10 E(W) <= {rep.log10_value:8.2f}  (largest term at r = {rep.extra['argmax_r']})")

# above p0 the argument switches to m_p and a geometric sum; k_part2 is O(log n)
# but with a constant so large that it dwarfs n at any size one can sample
for p in np.arange(0.32, 0.50, 0.03):
    print(f"p = {p:.2f}  m_p = {nm.m_p(p):>4}  k_part2(1e6) = {nm.k_part2(10**6, p)}")

a, c = nm.section5_constants(0.4)
print("construction constants at p = 0.4:", a, c, "k(1e6) =", round(nm.k_section5(1e6, 0.4, a, c), 1))
