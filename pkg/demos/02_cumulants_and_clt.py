"""Cumulants of the log volume and the high-dimensional Gaussian limit.

Every closed-form cumulant is shown next to an independent finite-difference
oracle; the variance grows like log(n)/2 and the standardized law approaches
the Gaussian with Kolmogorov distance shrinking in n.
"""

import math

from pdvol import (
    ModelParams,
    cumulant_bound,
    cumulant_exact,
    cumulant_fd_oracle,
    kolmogorov_distance_to_normal,
)

p = ModelParams(10, -1.0, 1.0)
print("Cumulants of log V at n = 10 (typical cell), closed form vs oracle:")
print(f"{'m':>3} {'closed form':>16} {'fd oracle':>16} {'|diff|':>10}")
for m in (1, 2, 3, 4):
    e, o = cumulant_exact(p, m), cumulant_fd_oracle(p, m)
    print(f"{m:>3} {e:>16.10f} {o:>16.10f} {abs(e - o):>10.2e}")

print("\nhigher-order cumulants sit below their explicit bound:")
for m in (3, 5, 8):
    print(f"  m = {m}: |c_m| = {abs(cumulant_exact(p, m)):.3e} <= {cumulant_bound(p, m):.3e}")

print("\nVariance growth (should track log(n)/2):")
for n in (10, 100, 1000, 10000):
    c2 = cumulant_exact(ModelParams(n, -1.0, 1.0), 2)
    print(f"  n = {n:>6}: Var = {c2:.4f}   log(n)/2 = {0.5 * math.log(n):.4f}   ratio {c2 / (0.5 * math.log(n)):.3f}")

print("\nKolmogorov distance of the standardized log volume to the Gaussian:")
for n in (10, 100, 1000):
    d = kolmogorov_distance_to_normal(ModelParams(n, -1.0, 1.0))
    print(f"  n = {n:>5}: d_n = {d:.5f}   d_n * sqrt(log n) = {d * math.sqrt(math.log(n)):.5f}")
print("(the product keeps shrinking: the distance decays faster than the "
      "1/sqrt(log n) guarantee)")
