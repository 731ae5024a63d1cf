"""Mod-Gaussian fine structure and the large-deviations scaling.

Two candidate centering sequences are implemented; rescaling the cumulant
generating function by the speed log(n/2)/2 separates them sharply: one
converges to the quadratic rate t^2/2, the other diverges linearly.  The
residual against the Barnes-G limiting function is shown under both Gaussian
normalizations (the adjusted one decays like 1/n, the stated one saturates).
"""

import math

from pdvol import (
    LDP_CENTERING,
    MODPHI_CENTERING,
    ModelParams,
    ldp_scaled_cgf,
    mod_gaussian_limit,
    mod_gaussian_residual,
)

print("limiting-function values (Barnes G ratios), typical cell:")
for z in (0.5, 1.0, 2.0):
    print(f"  psi({z}) = {mod_gaussian_limit(-1.0, z):.6f}")
print(f"  psi(2) equals 2/sqrt(pi) = {2 / math.sqrt(math.pi):.6f} exactly")

print("\nscaled cumulant generating function at t = 1 (target 1/2):")
print(f"{'n':>8} {'Stirling-form centering':>24} {'power-log centering':>22}")
for n in (100, 1000, 10000, 100000):
    p = ModelParams(n, -1.0, 1.0)
    a = ldp_scaled_cgf(p, 1.0, MODPHI_CENTERING)
    b = ldp_scaled_cgf(p, 1.0, LDP_CENTERING)
    print(f"{n:>8} {a:>24.4f} {b:>22.1f}")
print("-> exactly one variant satisfies the quadratic-rate limit")

print("\nmod-Gaussian residual, typical cell at z = 1:")
print(f"{'n':>8} {'adjusted x n':>14} {'stated form':>14}")
for n in (100, 1000, 10000):
    p = ModelParams(n, -1.0, 1.0)
    print(f"{n:>8} {mod_gaussian_residual(p, 1.0) * n:>14.4f} "
          f"{mod_gaussian_residual(p, 1.0, adjusted=False):>14.4f}")
sat = mod_gaussian_limit(-1.0, 1.0) * abs(1.0 - math.exp(-0.25))
print(f"-> the stated form saturates at |psi(1)||1 - e^(-1/4)| = {sat:.4f}; the adjusted")
print("   normalization (Gaussian variance parameter shifted by 1/2) decays like 1/n")
