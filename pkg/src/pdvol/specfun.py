"""Special-function kernel: log-gamma, digamma, polygamma, log Barnes G,
regularized incomplete gamma and unit-ball volumes.

Everything downstream (exact moment formulas, cumulants, characteristic
functions, limiting functions) is evaluated through this module.  The gamma
family is delegated to scipy.special; the Barnes G-function, which scipy does
not provide, is evaluated from its Taylor series at 1+z, the functional
equation G(z+1) = Gamma(z) G(z), and a Bernoulli asymptotic series anchored at
the Glaisher-Kinkelin constant.  All functions are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import DomainError

__all__ = [
    "EvalPrecision",
    "DEFAULT_PRECISION",
    "log_gamma",
    "digamma",
    "polygamma",
    "log_barnes_g",
    "log_barnes_g_shift_asymptotic",
    "reg_lower_incomplete_gamma",
    "log_unit_ball_volume",
    "log_unit_sphere_area",
]


@dataclass(frozen=True)
class EvalPrecision:
    """Tolerances and truncation caps for series evaluation."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_terms: int = 10**6

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("EvalPrecision: tolerances must be positive")
        if self.max_terms < 16:
            raise DomainError("EvalPrecision: max_terms must be >= 16")


DEFAULT_PRECISION = EvalPrecision()

# log of the Glaisher-Kinkelin constant A = 1.2824271291...
_LN_GLAISHER = 0.24875447713391599274
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Bernoulli numbers B_4, B_6, B_8, B_10 for the Barnes asymptotic tail.
_BERNOULLI = {4: -1.0 / 30.0, 6: 1.0 / 42.0, 8: -1.0 / 30.0, 10: 5.0 / 66.0}


def _is_pole(x) -> bool:
    return x <= 0 and float(x) == round(float(x))


def log_gamma(z):
    """Principal-branch log Gamma.

    Real arguments must be positive (the negative real axis is out of scope);
    complex arguments are accepted anywhere off the poles 0, -1, -2, ...
    Satisfies log_gamma(z+1) = log_gamma(z) + log(z).
    """
    arr = np.asarray(z)
    if np.iscomplexobj(arr):
        carr = arr.astype(complex)
        real_axis = carr.imag == 0
        if np.any(real_axis & (carr.real <= 0) & (carr.real == np.rint(carr.real))):
            raise DomainError("log_gamma: argument is a pole of Gamma (0, -1, -2, ...)")
        out = sp.loggamma(carr)
        return complex(out) if arr.ndim == 0 else out
    farr = arr.astype(float)
    if np.any(farr <= 0.0):
        raise DomainError("log_gamma: real argument must be positive")
    out = sp.gammaln(farr)
    return float(out) if arr.ndim == 0 else out


def digamma(x):
    """psi(x) = d/dx log Gamma(x) for x > 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("digamma: argument must be positive")
    out = sp.digamma(arr)
    return float(out) if arr.ndim == 0 else out


def polygamma(m: int, x):
    """psi^(m)(x), the m-th derivative of digamma, for m >= 1 and x > 0."""
    if m < 1 or m != int(m):
        raise DomainError("polygamma: order m must be an integer >= 1 (use digamma for m = 0)")
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("polygamma: argument must be positive")
    out = sp.polygamma(int(m), arr)
    return float(out) if arr.ndim == 0 else out


def _log_barnes_g_series(z: float, precision: EvalPrecision) -> float:
    # Taylor series of log G(1+z) around 0, |z| <= 0.5:
    #   z (log(2 pi) - 1)/2 - (1 + gamma) z^2/2 + sum_{k>=3} (-1)^(k-1) zeta(k-1) z^k / k
    total = z * (math.log(2.0 * math.pi) - 1.0) / 2.0 - (1.0 + np.euler_gamma) * z * z / 2.0
    zk = z * z
    for k in range(3, precision.max_terms):
        zk *= z
        term = ((-1.0) ** (k - 1)) * sp.zeta(k - 1) * zk / k
        total += term
        if abs(term) < 0.01 * precision.abs_tol:
            return total
    raise DomainError("log_barnes_g: series did not converge within max_terms")


def _log_barnes_g_asymptotic(x: float) -> float:
    # log G(z+1) for z = x-1 via z^2/4 + z log Gamma(z+1)
    #   - (z(z+1)/2 + 1/12) log z - log A + Bernoulli tail; machine precision for x >= 15.
    z = x - 1.0
    lz = math.log(z)
    s = z * z / 4.0 + z * math.lgamma(z + 1.0) - (z * (z + 1.0) / 2.0 + 1.0 / 12.0) * lz - _LN_GLAISHER
    for k in (1, 2, 3, 4):
        s += _BERNOULLI[2 * k + 2] / (2 * k * (2 * k + 1) * (2 * k + 2) * z ** (2 * k))
    return s


def log_barnes_g(x: float, precision: EvalPrecision = DEFAULT_PRECISION) -> float:
    """log G(x) for x > 0, with G the Barnes function, G(z+1) = Gamma(z) G(z).

    G(1) = G(2) = G(3) = 1.  Evaluation: asymptotic series for x >= 15,
    otherwise the Taylor series at a base point in [0.5, 1.5) plus the
    functional equation.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError("log_barnes_g: argument must be positive")
    if x >= 15.0:
        return _log_barnes_g_asymptotic(x)
    shift = 0.0
    b = x
    while b < 0.5:
        # G(b) = G(b+1)/Gamma(b)
        shift -= math.lgamma(b)
        b += 1.0
    climbs = []
    while b >= 1.5:
        b -= 1.0
        climbs.append(math.lgamma(b))
    return _log_barnes_g_series(b - 1.0, precision) + shift + math.fsum(climbs)


def log_barnes_g_shift_asymptotic(z: float, a: float) -> float:
    """Leading approximation a (z log z - z + log sqrt(2 pi)) + a^2/2 log z
    for log G(z+a+1) - log G(z+1); the error decays like O((|a|^3 + 1)/z)."""
    if not (z > 0 and z + a > 0):
        raise DomainError("log_barnes_g_shift_asymptotic: requires z > 0 and z + a > 0")
    return a * (z * math.log(z) - z + _LN_SQRT_2PI) + 0.5 * a * a * math.log(z)


def reg_lower_incomplete_gamma(a: float, x):
    """Regularized lower incomplete gamma P(a, x) in [0, 1]."""
    if not a > 0:
        raise DomainError("reg_lower_incomplete_gamma: shape a must be positive")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("reg_lower_incomplete_gamma: x must be nonnegative")
    out = sp.gammainc(a, arr)
    return float(out) if arr.ndim == 0 else out


def log_unit_ball_volume(n: int) -> float:
    """log of the n-dimensional unit-ball volume pi^(n/2) / Gamma(1 + n/2)."""
    if n < 1 or n != int(n):
        raise DomainError("log_unit_ball_volume: dimension must be an integer >= 1")
    return (n / 2.0) * math.log(math.pi) - math.lgamma(1.0 + n / 2.0)


def log_unit_sphere_area(n: int) -> float:
    """log of the surface area of the unit sphere in R^n (= n * ball volume)."""
    if n < 1 or n != int(n):
        raise DomainError("log_unit_sphere_area: dimension must be an integer >= 1")
    return math.log(n) + log_unit_ball_volume(n)
