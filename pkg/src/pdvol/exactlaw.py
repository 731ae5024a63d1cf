"""Closed-form law of the weighted typical cell volume.

The model is a stationary Poisson process of intensity gamma in R^n, its
Delaunay tessellation, and the weighted typical cell Z_mu selected with
probability proportional to volume^(mu+1), mu > -2 (mu = -1 is the typical
cell, mu = 0 the volume-weighted / zero cell).  This module evaluates, all in
log space:

* the angular moments E[Delta^s] of the simplex spanned by n+1 uniform points
  on the unit sphere (normalized spherical measure),
* moments E V^s and the cumulant generating function of Y = log V,
* the circumradius law,
* and two independent cross-checks of the moment formula (the typical-cell
  constant route and the sphere-simplex product identity).

Products of gamma functions are assembled strictly as differences of
log-gammas so the Theta(n^2 log n)-sized leading terms cancel exactly; the
two largest terms are paired first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, loggamma

from .errors import DomainError
from .specfun import log_unit_ball_volume, log_unit_sphere_area

__all__ = [
    "ModelParams",
    "CgfDomain",
    "log_angular_simplex_moment",
    "log_typical_cell_constant",
    "typical_volume_moment",
    "log_volume_moment",
    "volume_moment",
    "cgf",
    "radius_cdf",
    "weighted_intensity_ratio",
    "sphere_representation_gap",
]

#: safety margin keeping gamma arguments off their poles at the strip edge
STRIP_GUARD = 1e-6


@dataclass(frozen=True)
class ModelParams:
    """Dimension n >= 2, weight mu > -2, Poisson intensity gamma > 0."""

    n: int
    mu: float = -1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.n < 2 or self.n != int(self.n):
            raise DomainError("ModelParams: dimension n must be an integer >= 2")
        if not self.mu > -2.0:
            raise DomainError("ModelParams: weight mu must exceed -2")
        if not self.gamma > 0.0:
            raise DomainError("ModelParams: intensity gamma must be positive")


@dataclass(frozen=True)
class CgfDomain:
    """Validity strip of the cumulant generating function.

    The moment formula holds for Re z > -(mu+2); the gamma-product extends
    analytically down to -(mu+3) (first pole of the i = 1 factor), which the
    extended mode evaluates as a continuation.
    """

    lower: float
    guard: float = STRIP_GUARD

    def __post_init__(self):
        if not self.guard > 0:
            raise DomainError("CgfDomain: guard must be positive")

    @classmethod
    def for_params(cls, params: ModelParams, extended: bool = False) -> "CgfDomain":
        edge = -(params.mu + 3.0) if extended else -(params.mu + 2.0)
        return cls(lower=edge)

    def contains(self, re: float) -> bool:
        return re > self.lower + self.guard


def log_angular_simplex_moment(n: int, s: float) -> float:
    """log E[Delta_n^s] for the simplex of n+1 i.i.d. uniform unit-sphere
    points in R^n, with the normalized spherical measure (value 1 at s = 0).

    Valid for every s > -1 (all gamma arguments positive there).
    """
    if n < 2 or n != int(n):
        raise DomainError("log_angular_simplex_moment: n must be an integer >= 2")
    n = int(n)
    if not s > -1.0:
        raise DomainError("log_angular_simplex_moment: requires s > -1")
    i = np.arange(1, n + 1)
    raw = (
        (n + 1) * math.log(2.0)
        + (n * (n + 1) / 2.0) * math.log(math.pi)
        + gammaln((n * n + n * (s - 1.0) + s) / 2.0)
        - s * gammaln(n + 1.0)
        - gammaln((n * n + n * (s - 1.0)) / 2.0)
        - (n + 1) * gammaln((n + s) / 2.0)
        + float(np.sum(gammaln((s + i) / 2.0) - gammaln(i / 2.0)))
    )
    # the closed form is for the unnormalized sphere measure of total mass
    # n*kappa_n; divide by its (n+1)-st power
    return raw - (n + 1) * log_unit_sphere_area(n)


def log_typical_cell_constant(n: int) -> float:
    """log of the normalizing constant entering the typical-cell moment
    formula: n^2 / (2^(n+1) pi^((n-1)/2)) * Gamma(n^2/2) / Gamma((n^2+1)/2)
    * [Gamma((n+1)/2) / Gamma(1 + n/2)]^n."""
    if n < 2 or n != int(n):
        raise DomainError("log_typical_cell_constant: n must be an integer >= 2")
    n = int(n)
    return (
        2.0 * math.log(n)
        - (n + 1) * math.log(2.0)
        - ((n - 1) / 2.0) * math.log(math.pi)
        + math.lgamma(n * n / 2.0)
        - math.lgamma((n * n + 1.0) / 2.0)
        + n * (math.lgamma((n + 1) / 2.0) - math.lgamma(1.0 + n / 2.0))
    )


def typical_volume_moment(n: int, gamma: float, s: float) -> float:
    """E V^s of the typical cell (weight mu = -1) via the direct constant
    route: constant * angular moment * Gamma(n+s) / (n kappa_n^(n+s) gamma^s).

    Independent of the weighted moment formula; agreement of the two routes is
    one of the package's cross-checks.  Requires s > -1.
    """
    if not gamma > 0:
        raise DomainError("typical_volume_moment: gamma must be positive")
    if not s > -1.0:
        raise DomainError("typical_volume_moment: requires s > -1")
    lkappa = log_unit_ball_volume(n)
    logm = (
        log_typical_cell_constant(n)
        + log_angular_simplex_moment(n, s + 1.0)
        + (n + 1) * log_unit_sphere_area(n)
        + math.lgamma(n + s)
        - math.log(n)
        - (n + s) * lkappa
        - s * math.log(gamma)
    )
    return math.exp(logm)


def _log_moment_terms(params: ModelParams, z):
    """Difference-form assembly of log E V^z; z may be real or complex array.

    Returns exactly 0 at z = 0.  The two Theta(n^2 log n) gamma terms are
    paired before anything else is added.
    """
    n, mu, gam = params.n, params.mu, params.gamma
    z = np.asarray(z)
    lg = loggamma if np.iscomplexobj(z) else gammaln
    a_big = (n + 1) * (n + mu) / 2.0 + 1.0
    b_big = n * (n + mu + 1.0) / 2.0
    big = (lg(a_big + (n + 1) * z / 2.0) - lg(b_big + n * z / 2.0)) - (gammaln(a_big) - gammaln(b_big))
    t = big + z * (gammaln(n / 2.0 + 1.0) - math.log(gam) - (n / 2.0) * math.log(math.pi) - gammaln(n + 1.0))
    t = t + lg(n + mu + 1.0 + z) - gammaln(n + mu + 1.0)
    t = t - (n + 1) * (lg((n + mu) / 2.0 + 1.0 + z / 2.0) - gammaln((n + mu) / 2.0 + 1.0))
    i = np.arange(1, n + 1)
    zc = np.atleast_1d(z).reshape(-1, 1)
    row = np.sum(lg((i + mu) / 2.0 + 1.0 + zc / 2.0) - gammaln((i + mu) / 2.0 + 1.0), axis=1)
    t = t + row.reshape(np.shape(z))
    return t


def log_volume_moment(params: ModelParams, s: float) -> float:
    """log E V_n(Z_mu)^s for real s > -(mu+2)."""
    if not s > -(params.mu + 2.0):
        raise DomainError(
            f"log_volume_moment: s = {s:g} is at or below the domain edge -(mu+2) = {-(params.mu + 2.0):g}"
        )
    return float(_log_moment_terms(params, float(s)))


def volume_moment(params: ModelParams, s: float) -> float:
    """E V_n(Z_mu)^s for real s > -(mu+2); scales exactly as gamma^(-s)."""
    return math.exp(log_volume_moment(params, s))


def cgf(params: ModelParams, z, extended: bool = False):
    """Cumulant generating function L(z) = log E exp(z log V_n(Z_mu)).

    Accepts complex z with Re z inside the validity strip (default edge
    -(mu+2); ``extended=True`` evaluates the analytic continuation down to
    -(mu+3)).  L(0) = 0, L is real on the real axis, and exp(L(it)) is the
    characteristic function of log V.
    """
    domain = CgfDomain.for_params(params, extended=extended)
    arr = np.asarray(z)
    re = arr.real if np.iscomplexobj(arr) else arr
    if not np.all(re > domain.lower + domain.guard):
        raise DomainError(
            f"cgf: Re z must exceed the strip edge {domain.lower:g} (+ guard {domain.guard:g}); "
            f"got Re z = {np.min(re):g}"
        )
    out = _log_moment_terms(params, arr if np.iscomplexobj(arr) else arr.astype(float))
    if arr.ndim == 0:
        return complex(out) if np.iscomplexobj(arr) else float(out)
    return out


def radius_cdf(params: ModelParams, t):
    """CDF of the circumradius of Z_mu: P(n+mu+1, gamma kappa_n t^n)."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("radius_cdf: radius must be nonnegative")
    from scipy.special import gammainc

    kappa = math.exp(log_unit_ball_volume(params.n))
    out = gammainc(params.n + params.mu + 1.0, params.gamma * kappa * arr**params.n)
    return float(out) if arr.ndim == 0 else out


def weighted_intensity_ratio(params: ModelParams) -> float:
    """Intensity of the weighted selection relative to the typical cell,
    gamma_mu / gamma_(-1) = E V_n(Z_(-1))^(mu+1)."""
    base = ModelParams(params.n, -1.0, params.gamma)
    return volume_moment(base, params.mu + 1.0)


def sphere_representation_gap(n: int, mu: int, s: float, gamma: float = 1.0) -> float:
    """Relative gap in the sphere-simplex product identity.

    Both sides of  E[xi^(n s) V^(2s)] = E[(rho/(gamma kappa_n))^(2s)] * M(s)
    are assembled from log-gammas, where xi is the Beta(n(n+mu+1)/2, (mu+2)/2)
    squared-distance factor, rho ~ Gamma(n+mu+1, 1), and M(s) is the 2s-moment
    of the simplex of n+1 uniform points on a sphere with Beta-type weight mu.
    Stated for integer mu >= -1; returns |lhs/rhs - 1|.
    """
    if mu != int(mu) or mu < -1:
        raise DomainError("sphere_representation_gap: mu must be an integer >= -1")
    if not s > 0:
        raise DomainError("sphere_representation_gap: requires s > 0")
    params = ModelParams(n, float(mu), gamma)
    n = int(n)
    i = np.arange(1, n + 1)
    lkappa = log_unit_ball_volume(n)
    a = n * (n + mu + 1.0) / 2.0
    ab = (n + 1) * (n + mu) / 2.0 + 1.0
    log_xi = gammaln(ab) + gammaln(a + n * s) - gammaln(a) - gammaln(ab + n * s)
    lhs = log_xi + float(_log_moment_terms(params, 2.0 * s))
    log_rho = gammaln(n + mu + 1.0 + 2.0 * s) - gammaln(n + mu + 1.0) - 2.0 * s * (math.log(gamma) + lkappa)
    log_m = (
        -2.0 * s * gammaln(n + 1.0)
        + float(np.sum(gammaln((mu + i) / 2.0 + 1.0 + s) - gammaln((mu + i) / 2.0 + 1.0)))
        + (n + 1) * (gammaln((n + mu) / 2.0 + 1.0) - gammaln((n + mu) / 2.0 + 1.0 + s))
        + gammaln((n + 1) * (n + mu) / 2.0 + 1.0 + (n + 1) * s)
        - gammaln((n + 1) * (n + mu) / 2.0 + 1.0 + n * s)
    )
    return abs(math.expm1(lhs - (log_rho + log_m)))
