import math

import numpy as np
import pytest
from scipy.optimize import minimize

import pdvol.sampling as sampling
from pdvol.errors import ConvergenceError, DomainError
from pdvol.exactlaw import ModelParams, log_angular_simplex_moment, radius_cdf, volume_moment
from pdvol.sampling import (
    MAX_TETRAHEDRON_VOLUME_IN_BALL,
    MAX_TRIANGLE_AREA_IN_DISK,
    RngStream,
    SampleBatch,
    angular_acceptance_rate,
    check_product_identity,
    ks_statistic,
    sample_angular_delta,
    sample_angular_simplex,
    sample_beta,
    sample_circumradius,
    sample_gamma,
    sample_rhs_product,
    sample_volume,
)


def test_reproducibility_bit_identical():
    a = sample_volume(ModelParams(2, -1.0, 1.0), RngStream(123, 5).generator(), 5000)
    b = sample_volume(ModelParams(2, -1.0, 1.0), RngStream(123, 5).generator(), 5000)
    assert np.array_equal(a, b)
    c = sample_volume(ModelParams(2, -1.0, 1.0), RngStream(123, 6).generator(), 5000)
    assert not np.array_equal(a, c)


def test_stream_independence_dispersion():
    # variance of per-stream means should match variance / stream size
    p = ModelParams(2, -1.0, 1.0)
    per = 2000
    means = []
    allv = []
    for sid in range(64):
        v = sample_circumradius(p, RngStream(42, sid).generator(), size=per)
        means.append(v.mean())
        allv.append(v)
    pooled_var = np.concatenate(allv).var()
    stat = np.var(means, ddof=1) * per / pooled_var  # ~ chi2_63 / 63
    assert 0.5 < stat < 1.7


def test_gamma_beta_moments():
    rng = RngStream(7, 0).generator()
    g = sample_gamma(1.0, 1.0, rng, size=10**5)
    assert abs(g.mean() - 1.0) < 4.0 * g.std() / math.sqrt(len(g))
    g = sample_gamma(2.5, 3.0, rng, size=10**5)
    assert abs(g.mean() - 2.5 / 3.0) < 4.0 * g.std() / math.sqrt(len(g))
    b = sample_beta(1.0, 1.0, rng, size=10**4)
    _, p = ks_statistic(b, lambda t: np.clip(t, 0.0, 1.0))
    assert p > 0.01
    with pytest.raises(DomainError):
        sample_gamma(-1.0, 1.0, rng)
    with pytest.raises(DomainError):
        sample_beta(0.0, 1.0, rng)


def test_circumradius_moments_and_law():
    p = ModelParams(2, -1.0, 1.0)
    r = sample_circumradius(p, RngStream(11, 1).generator(), size=10**5)
    r2 = r**2
    # E R^2 = (n+mu+1)/(gamma kappa_n) = 2/pi here
    assert abs(r2.mean() - 2.0 / math.pi) < 4.0 * r2.std() / math.sqrt(len(r2))
    _, pv = ks_statistic(r, lambda t: radius_cdf(p, t))
    assert pv > 0.01
    # quadrupling the intensity quarters E R^2
    r4 = sample_circumradius(ModelParams(2, -1.0, 4.0), RngStream(11, 2).generator(), size=10**5)
    ratio = (r4**2).mean() / r2.mean()
    assert ratio == pytest.approx(0.25, rel=0.03)


def test_angular_sampler_mean():
    # accepted mean of Delta equals the ratio of angular moments
    d = sample_angular_delta(2, -1.0, RngStream(3, 0).generator(), 10**5)
    target = math.exp(log_angular_simplex_moment(2, 2.0) - log_angular_simplex_moment(2, 1.0))
    assert abs(d.mean() - target) < 4.0 * d.std() / math.sqrt(len(d))


def test_angular_acceptance_rate():
    rate = angular_acceptance_rate(2, 0.0, RngStream(3, 1).generator(), 10**5)
    target = math.exp(log_angular_simplex_moment(2, 2.0)) / MAX_TRIANGLE_AREA_IN_DISK**2
    se = math.sqrt(target * (1.0 - target) / 10**5)
    assert abs(rate - target) < 5.0 * se
    # degenerate collinear proposals are never accepted
    assert (0.0 / MAX_TRIANGLE_AREA_IN_DISK) ** (0.0 + 2.0) == 0.0


def test_extremal_simplex_constants():
    # numeric maximization confirms the rejection envelopes
    def neg_area(th):
        x, y = np.cos(th), np.sin(th)
        return -0.5 * abs((x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]))

    best = min(
        minimize(neg_area, np.random.default_rng(k).uniform(0, 2 * math.pi, 3), method="Nelder-Mead").fun
        for k in range(8)
    )
    assert -best == pytest.approx(MAX_TRIANGLE_AREA_IN_DISK, rel=1e-6)

    def neg_vol(ang):
        th, ph = ang[:4], ang[4:]
        u = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=1)
        e = u[1:] - u[:1]
        return -abs(np.linalg.det(e)) / 6.0

    best = min(
        minimize(
            neg_vol,
            np.random.default_rng(k).uniform(0.1, math.pi - 0.1, 8),
            method="Nelder-Mead",
            options={"maxiter": 4000, "xatol": 1e-10, "fatol": 1e-12},
        ).fun
        for k in range(12)
    )
    assert -best == pytest.approx(MAX_TETRAHEDRON_VOLUME_IN_BALL, rel=1e-5)


def test_single_tuple_sampler():
    u, delta = sample_angular_simplex(3, -1.0, RngStream(5, 0).generator())
    assert u.shape == (4, 3)
    assert np.allclose(np.linalg.norm(u, axis=1), 1.0)
    e = u[1:] - u[:1]
    assert delta == pytest.approx(abs(np.linalg.det(e)) / 6.0, rel=1e-12)


def test_volume_moments_match_exact_law():
    for k, (n, mu) in enumerate([(2, -1.0), (2, 0.0), (2, 1.0), (3, -1.0), (3, 0.0), (3, 1.0)]):
        p = ModelParams(n, mu, 1.0)
        size = 10**6 if n == 2 else 3 * 10**5
        v = sample_volume(p, RngStream(99, k).generator(), size)
        for s in (0.5, 1.0, 2.0):
            vs = v**s
            se = vs.std() / math.sqrt(len(vs))
            assert abs(vs.mean() - volume_moment(p, s)) < 4.0 * se


def test_rhs_product_mean():
    p = ModelParams(2, -1.0, 1.0)
    x = sample_rhs_product(p, RngStream(21, 0).generator(), 10**5)
    # Gamma(4)/Gamma(2) / (gamma kappa_2)^2 * prod E xi_i = 6 * (2/9) / pi^2
    target = 6.0 * (1.0 / 3.0) * (2.0 / 3.0) / math.pi**2
    assert abs(x.mean() - target) < 4.0 * x.std() / math.sqrt(len(x))


def test_product_identity_ks():
    for n, mu in [(2, -1.0), (3, 0.0)]:
        rep = check_product_identity(ModelParams(n, mu, 1.0), 3 * 10**4, RngStream(77, n).generator())
        assert rep.p_value > 0.01


def test_ks_statistic_contract():
    rng = RngStream(1, 0).generator()
    u = rng.uniform(size=10**4)
    _, p = ks_statistic(u, lambda t: np.clip(t, 0.0, 1.0))
    assert p > 0.01
    _, p = ks_statistic(u + 0.5, lambda t: np.clip(t, 0.0, 1.0))
    assert p < 1e-6
    stat, _ = ks_statistic(np.full(100, 0.5), lambda t: np.clip(np.asarray(t, float), 0.0, 1.0))
    assert stat >= 0.5
    with pytest.raises(DomainError):
        ks_statistic(u[:10], lambda t: t)


def test_sample_batch_validation():
    p = ModelParams(2, -1.0, 1.0)
    batch = SampleBatch(p, "radius", np.ones(4), RngStream(0, 0))
    assert batch.kind == "radius"
    with pytest.raises(DomainError):
        SampleBatch(p, "bogus", np.ones(4), RngStream(0, 0))
    with pytest.raises(DomainError):
        SampleBatch(p, "radius", np.array([1.0, np.inf]), RngStream(0, 0))


def test_acceptance_starvation(monkeypatch):
    monkeypatch.setattr(sampling, "_PROPOSAL_BUDGET", 20000)
    with pytest.raises(ConvergenceError, match="proposals"):
        sample_angular_delta(3, 60.0, RngStream(0, 0).generator(), 10)


def test_angular_domain_errors():
    rng = RngStream(0, 0).generator()
    with pytest.raises(DomainError):
        sample_angular_delta(4, -1.0, rng, 10)
    with pytest.raises(DomainError):
        sample_volume(ModelParams(5, -1.0, 1.0), rng, 10)
