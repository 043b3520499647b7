import math

import numpy as np
import pytest

from ddelab import (
    DegenerateVelocityError,
    ModelParams,
    NotApplicableError,
    WaveContext,
    alpha_and_C,
    classify_region,
    critical_mu,
    critical_velocity_squared,
    critical_velocity_squared_raw,
    d_second_derivative_fd,
    g_coefficients,
    g_eval,
    quartic_k,
    roots_in_unit_interval,
    sigma_residual,
)


# ---------------------------------------------------------------- oracles

def bisect_quartic_root(params, lo=0.0, hi=1.0, iters=200):
    """The unique sign change of the threshold quadratic in (0, 1)."""
    klo = quartic_k(lo, params)
    khi = quartic_k(hi, params)
    assert klo > 0 > khi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if quartic_k(mid, params) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_g_root(p, mu, lo, hi, iters=200):
    glo = g_eval(lo, p, mu)
    ghi = g_eval(hi, p, mu)
    assert glo * ghi < 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if g_eval(mid, p, mu) * glo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def random_params(rng, p_max=7.0):
    a = float(rng.uniform(0.3, 4.0))
    return ModelParams(a, float(a * rng.uniform(0.0, 0.95)), float(rng.uniform(1.2, p_max)))


# ---------------------------------------------------------------- threshold

def test_threshold_boussinesq_limit():
    assert critical_velocity_squared(ModelParams(1.0, 0.0, 3.0)) == pytest.approx(
        0.25, abs=1e-15
    )
    for p in (2.0, 3.0, 4.0, 5.0, 7.0):
        assert critical_velocity_squared(ModelParams(1.0, 0.0, p)) == pytest.approx(
            (p - 1.0) / (2.0 * (p + 1.0)), abs=1e-14
        )


def test_threshold_equal_coefficient_limit():
    # a = b sits outside ModelParams; the raw path covers the limit
    for p in (2.0, 3.0, 4.0, 5.0, 7.0):
        assert critical_velocity_squared_raw(1.0, 1.0, p) == pytest.approx(
            (p - 1.0) / (p + 3.0), abs=1e-14
        )


def test_threshold_matches_quartic_bisection():
    params = ModelParams(2.0, 1.0, 3.0)
    c0sq = critical_velocity_squared(params)
    assert c0sq == pytest.approx((4.0 - math.sqrt(10.0)) / 3.0, abs=1e-14)
    assert c0sq == pytest.approx(bisect_quartic_root(params), abs=1e-12)


def test_threshold_range_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        params = random_params(rng)
        c0sq = critical_velocity_squared(params)
        bound = (params.p - 1.0) / (params.p + 3.0)
        assert 0.0 < c0sq <= bound + 1e-14
        assert abs(quartic_k(c0sq, params)) <= 1e-10


def test_quartic_values():
    params = ModelParams(2.0, 1.0, 3.0)
    assert quartic_k(0.0, params) == 4.0
    assert quartic_k(1.0, params) == -6.0


# ---------------------------------------------------------------- alpha, C

def test_alpha_half_at_threshold():
    params = ModelParams(2.0, 1.0, 3.0)
    c0 = math.sqrt((4.0 - math.sqrt(10.0)) / 3.0)
    alpha, _ = alpha_and_C(WaveContext(params, c0))
    assert alpha == pytest.approx(0.5, abs=1e-10)


def test_alpha_above_half_below_threshold():
    alpha, C = alpha_and_C(WaveContext.of(2.0, 1.0, 3.0, math.sqrt(0.1)))
    assert alpha > 0.5
    assert C > 0.0


def test_alpha_below_half_above_threshold():
    alpha, _ = alpha_and_C(WaveContext.of(1.0, 0.0, 3.0, math.sqrt(0.3)))
    assert alpha < 0.5


def test_alpha_duality_random():
    rng = np.random.default_rng(11)
    for _ in range(300):
        params = random_params(rng)
        c = math.sqrt(rng.uniform(1e-3, 0.97))
        ctx = WaveContext(params, c)
        alpha, C = alpha_and_C(ctx)
        below = c * c < critical_velocity_squared(params)
        assert (alpha > 0.5) == below
        if below:
            assert C > 0.0


def test_alpha_degenerate_at_rest():
    with pytest.raises(DegenerateVelocityError):
        alpha_and_C(WaveContext.of(2.0, 1.0, 3.0, 0.0))
    with pytest.raises(DegenerateVelocityError):
        sigma_residual(WaveContext.of(2.0, 1.0, 3.0, 0.0))


# ---------------------------------------------------------------- sigma

def test_sigma_examples():
    assert abs(sigma_residual(WaveContext.of(2.0, 1.0, 3.0, 0.3))) <= 1e-10
    assert abs(sigma_residual(WaveContext.of(1.0, 0.0, 2.0, 0.2))) <= 1e-10


def test_sigma_random_sweep():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(1000):
        params = random_params(rng)
        c = math.copysign(math.sqrt(rng.uniform(1e-4, 0.995)), rng.uniform(-1, 1))
        worst = max(worst, abs(sigma_residual(WaveContext(params, c))))
    assert worst <= 1e-9


# ---------------------------------------------------------------- cubic G

def test_g_coefficient_examples():
    co = g_coefficients(3.0, 0.5)
    assert (co.P, co.Q, co.R, co.S) == (12.0, 47.0, 52.0, 14.0)
    co0 = g_coefficients(3.0, 0.0)
    assert (co0.P, co0.Q, co0.R, co0.S) == (0.0, 0.0, 24.0, 12.0)
    assert g_coefficients(5.0, 1.0).P == 96.0


def test_g_coefficients_positive():
    rng = np.random.default_rng(5)
    for _ in range(200):
        p = rng.uniform(1.01, 10.0)
        mu = rng.uniform(1e-6, 1.0)
        co = g_coefficients(p, mu)
        assert min(co.P, co.Q, co.R, co.S) > 0.0


def test_g_endpoint_values():
    assert g_eval(1.0, 2.0, 0.5) == pytest.approx(3.75, abs=1e-13)
    assert g_eval(1.0, 5.0, 0.37) == pytest.approx(0.0, abs=1e-12)
    for p, mu in [(2.0, 0.3), (7.0, 0.8), (4.5, 0.0)]:
        assert g_eval(0.0, p, mu) == -g_coefficients(p, mu).S


def test_g_endpoint_identity_sweep():
    rng = np.random.default_rng(23)
    for _ in range(500):
        p = float(rng.uniform(1.05, 10.0))
        mu = float(rng.uniform(0.0, 1.0))
        lhs = g_eval(1.0, p, mu)
        rhs = (mu - 1.0) ** 2 * (p + 3.0) * (5.0 - p)
        assert abs(lhs - rhs) <= 1e-12 * (p + 3.0) ** 2


def test_g_p5_factorization():
    zs = np.linspace(0.0, 3.0, 301)
    for mu in (0.1, 0.35, 0.6, 0.95):
        got = g_eval(zs, 5.0, mu)
        ref = 16.0 * (zs - 1.0) * (6.0 * mu**2 * zs**2 - 9.0 * mu * zs + mu + 2.0)
        scale = g_coefficients(5.0, mu).scale * np.maximum(1.0, zs) ** 3
        assert np.max(np.abs(got - ref) / scale) <= 1e-12


def test_g_mu1_factorization():
    zs = np.linspace(0.0, 1.5, 151)
    for p in (2.0, 3.0, 5.0, 8.0):
        got = g_eval(zs, p, 1.0)
        ref = 2.0 * (p + 1.0) * (p + 3.0) * (zs - (p - 1.0) / (p + 3.0)) * (zs - 1.0) ** 2
        scale = g_coefficients(p, 1.0).scale * np.maximum(1.0, zs) ** 3
        assert np.max(np.abs(got - ref) / scale) <= 1e-12


# ---------------------------------------------------------------- roots

def test_root_linear_limit():
    assert roots_in_unit_interval(3.0, 0.0) == [0.5]
    assert roots_in_unit_interval(2.0, 0.0) == [0.25]
    assert roots_in_unit_interval(4.0, 0.0) == [0.75]
    assert roots_in_unit_interval(6.0, 0.0) == []  # (p-1)/4 >= 1 is outside


def test_root_mu_one_limit():
    roots = roots_in_unit_interval(3.0, 1.0)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_root_p5_closed_form():
    for mu in (0.4, 0.5, 0.6, 0.8):
        roots = roots_in_unit_interval(5.0, mu)
        assert len(roots) == 1
        assert roots[0] == pytest.approx(
            (9.0 - math.sqrt(33.0 - 24.0 * mu)) / (12.0 * mu), abs=1e-10
        )
    assert roots_in_unit_interval(5.0, 0.2) == []  # z_- > 1 for mu < 1/3


def test_root_against_bisection():
    root = roots_in_unit_interval(3.0, 0.5)
    assert len(root) == 1
    assert root[0] == pytest.approx(bisect_g_root(3.0, 0.5, 0.39, 0.40), abs=1e-12)


def test_root_polish_quality():
    rng = np.random.default_rng(29)
    for _ in range(200):
        p = float(rng.uniform(1.05, 10.0))
        mu = float(rng.uniform(0.0, 1.0))
        co = g_coefficients(p, mu)
        for z in roots_in_unit_interval(p, mu):
            assert abs(g_eval(z, p, mu)) <= 1e-12 * co.scale


def test_root_tiny_mu_continuity():
    # near the degree collapse the linear root seeds Newton
    for p in (2.0, 3.0, 4.0):
        z_tiny = roots_in_unit_interval(p, 1e-9)
        assert len(z_tiny) == 1
        assert z_tiny[0] == pytest.approx((p - 1.0) / 4.0, rel=1e-6)


def test_root_count_parity():
    rng = np.random.default_rng(31)
    for _ in range(300):
        p = float(rng.uniform(1.05, 10.0))
        if abs(p - 5.0) < 0.05:
            continue
        mu = float(rng.uniform(0.0, 0.999))
        count = len(roots_in_unit_interval(p, mu))
        if p < 5.0:
            assert count % 2 == 1
        else:
            assert count % 2 == 0


# ---------------------------------------------------------------- regions

def test_classify_examples():
    rep = classify_region(3.0, 0.5)
    assert rep.kind == "up_to_one"
    assert rep.interval[0] == pytest.approx(0.3976281526109, abs=1e-10)
    assert rep.interval[1] == 1.0

    rep5 = classify_region(5.0, 0.5)
    assert rep5.kind == "up_to_one"
    assert rep5.interval[0] == pytest.approx((9.0 - math.sqrt(21.0)) / 6.0, abs=1e-10)

    assert classify_region(6.0, 0.1).kind == "empty"

    win = classify_region(6.0, 0.9)
    assert win.kind == "window"
    z1, z2 = win.interval
    assert 0.0 < z1 < z2 < 1.0


def test_classify_rejects_mu_out_of_range():
    with pytest.raises(ValueError):
        classify_region(3.0, 1.0)
    with pytest.raises(ValueError):
        classify_region(3.0, -0.1)


def test_classified_region_sign():
    rep = classify_region(3.0, 0.5)
    z1 = rep.interval[0]
    assert g_eval(0.5 * (z1 + 1.0), 3.0, 0.5) > 0.0
    assert g_eval(0.5 * z1, 3.0, 0.5) < 0.0


# ---------------------------------------------------------------- mu_p

def test_critical_mu_not_applicable():
    with pytest.raises(NotApplicableError):
        critical_mu(5.0)
    with pytest.raises(NotApplicableError):
        critical_mu(3.0)


def test_critical_mu_p6():
    mu6 = critical_mu(6.0)
    assert 1.0 / 3.0 < mu6 < 1.0
    assert classify_region(6.0, 0.34).kind == "empty"
    assert classify_region(6.0, 0.99).kind == "window"
    assert len(roots_in_unit_interval(6.0, mu6 - 1e-6)) == 0
    assert len(roots_in_unit_interval(6.0, mu6 + 1e-6)) == 2


def test_critical_mu_monotone_in_p():
    mu6 = critical_mu(6.0)
    mu8 = critical_mu(8.0)
    assert mu8 > mu6


def test_critical_mu_limit_toward_p5():
    gaps = [critical_mu(p) - 1.0 / 3.0 for p in (5.1, 5.01, 5.001)]
    assert all(g > 0.0 for g in gaps)
    assert gaps[2] < gaps[1] < gaps[0]
    assert gaps[2] < 0.02


# ---------------------------------------------------------------- d'' sign

def test_dsecond_signs_p3():
    params = ModelParams(2.0, 1.0, 3.0)  # mu = 0.5, root at z ~ 0.3976
    assert d_second_derivative_fd(WaveContext(params, math.sqrt(0.7))) > 0.0
    assert d_second_derivative_fd(WaveContext(params, math.sqrt(0.2))) < 0.0


def test_dsecond_input_validation():
    ctx = WaveContext.of(2.0, 1.0, 3.0, 0.5)
    with pytest.raises(ValueError):
        d_second_derivative_fd(ctx, h=0.5)
    with pytest.raises(ValueError):
        d_second_derivative_fd(WaveContext.of(2.0, 1.0, 3.0, 0.9995), h=1e-3)


def test_dsecond_sign_matches_g_random():
    rng = np.random.default_rng(41)
    h = 1e-4
    done = 0
    while done < 100:
        params = random_params(rng, p_max=6.0)
        c = math.sqrt(rng.uniform(1e-3, 0.95))
        roots = roots_in_unit_interval(params.p, params.mu)
        if any(abs(c - math.sqrt(z)) < 10.0 * h for z in roots):
            continue
        fd = d_second_derivative_fd(WaveContext(params, c), h)
        g = g_eval(c * c, params.p, params.mu)
        assert math.copysign(1.0, fd) == math.copysign(1.0, g)
        done += 1
