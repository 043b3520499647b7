import math

import numpy as np
import pytest

from ddelab import (
    Grid,
    ModelParams,
    StatePair,
    StepRejectedError,
    WaveContext,
    energy_momentum,
    functionals,
    integrate,
    levine_functional,
    orbital_distance,
    perturbed_initial_data,
    profile_on_grid,
    rhs,
    solitary_profile,
    stable_dt,
    step_rk4,
    traveling_pair,
)
from ddelab.sim import SimConfig
from ddelab.wave_core import d_of_c

REF_PARAMS = ModelParams(2.0, 1.0, 3.0)
REF_CTX = WaveContext(REF_PARAMS, 0.8)
REF_GRID = Grid(120.0, 1024)


def ref_pair():
    return traveling_pair(profile_on_grid(REF_CTX, REF_GRID), REF_CTX)


# ---------------------------------------------------------------- grid

def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(10.0, 100)  # not a power of two
    with pytest.raises(ValueError):
        Grid(10.0, 32)  # too coarse
    with pytest.raises(ValueError):
        Grid(-1.0, 128)
    g = Grid(40.0, 128)
    assert g.dx * g.n_points == g.length
    assert g.x[0] == -20.0


# ---------------------------------------------------------------- rhs

def test_rhs_zero_state():
    du, dw = rhs(StatePair.zero(Grid(40.0, 128)), REF_PARAMS)
    assert not du.any()
    assert not dw.any()


def test_rhs_traveling_wave_consistency():
    # an exact wave moves rigidly: (u_t, w_t) = (-c u_x, -c w_x)
    pair = ref_pair()
    du, dw = rhs(pair, REF_PARAMS)
    ref_du = -REF_CTX.c * REF_GRID.derivative(pair.u)
    ref_dw = -REF_CTX.c * REF_GRID.derivative(pair.w)
    scale = np.max(np.abs(ref_du))
    assert np.max(np.abs(du - ref_du)) <= 1e-8 * scale
    assert np.max(np.abs(dw - ref_dw)) <= 1e-8 * scale


def test_linear_dispersion_relation():
    # tiny cosine -> measure the oscillation frequency of one Fourier mode
    a, b = 2.0, 1.0
    params = ModelParams(a, b, 3.0)
    grid = Grid(40.0, 256)
    k0 = 4
    xi0 = 2.0 * math.pi * k0 / grid.length
    omega = xi0 * math.sqrt((1.0 + a * xi0**2) / (1.0 + b * xi0**2))
    eps = 1e-8
    u = eps * np.cos(xi0 * grid.x)
    w = -(omega / xi0) * u
    dt = stable_dt(params, grid)
    t_end = 10.0 * 2.0 * math.pi / omega
    n = int(math.ceil(t_end / dt))
    dt = t_end / n
    state = StatePair(grid, u, w)
    phases = [np.angle(state.u_hat[k0])]
    times = [0.0]
    for i in range(n):
        state = step_rk4(state, params, dt)
        phases.append(np.angle(state.u_hat[k0]))
        times.append((i + 1) * dt)
    unwrapped = np.unwrap(phases)
    slope = np.polyfit(times, unwrapped, 1)[0]
    assert abs(abs(slope) - omega) / omega <= 1e-4


# ---------------------------------------------------------------- stepping

def test_step_zero_state():
    state = step_rk4(StatePair.zero(Grid(40.0, 128)), REF_PARAMS, 0.01)
    assert not state.u.any()
    assert state.t == 0.01


def test_step_smooth_change():
    pair = ref_pair()
    dt = stable_dt(REF_PARAMS, REF_GRID)
    after = step_rk4(pair, REF_PARAMS, dt)
    assert np.max(np.abs(after.u - pair.u)) <= 2.0 * dt * np.max(np.abs(pair.u))


def test_step_rejects_large_dt():
    pair = ref_pair()
    bound = stable_dt(REF_PARAMS, REF_GRID)
    with pytest.raises(StepRejectedError):
        step_rk4(pair, REF_PARAMS, 3.0 * bound)


def test_integrate_rejects_large_dt():
    cfg = SimConfig(dt=3.0 * stable_dt(REF_PARAMS, REF_GRID), t_end=1.0)
    with pytest.raises(StepRejectedError):
        integrate(ref_pair(), REF_PARAMS, cfg)


def test_traveling_wave_propagation_short():
    pair = ref_pair()
    t_end = 2.0
    cfg = SimConfig(dt=stable_dt(REF_PARAMS, REF_GRID), t_end=t_end, record_every=1000)
    state = pair
    n = int(math.ceil(t_end / cfg.dt))
    dt = t_end / n
    for _ in range(n):
        state = step_rk4(state, REF_PARAMS, dt)
    exact = solitary_profile(REF_CTX, REF_GRID.x - REF_CTX.c * t_end)
    assert np.max(np.abs(state.u - exact)) <= 1e-5


# ---------------------------------------------------------------- integrate

def test_integrate_zero_state():
    grid = Grid(40.0, 128)
    cfg = SimConfig(dt=stable_dt(REF_PARAMS, grid), t_end=0.5)
    rec = integrate(StatePair.zero(grid), REF_PARAMS, cfg)
    assert rec.verdict == "completed"
    assert not rec.E.any() and not rec.M.any() and not rec.sup_u.any() and not rec.H.any()


def test_integrate_conservation_short():
    cfg = SimConfig(dt=stable_dt(REF_PARAMS, REF_GRID), t_end=3.0, record_every=10)
    rec = integrate(ref_pair(), REF_PARAMS, cfg, ctx=REF_CTX)
    assert rec.verdict == "completed"
    assert rec.times[-1] == pytest.approx(3.0)
    assert np.max(np.abs(rec.E - rec.E[0])) <= 1e-6 * abs(rec.E[0])
    assert np.max(np.abs(rec.M - rec.M[0])) <= 1e-6 * abs(rec.M[0])
    assert rec.max_imag_residue <= 1e-12
    assert np.max(rec.orbital_dist) <= 1e-4


def test_integrate_detects_blow_up():
    params = ModelParams(2.0, 1.0, 3.0)
    c0sq = (4.0 - math.sqrt(10.0)) / 3.0
    ctx = WaveContext(params, math.sqrt(0.5 * c0sq))
    grid = Grid(120.0, 1024)
    data = perturbed_initial_data(ctx, 1.05, 0.0, grid)
    cfg = SimConfig(dt=stable_dt(params, grid), t_end=50.0, record_every=50)
    rec = integrate(data.state, params, cfg, ctx=ctx, v0=data.v0)
    assert rec.verdict == "blow_up_detected"
    assert rec.blow_time is not None and rec.blow_time < 50.0
    assert rec.sup_u[-1] >= 50.0 * rec.sup_u[0] or not math.isfinite(rec.sup_u[-1])
    # growth functional increases monotonically on the recorded tail
    h = rec.H[np.isfinite(rec.H)]
    tail = h[len(h) // 2 :]
    assert np.all(np.diff(tail) > 0.0)


# ---------------------------------------------------------------- perturbed data

def test_perturbed_identity():
    grid = Grid(120.0, 1024)
    data = perturbed_initial_data(REF_CTX, 1.0, 0.0, grid)
    phi = solitary_profile(REF_CTX, grid.x)
    assert np.max(np.abs(data.state.u - phi)) <= 1e-14
    assert np.max(np.abs(data.state.w + REF_CTX.c * phi)) <= 1e-14
    assert data.dist_h1 <= 1e-12


def test_perturbed_amplitude_scaling():
    grid = Grid(120.0, 1024)
    data = perturbed_initial_data(REF_CTX, 1.05, 0.0, grid)
    pair = ref_pair()
    norm = math.sqrt(
        (1.0 + REF_CTX.c**2) * grid.h1_sq_hat(np.fft.fft(pair.u))
    )
    assert data.dist_h1 == pytest.approx(0.05 * norm, rel=1e-12)
    assert np.max(np.abs(data.state.u - 1.05 * pair.u)) <= 1e-13


def test_perturbed_rejects_shrinking():
    grid = Grid(120.0, 1024)
    with pytest.raises(ValueError):
        perturbed_initial_data(REF_CTX, 0.99, 0.0, grid)


def test_perturbed_h_cut_validation():
    grid = Grid(120.0, 1024)
    xi1 = 2.0 * math.pi / grid.length
    with pytest.raises(ValueError):
        perturbed_initial_data(REF_CTX, 1.05, 10.0 * xi1, grid)
    with pytest.raises(ValueError):
        perturbed_initial_data(REF_CTX, 1.05, -0.1, grid)


def test_perturbed_membership_inequalities():
    # scaled data lands strictly inside the invariant blow-up set
    params = ModelParams(2.0, 1.0, 3.0)
    c0sq = (4.0 - math.sqrt(10.0)) / 3.0
    ctx = WaveContext(params, math.sqrt(0.5 * c0sq))
    grid = Grid(120.0, 1024)
    xi1 = 2.0 * math.pi / grid.length
    for lam, h_cut in [(1.05, 0.0), (1.05, xi1), (1.01, xi1), (1.1, 0.5 * xi1)]:
        data = perturbed_initial_data(ctx, lam, h_cut, grid)
        from ddelab import alpha_and_C

        alpha, _ = alpha_and_C(ctx)
        rep = functionals(data.state, ctx, alpha)
        assert rep.k_alpha < 0.0
        assert rep.e + ctx.c * rep.m < d_of_c(ctx, "quadrature", grid)


def test_perturbed_h_cut_at_first_mode_is_vacuous():
    # the periodic surrogate of a small low-frequency cut keeps the mean
    grid = Grid(120.0, 1024)
    xi1 = 2.0 * math.pi / grid.length
    data = perturbed_initial_data(REF_CTX, 1.05, xi1, grid)
    phi = solitary_profile(REF_CTX, grid.x)
    assert np.max(np.abs(data.state.u - 1.05 * phi)) <= 1e-13


def test_perturbed_h_cut_above_first_mode_drops_lowest_shell():
    grid = Grid(120.0, 1024)
    xi1 = 2.0 * math.pi / grid.length
    data = perturbed_initial_data(REF_CTX, 1.05, 1.5 * xi1, grid)
    assert abs(np.mean(data.state.u)) <= 1e-15
    u_hat = np.fft.fft(data.state.u)
    assert abs(u_hat[1]) <= 1e-9 and abs(u_hat[-1]) <= 1e-9
    phi_hat = np.fft.fft(solitary_profile(REF_CTX, grid.x))
    assert abs(u_hat[2] - 1.05 * phi_hat[2]) <= 1e-9 * abs(phi_hat[2])


# ---------------------------------------------------------------- orbital distance

def test_orbital_distance_identity():
    assert orbital_distance(ref_pair(), REF_CTX) <= 1e-10


def test_orbital_distance_translate_invariance():
    grid = REF_GRID
    for s0 in (3.0, -17.3, 0.37 * grid.dx):
        phi = solitary_profile(REF_CTX, grid.x - s0)
        state = StatePair(grid, phi, -REF_CTX.c * phi)
        assert orbital_distance(state, REF_CTX) <= 1e-8


def test_orbital_distance_scaled():
    pair = ref_pair()
    scaled = StatePair(REF_GRID, 1.05 * pair.u, 1.05 * pair.w)
    norm = math.sqrt((1.0 + REF_CTX.c**2) * REF_GRID.h1_sq_hat(np.fft.fft(pair.u)))
    assert orbital_distance(scaled, REF_CTX) == pytest.approx(0.05 * norm, abs=1e-6)


def test_orbital_distance_brute_force_oracle():
    # coarse shift scan + parabolic refinement, fully independent route
    grid = Grid(96.0, 512)
    ctx = WaveContext.of(2.0, 0.8, 2.5, 0.4)
    phi = solitary_profile(ctx, grid.x)
    rng = np.random.default_rng(13)
    bump = 0.02 * np.exp(-((grid.x - 5.0) ** 2))
    u = phi + bump
    w = -ctx.c * phi + 0.01 * np.exp(-((grid.x + 3.0) ** 2))
    state = StatePair(grid, u, w)

    def dist_at(s):
        phis = solitary_profile(ctx, np.mod(grid.x - s + 0.5 * grid.length, grid.length) - 0.5 * grid.length)
        du = u - phis
        dw = w + ctx.c * phis
        return math.sqrt(
            grid.h1_sq_hat(np.fft.fft(du)) + grid.h1_sq_hat(np.fft.fft(dw))
        )

    coarse = np.linspace(-2.0, 2.0, 4001)
    s_best = coarse[np.argmin([dist_at(s) for s in coarse])]
    fine = np.linspace(s_best - 2e-3, s_best + 2e-3, 4001)
    brute = min(dist_at(s) for s in fine)
    assert orbital_distance(state, ctx) == pytest.approx(brute, rel=1e-6)
    assert orbital_distance(state, ctx) <= brute + 1e-12


# ---------------------------------------------------------------- growth functional

def test_levine_zero():
    grid = Grid(40.0, 128)
    assert levine_functional(StatePair.zero(grid), np.zeros(grid.n_points), REF_PARAMS) == 0.0


def test_levine_matches_record():
    grid = Grid(120.0, 1024)
    data = perturbed_initial_data(REF_CTX, 1.05, 0.0, grid)
    cfg = SimConfig(dt=stable_dt(REF_PARAMS, grid), t_end=0.5, record_every=5)
    rec = integrate(data.state, REF_PARAMS, cfg, v0=data.v0)
    h0 = levine_functional(data.state, data.v0, REF_PARAMS)
    assert rec.H[0] == pytest.approx(h0, rel=1e-12)


def test_levine_stable_run_bounded():
    ctx = WaveContext(REF_PARAMS, math.sqrt(0.7))
    grid = Grid(140.0, 1024)
    data = perturbed_initial_data(ctx, 1.05, 0.0, grid)
    cfg = SimConfig(dt=stable_dt(REF_PARAMS, grid), t_end=10.0, record_every=20)
    rec = integrate(data.state, REF_PARAMS, cfg, v0=data.v0)
    assert rec.verdict == "completed"
    assert np.max(rec.H) <= 2.0 * rec.H[0]
    assert np.min(rec.H) >= 0.5 * rec.H[0]


# ---------------------------------------------------------------- reality

def test_reality_residue():
    cfg = SimConfig(dt=stable_dt(REF_PARAMS, REF_GRID), t_end=1.0, record_every=3)
    rec = integrate(ref_pair(), REF_PARAMS, cfg)
    assert rec.max_imag_residue <= 1e-12
