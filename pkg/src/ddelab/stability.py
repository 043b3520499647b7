"""Velocity thresholds and the convexity cubic G in z = c^2.

The blow-up threshold c0^2 is the (0,1) root of a quadratic in c^2; the
orbital-stability regions are the sublevel sets where the cubic
G(z, p, mu) = P z^3 - Q z^2 + R z - S is positive, z = c^2, mu = b/a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import wave_core
from .errors import (
    DegenerateVelocityError,
    InconsistentRootCountError,
    NotApplicableError,
)
from .params import ModelParams, WaveContext

ROOT_POLISH_REL = 1e-12
BOUNDARY_PAD = 1e-9  # roots this close to z=0 or z=1 count as boundary
_SCAN_POINTS = 2048

KIND_EMPTY = "empty"
KIND_UP_TO_ONE = "up_to_one"
KIND_WINDOW = "window"


def critical_velocity_squared_raw(a: float, b: float, p: float) -> float:
    """Threshold c0^2 without parameter-domain checks, for limit studies.

    Uses the rationalized form ((p-1)/(p+1)) / (1 + sqrt(1 - b(p+3)(p-1)/
    (a(p+1)^2))), which stays well conditioned as b -> 0.
    """
    rad = 1.0 - b * (p + 3.0) * (p - 1.0) / (a * (p + 1.0) ** 2)
    if rad < 0.0:
        raise ValueError(f"threshold undefined: inner radicand {rad:.3g} < 0")
    return ((p - 1.0) / (p + 1.0)) / (1.0 + math.sqrt(rad))


def critical_velocity_squared(params: ModelParams) -> float:
    """Squared velocity below which small perturbations drive blow-up.

    Lies in (0, (p-1)/(p+3)]; the radicand cannot go negative for a > b.
    """
    return critical_velocity_squared_raw(params.a, params.b, params.p)


def quartic_k(z: float, params: ModelParams) -> float:
    """b(p+3) z^2 - 2a(p+1) z + a(p-1), z standing for c^2.

    Positive exactly where alpha > 1/2; k(0) > 0 and k(1) < 0 for a > b,
    so the sign changes once in (0,1), at z = c0^2.
    """
    a, b, p = params.a, params.b, params.p
    return b * (p + 3.0) * z * z - 2.0 * a * (p + 1.0) * z + a * (p - 1.0)


def alpha_and_C(ctx: WaveContext) -> tuple[float, float]:
    """Multiplier alpha and constant C of the growth estimate.

    alpha > 1/2 iff c^2 < c0^2, and C > 0 on that range.  The alpha
    formula is singular at c = 0, where none of this machinery is needed.
    """
    if ctx.c == 0.0:
        raise DegenerateVelocityError("alpha is singular at c = 0")
    a, b, p = ctx.params.a, ctx.params.b, ctx.params.p
    csq = ctx.c * ctx.c
    bracket = 1.0 - csq * (p + 3.0) / (p - 1.0)
    alpha = ctx.B * bracket / (2.0 * csq * (a - b))
    C = (ctx.B * bracket * (p + 1.0) + 2.0 * csq * (a - b)) / (ctx.A * ctx.B)
    return alpha, C


def sigma_residual(ctx: WaveContext) -> float:
    """Combination of C with the momentum and energy weights; identically 0.

    Returned unrounded so sweeps can use it as a consistency probe on the
    threshold algebra.
    """
    b, p = ctx.params.b, ctx.params.p
    csq = ctx.c * ctx.c
    _, C = alpha_and_C(ctx)
    momentum_weight = (
        (2.0 * csq / ctx.A)
        * (1.0 + b * (p - 1.0) * ctx.A / ((p + 3.0) * ctx.B))
        * ((p + 3.0) / (p - 1.0))
    )
    return -(p + 1.0) + momentum_weight + C


@dataclass(frozen=True)
class GCoefficients:
    """Coefficients of G(z) = P z^3 - Q z^2 + R z - S; all positive for mu > 0."""

    P: float
    Q: float
    R: float
    S: float

    @property
    def scale(self) -> float:
        return max(abs(self.P), abs(self.Q), abs(self.R), abs(self.S))


def g_coefficients(p: float, mu: float) -> GCoefficients:
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    return GCoefficients(
        P=2.0 * (p + 3.0) * (p + 1.0) * mu * mu,
        Q=3.0 * (p + 3.0) * (p - 1.0) * mu * mu + (3.0 * p * p + 10.0 * p + 19.0) * mu,
        R=2.0 * ((3.0 * p + 5.0) * (p - 1.0) * mu + 2.0 * (p + 3.0)),
        S=(p - 1.0) ** 2 * mu + (p - 1.0) * (p + 3.0),
    )


def g_eval(z, p: float, mu: float):
    """Value of the convexity cubic; its sign is the sign of d''(c) at z = c^2."""
    co = g_coefficients(p, mu)
    return ((co.P * z - co.Q) * z + co.R) * z - co.S


def _polish_root(z: float, co: GCoefficients, iters: int = 60) -> float:
    """Newton-polish a cubic root to |G| <= 1e-12 * max coefficient."""
    tol = ROOT_POLISH_REL * co.scale
    for _ in range(iters):
        g = ((co.P * z - co.Q) * z + co.R) * z - co.S
        if abs(g) <= tol:
            break
        dg = (3.0 * co.P * z - 2.0 * co.Q) * z + co.R
        if dg == 0.0:
            break
        step = g / dg
        z -= step
        if abs(step) <= 1e-17 * max(1.0, abs(z)):
            break
    return z


def roots_in_unit_interval(p: float, mu: float) -> list[float]:
    """Distinct real roots of the convexity cubic strictly inside (0, 1).

    The cubic collapses to R z = S at mu = 0 (solved exactly); for tiny mu
    the linear root seeds Newton on the ill-conditioned cubic.  Roots
    within 1e-9 of an endpoint are treated as boundary and excluded; at
    mu = 1 exactly, where z = 1 is a double root, the factored form
    supplies the interior root directly (companion-matrix eigenvalues
    split a double root far wider than the boundary pad).
    """
    co = g_coefficients(p, mu)
    if mu == 0.0:
        candidates = [co.S / co.R]
    elif mu < 1e-8:
        candidates = [_polish_root(co.S / co.R, co)]
    elif mu == 1.0:
        candidates = [_polish_root((p - 1.0) / (p + 3.0), co)]
    else:
        raw = np.roots([co.P, -co.Q, co.R, -co.S])
        candidates = [
            _polish_root(float(r.real), co)
            for r in raw
            if abs(r.imag) <= 1e-8 * max(1.0, abs(r))
        ]
    out: list[float] = []
    for z in sorted(candidates):
        if not (BOUNDARY_PAD < z < 1.0 - BOUNDARY_PAD):
            continue
        if out and abs(z - out[-1]) <= 1e-8:
            continue
        out.append(z)
    return out


@dataclass(frozen=True)
class RegionReport:
    """Orbital-stability region of squared velocities for one (p, mu)."""

    p: float
    mu: float
    roots_in_unit: tuple[float, ...]
    kind: str  # one of KIND_EMPTY / KIND_UP_TO_ONE / KIND_WINDOW
    interval: tuple[float, float] | None  # stable range of c^2, open


def classify_region(p: float, mu: float) -> RegionReport:
    """Classify the stability region via the roots of the cubic in (0, 1).

    Cross-checks the polished roots against a 2048-point sign scan and the
    claimed sign pattern on/off the interval; any disagreement raises
    InconsistentRootCountError rather than guessing.
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"region classification needs mu in [0, 1), got {mu}")
    roots = roots_in_unit_interval(p, mu)
    co = g_coefficients(p, mu)
    zs = np.linspace(0.0, 1.0, _SCAN_POINTS + 2)[1:-1]
    gs = np.asarray(g_eval(zs, p, mu))
    crossings = int(np.sum(gs[1:] * gs[:-1] < 0.0))
    if len(roots) > 2 or len(roots) != crossings:
        raise InconsistentRootCountError(
            f"(p={p}, mu={mu}): {len(roots)} polished roots vs "
            f"{crossings} sign changes in (0,1)"
        )
    tol = 1e-10 * max(co.scale, 1.0)
    if not roots:
        if float(gs.max()) > tol:
            raise InconsistentRootCountError(
                f"(p={p}, mu={mu}): no roots found but G > 0 somewhere in (0,1)"
            )
        return RegionReport(p, mu, (), KIND_EMPTY, None)
    if len(roots) == 1:
        lo, hi = roots[0], 1.0
        kind = KIND_UP_TO_ONE
    else:
        (lo, hi), kind = roots, KIND_WINDOW
    pad = 1e-3 * (hi - lo) + BOUNDARY_PAD
    inside = (zs > lo + pad) & (zs < hi - pad)
    outside = ~((zs > lo - pad) & (zs < hi + pad))
    if inside.any() and float(gs[inside].min()) < -tol:
        raise InconsistentRootCountError(
            f"(p={p}, mu={mu}): G < 0 inside the claimed interval"
        )
    if outside.any() and float(gs[outside].max()) > tol:
        raise InconsistentRootCountError(
            f"(p={p}, mu={mu}): G > 0 outside the claimed interval"
        )
    return RegionReport(p, mu, tuple(roots), kind, (lo, hi))


def _has_window(p: float, mu: float) -> bool:
    """Whether G attains positive values inside (0, 1) for this p > 5.

    Both endpoint values are negative there, so a window exists iff the
    interior local maximum of the cubic is positive.  This is equivalent to
    the two-root count but immune to the upper root merging into z = 1.
    """
    co = g_coefficients(p, mu)
    disc = co.Q * co.Q - 3.0 * co.P * co.R
    if co.P == 0.0 or disc <= 0.0:
        return False  # monotone on (0,1) with negative endpoint values
    z_max = (co.Q - math.sqrt(disc)) / (3.0 * co.P)
    return 0.0 < z_max < 1.0 and g_eval(z_max, p, mu) > 0.0


def critical_mu(p: float, tol: float = 1e-8) -> float:
    """Smallest dispersion ratio with a stability window, defined for p > 5.

    Located by bisection on window existence over [1/3, 1 - 1e-6]; the
    lower end is the p -> 5+ limit of the window boundary.
    """
    if p <= 5.0:
        raise NotApplicableError(f"stability windows require p > 5, got p={p}")
    lo, hi = 1.0 / 3.0, 1.0 - 1e-6
    if _has_window(p, lo) or not _has_window(p, hi):
        raise ValueError(f"bisection bracket [{lo}, {hi}] does not straddle mu_p for p={p}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _has_window(p, mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def d_second_derivative_fd(ctx: WaveContext, h: float = 1e-4) -> float:
    """Central difference of the closed-form d(c); its sign matches G(c^2).

    Cross-validates the cubic route independently of the coefficient
    algebra.  Requires h in (1e-6, 1e-2) and c +- h inside (-1, 1).
    """
    if not 1e-6 < h < 1e-2:
        raise ValueError(f"h must lie in (1e-6, 1e-2), got {h}")
    c = ctx.c
    if not (abs(c - h) < 1.0 and abs(c + h) < 1.0):
        raise ValueError(f"c +- h must stay inside (-1, 1), got c={c}, h={h}")
    params = ctx.params
    d0 = wave_core.d_zero(params)

    def d(cc: float) -> float:
        return d0 * wave_core.d_velocity_factor(params, cc)

    return (d(c - h) - 2.0 * d(c) + d(c + h)) / (h * h)
