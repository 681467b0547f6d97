"""The eigenfunction quotient G = g2/g1 and the monotonicity machinery built on it.

Curves are sampled on the interior nodes of the spectrum's grid.  Close to
r = 0 and r = R the quotient is 0/0-prone, so inside small windows the
curves are evaluated from local series of g1 and g2 instead.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import BallSpectrum, ball_spectrum
from .geometry import (SpaceSpec, mean_curvature, mean_curvature_prime, sphere_lambda1,
                       sphere_lambda1_prime)
from .integrator import R_SEED, OdeMode, RadialProfile, seed_series
from .report import VerificationReport

WINDOW_ZERO = 10 * R_SEED
WINDOW_R_FRACTION = 1e-3


class DegenerateSpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class QuotientCurves:
    spectrum: BallSpectrum
    G: RadialProfile
    Gp: RadialProfile
    q: RadialProfile
    p: RadialProfile
    B: RadialProfile
    psi: RadialProfile
    Gpp: RadialProfile
    lambda2_minus_lambda1: float

    @property
    def grid(self) -> np.ndarray:
        return self.G.grid

    @property
    def space(self) -> SpaceSpec:
        return self.spectrum.space


def _prof(grid, values, derivs, R):
    return RadialProfile(grid, values, derivs if derivs is not None else np.zeros_like(values), (0.0, R))


def _zero_series(space: SpaceSpec, mode: OdeMode, lam: float, r: np.ndarray):
    a = seed_series(space, mode, lam)
    m = OdeMode(mode).leading_power
    val = sum(aj * r ** (m + j) for j, aj in enumerate(a))
    der = sum((m + j) * aj * r ** (m + j - 1) for j, aj in enumerate(a) if m + j)
    return val, der


def _boundary_series(space: SpaceSpec, R: float, lam: float, harmonic: bool, slope: float, u: np.ndarray):
    """Third-order expansion about r = R of a solution with g(R) = 0, g'(R) = slope."""
    H = mean_curvature(space, R)
    Hp = mean_curvature_prime(space, R)
    pot = sphere_lambda1(space, R) if harmonic else 0.0
    c3 = (H * H - Hp - lam + pot) / 6.0
    val = slope * (u - 0.5 * H * u**2 + c3 * u**3)
    der = slope * (1 - H * u + 3 * c3 * u**2)
    return val, der


def T_field(space: SpaceSpec, lambda1: float, lambda2: float, p_at_r, r, y):
    """Direction field of q: q'(r) = T(r, q(r))."""
    s = sphere_lambda1(space, r)
    H = mean_curvature(space, r)
    return y * (1 - y) / r - H * y + s * r + (lambda1 - lambda2) * r - 2 * p_at_r * y


def Z_y_direct(space: SpaceSpec, lambda1: float, lambda2: float, r, y):
    """Value of dT/dr on the zero set T(r, y) = 0, evaluated from its closed form."""
    r = np.asarray(r, dtype=float)
    s = sphere_lambda1(space, r)
    sp = sphere_lambda1_prime(space, r)
    H = mean_curvature(space, r)
    gap = lambda2 - lambda1
    X = y * (1 - y) / r - H * y + s * r + (lambda1 - lambda2) * r
    out = ((y * y - y) / r**2 + s * (y + 1) + sp * r + 2 * lambda1 * y - gap
           + X * X / (2 * y) + H * X)
    return float(out) if np.ndim(out) == 0 else out


def build_quotient_curves(spectrum: BallSpectrum) -> QuotientCurves:
    sp = spectrum.space
    R = spectrum.R
    lam1, lam2 = spectrum.lambda1, spectrum.lambda2
    g1, g2 = spectrum.g1, spectrum.g2
    if not np.array_equal(g1.grid, g2.grid):
        raise DegenerateSpectrumError("g1 and g2 must share one grid")
    grid = g1.grid[:-1]  # drop r = R
    v1, d1 = g1.values[:-1].copy(), g1.derivs[:-1].copy()
    v2, d2 = g2.values[:-1].copy(), g2.derivs[:-1].copy()
    if np.any(v1 <= 0):
        bad = float(grid[np.argmax(v1 <= 0)])
        raise DegenerateSpectrumError(f"g1 is not positive at interior node r = {bad}")

    near0 = grid < WINDOW_ZERO
    if near0.any():
        v1[near0], d1[near0] = _zero_series(sp, OdeMode.RADIAL, lam1, grid[near0])
        v2[near0], d2[near0] = _zero_series(sp, OdeMode.FIRST_HARMONIC, lam2, grid[near0])
    nearR = grid > R * (1 - WINDOW_R_FRACTION)
    if nearR.any():
        # match the shot normalisation through the boundary slopes
        u = grid[nearR] - R
        v1[nearR], d1[nearR] = _boundary_series(sp, R, lam1, False, g1.derivs[-1], u)
        v2[nearR], d2[nearR] = _boundary_series(sp, R, lam2, True, g2.derivs[-1], u)

    G = v2 / v1
    Gp = (d2 * v1 - v2 * d1) / v1**2
    p = d1 / v1
    q = grid * Gp / G
    s = sphere_lambda1(sp, grid)
    s_prime = sphere_lambda1_prime(sp, grid)
    B = Gp**2 + s * G**2
    psi = s * Gp / G + 0.5 * s_prime
    qp = T_field(sp, lam1, lam2, p, grid, q)
    Gpp = G / grid**2 * (grid * qp + q * (q - 1))
    pp = -p**2 - mean_curvature(sp, grid) * p - lam1
    Bp = 2 * Gp * Gpp + 2 * G**2 * psi
    return QuotientCurves(
        spectrum=spectrum,
        G=_prof(grid, G, Gp, R),
        Gp=_prof(grid, Gp, Gpp, R),
        q=_prof(grid, q, qp, R),
        p=_prof(grid, p, pp, R),
        B=_prof(grid, B, Bp, R),
        psi=_prof(grid, psi, None, R),
        Gpp=_prof(grid, Gpp, None, R),
        lambda2_minus_lambda1=lam2 - lam1,
    )


def b_prime(curves: QuotientCurves, r: float) -> float:
    """B'(r) = 2 G'G'' + 2 G^2 psi, interpolated from the node values."""
    grid = curves.grid
    if not grid[0] <= r <= grid[-1]:
        raise ValueError(f"r = {r} lies outside the sampled interior range [{grid[0]}, {grid[-1]}]")
    return float(np.interp(r, grid, curves.B.derivs))


def _margin_min(values, grid, scale=1.0):
    i = int(np.argmin(values))
    return float(values[i]) / scale, {"r": float(grid[i])}


def verify_monotonicity(spectrum: BallSpectrum | None = None, grid_size: int = 2000, *,
                        space: SpaceSpec | None = None, R: float | None = None) -> VerificationReport:
    """Numerical falsification harness for the monotonicity of G, B and q.

    Either pass a spectrum, or ``space`` and ``R`` to compute one with
    ``grid_size`` intervals.
    """
    if spectrum is None:
        spectrum = ball_spectrum(space, R, n_nodes=grid_size + 1)
    sp, R = spectrum.space, spectrum.R
    c = build_quotient_curves(spectrum)
    grid = c.grid
    params = {"radius": R, "lambda1": spectrum.lambda1, "lambda2": spectrum.lambda2}
    meta = {"nodes": int(grid.size), "r_first": float(grid[0]), "r_last": float(grid[-1])}
    kids: list[VerificationReport] = []

    def add(check, values, scale, tol, note=None):
        m, loc = _margin_min(values, grid, scale)
        kids.append(VerificationReport.from_margin(check, m, tol, space=sp, parameters=params,
                                                   location=loc, grid_meta=meta,
                                                   notes=[note] if note else None))

    add("G_increasing", c.Gp.values, np.max(np.abs(c.Gp.values)), 1e-8)
    if sp.compact:
        kids.append(VerificationReport.skipped("B_decreasing", "B is only claimed decreasing in the noncompact case",
                                               space=sp, parameters=params))
    else:
        add("B_decreasing", -c.B.derivs, np.max(np.abs(c.B.values)), 1e-6)
    add("q_nonnegative", c.q.values, 1.0, 1e-8)
    add("q_at_most_one", 1.0 - c.q.values, 1.0, 1e-8)
    add("q_nonincreasing", -c.q.derivs, 1.0, 1e-6)
    add("G_concave", -c.Gpp.values, np.max(np.abs(c.Gpp.values)), 1e-6)
    if sp.compact:
        kids.append(VerificationReport.skipped("psi_nonpositive", "psi <= 0 is the noncompact reduction",
                                               space=sp, parameters=params))
    else:
        add("psi_nonpositive", -c.psi.values, np.max(np.abs(c.psi.values)), 1e-6)
    # g1 decreasing and log-concave (second differences of log g1 on the uniform grid)
    g1 = spectrum.g1
    v = g1.values[:-1]
    add_grid = g1.grid[:-1]
    dec = -np.diff(v) / np.max(np.abs(v))
    i = int(np.argmin(dec))
    kids.append(VerificationReport.from_margin("g1_decreasing", dec[i], 0.0, space=sp, parameters=params,
                                               location={"r": float(add_grid[i])}, grid_meta=meta))
    lg = np.log(v)
    second = lg[2:] - 2 * lg[1:-1] + lg[:-2]
    i = int(np.argmax(second))
    kids.append(VerificationReport.from_margin("g1_log_concave", -second[i], 1e-8, space=sp, parameters=params,
                                               location={"r": float(add_grid[i + 1])}, grid_meta=meta))
    return VerificationReport.combine("monotonicity", kids, space=sp, parameters=params, grid_meta=meta)


def endpoint_limits(curves: QuotientCurves) -> dict:
    """Endpoint limits of q, G and p, extrapolated linearly from the outermost nodes."""
    g = curves.grid
    R = curves.spectrum.R
    q, qp = curves.q.values, curves.q.derivs
    return {
        "q_at_0": float(q[0] - g[0] * qp[0]),
        "q_at_R": float(q[-1] + (R - g[-1]) * qp[-1]),
        "Gp_at_R": float(curves.Gp.values[-1] + (R - g[-1]) * curves.Gp.derivs[-1]),
        "G_at_0": float(curves.G.values[0] - g[0] * curves.G.derivs[0]),
        "p_at_0": float(curves.p.values[0] - g[0] * curves.p.derivs[0]),
        "p_prime_near_0": float(curves.p.derivs[0]),
        "p_prime_limit": -curves.spectrum.lambda1 / curves.space.dim,
    }


def z1_limit_at_zero(space: SpaceSpec, lambda1: float, lambda2: float) -> dict:
    """Compare Z_1(0+) with the two printed closed forms for the r -> 0 limit."""
    kn, k = space.dim, space.k
    tail = 2.0 / 3.0 * (4 - kn - 3 * k)
    form_z1 = kn * (-lambda2 + (1 + 2 / kn) * lambda1 + tail)
    form_t1 = -lambda2 + (1 + 2 * lambda1 / kn) * lambda1 + tail
    # Richardson on r^2 from two small radii to remove the O(r^2) term
    r1, r2 = 2e-3, 1e-3
    z1a = Z_y_direct(space, lambda1, lambda2, r1, 1.0)
    z1b = Z_y_direct(space, lambda1, lambda2, r2, 1.0)
    numeric = (4 * z1b - z1a) / 3
    rel = lambda a: abs(a - numeric) / max(abs(numeric), 1.0)  # noqa: E731
    return {"numeric": numeric, "printed_z1_form": form_z1, "printed_T1_form": form_t1,
            "z1_form_rel_error": rel(form_z1), "T1_form_rel_error": rel(form_t1),
            "matches": "z1_form" if rel(form_z1) < rel(form_t1) else "T1_form"}
