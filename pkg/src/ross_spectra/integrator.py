"""Shooting integrator for the singular radial eigenvalue ODE

    g'' + H(r) g' + (lambda - nu(r)) g = 0,

where ``nu = 0`` for radial modes and ``nu = lambda_1(S_r)`` for the
first spherical harmonic.  Integration starts from a Frobenius series seed
at a small radius because r = 0 is a regular singular point.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import ode, solve_ivp

from . import series
from .geometry import DomainError, SpaceSpec

R_SEED = 1e-3
R_SEED_MAX = 0.05
SEED_ORDER = 4
TOL_ODE = 1e-11
RENORM_THRESHOLD = 1e8
# the state is kept within [1/RENORM_THRESHOLD, RENORM_THRESHOLD], so atol stays far below it
ATOL_FACTOR = 1e-12
COMPACT_R_MAX = math.pi / 4


class OdeMode(str, enum.Enum):
    RADIAL = "radial"
    FIRST_HARMONIC = "first_harmonic"

    @property
    def leading_power(self) -> int:
        return 0 if self is OdeMode.RADIAL else 1


class IntegrationError(RuntimeError):
    def __init__(self, message: str, last_r: float):
        super().__init__(f"{message} (last good r = {last_r:.6g})")
        self.last_r = last_r


@dataclass(frozen=True)
class RadialProfile:
    grid: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    domain: tuple[float, float]

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        derivs = np.asarray(self.derivs, dtype=float)
        if not (grid.shape == values.shape == derivs.shape):
            raise ValueError("grid, values and derivs must have the same length")
        if grid.size and np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        lo, hi = self.domain
        if grid.size and (grid[0] < lo - 1e-15 or grid[-1] > hi + 1e-15):
            raise ValueError("grid leaves the profile domain")
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(derivs))):
            raise ValueError("profile values must be finite")
        for name, arr in (("grid", grid), ("values", values), ("derivs", derivs)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "domain", (float(lo), float(hi)))

    def __len__(self) -> int:
        return self.grid.size

    def scaled(self, factor: float) -> RadialProfile:
        return RadialProfile(self.grid, self.values * factor, self.derivs * factor, self.domain)


@dataclass(frozen=True)
class ShotResult:
    boundary_value: float
    boundary_deriv: float
    sign_changes: int
    profile: RadialProfile | None  # None for boundary-only shots


# ------------------------------------------------------------------ seeds

@lru_cache(maxsize=None)
def _seed_coefficients(k: int, n: int, compact: bool, mode: OdeMode, order: int):
    """Coefficients of the Frobenius recurrence as polynomials in lambda.

    Returns a list ``a`` with ``a[j] = (c0, c1, ...)`` meaning
    ``a_j = sum_i c_i * lambda**i`` for the series ``r^m * sum_j a_j r^j``.
    """
    N = order + 4
    if compact:
        s, c = series.sin(N + 4), series.cos(N + 4)
    else:
        s, c = series.sinh(N + 4), series.cosh(N + 4)
    a_, b_ = k * n - 1, k - 1
    sign = -1 if compact else 1
    rH = (c / s * a_ + s / c * (b_ * sign)).shift(1)
    if mode is OdeMode.RADIAL:
        rnu = series.RationalSeries.zero(N)
    else:
        rnu = ((s ** -2) * a_ + (c ** -2) * (-b_ * sign)).shift(2)
    eta = [rH[i] for i in range(order + 1)]
    mu = [rnu[i] for i in range(order + 1)]
    m = mode.leading_power
    # each a_j is a polynomial in lambda, stored as a list of Fractions
    coeffs: list[list[Fraction]] = [[Fraction(1)]]
    for j in range(1, order + 1):
        denom = (m + j) * (m + j - 1) + eta[0] * (m + j) - mu[0]
        acc = [Fraction(0)] * (j // 2 + 1)
        for i in range(1, j + 1):
            f = eta[i] * (m + j - i) - mu[i]
            if f:
                for p, cp in enumerate(coeffs[j - i]):
                    acc[p] -= f * cp
        if j >= 2:
            for p, cp in enumerate(coeffs[j - 2]):
                acc[p + 1] -= cp
        coeffs.append([x / denom for x in acc])
    return tuple(tuple(c) for c in coeffs)


def seed_series(space: SpaceSpec, mode: OdeMode, lam: float, order: int = SEED_ORDER) -> list[float]:
    """Frobenius coefficients a_0..a_order (a_0 = 1) at eigenvalue ``lam``."""
    poly = _seed_coefficients(space.k, space.n, space.compact, OdeMode(mode), order)
    return [sum(float(c) * lam**p for p, c in enumerate(cs)) for cs in poly]


def frobenius_seed(space: SpaceSpec, mode: OdeMode, lam: float, r: float,
                   order: int = SEED_ORDER) -> tuple[float, float]:
    """Truncated Frobenius solution (value, derivative) at small radius r."""
    if not 0 < r <= R_SEED_MAX:
        raise DomainError(f"seed radius must lie in (0, {R_SEED_MAX}] (got {r})")
    mode = OdeMode(mode)
    a = seed_series(space, mode, lam, order)
    m = mode.leading_power
    value = sum(aj * r ** (m + j) for j, aj in enumerate(a))
    deriv = sum((m + j) * aj * r ** (m + j - 1) for j, aj in enumerate(a) if m + j)
    return value, deriv


# ------------------------------------------------------------------ shooting

def _rhs_factory(space: SpaceSpec, mode: OdeMode, lam: float):
    a_, b_ = space.dim - 1, space.k - 1
    harmonic = mode is OdeMode.FIRST_HARMONIC
    if space.compact:
        def rhs(r, y):
            t = math.tan(r)
            H = a_ / t - b_ * t
            nu = a_ / math.sin(r) ** 2 + b_ / math.cos(r) ** 2 if harmonic else 0.0
            return [y[1], -H * y[1] - (lam - nu) * y[0]]
    else:
        def rhs(r, y):
            t = math.tanh(r)
            H = a_ / t + b_ * t
            nu = a_ / math.sinh(r) ** 2 - b_ / math.cosh(r) ** 2 if harmonic else 0.0
            return [y[1], -H * y[1] - (lam - nu) * y[0]]
    return rhs


def _count_sign_changes(values: np.ndarray) -> int:
    nz = values[values != 0.0]
    return int(np.count_nonzero(np.signbit(nz[1:]) != np.signbit(nz[:-1])))


def _integrate(space, mode, lam, r0, y0, r_end, tol, n_nodes, need_profile):
    rhs = _rhs_factory(space, OdeMode(mode), lam)

    def overflow(r, y):
        return max(abs(y[0]), abs(y[1])) - RENORM_THRESHOLD
    overflow.terminal = True
    overflow.direction = 1

    def underflow(r, y):
        return max(abs(y[0]), abs(y[1])) - 1.0 / RENORM_THRESHOLD
    underflow.terminal = True
    underflow.direction = -1

    grid = np.linspace(r0, r_end, n_nodes) if need_profile else None
    y = np.array(y0, dtype=float)
    r = r0
    log_scale = 0.0
    pieces = []  # (r values, y values, log_scale at that time)
    while True:
        sol = solve_ivp(rhs, (r, r_end), y, method="DOP853", rtol=tol, atol=tol * ATOL_FACTOR,
                        dense_output=True, events=(overflow, underflow))
        if sol.status == -1:
            raise IntegrationError(sol.message, float(sol.t[-1]))
        ts = sol.t
        sample = ts
        if need_profile:
            inside = grid[(grid >= ts[0]) & (grid <= ts[-1])]
            sample = np.union1d(ts, inside)
        ys = sol.sol(sample) if sample.size > 1 else sol.y[:, -1:]
        ys[:, 0] = y
        ys[:, -1] = sol.y[:, -1]
        pieces.append((sample, ys, log_scale))
        if sol.status == 1:  # overflow or underflow event: renormalise by a positive factor
            y = sol.y[:, -1]
            factor = max(abs(y[0]), abs(y[1]))
            y = y / factor
            log_scale += math.log(factor)
            r = float(sol.t[-1])
            continue
        break
    final_scale = log_scale
    rs, vals, ders = [], [], []
    for sample, ys, ls in pieces:
        w = math.exp(ls - final_scale)
        rs.append(sample)
        vals.append(ys[0] * w)
        ders.append(ys[1] * w)
    r_all = np.concatenate(rs)
    v_all = np.concatenate(vals)
    d_all = np.concatenate(ders)
    r_all, idx = np.unique(r_all, return_index=True)
    v_all, d_all = v_all[idx], d_all[idx]
    sign_changes = _count_sign_changes(v_all)
    bv, bd = float(v_all[-1]), float(d_all[-1])
    if need_profile:
        keep = np.isin(r_all, grid)
        prof = RadialProfile(r_all[keep], v_all[keep], d_all[keep], (0.0 if r0 == R_SEED else r0, r_end))
    else:
        prof = RadialProfile(r_all[[0, -1]], v_all[[0, -1]], d_all[[0, -1]], (0.0, r_end))
    return bv, bd, sign_changes, prof


def _integrate_boundary(space, mode, lam, r0, y0, r_end, tol):
    """Boundary data and sign count only, via the compiled DOP853 driver.

    Same method and tolerances as :func:`_integrate`; the state is sampled
    at every accepted step for the zero count, and the run is interrupted
    and restarted whenever the state leaves the renormalisation band.
    """
    rhs = _rhs_factory(space, OdeMode(mode), lam)
    state = {"sign": 0, "changes": 0, "leave": False}
    lo_band, hi_band = 1.0 / RENORM_THRESHOLD, RENORM_THRESHOLD

    def solout(t, y):
        v = y[0]
        if v != 0.0:
            sg = 1 if v > 0 else -1
            if state["sign"] and sg != state["sign"]:
                state["changes"] += 1
            state["sign"] = sg
        m = max(abs(y[0]), abs(y[1]))
        if (m > hi_band or m < lo_band) and t < r_end:
            state["leave"] = True
            return -1
        return 0

    y = np.array(y0, dtype=float)
    r = float(r0)
    while True:
        state["leave"] = False
        solver = ode(rhs).set_integrator("dop853", rtol=tol, atol=tol * ATOL_FACTOR, nsteps=100000)
        solver.set_solout(solout)
        solver.set_initial_value(y, r)
        out = solver.integrate(r_end)
        if not state["leave"]:
            if not solver.successful():
                raise IntegrationError("compiled DOP853 driver failed", float(solver.t))
            return float(out[0]), float(out[1]), state["changes"]
        y = np.array(out, dtype=float)
        y /= max(abs(y[0]), abs(y[1]))
        r = float(solver.t)


def _check_end(space: SpaceSpec, r_end: float):
    if space.compact and r_end > COMPACT_R_MAX + 1e-12:
        raise DomainError(f"compact type is restricted to r <= pi/4 (got {r_end})")


def shoot(space: SpaceSpec, mode: OdeMode, lam: float, r_end: float, *,
          tol: float = TOL_ODE, r_seed: float = R_SEED, n_nodes: int = 2001,
          profile: bool = True) -> ShotResult:
    """Integrate from the Frobenius seed at ``r_seed`` out to ``r_end``.

    The profile is sampled on a uniform grid on [r_seed, r_end]; sign
    changes are counted on the union of that grid and every accepted
    integrator step.
    """
    if r_end <= r_seed:
        raise DomainError(f"r_end must exceed the seed radius {r_seed}")
    _check_end(space, r_end)
    y0 = frobenius_seed(space, mode, lam, r_seed)
    if not profile:
        bv, bd, sc = _integrate_boundary(space, mode, lam, r_seed, y0, r_end, tol)
        return ShotResult(bv, bd, sc, None)
    bv, bd, sc, prof = _integrate(space, mode, lam, r_seed, y0, r_end, tol, n_nodes, profile)
    if profile:
        prof = RadialProfile(prof.grid, prof.values, prof.derivs, (0.0, r_end))
    return ShotResult(bv, bd, sc, prof)


def shoot_interval(space: SpaceSpec, mode: OdeMode, lam: float, r_in: float, r_out: float, *,
                   tol: float = TOL_ODE, n_nodes: int = 2001, profile: bool = True) -> ShotResult:
    """Integrate from g(r_in) = 0, g'(r_in) = 1 out to ``r_out`` (annulus problems)."""
    if not 0 < r_in < r_out:
        raise DomainError(f"need 0 < r_in < r_out (got {r_in}, {r_out})")
    _check_end(space, r_out)
    if not profile:
        bv, bd, sc = _integrate_boundary(space, mode, lam, r_in, (0.0, 1.0), r_out, tol)
        return ShotResult(bv, bd, sc, None)
    bv, bd, sc, prof = _integrate(space, mode, lam, r_in, (0.0, 1.0), r_out, tol, n_nodes, profile)
    return ShotResult(bv, bd, sc, RadialProfile(prof.grid, prof.values, prof.derivs, (r_in, r_out)))
