"""Dirichlet eigenvalues of geodesic balls and annuli by shooting.

Roots of the boundary value lambda -> g_lambda(R) are bracketed with the
Sturm zero count of the shot solution (the k-th eigenvalue of a mode family
is where the count of interior zeros jumps from k to k+1), then refined by
Brent's method.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import DomainError, SpaceSpec, sphere_lambda1, spectrum_bottom
from .integrator import R_SEED, TOL_ODE, OdeMode, RadialProfile, shoot, shoot_interval

DEFAULT_TOL = 1e-11
MAX_EXPANSIONS = 60


class BracketError(RuntimeError):
    pass


class Lambda2Source(str, enum.Enum):
    RADIAL_SECOND = "radial_second"
    FIRST_HARMONIC_FIRST = "first_harmonic_first"


@dataclass(frozen=True)
class BallSpectrum:
    space: SpaceSpec
    R: float
    lambda1: float
    lambda2: float
    lambda02: float
    g1: RadialProfile
    g2: RadialProfile

    def summary(self) -> dict:
        return {
            "space": self.space.as_dict(),
            "radius": self.R,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "lambda02": self.lambda02,
            "g1_boundary": float(self.g1.values[-1]),
            "g2_boundary": float(self.g2.values[-1]),
            "nodes": len(self.g1),
        }


@dataclass(frozen=True)
class AnnulusSpectrum:
    space: SpaceSpec
    r_in: float
    r_out: float
    lambda1: float
    lambda2_candidate: float
    lambda2_source: Lambda2Source
    u1: RadialProfile
    lambda02: float
    lambda11: float

    def summary(self) -> dict:
        return {
            "space": self.space.as_dict(),
            "r_in": self.r_in,
            "r_out": self.r_out,
            "lambda1": self.lambda1,
            "lambda2_candidate": self.lambda2_candidate,
            "lambda2_source": self.lambda2_source.value,
            "lambda02": self.lambda02,
            "lambda11": self.lambda11,
        }


def _rough_scale(space: SpaceSpec, width: float, mode: OdeMode, index: int) -> float:
    # Euclidean-like guess bottom + j^2/width^2 with a crude Bessel-zero estimate
    nu = space.dim / 2 - 1 + (1 if mode is OdeMode.FIRST_HARMONIC else 0)
    j = nu + 2.4 + math.pi * index
    return spectrum_bottom(space) + (j / width) ** 2


def _find_root(shot, lam_floor: float, guess: float, index: int, tol: float) -> float:
    """Locate the ``index``-th (0-based) root of the shot boundary value."""
    lo = lam_floor
    c_lo = shot(lo).sign_changes
    if c_lo > index:
        raise BracketError(f"lower bracket {lo} already has {c_lo} interior zeros")
    hi = max(guess, lo + 1.0)
    for _ in range(MAX_EXPANSIONS):
        c_hi = shot(hi).sign_changes
        if c_hi > index:
            break
        lo, c_lo = hi, c_hi
        hi = 2.0 * hi
    else:
        raise BracketError("no sign change of the boundary value found while expanding the bracket")
    # narrow until the zero count jumps by exactly one across the bracket
    for _ in range(200):
        if c_lo == index and c_hi == index + 1:
            break
        mid = 0.5 * (lo + hi)
        c_mid = shot(mid).sign_changes
        if c_mid > index:
            hi, c_hi = mid, c_mid
        else:
            lo, c_lo = mid, c_mid
    else:
        raise BracketError("could not isolate a single root")
    f = lambda lam: shot(lam).boundary_value  # noqa: E731
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"bracket [{lo}, {hi}] without a sign change of the boundary value")
    return brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)


def _ball_shot(space, mode, R, tol_ode):
    def shot(lam):
        return shoot(space, mode, lam, R, tol=tol_ode, profile=False)
    return shot


def _check_radius(space: SpaceSpec, R: float):
    if not R > R_SEED:
        raise DomainError(f"radius must exceed the seed radius {R_SEED} (got {R})")
    if space.compact and R > math.pi / 4 + 1e-12:
        raise DomainError("compact type is restricted to R <= pi/4")


def _ball_eigenvalue(space, mode, R, index, tol, tol_ode):
    _check_radius(space, R)
    floor = spectrum_bottom(space)
    guess = _rough_scale(space, R, mode, index)
    return _find_root(_ball_shot(space, mode, R, tol_ode), floor, guess, index, tol)


def lambda1_ball(space: SpaceSpec, R: float, tol: float = DEFAULT_TOL, *, tol_ode: float = TOL_ODE) -> float:
    """First Dirichlet eigenvalue of the geodesic ball of radius R."""
    return _ball_eigenvalue(space, OdeMode.RADIAL, R, 0, tol, tol_ode)


def lambda2_ball(space: SpaceSpec, R: float, tol: float = DEFAULT_TOL, *, tol_ode: float = TOL_ODE) -> float:
    """Second Dirichlet eigenvalue: lowest root of the first-harmonic equation."""
    return _ball_eigenvalue(space, OdeMode.FIRST_HARMONIC, R, 0, tol, tol_ode)


def lambda02_ball(space: SpaceSpec, R: float, tol: float = DEFAULT_TOL, *, tol_ode: float = TOL_ODE) -> float:
    """Second radial eigenvalue (eigenfunction with one interior zero)."""
    return _ball_eigenvalue(space, OdeMode.RADIAL, R, 1, tol, tol_ode)


def radius_for_lambda1(space: SpaceSpec, lambda_target: float, tol: float = 1e-9) -> float:
    """Radius R with |lambda1_ball(R) - lambda_target| < tol (lambda1 is decreasing in R)."""
    bottom = spectrum_bottom(space)
    if lambda_target <= bottom + tol:
        raise DomainError(
            f"target {lambda_target} is not above the bottom of the spectrum {bottom}")
    r_max = math.pi / 4 if space.compact else math.inf

    def lam(R):
        return lambda1_ball(space, R, tol=min(tol, DEFAULT_TOL) * 1e-2)

    guess = min((space.dim / 2 + 1.4) / math.sqrt(lambda_target - bottom), 0.5 * r_max)
    lo = hi = max(guess, 4 * R_SEED)
    while lam(lo) < lambda_target:
        lo *= 0.5
        if lo <= 2 * R_SEED:
            raise DomainError("target eigenvalue needs a ball smaller than the seed radius allows")
    while lam(hi) > lambda_target:
        if hi >= r_max:
            raise DomainError("target eigenvalue needs a ball beyond pi/4")
        hi = min(2 * hi, r_max)
    if lo == hi:
        return lo
    # |dlambda/dR| ~ 2 lambda / R converts the eigenvalue tolerance into a radius tolerance
    xtol = 0.05 * tol * lo / (2 * lambda_target)
    return brentq(lambda R: lam(R) - lambda_target, lo, hi, xtol=xtol,
                  rtol=4 * np.finfo(float).eps, maxiter=200)


def ball_spectrum(space: SpaceSpec, R: float, tol: float = DEFAULT_TOL, *, n_nodes: int = 2001,
                  tol_ode: float = TOL_ODE) -> BallSpectrum:
    lam1 = lambda1_ball(space, R, tol, tol_ode=tol_ode)
    lam2 = lambda2_ball(space, R, tol, tol_ode=tol_ode)
    lam02 = lambda02_ball(space, R, tol, tol_ode=tol_ode)
    s1 = shoot(space, OdeMode.RADIAL, lam1, R, tol=tol_ode, n_nodes=n_nodes)
    s2 = shoot(space, OdeMode.FIRST_HARMONIC, lam2, R, tol=tol_ode, n_nodes=n_nodes)
    return BallSpectrum(space, R, lam1, lam2, lam02, s1.profile, s2.profile)


def _annulus_shot(space, mode, r_in, r_out, tol_ode):
    def shot(lam):
        return shoot_interval(space, mode, lam, r_in, r_out, tol=tol_ode, profile=False)
    return shot


def annulus_eigenvalue(space: SpaceSpec, r_in: float, r_out: float, mode: OdeMode, index: int,
                       tol: float = DEFAULT_TOL, *, tol_ode: float = TOL_ODE) -> float:
    if not 0 < r_in < r_out:
        raise DomainError(f"need 0 < r_in < r_out (got {r_in}, {r_out})")
    mode = OdeMode(mode)
    floor = spectrum_bottom(space)
    guess = _rough_scale(space, r_out - r_in, mode, index)
    return _find_root(_annulus_shot(space, mode, r_in, r_out, tol_ode), floor, guess, index, tol)


def annulus_spectrum(space: SpaceSpec, r_in: float, r_out: float, tol: float = DEFAULT_TOL, *,
                     n_nodes: int = 2001, tol_ode: float = TOL_ODE) -> AnnulusSpectrum:
    """Ground state and second-eigenvalue candidate of the annulus r_in < r < r_out.

    Only the radial and first-harmonic families are searched, so the
    candidate is an actual eigenvalue and hence >= the true second eigenvalue.
    """
    lam1 = annulus_eigenvalue(space, r_in, r_out, OdeMode.RADIAL, 0, tol, tol_ode=tol_ode)
    lam02 = annulus_eigenvalue(space, r_in, r_out, OdeMode.RADIAL, 1, tol, tol_ode=tol_ode)
    lam11 = annulus_eigenvalue(space, r_in, r_out, OdeMode.FIRST_HARMONIC, 0, tol, tol_ode=tol_ode)
    if lam11 <= lam1:
        raise BracketError("first-harmonic ground state below the radial ground state")
    if lam02 <= lam11:
        cand, src = lam02, Lambda2Source.RADIAL_SECOND
    else:
        cand, src = lam11, Lambda2Source.FIRST_HARMONIC_FIRST
    u = shoot_interval(space, OdeMode.RADIAL, lam1, r_in, r_out, tol=tol_ode, n_nodes=n_nodes)
    return AnnulusSpectrum(space, r_in, r_out, lam1, cand, src, u.profile, lam02, lam11)


GAP_PAIRS = ((2, 2), (2, 3), (2, 5), (4, 2), (4, 3), (8, 2))
GAP_RADII = tuple(round(0.1 * i, 10) for i in range(1, 51))


@dataclass(frozen=True)
class GapRow:
    R: float
    lambda1: float
    lambda2: float
    sphere_lambda1: float
    margin: float
    estimate_margin: float

    def as_tuple(self) -> tuple:
        return (self.R, self.lambda1, self.lambda2, self.sphere_lambda1, self.margin)


def estimate_margin(space: SpaceSpec, lambda1: float, lambda2: float) -> float:
    """lambda2/(kn+2) - lambda1/kn + (2kn+3k-1)/(3(kn+2)), nonnegative for balls in the noncompact case."""
    d, k = space.dim, space.k
    return lambda2 / (d + 2) - lambda1 / d + (2 * d + 3 * k - 1) / (3 * (d + 2))


def gap_row(space: SpaceSpec, R: float, tol: float = DEFAULT_TOL) -> GapRow:
    lam1 = lambda1_ball(space, R, tol)
    lam2 = lambda2_ball(space, R, tol)
    s = float(sphere_lambda1(space, R))
    return GapRow(R, lam1, lam2, s, lam2 - lam1 - s, estimate_margin(space, lam1, lam2))
