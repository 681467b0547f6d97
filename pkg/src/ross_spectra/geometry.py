"""Closed-form radial geometry of rank-one symmetric spaces.

All quantities are functions of the geodesic distance ``r`` from a pole.
``k`` is the real dimension of the field (1, 2, 4, 8) and ``n`` the rank
parameter, so the real dimension of the space is ``k * n``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy import integrate, special


class Curvature(str, enum.Enum):
    NONCOMPACT = "noncompact"
    COMPACT = "compact"


class DomainError(ValueError):
    """Raised when an argument lies outside the admissible domain."""


@dataclass(frozen=True)
class SpaceSpec:
    k: int
    n: int
    curvature: Curvature = Curvature.NONCOMPACT

    def __post_init__(self):
        if self.k not in (1, 2, 4, 8):
            raise DomainError(f"k must be one of 1, 2, 4, 8 (got {self.k})")
        if self.n < 2:
            raise DomainError(f"n must be >= 2 (got {self.n})")
        if self.k == 8 and self.n != 2:
            raise DomainError("the octonionic plane only exists for n = 2")
        object.__setattr__(self, "curvature", Curvature(self.curvature))

    @property
    def dim(self) -> int:
        return self.k * self.n

    @property
    def compact(self) -> bool:
        return self.curvature is Curvature.COMPACT

    @property
    def label(self) -> str:
        field = {1: "R", 2: "C", 4: "H", 8: "O"}[self.k]
        kind = "P" if self.compact else "H"
        return f"{field}{kind}{self.n}"

    def as_dict(self) -> dict:
        return {"k": self.k, "n": self.n, "curvature": self.curvature.value}


def _check_r(space: SpaceSpec, r):
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError(f"r must be positive (got {r})")
    if space.compact and np.any(arr >= math.pi / 2):
        raise DomainError(f"compact type requires r < pi/2 (got {r})")
    return arr


def _trig(space: SpaceSpec, r):
    if space.compact:
        return np.sin(r), np.cos(r)
    return np.sinh(r), np.cosh(r)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def volume_density(space: SpaceSpec, r):
    """J(r) = s^(kn-1) c^(k-1) with (s, c) = (sinh, cosh) or (sin, cos)."""
    r = _check_r(space, r)
    s, c = _trig(space, r)
    return _scalar(s ** (space.dim - 1) * c ** (space.k - 1))


def mean_curvature(space: SpaceSpec, r):
    """H(r) = J'(r)/J(r), the mean curvature of the geodesic sphere."""
    r = _check_r(space, r)
    a, b = space.dim - 1, space.k - 1
    if space.compact:
        return _scalar(a / np.tan(r) - b * np.tan(r))
    return _scalar(a / np.tanh(r) + b * np.tanh(r))


def sphere_lambda1(space: SpaceSpec, r):
    """First nonzero eigenvalue of the geodesic sphere of radius r (= -H'(r))."""
    r = _check_r(space, r)
    a, b = space.dim - 1, space.k - 1
    s, c = _trig(space, r)
    if space.compact:
        return _scalar(a / s**2 + b / c**2)
    return _scalar(a / s**2 - b / c**2)


def sphere_lambda1_prime(space: SpaceSpec, r):
    """Analytic r-derivative of :func:`sphere_lambda1`."""
    r = _check_r(space, r)
    a, b = space.dim - 1, space.k - 1
    s, c = _trig(space, r)
    if space.compact:
        return _scalar(-2 * a * c / s**3 + 2 * b * s / c**3)
    return _scalar(-2 * a * c / s**3 + 2 * b * s / c**3)


def mean_curvature_prime(space: SpaceSpec, r):
    return -sphere_lambda1(space, r)


def unit_sphere_area(d: int) -> float:
    """Surface area of the unit sphere S^(d-1) in R^d."""
    return 2.0 * math.pi ** (d / 2) / special.gamma(d / 2)


def _closed_form_integral(space: SpaceSpec, r: float) -> float | None:
    # For even k: sinh^(kn-1) cosh^(k-1) = sum_j C(m, j) sinh^(kn-1+2j) cosh,
    # m = (k-2)/2, whose antiderivative is a polynomial in sinh.
    if space.compact or space.k % 2:
        return None
    m = (space.k - 2) // 2
    s = math.sinh(r)
    return sum(comb(m, j) * s ** (space.dim + 2 * j) / (space.dim + 2 * j) for j in range(m + 1))


def ball_volume(space: SpaceSpec, r: float) -> float:
    """Volume of the geodesic ball of radius r.

    Normalised with the area of the unit Euclidean (kn-1)-sphere, so the
    result tends to the Euclidean ball volume as r -> 0.
    """
    r = float(_check_r(space, r))
    omega = unit_sphere_area(space.dim)
    exact = _closed_form_integral(space, r)
    if exact is not None:
        return omega * exact
    val, _ = integrate.quad(
        lambda t: float(volume_density(space, t)) if t > 0 else 0.0,
        0.0, r, epsabs=1e-12, epsrel=1e-13, limit=200,
    )
    return omega * val


def radius_for_volume(space: SpaceSpec, volume: float, tol: float = 1e-13) -> float:
    """Inverse of :func:`ball_volume` by monotone bisection."""
    if volume <= 0:
        raise DomainError("volume must be positive")
    lo, hi = 0.0, 1.0
    upper = math.pi / 2 - 1e-12 if space.compact else math.inf
    while ball_volume(space, min(hi, upper)) < volume:
        if hi >= upper:
            raise DomainError("volume exceeds the largest admissible ball")
        lo, hi = hi, min(2 * hi, upper)
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if ball_volume(space, mid) < volume:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def spectrum_bottom(space: SpaceSpec) -> float:
    """Bottom of the L^2 spectrum of the noncompact space, (kn+k-2)^2/4."""
    if space.compact:
        return 0.0
    return (space.dim + space.k - 2) ** 2 / 4.0
