"""Independent reference computations used to cross-check the shooting solver.

Nothing here shares code paths with :mod:`ross_spectra.integrator`:
Bessel zeros come from a high-precision power series with bisection, and
the matrix oracle is a finite-volume discretisation of the weighted form

    -(J g')' + nu J g = lambda J g.
"""
from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy.linalg import eigh_tridiagonal

from .geometry import SpaceSpec


def bessel_j(nu: float, x, dps: int = 40):
    """J_nu(x) from its power series, evaluated at ``dps`` decimal digits."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        nu = mpmath.mpf(nu)
        half = x / 2
        term = half**nu / mpmath.gamma(nu + 1)
        total = term
        q = -(half**2)
        m = 0
        while True:
            m += 1
            term = term * q / (m * (m + nu))
            total += term
            if abs(term) < mpmath.mpf(10) ** (-dps) * max(abs(total), 1) and m > x:
                break
        return total


def bessel_zeros(nu: float, count: int, step: float = 0.05, tol: float = 1e-15) -> list[float]:
    """First ``count`` positive zeros of J_nu by scanning plus bisection."""
    zeros: list[float] = []
    a = step
    fa = bessel_j(nu, a)
    while len(zeros) < count:
        b = a + step
        fb = bessel_j(nu, b)
        if fa == 0:
            zeros.append(a)
        elif fa * fb < 0:
            lo, hi, flo = a, b, fa
            while hi - lo > tol * hi:
                mid = 0.5 * (lo + hi)
                fm = bessel_j(nu, mid)
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            zeros.append(0.5 * (lo + hi))
        a, fa = b, fb
    return zeros


def _cell_integral(f, edges: np.ndarray, points: int = 6) -> np.ndarray:
    x, w = np.polynomial.legendre.leggauss(points)
    lo, hi = edges[:-1], edges[1:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    return (f(nodes) * w[None, :]).sum(axis=1) * half


def fd_eigenvalues(space: SpaceSpec, R: float, harmonic: bool, count: int = 2,
                   nodes: int = 4000, r_in: float = 0.0) -> np.ndarray:
    """Smallest eigenvalues of the finite-volume discretisation on [r_in, R].

    ``harmonic`` adds the first sphere eigenvalue as potential.  At r_in = 0
    the radial mode has a natural (flux-free) condition and the harmonic
    mode a Dirichlet condition; at r_in > 0 both are Dirichlet.
    """
    a, b = space.dim - 1, space.k - 1
    if space.compact:
        J = lambda r: np.sin(r) ** a * np.cos(r) ** b  # noqa: E731
        nu = lambda r: a / np.sin(r) ** 2 + b / np.cos(r) ** 2  # noqa: E731
    else:
        J = lambda r: np.sinh(r) ** a * np.cosh(r) ** b  # noqa: E731
        nu = lambda r: a / np.sinh(r) ** 2 - b / np.cosh(r) ** 2  # noqa: E731
    r = np.linspace(r_in, R, nodes + 1)
    h = r[1] - r[0]
    half = 0.5 * (r[:-1] + r[1:])
    Jh = J(half)
    edges = np.concatenate(([r_in], half, [R]))
    mass = _cell_integral(J, edges)
    pot = _cell_integral(lambda t: nu(t) * J(t), edges) if harmonic else np.zeros_like(mass)
    # stiffness for unknowns i = 0..N-1 (g_N = 0)
    diag = np.zeros(nodes)
    diag[:] = Jh / h
    diag[1:] += Jh[:-1] / h
    off = -Jh[: nodes - 1] / h
    diag += pot[:nodes]
    m = mass[:nodes]
    first = 1 if (harmonic or r_in > 0) else 0
    diag, off, m = diag[first:], off[first:], m[first:]
    s = 1.0 / np.sqrt(m)
    d = diag * s * s
    e = off * s[:-1] * s[1:]
    return eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, count - 1))


def fd_extrapolated(space: SpaceSpec, R: float, harmonic: bool, count: int = 2,
                    nodes: int = 4000, r_in: float = 0.0) -> np.ndarray:
    """Richardson extrapolation of :func:`fd_eigenvalues` from ``nodes`` and ``2*nodes``."""
    coarse = fd_eigenvalues(space, R, harmonic, count, nodes, r_in)
    fine = fd_eigenvalues(space, R, harmonic, count, 2 * nodes, r_in)
    return (4 * fine - coarse) / 3


def interval_dirichlet_eigenvalue(length: float, index: int = 1) -> float:
    """Eigenvalue (index*pi/length)^2 of -u'' on an interval with Dirichlet ends."""
    return (index * math.pi / length) ** 2
