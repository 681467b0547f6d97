import math

import numpy as np
import pytest

from ross_spectra.eigen import (GAP_PAIRS, Lambda2Source, annulus_eigenvalue, annulus_spectrum, ball_spectrum,
                                estimate_margin, gap_row, lambda02_ball, lambda1_ball, lambda2_ball,
                                radius_for_lambda1)
from ross_spectra.geometry import DomainError, SpaceSpec, sphere_lambda1, spectrum_bottom
from ross_spectra.integrator import OdeMode
from ross_spectra.oracles import bessel_zeros, fd_extrapolated, interval_dirichlet_eigenvalue

H3 = SpaceSpec(1, 3)


@pytest.mark.parametrize("k,n", [(2, 2), (4, 2), (8, 2)])
def test_euclidean_calibration(k, n):
    space, R = SpaceSpec(k, n), 0.01
    nu = k * n / 2 - 1
    j1, j2 = bessel_zeros(nu, 2)
    jh = bessel_zeros(nu + 1, 1)[0]
    assert lambda1_ball(space, R) * R**2 == pytest.approx(j1**2, rel=5e-3)
    assert lambda2_ball(space, R) * R**2 == pytest.approx(jh**2, rel=5e-3)
    assert lambda02_ball(space, R) * R**2 == pytest.approx(j2**2, rel=5e-3)


def test_printed_bessel_values():
    assert bessel_zeros(1, 1)[0] ** 2 == pytest.approx(14.682, abs=1e-3)
    assert bessel_zeros(2, 1)[0] ** 2 == pytest.approx(26.375, abs=1e-3)
    assert bessel_zeros(1, 2)[1] ** 2 == pytest.approx(49.218, abs=1e-3)


@pytest.mark.parametrize("R", [0.3, 1.0, 4.0])
def test_exact_real_hyperbolic_3_space(R):
    assert lambda1_ball(H3, R) == pytest.approx(1 + (math.pi / R) ** 2, rel=1e-10)
    assert lambda02_ball(H3, R) == pytest.approx(1 + (2 * math.pi / R) ** 2, rel=1e-10)


@pytest.mark.parametrize("k,n,R", [(1, 2, 1.0), (2, 2, 1.0), (4, 3, 0.7), (2, 2, math.pi / 4)])
def test_against_matrix_oracle(k, n, R):
    space = SpaceSpec(k, n, "compact") if R == math.pi / 4 else SpaceSpec(k, n)
    fd_rad = fd_extrapolated(space, R, False, count=1)[0]
    fd_har = fd_extrapolated(space, R, True, count=1)[0]
    assert lambda1_ball(space, R) == pytest.approx(fd_rad, rel=1e-6)
    assert lambda2_ball(space, R) == pytest.approx(fd_har, rel=1e-6)


def test_domain_monotonicity(ch2):
    assert lambda1_ball(ch2, 1.0) > lambda1_ball(ch2, 2.0)
    assert lambda2_ball(ch2, 1.0) > lambda2_ball(ch2, 2.0)


def test_gap_at_unit_radius(ch2):
    row = gap_row(ch2, 1.0)
    assert row.lambda2 - row.lambda1 >= sphere_lambda1(ch2, 1.0)
    assert row.margin == pytest.approx(row.lambda2 - row.lambda1 - row.sphere_lambda1)


@pytest.mark.parametrize("k,n", GAP_PAIRS)
@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_mode_ordering(k, n, R):
    space = SpaceSpec(k, n)
    l1, l2, l02 = lambda1_ball(space, R), lambda2_ball(space, R), lambda02_ball(space, R)
    assert 0 < l1 < l2 < l02


def test_estimate_margin_formula(ch2):
    # kn = 4, k = 2: lambda2/6 - lambda1/4 + 13/18
    assert estimate_margin(ch2, 12.0, 30.0) == pytest.approx(5 - 3 + 13 / 18)


def test_radius_round_trip(ch2):
    lam = lambda1_ball(ch2, 1.3)
    assert radius_for_lambda1(ch2, lam) == pytest.approx(1.3, abs=1e-7)


def test_radius_monotone(ch2):
    assert radius_for_lambda1(ch2, 30.0) < radius_for_lambda1(ch2, 10.0)


def test_radius_below_spectrum(ch2):
    assert spectrum_bottom(ch2) == 4.0
    with pytest.raises(DomainError):
        radius_for_lambda1(ch2, 4.0)


def test_lambda1_decreases_towards_bottom(ch2):
    vals = [lambda1_ball(ch2, R) for R in (2.0, 5.0, 10.0, 20.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 4.0
    assert vals[-1] - 4.0 < 0.05


def test_compact_radius_limit(compact22):
    with pytest.raises(DomainError):
        lambda1_ball(compact22, 1.0)


@pytest.mark.parametrize("k,n,R", [(2, 2, 1.0), (4, 2, 0.5), (8, 2, 1.5)])
def test_ball_spectrum_invariants(k, n, R):
    sp = ball_spectrum(SpaceSpec(k, n), R)
    assert 0 < sp.lambda1 < sp.lambda2 <= sp.lambda02
    scale1, scale2 = np.max(np.abs(sp.g1.values)), np.max(np.abs(sp.g2.values))
    assert abs(sp.g1.values[-1]) < 1e-9 * scale1
    assert abs(sp.g2.values[-1]) < 1e-9 * scale2
    assert np.all(sp.g1.values[:-1] > 0)
    assert np.array_equal(sp.g1.grid, sp.g2.grid)


def test_annulus_exact_real_hyperbolic_3_space():
    # sinh(r) g solves the constant-coefficient equation, so lambda1 = 1 + (pi / width)^2
    assert annulus_eigenvalue(H3, 0.5, 1.2, OdeMode.RADIAL, 0) == pytest.approx(1 + (math.pi / 0.7) ** 2, rel=1e-10)


def test_annulus_near_ball(ch2):
    a = annulus_spectrum(ch2, 1e-4, 1.0)
    assert a.lambda1 == pytest.approx(lambda1_ball(ch2, 1.0), rel=1e-3)
    assert a.lambda2_candidate >= lambda2_ball(ch2, 1.0) * (1 - 1e-3)


def test_thin_annulus(ch2):
    a = annulus_spectrum(ch2, 1.0, 1.1)
    assert a.lambda1 == pytest.approx(interval_dirichlet_eigenvalue(0.1), rel=0.02)


@pytest.mark.parametrize("r_in,r_out", [(0.1, 0.6), (0.5, 1.5), (2.0, 3.0), (1.0, 1.1)])
def test_annulus_invariants(ch2, r_in, r_out):
    a = annulus_spectrum(ch2, r_in, r_out)
    assert a.lambda1 < a.lambda2_candidate
    assert a.lambda2_candidate == min(a.lambda02, a.lambda11)
    src = Lambda2Source.RADIAL_SECOND if a.lambda02 <= a.lambda11 else Lambda2Source.FIRST_HARMONIC_FIRST
    assert a.lambda2_source is src
    assert np.all(a.u1.values[1:-1] > 0)
    assert a.lambda1 == pytest.approx(fd_extrapolated(ch2, r_out, False, 1, r_in=r_in)[0], rel=1e-6)


def test_annulus_rejects_bad_radii(ch2):
    with pytest.raises(DomainError):
        annulus_spectrum(ch2, 1.0, 0.5)
