import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from ross_spectra.geometry import (Curvature, DomainError, SpaceSpec, ball_volume, mean_curvature,
                                   radius_for_volume, spectrum_bottom, sphere_lambda1, sphere_lambda1_prime,
                                   unit_sphere_area, volume_density)

SPACES = [SpaceSpec(1, 2), SpaceSpec(1, 3), SpaceSpec(2, 2), SpaceSpec(2, 3), SpaceSpec(4, 2), SpaceSpec(8, 2),
          SpaceSpec(2, 2, Curvature.COMPACT), SpaceSpec(4, 3, Curvature.COMPACT)]


def test_space_validation():
    with pytest.raises(DomainError):
        SpaceSpec(3, 2)
    with pytest.raises(DomainError):
        SpaceSpec(2, 1)
    with pytest.raises(DomainError):
        SpaceSpec(8, 3)
    assert SpaceSpec(4, 2).dim == 8
    assert SpaceSpec(2, 2, "compact").label == "CP2"


def test_density_examples():
    assert volume_density(SpaceSpec(1, 2), 0.7) == pytest.approx(math.sinh(0.7), rel=1e-15)
    ref = float(mpmath.sinh(1) ** 3 * mpmath.cosh(1))
    assert volume_density(SpaceSpec(2, 2), 1.0) == pytest.approx(ref, rel=1e-14)
    assert ref == pytest.approx(2.504525, abs=1e-6)
    assert volume_density(SpaceSpec(2, 2, Curvature.COMPACT), math.pi / 4) == pytest.approx(0.25, rel=1e-14)


def test_nonpositive_radius_rejected():
    with pytest.raises(DomainError):
        volume_density(SpaceSpec(2, 2), 0.0)
    with pytest.raises(DomainError):
        ball_volume(SpaceSpec(2, 2), -1.0)


def test_mean_curvature_examples():
    r = 0.9
    assert mean_curvature(SpaceSpec(1, 4), r) == pytest.approx(3 / math.tanh(r), rel=1e-14)
    ref = float(3 * mpmath.coth(1) + mpmath.tanh(1))
    assert mean_curvature(SpaceSpec(2, 2), 1.0) == pytest.approx(ref, rel=1e-14)
    assert ref == pytest.approx(4.70070, abs=1e-5)
    assert mean_curvature(SpaceSpec(2, 2), 40.0) == pytest.approx(4.0, rel=1e-12)


@pytest.mark.parametrize("space", SPACES, ids=lambda s: s.label)
def test_mean_curvature_is_log_derivative_of_density(space):
    # oracle: high-precision numerical derivative of log J
    a, b = space.dim - 1, space.k - 1
    s, c = (mpmath.sin, mpmath.cos) if space.compact else (mpmath.sinh, mpmath.cosh)
    for r in (0.1, 0.5, 0.7):
        with mpmath.workdps(30):
            d = mpmath.diff(lambda t: a * mpmath.log(s(t)) + b * mpmath.log(c(t)), r)
        assert mean_curvature(space, r) == pytest.approx(float(d), rel=1e-12)


def _mp_mean_curvature(space, t):
    a, b = space.dim - 1, space.k - 1
    if space.compact:
        return a * mpmath.cot(t) - b * mpmath.tan(t)
    return a * mpmath.coth(t) + b * mpmath.tanh(t)


@pytest.mark.parametrize("space", SPACES, ids=lambda s: s.label)
def test_sphere_lambda1_is_minus_h_prime(space):
    for r in (0.2, 0.6):
        with mpmath.workdps(30):
            d = mpmath.diff(lambda t: _mp_mean_curvature(space, t), r)
            d2 = mpmath.diff(lambda t: _mp_mean_curvature(space, t), r, 2)
        assert sphere_lambda1(space, r) == pytest.approx(-float(d), rel=1e-10)
        assert sphere_lambda1_prime(space, r) == pytest.approx(-float(d2), rel=1e-10)


def test_sphere_lambda1_examples():
    ref = 3 / math.sinh(1) ** 2 - 1 / math.cosh(1) ** 2
    assert sphere_lambda1(SpaceSpec(2, 2), 1.0) == pytest.approx(ref, rel=1e-14)
    assert ref == pytest.approx(1.75222, abs=1e-5)
    assert sphere_lambda1(SpaceSpec(2, 2), 30.0) == pytest.approx(0.0, abs=1e-20)


def test_sphere_lambda1_vectorised():
    r = np.array([0.5, 1.0, 2.0])
    out = sphere_lambda1(SpaceSpec(2, 2), r)
    assert out.shape == (3,)
    assert out[1] == pytest.approx(sphere_lambda1(SpaceSpec(2, 2), 1.0))


def test_ball_volume_examples():
    assert ball_volume(SpaceSpec(2, 2), 1.0) == pytest.approx(2 * math.pi**2 * math.sinh(1) ** 4 / 4, rel=1e-13)
    assert ball_volume(SpaceSpec(2, 2), 1.0) == pytest.approx(9.41280, abs=1e-5)
    for r in (0.3, 1.0, 2.5):
        assert ball_volume(SpaceSpec(1, 2), r) == pytest.approx(2 * math.pi * (math.cosh(r) - 1), rel=1e-11)


@pytest.mark.parametrize("space", SPACES, ids=lambda s: s.label)
def test_ball_volume_against_quadrature(space):
    omega = unit_sphere_area(space.dim)
    for r in (0.05, 0.5, 0.78):
        ref, _ = integrate.quad(lambda t: float(volume_density(space, t)), 0, r, epsabs=0, epsrel=1e-13)
        assert ball_volume(space, r) == pytest.approx(omega * ref, rel=1e-10)


@pytest.mark.parametrize("space", SPACES[:6], ids=lambda s: s.label)
def test_ball_volume_euclidean_limit(space):
    d = space.dim
    r = 1e-3
    euclid = math.pi ** (d / 2) / math.gamma(d / 2 + 1) * r**d
    assert ball_volume(space, r) == pytest.approx(euclid, rel=1e-5)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SPACES), st.floats(0.01, 0.75), st.floats(0.001, 0.03))
def test_ball_volume_monotone(space, r, dr):
    assert ball_volume(space, r + dr) > ball_volume(space, r)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SPACES), st.floats(0.01, 0.75))
def test_radius_for_volume_round_trip(space, r):
    assert radius_for_volume(space, ball_volume(space, r)) == pytest.approx(r, rel=1e-10)


def test_spectrum_bottom():
    assert spectrum_bottom(SpaceSpec(2, 2)) == 4.0
    assert spectrum_bottom(SpaceSpec(8, 2)) == 121.0
    assert spectrum_bottom(SpaceSpec(1, 3)) == 1.0
