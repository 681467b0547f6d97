import dataclasses
import math

import numpy as np
import pytest

from ross_spectra.geometry import SpaceSpec, mean_curvature, sphere_lambda1
from ross_spectra.integrator import OdeMode, shoot
from ross_spectra.quotient import (DegenerateSpectrumError, T_field, Z_y_direct, b_prime, build_quotient_curves,
                                   endpoint_limits, verify_monotonicity, z1_limit_at_zero)


@pytest.fixture(scope="module")
def curves22(ball22):
    return build_quotient_curves(ball22)


def _fd4(values, grid):
    # fourth-order central differences on the uniform grid; ends are left as nan
    h = grid[1] - grid[0]
    out = np.full_like(values, np.nan)
    out[2:-2] = (values[:-4] - 8 * values[1:-3] + 8 * values[3:-1] - values[4:]) / (12 * h)
    return out


def _interior(c, lo=0.02, hi=0.98):
    R = c.spectrum.R
    return (c.grid > lo * R) & (c.grid < hi * R)


def test_endpoint_limits(curves22):
    lim = endpoint_limits(curves22)
    assert lim["q_at_0"] == pytest.approx(1.0, abs=1e-3)
    assert lim["q_at_R"] == pytest.approx(0.0, abs=1e-3)
    assert abs(lim["Gp_at_R"]) < 1e-3 * np.max(np.abs(curves22.Gp.values))
    assert lim["G_at_0"] == pytest.approx(0.0, abs=1e-6)
    assert lim["p_at_0"] == pytest.approx(0.0, abs=1e-6)
    assert lim["p_prime_near_0"] == pytest.approx(lim["p_prime_limit"], rel=1e-3)


def test_q_near_seed(curves22):
    assert curves22.q.values[0] == pytest.approx(1.0, abs=5e-3)


def test_p_negative(curves22):
    assert np.all(curves22.p.values < 0)


def test_B_definition(curves22):
    s = sphere_lambda1(curves22.space, curves22.grid)
    assert np.allclose(curves22.B.values, curves22.Gp.values**2 + s * curves22.G.values**2, rtol=1e-14)


def test_q_prime_against_finite_differences(curves22):
    c = curves22
    fd = np.gradient(c.q.values, c.grid)
    m = _interior(c)
    err = np.max(np.abs(fd[m] - c.q.derivs[m]))
    assert err < 1e-6 * np.max(np.abs(c.q.derivs[m])) + 1e-6


def test_p_riccati_against_finite_differences(curves22):
    c = curves22
    fd = _fd4(c.p.values, c.grid)
    m = _interior(c, 0.02, 0.95)
    ric = -c.p.values**2 - mean_curvature(c.space, c.grid) * c.p.values - c.spectrum.lambda1
    assert np.allclose(c.p.derivs, ric, rtol=1e-12)
    assert np.max(np.abs(fd[m] - ric[m]) / np.abs(ric[m])) < 1e-6


def test_b_prime_against_finite_differences(curves22):
    c = curves22
    fd = np.gradient(c.B.values, c.grid)
    scale = np.max(np.abs(c.B.derivs))
    idx = np.linspace(100, len(c.grid) - 100, 20).astype(int)
    for i in idx:
        assert abs(b_prime(c, c.grid[i]) - fd[i]) < 1e-5 * scale
    assert b_prime(c, 0.5) <= 0


def test_b_prime_range(curves22):
    with pytest.raises(ValueError):
        b_prime(curves22, 2.0)


def test_T_limits(curves22):
    sp, l1, l2 = curves22.space, curves22.spectrum.lambda1, curves22.spectrum.lambda2
    # at r -> 0 with p -> 0, T(r, y) ~ (1 - y)(kn - 1 + y) / r
    small = [T_field(sp, l1, l2, 0.0, r, 0.5) for r in (1e-2, 1e-3, 1e-4)]
    assert small[0] < small[1] < small[2] and small[2] > 1e3
    assert T_field(sp, l1, l2, 0.0, 1e-5, 1.0) == pytest.approx(0.0, abs=1e-3)
    # at r -> R, p -> -infinity
    ps = curves22.p.values[-3:]
    nearR = [T_field(sp, l1, l2, p, r, 0.5) for p, r in zip(ps, curves22.grid[-3:])]
    assert nearR[0] < nearR[1] < nearR[2] and nearR[2] > 1e3


def test_z1_limit_matches_z1_form(ball22):
    res = z1_limit_at_zero(ball22.space, ball22.lambda1, ball22.lambda2)
    assert res["matches"] == "z1_form"
    assert res["z1_form_rel_error"] < 1e-3


def test_z1_increasing(ball22):
    r = np.linspace(1e-3, ball22.R, 2000)[1:-1]
    z = Z_y_direct(ball22.space, ball22.lambda1, ball22.lambda2, r, 1.0)
    assert np.all(np.diff(z) > 0)


def test_Z_equals_T_derivative_on_zero_set(ball22):
    # along a curve y(r) with T(r, y(r)) = 0, dT/dr|_y agrees with Z_y; check via the partial derivative
    sp, l1, l2 = ball22.space, ball22.lambda1, ball22.lambda2
    r0, y, h = 0.6, 0.7, 1e-5
    # pick p so that T(r0, y) = 0, then Z_y is the r-derivative of T with p following its Riccati flow
    base = T_field(sp, l1, l2, 0.0, r0, y)
    p0 = base / (2 * y)
    H = mean_curvature(sp, r0)
    pp = -p0**2 - H * p0 - l1
    def T(r):
        return T_field(sp, l1, l2, p0 + pp * (r - r0), r, y)
    assert T(r0) == pytest.approx(0.0, abs=1e-12)
    dT = (T(r0 + h) - T(r0 - h)) / (2 * h)
    assert Z_y_direct(sp, l1, l2, r0, y) == pytest.approx(dT, rel=1e-6)


def _passed(rep, check):
    return next(c for c in rep.children if c.check_id == check)


def test_verify_monotonicity_ch2(ball22):
    rep = verify_monotonicity(ball22)
    assert rep.passed, [c.check_id for c in rep.failures()]
    assert all(c.worst_margin >= -1e-6 for c in rep.children)


def test_verify_monotonicity_compact(compact22):
    rep = verify_monotonicity(space=compact22, R=math.pi / 4)
    assert _passed(rep, "G_increasing").passed
    b = _passed(rep, "B_decreasing")
    assert b.grid_meta["applicable"] is False


def test_verify_monotonicity_octonionic(ball82):
    assert verify_monotonicity(ball82).passed


def test_real_hyperbolic_reduction():
    rep = verify_monotonicity(space=SpaceSpec(1, 3), R=1.0)
    assert _passed(rep, "B_decreasing").passed


def test_degenerate_spectrum_rejected(ball22):
    bad = shoot(ball22.space, OdeMode.RADIAL, ball22.lambda02, ball22.R, n_nodes=len(ball22.g1)).profile
    with pytest.raises(DegenerateSpectrumError):
        build_quotient_curves(dataclasses.replace(ball22, g1=bad))
