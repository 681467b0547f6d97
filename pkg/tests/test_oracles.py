import math

import numpy as np
import pytest
from scipy import special

from ross_spectra.geometry import SpaceSpec
from ross_spectra.oracles import (bessel_j, bessel_zeros, fd_eigenvalues, fd_extrapolated,
                                  interval_dirichlet_eigenvalue)


@pytest.mark.parametrize("nu", [0, 1, 2, 3, 4])
def test_bessel_zeros_integer_orders(nu):
    assert np.allclose(bessel_zeros(nu, 3), special.jn_zeros(nu, 3), rtol=1e-13, atol=0)


def test_bessel_zeros_half_order_are_multiples_of_pi():
    # J_{1/2}(x) = sqrt(2/(pi x)) sin x
    assert np.allclose(bessel_zeros(0.5, 4), [math.pi * m for m in range(1, 5)], rtol=1e-13)


@pytest.mark.parametrize("nu,x", [(0, 0.3), (1, 2.5), (3, 7.1), (2.5, 11.0)])
def test_bessel_j_against_scipy(nu, x):
    assert float(bessel_j(nu, x)) == pytest.approx(special.jv(nu, x), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("R", [0.5, 1.0, 3.0])
def test_fd_real_hyperbolic_3_space_radial(R):
    # radial Dirichlet eigenvalues of H^3 balls are 1 + (m pi / R)^2
    exact = [1 + (m * math.pi / R) ** 2 for m in (1, 2)]
    assert np.allclose(fd_extrapolated(SpaceSpec(1, 3), R, False), exact, rtol=1e-8)
    assert np.allclose(fd_eigenvalues(SpaceSpec(1, 3), R, False, nodes=4000), exact, rtol=1e-5)


def test_fd_annulus_real_hyperbolic_3_space():
    exact = 1 + (math.pi / 0.7) ** 2
    lam = fd_extrapolated(SpaceSpec(1, 3), 1.2, False, count=1, r_in=0.5)[0]
    assert lam == pytest.approx(exact, rel=1e-8)


def test_fd_second_order_convergence():
    space = SpaceSpec(2, 2)
    ref = fd_extrapolated(space, 1.0, True, count=1, nodes=8000)[0]
    e1 = abs(fd_eigenvalues(space, 1.0, True, 1, 500)[0] - ref)
    e2 = abs(fd_eigenvalues(space, 1.0, True, 1, 1000)[0] - ref)
    assert 3.5 < e1 / e2 < 4.5


def test_interval_eigenvalue():
    assert interval_dirichlet_eigenvalue(0.1) == pytest.approx(986.960440, rel=1e-9)
    assert interval_dirichlet_eigenvalue(2.0, 3) == pytest.approx((1.5 * math.pi) ** 2)
