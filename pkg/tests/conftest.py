import pytest

from ross_spectra.eigen import ball_spectrum
from ross_spectra.geometry import Curvature, SpaceSpec


@pytest.fixture(scope="session")
def ch2():
    return SpaceSpec(2, 2)


@pytest.fixture(scope="session")
def ball22(ch2):
    return ball_spectrum(ch2, 1.0)


@pytest.fixture(scope="session")
def ball82():
    return ball_spectrum(SpaceSpec(8, 2), 2.0)


@pytest.fixture(scope="session")
def compact22():
    return SpaceSpec(2, 2, Curvature.COMPACT)
