"""Dirichlet spectra of geodesic balls and annuli in rank-one symmetric spaces."""
from .eigen import (AnnulusSpectrum, BallSpectrum, annulus_spectrum, ball_spectrum, lambda02_ball, lambda1_ball,
                    lambda2_ball, radius_for_lambda1)
from .geometry import Curvature, DomainError, SpaceSpec, ball_volume, mean_curvature, sphere_lambda1, volume_density
from .integrator import OdeMode, RadialProfile, frobenius_seed, shoot, shoot_interval
from .report import TOOL_VERSION as __version__
from .report import VerificationReport

__all__ = [
    "__version__", "AnnulusSpectrum", "BallSpectrum", "Curvature", "DomainError", "OdeMode", "RadialProfile", "SpaceSpec",
    "VerificationReport", "annulus_spectrum", "ball_spectrum", "ball_volume", "frobenius_seed", "lambda02_ball",
    "lambda1_ball", "lambda2_ball", "mean_curvature", "radius_for_lambda1", "shoot", "shoot_interval",
    "sphere_lambda1", "volume_density",
]
