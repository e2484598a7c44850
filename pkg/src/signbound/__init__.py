"""Numerics for sign uncertainty, the L^2 / (L^1 x L^1) Fourier inequality and Cohn-Elkies LP bounds."""
from .bounds import a_lower, bounds_report, c_theta, delta_lp_lower, hy_constant, threshold_check
from .radial import EigenExpansion, RadialProfile, project, radial_fourier
from .sign import SignReport, last_sign_change, make_minus_eigenfunction

__all__ = [
    "EigenExpansion",
    "RadialProfile",
    "SignReport",
    "a_lower",
    "bounds_report",
    "c_theta",
    "delta_lp_lower",
    "hy_constant",
    "last_sign_change",
    "make_minus_eigenfunction",
    "project",
    "radial_fourier",
    "threshold_check",
]

__version__ = "0.1.0"
