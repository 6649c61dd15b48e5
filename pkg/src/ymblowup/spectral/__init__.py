"""Scattering and spectral theory of L = -d^2/dR^2 + 15/(4R^2) - 24/(1+R^2)^2."""

from .operator import (
    potential, phi0, dphi0, theta0, dtheta0, wronskian, apply_L_fd, U_comm,
)
from .phi_ode import phi_ode, phi_ode_table, phi_frobenius
from .phi_series import PhiSeries
from .psi_plus import PsiPlusExpansion
from .measure import SpectralData, connection_a_at
from .transform import FourierVector, SpectralTransform, PHI0_NORM_SQ

__all__ = [
    "potential", "phi0", "dphi0", "theta0", "dtheta0", "wronskian",
    "apply_L_fd", "U_comm", "phi_ode", "phi_ode_table", "phi_frobenius",
    "PhiSeries", "PsiPlusExpansion", "SpectralData", "connection_a_at",
    "FourierVector", "SpectralTransform", "PHI0_NORM_SQ",
]
