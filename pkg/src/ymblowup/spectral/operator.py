"""The half-line operator L = -d^2/dR^2 + 15/(4R^2) - 24/(1+R^2)^2 and its zero modes."""

from __future__ import annotations

import numpy as np

__all__ = [
    "potential", "dpotential", "d2potential", "d3potential",
    "phi0", "dphi0", "theta0", "dtheta0", "wronskian", "apply_L_fd",
    "U_comm", "frobenius_c2_c4",
]


def potential(R):
    """Potential of L: 15/(4R^2) - 24/(1+R^2)^2."""
    R = np.asarray(R, dtype=float)
    return 15.0 / (4.0 * R**2) - 24.0 / (1.0 + R**2) ** 2


def dpotential(R):
    R = np.asarray(R, dtype=float)
    return -15.0 / (2.0 * R**3) + 96.0 * R / (1.0 + R**2) ** 3


def d2potential(R):
    R = np.asarray(R, dtype=float)
    return 45.0 / (2.0 * R**4) + 96.0 / (1.0 + R**2) ** 3 - 576.0 * R**2 / (1.0 + R**2) ** 4


def d3potential(R):
    R = np.asarray(R, dtype=float)
    return -90.0 / R**5 - 1728.0 * R / (1.0 + R**2) ** 4 + 4608.0 * R**3 / (1.0 + R**2) ** 5


def phi0(R):
    """Zero-energy eigenfunction R^{5/2}/(1+R^2)^2 (L phi0 = 0, L^2-normalizable)."""
    R = np.asarray(R, dtype=float)
    return R**2.5 / (1.0 + R**2) ** 2


def dphi0(R):
    R = np.asarray(R, dtype=float)
    return R**1.5 * (2.5 + 2.5 * R**2 - 4.0 * R**2) / (1.0 + R**2) ** 3


def theta0(R):
    """Second zero mode, growing like R^{5/2}/4 with a log R branch on R > 0."""
    R = np.asarray(R, dtype=float)
    num = -1.0 - 8.0 * R**2 + 24.0 * R**4 * np.log(R) + 8.0 * R**6 + R**8
    return num / (4.0 * R**1.5 * (1.0 + R**2) ** 2)


def dtheta0(R):
    R = np.asarray(R, dtype=float)
    num = -1.0 - 8.0 * R**2 + 24.0 * R**4 * np.log(R) + 8.0 * R**6 + R**8
    dnum = -16.0 * R + 96.0 * R**3 * np.log(R) + 24.0 * R**3 + 48.0 * R**5 + 8.0 * R**7
    den = 4.0 * R**1.5 * (1.0 + R**2) ** 2
    dden = 6.0 * R**0.5 * (1.0 + R**2) ** 2 + 16.0 * R**2.5 * (1.0 + R**2)
    return (dnum * den - num * dden) / den**2


def wronskian(f, df, g, dg):
    """W(f, g) = f g' - f' g (standard convention; W(phi0, theta0) = +1)."""
    return f * dg - df * g


def apply_L_fd(f, R, h=None):
    """Apply L by centered second differences; f is a callable."""
    R = np.asarray(R, dtype=float)
    if h is None:
        h = 1e-4 * np.maximum(R, 0.05)
    d2 = (f(R + h) - 2.0 * f(R) + f(R - h)) / h**2
    return -d2 + potential(R) * f(R)


def U_comm(R):
    """Commutator potential: [L, R d_R] = 2 L + U with U = 48(1-R^2)/(1+R^2)^3.

    This is -(2V + R V') for the potential V of L.  The equivalent display
    48/(1+R^2)^2 - 96 R^2/(1+R^2)^3 pairs to zero against phi0^2.
    """
    R = np.asarray(R, dtype=float)
    return 48.0 * (1.0 - R**2) / (1.0 + R**2) ** 3


def frobenius_c2_c4(xi):
    """Coefficients of the regular solution phi ~ R^{5/2}(1 + c2 R^2 + c4 R^4) at R = 0."""
    c2 = -(24.0 + xi) / 12.0
    c4 = (48.0 - (24.0 + xi) * c2) / 32.0
    return c2, c4
