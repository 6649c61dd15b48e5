"""Variation-of-parameters solver for the elliptic operator

    L = d^2/dR^2 + (1/R) d/dR + (2/R^2)(1 - 3 Q(R)^2)

with the explicit kernel pair Phi = R^{-1/2} phi0 and Theta = R^{-1/2} theta0
(normalized so that R (Phi Theta' - Phi' Theta) = 1).  Both quadratures start
at R = 0, which selects the unique solution vanishing to fourth order there;
the source must vanish at least quadratically at the origin.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from ..profile import Q, Phi, dPhi

__all__ = ["Theta", "dTheta", "EllipticSolution", "solve_elliptic_L", "apply_L_elliptic_fd"]


def Theta(R):
    """Second kernel element of L: Theta = R^{-1/2} theta0, ~ R^2/4 at infinity."""
    R = np.asarray(R, dtype=float)
    num = -1.0 - 8.0 * R**2 + 24.0 * R**4 * np.log(R) + 8.0 * R**6 + R**8
    return num / (4.0 * R**2 * (1.0 + R**2) ** 2)


def dTheta(R):
    R = np.asarray(R, dtype=float)
    num = -1.0 - 8.0 * R**2 + 24.0 * R**4 * np.log(R) + 8.0 * R**6 + R**8
    dnum = -16.0 * R + 96.0 * R**3 * np.log(R) + 24.0 * R**3 + 48.0 * R**5 + 8.0 * R**7
    den = 4.0 * R**2 * (1.0 + R**2) ** 2
    dden = 8.0 * R * (1.0 + R**2) ** 2 + 16.0 * R**3 * (1.0 + R**2)
    return (dnum * den - num * dden) / den**2


class EllipticSolution:
    """Solution w of L w = rhs with closed-form first/second derivatives.

    w  = Theta(R) I1(R) - Phi(R) I2(R),  I1 = int_0^R Phi rhs R', I2 likewise
    with Theta; w' drops the (cancelling) boundary terms and w'' comes from
    the ODE itself, so no numerical differentiation is involved.
    """

    def __init__(self, rhs, R_lo, R_hi, rtol, atol):
        self.rhs = rhs
        self.R_lo, self.R_hi = float(R_lo), float(R_hi)

        def cum(RR, y):
            f = rhs(RR)
            return [Phi(RR) * f * RR, Theta(RR) * f * RR]

        # leading [0, R_lo] patches: integrands are O(R^5) resp. O(R)
        f0 = rhs(R_lo)
        i1_0 = Phi(R_lo) * f0 * R_lo * R_lo / 6.0
        i2_0 = Theta(R_lo) * f0 * R_lo * R_lo / 2.0
        sol = solve_ivp(cum, (R_lo, R_hi), [i1_0, i2_0], method="DOP853",
                        rtol=rtol, atol=atol, dense_output=True)
        if not sol.success:
            raise RuntimeError(f"elliptic quadrature failed: {sol.message}")
        self._interp = sol.sol

    def _I(self, R):
        R = np.asarray(R, dtype=float)
        Rc = np.clip(R, self.R_lo, self.R_hi)
        out = self._interp(np.atleast_1d(Rc))
        return out[0].reshape(R.shape), out[1].reshape(R.shape)

    def __call__(self, R):
        R = np.asarray(R, dtype=float)
        I1, I2 = self._I(R)
        return Theta(R) * I1 - Phi(R) * I2

    def deriv(self, R):
        R = np.asarray(R, dtype=float)
        I1, I2 = self._I(R)
        return dTheta(R) * I1 - dPhi(R) * I2

    def deriv2(self, R):
        R = np.asarray(R, dtype=float)
        return self.rhs(R) - self.deriv(R) / R - 2.0 * (1.0 - 3.0 * Q(R) ** 2) / R**2 * self(R)


def solve_elliptic_L(rhs, R_lo=1e-5, R_hi=150.0, rtol=3e-14, atol=1e-18):
    """Solve L w = rhs, unique solution with w = O(R^4) at the origin."""
    return EllipticSolution(rhs, R_lo, R_hi, rtol, atol)


def apply_L_elliptic_fd(w, R, h=None):
    """Apply L by centered differences to a callable w (FD oracle for tests)."""
    R = np.asarray(R, dtype=float)
    if h is None:
        h = 1e-4 * np.maximum(R, 0.05)
    d2 = (w(R + h) - 2.0 * w(R) + w(R - h)) / h**2
    d1 = (w(R + h) - w(R - h)) / (2.0 * h)
    return d2 + d1 / R + 2.0 * (1.0 - 3.0 * Q(R) ** 2) / R**2 * w(R)
