"""Oscillatory Jost-type solution psi+(R, xi) via its symbol expansion.

psi+ = xi^{-1/4} e^{i R xi^{1/2}} sigma(q, R) with sigma ~ sum_j xi^{-j/2} f_j(R),
f_0 = 1 and 2i f_j' = L f_{j-1}.  The f_j are built once on a log grid in R from
the tail-integral recursion f_j = (i/2)(f_{j-1}' + int_R^inf V f_{j-1}), with
derivative ladders taken from the recursion itself (no numerical
differentiation enters).
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .operator import potential, dpotential, d2potential, d3potential

__all__ = ["PsiPlusExpansion", "JMAX"]

JMAX = 4


def _tail_integral_rev(x, g):
    """T(x_i) = int_{x_i}^{x_max} g dx on an increasing grid, plus power-law tail."""
    from scipy.integrate import cumulative_simpson

    cum = cumulative_simpson(g, x=x, initial=0.0)
    T = cum[-1] - cum
    # integrand ~ C x^{-p}: estimate p over the last decade, add analytic tail
    mask = x >= x[-1] / 10.0
    xs, gs = x[mask], np.abs(g[mask]) + 1e-300
    p = -np.polyfit(np.log(xs), np.log(gs), 1)[0]
    p = max(p, 1.5)
    T = T + g[-1] * x[-1] / (p - 1.0)
    return T


class PsiPlusExpansion:
    """Tabulated symbol coefficients f_1..f_JMAX and their R-derivatives."""

    def __init__(self, R_min=0.01, R_max=1e7, n=9000, q_min=2.0):
        self.q_min = float(q_min)
        self.R_min, self.R_max = float(R_min), float(R_max)
        R = np.geomspace(R_min, R_max, n)
        V, dV, d2V, d3V = potential(R), dpotential(R), d2potential(R), d3potential(R)

        f = {0: np.ones_like(R, dtype=complex)}
        df = {0: np.zeros_like(R, dtype=complex)}
        # f1 closed form: (i/2) int_R^inf V = (i/2)(15/(4R) - 6 pi + 12R/(1+R^2) + 12 atan R)
        tailV = 15.0 / (4.0 * R) - 6.0 * np.pi + 12.0 * R / (1.0 + R**2) + 12.0 * np.arctan(R)
        f[1] = 0.5j * tailV
        df[1] = -0.5j * V
        d2f1 = -0.5j * dV
        d3f1 = -0.5j * d2V
        d4f1 = -0.5j * d3V

        f[2] = 0.5j * (df[1] + self._T(R, V * f[1]))
        df[2] = 0.5j * (d2f1 - V * f[1])
        d2f2 = 0.5j * (d3f1 - dV * f[1] - V * df[1])
        d3f2 = 0.5j * (d4f1 - d2V * f[1] - 2.0 * dV * df[1] - V * d2f1)

        f[3] = 0.5j * (df[2] + self._T(R, V * f[2]))
        df[3] = 0.5j * (d2f2 - V * f[2])
        d2f3 = 0.5j * (d3f2 - dV * f[2] - V * df[2])

        f[4] = 0.5j * (df[3] + self._T(R, V * f[3]))
        df[4] = 0.5j * (d2f3 - V * f[3])

        self._R = R
        self._fsp = {j: self._spline(R, f[j]) for j in range(1, JMAX + 1)}
        self._dfsp = {j: self._spline(R, df[j]) for j in range(1, JMAX + 1)}

    @staticmethod
    def _T(R, g):
        return _tail_integral_rev(R, g.real) + 1j * _tail_integral_rev(R, g.imag)

    @staticmethod
    def _spline(R, y):
        x = np.log(R)
        return CubicSpline(x, y.real), CubicSpline(x, y.imag)

    def f_j(self, j, R):
        """Symbol coefficient f_j(R) (complex)."""
        if j == 0:
            return np.ones_like(np.asarray(R, dtype=float), dtype=complex)
        sr, si = self._fsp[j]
        x = np.log(np.asarray(R, dtype=float))
        return sr(x) + 1j * si(x)

    def df_j(self, j, R):
        if j == 0:
            return np.zeros_like(np.asarray(R, dtype=float), dtype=complex)
        sr, si = self._dfsp[j]
        x = np.log(np.asarray(R, dtype=float))
        return sr(x) + 1j * si(x)

    def __call__(self, R, xi, j0=JMAX):
        """psi+(R, xi), its R-derivative and a truncation-error estimate.

        Requires q = R xi^{1/2} >= q_min (asymptotic validity region).
        """
        if j0 > JMAX:
            raise ValueError(f"j0 <= {JMAX} supported")
        R = np.asarray(R, dtype=float)
        xi = float(xi)
        mu = np.sqrt(xi)
        q = R * mu
        if np.any(q < self.q_min):
            raise ValueError(f"psi_plus outside validity region: R*sqrt(xi) < {self.q_min}")
        sigma = np.zeros_like(R, dtype=complex)
        dsigma = np.zeros_like(R, dtype=complex)
        for j in range(j0 + 1):
            w = xi ** (-0.5 * j)
            sigma += w * self.f_j(j, R)
            dsigma += w * self.df_j(j, R)
        phase = xi ** (-0.25) * np.exp(1j * R * mu)
        psi = phase * sigma
        dpsi = phase * (1j * mu * sigma + dsigma)
        if j0 < JMAX:
            err = np.abs(xi ** (-0.5 * (j0 + 1)) * self.f_j(j0 + 1, R))
        else:
            err = np.abs(xi ** (-0.5 * JMAX) * self.f_j(JMAX, R)) / np.maximum(q, 1.0)
        return psi, dpsi, err
