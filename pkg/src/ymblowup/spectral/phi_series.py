"""Small-energy series for phi(R, xi): phi = phi0 + R^{-3/2} sum_j (R^2 xi)^j phitilde_j(R^2).

Valid in the region R^2 xi <= 1.  The coefficient functions are built once by
the nested-quadrature recursion (change of variable u = R^2)

    ftilde_0(u) = u^2/(1+u)^2,
    ftilde_j(u) = [u^2 I1(u) - g(u) I2(u)] / (2 (1+u)^2),

with g(w) = -1 - 8w + 12 w^2 log w + 8 w^3 + w^4 and cumulative integrals
I1 = int_0^u g f_{j-1} / (v^2 (1+v)^2), I2 = int_0^u f_{j-1}/(1+v)^2.
ftilde_j' comes from the same representation (the inhomogeneous terms cancel).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .operator import phi0, dphi0

__all__ = ["PhiSeries"]


def _g(w):
    w = np.asarray(w, dtype=float)
    out = -1.0 - 8.0 * w + 8.0 * w**3 + w**4
    pos = w > 0.0
    out = np.where(pos, out + 12.0 * w**2 * np.log(np.where(pos, w, 1.0)), out)
    return out


def _dg(w):
    w = np.asarray(w, dtype=float)
    out = -8.0 + 12.0 * w + 24.0 * w**2 + 4.0 * w**3
    pos = w > 0.0
    out = np.where(pos, out + 24.0 * w * np.log(np.where(pos, w, 1.0)), out)
    return out


class PhiSeries:
    """phi(R, xi) via the absolutely convergent j-series, tabulated once."""

    def __init__(self, u_min=1e-9, u_max=2e4, n=7000, jmax=10):
        u = np.concatenate(([0.0], np.geomspace(u_min, u_max, n)))
        self.jmax = int(jmax)
        g = _g(u)
        dgfac = _dg(u) / (2.0 * (1.0 + u) ** 2) - g / (1.0 + u) ** 3
        pref1 = u**2 / (2.0 * (1.0 + u) ** 2)
        dpref1 = u / (1.0 + u) ** 3
        pref2 = g / (2.0 * (1.0 + u) ** 2)

        f_prev = u**2 / (1.0 + u) ** 2
        self._splines = []
        self._sup_ratio = []  # sup_u |f_j| j! / (|u|^{j+2} <u>^{-1}), for the factorial bound
        for j in range(1, self.jmax + 1):
            with np.errstate(divide="ignore", invalid="ignore"):
                integ1 = g * f_prev / (u**2 * (1.0 + u) ** 2)
            if j == 1:
                integ1[0] = -1.0  # limit of g(v)/(1+v)^4 at v = 0
            else:
                integ1[0] = 0.0
            integ2 = f_prev / (1.0 + u) ** 2
            I1 = cumulative_simpson(integ1, x=u, initial=0.0)
            I2 = cumulative_simpson(integ2, x=u, initial=0.0)
            f_j = pref1 * I1 - pref2 * I2
            df_j = dpref1 * I1 - dgfac * I2
            self._splines.append((CubicSpline(u, f_j), CubicSpline(u, df_j)))
            env = u ** (j + 2) / np.sqrt(1.0 + u**2)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.abs(f_j) * float(math.factorial(j)) / env
            self._sup_ratio.append(float(np.nanmax(ratio[1:])))
            f_prev = f_j

    def ftilde(self, j, u, deriv=False):
        """ftilde_j(u) (or its u-derivative) for 1 <= j <= jmax."""
        sp = self._splines[j - 1][1 if deriv else 0]
        return sp(np.asarray(u, dtype=float))

    def factorial_bound_ratios(self):
        """sup_u |ftilde_j| j! / (u^{j+2} <u>^{-1}) for j = 1..jmax."""
        return np.array(self._sup_ratio)

    def __call__(self, R, xi, jmax=None, tol=1e-12):
        """(phi, d_R phi, truncation estimate); requires R^2 xi <= 1."""
        R = np.asarray(R, dtype=float)
        xi = float(xi)
        if np.any(R**2 * xi > 1.0 + 1e-12):
            raise ValueError("phi_series outside validity region R^2 xi <= 1")
        jmax = self.jmax if jmax is None else min(int(jmax), self.jmax)
        u = R**2
        val = phi0(R).astype(float)
        dval = dphi0(R).astype(float)
        scale = np.maximum(np.abs(val), 1e-300)
        last = np.zeros_like(val)
        for j in range(1, jmax + 1):
            w = xi**j
            fj = self.ftilde(j, u)
            dfj = self.ftilde(j, u, deriv=True)
            term = w * R**-1.5 * fj
            val = val + term
            dval = dval + w * (-1.5 * R**-2.5 * fj + 2.0 * R**-0.5 * dfj)
            last = np.abs(term)
            if np.all(last <= tol * scale):
                break
        return val, dval, last
