"""Connection coefficient a(xi), spectral density rho, and the tabulated eigenbasis.

a(xi) links the regular solution phi to the Jost pair psi+/psi-:
phi = a psi+ + conj(a psi+).  It is extracted by matching phi (from the ODE)
against the psi+ symbol expansion at a radius where both are accurate; the
density is rho = 1/(pi |a|^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .operator import potential, phi0
from .phi_ode import phi_frobenius, R0_DEFAULT
from .psi_plus import PsiPlusExpansion

__all__ = ["SpectralData", "connection_a_at"]


def _phi_rhs(R, y, xi):
    return [y[1], (potential(R) - xi) * y[0]]


def connection_a_at(xi, psi_exp: PsiPlusExpansion, radii, j0=4, rtol=1e-11):
    """a(xi) matched at each radius in `radii`; returns complex array."""
    xi = float(xi)
    u0, du0 = phi_frobenius(R0_DEFAULT, xi)
    radii = np.sort(np.asarray(radii, dtype=float))
    sol = solve_ivp(
        _phi_rhs, (R0_DEFAULT, radii[-1]), [float(u0), float(du0)], args=(xi,),
        method="DOP853", rtol=rtol, atol=1e-18, t_eval=radii,
    )
    if not sol.success:
        raise RuntimeError(f"phi integration failed at xi={xi}: {sol.message}")
    out = np.empty(len(radii), dtype=complex)
    for k, R in enumerate(radii):
        ph, dph = sol.y[0, k], sol.y[1, k]
        psi, dpsi, _ = psi_exp(np.array([R]), xi, j0=j0)
        psi, dpsi = psi[0], dpsi[0]
        # W(f,g) = f g' - f' g;  a = W(phi, psi-)/W(psi+, psi-), psi- = conj psi+
        w_num = ph * np.conj(dpsi) - dph * np.conj(psi)
        w_den = psi * np.conj(dpsi) - dpsi * np.conj(psi)
        out[k] = w_num / w_den
    return out


@dataclass
class SpectralData:
    """Tabulated spectral data of L on a log-spaced xi grid."""

    xi: np.ndarray
    a: np.ndarray
    rho: np.ndarray
    a_drift: np.ndarray        # relative |a| spread between the two matching radii
    R_nodes: np.ndarray        # quadrature nodes in R (uniform, Simpson weights)
    phi_table: np.ndarray      # phi(R_j, xi_i), shape (n_xi, n_R)
    q_min: float
    j0: int
    psi_exp: PsiPlusExpansion = field(repr=False)
    _logrho_spline: CubicSpline = field(repr=False, default=None)

    @classmethod
    def build(cls, xi_min=1e-4, xi_max=1e4, n_xi=400, R_max=40.0, n_R=20001,
              q_min=2.0, matching_q=32.0, R_floor=10.0, j0=4, rtol=1e-11,
              psi_exp=None):
        xi = np.geomspace(xi_min, xi_max, n_xi)
        psi_exp = psi_exp if psi_exp is not None else PsiPlusExpansion(q_min=q_min)
        R_nodes = np.linspace(0.0, R_max, n_R)
        phi_table = np.empty((n_xi, n_R))
        a = np.empty(n_xi, dtype=complex)
        drift = np.empty(n_xi)
        for i, x in enumerate(xi):
            Rstar = max(matching_q / np.sqrt(x), R_floor)
            radii = np.array([Rstar, 1.5 * Rstar])
            u0, du0 = phi_frobenius(R0_DEFAULT, x)
            R_top = max(radii[-1], R_max)
            eval_nodes = np.unique(np.concatenate((R_nodes[R_nodes > R0_DEFAULT], radii)))
            sol = solve_ivp(
                _phi_rhs, (R0_DEFAULT, R_top), [float(u0), float(du0)], args=(x,),
                method="DOP853", rtol=rtol, atol=1e-18, t_eval=eval_nodes,
            )
            if not sol.success:
                raise RuntimeError(f"phi integration failed at xi={x}")
            vals = dict(zip(sol.t, sol.y[0]))
            dvals = dict(zip(sol.t, sol.y[1]))
            small = R_nodes <= R0_DEFAULT
            u_small, _ = phi_frobenius(R_nodes[small], x)
            row = np.empty(n_R)
            row[small] = u_small
            row[~small] = np.array([vals[R] for R in R_nodes[~small]])
            phi_table[i] = row
            aa = np.empty(2, dtype=complex)
            for k, R in enumerate(radii):
                psi, dpsi, _ = psi_exp(np.array([R]), x, j0=j0)
                psi, dpsi = psi[0], dpsi[0]
                w_num = vals[R] * np.conj(dpsi) - dvals[R] * np.conj(psi)
                w_den = psi * np.conj(dpsi) - dpsi * np.conj(psi)
                aa[k] = w_num / w_den
            a[i] = aa[0]
            drift[i] = abs(abs(aa[1]) - abs(aa[0])) / abs(aa[0])
        rho = 1.0 / (np.pi * np.abs(a) ** 2)
        obj = cls(xi=xi, a=a, rho=rho, a_drift=drift, R_nodes=R_nodes,
                  phi_table=phi_table, q_min=q_min, j0=j0, psi_exp=psi_exp)
        obj._logrho_spline = CubicSpline(np.log(xi), np.log(rho))
        return obj

    # -- density ---------------------------------------------------------

    def rho_at(self, xi):
        """rho interpolated on the grid; plateau extension below/above the grid."""
        xi = np.asarray(xi, dtype=float)
        lo, hi = self.xi[0], self.xi[-1]
        xic = np.clip(xi, lo, hi)
        out = np.exp(self._logrho_spline(np.log(xic)))
        # above the grid rho ~ xi^2; below it plateaus
        out = np.where(xi > hi, out * (xi / hi) ** 2, out)
        return out

    def xi_rho_logderiv(self, xi=None):
        """xi rho'/rho by spline differentiation of log rho on the log grid."""
        x = self.xi if xi is None else np.asarray(xi, dtype=float)
        return self._logrho_spline(np.log(np.clip(x, self.xi[0], self.xi[-1])), 1)

    # -- quadrature helpers ------------------------------------------------

    def simpson_weights(self):
        n = len(self.R_nodes)
        h = self.R_nodes[1] - self.R_nodes[0]
        w = np.full(n, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return w * h / 3.0

    def xi_weights(self):
        """Trapezoid weights for integrals over the xi grid."""
        x = self.xi
        w = np.empty_like(x)
        w[1:-1] = 0.5 * (x[2:] - x[:-2])
        w[0] = 0.5 * (x[1] - x[0])
        w[-1] = 0.5 * (x[-1] - x[-2])
        return w

    def phi0_nodes(self):
        return phi0(self.R_nodes)
