"""Regular solution phi(R, xi) of (L - xi) u = 0 by outward ODE integration.

This is the oracle-grade representation used for the spectral tables: Frobenius
data u = R^{5/2}(1 + c2 R^2 + c4 R^4) at a small R0, then adaptive integration.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .operator import frobenius_c2_c4, potential

__all__ = ["phi_frobenius", "phi_ode", "phi_ode_table", "second_solution_ode"]

R0_DEFAULT = 1e-3


def phi_frobenius(R, xi):
    """Frobenius value and derivative of phi near R = 0 (valid for R^2 max(1,xi) << 1)."""
    c2, c4 = frobenius_c2_c4(xi)
    R = np.asarray(R, dtype=float)
    h = 1.0 + c2 * R**2 + c4 * R**4
    dh = 2.0 * c2 * R + 4.0 * c4 * R**3
    u = R**2.5 * h
    du = 2.5 * R**1.5 * h + R**2.5 * dh
    return u, du


def _rhs(R, y, xi):
    u, du = y
    return [du, (potential(R) - xi) * u]


def phi_ode(R_target, xi, R0=R0_DEFAULT, rtol=1e-11, atol=1e-18):
    """Integrate (L - xi) u = 0 outward; returns (phi, d_R phi) at R_target."""
    R_target = float(R_target)
    if R_target <= R0:
        u, du = phi_frobenius(R_target, xi)
        return float(u), float(du)
    u0, du0 = phi_frobenius(R0, xi)
    sol = solve_ivp(
        _rhs, (R0, R_target), [float(u0), float(du0)], args=(xi,),
        method="DOP853", rtol=rtol, atol=atol, dense_output=False,
    )
    if not sol.success:
        raise RuntimeError(f"phi_ode integration failed at xi={xi}: {sol.message}")
    return sol.y[0, -1], sol.y[1, -1]


def phi_ode_table(xi, R_nodes, R0=R0_DEFAULT, rtol=1e-11, atol=1e-18):
    """phi(R, xi) and d_R phi on an increasing node set (Frobenius below R0)."""
    R_nodes = np.asarray(R_nodes, dtype=float)
    vals = np.empty_like(R_nodes)
    dvals = np.empty_like(R_nodes)
    small = R_nodes <= R0
    if np.any(small):
        u, du = phi_frobenius(R_nodes[small], xi)
        vals[small], dvals[small] = u, du
    big = ~small
    if np.any(big):
        targets = R_nodes[big]
        u0, du0 = phi_frobenius(R0, xi)
        sol = solve_ivp(
            _rhs, (R0, targets[-1]), [float(u0), float(du0)], args=(xi,),
            method="DOP853", rtol=rtol, atol=atol, t_eval=targets,
        )
        if not sol.success:
            raise RuntimeError(f"phi_ode integration failed at xi={xi}: {sol.message}")
        vals[big] = sol.y[0]
        dvals[big] = sol.y[1]
    return vals, dvals


def second_solution_ode(R_target, xi, R0=R0_DEFAULT, rtol=1e-11, atol=1e-14):
    """An independent solution with R^{-3/2} behavior at 0 (for Wronskian checks)."""
    d2 = (24.0 + xi) / 4.0
    u0 = R0**-1.5 * (1.0 + d2 * R0**2) / 4.0
    du0 = (-1.5 * R0**-2.5 * (1.0 + d2 * R0**2) + R0**-1.5 * 2.0 * d2 * R0) / 4.0
    sol = solve_ivp(
        _rhs, (R0, float(R_target)), [u0, du0], args=(xi,),
        method="DOP853", rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"second solution integration failed: {sol.message}")
    return sol.y[0, -1], sol.y[1, -1]
