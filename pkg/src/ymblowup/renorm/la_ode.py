"""The self-similar Sturm-Liouville operator

    L_a = (1-a^2) d^2/da^2 + (1/a - 2a) d/da - 4/a^2

on (0, 1): fundamental pairs at both regular singular endpoints, variation of
parameters, and the unique source-solution vanishing to fourth order at a = 0.

At a = 1 (Frobenius exponents {0, 1/2}):  psi0 = 1 + (1-a) psi0~,
psi1 = (1-a)^{1/2} (1 + (1-a) psi1~).  At a = 0 (exponents {-2, +2}):
phi0a = a^{-2}(1 + O(a^2)), phi1a = a^2 (1 + O(a^2)), both even, no logs.
In divergence form L_a = rho1 d(rho2 d.) - 4/a^2 with rho1 = sqrt(1-a^2)/a,
rho2 = a sqrt(1-a^2); rho2 W(psi0, psi1) = -1/sqrt(2) exactly.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import cumulative_simpson, solve_ivp
from scipy.interpolate import CubicSpline

from ..profile import BlowupParams, log_p

__all__ = ["LaBasis", "la_apply_fd", "W0_CONST"]

W0_CONST = -1.0 / np.sqrt(2.0)  # rho2 * W(psi0, psi1)


def _series_coeffs(nu, n_terms=70):
    """Frobenius coefficients at s = 1-a for L_a u = 0, u = sum c_m s^{m+nu}."""
    c = np.zeros(n_terms)
    c[0] = 1.0
    for m in range(1, n_terms):
        lhs = (m + nu) * (2.0 * (m + nu) - 1.0)
        acc = c[m - 1] * (m - 1 + nu) * (m + 1 + nu)
        acc += sum(c[j] * (j + nu) for j in range(0, m - 1))
        acc += 4.0 * sum((m - j) * c[j] for j in range(0, m))
        c[m] = acc / lhs
    return c


def _series_eval(c, nu, s, deriv=0):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    for m, cm in enumerate(c):
        p = m + nu
        if deriv == 0:
            out += cm * s**p
        elif deriv == 1:
            if p != 0:
                out += cm * p * s ** (p - 1.0)
        else:
            raise ValueError
    return out


def _zero_series(nu, n_terms=12):
    """Even Frobenius coefficients at a = 0: u = a^nu sum u_j a^{2j}, nu = +-2."""
    u = np.zeros(n_terms)
    u[0] = 1.0
    for j in range(1, n_terms):
        num = (nu + 2 * j - 2) * (nu + 2 * j - 1)
        den = (nu + 2 * j) ** 2 - 4
        if den == 0:
            u[j] = 0.0  # resonant slot of the a^{-2} branch; numerator vanishes too
        else:
            u[j] = u[j - 1] * num / den
    return u


def la_apply_fd(f, a, h=1e-5):
    """Apply L_a to a callable by centered differences (test oracle)."""
    a = np.asarray(a, dtype=float)
    d2 = (f(a + h) - 2.0 * f(a) + f(a - h)) / h**2
    d1 = (f(a + h) - f(a - h)) / (2.0 * h)
    return (1.0 - a**2) * d2 + (1.0 / a - 2.0 * a) * d1 - 4.0 / a**2 * f(a)


class LaBasis:
    """Fundamental solutions of L_a and solvers built on them.

    Series at a = 1 are used on [a_switch, 1]; inward ODE continuation with
    dense sampling covers [a_min, a_switch].
    """

    def __init__(self, a_min=2e-4, a_switch=0.75, n_grid=3000):
        self.a_min, self.a_switch = float(a_min), float(a_switch)
        self._c0 = _series_coeffs(0.0)
        self._c1 = _series_coeffs(0.5)
        self._u_neg = _zero_series(-2)
        self._u_pos = _zero_series(+2)

        s_sw = 1.0 - a_switch
        y0 = [self._psi_series(0, s_sw), self._psi_series(0, s_sw, deriv=1)]
        y1 = [self._psi_series(1, s_sw), self._psi_series(1, s_sw, deriv=1)]
        grid = np.linspace(a_min, a_switch, n_grid)

        def rhs(a, y):
            return [y[1], (4.0 / a**2 * y[0] - (1.0 / a - 2.0 * a) * y[1]) / (1.0 - a**2)]

        self._sp = {}
        for tag, y in (("psi0", y0), ("psi1", y1)):
            sol = solve_ivp(rhs, (a_switch, a_min), y, method="DOP853",
                            rtol=1e-12, atol=1e-12, t_eval=grid[::-1])
            if not sol.success:
                raise RuntimeError(f"L_a continuation failed for {tag}")
            self._sp[tag] = (CubicSpline(sol.t[::-1], sol.y[0][::-1]),
                             CubicSpline(sol.t[::-1], sol.y[1][::-1]))

    # -- series forms ------------------------------------------------------

    def _psi_series(self, which, s, deriv=0):
        """psi0 or psi1 as functions of a, evaluated through s = 1 - a."""
        if which == 0:
            val = _series_eval(self._c0, 0.0, s, deriv=0)
            if deriv == 0:
                return val
            return -_series_eval(self._c0, 0.0, s, deriv=1)  # d/da = -d/ds
        val = _series_eval(self._c1, 0.5, s, deriv=0)
        if deriv == 0:
            return val
        return -_series_eval(self._c1, 0.5, s, deriv=1)

    def psi(self, which, a, deriv=0):
        """psi0 (which=0) or psi1 (which=1) and first derivative in a."""
        a = np.asarray(a, dtype=float)
        out = np.empty_like(a)
        ser = a >= self.a_switch
        if np.any(ser):
            out[ser] = self._psi_series(which, 1.0 - a[ser], deriv=deriv)
        if np.any(~ser):
            sp = self._sp["psi0" if which == 0 else "psi1"][deriv]
            out[~ser] = sp(a[~ser])
        return out

    def psi1_normed(self, a):
        """(1-a)^{-1/2} psi1; analytic through a = 1 with value 1 there."""
        a = np.asarray(a, dtype=float)
        out = np.empty_like(a)
        ser = a >= self.a_switch
        if np.any(ser):
            s = 1.0 - a[ser]
            out[ser] = _series_eval(self._c1, 0.0, s)  # shift the s^{1/2} out
        if np.any(~ser):
            out[~ser] = self.psi(1, a[~ser]) / np.sqrt(1.0 - a[~ser])
        return out

    def phi_zero(self, which, a, deriv=0):
        """Local basis at a = 0: phi0a = a^{-2}(1+...), phi1a = a^2(1+...)."""
        a = np.asarray(a, dtype=float)
        u = self._u_neg if which == 0 else self._u_pos
        nu = -2 if which == 0 else 2
        out = np.zeros_like(a)
        for j, uj in enumerate(u):
            p = nu + 2 * j
            if deriv == 0:
                out += uj * a ** float(p)
            else:
                if p != 0:
                    out += uj * p * a ** float(p - 1)
        return out

    # -- source solvers ----------------------------------------------------

    def vop_smooth(self, e, n=4000):
        """Particular solution of L_a f = e, smooth at a = 1 (f(1) = 0).

        f(a) = (1/w0) int_a^1 [psi0(a) psi1(u) - psi1(a) psi0(u)] rho1(u)^{-1} e(u) du,
        evaluated through the substitution u = 1 - sigma^2 which removes the
        endpoint singularity.  Returns (f, f') as callables.
        """
        sig = np.linspace(0.0, np.sqrt(1.0 - self.a_min), n)
        u = 1.0 - sig**2
        ev = np.asarray(e(u), dtype=float)
        common = 2.0 * (1.0 - sig**2) * ev / np.sqrt(2.0 - sig**2)
        g1 = self.psi1_normed(u) * sig * common   # psi1(u) rho1^{-1}(u) e(u) * du/dsigma
        g0 = self.psi(0, u) * common
        J1 = cumulative_simpson(g1, x=sig, initial=0.0) / W0_CONST
        J0 = cumulative_simpson(g0, x=sig, initial=0.0) / W0_CONST
        sp1 = CubicSpline(sig, J1)
        sp0 = CubicSpline(sig, J0)

        def to_sig(a):
            return np.sqrt(np.clip(1.0 - np.asarray(a, dtype=float), 0.0, None))

        def f(a):
            a = np.asarray(a, dtype=float)
            s = to_sig(a)
            return self.psi(0, a) * sp1(s) - self.psi(1, a) * sp0(s)

        def df(a):
            a = np.asarray(a, dtype=float)
            s = to_sig(a)
            return self.psi(0, a, 1) * sp1(s) - self.psi(1, a, 1) * sp0(s)

        return f, df

    def solve_O4(self, e, e1_coeff=None, a_lo=1e-3, a_fit=None):
        """The unique solution of L_a W = e with W = O(a^4) at a = 0.

        e must vanish quadratically at 0; e1_coeff = lim e/a^2 may be passed
        (otherwise Richardson-estimated).  Returns (W, W', c0, c1) with the
        decomposition W = f_smooth + c0 psi0 + c1 psi1 near a = 1.
        """
        if e1_coeff is None:
            a1, a2 = 2e-2, 4e-2
            r1 = float(e(np.array([a1]))[0]) / a1**2
            r2 = float(e(np.array([a2]))[0]) / a2**2
            e1_coeff = (4.0 * r1 - r2) / 3.0
        p2 = e1_coeff / 12.0  # L_a(a^4) = 12 a^2 - 20 a^4
        y0 = [p2 * a_lo**4, 4.0 * p2 * a_lo**3]

        def rhs(a, y):
            return [y[1], (float(e(np.array([a]))[0]) + 4.0 / a**2 * y[0]
                           - (1.0 / a - 2.0 * a) * y[1]) / (1.0 - a**2)]

        a_hi = self.a_switch + 0.1
        grid = np.linspace(a_lo, a_hi, 3000)
        sol = solve_ivp(rhs, (a_lo, a_hi), y0, method="DOP853",
                        rtol=1e-11, atol=1e-14, t_eval=grid)
        if not sol.success:
            raise RuntimeError("solve_O4 integration failed")
        Wsp = CubicSpline(sol.t, sol.y[0])
        dWsp = CubicSpline(sol.t, sol.y[1])

        fsm, dfsm = self.vop_smooth(e)
        am = self.a_switch if a_fit is None else a_fit
        A = np.array([[float(self.psi(0, np.array([am]))[0]), float(self.psi(1, np.array([am]))[0])],
                      [float(self.psi(0, np.array([am]), 1)[0]), float(self.psi(1, np.array([am]), 1)[0])]])
        rhsv = np.array([float(Wsp(am)) - float(fsm(np.array([am]))[0]),
                         float(dWsp(am)) - float(dfsm(np.array([am]))[0])])
        c0, c1 = np.linalg.solve(A, rhsv)

        def W(a):
            a = np.asarray(a, dtype=float)
            out = np.empty_like(a)
            low = a <= am
            out[low] = Wsp(a[low])
            hi = ~low
            if np.any(hi):
                out[hi] = fsm(a[hi]) + c0 * self.psi(0, a[hi]) + c1 * self.psi(1, a[hi])
            return out

        def dW(a):
            a = np.asarray(a, dtype=float)
            out = np.empty_like(a)
            low = a <= am
            out[low] = dWsp(a[low])
            hi = ~low
            if np.any(hi):
                out[hi] = dfsm(a[hi]) + c0 * self.psi(0, a[hi], 1) + c1 * self.psi(1, a[hi], 1)
            return out

        return W, dW, float(c0), float(c1)
