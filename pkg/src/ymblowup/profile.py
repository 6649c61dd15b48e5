"""Closed-form ingredients of the blow-up construction.

Instanton, zero mode, blow-up rate lambda(t) = t^-1 (-log t)^beta, the
renormalized time tau, the self-similar weights (a, b, b1), and the flat
polynomial p(a) entering b1 = b + |log p(a)|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BlowupParams", "Q", "dQ", "Phi", "dPhi", "lam", "tau_of_t", "t_of_tau",
    "tlam_of_t", "tlam_of_tau", "lam_of_tau", "loglam_of_tau", "omega",
    "omega_dot", "p_poly", "dp_poly", "log_p", "b_of_t", "b1", "one_minus_a_dq",
    "one_minus_a_sq_d2q", "ConeCoords",
]


@dataclass(frozen=True)
class BlowupParams:
    """Parameters of the prescribed blow-up rate.

    beta : rate exponent, must exceed 3/2
    t0   : reference time in (0, 1)
    M    : flatness order of p(a); p(a) = 1 + O(a^{2M}) near a = 0
    """

    beta: float = 2.0
    t0: float = 0.1
    M: int = 4

    def __post_init__(self):
        if not self.beta > 1.5:
            raise ValueError(f"beta must exceed 3/2, got {self.beta}")
        if not 0.0 < self.t0 < 1.0:
            raise ValueError(f"t0 must lie in (0, 1), got {self.t0}")
        if self.M < 4:
            raise ValueError(f"M must be at least 4, got {self.M}")


def Q(R):
    """Instanton (1 - R^2)/(1 + R^2)."""
    R = np.asarray(R, dtype=float)
    return (1.0 - R**2) / (1.0 + R**2)


def dQ(R):
    R = np.asarray(R, dtype=float)
    return -4.0 * R / (1.0 + R**2) ** 2


def Phi(R):
    """Zero eigenfunction R^2/(1+R^2)^2 of the linearized operator L."""
    R = np.asarray(R, dtype=float)
    return R**2 / (1.0 + R**2) ** 2


def dPhi(R):
    R = np.asarray(R, dtype=float)
    return 2.0 * R * (1.0 - R**2) / (1.0 + R**2) ** 3


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0) or np.any(t >= 1.0):
        raise ValueError("t must lie in (0, 1)")
    return t


def b_of_t(t):
    """b = |log t|."""
    return -np.log(_check_t(t))


def lam(t, params: BlowupParams):
    """Blow-up rate lambda(t) = t^-1 (-log t)^beta."""
    t = _check_t(t)
    return (-np.log(t)) ** params.beta / t


def tlam_of_t(t, params: BlowupParams):
    """t * lambda(t) = b^beta."""
    return b_of_t(t) ** params.beta


def tau_of_t(t, params: BlowupParams):
    """Renormalized time tau = |log t|^(beta+1) / (beta+1), i.e. integral of lambda."""
    b = b_of_t(t)
    return b ** (params.beta + 1.0) / (params.beta + 1.0)


def t_of_tau(tau, params: BlowupParams):
    """Inverse of tau_of_t."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0.0):
        raise ValueError("tau must be positive")
    bp = params.beta + 1.0
    return np.exp(-((bp * tau) ** (1.0 / bp)))


def tlam_of_tau(tau, params: BlowupParams):
    """t*lambda as a function of tau: ((beta+1) tau)^(beta/(beta+1))."""
    tau = np.asarray(tau, dtype=float)
    bp = params.beta + 1.0
    return (bp * tau) ** (params.beta / bp)


def loglam_of_tau(tau, params: BlowupParams):
    """log lambda(tau); lambda overflows quickly, so work in log space."""
    tau = np.asarray(tau, dtype=float)
    bp = params.beta + 1.0
    return (params.beta / bp) * np.log(bp * tau) + (bp * tau) ** (1.0 / bp)


def lam_of_tau(tau, params: BlowupParams):
    return np.exp(loglam_of_tau(tau, params))


def omega(tau, params: BlowupParams):
    """omega(tau) = lambda_tau/lambda = beta/((beta+1) tau) + ((beta+1) tau)^(-beta/(beta+1))."""
    tau = np.asarray(tau, dtype=float)
    bp = params.beta + 1.0
    return params.beta / (bp * tau) + (bp * tau) ** (-params.beta / bp)


def omega_dot(tau, params: BlowupParams):
    """d omega/d tau."""
    tau = np.asarray(tau, dtype=float)
    bp = params.beta + 1.0
    return -params.beta / (bp * tau**2) - params.beta * (bp * tau) ** (-(2.0 * params.beta + 1.0) / bp)


def _s_coeffs(M: int):
    # p(a) = (1 - a^2) s(a) with s(a) = sum_{k<M} a^{2k} - ((2M-1)/2) a^{2M};
    # the factored form is evaluated near a = 1 without cancellation.
    c = np.ones(M + 1)
    c[M] = -(2.0 * M - 1.0) / 2.0
    return c


def _s_eval(a, M, deriv=0):
    a = np.asarray(a, dtype=float)
    c = _s_coeffs(M)
    a2 = a * a
    out = np.zeros_like(a)
    for k in range(M + 1):
        m = 2 * k
        if deriv == 0:
            out += c[k] * a2**k
        elif deriv == 1:
            if m >= 1:
                out += c[k] * m * a ** (m - 1)
        elif deriv == 2:
            if m >= 2:
                out += c[k] * m * (m - 1) * a ** (m - 2)
        else:
            raise ValueError("deriv must be 0, 1 or 2")
    return out


def p_poly(a, M: int):
    """Flat cone polynomial p(a) = 1 - ((2M+1)/2) a^{2M} + ((2M-1)/2) a^{2M+2}.

    Evaluated through the exact factorization p = (1 - a^2) s(a), which has
    p(1) = 0, p'(1) = -1 and p strictly decreasing on (0, 1).
    """
    a = np.asarray(a, dtype=float)
    return (1.0 - a * a) * _s_eval(a, M)


def dp_poly(a, M: int):
    a = np.asarray(a, dtype=float)
    return -2.0 * a * _s_eval(a, M) + (1.0 - a * a) * _s_eval(a, M, deriv=1)


def log_p(a, M: int):
    """log p(a), via the factored form; -> -inf as a -> 1."""
    a = np.asarray(a, dtype=float)
    return np.log1p(-a * a) + np.log(_s_eval(a, M))


def b1(a, b, M: int):
    """b1 = b + |log p(a)|."""
    return np.asarray(b, dtype=float) - log_p(a, M)


def one_minus_a_dq(a, M: int):
    """(1-a) q'(a) for q = -log p; analytic on [0, 1], -> 1 at a = 1."""
    a = np.asarray(a, dtype=float)
    s = _s_eval(a, M)
    return 2.0 * a / (1.0 + a) - (1.0 - a) * _s_eval(a, M, deriv=1) / s


def one_minus_a_sq_d2q(a, M: int):
    """(1-a)^2 q''(a); analytic on [0, 1]."""
    a = np.asarray(a, dtype=float)
    s = _s_eval(a, M)
    ds = _s_eval(a, M, deriv=1)
    d2s = _s_eval(a, M, deriv=2)
    return 2.0 * (1.0 + a * a) / (1.0 + a) ** 2 - (1.0 - a) ** 2 * (d2s * s - ds * ds) / s**2


@dataclass(frozen=True)
class ConeCoords:
    """Derived coordinates of a point (t, r) inside the backward light cone."""

    t: float
    r: float
    a: float
    R: float
    b: float
    b1: float
    tau: float

    @classmethod
    def from_tr(cls, t: float, r: float, params: BlowupParams) -> "ConeCoords":
        t = float(t)
        r = float(r)
        if not 0.0 < t < 1.0 or r < 0.0:
            raise ValueError("need 0 < t < 1 and r >= 0")
        a = r / t
        b = float(b_of_t(t))
        return cls(
            t=t, r=r, a=a, R=r * float(lam(t, params)), b=b,
            b1=float(b1(a, b, params.M)) if a <= 1.0 else float("nan"),
            tau=float(tau_of_t(t, params)),
        )
