"""Indifference constructions for simple pricing rules.

Two families are explored.  Quadratic pricing leads to the series
S(q) = sum_{k>=2} (1 - q)^(k-1) / k^2 and the designer's guarantee
A(beta, q) = (beta + 2 (1 - beta) S(q)) / (2 - q), solved as a max-min.
Anonymous truncation uses the density g(t) = (3t + 1)/(t (t + 1)^2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError

PI2_6 = np.pi ** 2 / 6
EPS = np.finfo(float).eps
_K_VEC = 64


@dataclass(frozen=True)
class PolylogSum:
    """Truncated series value; remainder bounds the dropped tail, rounding the arithmetic."""

    q: float
    K: int
    value: float
    remainder: float
    rounding: float

    @property
    def error_bound(self) -> float:
        return self.remainder + self.rounding


def _li2_small(z, K):
    """Partial sum of Li_2(z) = sum z^k / k^2 for k <= K, with its tail bound."""
    k = np.arange(1, K + 1)
    tail = z ** (K + 1) / ((K + 1) ** 2 * (1 - z))
    return float(np.sum(z ** k / k**2)), float(tail)


def _auto_K(z, start=2):
    K = start
    while True:
        last = z**K / K**2
        tail = z ** (K + 1) / ((K + 1) ** 2 * (1 - z))
        if last < 1e-16 and tail < 1e-15:
            return K
        K += 1


def series_S(q: float, K: int | None = None) -> PolylogSum:
    """S(q) = sum_{k>=2} (1 - q)^(k-1) / k^2 with a bound on the neglected tail.

    For q >= 1/2 the series is summed directly.  For smaller q the
    reflection Li_2(x) = pi^2/6 - ln(x) ln(1 - x) - Li_2(1 - x) turns it into
    a series in q.  q = 0 returns Li_2(1) - 1 exactly.
    """
    if not 0.0 <= q <= 1.0:
        raise DomainError("q must lie in [0, 1]")
    if q == 0.0:
        return PolylogSum(0.0, 0, PI2_6 - 1.0, 0.0, 4 * EPS)
    x = 1.0 - q
    if q == 1.0:
        return PolylogSum(1.0, 0, 0.0, 0.0, 0.0)
    if q >= 0.5:
        K = K or _auto_K(x)
        k = np.arange(2, K + 1)
        val = float(np.sum(x ** (k - 1) / k**2))
        tail = x**K / ((K + 1) ** 2 * (1 - x))
        return PolylogSum(q, int(K), val, float(tail), 8 * EPS * max(val, EPS))
    K = K or _auto_K(q, start=1)
    li_q, tail = _li2_small(q, K)
    li_x = PI2_6 - np.log(q) * np.log(x) - li_q
    val = (li_x - x) / x
    return PolylogSum(q, int(K), float(val), tail / x, 16 * EPS * PI2_6 / x)


def _S_vec(q):
    """Vectorized S(q) with a fixed number of terms (error below 1e-18 in each branch)."""
    q = np.asarray(q, dtype=float)
    x = 1.0 - q
    out = np.empty_like(q)
    k = np.arange(1, _K_VEC + 1)[:, None]
    hi = q >= 0.5
    if np.any(hi):
        xh = x[hi]
        out[hi] = np.sum(xh ** k / (k + 1.0) ** 2, axis=0)
    lo = ~hi & (q > 0)
    if np.any(lo):
        ql, xl = q[lo], x[lo]
        li_q = np.sum(ql ** k / k**2, axis=0)
        out[lo] = (PI2_6 - np.log(ql) * np.log(xl) - li_q - xl) / xl
    out[q == 0] = PI2_6 - 1.0
    return out


def _dS_vec(q):
    """Derivative of S in q."""
    q = np.asarray(q, dtype=float)
    x = 1.0 - q
    out = np.empty_like(q)
    k = np.arange(2, _K_VEC + 2)[:, None]
    hi = q >= 0.5
    if np.any(hi):
        out[hi] = -np.sum((k - 1.0) * x[hi] ** (k - 2) / k**2, axis=0)
    lo = ~hi
    if np.any(lo):
        ql, xl = q[lo], x[lo]
        j = np.arange(1, _K_VEC + 1)[:, None]
        li_x = PI2_6 - np.log(ql) * np.log(xl) - np.sum(ql ** j / j**2, axis=0)
        out[lo] = (np.log(ql) + li_x) / xl**2
    return out


def series_T(q):
    """T(q) = sum_{k>=2} (1 - q)^(k-2) / k^2, so that S = (1 - q) T."""
    q = np.asarray(q, dtype=float)
    x = 1.0 - q
    k = np.arange(2, _K_VEC + 2)[:, None]
    direct = np.sum(np.atleast_1d(x)[None, :] ** (k - 2) / k**2, axis=0).reshape(q.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        via_s = _S_vec(q) / x
    return np.where(q >= 0.5, direct, via_s)


def quad_pricing_apx(beta, q):
    """A(beta, q) = (beta + 2 (1 - beta) S(q)) / (2 - q)."""
    beta = np.asarray(beta, dtype=float)
    q = np.asarray(q, dtype=float)
    return (beta + 2 * (1 - beta) * _S_vec(q)) / (2 - q)


def quad_pricing_apx_dq(beta, q):
    S, dS = _S_vec(q), _dS_vec(q)
    return (2 * (1 - beta) * dS * (2 - q) + beta + 2 * (1 - beta) * S) / (2 - q) ** 2


def quad_pricing_inner(beta: float) -> tuple[float, float]:
    """(min over q of A(beta, q), minimizer), from the root of the q-derivative."""
    g = lambda q: float(quad_pricing_apx_dq(beta, np.array([q]))[0])
    lo, hi = 1e-12, 1.0
    if g(hi) <= 0:
        return float(quad_pricing_apx(beta, np.array([hi]))[0]), hi
    if g(lo) >= 0:
        return float(quad_pricing_apx(beta, np.array([0.0]))[0]), 0.0
    q = optimize.brentq(g, lo, hi, xtol=1e-15, rtol=1e-14)
    return float(quad_pricing_apx(beta, np.array([q]))[0]), float(q)


@dataclass(frozen=True)
class MaxMinResult:
    beta: float
    alpha: float
    q: float

    def to_dict(self) -> dict:
        return {"beta": self.beta, "alpha": self.alpha, "q": self.q}


def quad_pricing_maxmin(bracket=(0.5, 1.0)) -> MaxMinResult:
    """max over beta of min over q of A(beta, q)."""
    res = optimize.minimize_scalar(lambda b: -quad_pricing_inner(b)[0], bounds=bracket,
                                   method="bounded", options={"xatol": 1e-10})
    beta = float(res.x)
    alpha, q = quad_pricing_inner(beta)
    return MaxMinResult(beta, alpha, q)


def indifference_alpha_for_q(q):
    """Mixing weight solving 1 = 2 (1 - alpha)/alpha * T(q)."""
    T = series_T(q)
    return 2 * T / (1 + 2 * T)


def anon_truncation_density(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 1):
        raise DomainError("density defined for t >= 1")
    return (3 * t + 1) / (t * (t + 1) ** 2)


def anon_truncation_antiderivative(t):
    t = np.asarray(t, dtype=float)
    return -2 / (t + 1) + np.log(t / (t + 1))


def anon_truncation_total_mass() -> float:
    """Integral of g over [1, infinity): G(inf) - G(1) = 1 + ln 2."""
    return float(-anon_truncation_antiderivative(1.0))


@dataclass(frozen=True)
class TruncationParams:
    gamma: float
    beta: float
    alpha: float

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "beta": self.beta, "alpha": self.alpha}


def anon_truncation_params() -> TruncationParams:
    """gamma from the identity at tau = 1, beta from the total mass of g."""
    gamma = 1.0 / 0.75
    x = 0.75 / anon_truncation_total_mass()
    beta = x / (1 + x)
    return TruncationParams(gamma, beta, beta * gamma)


@dataclass(frozen=True)
class IndifferenceCheck:
    holds: bool
    worst: float
    tau_at_worst: float

    def __bool__(self):
        return self.holds


def verify_indifference(taus, tol: float = 1e-8) -> IndifferenceCheck:
    """Check 1 + gamma int_1^tau g(t) t/(t+1) dt = gamma (2 tau^2 + tau)/(1 + tau)^2.

    The left side is integrated numerically in log t.
    """
    gamma = anon_truncation_params().gamma
    taus = np.asarray(taus, dtype=float)
    if np.any(taus < 1):
        raise DomainError("tau must be at least 1")

    def h(u):
        t = np.exp(u)
        return float(anon_truncation_density(t) * t / (t + 1) * t)

    worst, at = 0.0, float(taus[0]) if taus.size else 1.0
    for tau in taus:
        val, _ = integrate.quad(h, 0.0, np.log(tau), epsabs=1e-13, epsrel=1e-13, limit=200)
        lhs = 1 + gamma * val
        rhs = gamma * (2 * tau**2 + tau) / (1 + tau) ** 2
        err = abs(lhs - rhs)
        if err > worst:
            worst, at = err, float(tau)
    return IndifferenceCheck(worst <= tol, float(worst), at)
