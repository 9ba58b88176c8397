"""Markup mechanisms for two i.i.d. agents.

The markup mechanism M_r offers the higher-valued agent the price r times
the lower value, and M_1 is the second-price auction.  A stochastic markup
mechanism randomizes over finitely many markups.  Revenue is computed in
quantile space: M_r(F) = 2 * integral over q of P(r V(q)) where P is the
single-agent posted-price revenue curve.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ConstraintError, DomainError
from .revenue_curves import (
    TOL, PiecewiseLinearRevenueCurve, QuadrilateralDist, TriangleDist,
    price_posting_revenue, quantile_at_price, value_at,
)

R_MIN_GAP = 1e-9
_SERIES_CUTOFF = 0.05
_SERIES_TERMS = 40
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def hat_quantile(q, r):
    """Quantile hit by the price r V(q) on the equal-revenue tail."""
    q = np.asarray(q, dtype=float)
    return q / (r - q * r + q)


def opt_revenue_truncated(qbar):
    """Optimal revenue 2 - qbar on a truncated distribution with monopoly quantile qbar."""
    qbar = np.asarray(qbar, dtype=float)
    if np.any((qbar < 0) | (qbar > 1)):
        raise DomainError("qbar must lie in [0, 1]")
    return 2.0 - qbar


def spa_revenue(curve: PiecewiseLinearRevenueCurve) -> float:
    """Second-price revenue: twice the area under the revenue curve."""
    return float(2.0 * np.trapezoid(curve.R, curve.q))


def spa_revenue_quad(qbar: float, qbar2: float, r: float) -> float:
    """Second-price revenue on a quadrilateral: qbar2 + (1 - qbar) qbar2 / (r qbar)."""
    QuadrilateralDist(qbar, qbar2, r)
    return qbar2 + (1.0 - qbar) * qbar2 / (r * qbar)


def opt_revenue(curve: PiecewiseLinearRevenueCurve) -> float:
    """Optimal two-agent revenue of a regular distribution.

    This is twice the area under the smallest monotone concave majorant,
    which for a concave curve is the curve up to the monopoly quantile and
    flat at the peak afterwards.
    """
    qm = curve.monopoly_quantile
    i = int(np.searchsorted(curve.q, qm))
    left = np.trapezoid(curve.R[: i + 1], curve.q[: i + 1])
    return float(2.0 * (left + curve.peak * (1.0 - qm)))


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 1.0 + R_MIN_GAP):
        raise DomainError(f"markup must exceed 1 + {R_MIN_GAP}")
    return r


def _triangle_series(x, q):
    """Expansion of the triangle markup revenue in powers of x = r - 1."""
    total = np.zeros(np.broadcast(x, q).shape)
    geom = np.ones_like(total)
    qn = np.ones_like(total)
    for n in range(1, _SERIES_TERMS + 1):
        qn = qn * q
        geom = geom + qn
        c = geom / (n + 1) - qn
        total = total + (-1.0) ** (n + 1) * x ** (n - 1) * c
    return total


def markup_revenue_triangle(r, qbar):
    """Closed-form M_r(Tr_qbar) for r > 1 and qbar in [0, 1].

    With s = 1 - qbar + qbar r the revenue is
    2 r / ((1 - qbar)(r - 1)) * ((1 - qbar)/s - ln(r/s)/(r - 1)).
    Near r = 1 a power series in r - 1 avoids cancellation.  A point mass
    (qbar = 1) never sells at a markup above 1.
    """
    r = _check_r(r)
    q = np.asarray(qbar, dtype=float)
    if np.any((q < 0) | (q > 1)):
        raise DomainError("qbar must lie in [0, 1]")
    r, q = np.broadcast_arrays(r, q)
    x = r - 1.0
    u = 1.0 - q
    out = np.zeros(r.shape)
    near = x < _SERIES_CUTOFF
    if np.any(near):
        out[near] = 2.0 * r[near] * _triangle_series(x[near], q[near])
    far = ~near & (u > 0)
    if np.any(far):
        rf, xf, uf = r[far], x[far], u[far]
        s = rf - uf * xf
        bracket = uf / s + np.log1p(-uf * xf / rf) / xf
        out[far] = 2.0 * rf / (uf * xf) * bracket
    out[u == 0] = 0.0
    return out if out.ndim else float(out)


def markup_revenue_triangle_limit(qbar):
    """Limit of M_r(Tr_qbar) as r decreases to 1: ties at the atom do not sell."""
    return 1.0 - np.asarray(qbar, dtype=float)


def markup_revenue_triangle_quadrature(r: float, qbar: float) -> float:
    """Numerical M_r(Tr_qbar) from 2 r * integral of V(q) Qhat(q, r)."""
    _check_r(r)
    if qbar == 1.0:
        return 0.0
    lo = qbar * r / (1.0 - qbar + qbar * r)

    def f(q):
        return (1.0 - q) / ((1.0 - qbar) * q) * q / (r - q * r + q)

    val, _ = integrate.quad(f, lo, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(2.0 * r * val)


def _breakpoints(r, curve):
    V = curve.vertex_values()
    finite = V[np.isfinite(V)]
    pts = [curve.q, np.atleast_1d(quantile_at_price(curve, finite / r))]
    b = np.unique(np.clip(np.concatenate(pts), 0.0, 1.0))
    return b


def _segment_index(curve, q):
    return np.clip(np.searchsorted(curve.q, q, side="right") - 1, 0, len(curve.q) - 2)


def _rational_integral(a0, a1, c0, c1, a, b):
    """Integral of (a0 + a1 q)/(c0 + c1 q) over [a, b] with c0 + c1 q > 0."""
    t = c1 * (b - a) / (c0 + c1 * a)
    if abs(t) < 1e-3:
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = mid + half * _GL_NODES
        return float(half * np.sum(_GL_WEIGHTS * (a0 + a1 * x) / (c0 + c1 * x)))
    k = (a0 * c1 - a1 * c0) / c1
    return float(a1 / c1 * (b - a) + k / c1 * np.log1p(t))


def _markup_curve_analytic(r, curve):
    V = curve.vertex_values()
    A, B = curve.intercepts, curve.slopes
    last = len(V) - 1
    b = _breakpoints(r, curve)
    total = 0.0
    for lo, hi in zip(b[:-1], b[1:]):
        if hi - lo <= 0:
            continue
        m = 0.5 * (lo + hi)
        i = int(_segment_index(curve, m))
        price = r * (A[i] / m + B[i])
        j = int(np.searchsorted(-V, -price, side="right")) - 1
        if j < 0:
            continue
        if j == last:
            if A[i] > 0:
                total += r * (A[i] * np.log(hi / lo) + B[i] * (hi - lo))
            else:
                total += r * B[i] * (hi - lo)
            continue
        a0, a1 = A[j] * r * A[i], A[j] * r * B[i]
        c0, c1 = r * A[i], r * B[i] - B[j]
        total += _rational_integral(a0, a1, c0, c1, lo, hi)
    return 2.0 * total


def _markup_curve_quadrature(r, curve):
    b = _breakpoints(r, curve)

    def f(q):
        if q <= 0:
            return 0.0
        return float(price_posting_revenue(curve, r * value_at(curve, q)))

    total = 0.0
    for lo, hi in zip(b[:-1], b[1:]):
        if hi > lo:
            val, _ = integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)
            total += val
    return 2.0 * total


def markup_revenue_curve(r: float, curve: PiecewiseLinearRevenueCurve,
                         method: str = "analytic") -> float:
    """M_r on an arbitrary concave piecewise-linear curve.

    r = 1 is the second-price auction.  The analytic route splits [0, 1]
    where either V(q) or the markup price r V(q) crosses a vertex value, so
    each piece integrates a ratio of linear functions exactly.
    """
    if r == 1.0:
        return spa_revenue(curve)
    _check_r(r)
    if method == "analytic":
        return _markup_curve_analytic(float(r), curve)
    if method == "quadrature":
        return _markup_curve_quadrature(float(r), curve)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class StochasticMarkupMechanism:
    """A distribution over markups, stored as sorted (r, weight) atoms."""

    atoms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        atoms = tuple(sorted((float(r), float(w)) for r, w in self.atoms))
        if not atoms:
            raise ConstraintError("mechanism needs at least one atom")
        rs = np.array([a[0] for a in atoms])
        ws = np.array([a[1] for a in atoms])
        if np.any(rs < 1.0):
            raise ConstraintError("markups must be at least 1")
        if np.any((rs > 1.0) & (rs <= 1.0 + R_MIN_GAP)):
            raise ConstraintError("markups in (1, 1 + 1e-9] are not supported")
        if np.any(ws < 0) or abs(ws.sum() - 1.0) > TOL:
            raise ConstraintError("weights must be non-negative and sum to one")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def mixture(cls, alpha: float, r: float) -> "StochasticMarkupMechanism":
        """Second-price auction with probability alpha, else markup r."""
        if not 0.0 <= alpha <= 1.0:
            raise ConstraintError("alpha must lie in [0, 1]")
        if alpha == 1.0:
            return cls(((1.0, 1.0),))
        if alpha == 0.0:
            return cls(((r, 1.0),))
        return cls(((1.0, alpha), (r, 1.0 - alpha)))

    @classmethod
    def markup(cls, r: float) -> "StochasticMarkupMechanism":
        return cls(((r, 1.0),))

    @property
    def markups(self) -> np.ndarray:
        return np.array([a[0] for a in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([a[1] for a in self.atoms])

    def to_dict(self) -> dict:
        return {"atoms": [{"r": r, "weight": w} for r, w in self.atoms]}

    @classmethod
    def from_dict(cls, d: dict) -> "StochasticMarkupMechanism":
        return cls(tuple((a["r"], a["weight"]) for a in d["atoms"]))


def as_distribution(dist):
    """Accept a TriangleDist, QuadrilateralDist, curve, or a bare qbar."""
    if isinstance(dist, (TriangleDist, QuadrilateralDist, PiecewiseLinearRevenueCurve)):
        return dist
    if np.isscalar(dist):
        return TriangleDist(float(dist))
    raise TypeError(f"cannot interpret {type(dist).__name__} as a distribution")


def describe_distribution(dist) -> dict:
    dist = as_distribution(dist)
    if isinstance(dist, TriangleDist):
        return {"kind": "triangle", "qbar": dist.qbar}
    if isinstance(dist, QuadrilateralDist):
        return {"kind": "quadrilateral", "qbar": dist.qbar, "qbar2": dist.qbar2, "r": dist.r}
    return dist.to_dict()


def markup_revenue(r: float, dist) -> float:
    dist = as_distribution(dist)
    if isinstance(dist, TriangleDist):
        if r == 1.0:
            return 1.0
        return float(markup_revenue_triangle(r, dist.qbar))
    if isinstance(dist, QuadrilateralDist):
        dist = dist.curve()
    return markup_revenue_curve(r, dist)


def stochastic_markup_revenue(mech: StochasticMarkupMechanism, dist) -> float:
    return float(sum(w * markup_revenue(r, dist) for r, w in mech.atoms if w > 0))


def distribution_opt(dist) -> float:
    dist = as_distribution(dist)
    if isinstance(dist, (TriangleDist, QuadrilateralDist)):
        return dist.opt
    return opt_revenue(dist)


@dataclass(frozen=True)
class RevenueReport:
    mechanism: StochasticMarkupMechanism
    distribution: dict
    revenue: float
    opt: float
    ratio: float

    def to_dict(self) -> dict:
        return {"mechanism": self.mechanism.to_dict(), "distribution": self.distribution,
                "revenue": self.revenue, "opt": self.opt, "ratio": self.ratio}


def approximation_ratio(mech: StochasticMarkupMechanism, dist) -> RevenueReport:
    """OPT(F) / M(F), infinite when the mechanism earns nothing."""
    dist = as_distribution(dist)
    rev = stochastic_markup_revenue(mech, dist)
    opt = distribution_opt(dist)
    ratio = opt / rev if rev > 0 else float("inf")
    return RevenueReport(mech, describe_distribution(dist), rev, opt, ratio)


def affine_bound_check(a, b, c, r1, r2, r3, dist) -> tuple[bool, float, float]:
    """Check a M_r1(F) + b M_r3(F) - c M_r2(F) <= OPT(F).

    Requires a + b - c <= 1, a >= c >= 0, b >= c and 1 <= r1 <= r2 <= r3.  Returns the
    verdict together with the combined revenue and OPT.
    """
    if a + b - c > 1.0 + 1e-12 or c < 0 or a < c or b < c or not (1.0 <= r1 <= r2 <= r3):
        raise ConstraintError("affine bound preconditions violated")
    val = a * markup_revenue(r1, dist) + b * markup_revenue(r3, dist) - c * markup_revenue(r2, dist)
    opt = distribution_opt(dist)
    return bool(val <= opt + 1e-12), float(val), float(opt)
