"""Revenue curves in quantile space.

A value distribution F is represented by its revenue curve R(q) = q V(q),
where V(q) is the value at quantile q (the probability that a draw is at
least V(q)).  Curves here are concave and piecewise linear on [0, 1].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, DomainError

TOL = 1e-12
KINDS = ("distribution", "envelope")


def _as_float_array(x):
    return np.asarray(x, dtype=float)


class PiecewiseLinearRevenueCurve:
    """Concave piecewise-linear revenue curve on [0, 1].

    Vertices are sorted by quantile, start at q = 0 and end at q = 1.
    Interior vertices that are collinear with their neighbours are dropped.
    A positive R(0) means the value distribution has unbounded support.
    """

    __slots__ = ("q", "R", "kind")

    def __init__(self, vertices, kind: str = "distribution", tol: float = TOL):
        if kind not in KINDS:
            raise ConstraintError(f"unknown curve kind {kind!r}")
        v = _as_float_array(vertices)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 2:
            raise ConstraintError("vertices must be an (n, 2) array with n >= 2")
        q, R = v[:, 0].copy(), v[:, 1].copy()
        if not np.all(np.isfinite(v)):
            raise ConstraintError("vertices must be finite")
        if abs(q[0]) > tol or abs(q[-1] - 1.0) > tol:
            raise ConstraintError("vertices must span quantiles 0 to 1")
        q[0], q[-1] = 0.0, 1.0
        if np.any(np.diff(q) <= 0):
            raise ConstraintError("quantiles must be strictly increasing")
        if np.any(R < -tol):
            raise ConstraintError("revenue must be non-negative")
        R = np.maximum(R, 0.0)
        slopes = np.diff(R) / np.diff(q)
        if np.any(np.diff(slopes) > tol * np.maximum(1.0, np.abs(slopes[1:]))):
            raise ConstraintError("revenue curve is not concave")
        keep = np.ones(len(q), dtype=bool)
        bend = np.abs(np.diff(slopes)) <= tol * np.maximum(1.0, np.abs(slopes[1:]))
        keep[1:-1] = ~bend
        q, R = q[keep], R[keep]
        q.setflags(write=False)
        R.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("revenue curves are immutable")

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinearRevenueCurve):
            return NotImplemented
        return (self.kind == other.kind and np.array_equal(self.q, other.q)
                and np.array_equal(self.R, other.R))

    def __hash__(self):
        return hash((self.kind, self.q.tobytes(), self.R.tobytes()))

    def __repr__(self):
        return f"PiecewiseLinearRevenueCurve({self.vertices.tolist()!r}, kind={self.kind!r})"

    @property
    def vertices(self) -> np.ndarray:
        return np.column_stack([self.q, self.R])

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.R) / np.diff(self.q)

    @property
    def intercepts(self) -> np.ndarray:
        """Value at q = 0 of the line through each segment."""
        return self.R[:-1] - self.slopes * self.q[:-1]

    @property
    def peak(self) -> float:
        return float(self.R.max())

    @property
    def monopoly_quantile(self) -> float:
        """Smallest quantile attaining the peak revenue."""
        i = int(np.flatnonzero(self.R >= self.R.max() - TOL)[0])
        return float(self.q[i])

    @property
    def normalized(self) -> bool:
        return abs(self.peak - 1.0) <= TOL

    @property
    def unbounded(self) -> bool:
        return self.R[0] > 0

    def revenue(self, q):
        q = _as_float_array(q)
        if np.any((q < 0) | (q > 1)):
            raise DomainError("quantile outside [0, 1]")
        return np.interp(q, self.q, self.R)

    def vertex_values(self) -> np.ndarray:
        """Values V at each vertex, with V(0) taken as the limit from the right."""
        V = np.empty(len(self.q))
        V[1:] = self.R[1:] / self.q[1:]
        if self.R[0] > 0:
            V[0] = np.inf
        else:
            V[0] = V[1] = self.slopes[0]
        return V

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": self.vertices.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "PiecewiseLinearRevenueCurve":
        return cls(d["vertices"], kind=d.get("kind", "distribution"))


def value_at(curve: PiecewiseLinearRevenueCurve, q):
    """V(q) = R(q) / q for q in (0, 1]."""
    q = _as_float_array(q)
    if np.any((q <= 0) | (q > 1)):
        raise DomainError("value_at needs quantiles in (0, 1]")
    j = np.clip(np.searchsorted(curve.q, q, side="left") - 1, 0, len(curve.q) - 2)
    return curve.intercepts[j] / q + curve.slopes[j]


def quantile_at_price(curve: PiecewiseLinearRevenueCurve, p):
    """Probability that a draw is at least p (largest q with V(q) >= p)."""
    p = _as_float_array(p)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    V = curve.vertex_values()
    A, B = curve.intercepts, curve.slopes
    count = np.searchsorted(-V, -p, side="right")
    out = np.zeros_like(p)
    j = count - 1
    last = len(V) - 1
    out[j == last] = 1.0
    mid = (j >= 0) & (j < last)
    jm = j[mid]
    out[mid] = A[jm] / (p[mid] - B[jm])
    out[p <= 0] = 1.0
    return out[0] if scalar else out


def price_posting_revenue(curve: PiecewiseLinearRevenueCurve, p):
    """Single-agent revenue p * Q(p) from posting price p."""
    p = _as_float_array(p)
    return p * quantile_at_price(curve, p)


def sample_value(curve: PiecewiseLinearRevenueCurve, u):
    """Inverse-transform sampling: the value at uniform quantile u in (0, 1]."""
    return value_at(curve, u)


def truncate_curve(curve: PiecewiseLinearRevenueCurve) -> PiecewiseLinearRevenueCurve:
    """Replace the part left of the monopoly quantile by a point mass at its value."""
    qm = curve.monopoly_quantile
    if qm == 0.0:
        return curve
    i = int(np.searchsorted(curve.q, qm))
    verts = [(0.0, 0.0)] + list(zip(curve.q[i:], curve.R[i:]))
    return PiecewiseLinearRevenueCurve(verts, kind=curve.kind)


@dataclass(frozen=True)
class TriangleDist:
    """Triangle distribution: point mass at 1/qbar on top of an equal-revenue tail.

    Its revenue curve joins (0, 0), (qbar, 1) and (1, 0).  qbar = 0 gives the
    equal-revenue distribution R(q) = 1 - q, qbar = 1 a point mass at 1.
    """

    qbar: float

    def __post_init__(self):
        if not 0.0 <= self.qbar <= 1.0:
            raise DomainError("qbar must lie in [0, 1]")

    def curve(self) -> PiecewiseLinearRevenueCurve:
        """The revenue curve; qbar = 0 yields the unbounded equal-revenue curve."""
        if self.qbar == 0.0:
            return PiecewiseLinearRevenueCurve([(0.0, 1.0), (1.0, 0.0)])
        return triangle_curve(self.qbar)

    def quantile(self, v):
        """Q(v) = 1 / (1 + v (1 - qbar)) for v <= 1/qbar, else 0."""
        v = _as_float_array(v)
        qb = self.qbar
        top = np.inf if qb == 0 else 1.0 / qb
        with np.errstate(divide="ignore"):
            out = np.where(v <= top, 1.0 / (1.0 + np.maximum(v, 0.0) * (1.0 - qb)), 0.0)
        return np.where(v <= 0, 1.0, out)

    def value(self, q):
        q = _as_float_array(q)
        qb = self.qbar
        if qb == 1.0:
            return np.ones_like(q)
        with np.errstate(divide="ignore"):
            tail = (1.0 - q) / ((1.0 - qb) * q)
        if qb == 0.0:
            return tail
        return np.where(q <= qb, 1.0 / qb, tail)

    @property
    def opt(self) -> float:
        return 2.0 - self.qbar


@dataclass(frozen=True)
class QuadrilateralDist:
    """Revenue curve through (0, 0), (qbar, 1), (qbar2, qbar2/(r qbar)), (1, 0).

    The third vertex lies on the ray where the value equals 1/(r qbar).
    """

    qbar: float
    qbar2: float
    r: float

    def __post_init__(self):
        lo, hi = quadrilateral_bounds(self.qbar, self.r)
        if not (lo - TOL <= self.qbar2 <= hi + TOL):
            raise ConstraintError(
                f"qbar2={self.qbar2} outside [{lo}, {hi}] for qbar={self.qbar}, r={self.r}")

    def curve(self) -> PiecewiseLinearRevenueCurve:
        return quadrilateral_curve(self.qbar, self.qbar2, self.r)

    def quantile(self, v):
        """Quantile function written piecewise in value space."""
        v = _as_float_array(v)
        qb, qp, r = self.qbar, self.qbar2, self.r
        h = qp / (r * qb)
        slope = (h - 1.0) / (qp - qb) if qp > qb else 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            upper = (h - slope * qp) / (v - slope)
            lower = qp / (qp + v * r * qb * (1.0 - qp))
        out = np.where(v > 1.0 / qb, 0.0, np.where(v >= 1.0 / (r * qb), upper, lower))
        if qp >= 1.0 - TOL:
            out = np.where(v <= 1.0 / (r * qb), 1.0, out)
        if qp <= qb + TOL:
            out = np.where(v > 1.0 / qb, 0.0, np.where(v >= 1.0 / (r * qb), qb, lower))
        return np.where(v <= 0, 1.0, out)

    @property
    def opt(self) -> float:
        return 2.0 - self.qbar


def quadrilateral_bounds(qbar: float, r: float) -> tuple[float, float]:
    if not 0.0 < qbar < 1.0:
        raise DomainError("qbar must lie in (0, 1)")
    if r < 1.0:
        raise DomainError("r must be at least 1")
    return qbar * r / (qbar * r + 1.0 - qbar), min(r * qbar, 1.0)


def triangle_curve(qbar: float) -> PiecewiseLinearRevenueCurve:
    """Curve of Tr_qbar for qbar in (0, 1]; the qbar = 0 limit lives on TriangleDist."""
    if not 0.0 < qbar <= 1.0:
        raise DomainError("qbar must lie in (0, 1]")
    if qbar == 1.0:
        return PiecewiseLinearRevenueCurve([(0.0, 0.0), (1.0, 1.0)])
    return PiecewiseLinearRevenueCurve([(0.0, 0.0), (qbar, 1.0), (1.0, 0.0)])


def quadrilateral_curve(qbar: float, qbar2: float, r: float) -> PiecewiseLinearRevenueCurve:
    lo, hi = quadrilateral_bounds(qbar, r)
    if not (lo - TOL <= qbar2 <= hi + TOL):
        raise ConstraintError(f"qbar2={qbar2} outside [{lo}, {hi}]")
    qbar2 = min(max(qbar2, lo), hi)
    h = qbar2 / (r * qbar)
    if qbar2 >= 1.0 - TOL:
        verts = [(0.0, 0.0), (qbar, 1.0), (1.0, h)]
    else:
        verts = [(0.0, 0.0), (qbar, 1.0), (qbar2, h), (1.0, 0.0)]
    return PiecewiseLinearRevenueCurve(verts)


def triangulation(curve: PiecewiseLinearRevenueCurve) -> TriangleDist:
    """The triangle distribution sharing the monopoly quantile of a normalized curve."""
    if not curve.normalized:
        raise ConstraintError("triangulation needs a normalized curve")
    return TriangleDist(curve.monopoly_quantile)
