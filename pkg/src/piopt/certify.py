"""Certified computation of the prior-independent equilibrium over triangles.

The adversary picks a triangle distribution Tr_q and the designer a mixture
of the second-price auction (weight alpha) and a markup r.  Certification
combines grid evaluations of the closed-form triangle revenue with two
continuity facts, valid for 1 <= r1 <= r2 and q1 <= q2:

    M_r1(Tr_q) >= (r1 / r2) M_r2(Tr_q)
    (1 - q2)/(1 - q1) M_r(Tr_q2) <= M_r(Tr_q1) <= 2 (q2 - q1) + M_r(Tr_q2)

so every grid cell gets a rigorous bound up to floating-point slack.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize

from .errors import BracketError, CertificationError
from .markup import markup_revenue_triangle

SLACK = 1e-12
R_SPLIT = 1.1
R_MAX = 11.0
R_TAIL = 200.0
MAX_ROUNDS = 80


def triangle_markup(r, q):
    """M_r(Tr_q) for arrays, with the point mass q = 1 allowed."""
    return markup_revenue_triangle(r, q)


def triangle_markup_dq(r, q):
    """Partial derivative of M_r(Tr_q) in q."""
    r, q = np.asarray(r, float), np.asarray(q, float)
    u, x = 1.0 - q, r - 1.0
    s = 1.0 - q + q * r
    L = np.log(r / s)
    return 2 * r * (-(u * x) ** 2 + u * x * s - s * s * L) / ((u * x * s) ** 2)


def apx_spa(q):
    """Approximation ratio of the second-price auction on Tr_q."""
    return 2.0 - np.asarray(q, dtype=float)


def inv_apx(alpha, r, q):
    """Revenue of M_{alpha,r} on Tr_q as a fraction of OPT = 2 - q."""
    return (alpha + (1 - alpha) * triangle_markup(r, q)) / (2.0 - np.asarray(q, float))


def second_derivative_inv_apx(alpha, r, q):
    """Second derivative in q of (alpha + (1 - alpha) M_r(Tr_q)) / (2 - q)."""
    a = np.asarray(alpha, float)
    r = np.asarray(r, float)
    q = np.asarray(q, float)
    s = 1 - q + q * r
    L = np.log(r / s)
    k = 2 * (1 - a) * r / (r - 1)
    t1 = 2 * k * (-(r - 1) / s**2 + 1 / ((1 - q) * s) - L / ((r - 1) * (1 - q) ** 2)) / (2 - q) ** 2
    t2 = k * (2 * (r - 1) ** 2 / s**3 - (r - 1) / ((1 - q) * s**2) + 2 / ((1 - q) ** 2 * s)
              - 2 * L / ((r - 1) * (1 - q) ** 3)) / (2 - q)
    t3 = (2 * k * (1 / s - L / ((r - 1) * (1 - q))) + 2 * a) / (2 - q) ** 3
    return t1 + t2 + t3


@dataclass
class CertifiedBound:
    """A certified inequality over a region, with its grid witness.

    kind "lower" certifies inf over the region >= value, "upper" certifies
    sup <= value.  witness is the extreme sampled value before lifting.
    """

    kind: str
    value: float
    witness: float
    witness_point: tuple
    region: dict
    cells: int
    finest: float
    holds: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return _native(asdict(self))


def _native(x):
    """Recursively turn numpy scalars and tuples into plain JSON types."""
    if isinstance(x, dict):
        return {k: _native(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_native(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


def _widths_ok(w, min_width):
    return w > min_width * (1 - 1e-9)


def _lower_cells_q(r, a, b):
    """Lower bounds for M_r(Tr_q) over q in [a, b] from its endpoint values.

    Uses only that (1 - q) M_r(Tr_q) is nonincreasing in q.
    """
    Ma, Mb = triangle_markup(r, a), triangle_markup(r, b)
    lb = (1 - b) / (1 - a) * Mb
    return lb, Ma, Mb


def certify_markup_above(r: float, q_lo: float, q_hi: float, level: float = 1.0,
                         grid_eps: float = 1e-6, min_width: float | None = None) -> CertifiedBound:
    """Certify M_r(Tr_q) > level for every q in [q_lo, q_hi]."""
    min_width = min_width or grid_eps / 1024
    edges = np.unique(np.append(np.arange(q_lo, q_hi, grid_eps), q_hi))
    a, b = edges[:-1], edges[1:]
    worst, cells, finest = np.inf, 0, grid_eps
    wit, wit_pt = np.inf, (q_hi,)
    for _ in range(MAX_ROUNDS):
        lb, Ma, Mb = _lower_cells_q(r, a, b)
        cells += len(a)
        i = np.argmin(np.minimum(Ma, Mb))
        m = min(Ma[i], Mb[i])
        if m < wit:
            wit, wit_pt = float(m), (float(a[i] if Ma[i] <= Mb[i] else b[i]),)
        if m <= level + SLACK:
            raise CertificationError(
                f"M_{r}(Tr_q) = {m} does not exceed {level} at q={wit_pt[0]}", cell=(a[i], b[i]))
        ok = lb > level + SLACK
        if np.any(ok):
            worst = min(worst, float(lb[ok].min()))
        bad = ~ok
        if not np.any(bad):
            break
        a, b = a[bad], b[bad]
        w = b - a
        if not np.all(_widths_ok(w / 2, min_width)):
            k = int(np.argmin(w))
            raise CertificationError(
                f"cannot certify M_{r}(Tr_q) > {level} near q={a[k]}", cell=(a[k], b[k]))
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        finest = min(finest, float((b - a).min()))
    return CertifiedBound("lower", worst, wit, wit_pt,
                          {"r": r, "q": [q_lo, q_hi]}, cells, finest)


def _upper_cells(qa, qb, ra, rb):
    """Upper bounds on M_r(Tr_q) over [qa, qb] x [ra, rb].

    (1 - q) M_r(Tr_q) is nonincreasing in q and M_r / r is nonincreasing in r.
    At qb = 1 the bound falls back to r (1 - q), since ties never sell.
    """
    Ma = triangle_markup(ra, qa)
    Mb = triangle_markup(ra, qb)
    with np.errstate(divide="ignore", invalid="ignore"):
        mult = np.where(qb < 1, (1 - qa) / (1 - qb) * Ma, np.inf)
    return rb / ra * np.minimum(mult, ra * (1 - qa)), Ma, Mb


def certify_markup_below(q_lo: float, q_hi: float, r_lo: float, r_hi: float,
                         level: float = 1.0, min_width: float = 1e-12,
                         start: tuple[int, int] = (64, 64)) -> CertifiedBound:
    """Certify M_r(Tr_q) < level over [q_lo, q_hi] x [r_lo, r_hi] with r_lo > 1.

    Cells are bisected along whichever side contributes more slack until the
    bound clears the level or a cell becomes narrower than min_width.
    """
    qe = np.linspace(q_lo, q_hi, start[0] + 1)
    re = np.geomspace(r_lo, r_hi, start[1] + 1)
    QA, RA = np.meshgrid(qe[:-1], re[:-1], indexing="ij")
    QB, RB = np.meshgrid(qe[1:], re[1:], indexing="ij")
    qa, qb, ra, rb = QA.ravel(), QB.ravel(), RA.ravel(), RB.ravel()
    worst, cells, finest = -np.inf, 0, np.inf
    wit, wit_pt = -np.inf, (q_lo, r_lo)
    for _ in range(4 * MAX_ROUNDS):
        ub, Ma, Mb = _upper_cells(qa, qb, ra, rb)
        cells += len(qa)
        i = int(np.argmax(np.maximum(Ma, Mb)))
        m = max(Ma[i], Mb[i])
        if m > wit:
            wit, wit_pt = float(m), (float(qa[i] if Ma[i] >= Mb[i] else qb[i]), float(ra[i]))
        if m >= level - SLACK:
            raise CertificationError(
                f"M_r(Tr_q) = {m} is not below {level} at q={qa[i]}, r={ra[i]}",
                cell=(qa[i], qb[i], ra[i], rb[i]))
        ok = ub < level - SLACK
        if np.any(ok):
            worst = max(worst, float(ub[ok].max()))
            finest = min(finest, float(np.min(np.minimum(qb[ok] - qa[ok], rb[ok] - ra[ok]))))
        bad = ~ok
        if not np.any(bad):
            break
        qa, qb, ra, rb, Ma = qa[bad], qb[bad], ra[bad], rb[bad], Ma[bad]
        q_slack = (qb - qa) / np.maximum(1 - qb, 1e-300) * np.maximum(Ma, 1e-300)
        r_slack = (rb / ra - 1) * np.maximum(Ma, 1e-300)
        split_q = q_slack >= r_slack
        if np.any(np.where(split_q, qb - qa, rb - ra) / 2 < min_width):
            k = int(np.argmin(np.where(split_q, qb - qa, rb - ra)))
            raise CertificationError(
                f"cannot certify M_r(Tr_q) < {level} near q={qa[k]}, r={ra[k]}",
                cell=(qa[k], qb[k], ra[k], rb[k]))
        qm = np.where(split_q, 0.5 * (qa + qb), qb)
        rm = np.where(split_q, rb, 0.5 * (ra + rb))
        qa2 = np.where(split_q, qm, qa)
        ra2 = np.where(split_q, ra, rm)
        qa, qb = np.concatenate([qa, qa2]), np.concatenate([qm, qb])
        ra, rb = np.concatenate([ra, ra2]), np.concatenate([rm, rb])
    else:
        raise CertificationError("refinement did not terminate")
    return CertifiedBound("upper", worst, wit, wit_pt,
                          {"q": [q_lo, q_hi], "r": [r_lo, r_hi]}, cells, finest)


def certify_near_one(q_lo: float, r_split: float = R_SPLIT, level: float = 1.0) -> CertifiedBound:
    """For 1 < r <= r_split, M_r(Tr_q) <= r (1 - q) because ties never sell."""
    value = r_split * (1.0 - q_lo)
    holds = value < level - SLACK
    return CertifiedBound("upper", value, value, (q_lo, r_split),
                          {"q": [q_lo, 1.0], "r": [1.0, r_split]}, 1, 0.0, holds,
                          "analytic bound r (1 - q)")


def max_markup_revenue(q: float, r_lo: float = 1.0 + 1e-6, r_hi: float = R_MAX,
                       n: int = 2001) -> tuple[float, float]:
    """(max_r M_r(Tr_q), argmax) by a coarse grid and bounded refinement."""
    rs = np.geomspace(r_lo, r_hi, n)
    vals = triangle_markup(rs, q)
    i = int(np.argmax(vals))
    a, b = rs[max(i - 1, 0)], rs[min(i + 1, n - 1)]
    res = optimize.minimize_scalar(lambda r: -triangle_markup(r, q), bounds=(a, b),
                                   method="bounded", options={"xatol": 1e-12})
    if -res.fun >= vals[i]:
        return float(-res.fun), float(res.x)
    return float(vals[i]), float(rs[i])


def crossing_point(bracket=(0.05, 0.15)) -> tuple[float, float]:
    """Root of max_r M_r(Tr_q) = 1 and the maximizing markup there."""
    q = optimize.brentq(lambda q: max_markup_revenue(q)[0] - 1.0, *bracket,
                        xtol=1e-15, rtol=1e-15)
    return float(q), max_markup_revenue(q)[1]


@dataclass
class CrossingResult:
    lo: float
    hi: float
    qbar: float
    r: float
    left: CertifiedBound
    right: CertifiedBound
    near_one: CertifiedBound
    tail: CertifiedBound

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "qbar": self.qbar, "r": self.r,
                "left": self.left.to_dict(), "right": self.right.to_dict(),
                "near_one": self.near_one.to_dict(), "tail": self.tail.to_dict()}


def r_tail_check(q_min: float, r_lo: float = R_MAX, r_hi: float = R_TAIL) -> CertifiedBound:
    """Certify that no markup in [r_lo, r_hi] beats the second-price auction for q >= q_min.

    Markups beyond r_hi are excluded by assumption: M_r(Tr_q) decreases in r
    past its peak, which is checked only numerically.
    """
    cb = certify_markup_below(q_min, 1.0, r_lo, r_hi, start=(32, 32))
    cb.note = f"markups above {r_hi} excluded by assumption"
    return cb


def find_crossing(grid_eps: float = 1e-6, r_max: float = R_MAX) -> CrossingResult:
    """Certified bracket [lo, hi] around the crossing of APX_1 and APX*.

    Left of lo a single markup earns more than the second-price auction on
    every triangle; right of hi no markup in (1, r_max] does.
    """
    q0, r0 = crossing_point()
    lo = grid_eps * np.floor(q0 / grid_eps - 0.5)
    hi = lo + 2 * grid_eps
    left = certify_markup_above(r0, 0.0, lo, grid_eps=grid_eps)
    right = certify_markup_below(hi, 1.0, R_SPLIT, r_max, min_width=grid_eps / 4096)
    near = certify_near_one(hi)
    if not near.holds:
        raise CertificationError("analytic bound near r = 1 failed", cell=(hi, 1.0))
    tail = r_tail_check(hi, r_max)
    return CrossingResult(float(lo), float(hi), q0, r0, left, right, near, tail)


def apx_markup_opt(qbar: float, r_max: float = R_MAX, r_grid_eps: float = 1e-4):
    """Best approximation ratio (2 - q)/M_r(Tr_q) over markups r in (1, r_max].

    Returns (ratio, argmax markup, certified lower bound on the ratio, interior)
    where interior is False when the best markup sits on the r_max boundary.
    As q -> 0 the infimum is approached only as r grows without bound.
    """
    rs = np.arange(R_SPLIT, r_max + r_grid_eps / 2, r_grid_eps)
    vals = triangle_markup(rs, qbar)
    i = int(np.argmax(vals))
    best_r, best = float(rs[i]), float(vals[i])
    if 0 < i < len(rs) - 1:
        res = optimize.minimize_scalar(lambda r: -triangle_markup(r, qbar),
                                       bounds=(rs[i - 1], rs[i + 1]), method="bounded",
                                       options={"xatol": 1e-12})
        if -res.fun > best:
            best_r, best = float(res.x), float(-res.fun)
    ub = max(float(np.max(rs[1:] / rs[:-1] * vals[:-1])), R_SPLIT * (1 - qbar))
    opt = 2.0 - qbar
    ratio = opt / best if best > 0 else np.inf
    bound = CertifiedBound("lower", opt / ub, ratio, (qbar, best_r),
                           {"q": qbar, "r": [1.0, r_max]}, len(rs), r_grid_eps)
    return ratio, best_r, bound, i < len(rs) - 1


def _inv_apx_dq(alpha, r, q):
    N = alpha + (1 - alpha) * triangle_markup(r, q)
    return ((1 - alpha) * triangle_markup_dq(r, q) * (2 - q) + N) / (2 - q) ** 2


def adversary_best_response(alpha: float, r: float, grid_eps: float = 1e-3) -> float:
    """Triangle maximizing OPT / M_{alpha,r}, located on a grid and refined.

    Refinement solves the first-order condition by Brent's method so the
    result is accurate to near machine precision.
    """
    qs = np.arange(0.0, 1.0, grid_eps)
    vals = inv_apx(alpha, r, qs)
    i = int(np.argmin(vals))
    if 1.0 / alpha >= 1.0 / vals[i]:
        return 1.0
    lo, hi = qs[max(i - 1, 0)], qs[min(i + 1, len(qs) - 1)]
    glo, ghi = _inv_apx_dq(alpha, r, lo), _inv_apx_dq(alpha, r, hi)
    if glo < 0 < ghi:
        return float(optimize.brentq(lambda q: _inv_apx_dq(alpha, r, q), lo, hi,
                                     xtol=1e-15, rtol=1e-15))
    return float(qs[i])


def solve_alpha(r: float, qbar: float, lo: float = 0.8, hi: float = 0.81,
                tol: float = 1e-10) -> float:
    """Mixing weight whose adversarial best response is qbar, by bisection."""
    f_lo = adversary_best_response(lo, r) - qbar
    f_hi = adversary_best_response(hi, r) - qbar
    if not (f_lo > 0 > f_hi):
        raise BracketError(f"best responses {f_lo + qbar}, {f_hi + qbar} do not straddle {qbar}")
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f = adversary_best_response(mid, r) - qbar
        if abs(f) <= tol or hi - lo < 1e-15:
            break
        if f > 0:
            lo = mid
        else:
            hi = mid
    return float(mid)


def certify_ratio_upper(alpha: float, r: float, intervals, level: float,
                        grid_eps: float = 1e-5, min_width: float = 1e-13) -> CertifiedBound:
    """Certify (2 - q)/M_{alpha,r}(Tr_q) <= level for q in the given intervals."""
    worst, wit, wit_pt, cells, finest = -np.inf, -np.inf, (None,), 0, grid_eps
    for q_lo, q_hi in intervals:
        n = max(1, int(np.ceil((q_hi - q_lo) / grid_eps)))
        e = np.linspace(q_lo, q_hi, n + 1)
        a, b = e[:-1], e[1:]
        for _ in range(MAX_ROUNDS):
            lb, Ma, Mb = _lower_cells_q(r, a, b)
            ub = (2 - a) / (alpha + (1 - alpha) * np.maximum(lb, 0.0))
            ra, rb = (2 - a) / (alpha + (1 - alpha) * Ma), (2 - b) / (alpha + (1 - alpha) * Mb)
            cells += len(a)
            i = int(np.argmax(np.maximum(ra, rb)))
            if max(ra[i], rb[i]) > wit:
                wit = float(max(ra[i], rb[i]))
                wit_pt = (float(a[i] if ra[i] >= rb[i] else b[i]),)
            if max(ra[i], rb[i]) >= level - SLACK:
                raise CertificationError(f"ratio {max(ra[i], rb[i])} reaches {level} near q={a[i]}",
                                         cell=(a[i], b[i]))
            ok = ub <= level - SLACK
            if np.any(ok):
                worst = max(worst, float(ub[ok].max()))
            if np.all(ok):
                break
            a, b = a[~ok], b[~ok]
            if np.any((b - a) / 2 < min_width):
                raise CertificationError(f"ratio bound {level} fails near q={a[0]}",
                                         cell=(a[0], b[0]))
            m = 0.5 * (a + b)
            a, b = np.concatenate([a, m]), np.concatenate([m, b])
            finest = min(finest, float((b - a).min()))
    return CertifiedBound("upper", worst, wit, wit_pt,
                          {"alpha": alpha, "r": r, "q": [list(iv) for iv in intervals]},
                          cells, finest)


def certify_ratio_lower(r: float, q_lo: float, q_hi: float, level: float,
                        grid_eps: float = 1e-5) -> CertifiedBound:
    """Certify (2 - q)/M_r(Tr_q) >= level for q in [q_lo, q_hi]."""
    n = max(1, int(np.ceil((q_hi - q_lo) / grid_eps)))
    e = np.linspace(q_lo, q_hi, n + 1)
    a, b = e[:-1], e[1:]
    cells, finest, worst = 0, grid_eps, np.inf
    wit, wit_pt = np.inf, (q_lo,)
    for _ in range(MAX_ROUNDS):
        Ma, Mb = triangle_markup(r, a), triangle_markup(r, b)
        with np.errstate(divide="ignore"):
            ub = np.where(b < 1, (1 - a) / (1 - b) * Ma, (1 - a) * r)
        lb = (2 - b) / ub
        ra, rb = (2 - a) / Ma, (2 - b) / Mb
        cells += len(a)
        i = int(np.argmin(np.minimum(ra, rb)))
        if min(ra[i], rb[i]) < wit:
            wit = float(min(ra[i], rb[i]))
            wit_pt = (float(a[i] if ra[i] <= rb[i] else b[i]),)
        if min(ra[i], rb[i]) <= level + SLACK:
            raise CertificationError(f"ratio {min(ra[i], rb[i])} is not above {level} near q={a[i]}",
                                     cell=(a[i], b[i]))
        ok = lb >= level + SLACK
        if np.any(ok):
            worst = min(worst, float(lb[ok].min()))
        if np.all(ok):
            break
        a, b = a[~ok], b[~ok]
        if np.any((b - a) / 2 < 1e-13):
            raise CertificationError(f"ratio bound {level} fails near q={a[0]}", cell=(a[0], b[0]))
        m = 0.5 * (a + b)
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
        finest = min(finest, float((b - a).min()))
    return CertifiedBound("lower", worst, wit, wit_pt, {"r": r, "q": [q_lo, q_hi]},
                          cells, finest)


def convexity_certificate(alpha=(0.8, 0.81), r=(2.44, 2.45), q=(0.093, 0.094),
                          n: int = 21, level: float = 0.0) -> CertifiedBound:
    """Minimum over a box of the second derivative of M_{alpha,r}/OPT in q.

    The minimum is sampled on an n^3 grid and lowered by the largest sampled
    change between neighbouring grid points, a numerical rather than a
    rigorous cushion.
    """
    A, R, Q = np.meshgrid(np.linspace(*alpha, n), np.linspace(*r, n),
                          np.linspace(*q, n), indexing="ij")
    d2 = second_derivative_inv_apx(A, R, Q)
    jump = max(float(np.abs(np.diff(d2, axis=k)).max()) for k in range(3))
    m = float(d2.min())
    idx = np.unravel_index(int(np.argmin(d2)), d2.shape)
    pt = (float(A[idx]), float(R[idx]), float(Q[idx]))
    value = m - jump
    return CertifiedBound("lower", value, m, pt,
                          {"alpha": list(alpha), "r": list(r), "q": list(q)},
                          d2.size, float((q[1] - q[0]) / (n - 1)), value > level,
                          "grid minimum minus largest neighbour jump")


@dataclass
class SolverConfig:
    grid_eps: float = 1e-6
    r_max: float = R_MAX
    alpha_bracket: tuple = (0.8, 0.81)
    alpha_tol: float = 1e-10
    box: tuple = (0.093, 0.094)
    fixed_point_tol: float = 1e-6


@dataclass
class EquilibriumSolution:
    qbar: float
    r: float
    alpha: float
    beta: float
    crossing: CrossingResult
    best_response: CertifiedBound
    convexity: CertifiedBound
    fixed_point: dict
    config: SolverConfig = field(default_factory=SolverConfig)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {"qbar": self.qbar, "r": self.r, "alpha": self.alpha, "beta": self.beta,
                "crossing": self.crossing.to_dict(),
                "certificates": {"best_response": self.best_response.to_dict(),
                                 "convexity": self.convexity.to_dict()},
                "fixed_point": self.fixed_point,
                "config": {k: list(v) if isinstance(v, tuple) else v
                           for k, v in asdict(self.config).items()},
                "wall_time": self.wall_time}


def solve_equilibrium(config: SolverConfig | None = None) -> EquilibriumSolution:
    """Solve and certify the designer/adversary equilibrium over triangles."""
    config = config or SolverConfig()
    t0 = time.perf_counter()
    cross = find_crossing(config.grid_eps, config.r_max)
    q, r = cross.qbar, cross.r
    alpha = solve_alpha(r, q, *config.alpha_bracket, tol=config.alpha_tol)
    beta = 2.0 - q
    m_best, _ = max_markup_revenue(q, r_hi=config.r_max)
    br = adversary_best_response(alpha, r)
    worst_ratio = float(1.0 / inv_apx(alpha, r, q))
    fixed = {"spa_revenue": 1.0, "markup_revenue": float(triangle_markup(r, q)),
             "best_markup_revenue": m_best, "best_response": br,
             "ratio_at_qbar": worst_ratio}
    tol = config.fixed_point_tol
    if not (abs(fixed["markup_revenue"] - 1.0) <= tol and m_best <= 1.0 + tol
            and abs(br - q) <= tol):
        raise CertificationError(f"fixed point check failed: {fixed}")
    lo_box, hi_box = config.box
    outside = [(0.0, lo_box), (hi_box, 1.0)]
    inside_best = float(1.0 / inv_apx(alpha, r, np.clip(q, lo_box, hi_box)))
    brc = certify_ratio_upper(alpha, r, outside, inside_best, grid_eps=1e-4)
    conv = convexity_certificate()
    if not conv.holds:
        raise CertificationError("convexity certificate failed")
    return EquilibriumSolution(q, r, alpha, beta, cross, brc, conv, fixed, config,
                               time.perf_counter() - t0)
