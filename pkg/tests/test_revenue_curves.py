import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_concave_curve
from piopt.errors import ConstraintError, DomainError
from piopt.revenue_curves import (
    PiecewiseLinearRevenueCurve, QuadrilateralDist, TriangleDist, price_posting_revenue,
    quadrilateral_bounds, quadrilateral_curve, quantile_at_price, sample_value, triangle_curve,
    triangulation, truncate_curve, value_at,
)


def test_triangle_curve_vertices():
    assert triangle_curve(0.5).vertices.tolist() == [[0, 0], [0.5, 1], [1, 0]]
    assert triangle_curve(1.0).vertices.tolist() == [[0, 0], [1, 1]]
    with pytest.raises(DomainError):
        triangle_curve(0.0)
    assert triangle_curve(0.3).normalized and triangle_curve(0.3).kind == "distribution"


def test_equal_revenue_limit_lives_on_the_distribution():
    c = TriangleDist(0.0).curve()
    assert c.unbounded and c.vertices.tolist() == [[0, 1], [1, 0]]


def test_quadrilateral_examples():
    c = quadrilateral_curve(0.25, 0.5, 2)
    assert c.vertices.tolist() == [[0, 0], [0.25, 1], [0.5, 1], [1, 0]]
    lo = 0.25 * 2 / (0.25 * 2 + 0.75)
    assert np.isclose(lo, 0.4)
    assert quadrilateral_curve(0.25, lo, 2) == triangle_curve(0.25)
    with pytest.raises(ConstraintError):
        quadrilateral_curve(0.25, 0.6, 2)
    with pytest.raises(DomainError):
        quadrilateral_curve(0.25, 0.3, 0.5)


def test_value_quantile_and_price_posting():
    t = triangle_curve(0.5)
    assert value_at(t, 0.25) == pytest.approx(2.0)
    assert value_at(t, 1.0) == 0.0
    assert value_at(t, 0.5) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        value_at(t, 0.0)
    assert quantile_at_price(t, 2.0) == pytest.approx(0.5)
    assert quantile_at_price(t, 0.0) == 1.0
    assert quantile_at_price(t, 3.0) == 0.0
    assert price_posting_revenue(t, 2.0) == pytest.approx(1.0)
    assert price_posting_revenue(t, 0.0) == 0.0
    assert price_posting_revenue(t, 1.0) == pytest.approx(2 / 3)


def test_truncation_and_triangulation():
    assert truncate_curve(triangle_curve(0.3)) == triangle_curve(0.3)
    quad = quadrilateral_curve(0.25, 0.5, 2)
    assert truncate_curve(quad) == quad
    c = PiecewiseLinearRevenueCurve([(0, 0), (0.2, 0.9), (0.4, 1), (1, 0)])
    assert truncate_curve(c).vertices.tolist() == [[0, 0], [0.4, 1], [1, 0]]
    assert triangulation(quad).qbar == 0.25
    assert triangulation(triangle_curve(0.7)).qbar == 0.7
    flat = PiecewiseLinearRevenueCurve([(0, 0), (0.3, 1), (0.6, 1), (1, 0)])
    assert triangulation(flat).qbar == 0.3


def test_sampling():
    assert sample_value(triangle_curve(0.5), 0.5) == pytest.approx(2.0)
    assert sample_value(triangle_curve(0.5), 1.0) == 0.0
    assert np.all(sample_value(triangle_curve(1.0), np.array([0.1, 0.5, 1.0])) == 1.0)
    with pytest.raises(DomainError):
        sample_value(TriangleDist(0.0).curve(), 0.0)


def test_validation_rejects_bad_curves():
    with pytest.raises(ConstraintError):
        PiecewiseLinearRevenueCurve([(0, 0), (0.5, 0.2), (0.7, 1), (1, 0)])
    with pytest.raises(ConstraintError):
        PiecewiseLinearRevenueCurve([(0, 0), (0.5, 1), (0.9, 0)])
    with pytest.raises(ConstraintError):
        PiecewiseLinearRevenueCurve([(0, 0), (0.5, 1), (0.5, 0.5), (1, 0)])
    env = PiecewiseLinearRevenueCurve([(0, 0.01), (0.09, 1), (0.098, 1), (1, 0.01)], "envelope")
    assert env.kind == "envelope"


def test_serialization_round_trip():
    c = quadrilateral_curve(0.2, 0.35, 2.0)
    assert PiecewiseLinearRevenueCurve.from_dict(c.to_dict()) == c


def test_quadrilateral_quantile_matches_curve():
    d = QuadrilateralDist(0.2, 0.35, 2.0)
    c = d.curve()
    for v in np.linspace(0.05, 1 / 0.2, 200):
        assert d.quantile(v) == pytest.approx(quantile_at_price(c, v), abs=1e-12)


@pytest.mark.property
@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_constructed_curves_are_concave(seed):
    rng = np.random.default_rng(seed)
    curves = [random_concave_curve(rng), triangle_curve(rng.uniform(0.01, 1.0))]
    qb, r = rng.uniform(0.01, 0.99), rng.uniform(1.0, 5.0)
    lo, hi = quadrilateral_bounds(qb, r)
    curves.append(quadrilateral_curve(qb, rng.uniform(lo, hi), r))
    curves.append(truncate_curve(curves[0]))
    for c in curves:
        assert np.all(np.diff(c.slopes) <= 1e-12)


@pytest.mark.property
@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_value_quantile_round_trip(seed):
    rng = np.random.default_rng(seed)
    c = random_concave_curve(rng)
    qs = np.linspace(1e-3, 1.0, 2001)
    V = value_at(c, qs)
    # the first segment through the origin is an atom: V is constant there
    keep = (V > 0) & (qs > c.q[1])
    assert np.allclose(quantile_at_price(c, V[keep]), qs[keep], atol=1e-12, rtol=0)
    assert np.allclose(price_posting_revenue(c, V[keep]), c.revenue(qs[keep]), atol=1e-12, rtol=0)
    atom = qs <= c.q[1]
    assert np.allclose(price_posting_revenue(c, V[atom]), c.R[1], atol=1e-12, rtol=0)


@pytest.mark.property
def test_quadrilateral_lower_bound_is_triangle():
    rng = np.random.default_rng(7)
    qs = np.linspace(0, 1, 1001)
    for _ in range(200):
        qb, r = rng.uniform(0.01, 0.99), rng.uniform(1.0, 8.0)
        lo, _ = quadrilateral_bounds(qb, r)
        quad = quadrilateral_curve(qb, lo, r)
        assert np.max(np.abs(quad.revenue(qs) - triangle_curve(qb).revenue(qs))) <= 1e-12


@pytest.mark.property
@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_truncation_idempotent_and_preserves_peak(seed):
    c = random_concave_curve(np.random.default_rng(seed))
    t = truncate_curve(c)
    assert truncate_curve(t) == t
    assert t.peak == pytest.approx(c.peak, abs=1e-12)
    assert t.monopoly_quantile == pytest.approx(c.monopoly_quantile, abs=1e-12)
