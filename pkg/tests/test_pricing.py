import mpmath
import numpy as np
import pytest
from scipy import integrate

from piopt.certify import apx_spa
from piopt.errors import DomainError
from piopt.pricing import (
    anon_truncation_antiderivative, anon_truncation_density, anon_truncation_params,
    anon_truncation_total_mass, indifference_alpha_for_q, quad_pricing_apx, quad_pricing_inner,
    quad_pricing_maxmin, series_S, series_T, verify_indifference,
)

mpmath.mp.dps = 30


def s_oracle(q):
    x = mpmath.mpf(1) - mpmath.mpf(q)
    return float((mpmath.polylog(2, x) - x) / x)


def test_series_examples():
    assert series_S(1.0).value == 0.0
    assert series_S(0.0).value == pytest.approx(np.pi**2 / 6 - 1, abs=1e-15)
    assert series_S(1e-12).value == pytest.approx(0.644934, abs=1e-6)
    direct = sum(0.5 ** (k - 1) / k**2 for k in range(2, 200))
    assert series_S(0.5).value == pytest.approx(direct, abs=1e-15)
    assert series_S(0.5).value == pytest.approx(0.164481, abs=1e-6)
    with pytest.raises(DomainError):
        series_S(-0.1)


@pytest.mark.parametrize("q", [1e-9, 1e-4, 0.01, 0.0931057, 0.3, 0.5, 0.7, 0.99])
def test_series_against_polylog(q):
    s = series_S(q)
    assert s.remainder <= 1e-15
    assert abs(s.value - s_oracle(q)) <= s.error_bound + 1e-15


@pytest.mark.parametrize("q", [0.05, 0.3, 0.6, 0.9])
def test_series_doubling_K(q):
    base = series_S(q)
    more = series_S(q, 2 * base.K)
    assert abs(more.value - base.value) <= base.error_bound
    for K in (4, 8, 16):
        s = series_S(q, K)
        assert abs(s.value - s_oracle(q)) <= s.error_bound + 1e-15


def test_series_T_examples():
    assert float(series_T(np.array(1.0))) == pytest.approx(0.25)
    assert float(series_T(np.array(1e-12))) == pytest.approx(np.pi**2 / 6 - 1, abs=1e-9)
    q = np.array([0.1, 0.4, 0.6])
    S = np.array([series_S(x).value for x in q])
    assert np.allclose(series_T(q) * (1 - q), S, atol=1e-15)


def test_quad_pricing_apx_examples():
    q = np.linspace(0.01, 1.0, 50)
    assert np.allclose(quad_pricing_apx(1.0, q), 1 / (2 - q), atol=1e-15)
    assert float(quad_pricing_apx(1.0, 0.0)) == 0.5
    for b in (0.5, 0.8, 1.0):
        assert float(quad_pricing_apx(b, 1.0)) == pytest.approx(b, abs=1e-15)
    alpha, q = quad_pricing_inner(0.8435)
    assert alpha == pytest.approx(0.5154, abs=1e-4)


def test_quad_pricing_apx_vectorized_matches_series():
    for q in (0.02, 0.3, 0.75):
        s = series_S(q).value
        assert float(quad_pricing_apx(0.7, q)) == pytest.approx((0.7 + 0.6 * s) / (2 - q), abs=1e-15)


def test_maxmin_result():
    res = quad_pricing_maxmin()
    assert res.beta == pytest.approx(0.8378, abs=1e-3)
    assert res.alpha == pytest.approx(0.5154, abs=1e-4)
    assert abs(res.beta - 0.8435) > 1e-3
    assert set(res.to_dict()) == {"beta", "alpha", "q"}


def brute_force_maxmin(beta_step=1e-4, q_step=1e-4):
    qs = np.arange(0.0, 1.0 + q_step / 2, q_step)
    S = np.array([np.pi**2 / 6 - 1] + [s_oracle(q) for q in qs[1:-1]] + [0.0])
    betas = np.arange(0.5, 1.0 + beta_step / 2, beta_step)
    inner = np.empty_like(betas)
    for i in range(0, len(betas), 500):
        b = betas[i:i + 500, None]
        inner[i:i + 500] = np.min((b + 2 * (1 - b) * S) / (2 - qs), axis=1)
    j = int(np.argmax(inner))
    return float(betas[j]), float(inner[j])


def test_maxmin_matches_brute_force():
    res = quad_pricing_maxmin()
    beta, alpha = brute_force_maxmin()
    assert abs(res.beta - beta) <= 1e-3
    assert abs(res.alpha - alpha) <= 1e-3


def test_indifference_alpha_examples():
    assert float(indifference_alpha_for_q(np.array(1.0))) == pytest.approx(1 / 3)
    assert float(indifference_alpha_for_q(np.array(1e-12))) == pytest.approx(0.5633, abs=1e-4)
    for q in (0.05, 0.4, 0.8):
        a = float(indifference_alpha_for_q(np.array(q)))
        T = float(series_T(np.array(q)))
        assert 2 * (1 - a) / a * T == pytest.approx(1.0, abs=1e-12)


def test_density_examples():
    assert float(anon_truncation_density(1.0)) == 1.0
    with pytest.raises(DomainError):
        anon_truncation_density(0.5)
    assert anon_truncation_total_mass() == pytest.approx(1 + np.log(2), abs=1e-12)
    num, _ = integrate.quad(lambda t: float(anon_truncation_density(t)), 1, 100,
                            epsabs=1e-13, epsrel=1e-13)
    exact = anon_truncation_antiderivative(100.0) - anon_truncation_antiderivative(1.0)
    assert num == pytest.approx(exact, abs=1e-9)


def test_total_mass_against_quadrature():
    num, _ = integrate.quad(lambda t: float(anon_truncation_density(t)), 1, np.inf,
                            epsabs=1e-13, epsrel=1e-13)
    assert num == pytest.approx(1 + np.log(2), abs=1e-9)


def test_truncation_params():
    p = anon_truncation_params()
    assert p.gamma == pytest.approx(4 / 3, abs=1e-15)
    assert p.beta == pytest.approx(0.30698, abs=1e-5)
    assert p.alpha == pytest.approx(0.40931, abs=1e-5)
    assert p.beta / (1 - p.beta) * (4 / 3) * (1 + np.log(2)) == pytest.approx(1.0, abs=1e-12)


def test_indifference_examples():
    assert verify_indifference([1.0]).worst <= 1e-15
    assert verify_indifference([10.0], tol=1e-10)
    with pytest.raises(DomainError):
        verify_indifference([0.5])
    gamma = anon_truncation_params().gamma
    tau = 1e9
    rhs = gamma * (2 * tau**2 + tau) / (1 + tau) ** 2
    lhs = 1 + gamma * (2 - 0.75)
    assert rhs == pytest.approx(8 / 3, abs=1e-8)
    assert lhs == pytest.approx(8 / 3, abs=1e-15)


@pytest.mark.property
def test_series_remainder_bounds():
    rng = np.random.default_rng(4)
    for q in rng.uniform(0, 1, 120):
        s = series_S(q)
        assert s.remainder <= 1e-15
        assert abs(s.value - s_oracle(q)) <= s.error_bound + 1e-15
        more = series_S(q, 2 * s.K)
        assert abs(more.value - s.value) <= s.error_bound


@pytest.mark.property
def test_beta_one_is_spa():
    q = np.linspace(0.001, 1.0, 1000)
    assert np.allclose(quad_pricing_apx(1.0, q), 1 / apx_spa(q), atol=1e-14)


@pytest.mark.property
def test_quad_pricing_convex_in_q():
    rng = np.random.default_rng(9)
    beta = rng.uniform(0.5, 1.0, 1000)
    q = rng.uniform(0.01, 0.99, 1000)
    h = 1e-4
    d2 = (quad_pricing_apx(beta, q + h) - 2 * quad_pricing_apx(beta, q)
          + quad_pricing_apx(beta, q - h)) / h**2
    assert np.all(d2 > 0)


@pytest.mark.property
def test_indifference_on_log_grid():
    rep = verify_indifference(np.logspace(0, 6, 61), tol=1e-8)
    assert rep.holds, (rep.worst, rep.tau_at_worst)
