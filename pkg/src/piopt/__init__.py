"""Prior-independent auctions for two i.i.d. bidders: markup mechanisms,
certified equilibrium solving, benchmark gaps, and companion explorations."""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    BracketError, CertificationError, ConstraintError, DomainError, SizeError,
)
from .revenue_curves import (
    PiecewiseLinearRevenueCurve, QuadrilateralDist, TriangleDist, quadrilateral_curve,
    triangle_curve,
)
from .markup import (
    StochasticMarkupMechanism, approximation_ratio, markup_revenue, markup_revenue_curve,
    markup_revenue_triangle, opt_revenue, spa_revenue, stochastic_markup_revenue,
)
from .simulation import mc_simulate
from .certify import SolverConfig, find_crossing, solve_equilibrium
from .benchmarks import (
    BenchmarkSpec, optimal_benchmark, pseudo_benchmark, relaxed_program_value,
    verify_gap_regular, verify_gap_triangle,
)
from .experts import (
    BernoulliMeans, FollowTheLeader, RandomizedWeightedMajority, RewardMatrix,
    expected_performance, run_policy,
)
from .pricing import anon_truncation_params, quad_pricing_maxmin, series_S

__all__ = [
    "BenchmarkSpec", "BernoulliMeans", "BracketError", "CertificationError", "ConstraintError",
    "DomainError", "FollowTheLeader", "PiecewiseLinearRevenueCurve", "QuadrilateralDist",
    "RandomizedWeightedMajority", "RewardMatrix", "SizeError", "SolverConfig",
    "StochasticMarkupMechanism", "TriangleDist", "anon_truncation_params",
    "approximation_ratio", "expected_performance", "find_crossing", "markup_revenue",
    "markup_revenue_curve", "markup_revenue_triangle", "mc_simulate", "opt_revenue",
    "optimal_benchmark", "pseudo_benchmark", "quad_pricing_maxmin", "quadrilateral_curve",
    "relaxed_program_value", "run_policy", "series_S", "solve_equilibrium", "spa_revenue",
    "stochastic_markup_revenue", "triangle_curve", "verify_gap_regular", "verify_gap_triangle",
]
