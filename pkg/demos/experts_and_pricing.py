"""Follow-the-leader on adversarial and stochastic instances, then two pricing rules."""
import numpy as np

from piopt.experts import (
    BernoulliMeans, FollowTheLeader, RandomizedWeightedMajority, alternating_instance,
    ftl_round_payoffs, gap_learning_check, regret,
)
from piopt.pricing import anon_truncation_params, quad_pricing_inner, quad_pricing_maxmin

for n in (10, 100, 1000):
    m = alternating_instance(n, 3)
    eta = np.sqrt(8 * np.log(3) / n)
    print(f"n = {n:5d}  FTL regret {regret(FollowTheLeader(), m):8.2f}  "
          f"RWM regret {regret(RandomizedWeightedMajority(eta), m):8.2f}")

means = BernoulliMeans((0.8, 0.2))
print("E[FTL_t]:", np.round(ftl_round_payoffs(means, 6), 6))
print(gap_learning_check(means, 6))

res = quad_pricing_maxmin()
print(f"quadratic pricing: beta = {res.beta:.6f}, alpha = {res.alpha:.6f}, worst q = {res.q:.6f}")
print(f"guarantee at beta = 0.8435: {quad_pricing_inner(0.8435)[0]:.6f}")
print("anonymous truncation:", anon_truncation_params())
