import numpy as np

from piopt.revenue_curves import PiecewiseLinearRevenueCurve


def random_concave_curve(rng, max_pieces=6):
    """A random normalized concave revenue curve with R(0) = 0."""
    while True:
        k = int(rng.integers(2, max_pieces + 1))
        widths = rng.dirichlet(np.ones(k))
        slopes = np.sort(rng.uniform(-4.0, 12.0, k))[::-1]
        if slopes[0] <= 0:
            continue
        R = np.concatenate([[0.0], np.cumsum(widths * slopes)])
        if R[-1] < 0:
            continue
        q = np.concatenate([[0.0], np.cumsum(widths)])
        q[-1] = 1.0
        return PiecewiseLinearRevenueCurve(list(zip(q, R / R.max())))
