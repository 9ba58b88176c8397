"""Monte Carlo estimates of markup-mechanism revenue.

Samples are split into fixed-size shards.  Shard i draws from a Philox
generator keyed by seed XOR i, and shard moments are merged in index order,
so the estimate does not depend on how many worker threads run the shards.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .markup import StochasticMarkupMechanism, as_distribution
from .revenue_curves import PiecewiseLinearRevenueCurve, QuadrilateralDist, sample_value

SHARD_SIZE = 1 << 16
GENERATOR = "numpy.random.Philox"


def default_threads() -> int:
    env = os.environ.get("PIOPT_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def shard_rng(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) ^ int(shard)))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    generator: str = GENERATOR

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "samples": self.samples,
                "seed": self.seed, "generator": self.generator}


def _value_sampler(dist):
    dist = as_distribution(dist)
    if isinstance(dist, QuadrilateralDist):
        dist = dist.curve()
    if isinstance(dist, PiecewiseLinearRevenueCurve):
        return lambda u: sample_value(dist, u)
    return dist.value


def _shard_moments(mech, sampler, seed, shard, n):
    rng = shard_rng(seed, shard)
    v1 = sampler(1.0 - rng.random(n))
    v2 = sampler(1.0 - rng.random(n))
    pick = np.searchsorted(np.cumsum(mech.weights), rng.random(n), side="right")
    r = mech.markups[np.minimum(pick, len(mech.atoms) - 1)]
    hi, lo = np.maximum(v1, v2), np.minimum(v1, v2)
    price = r * lo
    rev = np.where(hi >= price, price, 0.0)
    mean = rev.mean()
    return n, mean, float(((rev - mean) ** 2).sum())


def merge_moments(parts):
    """Combine (count, mean, sum of squared deviations) triples in order."""
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        if nb == 0:
            continue
        tot = n + nb
        d = mb - mean
        mean += d * nb / tot
        m2 += m2b + d * d * n * nb / tot
        n = tot
    return n, mean, m2


def mc_simulate(mech: StochasticMarkupMechanism, dist, samples: int, seed: int,
                threads: int | None = None, shard_size: int = SHARD_SIZE) -> McEstimate:
    """Estimate the revenue of mech on two i.i.d. draws from dist.

    A sale happens when the high value is at least the markup price.  The
    markup is drawn from the mechanism's atoms independently per sample.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    sampler = _value_sampler(dist)
    threads = threads or default_threads()
    sizes = [min(shard_size, samples - s) for s in range(0, samples, shard_size)]

    def run(i):
        return _shard_moments(mech, sampler, seed, i, sizes[i])

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    n, mean, m2 = merge_moments(parts)
    stderr = float(np.sqrt(m2 / (n - 1) / n)) if n > 1 else float("nan")
    return McEstimate(float(mean), stderr, int(n), int(seed))
