"""Binary-reward experts: follow-the-leader, benchmarks and exact expectations.

Rewards are an n x k matrix of zeros and ones.  A policy maps the round and
the history of earlier rows to a distribution over the k experts; its
payoff on a fixed matrix is computed exactly as a sum of inner products.
"""
from __future__ import annotations

import io
from dataclasses import asdict, dataclass
from itertools import permutations, product

import numpy as np

from .errors import DomainError, SizeError
from .simulation import shard_rng

EXACT_CAP = 1 << 24


@dataclass(frozen=True)
class RewardMatrix:
    rewards: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.rewards)
        if m.ndim != 2:
            raise DomainError("reward matrix must be two-dimensional")
        if not np.all((m == 0) | (m == 1)):
            raise DomainError("rewards must be 0 or 1")
        m = m.astype(np.int64)
        m.setflags(write=False)
        object.__setattr__(self, "rewards", m)

    @property
    def n(self) -> int:
        return self.rewards.shape[0]

    @property
    def k(self) -> int:
        return self.rewards.shape[1]

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "rewards": self.rewards.tolist()}

    @classmethod
    def from_csv(cls, text: str) -> "RewardMatrix":
        rows = np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2)
        return cls(rows)


@dataclass(frozen=True)
class BernoulliMeans:
    f: tuple

    def __post_init__(self):
        f = tuple(float(x) for x in self.f)
        if not f or any(not 0.0 <= x <= 1.0 for x in f):
            raise DomainError("means must lie in [0, 1]")
        object.__setattr__(self, "f", f)

    @property
    def k(self) -> int:
        return len(self.f)

    @property
    def non_degenerate(self) -> bool:
        return max(self.f) > min(self.f) and any(0.0 < x < 1.0 for x in self.f)


def _uniform_argmax(v, rtol=0.0):
    v = np.asarray(v, dtype=float)
    top = v.max()
    mask = v >= top - rtol * max(abs(top), 1.0)
    return mask / mask.sum()


class FollowTheLeader:
    """Uniform over the experts with the largest cumulative reward."""

    def by_totals(self, totals):
        return _uniform_argmax(totals)

    def __call__(self, t, history, k=None):
        return self.by_totals(_totals(history, k or np.shape(history)[-1]))


class RandomizedWeightedMajority:
    """Weights proportional to exp(eta * cumulative reward)."""

    def __init__(self, eta: float):
        if eta <= 0:
            raise DomainError("eta must be positive")
        self.eta = eta

    def by_totals(self, totals):
        z = self.eta * np.asarray(totals, dtype=float)
        w = np.exp(z - z.max())
        return w / w.sum()

    def __call__(self, t, history, k=None):
        return self.by_totals(_totals(history, k or np.shape(history)[-1]))


def _totals(history, k):
    h = np.asarray(history, dtype=float)
    return np.zeros(k) if h.size == 0 else h.reshape(-1, k).sum(axis=0)


def ftl_policy(t: int, history, k: int | None = None):
    """Follow-the-leader; round 1 (empty history) is uniform over k experts."""
    k = k if k is not None else np.shape(history)[-1]
    return FollowTheLeader().by_totals(_totals(history, k))


def rwm_policy(t: int, history, eta: float, k: int | None = None):
    k = k if k is not None else np.shape(history)[-1]
    return RandomizedWeightedMajority(eta).by_totals(_totals(history, k))


ftl_policy.by_totals = FollowTheLeader().by_totals


def _as_policy(policy):
    """Normalize to a callable (t, history, k) -> distribution."""
    if hasattr(policy, "by_totals"):
        return lambda t, h, k: policy.by_totals(_totals(h, k))
    return lambda t, h, k: policy(t, h)


def run_policy(policy, m: RewardMatrix) -> float:
    """Expected payoff of a policy on a fixed matrix."""
    pol = _as_policy(policy)
    R = m.rewards.astype(float)
    total = 0.0
    for t in range(m.n):
        total += float(np.dot(pol(t + 1, R[:t], m.k), R[t]))
    return total


def bih(m: RewardMatrix) -> float:
    """Best expert in hindsight."""
    return float(m.rewards.sum(axis=0).max()) if m.n else 0.0


def regret(policy, m: RewardMatrix) -> float:
    return bih(m) - run_policy(policy, m)


def alternating_instance(n: int, k: int) -> RewardMatrix:
    """Odd rounds reward expert 1 only, even rounds every other expert."""
    if n % 2:
        raise DomainError("n must be even")
    if k < 2:
        raise DomainError("need at least two experts")
    odd = np.zeros(k)
    odd[0] = 1
    return RewardMatrix(np.array([odd if t % 2 == 0 else 1 - odd for t in range(n)]))


def _check_cap(n, k):
    if n * k > 24:
        raise SizeError(f"exact enumeration over 2^{n * k} matrices exceeds 2^24")


def _row_probs(f):
    f = np.asarray(f, dtype=float)
    rows = np.array(list(product((0, 1), repeat=len(f))), dtype=float)
    probs = np.prod(np.where(rows == 1, f, 1 - f), axis=1)
    return rows, probs


def _totals_distribution(f, n):
    """Yield, for each round t, the distribution of cumulative totals before it."""
    rows, probs = _row_probs(f)
    states = {tuple(np.zeros(len(f), dtype=int)): 1.0}
    for _ in range(n):
        yield states
        nxt = {}
        for s, p in states.items():
            if p == 0:
                continue
            base = np.array(s)
            for row, pr in zip(rows, probs):
                if pr == 0:
                    continue
                key = tuple(base + row.astype(int))
                nxt[key] = nxt.get(key, 0.0) + p * pr
        states = nxt


def round_payoffs(policy, means: BernoulliMeans, n: int) -> list[float]:
    """Exact expected payoff per round for a policy under independent Bernoulli rewards."""
    _check_cap(n, means.k)
    f = np.asarray(means.f)
    if hasattr(policy, "by_totals"):
        by = policy.by_totals
        out = []
        for states in _totals_distribution(f, n):
            out.append(float(sum(p * np.dot(by(np.array(s)), f) for s, p in states.items())))
        return out
    pol = _as_policy(policy)
    rows, probs = _row_probs(f)
    k = means.k
    level = [(np.zeros((0, k)), 1.0)]
    out = []
    for t in range(n):
        out.append(float(sum(p * np.dot(pol(t + 1, h, k), f) for h, p in level)))
        if t + 1 < n:
            level = [(np.vstack([h, row]), p * pr) for h, p in level
                     for row, pr in zip(rows, probs) if p * pr > 0]
    return out


def expected_performance(policy, means: BernoulliMeans, n: int, mode: str = "exact",
                         samples: int = 10000, seed: int = 0) -> float:
    """Expected total payoff over random reward matrices.

    Exact mode is limited to 2^(n k) <= 2^24 matrices; since round t
    rewards are independent of the history, only histories need enumerating.
    Monte Carlo mode averages exact runs on sampled matrices.
    """
    if mode == "exact":
        return float(sum(round_payoffs(policy, means, n)))
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    rng = shard_rng(seed, 0)
    f = np.asarray(means.f)
    total = 0.0
    for _ in range(samples):
        m = RewardMatrix((rng.random((n, means.k)) < f).astype(int))
        total += run_policy(policy, m)
    return total / samples


def opt_learning(means: BernoulliMeans, n: int) -> float:
    return n * max(means.f)


def expected_bih(means: BernoulliMeans, n: int) -> float:
    """E[max_j column sum] by exact enumeration."""
    _check_cap(n, means.k)
    f = np.asarray(means.f)
    total = 0.0
    for bits in product((0, 1), repeat=n * means.k):
        m = np.array(bits).reshape(n, means.k)
        p = float(np.prod(np.where(m == 1, f, 1 - f)))
        if p:
            total += p * m.sum(axis=0).max()
    return total


def posterior_over_permutations(pool, history):
    """Posterior over assignments of pool means to experts given the history."""
    pool = np.asarray(pool, dtype=float)
    k = len(pool)
    h = np.asarray(history, dtype=float).reshape(-1, k)
    ones = h.sum(axis=0)
    zeros = h.shape[0] - ones
    perms = np.array(list(permutations(range(k))))
    fs = pool[perms]
    w = np.prod(fs ** ones * (1 - fs) ** zeros, axis=1)
    if w.sum() == 0:
        return perms, w
    return perms, w / w.sum()


def posterior_leader_check(pool, history, rtol: float = 1e-12) -> bool:
    """Does the posterior-best expert set coincide with the cumulative leader set?

    Histories impossible under every assignment count as passing.
    """
    pool = np.asarray(pool, dtype=float)
    k = len(pool)
    if k > 8:
        raise SizeError("permutation enumeration limited to k <= 8")
    perms, w = posterior_over_permutations(pool, history)
    if w.sum() == 0:
        return True
    post = w @ pool[perms]
    lead = _uniform_argmax(_totals(history, k)) > 0
    best = _uniform_argmax(post, rtol=rtol) > 0
    return bool(np.array_equal(lead, best))


def ftl_round_payoffs(means: BernoulliMeans, n: int) -> list[float]:
    return round_payoffs(FollowTheLeader(), means, n)


@dataclass
class LearningGapReport:
    ftl: float
    pseudo: float
    opt: float
    strict: bool
    holds: bool

    def to_dict(self) -> dict:
        return asdict(self)


def gap_learning_check(means: BernoulliMeans, n: int) -> LearningGapReport:
    """FTL(F) < n E[FTL_n] <= n max f for non-degenerate means."""
    if not means.non_degenerate:
        raise DomainError("means are degenerate")
    rounds = ftl_round_payoffs(means, n)
    ftl = float(sum(rounds))
    pseudo = n * rounds[-1]
    opt = opt_learning(means, n)
    strict = ftl < pseudo
    return LearningGapReport(ftl, pseudo, opt, bool(strict), bool(strict and pseudo <= opt + 1e-12))
