"""Uniform sampling on S^{d-1} and Monte Carlo checks on S^{d-1} x S^{d-1}.

Random streams come from numpy's PCG64 seeded through ``SeedSequence(seed,
spawn_key=(stream,))``, so every (seed, stream) pair is an independent,
reproducible stream. Monte Carlo sums are split into fixed-size chunks,
chunk ``c`` always drawing from stream ``c``; partial sums are combined with
``math.fsum``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .legendre import LegendreFamily
from .measure import MuD

__all__ = [
    "SphereSampler",
    "MCEstimate",
    "L2Estimate",
    "unit_vectors",
    "inner_product_function",
    "mc_mean",
    "l2_error",
    "pushforward_check",
    "ks_critical",
    "verify_eq3",
    "reproducing_check",
]

CHUNK = 1 << 16


def unit_vectors(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """``n`` uniform points on S^{d-1}: normalised Gaussian draws, redrawing exact zeros."""
    V = rng.standard_normal((n, d))
    norms = np.linalg.norm(V, axis=1)
    bad = norms == 0
    while np.any(bad):
        V[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(V, axis=1)
        bad = norms == 0
    return V / norms[:, None]


class SphereSampler:
    """Reproducible uniform sampler on S^{d-1} for one (seed, stream)."""

    def __init__(self, d: int, seed: int = 0, stream: int = 0):
        if int(d) != d or d < 2:
            raise DomainError(f"SphereSampler needs an integer d >= 2, got {d!r}")
        self.d = int(d)
        self.seed = int(seed)
        self.stream_index = int(stream)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,))
        self.rng = np.random.Generator(np.random.PCG64(ss))

    def stream(self, index: int) -> "SphereSampler":
        return SphereSampler(self.d, self.seed, index)

    def sample(self) -> np.ndarray:
        return unit_vectors(self.rng, 1, self.d)[0]

    def sample_batch(self, n: int) -> np.ndarray:
        return unit_vectors(self.rng, int(n), self.d)

    def pairs(self, n: int):
        """Independent uniform pairs (X, X'), each of shape (n, d)."""
        return self.sample_batch(n), self.sample_batch(n)


class MCEstimate(NamedTuple):
    mean: float
    std_error: float
    n_samples: int

    def within(self, value: float, n_se: float = 4.0) -> bool:
        return abs(self.mean - value) <= n_se * self.std_error


@dataclass(frozen=True)
class L2Estimate:
    """Monte Carlo estimate of ||A - B||^2 and, by the delta method, ||A - B||."""

    squared: MCEstimate
    norm: float
    norm_std_error: float


def inner_product_function(g):
    """(X, X') -> g(<x, x'>) row-wise, clipping rounding overshoot of |<x, x'>| > 1."""

    def F(X, Xp):
        return np.asarray(g(np.clip(np.sum(X * Xp, axis=1), -1.0, 1.0)), dtype=float)

    return F


def mc_mean(func, d: int, n_samples: int, seed: int = 0, chunk: int = CHUNK) -> MCEstimate:
    """Estimate E[func(X, X')] over independent uniform pairs on S^{d-1}."""
    if n_samples < 2:
        raise DomainError("need at least two samples")
    sums, sq_sums = [], []
    sampler = SphereSampler(d, seed)
    done, c = 0, 0
    while done < n_samples:
        size = min(chunk, n_samples - done)
        X, Xp = sampler.stream(c).pairs(size)
        v = np.asarray(func(X, Xp), dtype=float)
        sums.append(math.fsum(v))
        sq_sums.append(math.fsum(v * v))
        done += size
        c += 1
    n = n_samples
    s1, s2 = math.fsum(sums), math.fsum(sq_sums)
    mean = s1 / n
    var = max(0.0, (s2 - s1 * mean) / (n - 1))
    return MCEstimate(mean, math.sqrt(var / n), n)


def l2_error(A, B, d: int, n_samples: int, seed: int = 0) -> L2Estimate:
    """MC estimate of ||A - B|| in L^2(S^{d-1} x S^{d-1}).

    ``A`` and ``B`` are callables on batches ``(X, X')`` (networks qualify).
    """
    est = mc_mean(lambda X, Xp: (np.asarray(A(X, Xp)) - np.asarray(B(X, Xp))) ** 2,
                  d, n_samples, seed)
    norm = math.sqrt(max(est.mean, 0.0))
    norm_se = est.std_error / (2 * norm) if norm > 0 else 0.0
    return L2Estimate(est, norm, norm_se)


def ks_critical(n_samples: int) -> float:
    """Kolmogorov-Smirnov critical value at alpha ~ 0.01."""
    return 1.63 / math.sqrt(n_samples)


def pushforward_check(d: int, n_samples: int = 100_000, seed: int = 0,
                      reference_d: int | None = None) -> float:
    """KS statistic of <x, x'> for uniform pairs against the mu_d cdf.

    ``reference_d`` swaps in another dimension's cdf (negative control).
    """
    if int(d) != d or d < 3:
        raise DomainError("pushforward_check needs d >= 3")
    X, Xp = SphereSampler(d, seed).pairs(n_samples)
    t = np.sort(np.clip(np.sum(X * Xp, axis=1), -1.0, 1.0))
    F = MuD(reference_d or d).cdf_many(t)
    n = len(t)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def _check_unit(v, d, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (d,) or abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise DomainError(f"{name} must be a unit vector in R^{d}")
    return v


def verify_eq3(d: int, n: int, i: int, j: int, v, vp, n_samples: int = 1_000_000,
               seed: int = 0):
    """Estimate E[h_n(x, x') L_i^v(x) L_j^{v'}(x')] and its predicted value.

    h_n(x, x') = q_n(<x, x'>), L_k^u(x) = q_k(<u, x>); the prediction is
    delta_{ni} delta_{nj} P_n(<v, v'>) / sqrt(N(d, n)).
    Returns ``(MCEstimate, predicted)``.
    """
    if not 3 <= d <= 25:
        raise DomainError("verify_eq3 supports 3 <= d <= 25")
    if not all(0 <= k <= 20 for k in (n, i, j)):
        raise DomainError("verify_eq3 supports degrees 0..20")
    v, vp = _check_unit(v, d, "v"), _check_unit(vp, d, "v'")
    fam = LegendreFamily(d, max(n, i, j))

    def q(k, t):
        return fam.eval_orthonormal(np.clip(t, -1.0, 1.0))[k]

    def integrand(X, Xp):
        return q(n, np.sum(X * Xp, axis=1)) * q(i, X @ v) * q(j, Xp @ vp)

    est = mc_mean(integrand, d, n_samples, seed)
    predicted = 0.0
    if i == n and j == n:
        p = fam.eval_all(np.clip(float(v @ vp), -1.0, 1.0))[n]
        predicted = float(p) / math.sqrt(math.exp(fam.log_norms()[n]))
    return est, predicted


def reproducing_check(d: int, i: int, j: int, v, vp, n_samples: int = 1_000_000,
                      seed: int = 0):
    """Estimate E_x[L_i^v(x) L_j^{v'}(x)]; predicted delta_ij P_i(<v, v'>).

    Returns ``(MCEstimate, predicted)``.
    """
    v, vp = _check_unit(v, d, "v"), _check_unit(vp, d, "v'")
    fam = LegendreFamily(d, max(i, j))

    def integrand(X, _Xp):
        Q1 = fam.eval_orthonormal(np.clip(X @ v, -1.0, 1.0))
        Q2 = fam.eval_orthonormal(np.clip(X @ vp, -1.0, 1.0))
        return Q1[i] * Q2[j]

    est = mc_mean(integrand, d, n_samples, seed)
    predicted = float(fam.eval_all(np.clip(float(v @ vp), -1.0, 1.0))[i]) if i == j else 0.0
    return est, predicted
