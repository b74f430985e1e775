"""Gaussian quadrature against mu_d and an adaptive fallback integrator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from . import _gk
from .errors import ConvergenceError, DomainError
from .legendre import recurrence_coefficients
from .measure import MuD

__all__ = [
    "QuadratureRule",
    "gauss_rule",
    "integrate",
    "adaptive_integrate",
    "node_count",
    "orthonormal_by_recurrence",
]

# Rescale the running Christoffel sums when a value passes this magnitude.
_RESCALE_AT = 1e100


@dataclass(frozen=True)
class QuadratureRule:
    d: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def integrate(self, f) -> float:
        """Sum of weight_i * f(node_i); ``f`` is called once on the node array."""
        values = np.asarray(f(self.nodes), dtype=float)
        return float(np.dot(self.weights, np.broadcast_to(values, self.nodes.shape)))

    def __len__(self):
        return len(self.nodes)


def integrate(rule: QuadratureRule, f) -> float:
    return rule.integrate(f)


def node_count(target_degree: int, omega: float = 0.0) -> int:
    """Node count honoring the oscillation policy max(2*degree, ceil(1.5*omega))."""
    return max(1, 2 * int(target_degree), int(math.ceil(1.5 * abs(omega))))


def gauss_rule(d: int, K: int) -> QuadratureRule:
    """K-point Gauss rule for mu_d, exact for polynomials of degree <= 2K-1.

    Nodes are the eigenvalues of the zero-diagonal Jacobi matrix built from
    :func:`recurrence_coefficients`. Weights come from the Christoffel
    function 1 / sum_k q_k(x_i)^2, which stays positive and relatively
    accurate even where mu_d is vanishingly small (large d).
    """
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    if int(K) != K or K < 1:
        raise DomainError(f"K must be an integer >= 1, got {K!r}")
    d, K = int(d), int(K)
    if K == 1:
        return QuadratureRule(d, np.zeros(1), np.ones(1), 1)
    b = recurrence_coefficients(d, K - 1).off_diagonal
    try:
        nodes = eigh_tridiagonal(np.zeros(K), b, eigvals_only=True)
    except LinAlgError as exc:
        raise ConvergenceError(f"tridiagonal eigensolver failed for d={d}, K={K}") from exc
    nodes = np.sort(nodes)
    nodes = 0.5 * (nodes - nodes[::-1])
    if K % 2:
        nodes[K // 2] = 0.0
    weights = _christoffel_weights(b, nodes)
    weights = 0.5 * (weights + weights[::-1])
    weights /= math.fsum(weights)
    return QuadratureRule(d, nodes, weights, 2 * K - 1)


def _christoffel_weights(b, x):
    # q_0 = 1, q_1 = x / b_1, q_{k+1} = (x q_k - b_k q_{k-1}) / b_{k+1};
    # the running values are rescaled to keep sum q_k^2 finite.
    q_prev = np.zeros_like(x)
    q_cur = np.ones_like(x)
    total = np.ones_like(x)
    log_scale = np.zeros_like(x)  # true value = stored * exp(log_scale)
    b_prev = 0.0
    for bk in b:
        q_next = (x * q_cur - b_prev * q_prev) / bk
        q_prev, q_cur, b_prev = q_cur, q_next, bk
        total += q_cur * q_cur
        big = np.abs(q_cur) > _RESCALE_AT
        if np.any(big):
            s = 1.0 / _RESCALE_AT
            q_prev[big] *= s
            q_cur[big] *= s
            total[big] *= s * s
            log_scale[big] += math.log(_RESCALE_AT)
    return np.exp(-np.log(total) - 2.0 * log_scale)


def orthonormal_by_recurrence(d: int, max_degree: int, x) -> np.ndarray:
    """q_0..q_max_degree evaluated through the Jacobi-matrix recurrence.

    A second route to the orthonormal family, independent of the
    P_n-then-scale path in :mod:`depthsep.legendre`; also valid for d = 2.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((max_degree + 1,) + x.shape)
    out[0] = 1.0
    if max_degree == 0:
        return out
    b = recurrence_coefficients(d, max_degree).off_diagonal
    out[1] = x / b[0]
    for k in range(1, max_degree):
        out[k + 1] = (x * out[k] - b[k - 1] * out[k - 1]) / b[k]
    return out


def adaptive_integrate(d: int, f, abs_tol: float = 1e-10, max_evals: int = 10**6) -> float:
    """Integrate f against mu_d by globally adaptive Gauss-Kronrod subdivision.

    Raises IntegrationError if ``max_evals`` evaluations are not enough.
    """
    if int(d) != d or d < 3:
        raise DomainError(f"adaptive_integrate requires d >= 3, got {d!r}")
    if not abs_tol > 0:
        raise DomainError("abs_tol must be positive")
    mu = MuD(int(d))

    def integrand(x):
        return np.asarray(f(x), dtype=float) * mu.density(x)

    value, _ = _gk.integrate(integrand, -1.0, 1.0, abs_tol=abs_tol,
                             max_evals=max_evals, initial_pieces=8)
    return value
