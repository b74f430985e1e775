"""Orthonormal Legendre expansion of a profile and the residual A_{n,d}.

A_{n,d}(g) is the L^2(mu_d) distance from g to polynomials of degree
<= n-1. Because {q_i} is an orthonormal basis, the best approximation is the
truncated expansion and A_{n,d}(g)^2 = ||g||^2 - sum_{i<n} alpha_i^2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError
from .legendre import LegendreFamily
from .quadrature import QuadratureRule, gauss_rule, node_count

__all__ = [
    "Expansion",
    "ResolutionWarning",
    "expand",
    "residual",
    "best_poly_error_oracle",
    "sine_lemma_profile",
    "sine_lemma_min_dimension",
]


class ResolutionWarning(UserWarning):
    """The quadrature rule looks too coarse for the oscillation of the profile."""


@dataclass(frozen=True)
class Expansion:
    d: int
    coefficients: np.ndarray
    norm_sq_estimate: float

    @property
    def N(self) -> int:
        return len(self.coefficients) - 1

    def residual(self, n: int) -> float:
        return residual(self, n)

    def residuals(self) -> np.ndarray:
        """A_{n,d} for n = 0..N+1."""
        return np.array([residual(self, n) for n in range(self.N + 2)])


def expand(g, d: int, N: int, rule: QuadratureRule | None = None) -> Expansion:
    """Coefficients alpha_0..alpha_N of ``g`` against q_0..q_N.

    ``g`` must accept a numpy array. When ``rule`` is omitted a Gauss rule
    with ``node_count(N + 1)`` nodes is used, which is only adequate for
    non-oscillatory profiles.
    """
    if int(N) != N or N < 0:
        raise DomainError(f"N must be a nonnegative integer, got {N!r}")
    N = int(N)
    if rule is None:
        rule = gauss_rule(d, node_count(N + 1))
    if rule.d != d:
        raise DomainError(f"rule was built for d={rule.d}, not d={d}")
    if rule.exact_degree < 2 * N:
        raise DomainError(
            f"rule exact to degree {rule.exact_degree} cannot expand to degree {N} "
            f"(needs >= {2 * N})"
        )
    gx = np.asarray(g(rule.nodes), dtype=float)
    _check_resolution(g, rule)
    q = LegendreFamily(d, N).eval_orthonormal(rule.nodes)
    wg = rule.weights * gx
    coefficients = q @ wg
    norm_sq = float(np.dot(wg, gx))
    return Expansion(d, coefficients, norm_sq)


def _check_resolution(g, rule):
    # Fewer nodes than sign changes of g cannot resolve it at all. The finer
    # policy K >= 1.5 * omega is the caller's job (see node_count).
    grid = np.linspace(-1.0, 1.0, max(4096, 8 * len(rule)))
    vals = np.asarray(g(grid), dtype=float)
    crossings = np.count_nonzero(np.signbit(vals[1:]) != np.signbit(vals[:-1]))
    if len(rule) < crossings:
        warnings.warn(
            f"{len(rule)} nodes under-resolve a profile with about {crossings} "
            f"sign changes (policy asks for >= {math.ceil(0.75 * math.pi * crossings)})",
            ResolutionWarning,
            stacklevel=3,
        )


def residual(e: Expansion, n: int) -> float:
    """A_{n,d} = sqrt(max(0, ||g||^2 - sum_{i<n} alpha_i^2)).

    Uses the independently estimated norm, so coefficients above degree N
    still count toward the residual.
    """
    if int(n) != n or not 0 <= n <= e.N + 1:
        raise IndexError(f"n must lie in [0, {e.N + 1}], got {n!r}")
    head = math.fsum(float(a) ** 2 for a in e.coefficients[: int(n)])
    return math.sqrt(max(0.0, e.norm_sq_estimate - head))


def best_poly_error_oracle(g, d: int, k: int, n_nodes: int | None = None) -> float:
    """min over degree-k polynomials p of ||g - p||^2 in L^2(mu_d).

    Deliberately shares no code with :func:`expand`: nodes and weights come
    from scipy's Gauss-Jacobi routine, the polynomial basis is Chebyshev in
    a coordinate rescaled to the bulk of mu_d, and the weighted least-squares
    problem is solved by SVD-based ``lstsq``.
    """
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    k = int(k)
    if n_nodes is None:
        n_nodes = max(2 * (k + 1), 64)
    a = (d - 3) / 2
    x, w = roots_jacobi(int(n_nodes), a, a)
    w = w / math.fsum(w)
    # mu_d concentrates on |x| ~ 1/sqrt(d); scaling keeps the basis well conditioned.
    scale = min(1.0, 4.0 / math.sqrt(d))
    V = np.polynomial.chebyshev.chebvander(x / scale, k)
    sw = np.sqrt(w)
    gx = np.asarray(g(x), dtype=float)
    coef, *_ = np.linalg.lstsq(V * sw[:, None], gx * sw, rcond=None)
    r = gx - V @ coef
    return float(np.dot(w, r * r))


def sine_lemma_profile(d: int, m: float):
    """x -> sin(pi * sqrt(d) * m * x)."""
    omega = math.pi * math.sqrt(d) * m

    def g(x):
        return np.sin(omega * np.asarray(x, dtype=float))

    g.omega = omega
    return g


def sine_lemma_min_dimension(m: int, k: int, dims) -> int | None:
    """Smallest d in ``dims`` whose best degree-k squared error for the sine
    profile reaches (m-k)/(4 e pi m); ``None`` if none does. Report only."""
    from .bounds import sine_lemma_bound

    target = sine_lemma_bound(m, k)
    for d in sorted(dims):
        g = sine_lemma_profile(d, m)
        rule = gauss_rule(d, node_count(k + 1, g.omega))
        e = expand(g, d, k + 1, rule)
        if residual(e, k + 1) ** 2 >= target:
            return d
    return None
