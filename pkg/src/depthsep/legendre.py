"""d-dimensional Legendre polynomials.

P_0 = 1, P_1(x) = x and

    P_n(x) = (2n+d-4)/(n+d-3) * x * P_{n-1}(x) - (n-1)/(n+d-3) * P_{n-2}(x).

These are Gegenbauer polynomials normalised so that P_n(1) = 1; the scaled
functions q_n = sqrt(N(d, n)) P_n are orthonormal in L^2(mu_d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special_fn import log_N

__all__ = ["LegendreFamily", "RecurrenceCoefficients", "recurrence_coefficients"]


@dataclass(frozen=True)
class LegendreFamily:
    d: int
    max_degree: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"d must be an integer >= 2, got {self.d!r}")
        if int(self.max_degree) != self.max_degree or self.max_degree < 0:
            raise DomainError(f"max_degree must be a nonnegative integer, got {self.max_degree!r}")
        if self.d == 2 and self.max_degree >= 2:
            # The recursion divides by n + d - 3 = n - 1, which vanishes at n = 2.
            raise DomainError("d = 2 is only supported up to degree 1")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "max_degree", int(self.max_degree))

    def eval_all(self, x) -> np.ndarray:
        """Return ``P_0(x), ..., P_max_degree(x)`` stacked along axis 0."""
        x = _check_x(x)
        d = self.d
        out = np.empty((self.max_degree + 1,) + x.shape)
        out[0] = 1.0
        if self.max_degree >= 1:
            out[1] = x
        for n in range(2, self.max_degree + 1):
            denom = n + d - 3
            out[n] = ((2 * n + d - 4) / denom) * x * out[n - 1] - ((n - 1) / denom) * out[n - 2]
        return out

    def log_norms(self) -> np.ndarray:
        """ln N(d, n) for n = 0..max_degree."""
        return np.array([log_N(self.d, n).log_abs for n in range(self.max_degree + 1)])

    def eval_orthonormal(self, x) -> np.ndarray:
        """Return q_n(x) = sqrt(N(d, n)) P_n(x) for n = 0..max_degree."""
        p = self.eval_all(x)
        half_log = 0.5 * self.log_norms()
        out = np.empty_like(p)
        for n, s in enumerate(half_log):
            if s < 700.0:
                out[n] = math.exp(s) * p[n]
            else:
                with np.errstate(divide="ignore", over="ignore"):
                    out[n] = np.sign(p[n]) * np.exp(s + np.log(np.abs(p[n])))
        return out


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """Off-diagonal b_1..b_K of the Jacobi matrix of the orthonormal family.

    The diagonal vanishes because mu_d is symmetric, so
    x q_k = b_{k+1} q_{k+1} + b_k q_{k-1}.
    """

    d: int
    off_diagonal: np.ndarray


def recurrence_coefficients(d: int, K: int) -> RecurrenceCoefficients:
    """b_{k+1} = (k+d-2)/(2k+d-2) * sqrt(N(d,k) / N(d,k+1)) for k = 0..K-1."""
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    if int(K) != K or K < 1:
        raise DomainError(f"K must be an integer >= 1, got {K!r}")
    d, K = int(d), int(K)
    b = np.empty(K)
    log_prev = log_N(d, 0).log_abs
    for k in range(K):
        log_next = log_N(d, k + 1).log_abs
        # At k = 0 the ratio is x P_0 = P_1, i.e. exactly 1 (also for d = 2).
        ratio = 1.0 if k == 0 else (k + d - 2) / (2 * k + d - 2)
        b[k] = ratio * math.exp(0.5 * (log_prev - log_next))
        log_prev = log_next
    return RecurrenceCoefficients(d, b)


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1) or np.any(np.isnan(x)):
        raise DomainError("Legendre evaluation requires |x| <= 1")
    return x
