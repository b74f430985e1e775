"""Depth-2 lower bound, Example-1 neuron threshold and the sine residual bound."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError
from .special_fn import LogNumber, log_N, logsumexp2

__all__ = [
    "BoundReport",
    "theorem1_bound",
    "relu_sigma_max",
    "example1_threshold",
    "example1_A_floor",
    "example1_target_error",
    "width_threshold",
    "sine_lemma_bound",
]


@dataclass(frozen=True)
class BoundReport:
    """Inputs and value of A * (A - (2 r B sigma_max + 2 B) / sqrt(N(d, n))).

    A nonpositive ``lower_bound`` is kept as-is and flagged ``vacuous``.
    """

    d: int
    n: int
    r: int
    B: float
    sigma_max: float
    A: float
    penalty: float
    lower_bound: float
    vacuous: bool
    log_N: float

    def as_dict(self):
        return asdict(self)


def theorem1_bound(d: int, n: int, r: int, B: float, sigma_max: float, A: float) -> BoundReport:
    """Lower bound on the squared L^2 distance between any width-``r``,
    ``B``-bounded depth-2 network and F(x, x') = f(<x, x'>), where
    ``A = A_{n,d}(f)`` and ``sigma_max`` bounds |sigma| on [-(sqrt(4d)+1)B, (sqrt(4d)+1)B].

    ``r = 0`` is accepted and means the network is its output bias alone.
    """
    if d < 3 or int(d) != d:
        raise DomainError(f"d must be an integer >= 3, got {d!r}")
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if r < 0 or int(r) != r:
        raise DomainError(f"r must be a nonnegative integer, got {r!r}")
    if not B > 0:
        raise DomainError(f"B must be positive, got {B!r}")
    if sigma_max < 0 or A < 0:
        raise DomainError("sigma_max and A must be nonnegative")
    lnN = log_N(d, n).log_abs
    numerator = 2.0 * r * B * sigma_max + 2.0 * B
    penalty = math.exp(math.log(numerator) - 0.5 * lnN)
    lower = A * (A - penalty) + 0.0  # normalise -0.0 when A = 0
    return BoundReport(int(d), int(n), int(r), float(B), float(sigma_max), float(A),
                       penalty, lower, lower <= 0, lnN)


def relu_sigma_max(d: int, B: float) -> float:
    """max |relu(t)| over |t| <= sqrt(4d) B + B, i.e. the right endpoint."""
    if d < 1 or not B > 0:
        raise DomainError("relu_sigma_max needs d >= 1 and B > 0")
    return math.sqrt(4 * d) * B + B


def example1_A_floor() -> float:
    """1/(5 e pi): the residual floor for sin(pi d^3 x) at n = d^2."""
    return 1.0 / (5.0 * math.e * math.pi)


def example1_target_error() -> float:
    """1/(50 e^2 pi^2), the approximation target of the neuron-count example."""
    return 1.0 / (50.0 * math.e ** 2 * math.pi ** 2)


def example1_threshold(d: int) -> LogNumber:
    """sqrt(N(d, d^2)) / (20 e pi 2^{2d} (1 + sqrt(4d)) + 2^{d+1}) in log form."""
    if d < 3 or int(d) != d:
        raise DomainError(f"example1_threshold needs an integer d >= 3, got {d!r}")
    ln2 = math.log(2.0)
    first = math.log(20.0 * math.e * math.pi) + 2 * d * ln2 + math.log1p(math.sqrt(4 * d))
    second = (d + 1) * ln2
    log_den = logsumexp2(first, second)
    return LogNumber(0.5 * log_N(d, d * d).log_abs - log_den, 1)


def width_threshold(d: int, n: int, B: float, sigma_max: float, A: float,
                    target: float) -> LogNumber:
    """Smallest width r at which the depth-2 bound drops to ``target``.

    Solving A (A - (2 r B s + 2B)/sqrt(N)) <= target for r gives
    r >= ((A - target/A) sqrt(N) - 2B) / (2 B s). Below that width every
    B-bounded network has squared error above ``target``. Returned in log
    form; a nonpositive value means the bound never exceeds ``target``.
    """
    if not A > 0 or not B > 0 or not sigma_max > 0:
        raise DomainError("width_threshold needs A, B, sigma_max > 0")
    slack = A - target / A
    if slack <= 0:
        return LogNumber(-math.inf, 0)
    top = LogNumber.from_float(slack) * log_N(d, n).sqrt() - 2.0 * B
    return top / (2.0 * B * sigma_max)


def sine_lemma_bound(m: int, k: int) -> float:
    """max(0, (m - k) / (4 e pi m)): squared-error floor for sin(pi sqrt(d) m x)."""
    if m < 1 or k < 0:
        raise DomainError("sine_lemma_bound needs m >= 1 and k >= 0")
    return max(0.0, (m - k) / (4.0 * math.e * math.pi * m))
