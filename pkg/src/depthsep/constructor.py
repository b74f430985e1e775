"""Explicit depth-3 ReLU constructions for inner-product functions.

Pipeline: a 1-D ReLU interpolant of t -> t^2/2 on [-2, 2] gives a depth-2
network computing <x, x'> = sum_i (x_i + x'_i)^2 / 2 - 1 on unit vectors;
a second 1-D interpolant of the profile f is stacked on top, giving a
depth-3 network for F(x, x') = f(<x, x'>).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, VerificationError
from .relu_net import AffineLayer, ReluNetwork, validate_bounds
from .sphere_mc import SphereSampler

__all__ = [
    "Ridge1D",
    "approx_1d",
    "build_square_net",
    "build_inner_product_net",
    "Depth3Construction",
    "build_depth3",
    "predicted_depth3_width",
]

LIPSCHITZ_SLACK = 1.05
GRID_POINTS_PER_UNIT = 10
DEFAULT_CHECK_SAMPLES = 10_000


@dataclass(frozen=True)
class Ridge1D:
    """g(x) = constant + sum_i alpha_i relu(gamma_i x - beta_i)."""

    constant: float
    alpha: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray
    R: float
    L: float
    eps: float
    grid_error: float = field(default=math.nan, compare=False)

    @property
    def m(self) -> int:
        return len(self.alpha)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        z = np.multiply.outer(x, self.gamma) - self.beta
        return self.constant + np.maximum(z, 0.0) @ self.alpha

    def knots(self) -> np.ndarray:
        return np.sort(self.gamma * self.beta)


def _lipschitz_estimate(f, R, n=4001):
    x = np.linspace(-R, R, n)
    y = np.asarray(f(x), dtype=float)
    return float(np.max(np.abs(np.diff(y)) / np.diff(x)))


def approx_1d(f, R: float, L: float, eps: float, verify: bool = True) -> Ridge1D:
    """ReLU interpolant of an L-Lipschitz ``f`` with sup error <= eps on [-R, R].

    Knots sit at 0, +-h, +-2h, ... with h = R / ceil(RL / (2 eps)), so linear
    interpolation errs by at most L h / 2 <= eps. Positive knots become units
    with gamma = +1, negative ones units with gamma = -1, each weighted by a
    slope difference; the result has at most 2 RL / eps units, |alpha| <= 2L,
    |beta| <= R, and is L-Lipschitz on all of R (it extends linearly).
    """
    if not (R > 0 and L > 0 and eps > 0):
        raise DomainError("approx_1d needs R, L, eps > 0")
    slope = _lipschitz_estimate(f, R)
    if slope > LIPSCHITZ_SLACK * L:
        raise DomainError(f"f is not {L}-Lipschitz on [-{R}, {R}]: observed slope {slope:.6g}")
    f0 = float(np.asarray(f(np.array([0.0])), dtype=float)[0])
    if R * L <= eps:
        ridge = Ridge1D(f0, np.zeros(0), np.zeros(0), np.zeros(0), float(R), float(L), float(eps))
    else:
        n = math.ceil(R * L / (2.0 * eps))
        t = np.linspace(0.0, R, n + 1)
        h = t[1] - t[0]
        right = np.diff(np.asarray(f(t), dtype=float)) / np.diff(t)
        left = -np.diff(np.asarray(f(-t), dtype=float)) / np.diff(t)  # slope in x on [-t_{j+1}, -t_j]
        # Secant slopes of an L-Lipschitz function; clip float noise so the
        # interpolant stays exactly L-Lipschitz.
        right = np.clip(right, -L, L)
        left = np.clip(left, -L, L)
        a_right = np.diff(right, prepend=0.0)
        a_left = -np.diff(left, prepend=0.0)
        alpha = np.concatenate([a_right, a_left])
        gamma = np.concatenate([np.ones(n), -np.ones(n)])
        beta = np.concatenate([t[:-1], t[:-1]])
        keep = alpha != 0.0
        ridge = Ridge1D(f0, alpha[keep], gamma[keep], beta[keep], float(R), float(L), float(eps))
        assert ridge.m <= 2 * R * L / eps + 1e-9, "unit budget exceeded"
        assert h <= 2 * eps / L * (1 + 1e-12)
    if verify:
        ridge = _verify_ridge(f, ridge)
    return ridge


def _verify_ridge(f, ridge: Ridge1D) -> Ridge1D:
    # Grid fine enough that Lipschitz continuity lifts the grid check to 1.1 eps.
    count = max(GRID_POINTS_PER_UNIT * max(ridge.m, 1),
                math.ceil(20 * ridge.R * ridge.L / ridge.eps)) + 1
    grid = np.union1d(np.linspace(-ridge.R, ridge.R, count), ridge.knots())
    err = 0.0
    for chunk in np.array_split(grid, max(1, len(grid) // 4096)):
        err = max(err, float(np.max(np.abs(ridge(chunk) - np.asarray(f(chunk), dtype=float)))))
    if err > ridge.eps * (1 + 1e-12):
        raise VerificationError(f"1-D approximation error {err:.3e} exceeds eps = {ridge.eps:.3e}", err)
    return Ridge1D(ridge.constant, ridge.alpha, ridge.gamma, ridge.beta,
                   ridge.R, ridge.L, ridge.eps, err)


def _half_square(t):
    t = np.asarray(t, dtype=float)
    return 0.5 * t * t


def build_square_net(d_scale: int, L: float, eps: float) -> Ridge1D:
    """t -> t^2/2 on [-2, 2] with error eps / (2 d_scale L)."""
    if d_scale < 1:
        raise DomainError("d_scale must be >= 1")
    ridge = approx_1d(_half_square, 2.0, 2.0, eps / (2.0 * d_scale * L))
    if ridge.m > 16 * d_scale * L / eps + 1e-9:
        raise AssertionError("square net exceeds its width budget")
    return ridge


def predicted_depth3_width(d: int, L: float, eps: float) -> int:
    """Width of :func:`build_depth3` without building it (first hidden layer)."""
    eps_sq = eps / (2.0 * d * L)
    n = math.ceil(2.0 * 2.0 / (2.0 * eps_sq))
    return d * 2 * n


def _inner_layers(d, square: Ridge1D, bound):
    m = square.m
    rows = np.zeros((d * m, 2 * d))
    for i in range(d):
        rows[i * m:(i + 1) * m, i] = square.gamma
        rows[i * m:(i + 1) * m, d + i] = square.gamma
    first = AffineLayer(rows, np.tile(-square.beta, d), bound)
    # sum_i (x_i + x'_i)^2 / 2 = 1 + <x, x'> on unit vectors.
    second_w = np.tile(square.alpha, d)[None, :]
    second_b = np.array([d * square.constant - 1.0])
    return first, second_w, second_b


def build_inner_product_net(d: int, L: float, eps: float, seed: int = 0,
                            n_check: int = DEFAULT_CHECK_SAMPLES) -> ReluNetwork:
    """Depth-2 network with |net(x, x') - <x, x'>| <= eps / (2L) on unit vectors."""
    if d < 1:
        raise DomainError("d must be >= 1")
    square = build_square_net(d, L, eps)
    first, w2, b2 = _inner_layers(d, square, 2.0)
    net = ReluNetwork([first, AffineLayer(w2, b2, 4.0)], d)
    if n_check:
        err = _sup_error(net, lambda X, Xp: np.sum(X * Xp, axis=1), d, n_check, seed)
        if err > eps / (2 * L):
            raise VerificationError(f"inner-product error {err:.3e} exceeds eps/(2L) = {eps / (2 * L):.3e}", err)
    return net


def _sup_error(net, target, d, n, seed):
    if d < 2:
        raise DomainError("sup-error sampling needs d >= 2")
    X, Xp = SphereSampler(d, seed).pairs(n)
    return float(np.max(np.abs(net(X, Xp) - target(X, Xp))))


@dataclass(frozen=True)
class Depth3Construction:
    net: ReluNetwork
    square: Ridge1D
    outer: Ridge1D
    d: int
    L: float
    eps: float
    sup_error: float
    n_check: int
    seed: int

    @property
    def width_budget(self) -> float:
        return 16 * self.d ** 2 * self.L / self.eps

    @property
    def bound_budget(self) -> float:
        return max(4.0, 2.0 * self.L)

    @property
    def outer_budget_lemma(self) -> float:
        """Unit budget 2 R L / (eps/2) for the outer stage on its inflated radius."""
        return 4.0 * self.outer.R * self.L / self.eps

    @property
    def outer_budget_stated(self) -> float:
        return 2.0 * self.L / self.eps

    def manifest(self, profile_id: str = "") -> dict:
        check = validate_bounds(self.net)
        return {
            "profile": profile_id,
            "d": self.d,
            "L": self.L,
            "eps": self.eps,
            "seed": self.seed,
            "n_check": self.n_check,
            "sup_error": self.sup_error,
            "width": check.r,
            "width_budget": self.width_budget,
            "B_actual": check.B_actual,
            "B_declared": self.net.declared_bound,
            "B_budget": self.bound_budget,
            "bounds_ok": check.ok,
            "hidden_widths": [layer.out_dim for layer in self.net.layers[:-1]],
            "square_units": self.square.m,
            "outer_units": self.outer.m,
            "outer_units_budget_lemma": self.outer_budget_lemma,
            "outer_units_budget_stated": self.outer_budget_stated,
        }


def build_depth3(f, L: float, d: int, eps: float, seed: int = 0,
                 n_check: int = DEFAULT_CHECK_SAMPLES) -> Depth3Construction:
    """Depth-3 ReLU network for F(x, x') = f(<x, x'>) with sup error <= eps.

    ``f`` maps [-1, 1] into [-1, 1] and is L-Lipschitz. Hidden layer 1 holds
    the square units of the inner-product network; the linear read-out of
    that network is folded into W_2 and b_2; hidden layer 2 holds the outer
    interpolant of f, built on [-(1 + eps/2L), 1 + eps/2L] with f extended
    constantly so the overshoot of the inner stage stays covered.
    """
    if not (L > 0 and eps > 0) or d < 1:
        raise DomainError("build_depth3 needs L, eps > 0 and d >= 1")
    grid = np.linspace(-1.0, 1.0, 4001)
    vals = np.asarray(f(grid), dtype=float)
    if np.max(np.abs(vals)) > 1.0 + 1e-12:
        raise DomainError("profile must map [-1, 1] into [-1, 1]")
    B = max(4.0, 2.0 * L)
    square = build_square_net(d, L, eps)
    first, w2_inner, b2_inner = _inner_layers(d, square, B)

    def f_ext(t):
        return np.asarray(f(np.clip(t, -1.0, 1.0)), dtype=float)

    outer = approx_1d(f_ext, 1.0 + eps / (2.0 * L), L, eps / 2.0)
    alpha, gamma, beta = outer.alpha, outer.gamma, outer.beta
    if outer.m == 0:
        alpha, gamma, beta = np.zeros(1), np.ones(1), np.zeros(1)
    W2 = gamma[:, None] * w2_inner
    b2 = gamma * b2_inner[0] - beta
    layers = [
        first,
        AffineLayer(W2, b2, B),
        AffineLayer(alpha[None, :], np.array([outer.constant]), B),
    ]
    net = ReluNetwork(layers, d)
    err = math.nan
    if n_check:
        err = _sup_error(net, lambda X, Xp: np.asarray(f(np.sum(X * Xp, axis=1)), dtype=float),
                         d, n_check, seed)
        if err > eps:
            raise VerificationError(f"depth-3 sup error {err:.3e} exceeds eps = {eps:.3e}", err)
    return Depth3Construction(net, square, outer, int(d), float(L), float(eps), err, n_check, seed)
