"""Fit bounded-weight depth-2 ReLU networks and compare with the depth-2 floor.

Training is projected SGD: after every step all weights and biases are
clamped to [-B, B], so every iterate is a B-bounded network and the lower
bound applies to it exactly. Gradients are derived by hand; the ReLU
subgradient at 0 is taken as 0.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import relu_sigma_max, theorem1_bound
from .errors import ConvergenceError, DomainError
from .projection import expand
from .quadrature import gauss_rule, node_count
from .relu_net import AffineLayer, ReluNetwork, validate_bounds
from .sphere_mc import SphereSampler, inner_product_function, l2_error

__all__ = ["FitConfig", "FitReport", "DivergenceError", "fit_depth2", "gap_report",
           "gradient_check", "loss_and_grad"]


class DivergenceError(ConvergenceError):
    pass


@dataclass(frozen=True)
class FitConfig:
    d: int
    r: int
    B: float
    learning_rate: float = 0.05
    steps: int = 2000
    batch_size: int = 256
    seed: int = 0
    checkpoints: int = 4
    checkpoint_samples: int = 50_000

    def __post_init__(self):
        if not 2 <= self.d <= 8:
            raise DomainError("gap demo is limited to 2 <= d <= 8")
        if not 1 <= self.r <= 4096:
            raise DomainError("gap demo is limited to 1 <= r <= 4096")
        if not self.B > 0:
            raise DomainError("B must be positive")


@dataclass
class FitReport:
    losses: list = field(default_factory=list)
    checkpoints: list = field(default_factory=list)

    def as_dict(self):
        return asdict(self)


def _unpack(theta, d, r):
    W = theta[: 2 * d * r].reshape(r, 2 * d)
    b1 = theta[2 * d * r: 2 * d * r + r]
    w2 = theta[2 * d * r + r: 2 * d * r + 2 * r]
    b2 = theta[-1]
    return W, b1, w2, b2


def loss_and_grad(theta, H, target, d, r):
    """Mean squared error on the batch ``H = [X | X']`` and its gradient."""
    W, b1, w2, b2 = _unpack(theta, d, r)
    Z = H @ W.T + b1
    A = np.maximum(Z, 0.0)
    y = A @ w2 + b2
    resid = y - target
    n = len(target)
    loss = float(resid @ resid) / n
    e = 2.0 * resid / n
    dw2 = A.T @ e
    db2 = e.sum()
    dZ = np.outer(e, w2) * (Z > 0)
    dW = dZ.T @ H
    db1 = dZ.sum(axis=0)
    return loss, np.concatenate([dW.ravel(), db1, dw2, [db2]])


def _to_network(theta, d, r, B):
    W, b1, w2, b2 = _unpack(theta, d, r)
    return ReluNetwork([AffineLayer(W, b1, B), AffineLayer(w2[None, :], [b2], B)], d)


def fit_depth2(cfg: FitConfig, profile):
    """Projected SGD fit of a width-r depth-2 network to F(x, x') = profile(<x, x'>).

    Returns ``(net, FitReport)``. Raises DivergenceError if the batch loss
    stays above 10x its initial value for 100 consecutive steps.
    """
    d, r, B = cfg.d, cfg.r, cfg.B
    F = inner_product_function(profile)
    init = np.random.default_rng(cfg.seed)
    theta = np.clip(init.normal(0.0, 1.0 / math.sqrt(2 * d), 2 * d * r + 2 * r + 1), -B, B)
    sampler = SphereSampler(d, cfg.seed, stream=1)
    report = FitReport()
    first_loss, bad_run = None, 0
    marks = set(np.linspace(0, cfg.steps, cfg.checkpoints + 1).astype(int)[1:]) if cfg.checkpoints else set()
    for step in range(1, cfg.steps + 1):
        X, Xp = sampler.pairs(cfg.batch_size)
        loss, grad = loss_and_grad(theta, np.concatenate([X, Xp], axis=1), F(X, Xp), d, r)
        if first_loss is None:
            first_loss = loss
        bad_run = bad_run + 1 if loss > 10 * first_loss else 0
        if bad_run >= 100 or not math.isfinite(loss):
            raise DivergenceError(f"training diverged at step {step}: loss {loss:.4g} (initial {first_loss:.4g})")
        theta = np.clip(theta - cfg.learning_rate * grad, -B, B)
        report.losses.append(loss)
        if step in marks:
            est = l2_error(_to_network(theta, d, r, B), F, d, cfg.checkpoint_samples, seed=cfg.seed + step)
            report.checkpoints.append({"step": step, "sq_error": est.squared.mean,
                                       "sq_error_se": est.squared.std_error})
    net = _to_network(theta, d, r, B)
    assert validate_bounds(net).ok
    return net, report


def gradient_check(d: int = 3, r: int = 8, B: float = 1.0, n_points: int = 100,
                   batch: int = 16, seed: int = 0, h: float = 1e-6, margin: float = 1e-4) -> float:
    """Worst relative error between analytic and central-difference gradients.

    Each point is a random parameter vector whose pre-activations all stay
    at least ``margin`` away from the ReLU kink.
    """
    rng = np.random.default_rng(seed)
    sampler = SphereSampler(d, seed)
    worst = 0.0
    size = 2 * d * r + 2 * r + 1
    done = 0
    while done < n_points:
        theta = rng.uniform(-B, B, size)
        X, Xp = sampler.pairs(batch)
        H = np.concatenate([X, Xp], axis=1)
        W, b1, _, _ = _unpack(theta, d, r)
        if np.min(np.abs(H @ W.T + b1)) <= margin:
            continue
        target = rng.uniform(-1, 1, batch)
        _, g = loss_and_grad(theta, H, target, d, r)
        fd = np.empty(size)
        for k in range(size):
            e = np.zeros(size)
            e[k] = h
            fd[k] = (loss_and_grad(theta + e, H, target, d, r)[0]
                     - loss_and_grad(theta - e, H, target, d, r)[0]) / (2 * h)
        worst = max(worst, float(np.linalg.norm(fd - g) / np.linalg.norm(g)))
        done += 1
    return worst


def gap_report(cfg: FitConfig, profile, n: int, n_samples: int = 200_000,
               quad_nodes: int | None = None) -> dict:
    """Measured squared L^2 error of a fitted network against the depth-2 floor.

    The floor is the best lower bound over degrees 0..n. When it is
    non-vacuous, ``sound`` records whether the measured squared error stays
    above it within 4 standard errors, at every checkpoint and at the end.
    """
    d = cfg.d
    if d < 3:
        raise DomainError("the lower bound needs d >= 3")
    net, fit = fit_depth2(cfg, profile)
    rule = gauss_rule(d, quad_nodes or node_count(n + 1) + 8)
    e = expand(profile, d, n, rule)
    sigma = relu_sigma_max(d, cfg.B)
    floors = [theorem1_bound(d, k, cfg.r, cfg.B, sigma, e.residual(k)) for k in range(n + 1)]
    best = max(floors, key=lambda b: b.lower_bound)
    est = l2_error(net, inner_product_function(profile), d, n_samples, seed=cfg.seed + 10_007)
    vacuous = best.lower_bound <= 0
    checks = [(est.squared.mean, est.squared.std_error)] + [
        (c["sq_error"], c["sq_error_se"]) for c in fit.checkpoints]
    sound = vacuous or all(m + 4 * se >= best.lower_bound for m, se in checks)
    return {
        "config": asdict(cfg),
        "n_max": n,
        "floor": best.as_dict(),
        "floors_by_n": [b.lower_bound for b in floors],
        "measured_sq_error": est.squared.mean,
        "measured_sq_error_se": est.squared.std_error,
        "measured_l2_error": est.norm,
        "measured_l2_error_se": est.norm_std_error,
        "n_samples": n_samples,
        "checkpoints": fit.checkpoints,
        "final_batch_loss": fit.losses[-1] if fit.losses else math.nan,
        "vacuous": vacuous,
        "sound": sound,
    }
