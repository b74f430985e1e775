"""Explicit ReLU networks on S^{d-1} x S^{d-1} with weight-bound accounting.

The first layer acts on the concatenation (x, x') in R^{2d}, so its weight
matrix is [W_1 | W'_1]. ReLU follows every layer except the last, whose
output is scalar.
"""

from __future__ import annotations

import base64
import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._io import write_atomic
from .errors import DomainError
from .sphere_mc import unit_vectors

__all__ = [
    "AffineLayer",
    "ReluNetwork",
    "BoundsCheck",
    "validate_bounds",
    "max_preactivation_bound",
    "save_network",
    "load_network",
    "network_to_dict",
    "network_from_dict",
    "FORMAT_NAME",
    "FORMAT_VERSION",
]

FORMAT_NAME = "depthsep.relu_network"
FORMAT_VERSION = 1
_CHUNK = 512


def _frozen(a, ndim):
    a = np.array(a, dtype=np.float64, order="C")
    if a.ndim != ndim:
        raise DomainError(f"expected a {ndim}-d array, got shape {a.shape}")
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class AffineLayer:
    weight: np.ndarray
    bias: np.ndarray
    declared_bound: float

    def __post_init__(self):
        w = _frozen(self.weight, 2)
        b = _frozen(self.bias, 1)
        if w.shape[0] != b.shape[0]:
            raise DomainError(f"weight has {w.shape[0]} rows but bias has {b.shape[0]} entries")
        if not self.declared_bound > 0:
            raise DomainError("declared_bound must be positive")
        actual = self.max_abs_entry(w, b)
        if actual > self.declared_bound:
            raise DomainError(
                f"layer entry of magnitude {actual!r} exceeds declared bound {self.declared_bound!r}"
            )
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "bias", b)
        object.__setattr__(self, "declared_bound", float(self.declared_bound))

    @staticmethod
    def max_abs_entry(w, b) -> float:
        m = 0.0
        if w.size:
            m = max(m, float(np.max(np.abs(w))))
        if b.size:
            m = max(m, float(np.max(np.abs(b))))
        return m

    @property
    def in_dim(self) -> int:
        return self.weight.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weight.shape[0]

    def __call__(self, h):
        return h @ self.weight.T + self.bias


class ReluNetwork:
    """Immutable ReLU network mapping unit-vector pairs to scalars."""

    def __init__(self, layers: Sequence[AffineLayer], d: int, unit_tol: float = 1e-9):
        layers = tuple(layers)
        if len(layers) < 2:
            raise DomainError("a network needs at least one hidden layer")
        if layers[0].in_dim != 2 * d:
            raise DomainError(f"first layer expects {layers[0].in_dim} inputs, not 2d = {2 * d}")
        for prev, nxt in zip(layers[:-1], layers[1:]):
            if prev.out_dim != nxt.in_dim:
                raise DomainError(f"layer shapes do not chain: {prev.out_dim} -> {nxt.in_dim}")
        if layers[-1].out_dim != 1:
            raise DomainError("the output layer must be scalar")
        self._layers = layers
        self._d = int(d)
        self.unit_tol = unit_tol

    @property
    def layers(self):
        return self._layers

    @property
    def d(self) -> int:
        return self._d

    @property
    def depth(self) -> int:
        return len(self._layers)

    @property
    def width(self) -> int:
        return max(layer.out_dim for layer in self._layers[:-1])

    @property
    def declared_bound(self) -> float:
        return max(layer.declared_bound for layer in self._layers)

    def _check_inputs(self, X, Xp):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Xp = np.atleast_2d(np.asarray(Xp, dtype=float))
        if X.shape != Xp.shape or X.shape[1] != self._d:
            raise DomainError(f"inputs must both have shape (n, {self._d})")
        if self.unit_tol is not None:
            for name, V in (("x", X), ("x'", Xp)):
                dev = np.abs(np.linalg.norm(V, axis=1) - 1.0)
                if dev.size and dev.max() > self.unit_tol:
                    raise DomainError(f"{name} is not a unit vector (|norm - 1| = {dev.max():.3e})")
        return X, Xp

    def preactivations(self, X, Xp):
        """Per-layer pre-activation arrays for a batch (no input check)."""
        h = np.concatenate([X, Xp], axis=1)
        out = []
        for i, layer in enumerate(self._layers):
            z = layer(h)
            out.append(z)
            if i < len(self._layers) - 1:
                h = np.maximum(z, 0.0)
        return out

    def evaluate_batch(self, X, Xp) -> np.ndarray:
        X, Xp = self._check_inputs(X, Xp)
        result = np.empty(X.shape[0])
        for start in range(0, X.shape[0], _CHUNK):
            sl = slice(start, start + _CHUNK)
            result[sl] = self.preactivations(X[sl], Xp[sl])[-1][:, 0]
        return result

    __call__ = evaluate_batch

    def evaluate(self, x, xp) -> float:
        return float(self.evaluate_batch(np.asarray(x)[None, :], np.asarray(xp)[None, :])[0])

    def input_gradient(self, x, xp) -> np.ndarray:
        """Gradient of the output w.r.t. the concatenated input (x, x').

        Computed as the product of layer Jacobians with the ReLU masks of the
        current linear region; ignores the unit-sphere constraint.
        """
        zs = self.preactivations(np.asarray(x, float)[None, :], np.asarray(xp, float)[None, :])
        g = self._layers[-1].weight[0].copy()
        for layer, z in zip(reversed(self._layers[:-1]), reversed(zs[:-1])):
            g = (g * (z[0] > 0)) @ layer.weight
        return g


class BoundsCheck(NamedTuple):
    r: int
    B_actual: float
    ok: bool


def validate_bounds(net: ReluNetwork) -> BoundsCheck:
    B_actual = max(AffineLayer.max_abs_entry(l.weight, l.bias) for l in net.layers)
    return BoundsCheck(net.width, B_actual, B_actual <= net.declared_bound)


def max_preactivation_bound(net: ReluNetwork, n_samples: int = 10_000, seed: int = 0):
    """Return ``(analytic, empirical)`` bounds on the first-layer pre-activations.

    analytic = sqrt(4d) B + B for the declared bound B: each row has
    Euclidean norm <= B sqrt(2d) and ||(x, x')|| = sqrt(2). The empirical
    value is the max |pre-activation| over random unit-vector pairs.
    """
    if net.depth != 2:
        raise DomainError("max_preactivation_bound is defined for depth-2 networks")
    B = net.declared_bound
    analytic = math.sqrt(4 * net.d) * B + B
    # Plain generator rather than SphereSampler so that d = 1 (S^0) works.
    rng = np.random.default_rng(seed)
    X = unit_vectors(rng, n_samples, net.d)
    Xp = unit_vectors(rng, n_samples, net.d)
    z = net.layers[0](np.concatenate([X, Xp], axis=1))
    empirical = float(np.max(np.abs(z))) if z.size else 0.0
    return analytic, empirical


def _encode(a: np.ndarray, encoding: str):
    if encoding == "binary":
        return base64.b64encode(a.astype("<f8").tobytes(order="C")).decode("ascii")
    return [repr(float(v)) for v in a.ravel(order="C")]


def _decode(payload, shape, encoding: str):
    if encoding == "binary":
        raw = base64.b64decode(payload.encode("ascii"))
        return np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(shape)
    return np.array([float(v) for v in payload], dtype=np.float64).reshape(shape)


def network_to_dict(net: ReluNetwork, encoding: str = "binary") -> dict:
    if encoding not in ("binary", "text"):
        raise ValueError("encoding must be 'binary' or 'text'")
    return {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "encoding": encoding,
        "byte_order": "little",
        "d": net.d,
        "depth": net.depth,
        "declared_bound": net.declared_bound,
        "layers": [
            {
                "out_dim": layer.out_dim,
                "in_dim": layer.in_dim,
                "declared_bound": layer.declared_bound,
                "weight": _encode(layer.weight, encoding),
                "bias": _encode(layer.bias, encoding),
            }
            for layer in net.layers
        ],
    }


def network_from_dict(doc: dict) -> ReluNetwork:
    if doc.get("format") != FORMAT_NAME:
        raise ValueError(f"not a {FORMAT_NAME} document")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {doc.get('format_version')!r}")
    encoding = doc["encoding"]
    layers = []
    for spec in doc["layers"]:
        shape = (spec["out_dim"], spec["in_dim"])
        layers.append(AffineLayer(
            _decode(spec["weight"], shape, encoding),
            _decode(spec["bias"], (spec["out_dim"],), encoding),
            spec["declared_bound"],
        ))
    return ReluNetwork(layers, doc["d"])


def save_network(net: ReluNetwork, path, encoding: str = "binary"):
    write_atomic(path, json.dumps(network_to_dict(net, encoding)))


def load_network(path) -> ReluNetwork:
    with open(path, encoding="utf-8") as fh:
        return network_from_dict(json.load(fh))
