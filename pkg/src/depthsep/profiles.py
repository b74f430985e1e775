"""Built-in profile functions g: [-1, 1] -> R for the command-line tools.

A profile spec is a name with optional arguments, e.g. ``identity``,
``sine(3)``, ``sine(pi*d**3)``, ``poly(0,0,1)``, ``q(4)``, ``example1``,
``sine_lemma(10)`` or ``@table.csv``. Arguments may use ``pi``, ``e`` and
``d`` in plain arithmetic.
"""

from __future__ import annotations

import ast
import csv
import math
import operator
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .legendre import LegendreFamily

__all__ = ["Profile", "parse_profile", "eval_expr"]


@dataclass(frozen=True)
class Profile:
    """A profile with its Lipschitz constant, range and oscillation hints.

    ``omega`` is an angular-frequency hint for quadrature node counts and
    ``degree`` is the polynomial degree when the profile is a polynomial.
    """

    name: str
    fn: object
    lipschitz: float
    lo: float
    hi: float
    omega: float = 0.0
    degree: int | None = None

    def __call__(self, x):
        return self.fn(x)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def eval_expr(text: str, d: int | None = None) -> float:
    """Evaluate a small arithmetic expression over numbers, pi, e and d."""
    names = {"pi": math.pi, "e": math.e}
    if d is not None:
        names["d"] = d

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise DomainError(f"unknown name {node.id!r} in {text!r}"
                                  + (" (pass --d)" if node.id == "d" else ""))
            return float(names[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise DomainError(f"unsupported expression {text!r}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse {text!r}") from exc
    return walk(tree)


def _grid_range(fn):
    y = np.asarray(fn(np.linspace(-1.0, 1.0, 20001)), dtype=float)
    return float(y.min()), float(y.max())


def _need_d(name, d):
    if d is None:
        raise DomainError(f"profile {name!r} depends on the dimension; pass --d")
    return d


def parse_profile(spec: str, d: int | None = None, L: float | None = None) -> Profile:
    """Resolve a profile spec; ``L`` overrides the Lipschitz constant where given."""
    spec = spec.strip()
    if spec.startswith("@"):
        return _tabulated(spec[1:], L)
    m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?", spec)
    if not m:
        raise DomainError(f"cannot parse profile {spec!r}")
    name, argtext = m.group(1), m.group(2)
    args = [eval_expr(a, d) for a in argtext.split(",")] if argtext and argtext.strip() else []

    def arity(n):
        if len(args) != n:
            raise DomainError(f"profile {name!r} takes {n} argument(s), got {len(args)}")

    if name == "identity":
        arity(0)
        prof = Profile(spec, lambda x: np.asarray(x, dtype=float), 1.0, -1.0, 1.0, 0.0, 1)
    elif name == "abs":
        arity(0)
        prof = Profile(spec, np.abs, 1.0, 0.0, 1.0)
    elif name == "exp":
        arity(0)
        prof = Profile(spec, np.exp, math.e, math.exp(-1.0), math.e)
    elif name in ("sine", "example1", "sine_lemma"):
        if name == "sine":
            arity(1)
            omega = args[0]
        elif name == "example1":
            arity(0)
            omega = math.pi * _need_d(name, d) ** 3
        else:
            arity(1)
            omega = math.pi * math.sqrt(_need_d(name, d)) * args[0]
        lo, hi = _grid_range(lambda x: np.sin(omega * x))
        prof = Profile(spec, lambda x, w=omega: np.sin(w * np.asarray(x, dtype=float)),
                       abs(omega), lo, hi, abs(omega))
    elif name == "poly":
        if not args:
            raise DomainError("poly needs at least one coefficient")
        p = np.polynomial.Polynomial(args)
        lip = float(sum(k * abs(c) for k, c in enumerate(args)))
        lo, hi = _grid_range(p)
        prof = Profile(spec, lambda x: p(np.asarray(x, dtype=float)), lip, lo, hi, 0.0, p.degree())
    elif name == "q":
        arity(1)
        j = int(args[0])
        if j != args[0] or j < 0:
            raise DomainError("q(j) needs a nonnegative integer j")
        fam = LegendreFamily(_need_d(name, d), j)

        def fn(x):
            return fam.eval_orthonormal(np.clip(np.asarray(x, dtype=float), -1.0, 1.0))[j]

        grid = np.linspace(-1.0, 1.0, 20001)
        y = fn(grid)
        lip = float(np.max(np.abs(np.diff(y)) / np.diff(grid))) * 1.01 if j else 0.0
        prof = Profile(spec, fn, lip, float(y.min()), float(y.max()), 0.0, j)
    else:
        raise DomainError(f"unknown profile {name!r}")
    if L is not None:
        prof = Profile(prof.name, prof.fn, float(L), prof.lo, prof.hi, prof.omega, prof.degree)
    return prof


def _tabulated(path, L):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise DomainError(f"cannot read profile table {path!r}: {exc}") from exc
    try:
        data = np.array([[float(a), float(b)] for a, b, *_ in rows])
    except ValueError:
        data = np.array([[float(a), float(b)] for a, b, *_ in rows[1:]])  # header row
    order = np.argsort(data[:, 0])
    xs, ys = data[order, 0], data[order, 1]
    if len(xs) < 2 or xs[0] > -1 or xs[-1] < 1:
        raise DomainError("a tabulated profile must cover [-1, 1] with at least two points")
    slopes = np.abs(np.diff(ys) / np.diff(xs))
    lip = float(L) if L is not None else float(slopes.max())
    return Profile("@" + path, lambda x: np.interp(np.asarray(x, dtype=float), xs, ys),
                   lip, float(ys.min()), float(ys.max()))
