"""Command-line interface.

    depthsep <expand|bound|build3|verify|separation-report|gap> [options]

Exit codes: 0 success, 1 validation error, 2 verification failure,
3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bounds, constructor
from .errors import ConvergenceError, DomainError, IntegrationError, VerificationError
from .profiles import parse_profile
from .projection import expand
from .quadrature import gauss_rule, node_count
from .relu_net import load_network, save_network, validate_bounds
from .reports import emit, make_report
from .sphere_mc import SphereSampler, inner_product_function, l2_error

EXIT_OK, EXIT_VALIDATION, EXIT_VERIFICATION, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_WIDTH_CAP = 10**6
DEFAULT_PARAM_CAP = 2 * 10**7
DEFAULT_NODE_CAP = 20_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common():
    p = _Parser(add_help=False)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--B", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--profile")
    p.add_argument("--nodes", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def build_parser():
    parser = _Parser(prog="depthsep", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common()]
    sub.add_parser("expand", parents=common, help="Legendre expansion and residual table of a profile")
    b = sub.add_parser("bound", parents=common, help="depth-2 lower bound for a profile")
    b.add_argument("--sweep", action="store_true", help="evaluate every degree 0..n and report the best")
    b3 = sub.add_parser("build3", parents=common, help="build and verify a depth-3 network")
    b3.add_argument("--width-cap", type=int, default=DEFAULT_WIDTH_CAP)
    b3.add_argument("--encoding", choices=("binary", "text"), default="binary")
    v = sub.add_parser("verify", parents=common, help="measure a saved network against a profile")
    v.add_argument("--net", required=True)
    s = sub.add_parser("separation-report", parents=common, help="combined depth-2 / depth-3 report")
    s.add_argument("--width-cap", type=int, default=DEFAULT_WIDTH_CAP)
    s.add_argument("--param-cap", type=int, default=DEFAULT_PARAM_CAP)
    s.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    g = sub.add_parser("gap", parents=common, help="fit a bounded depth-2 network and compare with the floor")
    g.add_argument("--config", required=True)
    return parser


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs " + ", ".join("--" + n for n in missing))


def _default_nodes(prof, N):
    extra = (prof.degree + N + 1) if prof.degree is not None else 64
    return max(node_count(N + 1, prof.omega), extra)


def _expansion(prof, d, N, nodes):
    rule = gauss_rule(d, nodes)
    return expand(prof, d, N, rule)


def cmd_expand(args):
    _require(args, "profile", "d", "n")
    prof = parse_profile(args.profile, args.d, args.L)
    nodes = args.nodes or _default_nodes(prof, args.n)
    e = _expansion(prof, args.d, args.n, nodes)
    config = {"profile": args.profile, "d": args.d, "N": args.n, "nodes": nodes}
    result = {
        "coefficients": e.coefficients,
        "norm_sq": e.norm_sq_estimate,
        "residuals": e.residuals(),
        "exact_degree": 2 * nodes - 1,
    }
    return make_report("expand", config, result), EXIT_OK


def cmd_bound(args):
    _require(args, "profile", "d", "n", "r", "B")
    prof = parse_profile(args.profile, args.d, args.L)
    N = max(args.n, 0)
    nodes = args.nodes or _default_nodes(prof, N)
    e = _expansion(prof, args.d, N, nodes)
    sigma = bounds.relu_sigma_max(args.d, args.B)
    report = bounds.theorem1_bound(args.d, args.n, args.r, args.B, sigma, e.residual(args.n))
    config = {"profile": args.profile, "d": args.d, "n": args.n, "r": args.r, "B": args.B,
              "activation": "relu", "nodes": nodes, "N": N, "sweep": bool(args.sweep)}
    result = {"bound": report.as_dict(), "A_provenance": {"nodes": nodes, "N": N,
                                                          "norm_sq": e.norm_sq_estimate}}
    if args.sweep:
        sweep = [bounds.theorem1_bound(args.d, k, args.r, args.B, sigma, e.residual(k))
                 for k in range(N + 1)]
        best = max(range(len(sweep)), key=lambda k: sweep[k].lower_bound)
        result["sweep"] = [{"n": s.n, "A": s.A, "lower_bound": s.lower_bound} for s in sweep]
        result["argmax_n"] = best
        result["best_lower_bound"] = sweep[best].lower_bound
    if prof.name.startswith("example1") and args.d >= 3:
        t = bounds.example1_threshold(args.d)
        result["example1_threshold_log_e"] = t.log_abs
        result["example1_threshold_log_2"] = t.log2_abs
    return make_report("bound", config, result), EXIT_OK


def _build(prof, d, L, eps, seed, samples):
    if prof.lo < -1.0 - 1e-12 or prof.hi > 1.0 + 1e-12:
        raise DomainError(f"profile range [{prof.lo:.4g}, {prof.hi:.4g}] is not inside [-1, 1]")
    return constructor.build_depth3(prof, L, d, eps, seed=seed, n_check=samples)


def cmd_build3(args):
    _require(args, "profile", "d", "eps", "out")
    prof = parse_profile(args.profile, args.d, args.L)
    L = prof.lipschitz
    samples = args.samples or 10_000
    predicted = constructor.predicted_depth3_width(args.d, L, args.eps)
    config = {"profile": args.profile, "d": args.d, "L": L, "eps": args.eps, "seed": args.seed,
              "samples": samples, "width_cap": args.width_cap, "encoding": args.encoding,
              "out": args.out}
    if predicted > args.width_cap:
        raise DomainError(f"skipped: width > cap ({predicted} > {args.width_cap})")
    built = _build(prof, args.d, L, args.eps, args.seed, samples)
    manifest = built.manifest(args.profile)
    save_network(built.net, args.out, args.encoding)
    manifest_path = args.out + ".manifest.json"
    from ._io import write_atomic
    write_atomic(manifest_path, json.dumps(manifest, indent=2) + "\n")
    result = dict(manifest, network_path=args.out, manifest_path=manifest_path)
    return make_report("build3", config, result), EXIT_OK


def cmd_verify(args):
    _require(args, "profile")
    net = load_network(args.net)
    d = net.d
    if args.d is not None and args.d != d:
        raise DomainError(f"network is for d={d}, not d={args.d}")
    prof = parse_profile(args.profile, d, args.L)
    samples = args.samples or 10_000
    F = inner_product_function(prof)
    X, Xp = SphereSampler(d, args.seed).pairs(samples)
    sup = float(np.max(np.abs(net(X, Xp) - F(X, Xp))))
    est = l2_error(net, F, d, samples, args.seed)
    check = validate_bounds(net)
    config = {"net": args.net, "profile": args.profile, "d": d, "samples": samples,
              "seed": args.seed, "eps": args.eps}
    result = {
        "sq_error": est.squared.mean,
        "sq_error_se": est.squared.std_error,
        "l2_error": est.norm,
        "l2_error_se": est.norm_std_error,
        "sup_error": sup,
        "width": check.r,
        "B_actual": check.B_actual,
        "B_declared": net.declared_bound,
        "bounds_ok": check.ok,
        "depth": net.depth,
    }
    code = EXIT_OK if check.ok else EXIT_VERIFICATION
    if args.eps is not None:
        result["sup_within_eps"] = sup <= args.eps
        if sup > args.eps:
            code = EXIT_VERIFICATION
    return make_report("verify", config, result), code


def _log_fields(prefix, value):
    return {f"{prefix}_log_e": value.log_abs, f"{prefix}_log_2": value.log2_abs,
            f"{prefix}_sign": value.sign, prefix: value.to_float()}


def cmd_separation_report(args):
    _require(args, "d")
    d = args.d
    if d < 3:
        raise DomainError("separation-report needs d >= 3")
    eps = args.eps if args.eps is not None else 0.5
    samples = args.samples or 10_000
    n = d * d
    B = 2.0 ** d
    sigma = bounds.relu_sigma_max(d, B)
    floor = bounds.example1_A_floor()
    target = bounds.example1_target_error()
    m_equiv = d ** 2.5  # sin(pi d^3 x) = sin(pi sqrt(d) m x) with m = d^{5/2}
    lemma = bounds.sine_lemma_bound(m_equiv, n - 1)
    depth2 = {
        "profile": "sin(pi d^3 x)",
        "n": n,
        "B": B,
        "sigma_max": sigma,
        "A_floor": floor,
        "target_error": target,
        "sine_lemma_sq_floor": lemma,
        "sine_lemma_implies_A_floor": math.sqrt(lemma) >= floor,
    }
    depth2.update(_log_fields("threshold", bounds.example1_threshold(d)))
    depth2.update(_log_fields("width_threshold_solved",
                              bounds.width_threshold(d, n, B, sigma, floor, target)))
    omega = math.pi * d ** 3
    nodes = max(node_count(n + 1, omega), 2 * n + 2)
    if nodes <= args.node_cap:
        prof = parse_profile("example1", d)
        e = _expansion(prof, d, n, nodes)
        A = e.residual(n)
        depth2.update({"A_numeric": A, "A_numeric_nodes": nodes,
                       "A_numeric_above_floor": A >= floor})
    else:
        depth2["A_numeric"] = f"skipped: nodes > cap ({nodes} > {args.node_cap})"
    L = math.pi * d ** 3
    predicted = constructor.predicted_depth3_width(d, L, eps)
    depth3 = {
        "L": L,
        "eps": eps,
        "width_budget": 16 * math.pi * d ** 5 / eps,
        "weight_budget": 2 * math.pi * d ** 3,
        "predicted_width": predicted,
    }
    outer_units = 2 * math.ceil((1 + eps / (2 * L)) * L / eps)
    params = predicted * 2 * d + predicted * outer_units
    if predicted > args.width_cap:
        depth3["construction"] = f"skipped: width > cap ({predicted} > {args.width_cap})"
    elif params > args.param_cap:
        depth3["construction"] = f"skipped: parameters > cap ({params} > {args.param_cap})"
    else:
        built = _build(parse_profile("example1", d), d, L, eps, args.seed, samples)
        depth3["construction"] = built.manifest("example1")
    config = {"d": d, "eps": eps, "seed": args.seed, "samples": samples,
              "width_cap": args.width_cap, "param_cap": args.param_cap, "node_cap": args.node_cap}
    return make_report("separation-report", config, {"depth2": depth2, "depth3": depth3}), EXIT_OK


def cmd_gap(args):
    from .gap_demo import FitConfig, gap_report

    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {args.config!r}: {exc}") from exc
    raw = dict(raw)
    profile = raw.pop("profile")
    n = int(raw.pop("n"))
    samples = int(raw.pop("samples", 200_000))
    cfg = FitConfig(**raw)
    prof = parse_profile(profile, cfg.d)
    result = gap_report(cfg, prof, n, n_samples=samples)
    config = dict(result.pop("config"), profile=profile, n=n, samples=samples)
    code = EXIT_OK if result["sound"] else EXIT_VERIFICATION
    return make_report("gap", config, result), code


COMMANDS = {
    "expand": cmd_expand,
    "bound": cmd_bound,
    "build3": cmd_build3,
    "verify": cmd_verify,
    "separation-report": cmd_separation_report,
    "gap": cmd_gap,
}


def run(argv=None, stream=None):
    """Parse ``argv``, run the command and return ``(exit_code, report_or_None)``."""
    stream = stream or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        report, code = COMMANDS[args.command](args)
        out = None if args.command == "build3" else args.out
        emit(report, args.format, out=out, stream=stream)
        return code, report
    except UsageError as exc:
        print(f"depthsep: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION, None
    except (DomainError, ValueError, IndexError, OSError) as exc:
        print(f"depthsep: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION, None
    except VerificationError as exc:
        print(f"depthsep: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION, None
    except (IntegrationError, ConvergenceError, FloatingPointError, ArithmeticError) as exc:
        print(f"depthsep: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC, None


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    raise SystemExit(main())
