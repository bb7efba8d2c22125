"""``ulamc`` command line.

Exit codes: 0 success, 1 numerical failure (or a failed stability trial),
2 invalid operator (root on the imaginary axis, repeated roots, closed form
not applicable), 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import __version__, _backend
from .constant import DEFAULT_RTOL, best_constant, closed_form
from .exceptions import NotApplicable, NumericalError, ValidationError
from .kernel import build_kernel, kernel_table
from .poly import (DEFAULT_AXIS_TOL, DEFAULT_SEP_TOL, OperatorSpec, RootSet,
                   coeffs_from_roots, parse_complex_list, roots_from_coeffs)
from .quadrature import DEFAULT_TOL
from .verify import GridSpec, run_stability_trials, sharpness_lower_bound

SCHEMA_VERSION = 1
EXIT_OK, EXIT_NUMERICAL, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _operator_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--coeffs", help="a_1,...,a_n as complex literals, e.g. 3,2")
    src.add_argument("--roots", help="characteristic roots, e.g. -1+2i,-1-2i")
    p.add_argument("--sep-tol", type=float, default=DEFAULT_SEP_TOL,
                   help="relative separation below which roots count as repeated")
    p.add_argument("--axis-tol", type=float, default=DEFAULT_AXIS_TOL,
                   help="|Re r| at or below which a root is on the imaginary axis")
    p.add_argument("--json", action="store_true", help="emit the JSON envelope")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ulamc", description="Best Ulam constants of linear ODE operators")
    parser.add_argument("--version", action="version", version=f"ulamc {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("constant", help="best Ulam constant K_D")
    _operator_args(p)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--rtol", type=float, default=DEFAULT_RTOL)
    p.add_argument("--method", choices=("auto", "quadrature", "closed-form"), default="auto")
    p.add_argument("--cross-check", action="store_true",
                   help="also run quadrature when a closed form applies")

    p = sub.add_parser("closed-form", help="closed-form K_D only")
    _operator_args(p)

    p = sub.add_parser("kernel", help="CSV samples of |h| for plotting")
    _operator_args(p)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--xmax", type=float, default=None,
                   help="right end of the sample range (default 10/rho_min)")

    p = sub.add_parser("verify", help="sharpness and stability checks")
    vsub = p.add_subparsers(dest="check", parser_class=_Parser)
    s = vsub.add_parser("sharpness", help="extremal-perturbation lower bound")
    _operator_args(s)
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s = vsub.add_parser("stability", help="random-forcing stability trials")
    _operator_args(s)
    s.add_argument("--epsilon", type=float, default=1.0)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--points", type=int, default=2001)
    s.add_argument("--half-width", type=float, default=None)
    s.add_argument("--family", choices=("fourier", "constant"), default="fourier")
    return parser


def _rootset(args) -> tuple[RootSet, dict]:
    try:
        if args.coeffs is not None:
            coeffs = parse_complex_list(args.coeffs)
            echo = {"coeffs": [_cplx(c) for c in coeffs]}
            rs = roots_from_coeffs(OperatorSpec.from_coeffs(coeffs), args.sep_tol, args.axis_tol)
        else:
            roots = parse_complex_list(args.roots)
            echo = {"roots": [_cplx(r) for r in roots]}
            rs = RootSet.from_roots(roots, args.sep_tol, args.axis_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return rs, echo


def _warnings(rs: RootSet, K: float | None = None) -> list[str]:
    out = []
    if rs.rho_min < 1e-6 * rs.scale():
        out.append(f"root within {rs.rho_min:.3g} of the imaginary axis; "
                   "K_D grows like 1/|Re r| there")
    if K:
        kf = build_kernel(rs)
        crude = sum(g.coeff_sum / g.decay for g in kf.groups())
        if crude > 1e8 * K:
            out.append(f"kernel terms cancel by a factor {crude / K:.2e}; "
                       "expect reduced relative accuracy")
    return out


def _meta(rs: RootSet) -> dict:
    # axis_tol is a numerical choice, not part of the mathematics: echo it
    return {"sep_tol": rs.sep_tol, "axis_tol": rs.axis_tol,
            "coeffs": [_cplx(c) for c in coeffs_from_roots(rs.roots).coeffs]}


def _constant_payload(res) -> dict:
    return {
        "value": res.value,
        "route": res.route,
        "abs_error_bound": res.abs_error_bound,
        "upper_bound_miura": res.upper_bound_miura,
        "roots": [_cplx(r) for r in res.roots],
        "classification": str(res.classification),
        "truncation_T": res.truncation_T,
        "cross_check": res.cross_check,
    }


def _emit(out, args, command, echo, result, warnings, text_lines):
    if args.json:
        env = {"schema_version": SCHEMA_VERSION, "command": command, "version": __version__,
               "input_echo": echo, "result": result, "warnings": warnings}
        out.write(json.dumps(env, indent=2) + "\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


def _cmd_constant(args, out, err) -> int:
    rs, echo = _rootset(args)
    res = best_constant(rs, args.tol, rtol=args.rtol, method=args.method,
                        cross_check=args.cross_check)
    warnings = _warnings(rs, res.value)
    payload = _constant_payload(res)
    payload.update({"metadata": _meta(rs), "backend": _backend.core.NAME})
    lines = [f"value: {res.value!r}", f"route: {res.route}",
             f"abs_error_bound: {res.abs_error_bound:.3e}",
             f"upper_bound_miura: {res.upper_bound_miura!r}",
             f"classification: {res.classification}"]
    if res.cross_check:
        lines.append(f"cross-check quadrature: {res.cross_check['quadrature_value']!r} "
                     f"(agrees: {res.cross_check['agrees']})")
    _emit(out, args, "constant", echo, payload, warnings, lines)
    return EXIT_OK


def _cmd_closed_form(args, out, err) -> int:
    rs, echo = _rootset(args)
    value, route = closed_form(rs)
    payload = {"value": value, "route": route, "roots": [_cplx(r) for r in rs.roots],
               "classification": str(rs.classification)}
    _emit(out, args, "closed-form", echo, payload, _warnings(rs),
          [f"value: {value!r}", f"route: {route}"])
    return EXIT_OK


def _cmd_kernel(args, out, err) -> int:
    rs, _ = _rootset(args)
    xmax = args.xmax if args.xmax is not None else 10.0 / rs.rho_min
    try:
        out.write(kernel_table(build_kernel(rs), args.samples, xmax))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK


def _cmd_sharpness(args, out, err) -> int:
    rs, echo = _rootset(args)
    if not args.theta > 0:
        raise UsageError("--theta must be positive")
    rep = sharpness_lower_bound(rs, args.theta, args.tol)
    payload = asdict(rep)
    payload["roots"] = [_cplx(r) for r in rs.roots]
    payload["classification"] = str(rs.classification)
    payload["metadata"] = _meta(rs)
    lines = [f"K_D: {rep.K_D!r}", f"lower_bound: {rep.lower_bound!r}",
             f"gap: {rep.gap:.3e}", f"gap_bound: {rep.gap_bound:.3e}"]
    if rep.patch_contribution_bound:
        lines.append(f"patch_contribution_bound: {rep.patch_contribution_bound:.3e}")
    _emit(out, args, "verify sharpness", echo, payload, _warnings(rs), lines)
    return EXIT_OK


def _cmd_stability(args, out, err) -> int:
    rs, echo = _rootset(args)
    if not args.epsilon > 0 or args.trials < 1 or args.points < 2:
        raise UsageError("--epsilon must be positive, --trials >= 1, --points >= 2")
    K = best_constant(rs)
    trials = run_stability_trials(rs, args.epsilon, args.trials, args.seed,
                                  GridSpec(args.half_width, args.points),
                                  family=args.family, K_D=K.value)
    failed = [i for i, t in enumerate(trials) if not t.passed]
    worst = max(t.deviation_sup / t.bound for t in trials)
    payload = {
        "K_D": K.value, "route": K.route, "epsilon": args.epsilon,
        "seed": args.seed, "worst_ratio": worst, "failed": failed,
        "trials": [
            {**asdict(t), "tilde_constants": [_cplx(c) for c in t.tilde_constants]}
            for t in trials
        ],
        "roots": [_cplx(r) for r in rs.roots],
        "classification": str(rs.classification),
        "metadata": _meta(rs),
    }
    lines = [f"K_D: {K.value!r}", f"trials: {len(trials)}",
             f"worst deviation / (K_D eps): {worst:.6f}",
             f"failed: {len(failed)}"]
    _emit(out, args, "verify stability", echo, payload, _warnings(rs), lines)
    return EXIT_NUMERICAL if failed else EXIT_OK


def _glue_values(argv: list[str]) -> list[str]:
    """``--roots -1,-2`` -> ``--roots=-1,-2`` so argparse keeps leading minus signs."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


_LIST_OPTIONS = ("--roots", "--coeffs")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        if args.command is None or (args.command == "verify" and args.check is None):
            raise UsageError(parser.format_usage().rstrip() + "\nulamc: error: missing command")
        handler = {
            "constant": _cmd_constant,
            "closed-form": _cmd_closed_form,
            "kernel": _cmd_kernel,
        }.get(args.command)
        if handler is None:
            handler = _cmd_sharpness if args.check == "sharpness" else _cmd_stability
        return handler(args, out, err)
    except UsageError as exc:
        msg = str(exc)
        if not msg.startswith("usage:"):
            msg = f"{parser.format_usage()}ulamc: error: {msg}"
        err.write(f"{msg}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        err.write(f"ulamc: invalid operator [{exc.tag}]: {exc}\n")
        return EXIT_INVALID
    except NotApplicable as exc:
        err.write(f"ulamc: closed form not applicable: {exc}\n")
        return EXIT_INVALID
    except NumericalError as exc:
        err.write(f"ulamc: numerical failure: {exc}\n")
        return EXIT_NUMERICAL


def main(argv=None):
    sys.exit(run(argv))
