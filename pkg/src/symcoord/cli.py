"""Command-line entry point: ``symcoord <command> [options]``."""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import random
import sys
from contextlib import redirect_stderr
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .asymptotics import decay_table, derivative_constant, format_decay_table
from .combinatorics import Partition
from .diagonal import (apply_Dd_at_point, detect_pattern, diag_combo, diag_combo_via_bell,
                       diag_combo_via_recursion)
from .divided_difference import NonSymmetricInputError, apply_Dd
from .exact_algebra import SparsePoly, format_poly, parse_poly
from .numeric import (NumericPolicy, generic_Dd_value, jacobian_check, limit_check,
                      random_distinct_point)
from .oracle import FunctionOracle, PolynomialOracle, TraceOracle
from .symmetric_basis import NormalizationTag, build_u, convert_basis, u_poly

COMMANDS = ("expand-u", "check-duality", "apply-D", "diag-combo", "eval-D", "jacobian-check",
            "limit-check", "decay-table", "derivative-constant", "selftest")


@dataclass
class CommandResult:
    status: str  # "pass", "fail" or "report"
    payload: str
    diagnostics: list[str] = field(default_factory=list)
    exit_code: int | None = None

    def __post_init__(self):
        if self.exit_code is None:
            self.exit_code = 1 if self.status == "fail" else 0


class UsageError(Exception):
    pass


def _q(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=str) + "\n"


def _parse_number(tok: str):
    tok = tok.strip()
    if any(ch in tok for ch in ".eE") and "/" not in tok:
        return float(tok)
    return Fraction(tok)


def _parse_point(text: str) -> list:
    return [_parse_number(t) for t in text.split(",") if t.strip()]


def _parse_indices(text: str) -> list[int]:
    return sorted({int(t) for t in text.split(",") if t.strip()})


def _read_poly(path: str) -> SparsePoly:
    with open(path) as fh:
        return parse_poly(fh.read())


def _load_phi(spec: str | None, n: int, default: FunctionOracle) -> FunctionOracle:
    """``trace:c0,c1,...`` for a trace function, otherwise a polynomial file."""
    if spec is None:
        return default
    if spec.startswith("trace:"):
        return TraceOracle(n, [Fraction(c) for c in spec[6:].split(",")])
    poly = _read_poly(spec)
    if poly.nvars != n:
        raise UsageError(f"polynomial has {poly.nvars} variables, expected {n}")
    return PolynomialOracle(poly)


def _tag(args) -> NormalizationTag:
    return NormalizationTag.parse(args.normalization)


# ---------------------------------------------------------------------------
# commands


def cmd_expand_u(args) -> CommandResult:
    if not 1 <= args.r <= args.N:
        raise UsageError(f"need 1 <= r <= N, got r={args.r}, N={args.N}")
    expr, poly = build_u(args.r, args.N, _tag(args))
    if args.basis == "x":
        if args.format == "json":
            return CommandResult("pass", _json({" ".join(map(str, e)): _q(c) for e, c in poly.sorted_terms()}))
        return CommandResult("pass", format_poly(poly))
    if args.basis != "etilde":
        expr = convert_basis(expr, args.basis)
    if args.format == "json":
        return CommandResult("pass", _json({str(k): _q(v) for k, v in expr.sorted_items()}))
    return CommandResult("pass", expr.to_text())


def cmd_check_duality(args) -> CommandResult:
    n = args.N
    tag = _tag(args)
    matrix, failures = [], []
    for d in range(1, n + 1):
        row = []
        for r in range(1, n + 1):
            # the dual operator of a rescaled coordinate is rescaled by the reciprocal
            img = apply_Dd(d, build_u(r, n, tag)[1], args.jobs).scale(1 / tag.scale(d, n))
            value = img.constant_value() if img.is_constant() else None
            row.append(None if value is None else _q(value))
            if value != (1 if d == r else 0):
                failures.append({"d": d, "r": r, "residual": str(img - (1 if d == r else 0))})
        matrix.append(row)
    ok = not failures
    body = {"N": n, "normalization": tag.value, "matrix": matrix, "pass": ok, "failures": failures}
    return CommandResult("pass" if ok else "fail", _json(body))


def cmd_apply_D(args) -> CommandResult:
    poly = _read_poly(args.poly)
    if poly.nvars != args.N:
        raise UsageError(f"polynomial has {poly.nvars} variables, expected {args.N}")
    if not 1 <= args.d <= args.N:
        raise UsageError(f"need 1 <= d <= N, got d={args.d}")
    tag = _tag(args)
    try:
        img = apply_Dd(args.d, poly, args.jobs).scale(1 / tag.scale(args.d, args.N))
    except NonSymmetricInputError as exc:
        return CommandResult("fail", "", [f"input is not symmetric: {exc}"])
    return CommandResult("pass", format_poly(img))


def cmd_diag_combo(args) -> CommandResult:
    if args.g < 1:
        raise UsageError("g must be positive")
    build = {"formula": diag_combo, "bell": diag_combo_via_bell, "recursion": diag_combo_via_recursion}[args.route]
    combo = build(args.g)
    if args.format == "tsv":
        lines = ["sigma\tcoefficient"] + [f"{k}\t{v}" for k, v in combo.as_json().items()]
        return CommandResult("pass", "\n".join(lines) + "\n")
    return CommandResult("pass", _json({"g": args.g, "route": args.route, "terms": combo.as_json()}))


def cmd_eval_D(args) -> CommandResult:
    point = _parse_point(args.point)
    n = args.N
    if len(point) != n:
        raise UsageError(f"point has {len(point)} coordinates, expected {n}")
    if not 1 <= args.d <= n:
        raise UsageError(f"need 1 <= d <= N, got d={args.d}")
    if args.trace_poly is not None:
        phi: FunctionOracle = TraceOracle(n, [Fraction(c) for c in args.trace_poly.split(",")])
    elif args.poly is not None:
        phi = _load_phi(args.poly, n, None)
    else:
        raise UsageError("one of --trace-poly or --poly is required")
    pattern = detect_pattern(point, rel_tol=args.group_tol)
    if len(pattern.blocks) == n:
        branch = "generic"
        value = generic_Dd_value(args.d, phi, pattern.point())
    else:
        branch = "total-diagonal" if len(pattern.blocks) == 1 else "all-points"
        value = apply_Dd_at_point(args.d, pattern, phi)
    value = value / NormalizationTag.parse(args.normalization).scale(args.d, n)
    shown = _q(value) if isinstance(value, Fraction) else float(value)
    return CommandResult("pass", _json({"N": n, "d": args.d, "pattern": pattern.describe(),
                                        "branch": branch, "value": shown}))


def cmd_jacobian_check(args) -> CommandResult:
    n = args.N
    rng = random.Random(args.seed)
    e1 = SparsePoly.var(n, 0)
    for i in range(1, n):
        e1 = e1 + SparsePoly.var(n, i)
    phi = _load_phi(args.phi, n, PolynomialOracle(e1 * e1 * e1))
    reports = []
    for k in range(args.count):
        rep = jacobian_check(n, phi, random_distinct_point(n, rng), NumericPolicy(jacobian_tol=args.tol))
        body = rep.as_json()
        body.update(case=f"N={n} point#{k}", value_formula=rep.direct, value_reference=rep.u_gradient)
        reports.append(body)
    ok = all(r["pass"] for r in reports)
    return CommandResult("pass" if ok else "fail", _json({"seed": args.seed, "reports": reports, "pass": ok}))


def cmd_limit_check(args) -> CommandResult:
    n = args.N
    I = _parse_indices(args.I) if args.I else list(range(n))
    J = _parse_indices(args.J)
    if not J or not set(J) <= set(I) or I[-1] >= n:
        raise UsageError("J must be a nonempty subset of I inside 0..N-1")
    point = _parse_point(args.point) if args.point else [Fraction(2 * i + 1) for i in range(n)]
    if len(point) != n:
        raise UsageError(f"point has {len(point)} coordinates, expected {n}")
    phi = _load_phi(args.phi, n, TraceOracle(n, [0] * (len(I) + 1) + [1]))
    rep = limit_check(I, J, phi, point)
    return CommandResult("pass" if rep.passed else "fail", _json(rep.as_json()))


def cmd_decay_table(args) -> CommandResult:
    if not 1 <= args.rmax <= 8:
        raise UsageError("rmax must be between 1 and 8")
    rows = decay_table(args.rmax)
    diagnostics = [f"conjectured order not reached: r={r.r} sigma={r.sigma}" for r in rows if r.status == "VIOLATES"]
    if args.format == "json":
        body = [{"r": r.r, "sigma": str(r.sigma), "decay_order": r.decay_order,
                 "conjectured_order": r.conjectured_order, "theorem_bound": r.theorem_bound,
                 "status": r.status} for r in rows]
        return CommandResult("report", _json(body), diagnostics)
    return CommandResult("report", format_decay_table(rows), diagnostics)


def cmd_derivative_constant(args) -> CommandResult:
    sigma = Partition.parse(args.sigma)
    if sigma.weight != args.r:
        raise UsageError(f"sigma {sigma} is not a partition of r={args.r}")
    if args.r > 8:
        raise UsageError("r must be at most 8")
    value = derivative_constant(args.r, sigma).value
    num, den = value.coefficient_lists()
    if args.format == "json":
        order = value.decay_order()
        return CommandResult("pass", _json({"r": args.r, "sigma": str(sigma), "num": num or [0], "den": den,
                                            "decay_order": None if math.isinf(order) else order}))
    return CommandResult("pass", value.to_text() + "\n")


def cmd_selftest(args) -> CommandResult:
    from .acceptance import run_all

    results = run_all(echo=None)
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    return CommandResult("pass" if ok else "fail", "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--normalization", choices=["paper", "hat", "signed-power", "taylor"],
                        default=argparse.SUPPRESS, help="scaling of the coordinates (default paper)")
    common.add_argument("--format", choices=["text", "json", "tsv"], default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="random seed (SYMCOORD_SEED overrides)")

    parser = argparse.ArgumentParser(prog="symcoord", parents=[common],
                                     description="Symmetric coordinates and their dual operators.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("expand-u", parents=[common], help="print the coordinate u_r")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--basis", choices=["etilde", "e", "monomial", "power", "x"], default="etilde")
    p.set_defaults(func=cmd_expand_u)

    p = sub.add_parser("check-duality", parents=[common], help="matrix of D_d u_r")
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_check_duality)

    p = sub.add_parser("apply-D", parents=[common], help="apply D_d to a polynomial file")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_apply_D)

    p = sub.add_parser("diag-combo", parents=[common], help="coefficients of the diagonal combination")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--route", choices=["formula", "bell", "recursion"], default="formula")
    p.set_defaults(func=cmd_diag_combo)

    p = sub.add_parser("eval-D", parents=[common], help="D_d at a point with coincidences")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--point", required=True, help="comma-separated coordinates (p/q or decimals)")
    p.add_argument("--trace-poly", help="coefficients c0,c1,... of f for phi = sum f(x_i)")
    p.add_argument("--poly", help="polynomial file")
    p.add_argument("--group-tol", type=float, default=1e-9, help="relative tolerance for grouping floats")
    p.set_defaults(func=cmd_eval_D)

    p = sub.add_parser("jacobian-check", parents=[common], help="chain-rule duality at random points")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--phi", help="polynomial file or trace:c0,c1,... (default e_1^3)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_jacobian_check)

    p = sub.add_parser("limit-check", parents=[common], help="coincident formula vs limit of generic D_I")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--J", required=True, help="comma-separated 0-based indices that coincide")
    p.add_argument("--I", help="comma-separated 0-based indices (default all)")
    p.add_argument("--point", help="base point; J coordinates are set to the first J value")
    p.add_argument("--phi", help="polynomial file or trace:c0,c1,...")
    p.set_defaults(func=cmd_limit_check)

    p = sub.add_parser("decay-table", parents=[common], help="decay orders of derivative constants")
    p.add_argument("--rmax", type=int, required=True)
    p.set_defaults(func=cmd_decay_table)

    p = sub.add_parser("derivative-constant", parents=[common], help="derivative constant as a function of N")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--sigma", required=True, help='pattern such as "[2,1]"')
    p.set_defaults(func=cmd_derivative_constant)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.set_defaults(func=cmd_selftest)
    return parser


_DEFAULTS = {"normalization": "paper", "format": "text", "jobs": 1, "seed": 0}


def run(argv: Sequence[str] | None = None) -> CommandResult:
    parser = build_parser()
    err = io.StringIO()
    try:
        with redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return CommandResult("fail" if code else "pass", "", [err.getvalue().rstrip()] if err.getvalue() else [], code)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    env_seed = os.environ.get("SYMCOORD_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            return CommandResult("fail", "", [f"SYMCOORD_SEED must be an integer, got {env_seed!r}"], 2)
    if args.jobs < 1:
        return CommandResult("fail", "", ["--jobs must be at least 1"], 2)
    try:
        return args.func(args)
    except UsageError as exc:
        return CommandResult("fail", "", [f"usage error: {exc}"], 2)
    except (OSError, ValueError) as exc:
        return CommandResult("fail", "", [f"{type(exc).__name__}: {exc}"], 1)
    except (ArithmeticError, AssertionError) as exc:
        return CommandResult("fail", "", [f"computation failed: {type(exc).__name__}: {exc}"], 1)


def main(argv: Sequence[str] | None = None) -> int:
    result = run(argv)
    if result.payload:
        sys.stdout.write(result.payload)
    for line in result.diagnostics:
        print(line, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
