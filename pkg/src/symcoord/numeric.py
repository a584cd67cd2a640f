"""Floating-point checks: finite differences, the Jacobian chain rule and limits of generic formulas."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .diagonal import (CoincidencePattern, apply_DI_general, apply_DI_one_block, apply_Dd_at_point,
                       detect_pattern, generic_DI_value)
from .divided_difference import apply_DI, apply_Dd
from .oracle import BlackBoxOracle, FunctionOracle, PolynomialOracle, TraceOracle
from .symmetric_basis import u_poly


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances and step schedules for the numeric checks.

    The limit schedule is ``limit_h0 * limit_ratio**k`` for ``k < limit_steps``; the
    generic values along it are polynomial in the step, so the extrapolation assumes an
    expansion in integer powers. ``richardson_order`` is the leading error order of the
    central finite-difference stencils.
    """

    fd_step: float = 1e-6
    limit_h0: float = 0.1
    limit_ratio: float = 0.5
    limit_steps: int = 21
    richardson_order: int = 2
    tol_rel: float = 1e-7
    tol_rel_high: float = 1e-5
    jacobian_tol: float = 1e-9
    group_rel_tol: float = 1e-9

    def __post_init__(self):
        for name in ("fd_step", "limit_h0", "tol_rel", "tol_rel_high", "jacobian_tol", "group_rel_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.limit_ratio < 1:
            raise ValueError("limit_ratio must lie in (0, 1) so the schedule decreases")
        if self.limit_steps < 2 or self.richardson_order < 1:
            raise ValueError("need at least two limit steps and a positive Richardson order")

    def schedule(self) -> list[float]:
        return [self.limit_h0 * self.limit_ratio ** k for k in range(self.limit_steps)]

    def tolerance_for(self, order: int) -> float:
        return self.tol_rel if order < 3 else self.tol_rel_high


DEFAULT_POLICY = NumericPolicy()


def _rel_err(value, reference, scale: float | None = None) -> float:
    err = abs(float(value) - float(reference))
    denom = max(abs(float(reference)), scale or 0.0)
    if denom == 0:
        return err
    return err / denom


# ---------------------------------------------------------------------------
# finite differences


def _central(func: Callable, point: list[float], counts: Sequence[int], steps: Sequence[float]) -> float:
    axes = [i for i, k in enumerate(counts) if k]
    stencils = []
    for i in axes:
        k = counts[i]
        stencils.append([((k / 2 - j) * steps[i], (-1) ** j * math.comb(k, j)) for j in range(k + 1)])
    total = 0.0
    for combo in itertools.product(*stencils):
        x = list(point)
        w = 1.0
        for i, (off, c) in zip(axes, combo):
            x[i] += off
            w *= c
        total += w * func(x)
    for i in axes:
        total /= steps[i] ** counts[i]
    return total


def fd_partial(func: Callable, counts: Sequence[int], point: Sequence[float], fd_step: float = 1e-6) -> float:
    """Mixed partial by tensor-product central differences plus one Richardson step.

    For total order ``K`` every differentiated variable gets the step ``fd_step**(3/(K+4))``
    times ``max(1, |x|)``.
    """
    point = [float(v) for v in point]
    if not any(counts):
        return float(func(point))
    if sum(counts) > 4:
        raise ValueError("finite differences are limited to total order 4")
    base = fd_step ** (3 / (sum(counts) + 4))
    steps = [base * max(1.0, abs(x)) if k else 0.0 for k, x in zip(counts, point)]
    coarse = _central(func, point, counts, steps)
    fine = _central(func, point, counts, [s / 2 for s in steps])
    return (4 * fine - coarse) / 3


@dataclass
class FDResult:
    order: int
    point: list[float]
    values: dict[tuple[int, ...], float]
    exact: dict[tuple[int, ...], Fraction] | None = None

    def max_rel_err(self) -> float:
        if self.exact is None:
            return math.nan
        scale = max((abs(float(v)) for v in self.exact.values()), default=0.0)
        return max((_rel_err(self.values[k], self.exact[k], scale) for k in self.values), default=0.0)


def fd_gradient(phi: FunctionOracle, point: Sequence, order: int = 1, policy: NumericPolicy = DEFAULT_POLICY) -> FDResult:
    """All partials of total ``order`` by finite differences; the exact values too for exact oracles."""
    if not 0 <= order <= 4:
        raise ValueError("order must be between 0 and 4")
    n = phi.arity
    keys = [c for c in itertools.product(range(order + 1), repeat=n) if sum(c) == order]
    fpoint = [float(v) for v in point]
    values = {k: fd_partial(lambda x: float(phi(x)), k, fpoint, policy.fd_step) for k in keys}
    exact = None
    if phi.exact:
        qpoint = [Fraction(v) for v in point]
        exact = {k: Fraction(phi.partial(k, qpoint)) for k in keys}
    return FDResult(order, fpoint, values, exact)


# ---------------------------------------------------------------------------
# chain-rule duality


class SingularJacobianError(ValueError):
    pass


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(A)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularJacobianError("Jacobian is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] * inv
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


@dataclass
class JacobianReport:
    N: int
    point: list
    u_gradient: list[float]
    direct: list[float]
    abs_err: float
    rel_err: float
    exact: bool
    exact_match: bool | None
    passed: bool
    diagnostics: list[str] = field(default_factory=list)

    def as_json(self) -> dict:
        out = asdict(self)
        out["point"] = [str(v) for v in self.point]
        out["pass"] = out.pop("passed")
        return out


def generic_Dd_value(d: int, phi: FunctionOracle, point: Sequence):
    """``d! * sum_{|I|=d} D_I phi`` by the generic formula (distinct coordinates)."""
    total = 0.0 if not all(isinstance(v, (int, Fraction)) for v in point) else Fraction(0)
    for I in itertools.combinations(range(phi.arity), d):
        total += generic_DI_value(I, phi, point)
    return math.factorial(d) * total


def jacobian_check(N: int, phi: FunctionOracle, point: Sequence, policy: NumericPolicy = DEFAULT_POLICY) -> JacobianReport:
    """Solve ``J^T g_u = grad_x phi`` for the u-gradient and compare with ``D_d phi``.

    ``J[r][i] = d_i u_r``. The float solve uses column equilibration; for exact oracles the
    same system is solved in rational arithmetic and compared with the exact ``D_d phi``.
    """
    if phi.arity != N or len(point) != N:
        raise ValueError("oracle arity and point must have N entries")
    if len(set(point)) != N:
        raise SingularJacobianError("coordinates must be pairwise distinct")
    us = [u_poly(r, N) for r in range(1, N + 1)]
    qpoint = [Fraction(v) for v in point]
    fpoint = [float(v) for v in point]
    Jq = [[u.partial(i).evaluate(qpoint) for i in range(N)] for u in us]
    A = np.array([[float(Jq[r][i]) for r in range(N)] for i in range(N)])  # A = J^T
    g = np.array([float(phi.partial(_unit(N, i), fpoint)) for i in range(N)])
    scale = np.max(np.abs(A), axis=0)
    scale[scale == 0] = 1.0
    try:
        v = np.linalg.solve(A / scale, g) / scale
    except np.linalg.LinAlgError as exc:
        raise SingularJacobianError(str(exc)) from exc
    diagnostics = [f"cond(J^T scaled)={np.linalg.cond(A / scale):.3e}"]
    poly = phi.as_poly() if phi.exact else None
    if poly is not None:
        direct_q = [apply_Dd(d, poly).evaluate(qpoint) for d in range(1, N + 1)]
        direct = [float(x) for x in direct_q]
        gq = [Fraction(phi.partial(_unit(N, i), qpoint)) for i in range(N)]
        shadow = _solve_exact([[Jq[r][i] for r in range(N)] for i in range(N)], gq)
        exact_match = shadow == direct_q
        if not exact_match:
            diagnostics.append("exact shadow solve disagrees with exact D_d phi")
    else:
        direct = [float(generic_Dd_value(d, phi, fpoint)) for d in range(1, N + 1)]
        exact_match = None
    ref_scale = max(abs(x) for x in direct) if direct else 0.0
    abs_err = max(abs(a - b) for a, b in zip(v, direct))
    rel_err = max(_rel_err(a, b, ref_scale) for a, b in zip(v, direct))
    passed = rel_err < policy.jacobian_tol and exact_match is not False
    return JacobianReport(N, list(point), [float(x) for x in v], direct, abs_err, rel_err,
                          poly is not None, exact_match, passed, diagnostics)


def _unit(n: int, i: int) -> list[int]:
    c = [0] * n
    c[i] = 1
    return c


def random_distinct_point(N: int, rng: random.Random) -> list[Fraction]:
    """Distinct integers from 1..97 (as exact rationals)."""
    return [Fraction(v) for v in rng.sample(range(1, 98), N)]


# ---------------------------------------------------------------------------
# limits of generic formulas


@dataclass
class Extrapolation:
    value: float
    error_estimate: float
    levels_used: int
    raw: list[float]


def richardson_limit(values: Sequence[float], ratio: float = 0.5) -> Extrapolation:
    """Extrapolate ``values[k] = F(h0 * ratio**k)`` to ``h -> 0`` assuming integer powers of ``h``.

    Stops at the diagonal entry whose change from the previous one is smallest, so that
    roundoff at tiny steps does not take over.
    """
    if len(values) < 2:
        raise ValueError("need at least two samples")
    table: list[list[float]] = []
    best = (math.inf, float(values[0]), 0)
    prev_diag = None
    for k, v in enumerate(values):
        row = [float(v)]
        for j in range(1, k + 1):
            f = ratio ** -j
            row.append(row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / (f - 1))
        table.append(row)
        diag = row[-1]
        if prev_diag is not None:
            change = abs(diag - prev_diag)
            if change < best[0]:
                best = (change, diag, k)
            elif change > 1e3 * max(best[0], 1e-300) and k > best[2] + 2:
                break
        prev_diag = diag
    return Extrapolation(best[1], best[0], best[2] + 1, [float(v) for v in values])


def observed_order(raw: Sequence[float], limit: float, ratio: float = 0.5) -> float:
    """Estimated convergence order of ``raw`` toward ``limit``; ``inf`` when already exact."""
    errs = [abs(v - limit) for v in raw]
    scale = max(abs(limit), 1.0)
    orders = []
    for a, b in zip(errs, errs[1:]):
        if a <= 1e-11 * scale or b <= 1e-11 * scale:
            break
        orders.append(math.log(a / b) / math.log(1 / ratio))
    if not orders:
        return math.inf
    orders.sort()
    return orders[len(orders) // 2]


def _offsets(n: int) -> list[float]:
    # distinct, irregular offsets so no accidental symmetric cancellation
    base = [0.0, 1.0, -0.7, 1.9, -1.6, 2.7, -2.3, 3.4]
    return base[:n]


def _perturbed(point: Sequence, blocks: Sequence[Sequence[int]], eps: float) -> list[float]:
    x = [float(v) for v in point]
    for b in blocks:
        if len(b) > 1:
            for off, i in zip(_offsets(len(b)), sorted(b)):
                x[i] += eps * off
    return x


@dataclass
class LimitReport:
    case: str
    pattern: dict
    branch: str
    value_formula: float
    value_reference: float
    value_exact: str | None
    abs_err: float
    rel_err: float
    observed_order: float
    levels_used: int
    tolerance: float
    passed: bool
    diagnostics: list[str] = field(default_factory=list)

    def as_json(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        out["exact"] = self.value_exact is not None
        return out


def _finish(case, pattern, branch, formula, generic_fn, exact_value, blocks_to_split, point, order, policy):
    raw = [float(generic_fn(_perturbed(point, blocks_to_split, eps))) for eps in policy.schedule()]
    ext = richardson_limit(raw, policy.limit_ratio)
    ffloat = float(formula)
    abs_err = abs(ext.value - ffloat)
    rel_err = _rel_err(ext.value, ffloat, 1e-300)
    if ffloat == 0:
        rel_err = abs_err
    tol = policy.tolerance_for(order)
    obs = observed_order(raw, ffloat, policy.limit_ratio)
    diagnostics = []
    passed = rel_err < tol
    if exact_value is not None and Fraction(formula) != exact_value:
        passed = False
        diagnostics.append(f"formula value {formula} differs from exact limit {exact_value}")
    if not passed:
        diagnostics.append(f"extrapolation error estimate {ext.error_estimate:.3e}")
    return LimitReport(case, pattern, branch, ffloat, ext.value,
                       None if exact_value is None else str(exact_value), abs_err, rel_err, obs,
                       ext.levels_used, tol, passed, diagnostics)


def limit_check(I: Sequence[int], J: Sequence[int], phi: FunctionOracle, point: Sequence,
                policy: NumericPolicy = DEFAULT_POLICY) -> LimitReport:
    """Compare the coincident-point formula for ``D_I phi`` with the limit of the generic one.

    The coordinates of ``J`` are set to the value at ``J[0]``; any other coincidences among the
    ``I`` coordinates are detected and handled by the general block formula.
    """
    I, J = sorted(set(I)), sorted(set(J))
    pt = list(point)
    for j in J:
        pt[j] = pt[J[0]]
    sub = detect_pattern([pt[i] for i in I], rel_tol=policy.group_rel_tol)
    blocks = [[I[k] for k in b] for b in sub.blocks]
    for b, y in zip(blocks, sub.values):
        for i in b:
            pt[i] = y
    big = [b for b in blocks if len(b) > 1]
    if len(big) == 1 and sorted(big[0]) == J:
        branch = "one-block"
        formula = apply_DI_one_block(I, J, phi, pt)
    else:
        branch = "general-block" if big else "generic"
        formula = apply_DI_general(blocks, phi, pt)
    exact_value = None
    poly = phi.as_poly() if phi.exact else None
    if poly is not None and all(isinstance(v, (int, Fraction)) for v in pt):
        exact_value = apply_DI(I, poly).evaluate(pt)
    pattern = {"I": I, "blocks": blocks, "values": [str(v) for v in sub.values]}
    order = max((len(b) for b in blocks), default=1)
    return _finish(f"D_I I={I} J={J}", pattern, branch, formula,
                   lambda x: generic_DI_value(I, phi, x), exact_value, blocks, pt, order, policy)


def limit_check_Dd(d: int, phi: FunctionOracle, point: Sequence, policy: NumericPolicy = DEFAULT_POLICY) -> LimitReport:
    """Compare the all-points formula for ``D_d phi`` with the limit of the generic one."""
    pattern = detect_pattern(list(point), rel_tol=policy.group_rel_tol)
    pt = pattern.point()
    formula = apply_Dd_at_point(d, pattern, phi)
    exact_value = None
    poly = phi.as_poly() if phi.exact else None
    if poly is not None and all(isinstance(v, (int, Fraction)) for v in pt):
        exact_value = apply_Dd(d, poly).evaluate(pt)
    branch = "total-diagonal" if len(pattern.blocks) == 1 else "all-points"
    order = max(pattern.sizes)
    return _finish(f"D_{d}", pattern.describe(), branch, formula,
                   lambda x: generic_Dd_value(d, phi, x), exact_value, pattern.blocks, pt, order, policy)


__all__ = [
    "BlackBoxOracle", "DEFAULT_POLICY", "Extrapolation", "FDResult", "FunctionOracle", "JacobianReport",
    "LimitReport", "NumericPolicy", "PolynomialOracle", "SingularJacobianError", "TraceOracle",
    "fd_gradient", "fd_partial", "generic_Dd_value", "jacobian_check", "limit_check", "limit_check_Dd",
    "observed_order", "random_distinct_point", "richardson_limit",
]
