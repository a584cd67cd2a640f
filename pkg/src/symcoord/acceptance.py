"""Acceptance criteria, shared by the test suite and ``symcoord selftest``."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .asymptotics import decay_table, derivative_constant, direct_derivative_constant, limit_to_power_sum
from .combinatorics import Partition, enumerate_partitions
from .diagonal import (combo_value, diag_combo, diag_combo_via_bell, diag_combo_via_recursion,
                       total_diagonal_Dhat, trace_total_diagonal)
from .divided_difference import apply_Dd, apply_Dd_etilde, apply_Dhat, check_duality
from .exact_algebra import PolyN, RationalOfN
from .numeric import NumericPolicy, jacobian_check, limit_check, limit_check_Dd, random_distinct_point
from .oracle import PolynomialOracle, TraceOracle
from .symmetric_basis import (SymExpr, check_diagonal_vanishing, diagonal_restriction, elementary,
                              u_poly)

F = Fraction

LIMIT_TOL = 1e-7
JACOBIAN_TOL = 1e-9
ACCEPTANCE_SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    budget: float | None
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:.0f}s)" if self.budget else ""
        extra = f" -- {self.details[0]}" if self.details else ""
        return f"{status} criterion {self.number}: {self.name} [{self.elapsed:.2f}s{budget}]{extra}"


def _run(number: int, name: str, budget: float | None, body: Callable[[list[str]], bool]) -> CriterionResult:
    details: list[str] = []
    start = time.perf_counter()
    try:
        ok = body(details)
    except Exception as exc:  # a crash is a failure of the criterion, reported not raised
        ok = False
        details.insert(0, f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed > budget:
        ok = False
        details.insert(0, f"runtime {elapsed:.1f}s exceeds {budget:.0f}s")
    return CriterionResult(number, name, ok, elapsed, budget, details)


def _e(lam, n):
    return SymExpr.single(n, "e", lam).to_poly()


# 1 -------------------------------------------------------------------------


def criterion_duality() -> CriterionResult:
    def body(details):
        ok = True
        for n in range(1, 7):
            rep = check_duality(n)
            if not rep.ok:
                ok = False
                details.append(f"N={n}: mismatches at {[(d, r) for d, r, _ in rep.failures]}")
        return ok

    return _run(1, "D_d u_r = delta_{d,r} for N <= 6", 30, body)


# 2 -------------------------------------------------------------------------


def criterion_e_basis() -> CriterionResult:
    def body(details):
        ok = True
        for n in range(1, 7):
            for d in range(1, n + 1):
                for h in range(0, n + 1):
                    img = apply_Dd(d, elementary(h, n))
                    if h >= d:
                        want = elementary(h - d, n).scale(math.factorial(n - h + d) // math.factorial(n - h))
                    else:
                        want = elementary(-1, n)
                    if img != want:
                        ok = False
                        details.append(f"D_{d} e_{h} wrong for N={n}")
                for r in range(0, 6):
                    for lam in enumerate_partitions(r):
                        if lam.largest > n:
                            continue
                        et = SymExpr.single(n, "etilde", lam)
                        if apply_Dd(d, et.to_poly()) != apply_Dd_etilde(d, et).to_poly():
                            ok = False
                            details.append(f"D_{d} etilde{lam} wrong for N={n}")
        return ok

    return _run(2, "D_d on e_h and etilde_lambda", 60, body)


# 3 -------------------------------------------------------------------------


def criterion_diagonal_vanishing() -> CriterionResult:
    def body(details):
        ok = True
        for n in range(1, 6):
            for r in range(1, n + 1):
                for d in range(1, n + 1):
                    if d == r:
                        continue
                    for sigma in enumerate_partitions(d):
                        if sigma.length > n:
                            continue
                        if not check_diagonal_vanishing(r, d, sigma, n):
                            ok = False
                            details.append(f"N={n} r={r} sigma={sigma} does not vanish")
                diag = diagonal_restriction(u_poly(r, n))
                want = [F(0), F(1)] if r == 1 else []
                if diag != want:
                    ok = False
                    details.append(f"u_{r}(a,...,a) wrong for N={n}: {diag}")
        return ok

    return _run(3, "derivatives of order d != r of u_r vanish on the diagonal", 60, body)


# 4 -------------------------------------------------------------------------


def criterion_diag_combo() -> CriterionResult:
    def body(details):
        ok = True
        for g in range(1, 7):
            a, b, c = diag_combo(g), diag_combo_via_bell(g), diag_combo_via_recursion(g)
            if not (a == b == c):
                ok = False
                details.append(f"g={g}: constructions disagree")
        P = Partition
        if dict(diag_combo(2).terms) != {P((1, 1)): F(1), P((2,)): F(-1)}:
            ok = False
            details.append("g=2 hand values differ")
        if dict(diag_combo(3).terms) != {P((1, 1, 1)): F(1), P((2, 1)): F(-3, 2), P((3,)): F(1, 2)}:
            ok = False
            details.append("g=3 hand values differ")
        return ok

    return _run(4, "three constructions of the diagonal combinations agree", None, body)


# 5 -------------------------------------------------------------------------


def limit_cases() -> list[tuple[str, Callable]]:
    """The twelve configured coincidence cases (N <= 4)."""
    tr = TraceOracle
    pe = lambda lam, n: PolynomialOracle(_e(lam, n))
    return [
        ("N=2 D_I I=J={0,1} trace x^2", lambda p: limit_check([0, 1], [0, 1], tr(2, [0, 0, 1]), [F(1), F(1)], p)),
        ("N=3 D_I J={0,1} e_3", lambda p: limit_check([0, 1, 2], [0, 1], pe((3,), 3), [F(2), F(2), F(5)], p)),
        ("N=3 D_I I=J e_(2,1)", lambda p: limit_check([0, 1, 2], [0, 1, 2], pe((2, 1), 3), [F(3, 2)] * 3, p)),
        ("N=4 D_I J={0,1,2} trace x^5", lambda p: limit_check([0, 1, 2, 3], [0, 1, 2], tr(4, [0, 0, 0, 0, 0, 1]),
                                                              [F(1), F(1), F(1), F(3)], p)),
        ("N=4 D_I blocks {0,1},{2,3} e_(3,1)", lambda p: limit_check([0, 1, 2, 3], [0, 1], pe((3, 1), 4),
                                                                      [F(1), F(1), F(2), F(2)], p)),
        ("N=4 D_I I={0,1,2} J={0,1} e_(2,2)", lambda p: limit_check([0, 1, 2], [0, 1], pe((2, 2), 4),
                                                                     [F(1, 2), F(1, 2), F(3), F(7)], p)),
        ("N=3 D_2 total diagonal trace x^4", lambda p: limit_check_Dd(2, tr(3, [0, 0, 0, 0, 1]), [F(1)] * 3, p)),
        ("N=4 D_4 total diagonal trace x^5", lambda p: limit_check_Dd(4, tr(4, [0, 0, 0, 0, 0, 1]), [F(1)] * 4, p)),
        ("N=4 D_3 pattern (3,1) e_(2,1)", lambda p: limit_check_Dd(3, pe((2, 1), 4), [F(1), F(1), F(1), F(3)], p)),
        ("N=4 D_2 pattern (2,2) e_4", lambda p: limit_check_Dd(2, pe((4,), 4), [F(1), F(1), F(3), F(3)], p)),
        ("N=3 D_1 pattern (2,1) trace x^3", lambda p: limit_check_Dd(1, tr(3, [0, 0, 0, 1]), [F(2), F(2), F(-1)], p)),
        ("N=4 D_3 pattern (2,1,1) e_(3,2)", lambda p: limit_check_Dd(3, pe((3, 2), 4), [F(2), F(2), F(-1), F(5)], p)),
    ]


def criterion_limits() -> CriterionResult:
    def body(details):
        ok = True
        policy = NumericPolicy()
        for name, run in limit_cases():
            rep = run(policy)
            good = rep.rel_err < LIMIT_TOL and rep.value_exact is not None and \
                Fraction(rep.value_exact) == Fraction(rep.value_formula)
            if not good:
                ok = False
                details.append(f"{name}: rel_err={rep.rel_err:.2e} {rep.diagnostics}")
        return ok

    return _run(5, "coincident-point formulas equal limits of generic ones", 120, body)


# 6 -------------------------------------------------------------------------


TRACE_TEST_POLYS = [
    [0, 1], [0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 0, 1],
    [3, -1, 2, 5, -4, 1, 2], [F(1, 2), 0, F(-7, 3), 0, 0, F(2, 5)],
]


def criterion_trace_diagonal() -> CriterionResult:
    def body(details):
        ok = True
        for n in range(1, 7):
            for coeffs in TRACE_TEST_POLYS:
                phi = TraceOracle(n, coeffs)
                poly = phi.as_poly()
                for d in range(1, min(4, n) + 1):
                    image = apply_Dhat(d, poly)
                    for a in (F(1), F(-2), F(3, 2)):
                        want = trace_total_diagonal(d, phi.f_derivative(d, a))
                        via_poly = image.evaluate([a] * n)
                        via_formula = total_diagonal_Dhat(d, phi, a)
                        if not (want == via_poly == via_formula):
                            ok = False
                            details.append(f"N={n} d={d} f={coeffs} a={a}: {want}, {via_poly}, {via_formula}")
        return ok

    return _run(6, "total-diagonal values for trace functions", None, body)


# 7 -------------------------------------------------------------------------


def jacobian_cases() -> list[tuple[int, Partition]]:
    return [lam for r in range(1, 5) for lam in enumerate_partitions(r)]


def criterion_jacobian(seed: int = ACCEPTANCE_SEED) -> CriterionResult:
    def body(details):
        ok = True
        rng = random.Random(seed)
        lams = jacobian_cases()
        policy = NumericPolicy(jacobian_tol=JACOBIAN_TOL)
        worst = 0.0
        for n in (2, 3, 4):
            candidates = [lam for lam in lams if lam.largest <= n]
            for k in range(20):
                lam = candidates[k % len(candidates)]
                rep = jacobian_check(n, PolynomialOracle(_e(lam, n)), random_distinct_point(n, rng), policy)
                worst = max(worst, rep.rel_err)
                if not (rep.passed and rep.exact_match):
                    ok = False
                    details.append(f"N={n} e{lam} at {rep.point}: rel_err={rep.rel_err:.2e}")
        details.append(f"worst rel_err {worst:.2e}")
        return ok

    return _run(7, "chain-rule duality at random points", None, body)


# 8 -------------------------------------------------------------------------


def criterion_pure_derivative() -> CriterionResult:
    def body(details):
        ok = True
        for r in range(1, 7):
            want = RationalOfN(PolyN([(-1) ** (r - 1) * math.factorial(r - 1)]), PolyN([0] * r + [1]))
            got = derivative_constant(r, Partition((r,))).value
            if got != want:
                ok = False
                details.append(f"r={r}: {got.to_text()}")
            for sigma in enumerate_partitions(r):
                if sigma.length > 1:
                    order = derivative_constant(r, sigma).value.decay_order()
                    if order < r + 1:
                        ok = False
                        details.append(f"r={r} sigma={sigma}: decay order {order}")
        return ok

    return _run(8, "pure derivative normalization and mixed decay", None, body)


# 9 -------------------------------------------------------------------------


def criterion_decay_report() -> CriterionResult:
    def body(details):
        rows = decay_table(6)  # raises on a violation of the proven bound
        bad = [f"r={row.r} sigma={row.sigma} order={row.decay_order}" for row in rows if row.status == "VIOLATES"]
        if bad:
            details.append("CONJECTURE VIOLATED: " + "; ".join(bad))
        else:
            details.append(f"{len(rows)} rows, all at or above r + l(sigma) - 1")
        return True

    return _run(9, "decay-order evidence for r <= 6 (report)", 300, body)


# 10 ------------------------------------------------------------------------


def criterion_power_limit() -> CriterionResult:
    def body(details):
        ok = True
        for r in range(1, 5):
            rep = limit_to_power_sum(r, list(range(2, 7)))
            if not rep.passed:
                ok = False
                details.append(f"r={r}: order {rep.min_decay_order}, equal_at {rep.equal_at}, {rep.diagnostics}")
        return ok

    return _run(10, "u-hat_r tends to (-1)^(r-1) p_r / r", None, body)


# 11 ------------------------------------------------------------------------


def criterion_two_pipelines() -> CriterionResult:
    def body(details):
        ok = True
        for r in range(1, 6):
            for sigma in enumerate_partitions(r):
                dc = derivative_constant(r, sigma)
                for n in range(r, 7):
                    direct = direct_derivative_constant(r, sigma, n)
                    if dc.at(n) != direct:
                        ok = False
                        details.append(f"r={r} sigma={sigma} N={n}: {dc.at(n)} vs {direct}")
        return ok

    return _run(11, "derivative constants match symbolic differentiation", None, body)


CRITERIA: list[Callable[[], CriterionResult]] = [
    criterion_duality, criterion_e_basis, criterion_diagonal_vanishing, criterion_diag_combo,
    criterion_limits, criterion_trace_diagonal, criterion_jacobian, criterion_pure_derivative,
    criterion_decay_report, criterion_power_limit, criterion_two_pipelines,
]


def run_all(echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        res = crit()
        results.append(res)
        if echo:
            echo(res.line())
    return results
