"""Behaviour of the coordinates as functions of the number of variables N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .combinatorics import Partition, count_X, dominates, enumerate_partitions
from .exact_algebra import PolyN, RationalOfN
from .symmetric_basis import (NormalizationTag, build_u, convert_basis, pattern_derivative,
                              power_sum_in_e, u_coefficient, u_poly)


def P_lambda(lam: Partition) -> PolyN:
    """``prod_h (N!/(N-h)!)^{m_h}`` over the parts of ``lam``."""
    p = PolyN([1])
    for h in lam.parts:
        p = p * PolyN.falling(h)
    return p


@dataclass(frozen=True)
class DerivativeConstant:
    r: int
    sigma: Partition
    value: RationalOfN

    def at(self, n: int) -> Fraction:
        return self.value.evaluate(n)


def derivative_constant(r: int, sigma: Partition, restrict: bool = True) -> DerivativeConstant:
    """The constant ``prod_q d_{i_q} u_r`` for a simple derivative of pattern ``sigma``, as a function of N.

    Sums ``c_lam |X^lam| prod m_h! / P_lam(N)`` over ``lam`` dominated by ``sigma^t``
    (or over every ``lam`` with ``restrict=False``; the extra terms vanish).
    """
    if sigma.weight != r:
        raise ValueError("sigma must be a partition of r")
    if r > 8:
        raise ValueError("derivative constants are supported for r <= 8")
    st = sigma.conjugate()
    total = RationalOfN.const(0)
    for lam in enumerate_partitions(r):
        if restrict and not dominates(st, lam):
            continue
        x = count_X(sigma, lam)
        if not x:
            continue
        c = u_coefficient(lam) * x
        for m in lam.multiplicities.values():
            c *= math.factorial(m)
        total = total + RationalOfN(PolyN([c]), P_lambda(lam))
    return DerivativeConstant(r, sigma, total)


def direct_derivative_constant(r: int, sigma: Partition, n: int) -> Fraction:
    """The same constant from symbolic differentiation of the built ``u_r`` in ``n`` variables."""
    q = pattern_derivative(u_poly(r, n), sigma)
    if not q.is_constant():
        raise AssertionError("an order-r derivative of u_r should be constant")
    return q.constant_value()


@dataclass
class DecayRow:
    r: int
    sigma: Partition
    decay_order: float
    conjectured_order: int
    theorem_bound: int
    status: str

    def tsv(self) -> str:
        order = "inf" if math.isinf(self.decay_order) else str(int(self.decay_order))
        return f"{self.r}\t{self.sigma}\t{order}\t{self.conjectured_order}\t{self.theorem_bound}\t{self.status}"


DECAY_HEADER = "r\tsigma\tdecay_order\tconjectured_order\ttheorem_bound\tstatus"


class TheoremBoundViolation(AssertionError):
    pass


def decay_table(r_max: int) -> list[DecayRow]:
    """Decay order of every derivative constant with ``r <= r_max``.

    ``status`` compares against the conjectured order ``r + l(sigma) - 1``: ``meets``,
    ``exceeds`` or ``VIOLATES``. Falling short of the proven bound (``r`` for the pure pattern,
    ``r + 1`` otherwise) raises :class:`TheoremBoundViolation`.
    """
    if not 1 <= r_max <= 8:
        raise ValueError("r_max must be between 1 and 8")
    rows = []
    for r in range(1, r_max + 1):
        for sigma in enumerate_partitions(r):
            dc = derivative_constant(r, sigma)
            order = dc.value.decay_order()
            conj = r + sigma.length - 1
            bound = r if sigma.length == 1 else r + 1
            if order < bound:
                raise TheoremBoundViolation(f"r={r}, sigma={sigma}: decay order {order} < {bound}")
            status = "meets" if order == conj else ("exceeds" if order > conj else "VIOLATES")
            rows.append(DecayRow(r, sigma, order, conj, bound, status))
    return rows


def format_decay_table(rows: Iterable[DecayRow]) -> str:
    return "\n".join([DECAY_HEADER] + [row.tsv() for row in rows]) + "\n"


# ---------------------------------------------------------------------------
# the N -> infinity limit


def uhat_e_coefficients(r: int) -> dict[Partition, RationalOfN]:
    """e-basis coefficients of ``u-hat_r`` as functions of N (valid for ``N >= r``)."""
    fall = PolyN.falling(r)
    return {lam: RationalOfN(fall * u_coefficient(lam), P_lambda(lam)) for lam in enumerate_partitions(r)}


def power_limit_e_coefficients(r: int) -> dict[Partition, Fraction]:
    """e-basis coefficients of ``(-1)^(r-1) p_r / r``."""
    s = Fraction((-1) ** (r - 1), r)
    return {lam: c * s for lam, c in power_sum_in_e(r).items()}


@dataclass
class PowerLimitReport:
    r: int
    differences: dict[Partition, RationalOfN]
    min_decay_order: float
    equal_at: dict[int, bool]
    consistent: bool
    passed: bool
    diagnostics: list[str] = field(default_factory=list)

    def as_json(self) -> dict:
        return {
            "r": self.r,
            "differences": {str(k): v.to_text() for k, v in self.differences.items()},
            "min_decay_order": self.min_decay_order,
            "equal_at": {str(k): v for k, v in self.equal_at.items()},
            "consistent": self.consistent,
            "pass": self.passed,
            "diagnostics": self.diagnostics,
        }


def limit_to_power_sum(r: int, N_samples: Sequence[int]) -> PowerLimitReport:
    """Compare ``u-hat_r`` with ``(-1)^(r-1) p_r / r`` coefficientwise in the e-basis.

    Each coefficient difference must decay in N; at each sampled ``N >= r`` the two sides
    are compared exactly (equal only for ``r = 1``). Samples below ``r`` are skipped.
    """
    if r < 1 or r > max(N_samples):
        raise ValueError("need 1 <= r <= max(N_samples)")
    uh = uhat_e_coefficients(r)
    lim = power_limit_e_coefficients(r)
    diffs = {lam: uh.get(lam, RationalOfN.const(0)) - lim.get(lam, 0) for lam in set(uh) | set(lim)}
    min_order = min(d.decay_order() for d in diffs.values())
    diagnostics = []
    equal_at = {}
    consistent = True
    for n in N_samples:
        if n < r:
            continue
        actual = convert_basis(build_u(r, n, NormalizationTag.HAT_U)[0], "e")
        for lam, coeff in uh.items():
            if actual.coefficient(lam) != coeff.evaluate(n):
                consistent = False
                diagnostics.append(f"N={n}: coefficient of e{lam} disagrees with the formula in N")
        equal_at[n] = all(d.evaluate(n) == 0 for d in diffs.values())
    expected_equal = r == 1
    passed = min_order >= 1 and consistent and all(v == expected_equal for v in equal_at.values())
    return PowerLimitReport(r, diffs, min_order, equal_at, consistent, passed, diagnostics)


__all__ = [
    "DECAY_HEADER", "DecayRow", "DerivativeConstant", "P_lambda", "PowerLimitReport",
    "TheoremBoundViolation", "decay_table", "derivative_constant", "direct_derivative_constant",
    "format_decay_table", "limit_to_power_sum", "power_limit_e_coefficients", "uhat_e_coefficients",
]
