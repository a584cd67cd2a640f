"""The operators D_I, D_d, D-hat_d acting on exact polynomials, plus the duality checks."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .combinatorics import Partition
from .exact_algebra import (NotDivisibleError, RationalFuncX, SparsePoly, difference,
                            divide_with_remainder, vandermonde)
from .symmetric_basis import SymExpr, u_poly


class NonSymmetricInputError(ValueError):
    """The divided-difference numerator is not divisible by the Vandermonde factor."""


def _check_subset(I: Iterable[int], nvars: int) -> tuple[int, ...]:
    I = tuple(sorted(set(I)))
    if not I:
        raise ValueError("D_I needs a nonempty index set")
    if I[0] < 0 or I[-1] >= nvars:
        raise ValueError(f"index set {I} out of range for {nvars} variables")
    return I


def _numerator(I: tuple[int, ...], p: SparsePoly) -> SparsePoly:
    # 1 / prod_{j != i} (x_j - x_i) = (-1)^{#{j in I: j > i}} V_{I \ i} / V_I
    n = p.nvars
    num = SparsePoly.zero(n)
    for pos, i in enumerate(I):
        dp = p.partial(i)
        if dp.is_zero():
            continue
        rest = I[:pos] + I[pos + 1:]
        term = vandermonde(n, rest) * dp
        if (len(I) - 1 - pos) % 2:
            term = -term
        num = num + term
    return num


def apply_DI(I: Iterable[int], p: SparsePoly, require_polynomial: bool = True):
    """``D_I p = sum_{i in I} d_i p / prod_{j != i} (x_j - x_i)``.

    The sum is formed over the Vandermonde denominator of ``I`` and divided one linear
    factor at a time. A polynomial is returned when every factor divides; otherwise a
    :class:`RationalFuncX` keeps the leftover factors (or, with ``require_polynomial``,
    :class:`NonSymmetricInputError` is raised).
    """
    I = _check_subset(I, p.nvars)
    n = p.nvars
    num = _numerator(I, p)
    leftover = []
    for a, b in itertools.combinations(I, 2):
        if num.is_zero():
            break
        quo, rem = divide_with_remainder(num, difference(n, a, b))
        if rem.is_zero():
            num = quo
        else:
            leftover.append((a, b))
    if not leftover:
        return num
    if require_polynomial:
        raise NonSymmetricInputError(f"D_{list(I)} of this polynomial is not a polynomial")
    den = SparsePoly.constant(n, 1)
    for a, b in leftover:
        den = den * difference(n, a, b)
    return RationalFuncX(num, den)


def _subset_sum(args) -> SparsePoly:
    subsets, p = args
    total = SparsePoly.zero(p.nvars)
    for I in subsets:
        total = total + apply_DI(I, p, require_polynomial=True)
    return total


def apply_Dd(d: int, p: SparsePoly, jobs: int = 1) -> SparsePoly:
    """``D_d p = d! * sum_{|I| = d} D_I p`` over all index subsets of size ``d``.

    With ``jobs > 1`` the subsets are split across worker processes; exact addition makes
    the result independent of the split.
    """
    n = p.nvars
    if not 1 <= d <= n:
        raise ValueError(f"D_d needs 1 <= d <= N, got d={d}, N={n}")
    subsets = list(itertools.combinations(range(n), d))
    if jobs > 1 and len(subsets) > 1:
        chunks = [subsets[k::jobs] for k in range(jobs) if subsets[k::jobs]]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_subset_sum, [(c, p) for c in chunks]))
        total = SparsePoly.zero(n)
        for part in parts:
            total = total + part
    else:
        total = _subset_sum((subsets, p))
    return total.scale(math.factorial(d))


def apply_Dhat(d: int, p: SparsePoly, jobs: int = 1) -> SparsePoly:
    """``(N-d)!/N! * D_d``: the average of the ``D_I`` with ``|I| = d``."""
    n = p.nvars
    return apply_Dd(d, p, jobs).scale(Fraction(math.factorial(n - d), math.factorial(n)))


def apply_Dlambda(lam: Partition, p: SparsePoly, jobs: int = 1) -> SparsePoly:
    """Composition of ``D_h`` over the parts of ``lam``, applied left to right."""
    for h in lam.parts:
        p = apply_Dd(h, p, jobs)
    return p


def apply_Dd_etilde(d: int, expr: SymExpr) -> SymExpr:
    """Action of ``D_d`` on the etilde basis: ``etilde_lam -> sum_h m_h etilde_{lam - d eps_h}``."""
    if expr.basis != "etilde":
        raise ValueError("expression must be in the etilde basis")
    out: dict[Partition, Fraction] = {}
    for lam, c in expr.coeffs.items():
        for h, m in lam.multiplicities.items():
            if h < d:
                continue
            key = lam.remove_part(h, d)
            out[key] = out.get(key, Fraction(0)) + m * c
    return SymExpr(expr.nvars, "etilde", out)


@dataclass(frozen=True)
class OperatorSpec:
    """One of ``D_I`` (``kind="D_I"`` with ``subset``), ``D_d`` or ``D_hat_d`` (with ``order``)."""

    kind: str
    nvars: int
    subset: tuple[int, ...] = ()
    order: int = 0

    def __post_init__(self):
        if self.kind == "D_I":
            object.__setattr__(self, "subset", _check_subset(self.subset, self.nvars))
        elif self.kind in ("D_d", "D_hat_d"):
            if not 1 <= self.order <= self.nvars:
                raise ValueError(f"order must be in 1..{self.nvars}")
        else:
            raise ValueError(f"unknown operator kind {self.kind!r}")

    def apply(self, p: SparsePoly, jobs: int = 1):
        if p.nvars != self.nvars:
            raise ValueError("polynomial lives in a different number of variables")
        if self.kind == "D_I":
            return apply_DI(self.subset, p, require_polynomial=False)
        if self.kind == "D_d":
            return apply_Dd(self.order, p, jobs)
        return apply_Dhat(self.order, p, jobs)


@dataclass
class DualityReport:
    nvars: int
    matrix: list[list[Fraction | None]]
    failures: list[tuple[int, int, SparsePoly]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_json(self) -> dict:
        fmt = lambda v: None if v is None else f"{v.numerator}/{v.denominator}"
        return {
            "N": self.nvars,
            "matrix": [[fmt(v) for v in row] for row in self.matrix],
            "pass": self.ok,
            "failures": [{"d": d, "r": r, "residual": str(res)} for d, r, res in self.failures],
        }


def check_duality(nvars: int, jobs: int = 1) -> DualityReport:
    """Compute ``D_d u_r`` for all ``1 <= d, r <= N``; entry is the constant value or ``None``."""
    matrix: list[list[Fraction | None]] = []
    failures = []
    for d in range(1, nvars + 1):
        row = []
        for r in range(1, nvars + 1):
            img = apply_Dd(d, u_poly(r, nvars), jobs)
            value = img.constant_value() if img.is_constant() else None
            row.append(value)
            expected = 1 if d == r else 0
            if value != expected:
                failures.append((d, r, img - expected))
        matrix.append(row)
    return DualityReport(nvars, matrix, failures)


def check_weyl_commutator(d: int, r: int, psi: SparsePoly) -> bool:
    """``D_d(u_r psi) - u_r D_d(psi) == delta_{d,r} psi``."""
    n = psi.nvars
    u = u_poly(r, n)
    lhs = apply_Dd(d, u * psi) - u * apply_Dd(d, psi)
    return lhs == (psi if d == r else SparsePoly.zero(n))


def check_commuting(d1: int, d2: int, psi: SparsePoly) -> bool:
    """``D_{d1} D_{d2} psi == D_{d2} D_{d1} psi``."""
    return apply_Dd(d1, apply_Dd(d2, psi)) == apply_Dd(d2, apply_Dd(d1, psi))


__all__ = [
    "DualityReport", "NonSymmetricInputError", "NotDivisibleError", "OperatorSpec", "apply_DI",
    "apply_Dd", "apply_Dd_etilde", "apply_Dhat", "apply_Dlambda", "check_commuting",
    "check_duality", "check_weyl_commutator",
]
