"""Symmetric-polynomial bases, Bell polynomials, Newton identities and the coordinates u_r."""

from __future__ import annotations

import enum
import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .combinatorics import Partition, enumerate_partitions, pattern_labels
from .exact_algebra import SparsePoly

BASES = ("e", "etilde", "monomial", "power", "u")
_LETTER = {"e": "e", "etilde": "et", "monomial": "m", "power": "p", "u": "u"}
_FROM_LETTER = {v: k for k, v in _LETTER.items()}
_MULTIPLICATIVE = {"e", "etilde", "power", "u"}


class ConversionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# basic symmetric polynomials


def elementary(h: int, nvars: int, vars: Iterable[int] | None = None) -> SparsePoly:
    """``e_h`` of the variables ``vars`` (all variables by default) inside a ring of ``nvars``."""
    idx = sorted(range(nvars) if vars is None else set(vars))
    if h < 0 or h > len(idx):
        return SparsePoly.zero(nvars)
    terms = {}
    for combo in itertools.combinations(idx, h):
        exp = [0] * nvars
        for i in combo:
            exp[i] = 1
        terms[tuple(exp)] = Fraction(1)
    return SparsePoly(nvars, terms, _trusted=True)


@lru_cache(maxsize=None)
def _elementary_full(h: int, nvars: int) -> SparsePoly:
    return elementary(h, nvars)


def etilde_scale(h: int, nvars: int) -> Fraction:
    """``1/(h! C(N,h)) = (N-h)!/N!``."""
    return Fraction(math.factorial(nvars - h), math.factorial(nvars))


def normalized_elementary(h: int, nvars: int) -> SparsePoly:
    """``e_h / (h! C(N,h))``; zero for ``h > N``."""
    if h < 0 or h > nvars:
        return SparsePoly.zero(nvars)
    return _elementary_full(h, nvars).scale(etilde_scale(h, nvars))


def expand_product_rule(h: int, I: Iterable[int], nvars: int) -> list[tuple[SparsePoly, SparsePoly]]:
    """Pairs ``(e_l(x_I), e_{h-l}(x_{I^c}))`` for ``l = 0..h``; their products sum to ``e_h``."""
    I = sorted(set(I))
    if any(not 0 <= i < nvars for i in I):
        raise ValueError("index subset out of range")
    if not I:
        return [(SparsePoly.constant(nvars, 1), elementary(h, nvars))]
    Ic = [i for i in range(nvars) if i not in I]
    return [(elementary(l, nvars, I), elementary(h - l, nvars, Ic)) for l in range(h + 1)]


@lru_cache(maxsize=None)
def power_sum(r: int, nvars: int) -> SparsePoly:
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return SparsePoly.constant(nvars, nvars)
    terms = {}
    for i in range(nvars):
        exp = [0] * nvars
        exp[i] = r
        terms[tuple(exp)] = Fraction(1)
    return SparsePoly(nvars, terms, _trusted=True)


def monomial_symmetric(eta: Partition, nvars: int) -> SparsePoly:
    """``m_eta``: sum of the distinct rearrangements of ``eta`` padded to ``nvars`` entries."""
    if eta.length > nvars:
        return SparsePoly.zero(nvars)
    padded = eta.parts + (0,) * (nvars - eta.length)
    terms = {perm: Fraction(1) for perm in set(itertools.permutations(padded))}
    return SparsePoly(nvars, terms, _trusted=True)


# ---------------------------------------------------------------------------
# Bell polynomials


def ordinary_bell(r: int, t: int, z: Sequence, method: str = "partition"):
    """Partial ordinary Bell polynomial in ``z_1, z_2, ...`` (``z[0]`` is ``z_1``).

    ``method="partition"`` uses the sum over partitions of ``r`` with ``t`` parts;
    ``method="recurrence"`` uses ``B(r,t) = sum_i z_i B(r-i,t-1)``. The entries of ``z``
    may be numbers or any ring elements supporting ``+`` and ``*``.
    """
    if t < 0 or r < 0:
        raise ValueError("r and t must be non-negative")
    if method == "recurrence":
        return _bell_recurrence(r, t, z)
    if method != "partition":
        raise ValueError(f"unknown method {method!r}")
    total = 0
    for lam in enumerate_partitions(r):
        if lam.length != t:
            continue
        coeff = Fraction(math.factorial(t))
        for m in lam.multiplicities.values():
            coeff /= math.factorial(m)
        term = None
        for h in lam.parts:
            term = z[h - 1] if term is None else term * z[h - 1]
        if term is None:
            term = 1
        total = total + term * _as_int_if_possible(coeff)
    return total


def _as_int_if_possible(c: Fraction):
    return int(c) if c.denominator == 1 else c


def _bell_recurrence(r: int, t: int, z: Sequence):
    table: dict[tuple[int, int], object] = {(0, 0): 1}
    for k in range(1, t + 1):
        for n in range(k, r - (t - k) + 1):
            acc = 0
            for i in range(1, n - k + 2):
                prev = table.get((n - i, k - 1))
                if prev is None:
                    continue
                acc = acc + z[i - 1] * prev
            table[(n, k)] = acc
    return table.get((r, t), 0)


def exponential_bell(n: int, k: int, z: Sequence):
    """Partial exponential Bell polynomial ``B_{n,k}`` via ``sum_i C(n-1,i-1) z_i B_{n-i,k-1}``."""
    table: dict[tuple[int, int], object] = {(0, 0): 1}
    for kk in range(1, k + 1):
        for nn in range(kk, n - (k - kk) + 1):
            acc = 0
            for i in range(1, nn - kk + 2):
                prev = table.get((nn - i, kk - 1))
                if prev is None:
                    continue
                acc = acc + z[i - 1] * prev * math.comb(nn - 1, i - 1)
            table[(nn, kk)] = acc
    return table.get((n, k), 0)


# ---------------------------------------------------------------------------
# SymExpr


class SymExpr:
    """Linear combination of basis elements indexed by partitions.

    ``basis`` is one of ``e``, ``etilde``, ``monomial``, ``power``, ``u``. For the
    multiplicative bases the product of two keys is the union of their parts.
    """

    __slots__ = ("nvars", "basis", "coeffs")

    def __init__(self, nvars: int, basis: str, coeffs: Mapping[Partition, object] | None = None):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.nvars, self.basis = nvars, basis
        clean: dict[Partition, Fraction] = {}
        for lam, c in (coeffs or {}).items():
            if not isinstance(lam, Partition):
                lam = Partition.of(lam)
            c = Fraction(c)
            if not c:
                continue
            if basis in ("e", "etilde") and lam.largest > nvars:
                continue  # e_h vanishes for h > N
            if basis == "monomial" and lam.length > nvars:
                continue
            if basis == "u" and lam.largest > nvars:
                raise ConversionError(f"u-basis key {lam} has a part larger than N={nvars}")
            clean[lam] = clean.get(lam, Fraction(0)) + c
        self.coeffs = {k: v for k, v in clean.items() if v}

    @classmethod
    def single(cls, nvars: int, basis: str, lam, c=1) -> "SymExpr":
        return cls(nvars, basis, {lam if isinstance(lam, Partition) else Partition.of(lam): c})

    @classmethod
    def one(cls, nvars: int, basis: str = "e") -> "SymExpr":
        return cls(nvars, basis, {Partition(()): 1})

    def _same(self, other: "SymExpr"):
        if self.nvars != other.nvars or self.basis != other.basis:
            raise ValueError("SymExpr operands must share nvars and basis")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SymExpr.one(self.nvars, self.basis) * other if self.basis in _MULTIPLICATIVE else NotImplemented
            if other is NotImplemented:
                return other
        self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return SymExpr(self.nvars, self.basis, out)

    __radd__ = __add__

    def __neg__(self):
        return SymExpr(self.nvars, self.basis, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymExpr(self.nvars, self.basis, {k: v * other for k, v in self.coeffs.items()})
        if not isinstance(other, SymExpr):
            return NotImplemented
        self._same(other)
        if self.basis not in _MULTIPLICATIVE:
            raise ValueError(f"basis {self.basis!r} is not multiplicative")
        out: dict[Partition, Fraction] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = Partition.of(k1.parts + k2.parts)
                out[k] = out.get(k, 0) + v1 * v2
        return SymExpr(self.nvars, self.basis, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymExpr):
            return NotImplemented
        return (self.nvars, self.basis, self.coeffs) == (other.nvars, other.basis, other.coeffs)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, lam) -> Fraction:
        lam = lam if isinstance(lam, Partition) else Partition.of(lam)
        return self.coeffs.get(lam, Fraction(0))

    def sorted_items(self) -> list[tuple[Partition, Fraction]]:
        """Items ordered by weight, then reverse-lex on parts."""
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0].weight, tuple(-p for p in kv[0].parts)))

    def to_poly(self) -> SparsePoly:
        return to_poly(self)

    def to_text(self) -> str:
        letter = _LETTER[self.basis]
        return "".join(f"{c.numerator}/{c.denominator} : {letter}{lam}\n" for lam, c in self.sorted_items())

    @classmethod
    def from_text(cls, text: str, nvars: int) -> "SymExpr":
        basis = None
        coeffs: dict[Partition, Fraction] = {}
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            coeff, _, key = ln.partition(":")
            key = key.strip()
            letter, bracket, rest = key.partition("[")
            if not bracket or letter not in _FROM_LETTER:
                raise ValueError(f"bad basis element {key!r}")
            b = _FROM_LETTER[letter]
            if basis is not None and b != basis:
                raise ValueError("mixed bases in one expression")
            basis = b
            lam = Partition.parse("[" + rest)
            coeffs[lam] = coeffs.get(lam, Fraction(0)) + Fraction(coeff.strip())
        return cls(nvars, basis or "e", coeffs)

    def __repr__(self):
        return f"SymExpr(N={self.nvars}, {self.basis}, " + "{" + ", ".join(f"{k}: {v}" for k, v in self.sorted_items()) + "})"


# ---------------------------------------------------------------------------
# Newton identities


@lru_cache(maxsize=None)
def power_sum_in_e(r: int, nvars: int | None = None) -> dict[Partition, Fraction]:
    """``p_r`` in the e-basis via Newton's identities.

    With ``nvars=None`` the identities are applied formally (valid for any ``N >= r``).
    """
    if r < 1:
        raise ValueError("r must be positive")

    def e_term(h):
        if nvars is not None and h > nvars:
            return {}
        return {Partition((h,)): Fraction(1)}

    p: dict[int, dict[Partition, Fraction]] = {}
    for n in range(1, r + 1):
        acc: dict[Partition, Fraction] = {}
        for i in range(1, n):
            sign = 1 if i % 2 == 1 else -1
            for k1, v1 in e_term(i).items():
                for k2, v2 in p[n - i].items():
                    k = Partition.of(k1.parts + k2.parts)
                    acc[k] = acc.get(k, 0) + sign * v1 * v2
        sign = 1 if n % 2 == 1 else -1
        for k, v in e_term(n).items():
            acc[k] = acc.get(k, 0) + sign * n * v
        p[n] = {k: v for k, v in acc.items() if v}
    return p[r]


@lru_cache(maxsize=None)
def elementary_in_power(h: int) -> dict[Partition, Fraction]:
    """``e_h`` in the power-sum basis: ``h e_h = sum_i (-1)^(i-1) e_{h-i} p_i``."""
    e: dict[int, dict[Partition, Fraction]] = {0: {Partition(()): Fraction(1)}}
    for n in range(1, h + 1):
        acc: dict[Partition, Fraction] = {}
        for i in range(1, n + 1):
            sign = 1 if i % 2 == 1 else -1
            for k, v in e[n - i].items():
                key = Partition.of(k.parts + (i,))
                acc[key] = acc.get(key, 0) + Fraction(sign, n) * v
        e[n] = {k: v for k, v in acc.items() if v}
    return e[h]


# ---------------------------------------------------------------------------
# the coordinates u_r


class NormalizationTag(enum.Enum):
    PAPER_U = "paper"
    HAT_U = "hat"
    SIGNED_POWER = "signed-power"
    TAYLOR = "taylor"

    def scale(self, r: int, nvars: int) -> Fraction:
        """Factor multiplying the default ``u_r``."""
        if self is NormalizationTag.PAPER_U:
            return Fraction(1)
        hat = Fraction(math.perm(nvars, r))
        sign = 1 if r % 2 == 1 else -1
        if self is NormalizationTag.HAT_U:
            return hat
        if self is NormalizationTag.SIGNED_POWER:
            return sign * r * hat
        return sign * hat / math.factorial(r - 1)

    @classmethod
    def parse(cls, name: str) -> "NormalizationTag":
        aliases = {"paper_u": "paper", "hat_u": "hat", "signed_power": "signed-power"}
        return cls(aliases.get(name, name))


def u_coefficient(lam: Partition) -> Fraction:
    """Coefficient of ``etilde_lam`` in ``u_r``: ``(-1)^(l-1) (l-1)! / prod m_h!``."""
    l = lam.length
    c = Fraction((-1) ** (l - 1) * math.factorial(l - 1))
    for m in lam.multiplicities.values():
        c /= math.factorial(m)
    return c


def _u_partition_sum(r: int, nvars: int) -> SymExpr:
    return SymExpr(nvars, "etilde", {lam: u_coefficient(lam) for lam in enumerate_partitions(r)})


def _u_bell(r: int, nvars: int) -> SymExpr:
    z = [SymExpr.single(nvars, "etilde", (h,), -1) for h in range(1, r + 1)]
    total = SymExpr(nvars, "etilde")
    for t in range(1, r + 1):
        b = ordinary_bell(r, t, z, method="recurrence")
        total = total - b * Fraction(1, t)
    return total


@lru_cache(maxsize=None)
def _build_u_cached(r: int, nvars: int) -> tuple[SymExpr, SparsePoly]:
    expr = _u_partition_sum(r, nvars)
    bell = _u_bell(r, nvars)
    if expr != bell:
        raise AssertionError(f"partition-sum and Bell constructions of u_{r} disagree for N={nvars}")
    return expr, to_poly(expr)


def build_u(r: int, nvars: int, tag: NormalizationTag = NormalizationTag.PAPER_U) -> tuple[SymExpr, SparsePoly]:
    """``u_r`` in the etilde basis and as a polynomial, rescaled according to ``tag``.

    Both the partition-sum and Bell-polynomial constructions are computed and compared.
    """
    if not 1 <= r <= nvars:
        raise ValueError(f"no coordinate u_{r} for N={nvars}")
    expr, poly = _build_u_cached(r, nvars)
    s = tag.scale(r, nvars)
    if s == 1:
        return expr, poly
    return expr * s, poly.scale(s)


def u_poly(r: int, nvars: int) -> SparsePoly:
    return build_u(r, nvars)[1]


# ---------------------------------------------------------------------------
# expansion and basis conversion


@lru_cache(maxsize=None)
def _basis_poly(basis: str, lam: Partition, nvars: int) -> SparsePoly:
    one = SparsePoly.constant(nvars, 1)
    if basis == "monomial":
        return monomial_symmetric(lam, nvars)
    if lam.length == 0:
        return one
    if lam.length > 1:
        head = _basis_poly(basis, Partition((lam.parts[0],)), nvars)
        return head * _basis_poly(basis, Partition(lam.parts[1:]), nvars)
    h = lam.parts[0]
    if basis == "e":
        return _elementary_full(h, nvars) if h <= nvars else SparsePoly.zero(nvars)
    if basis == "etilde":
        return normalized_elementary(h, nvars)
    if basis == "power":
        return power_sum(h, nvars)
    if basis == "u":
        return _build_u_cached(h, nvars)[1]
    raise ValueError(basis)


def to_poly(expr: SymExpr) -> SparsePoly:
    out = SparsePoly.zero(expr.nvars)
    for lam, c in expr.coeffs.items():
        out = out + _basis_poly(expr.basis, lam, expr.nvars).scale(c)
    return out


def poly_to_e(p: SparsePoly) -> SymExpr:
    """Symmetric reduction: peel off the lex-leading monomial ``x^eta`` with ``e_{eta^t}``."""
    n = p.nvars
    out: dict[Partition, Fraction] = {}
    work = p
    while not work.is_zero():
        lead, c = max(work.terms.items())
        if any(a < b for a, b in zip(lead, lead[1:])):
            raise ConversionError("polynomial is not symmetric")
        mu = Partition.of(lead).conjugate()
        out[mu] = out.get(mu, Fraction(0)) + c
        work = work - _basis_poly("e", mu, n).scale(c)
    return SymExpr(n, "e", out)


def _to_e(expr: SymExpr) -> SymExpr:
    n = expr.nvars
    b = expr.basis
    if b == "e":
        return expr
    if b == "etilde":
        out = {}
        for lam, c in expr.coeffs.items():
            s = Fraction(c)
            for h in lam.parts:
                s *= etilde_scale(h, n)
            out[lam] = s
        return SymExpr(n, "e", out)
    if b == "monomial":
        return poly_to_e(to_poly(expr))
    if b == "power":
        total = SymExpr(n, "e")
        for lam, c in expr.coeffs.items():
            term = SymExpr.one(n, "e")
            for r in lam.parts:
                term = term * SymExpr(n, "e", power_sum_in_e(r, n))
            total = total + term * c
        return total
    if b == "u":
        total = SymExpr(n, "etilde")
        for lam, c in expr.coeffs.items():
            term = SymExpr.one(n, "etilde")
            for r in lam.parts:
                term = term * _build_u_cached(r, n)[0]
            total = total + term * c
        return _to_e(total)
    raise ValueError(b)


def _from_e(expr: SymExpr, target: str) -> SymExpr:
    n = expr.nvars
    if target == "e":
        return expr
    if target == "etilde":
        out = {}
        for lam, c in expr.coeffs.items():
            s = Fraction(c)
            for h in lam.parts:
                s /= etilde_scale(h, n)
            out[lam] = s
        return SymExpr(n, "etilde", out)
    if target == "monomial":
        p = to_poly(expr)
        return SymExpr(n, "monomial", {Partition.of(e): c for e, c in p.terms.items()
                                       if all(a >= b for a, b in zip(e, e[1:]))})
    if target == "power":
        total = SymExpr(n, "power")
        for lam, c in expr.coeffs.items():
            term = SymExpr.one(n, "power")
            for h in lam.parts:
                term = term * SymExpr(n, "power", elementary_in_power(h))
            total = total + term * c
        return total
    if target == "u":
        # unitriangular: u_lam = etilde_lam + (longer partitions)
        work = _from_e(expr, "etilde")
        out: dict[Partition, Fraction] = {}
        while not work.is_zero():
            lam = min(work.coeffs, key=lambda k: (k.length, k.parts))
            c = work.coeffs[lam]
            out[lam] = c
            u_lam = SymExpr.one(n, "etilde")
            for r in lam.parts:
                u_lam = u_lam * _build_u_cached(r, n)[0]
            work = work - u_lam * c
        return SymExpr(n, "u", out)
    raise ValueError(target)


def convert_basis(expr: SymExpr, target: str) -> SymExpr:
    """Exact change of basis, routed through the e-basis."""
    if target not in BASES:
        raise ValueError(f"unknown basis {target!r}")
    if expr.basis == target:
        return expr
    return _from_e(_to_e(expr), target)


# ---------------------------------------------------------------------------
# diagonal behaviour


def diagonal_restriction(p: SparsePoly) -> list[Fraction]:
    """Coefficients (ascending in ``t``) of ``p(t, ..., t)``."""
    by_deg: dict[int, Fraction] = {}
    for e, c in p.terms.items():
        d = sum(e)
        by_deg[d] = by_deg.get(d, Fraction(0)) + c
    top = max((d for d, c in by_deg.items() if c), default=-1)
    return [by_deg.get(d, Fraction(0)) for d in range(top + 1)]


def pattern_derivative(p: SparsePoly, pattern: Partition) -> SparsePoly:
    """Apply the simple derivative whose index multiplicities are the parts of ``pattern``."""
    if pattern.length > p.nvars:
        raise ValueError(f"pattern {pattern} needs more than {p.nvars} variables")
    return p.derivative(list(pattern.parts))


def check_diagonal_vanishing(r: int, d: int, pattern: Partition, nvars: int) -> bool:
    """True when the pattern derivative of ``u_r`` restricts to zero on the total diagonal."""
    if pattern.weight != d:
        raise ValueError("pattern weight must equal d")
    q = pattern_derivative(u_poly(r, nvars), pattern)
    return not any(diagonal_restriction(q))


__all__ = [
    "BASES", "ConversionError", "NormalizationTag", "SymExpr", "build_u", "check_diagonal_vanishing",
    "convert_basis", "diagonal_restriction", "elementary", "elementary_in_power", "etilde_scale",
    "expand_product_rule", "exponential_bell", "monomial_symmetric", "normalized_elementary",
    "ordinary_bell", "pattern_derivative", "pattern_labels", "poly_to_e", "power_sum",
    "power_sum_in_e", "to_poly", "u_coefficient", "u_poly",
]
