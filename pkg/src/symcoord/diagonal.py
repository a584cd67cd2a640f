"""Divided-difference operators at points where some variables coincide."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .combinatorics import (Partition, binomial, enumerate_A, enumerate_B, enumerate_partitions,
                            enumerate_Xi)
from .exact_algebra import SparsePoly
from .oracle import FunctionOracle
from .symmetric_basis import NormalizationTag, build_u, exponential_bell


class CoincidenceError(ValueError):
    """Values that should be distinct coincide."""


def _is_exact(values: Iterable) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _zero(values: Iterable):
    return Fraction(0) if _is_exact(values) else 0.0


# ---------------------------------------------------------------------------
# the combinations d^g


@dataclass(frozen=True)
class DiagDerivativeCombo:
    g: int
    terms: Mapping[Partition, Fraction]

    def __eq__(self, other):
        if not isinstance(other, DiagDerivativeCombo):
            return NotImplemented
        strip = lambda t: {k: v for k, v in t.items() if v}
        return self.g == other.g and strip(self.terms) == strip(other.terms)

    def __hash__(self):
        return hash((self.g, frozenset((k, v) for k, v in self.terms.items() if v)))

    def as_json(self) -> dict:
        return {str(k): f"{v.numerator}/{v.denominator}" for k, v in sorted(
            self.terms.items(), key=lambda kv: tuple(-p for p in kv[0].parts))}


def combo_coefficient(sigma: Partition) -> Fraction:
    """``(-1)^(g-l) g (l-1)! / prod_h (h!^m_h m_h!)``."""
    g, l = sigma.weight, sigma.length
    c = Fraction((-1) ** (g - l) * g * math.factorial(l - 1))
    for h, m in sigma.multiplicities.items():
        c /= math.factorial(h) ** m * math.factorial(m)
    return c


@lru_cache(maxsize=None)
def diag_combo(g: int) -> DiagDerivativeCombo:
    if g < 1:
        raise ValueError("g must be positive")
    return DiagDerivativeCombo(g, {s: combo_coefficient(s) for s in enumerate_partitions(g)})


class _Formal:
    """Formal linear combinations of partitions, multiplied by merging parts."""

    __slots__ = ("t",)

    def __init__(self, t=None):
        self.t = {k: v for k, v in (t or {}).items() if v}

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self.t)
        for k, v in other.t.items():
            out[k] = out.get(k, 0) + v
        return _Formal(out)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return _Formal({k: v * other for k, v in self.t.items()})
        out: dict[Partition, Fraction] = {}
        for k1, v1 in self.t.items():
            for k2, v2 in other.t.items():
                k = Partition.of(k1.parts + k2.parts)
                out[k] = out.get(k, 0) + v1 * v2
        return _Formal(out)

    __rmul__ = __mul__


def diag_combo_via_bell(g: int) -> DiagDerivativeCombo:
    """Exponential Bell form ``(-1)^g g sum_t ((t-1)!/g!) B_{g,t}(-z)``."""
    z = [_Formal({Partition((h,)): Fraction(-1)}) for h in range(1, g + 1)]
    total = _Formal()
    for t in range(1, g + 1):
        b = exponential_bell(g, t, z)
        if isinstance(b, _Formal):
            total = total + b * Fraction(math.factorial(t - 1), math.factorial(g))
    total = total * ((-1) ** g * g)
    return DiagDerivativeCombo(g, total.t)


@lru_cache(maxsize=None)
def diag_combo_via_recursion(g: int) -> DiagDerivativeCombo:
    """Build ``d^g`` from ``d^(g-mu)``, ``mu = 1..g-1``, by the limit recursion."""
    if g < 1:
        raise ValueError("g must be positive")
    acc: dict[Partition, Fraction] = {Partition((g,)): Fraction(1)}
    for mu in range(1, g):
        w = Fraction(math.factorial(g - 1), math.factorial(mu)) * (-1) ** (g - mu)
        for tau, c in diag_combo_via_recursion(g - mu).terms.items():
            key = tau.add_part(mu)
            acc[key] = acc.get(key, Fraction(0)) + w * c
    scale = Fraction(-((-1) ** g), math.factorial(g - 1))
    return DiagDerivativeCombo(g, {k: v * scale for k, v in acc.items() if v})


# ---------------------------------------------------------------------------
# symmetrized derivatives on a block


def symmetrized_partial(J: Sequence[int], sigma: Partition, phi: FunctionOracle, point: Sequence,
                        assignment: Sequence[int] | None = None):
    """``d_J^sigma phi``: parts of ``sigma`` go to the indices of ``J`` in ascending order.

    ``assignment`` overrides the order (a permutation of ``J``); by symmetry the value is the same.
    """
    order = list(assignment) if assignment is not None else sorted(J)
    if sigma.length > len(order):
        raise ValueError(f"pattern {sigma} has more parts than the block {sorted(J)} has indices")
    counts = [0] * phi.arity
    for idx, part in zip(order, sigma.parts):
        counts[idx] = part
    return phi.partial(counts, point)


def combo_value(J: Sequence[int], g: int, phi: FunctionOracle, point: Sequence):
    """``d_J^g phi`` at ``point``: the combination of symmetrized derivatives."""
    total = _zero(point)
    for sigma, c in diag_combo(g).terms.items():
        if sigma.length > len(J):
            continue
        v = symmetrized_partial(J, sigma, phi, point)
        total += c * v if isinstance(v, Fraction) else float(c) * v
    return total


# ---------------------------------------------------------------------------
# generic and one-block formulas for D_I


def generic_DI_value(I: Sequence[int], phi: FunctionOracle, point: Sequence):
    """``sum_{i in I} phi_i / prod_{j != i} (x_j - x_i)``, valid when the ``x_I`` are distinct."""
    I = sorted(I)
    total = _zero(point)
    for i in I:
        counts = [0] * phi.arity
        counts[i] = 1
        den = 1
        for j in I:
            if j != i:
                den *= point[j] - point[i]
        if den == 0:
            raise CoincidenceError(f"x_{i} coincides with another variable of I")
        total += phi.partial(counts, point) / den
    return total


def apply_DI_one_block(I: Sequence[int], J: Sequence[int], phi: FunctionOracle, point: Sequence):
    """``D_I phi`` where the variables of ``J`` share one value and the rest of ``I`` are distinct.

    ``point`` is a full point of the oracle's arity; the common value is read from ``J``.
    """
    I, J = sorted(set(I)), sorted(set(J))
    if not set(J) <= set(I) or not J:
        raise ValueError("J must be a nonempty subset of I")
    y = point[J[0]]
    if any(point[j] != y for j in J):
        raise CoincidenceError("the variables of J must share a single value")
    K = [k for k in I if k not in J]
    vals = [point[k] for k in K]
    if y in vals or len(set(vals)) != len(vals):
        raise CoincidenceError("variables outside J coincide; use a coarser pattern (apply_DI_general)")
    p = len(J)
    total = _zero(point)
    for k in K:
        counts = [0] * phi.arity
        counts[k] = 1
        den = (y - point[k]) ** p
        for l in K:
            if l != k:
                den *= point[l] - point[k]
        total += phi.partial(counts, point) / den
    for tup in enumerate_A(K, p - 1):
        den = 1
        for k, b in tup.b.items():
            den *= (point[k] - y) ** b
        total += (-1) ** (p - tup.a) * combo_value(J, tup.a, phi, point) / den
    return total


def apply_DI_general(blocks: Sequence[Sequence[int]], phi: FunctionOracle, point: Sequence):
    """``D_I`` with ``I`` the union of ``blocks``; each block shares one value, values distinct."""
    blocks = [sorted(b) for b in blocks]
    ys = []
    for b in blocks:
        if not b:
            raise ValueError("empty block")
        y = point[b[0]]
        if any(point[j] != y for j in b):
            raise CoincidenceError(f"block {b} does not share a single value")
        ys.append(y)
    if len(set(ys)) != len(ys):
        raise CoincidenceError("block values must be pairwise distinct")
    sizes = [len(b) for b in blocks]
    total = _zero(point)
    for alpha, block in enumerate(blocks):
        for tup in enumerate_B(sizes, alpha):
            coef = 1
            den = 1
            for beta, c in tup.c.items():
                coef *= binomial(c - 1, sizes[beta] - 1)
                den *= (ys[beta] - ys[alpha]) ** c
            sign = (-1) ** (sizes[alpha] - tup.a)
            total += sign * coef * combo_value(block, tup.a, phi, point) / den
    return total


# ---------------------------------------------------------------------------
# coincidence patterns and D_d at arbitrary points


@dataclass(frozen=True)
class CoincidencePattern:
    """Blocks ``H_alpha`` of equal coordinates (0-based indices) and their distinct values."""

    blocks: tuple[tuple[int, ...], ...]
    values: tuple

    def __post_init__(self):
        flat = sorted(i for b in self.blocks for i in b)
        if flat != list(range(len(flat))):
            raise ValueError("blocks must partition {0..N-1}")
        if any(not b for b in self.blocks):
            raise ValueError("blocks must be nonempty")
        if len(self.values) != len(self.blocks):
            raise ValueError("one value per block")
        if len(set(self.values)) != len(self.values):
            raise CoincidenceError("block values must be distinct")

    @property
    def nvars(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def shape(self) -> Partition:
        return Partition.of(self.sizes)

    def point(self) -> list:
        pt = [None] * self.nvars
        for b, y in zip(self.blocks, self.values):
            for i in b:
                pt[i] = y
        return pt

    def describe(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks], "shape": str(self.shape()),
                "values": [str(v) for v in self.values]}


def detect_pattern(point: Sequence, rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> CoincidencePattern:
    """Group equal coordinates into blocks.

    Rational inputs are grouped by exact equality. Floats are grouped with the first block
    whose representative is within ``rel_tol`` (or ``abs_tol``); the grouped coordinates are
    snapped to that representative.
    """
    exact = _is_exact(point)
    blocks: list[list[int]] = []
    reps: list = []
    for i, v in enumerate(point):
        for b, rep in zip(blocks, reps):
            same = v == rep if exact else math.isclose(v, rep, rel_tol=rel_tol, abs_tol=abs_tol)
            if same:
                b.append(i)
                break
        else:
            blocks.append([i])
            reps.append(Fraction(v) if exact else float(v))
    return CoincidencePattern(tuple(tuple(b) for b in blocks), tuple(reps))


@lru_cache(maxsize=None)
def _dd_coefficient(d: int, size_alpha: int, others: tuple[tuple[int, int], ...]) -> int:
    """``C_{alpha,c}`` for ``others = ((c_beta, |H_beta|), ...)``."""
    cs = {i: c for i, (c, _) in enumerate(others)}
    total = 0
    for kappa in enumerate_Xi(cs):
        sk = sum(kappa.values())
        term = binomial(size_alpha, d - sk)
        if not term:
            continue
        for i, (c, hsize) in enumerate(others):
            if c > 0:
                term *= binomial(c - 1, kappa[i] - 1) * binomial(hsize, kappa[i])
        sign = (-1) ** sum(c - kappa[i] for i, (c, _) in enumerate(others))
        total += sign * term
    return total


def apply_Dd_at_point(d: int, pattern: CoincidencePattern, phi: FunctionOracle):
    """``D_d phi`` at the point described by ``pattern`` (any coincidences allowed)."""
    n = pattern.nvars
    if not 1 <= d <= n:
        raise ValueError(f"D_d needs 1 <= d <= N, got d={d}, N={n}")
    point = pattern.point()
    sizes, ys = pattern.sizes, pattern.values
    M = len(sizes)
    total = _zero(point)
    for alpha in range(M):
        others = [beta for beta in range(M) if beta != alpha]
        for cvec in itertools.product(range(d), repeat=len(others)):
            sc = sum(cvec)
            if sc >= d or d - sc > sizes[alpha]:
                continue
            coef = _dd_coefficient(d, sizes[alpha], tuple((c, sizes[b]) for c, b in zip(cvec, others)))
            if not coef:
                continue
            den = 1
            for c, beta in zip(cvec, others):
                if c:
                    den *= (ys[beta] - ys[alpha]) ** c
            total += coef * combo_value(pattern.blocks[alpha], d - sc, phi, point) / den
    return math.factorial(d) * total


def total_diagonal_Dhat(d: int, phi: FunctionOracle, a):
    """``D-hat_d phi`` at ``(a, ..., a)``, which is ``d^d`` over all variables."""
    n = phi.arity
    if not 1 <= d <= n:
        raise ValueError(f"D-hat_d needs 1 <= d <= N, got d={d}, N={n}")
    return combo_value(range(n), d, phi, [a] * n)


def trace_total_diagonal(d: int, f_derivative_d):
    """``(-1)^(d-1) f^(d)(a) / (d-1)!`` given ``f^(d)(a)``."""
    return (-1) ** (d - 1) * f_derivative_d / math.factorial(d - 1)


def naive_diagonal_composition(d1: int, d2: int, phi: FunctionOracle, a):
    """Composition of the two diagonal-only formulas, which is not the true ``D-hat_{d1} D-hat_{d2}``.

    Multiplies the combinations term by term, stacking both patterns on the leading indices.
    """
    n = phi.arity
    point = [a] * n
    total = _zero(point)
    for s1, c1 in diag_combo(d1).terms.items():
        for s2, c2 in diag_combo(d2).terms.items():
            if max(s1.length, s2.length) > n:
                continue
            counts = [0] * n
            for i, part in enumerate(s1.parts):
                counts[i] += part
            for i, part in enumerate(s2.parts):
                counts[i] += part
            total += c1 * c2 * phi.partial(counts, point)
    return total


# ---------------------------------------------------------------------------
# local coordinates


@dataclass
class BlockChart:
    block: tuple[int, ...]
    value: object
    coordinates: list[SparsePoly]  # u-hat_r in |block| variables, r = 1..|block|
    directions: list[str]


def local_coordinates(pattern: CoincidencePattern, tag: NormalizationTag = NormalizationTag.HAT_U) -> list[BlockChart]:
    """Per block ``H``: the coordinates ``u-hat_r(x_H)``, ``r = 1..|H|``, and the derivative each yields."""
    charts = []
    for block, y in zip(pattern.blocks, pattern.values):
        m = len(block)
        coords = [build_u(r, m, tag)[1] for r in range(1, m + 1)]
        names = ",".join(str(i) for i in block)
        dirs = [f"d^{r} over {{{names}}}" for r in range(1, m + 1)]
        charts.append(BlockChart(tuple(block), y, coords, dirs))
    return charts


def local_derivatives(pattern: CoincidencePattern, phi: FunctionOracle) -> list[list]:
    """Values ``d^r_{H} phi`` for every block ``H`` and ``r = 1..|H|``."""
    point = pattern.point()
    return [[combo_value(block, r, phi, point) for r in range(1, len(block) + 1)] for block in pattern.blocks]


__all__ = [
    "BlockChart", "CoincidenceError", "CoincidencePattern", "DiagDerivativeCombo", "apply_DI_general",
    "apply_DI_one_block", "apply_Dd_at_point", "combo_coefficient", "combo_value", "detect_pattern",
    "diag_combo", "diag_combo_via_bell", "diag_combo_via_recursion", "generic_DI_value",
    "local_coordinates", "local_derivatives", "naive_diagonal_composition", "symmetrized_partial",
    "total_diagonal_Dhat", "trace_total_diagonal",
]
