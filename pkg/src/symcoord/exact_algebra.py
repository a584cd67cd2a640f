"""Exact sparse polynomials over the rationals, rational functions, and rational functions of N."""

from __future__ import annotations

import math
from functools import lru_cache
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]

MAX_NVARS = 12


class NotDivisibleError(ArithmeticError):
    """Raised by :func:`exact_divide` when the remainder is nonzero."""

    def __init__(self, message: str, remainder: "SparsePoly"):
        super().__init__(message)
        self.remainder = remainder


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class SparsePoly:
    """Polynomial in ``x_1..x_N`` stored as ``{exponent tuple: Fraction}`` with no zero entries.

    Treat instances as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Scalar] | None = None, *, _trusted: bool = False):
        if not 0 <= nvars <= MAX_NVARS:
            raise ValueError(f"nvars must be in 0..{MAX_NVARS}, got {nvars}")
        self.nvars = nvars
        if _trusted:
            self.terms = terms
            return
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = _frac(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def constant(cls, nvars: int, c: Scalar) -> "SparsePoly":
        c = _frac(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "SparsePoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): Fraction(1)}, _trusted=True)

    @classmethod
    def monomial(cls, exp: Sequence[int], c: Scalar = 1) -> "SparsePoly":
        return cls(len(exp), {tuple(exp): c})

    # queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in descending lexicographic exponent order."""
        return sorted(self.terms.items(), reverse=True)

    def _check(self, other: "SparsePoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"mismatched nvars: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        return SparsePoly.constant(self.nvars, other)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "SparsePoly":
        if not isinstance(other, (SparsePoly, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return SparsePoly(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "SparsePoly":
        if not isinstance(other, (SparsePoly, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "SparsePoly":
        c = _frac(c)
        if not c:
            return SparsePoly.zero(self.nvars)
        return SparsePoly(self.nvars, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
        return SparsePoly(self.nvars, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = SparsePoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(self.nvars, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # calculus and substitution --------------------------------------------

    def partial(self, i: int, order: int = 1) -> "SparsePoly":
        """``order``-th partial derivative in ``x_i`` (0-based index)."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k < order:
                continue
            ff = math.perm(k, order)
            new = list(e)
            new[i] = k - order
            out[tuple(new)] = c * ff
        return SparsePoly(self.nvars, out, _trusted=True)

    def derivative(self, counts: Mapping[int, int] | Sequence[int]) -> "SparsePoly":
        """Mixed partial with ``counts[i]`` derivatives in ``x_i``."""
        items = counts.items() if isinstance(counts, Mapping) else enumerate(counts)
        p = self
        for i, k in items:
            if k:
                p = p.partial(i, k)
        return p

    def evaluate(self, point: Sequence):
        """Value at ``point``; exact (Fraction) for rational input, float otherwise."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        exact = all(isinstance(v, (int, Fraction)) for v in point)
        if exact:
            point = [Fraction(v) for v in point]
            total = Fraction(0)
        else:
            point = [float(v) for v in point]
            total = 0.0
        for e, c in self.terms.items():
            term = c if exact else float(c)
            for v, k in zip(point, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def substitute(self, assignment: Mapping[int, object], target_nvars: int | None = None):
        """Replace variables by numbers or by polynomials in ``target_nvars`` variables.

        Unassigned variables are kept (they must fit in the target ring). When every
        variable receives a number the result is a number.
        """
        if len(assignment) == self.nvars and all(not isinstance(v, SparsePoly) for v in assignment.values()):
            return self.evaluate([assignment[i] for i in range(self.nvars)])
        if target_nvars is None:
            polys = [v for v in assignment.values() if isinstance(v, SparsePoly)]
            target_nvars = polys[0].nvars if polys else self.nvars
        images = []
        for i in range(self.nvars):
            if i in assignment:
                v = assignment[i]
                images.append(v if isinstance(v, SparsePoly) else SparsePoly.constant(target_nvars, v))
            else:
                if i >= target_nvars:
                    raise ValueError(f"unassigned variable {i} does not exist in the target ring")
                images.append(SparsePoly.var(target_nvars, i))
        powers: dict[tuple[int, int], SparsePoly] = {}
        result = SparsePoly.zero(target_nvars)
        for e, c in self.terms.items():
            term = SparsePoly.constant(target_nvars, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = images[i] ** k
                    term = term * powers[key]
            result = result + term
        return result

    def swap(self, i: int, j: int) -> "SparsePoly":
        """Interchange ``x_i`` and ``x_j``."""
        out = {}
        for e, c in self.terms.items():
            new = list(e)
            new[i], new[j] = new[j], new[i]
            out[tuple(new)] = c
        return SparsePoly(self.nvars, out, _trusted=True)

    def is_symmetric(self) -> bool:
        return all(self.swap(i, i + 1) == self for i in range(self.nvars - 1))

    def embed(self, nvars: int, index_map: Sequence[int]) -> "SparsePoly":
        """Relabel variable ``i`` as ``index_map[i]`` in a ring of ``nvars`` variables."""
        out = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, k in enumerate(e):
                new[index_map[i]] += k
            out[tuple(new)] = c
        return SparsePoly(nvars, out, _trusted=True)

    # display --------------------------------------------------------------

    def __repr__(self):
        return f"SparsePoly({self.nvars}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = _var_names(self.nvars)
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k)
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{c}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def to_text(self) -> str:
        return format_poly(self)


def _var_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


# ---------------------------------------------------------------------------
# division


def _linear_difference(q: SparsePoly) -> tuple[Fraction, int, int] | None:
    """Detect ``q = s * (x_a - x_b)``; returns ``(s, a, b)``."""
    if len(q.terms) != 2:
        return None
    (e1, c1), (e2, c2) = q.terms.items()
    if sum(e1) != 1 or sum(e2) != 1 or c1 != -c2:
        return None
    a, b = e1.index(1), e2.index(1)
    return c1, a, b


def _divide_by_difference(p: SparsePoly, a: int, b: int) -> tuple[SparsePoly, SparsePoly]:
    """Divide by ``x_a - x_b`` treating ``p`` as a polynomial in ``x_a``.

    Returns ``(quotient, remainder)``; the remainder does not involve ``x_a``.
    """
    n = p.nvars
    by_deg: dict[int, dict[Exponent, Fraction]] = {}
    for e, c in p.terms.items():
        k = e[a]
        rest = e[:a] + (0,) + e[a + 1:]
        by_deg.setdefault(k, {})[rest] = c
    if not by_deg:
        return SparsePoly.zero(n), SparsePoly.zero(n)
    top = max(by_deg)
    quotient: dict[Exponent, Fraction] = {}
    carry: dict[Exponent, Fraction] = {}
    # coefficient recursion q_{k-1} = c_k + x_b * q_k, from the top degree down
    for k in range(top, 0, -1):
        cur = dict(by_deg.get(k, {}))
        for e, c in carry.items():
            cur[e] = cur.get(e, 0) + c
        cur = {e: c for e, c in cur.items() if c}
        carry = {}
        for e, c in cur.items():
            qe = e[:a] + (k - 1,) + e[a + 1:]
            quotient[qe] = c
            shifted = list(e)
            shifted[b] += 1
            carry[tuple(shifted)] = c
    rem = dict(by_deg.get(0, {}))
    for e, c in carry.items():
        rem[e] = rem.get(e, 0) + c
    return SparsePoly(n, quotient, _trusted=True), SparsePoly(n, {e: c for e, c in rem.items() if c}, _trusted=True)


def divide_with_remainder(p: SparsePoly, q: SparsePoly) -> tuple[SparsePoly, SparsePoly]:
    """Multivariate division in lex order: ``p = q * quotient + remainder``."""
    p._check(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lin = _linear_difference(q)
    if lin is not None:
        s, a, b = lin
        quo, rem = _divide_by_difference(p, a, b)
        return quo.scale(1 / s), rem
    lead_e, lead_c = max(q.terms.items())
    rest = {e: c for e, c in q.terms.items() if e != lead_e}
    work = dict(p.terms)
    quotient: dict[Exponent, Fraction] = {}
    remainder: dict[Exponent, Fraction] = {}
    while work:
        e = max(work)
        c = work.pop(e)
        if all(x >= y for x, y in zip(e, lead_e)):
            shift = tuple(x - y for x, y in zip(e, lead_e))
            t = c / lead_c
            quotient[shift] = quotient.get(shift, 0) + t
            for re, rc in rest.items():
                ne = tuple(x + y for x, y in zip(re, shift))
                v = work.get(ne, 0) - t * rc
                if v:
                    work[ne] = v
                else:
                    work.pop(ne, None)
        else:
            remainder[e] = c
    n = p.nvars
    return (SparsePoly(n, {e: c for e, c in quotient.items() if c}, _trusted=True),
            SparsePoly(n, remainder, _trusted=True))


def exact_divide(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """Quotient ``p / q``; raises :class:`NotDivisibleError` carrying the remainder otherwise."""
    quo, rem = divide_with_remainder(p, q)
    if not rem.is_zero():
        raise NotDivisibleError(f"polynomial is not divisible by {q}", rem)
    return quo


def difference(nvars: int, i: int, j: int) -> SparsePoly:
    """The linear form ``x_i - x_j``."""
    return SparsePoly.var(nvars, i) - SparsePoly.var(nvars, j)


def vandermonde(nvars: int, indices: Sequence[int]) -> SparsePoly:
    """``prod_{a<b} (x_{I[a]} - x_{I[b]})`` over the index list in the given order."""
    return _vandermonde(nvars, tuple(indices))


@lru_cache(maxsize=4096)
def _vandermonde(nvars: int, indices: tuple[int, ...]) -> SparsePoly:
    v = SparsePoly.constant(nvars, 1)
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            v = v * difference(nvars, indices[a], indices[b])
    return v


# ---------------------------------------------------------------------------
# rational functions in x


class RationalFuncX:
    """Quotient of two :class:`SparsePoly`; reduced only when the denominator divides exactly."""

    __slots__ = ("num", "den")

    def __init__(self, num: SparsePoly, den: SparsePoly | None = None):
        if den is None:
            den = SparsePoly.constant(num.nvars, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not den.is_constant():
            try:
                num, den = exact_divide(num, den), SparsePoly.constant(num.nvars, 1)
            except NotDivisibleError:
                pass
        if den.is_constant():
            c = den.constant_value()
            num, den = num.scale(1 / c), SparsePoly.constant(num.nvars, 1)
        self.num, self.den = num, den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> SparsePoly:
        if not self.is_polynomial():
            raise ValueError("rational function is not a polynomial")
        return self.num

    def _lift(self, other) -> "RationalFuncX":
        if isinstance(other, RationalFuncX):
            return other
        if isinstance(other, SparsePoly):
            return RationalFuncX(other)
        return RationalFuncX(SparsePoly.constant(self.nvars, other))

    def __add__(self, other):
        other = self._lift(other)
        if self.den == other.den:
            return RationalFuncX(self.num + other.num, self.den)
        return RationalFuncX(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFuncX(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        return RationalFuncX(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return RationalFuncX(self.num * other.den, self.den * other.num)

    def partial(self, i: int) -> "RationalFuncX":
        return RationalFuncX(self.num.partial(i) * self.den - self.num * self.den.partial(i), self.den * self.den)

    def evaluate(self, point):
        return self.num.evaluate(point) / self.den.evaluate(point)

    def __eq__(self, other):
        if isinstance(other, (SparsePoly, int, Fraction)):
            other = self._lift(other)
        if not isinstance(other, RationalFuncX):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __repr__(self):
        return f"RationalFuncX(({self.num}) / ({self.den}))"


# ---------------------------------------------------------------------------
# univariate polynomials and rational functions in the symbol N


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class PolyN:
    """Univariate polynomial in N, coefficients in ascending powers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim(coeffs)

    @classmethod
    def falling(cls, h: int) -> "PolyN":
        """``N!/(N-h)! = N (N-1) ... (N-h+1)``."""
        p = cls([1])
        for j in range(h):
            p = p * cls([-j, 1])
        return p

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __add__(self, other: "PolyN") -> "PolyN":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyN(x + y for x, y in zip(a, b))

    def __neg__(self):
        return PolyN(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PolyN(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return PolyN()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyN(out)

    __rmul__ = __mul__

    def divmod(self, other: "PolyN") -> tuple["PolyN", "PolyN"]:
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial in N")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        while len(rem) >= len(other.coeffs) and any(rem):
            shift = len(rem) - len(other.coeffs)
            t = rem[-1] / other.lead()
            q[shift] = t
            for i, c in enumerate(other.coeffs):
                rem[i + shift] -= t * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return PolyN(q), PolyN(rem)

    def evaluate(self, n):
        total = Fraction(0) if isinstance(n, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            total = total * n + (c if isinstance(total, Fraction) else float(c))
        return total

    def __eq__(self, other):
        return isinstance(other, PolyN) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyN({[str(c) for c in self.coeffs]})"


def poly_gcd(a: PolyN, b: PolyN) -> PolyN:
    """Monic gcd over the rationals."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    if a.is_zero():
        return a
    return a * (1 / a.lead())


def _integer_content_scale(coeffs: Sequence[Fraction]) -> Fraction:
    """Scalar making the coefficients coprime integers."""
    den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    nums = [int(c * den) for c in coeffs]
    g = math.gcd(*nums) if nums else 1
    return Fraction(den, g or 1)


class RationalOfN:
    """Reduced quotient of integer polynomials in N; the denominator has positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyN | Iterable, den: PolyN | Iterable | None = None):
        num = num if isinstance(num, PolyN) else PolyN(num)
        den = PolyN([1]) if den is None else (den if isinstance(den, PolyN) else PolyN(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in N")
        if num.is_zero():
            self.num, self.den = PolyN(), PolyN([1])
            return
        g = poly_gcd(num, den)
        if g.degree() > 0:
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        # clear denominators jointly, then remove common integer content
        scale = Fraction(math.lcm(*(c.denominator for c in num.coeffs + den.coeffs)))
        num, den = num * scale, den * scale
        g = math.gcd(*(int(c) for c in num.coeffs + den.coeffs))
        num, den = num * Fraction(1, g), den * Fraction(1, g)
        if den.lead() < 0:
            num, den = -num, -den
        self.num, self.den = num, den

    @classmethod
    def const(cls, c: Scalar) -> "RationalOfN":
        return cls(PolyN([c]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def decay_order(self) -> float:
        """``deg(den) - deg(num)``; ``inf`` for the zero function."""
        if self.is_zero():
            return math.inf
        return self.den.degree() - self.num.degree()

    def evaluate(self, n):
        d = self.den.evaluate(n)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at N={n}")
        return self.num.evaluate(n) / d

    def leading_ratio(self) -> Fraction:
        """Coefficient ``c`` with ``f(N) ~ c / N^decay``."""
        if self.is_zero():
            return Fraction(0)
        return self.num.lead() / self.den.lead()

    def _lift(self, other) -> "RationalOfN":
        return other if isinstance(other, RationalOfN) else RationalOfN.const(other)

    def __add__(self, other):
        other = self._lift(other)
        return RationalOfN(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalOfN(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        return RationalOfN(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function of N")
        return RationalOfN(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalOfN.const(other)
        if not isinstance(other, RationalOfN):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def coefficient_lists(self) -> tuple[list[int], list[int]]:
        """Integer coefficient lists (ascending powers of N)."""
        return [int(c) for c in self.num.coeffs], [int(c) for c in self.den.coeffs]

    def to_text(self) -> str:
        num, den = self.coefficient_lists()
        return f"{num or [0]} / {den}"

    def __repr__(self):
        return f"RationalOfN({self.to_text()})"


# ---------------------------------------------------------------------------
# text format


def format_poly(p: SparsePoly) -> str:
    """``nvars=<N>`` header, then ``<num>/<den> : <e_1> ... <e_N>`` per term (lex-descending)."""
    lines = [f"nvars={p.nvars}"]
    for e, c in p.sorted_terms():
        lines.append(f"{c.numerator}/{c.denominator} : " + " ".join(map(str, e)))
    return "\n".join(lines) + "\n"


def parse_poly(text: str) -> SparsePoly:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("nvars="):
        raise ValueError("polynomial text must start with 'nvars=<N>'")
    n = int(lines[0].split("=", 1)[1])
    terms: dict[Exponent, Fraction] = {}
    for ln in lines[1:]:
        coeff, _, exps = ln.partition(":")
        exp = tuple(int(t) for t in exps.split())
        if len(exp) != n:
            raise ValueError(f"expected {n} exponents in line {ln!r}")
        terms[exp] = terms.get(exp, Fraction(0)) + Fraction(coeff.strip())
    return SparsePoly(n, terms)
