"""Function oracles: symmetric functions that can be evaluated and differentiated at a point."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

from .exact_algebra import SparsePoly


def _is_exact(point: Sequence) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in point)


class FunctionOracle:
    """Base interface. ``partial(counts, point)`` returns the mixed partial with ``counts[i]``
    derivatives in ``x_i``; ``exact`` tells whether that value is exact for rational points."""

    kind = "abstract"
    exact = False

    def __init__(self, arity: int):
        self.arity = arity

    def __call__(self, point: Sequence):
        return self.partial((0,) * self.arity, point)

    def partial(self, counts: Sequence[int], point: Sequence):
        raise NotImplementedError

    def as_poly(self) -> SparsePoly | None:
        return None


class PolynomialOracle(FunctionOracle):
    """Exact oracle backed by a :class:`SparsePoly`."""

    kind = "polynomial"
    exact = True

    def __init__(self, poly: SparsePoly):
        super().__init__(poly.nvars)
        self.poly = poly
        self._cache: dict[tuple[int, ...], SparsePoly] = {}

    def derivative_poly(self, counts: Sequence[int]) -> SparsePoly:
        key = tuple(counts)
        if key not in self._cache:
            self._cache[key] = self.poly.derivative(list(key))
        return self._cache[key]

    def partial(self, counts, point):
        if len(counts) != self.arity or len(point) != self.arity:
            raise ValueError("counts and point must match the arity")
        return self.derivative_poly(counts).evaluate(point)

    def as_poly(self) -> SparsePoly:
        return self.poly


class TraceOracle(FunctionOracle):
    """``phi(x) = sum_i f(x_i)`` for a univariate polynomial ``f`` (coefficients ascending)."""

    kind = "trace"
    exact = True

    def __init__(self, arity: int, coeffs: Sequence):
        super().__init__(arity)
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    def f_derivative(self, k: int, x):
        """``f^{(k)}(x)``, exact for rational ``x``."""
        exact = isinstance(x, (int, Fraction))
        total = Fraction(0) if exact else 0.0
        for n in range(len(self.coeffs) - 1, k - 1, -1):
            c = self.coeffs[n] * math.perm(n, k)
            total = total * x + (c if exact else float(c))
        return total

    def partial(self, counts, point):
        if len(counts) != self.arity or len(point) != self.arity:
            raise ValueError("counts and point must match the arity")
        active = [i for i, k in enumerate(counts) if k]
        if len(active) > 1:
            return Fraction(0) if _is_exact(point) else 0.0
        if not active:
            total = Fraction(0) if _is_exact(point) else 0.0
            for x in point:
                total += self.f_derivative(0, x)
            return total
        i = active[0]
        return self.f_derivative(counts[i], point[i])

    def as_poly(self) -> SparsePoly:
        terms = {}
        for i in range(self.arity):
            for n, c in enumerate(self.coeffs):
                if c:
                    exp = [0] * self.arity
                    exp[i] = n
                    terms[tuple(exp)] = terms.get(tuple(exp), 0) + c
        return SparsePoly(self.arity, terms)


class BlackBoxOracle(FunctionOracle):
    """Float-only oracle; derivatives by central finite differences with one Richardson step."""

    kind = "black-box"
    exact = False

    def __init__(self, arity: int, func: Callable[[Sequence[float]], float], fd_step: float = 1e-3):
        super().__init__(arity)
        self.func = func
        self.fd_step = fd_step

    def partial(self, counts, point):
        from .numeric import fd_partial

        return fd_partial(self.func, counts, [float(v) for v in point], self.fd_step)


__all__ = ["BlackBoxOracle", "FunctionOracle", "PolynomialOracle", "TraceOracle"]
