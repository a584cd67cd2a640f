import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from symcoord.exact_algebra import (NotDivisibleError, PolyN, RationalFuncX, RationalOfN, SparsePoly,
                                    difference, divide_with_remainder, exact_divide, format_poly,
                                    parse_poly, vandermonde)

x, y, z = (SparsePoly.var(3, i) for i in range(3))


def polys(nvars=3, max_terms=5, max_exp=3):
    exps = st.tuples(*[st.integers(0, max_exp)] * nvars)
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: SparsePoly(nvars, d))


def test_zero_terms_dropped():
    p = SparsePoly(3, {(1, 0, 0): 1, (0, 1, 0): 0})
    assert len(p.terms) == 1
    assert (x - x).is_zero()


def test_nvars_bounds():
    with pytest.raises(ValueError):
        SparsePoly(13)
    with pytest.raises(ValueError):
        SparsePoly(2, {(1,): 1})


def test_float_coefficient_rejected():
    with pytest.raises(TypeError):
        SparsePoly(1, {(1,): 0.5})


def test_mismatched_rings():
    with pytest.raises(ValueError):
        x + SparsePoly.var(2, 0)


def test_mul_and_pow():
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert (x + y) ** 0 == SparsePoly.constant(3, 1)


def test_partial_and_derivative():
    p = x ** 3 * y
    assert p.partial(0) == 3 * x ** 2 * y
    assert p.partial(0, 3) == SparsePoly.constant(3, 6) * y
    assert p.derivative([2, 1, 0]) == 6 * x


def test_evaluate_exact_and_float():
    p = x * y - z.scale(F(1, 2))
    assert p.evaluate([F(1, 2), 4, 2]) == F(1)
    assert p.evaluate([0.5, 4.0, 2.0]) == pytest.approx(1.0)


def test_substitute_polynomials_and_values():
    p = x * x + y
    s = SparsePoly.var(1, 0)
    got = p.substitute({0: s + 1, 1: s, 2: s}, target_nvars=1)
    assert got == s * s + 3 * s + 1
    assert p.substitute({0: 2, 1: 3, 2: 0}) == 7


def test_exact_divide_linear_factor():
    p = (x - y) * (x + y) ** 2
    assert exact_divide(p, x - y) == (x + y) ** 2
    assert exact_divide(p, y - x) == -((x + y) ** 2)


def test_exact_divide_general():
    q = x * x + y * z + 1
    r = x * y - z + 3
    assert exact_divide(q * r, q) == r


def test_not_divisible_carries_remainder():
    with pytest.raises(NotDivisibleError) as info:
        exact_divide(x * x + 1, x - y)
    assert info.value.remainder == y * y + 1


def test_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        exact_divide(x, SparsePoly.zero(3))


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_division_identity(p, q):
    if q.is_zero():
        return
    quo, rem = divide_with_remainder(p, q)
    assert quo * q + rem == p


@settings(max_examples=60, deadline=None)
@given(polys(), st.sampled_from([(0, 1), (1, 2), (2, 0)]))
def test_product_with_difference_divides(p, ab):
    a, b = ab
    assert exact_divide(p * difference(3, a, b), difference(3, a, b)) == p


def test_vandermonde_is_antisymmetric():
    v = vandermonde(3, [0, 1, 2])
    assert v.swap(0, 1) == -v
    assert v.degree() == 3


def test_symmetry_check():
    assert (x * y + y * z + x * z).is_symmetric()
    assert not (x * y).is_symmetric()


def test_text_round_trip():
    p = x * x * F(-1, 8) + x * y * F(1, 4) - y * y * F(1, 8)
    text = format_poly(p)
    assert text.splitlines()[0] == "nvars=3"
    assert "-1/8 : 2 0 0" in text
    assert parse_poly(text) == p


@settings(max_examples=40)
@given(polys())
def test_text_round_trip_property(p):
    assert parse_poly(format_poly(p)) == p


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_poly("1/2 : 1 0")
    with pytest.raises(ValueError):
        parse_poly("nvars=2\n1/2 : 1 0 0")


def test_rational_function_reduces_when_possible():
    f = RationalFuncX(x * x - y * y, x - y)
    assert f.is_polynomial() and f.as_poly() == x + y
    g = RationalFuncX(x, x - y)
    assert not g.is_polynomial()
    assert g.evaluate([F(3), F(1), F(0)]) == F(3, 2)


def test_rational_function_derivative():
    # d/dx (1/(x - y)) = -1/(x - y)^2
    f = RationalFuncX(SparsePoly.constant(3, 1), x - y)
    d = f.partial(0)
    assert d == RationalFuncX(SparsePoly.constant(3, -1), (x - y) ** 2)


def test_rational_of_N_reduction_and_decay():
    f = RationalOfN([1], PolyN.falling(2)) - RationalOfN([1], [0, 0, 1])
    # 1/(N(N-1)) - 1/N^2 = 1/(N^2 (N-1))
    assert f == RationalOfN([1], [0, 0, -1, 1])
    assert f.decay_order() == 3
    assert RationalOfN([0]).decay_order() == math.inf


def test_rational_of_N_normal_form():
    f = RationalOfN([F(1, 2)], [-2, F(2, 3)])
    num, den = f.coefficient_lists()
    assert den[-1] > 0
    assert math.gcd(*(num + den)) == 1
    assert f.evaluate(6) == F(1, 2) / (-2 + 4)


def test_rational_of_N_gcd_cancels():
    f = RationalOfN(PolyN([-1, 0, 1]), PolyN([1, 1]))  # (N^2 - 1)/(N + 1)
    assert f == RationalOfN([-1, 1])
    assert f.decay_order() == -1


def test_rational_of_N_pole():
    with pytest.raises(ZeroDivisionError):
        RationalOfN([1], [0, 1]).evaluate(0)


@settings(max_examples=40)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), st.lists(st.integers(-5, 5), min_size=1, max_size=4),
       st.integers(7, 40))
def test_rational_of_N_arithmetic_matches_evaluation(a, b, n):
    pa, pb = PolyN(a), PolyN(b)
    if pb.is_zero() or pb.evaluate(n) == 0:
        return
    f = RationalOfN(pa, pb)
    g = RationalOfN([1, 1], [0, 0, 1])
    assert (f + g).evaluate(n) == f.evaluate(n) + g.evaluate(n)
    assert (f * g).evaluate(n) == f.evaluate(n) * g.evaluate(n)
