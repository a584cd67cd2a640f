import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import elementary_value, u_value
from symcoord.combinatorics import Partition as P, enumerate_partitions
from symcoord.exact_algebra import SparsePoly
from symcoord.symmetric_basis import (ConversionError, NormalizationTag, SymExpr, _u_bell, _u_partition_sum,
                                      build_u, check_diagonal_vanishing, convert_basis, diagonal_restriction,
                                      elementary, expand_product_rule, exponential_bell, normalized_elementary,
                                      ordinary_bell, power_sum, power_sum_in_e, u_poly)
from oracles import exponential_bell_bruteforce

x, y, z = (SparsePoly.var(3, i) for i in range(3))


def test_elementary_examples():
    assert elementary(2, 3) == x * y + x * z + y * z
    assert elementary(4, 3).is_zero()
    assert elementary(0, 3) == SparsePoly.constant(3, 1)
    assert elementary(1, 3, [0, 2]) == x + z


@pytest.mark.parametrize("n", range(1, 6))
def test_elementary_against_generating_polynomial(n):
    rng = random.Random(n)
    pt = [F(rng.randrange(-7, 8), rng.randrange(1, 4)) for _ in range(n)]
    for h in range(n + 2):
        assert elementary(h, n).evaluate(pt) == elementary_value(h, pt)


def test_normalized_elementary():
    a = F(5, 3)
    assert normalized_elementary(1, 3).evaluate([a] * 3) == a
    x2, y2 = SparsePoly.var(2, 0), SparsePoly.var(2, 1)
    assert normalized_elementary(2, 2) == (x2 * y2).scale(F(1, 2))
    assert normalized_elementary(2, 4).evaluate([a] * 4) == a * a / 2
    assert normalized_elementary(5, 4).is_zero()


def test_expand_product_rule():
    n = 3
    for h in range(4):
        pairs = expand_product_rule(h, [0, 1], n)
        total = SparsePoly.zero(n)
        for a, b in pairs:
            total = total + a * b
        assert total == elementary(h, n)
    assert len(expand_product_rule(0, [0, 1], n)) == 1
    assert expand_product_rule(2, [], n) == [(SparsePoly.constant(n, 1), elementary(2, n))]


def test_power_sum():
    x2, y2 = SparsePoly.var(2, 0), SparsePoly.var(2, 1)
    assert power_sum(2, 2) == x2 * x2 + y2 * y2
    assert power_sum(1, 4) == elementary(1, 4)
    p3 = convert_basis(SymExpr(2, "e", power_sum_in_e(3, 2)), "e").to_poly()
    assert p3 == x2 ** 3 + y2 ** 3


def test_ordinary_bell_examples():
    assert ordinary_bell(2, 1, [5, 7]) == 7
    assert ordinary_bell(2, 2, [5]) == 25
    assert ordinary_bell(0, 0, []) == 1


@settings(max_examples=40)
@given(st.integers(1, 7).flatmap(lambda r: st.tuples(st.just(r), st.integers(1, r))),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=7, max_size=7))
def test_ordinary_bell_routes_and_sign_law(rt, z):
    r, t = rt
    a = ordinary_bell(r, t, z)
    assert a == ordinary_bell(r, t, z, method="recurrence")
    assert ordinary_bell(r, t, [-v for v in z]) == (-1) ** t * a


@pytest.mark.parametrize("n,k", [(3, 2), (4, 2), (5, 3), (6, 1), (6, 6)])
def test_exponential_bell_against_set_partitions(n, k):
    z = [F(i + 2, i + 1) for i in range(n)]
    assert exponential_bell(n, k, z) == exponential_bell_bruteforce(n, k, z)


def test_u_examples():
    e1 = SymExpr.single(3, "etilde", (1,))
    assert build_u(1, 3)[0] == e1
    assert build_u(1, 3)[1] == (x + y + z).scale(F(1, 3))
    expr, poly = build_u(2, 2)
    assert dict(expr.coeffs) == {P((2,)): 1, P((1, 1)): F(-1, 2)}
    x2, y2 = SparsePoly.var(2, 0), SparsePoly.var(2, 1)
    assert poly == ((x2 - y2) ** 2).scale(F(-1, 8))
    assert dict(build_u(3, 4)[0].coeffs) == {P((3,)): 1, P((2, 1)): -1, P((1, 1, 1)): F(1, 3)}


def test_uhat_2_in_e_basis():
    for n in range(2, 7):
        got = convert_basis(build_u(2, n, NormalizationTag.HAT_U)[0], "e")
        assert dict(got.coeffs) == {P((2,)): 1, P((1, 1)): -F(n - 1, 2 * n)}


def test_uhat_2_two_variables_sign():
    # expansion gives -(x-y)^2/4
    x2, y2 = SparsePoly.var(2, 0), SparsePoly.var(2, 1)
    assert build_u(2, 2, NormalizationTag.HAT_U)[1] == ((x2 - y2) ** 2).scale(F(-1, 4))


def test_u_out_of_range():
    with pytest.raises(ValueError):
        build_u(4, 3)


@pytest.mark.parametrize("n", range(1, 9))
def test_partition_sum_equals_bell(n):
    for r in range(1, n + 1):
        assert _u_partition_sum(r, n) == _u_bell(r, n)


@pytest.mark.parametrize("n", range(1, 7))
def test_u_against_log_series(n):
    rng = random.Random(100 + n)
    for r in range(1, n + 1):
        pt = [F(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in range(n)]
        assert u_poly(r, n).evaluate(pt) == u_value(r, pt)


@pytest.mark.parametrize("n", range(1, 7))
def test_u_homogeneous_symmetric_euler(n):
    for r in range(1, n + 1):
        u = u_poly(r, n)
        assert u.is_homogeneous() and u.degree() == r
        assert u.is_symmetric()
        euler = SparsePoly.zero(n)
        for i in range(n):
            euler = euler + SparsePoly.var(n, i) * u.partial(i)
        assert euler == u.scale(r)


def test_u_8_homogeneous_symmetric():
    u = u_poly(4, 8)
    assert u.is_homogeneous() and u.is_symmetric()


@pytest.mark.parametrize("n", range(1, 7))
def test_u_on_the_diagonal(n):
    assert diagonal_restriction(u_poly(1, n)) == [0, 1]
    for r in range(2, n + 1):
        assert diagonal_restriction(u_poly(r, n)) == []


def test_u_leading_coefficient_is_one():
    for n in range(1, 8):
        for r in range(1, n + 1):
            assert build_u(r, n)[0].coefficient((r,)) == 1


def test_product_of_coordinates_vanishes_to_order_r():
    n = 5
    u22 = u_poly(2, n) * u_poly(2, n)
    for d in range(1, 4):
        for sigma in enumerate_partitions(d):
            if sigma.length <= n:
                q = u22.derivative(list(sigma.parts))
                assert not any(diagonal_restriction(q))


@pytest.mark.parametrize("tag,factor", [
    (NormalizationTag.PAPER_U, lambda r, n: 1),
    (NormalizationTag.HAT_U, lambda r, n: F(120, {1: 24, 2: 6, 3: 2}[r])),
    (NormalizationTag.SIGNED_POWER, lambda r, n: (-1) ** (r - 1) * r * F(120, {1: 24, 2: 6, 3: 2}[r])),
    (NormalizationTag.TAYLOR, lambda r, n: F((-1) ** (r - 1), [1, 1, 2][r - 1]) * F(120, {1: 24, 2: 6, 3: 2}[r])),
])
def test_normalization_tags(tag, factor):
    n = 5
    for r in (1, 2, 3):
        assert build_u(r, n, tag)[1] == u_poly(r, n).scale(factor(r, n))


def test_tag_parse():
    assert NormalizationTag.parse("signed_power") is NormalizationTag.SIGNED_POWER
    assert NormalizationTag.parse("hat") is NormalizationTag.HAT_U


def test_power_sum_in_u_basis_two_variables():
    p2 = SymExpr.single(2, "power", (2,))
    assert dict(convert_basis(p2, "u").coeffs) == {P((1, 1)): 2, P((2,)): -4}


def test_newton_against_bell():
    for r in range(1, 7):
        via_newton = power_sum_in_e(r)
        z = [SymExpr.single(r, "e", (h,), -1) for h in range(1, r + 1)]
        bell = SymExpr(r, "e")
        for t in range(1, r + 1):
            bell = bell + ordinary_bell(r, t, z) * F(1, t)
        bell = bell * ((-1) ** r * r)
        assert dict(bell.coeffs) == dict(via_newton)


basis_elements = st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n),
    st.dictionaries(st.integers(0, 4).flatmap(lambda r: st.sampled_from(enumerate_partitions(r))),
                    st.fractions(min_value=-3, max_value=3, max_denominator=3), max_size=3)))


@settings(max_examples=40, deadline=None)
@given(basis_elements, st.sampled_from(["etilde", "monomial", "power", "u"]))
def test_round_trip_through_each_basis(data, target):
    n, coeffs = data
    expr = SymExpr(n, "e", coeffs)
    there = convert_basis(expr, target)
    assert there.to_poly() == expr.to_poly()
    assert convert_basis(there, "e") == expr


def test_u_basis_rejects_large_parts():
    with pytest.raises(ConversionError):
        SymExpr(2, "u", {P((3,)): 1})


def test_non_symmetric_rejected():
    with pytest.raises(ConversionError):
        from symcoord.symmetric_basis import poly_to_e
        poly_to_e(x)


def test_symexpr_text_round_trip():
    expr = build_u(3, 4)[0]
    text = expr.to_text()
    assert "-1/1 : et[2,1]" in text
    assert SymExpr.from_text(text, 4) == expr


def test_diagonal_vanishing_examples():
    assert check_diagonal_vanishing(3, 2, P((1, 1)), 4)
    assert not check_diagonal_vanishing(2, 2, P((2,)), 3)
    assert check_diagonal_vanishing(2, 1, P((1,)), 2)
    q = u_poly(2, 3).partial(0, 2)
    assert q.constant_value() == F(-1, 9)
