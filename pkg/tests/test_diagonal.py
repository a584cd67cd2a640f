import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from symcoord.combinatorics import Partition as P, enumerate_A
from symcoord.diagonal import (CoincidenceError, CoincidencePattern, _dd_coefficient, apply_DI_general,
                               apply_DI_one_block, apply_Dd_at_point, combo_value, detect_pattern,
                               diag_combo, diag_combo_via_bell, diag_combo_via_recursion,
                               generic_DI_value, local_coordinates, local_derivatives,
                               naive_diagonal_composition, symmetrized_partial, total_diagonal_Dhat)
from symcoord.divided_difference import apply_DI, apply_Dd, apply_Dhat
from symcoord.exact_algebra import RationalFuncX, SparsePoly
from symcoord.oracle import PolynomialOracle, TraceOracle
from symcoord.symmetric_basis import SymExpr, elementary, power_sum


def test_combo_small_values():
    assert dict(diag_combo(1).terms) == {P((1,)): 1}
    assert dict(diag_combo(2).terms) == {P((1, 1)): 1, P((2,)): -1}
    assert dict(diag_combo(3).terms) == {P((1, 1, 1)): 1, P((2, 1)): F(-3, 2), P((3,)): F(1, 2)}


@pytest.mark.parametrize("g", range(1, 8))
def test_three_constructions_agree(g):
    assert diag_combo(g) == diag_combo_via_bell(g) == diag_combo_via_recursion(g)


def test_combo_frozen_g4():
    got = {str(k): v for k, v in diag_combo(4).terms.items()}
    assert got == {"[4]": F(-1, 6), "[3,1]": F(2, 3), "[2,2]": F(1, 2), "[2,1,1]": F(-2), "[1,1,1,1]": F(1)}


def test_combo_json():
    assert diag_combo(2).as_json() == {"[2]": "-1/1", "[1,1]": "1/1"}


def test_symmetrized_partial_invariance_and_examples():
    n = 4
    phi = PolynomialOracle(elementary(3, n) * power_sum(2, n) + elementary(4, n))
    pt = [F(2), F(2), F(2), F(5)]
    for sigma in (P((2, 1)), P((1, 1)), P((3, 1, 1))):
        vals = {symmetrized_partial([0, 1, 2], sigma, phi, pt, assignment=perm)
                for perm in itertools.permutations([0, 1, 2])}
        assert len(vals) == 1
    tr = TraceOracle(3, [0, 1, 2, 3])
    assert symmetrized_partial([0, 1], P((1, 1)), tr, [F(1)] * 3) == 0
    e3 = PolynomialOracle(elementary(3, 4))
    pt = [F(1), F(1), F(4), F(6)]
    assert symmetrized_partial([0, 1], P((1, 1)), e3, pt) == elementary(1, 4, [2, 3]).evaluate(pt)
    assert symmetrized_partial([0, 1], P((2,)), e3, pt) == 0
    with pytest.raises(ValueError):
        symmetrized_partial([0, 1], P((1, 1, 1)), e3, pt)


def test_one_block_two_variables():
    phi = PolynomialOracle(power_sum(2, 2))
    assert apply_DI_one_block([0, 1], [0, 1], phi, [F(3), F(3)]) == -2


def test_one_block_size_one_is_generic():
    phi = PolynomialOracle(elementary(2, 3) * power_sum(2, 3))
    pt = [F(1), F(4), F(-2)]
    assert apply_DI_one_block([0, 1, 2], [1], phi, pt) == generic_DI_value([0, 1, 2], phi, pt)


def test_one_block_rejects_extra_coincidence():
    phi = PolynomialOracle(elementary(2, 4))
    with pytest.raises(CoincidenceError):
        apply_DI_one_block([0, 1, 2, 3], [0, 1], phi, [F(1), F(1), F(2), F(2)])


def _random_sym_poly(n, rng):
    p = SparsePoly.zero(n)
    for _ in range(3):
        r = rng.randrange(1, 6)
        lam = P.of(rng.randrange(1, n + 1) for _ in range(rng.randrange(1, 3)))
        p = p + SymExpr.single(n, "e", lam, rng.randrange(-3, 4)).to_poly()
    return p + power_sum(rng.randrange(2, 6), n)


@pytest.mark.parametrize("seed", range(6))
def test_block_formulas_equal_exact_images(seed):
    rng = random.Random(seed)
    n = rng.randrange(2, 6)
    p = _random_sym_poly(n, rng)
    phi = PolynomialOracle(p)
    for _ in range(4):
        labels = [rng.randrange(3) for _ in range(n)]
        values = dict(zip(range(3), (F(v) for v in rng.sample(range(-20, 20), 3))))
        pt = [values[l] for l in labels]
        I = sorted(rng.sample(range(n), rng.randrange(1, n + 1)))
        blocks = {}
        for i in I:
            blocks.setdefault(pt[i], []).append(i)
        exact = apply_DI(I, p).evaluate(pt)
        assert apply_DI_general(list(blocks.values()), phi, pt) == exact
        big = [b for b in blocks.values() if len(b) > 1]
        if len(big) == 1:
            assert apply_DI_one_block(I, big[0], phi, pt) == exact
        pattern = detect_pattern(pt)
        for d in range(1, n + 1):
            assert apply_Dd_at_point(d, pattern, phi) == apply_Dd(d, p).evaluate(pt)


def test_stars_and_bars():
    # number of b >= 1 with sum c over |J| slots is C(c-1, |J|-1)
    for size in range(1, 4):
        for c in range(size, 7):
            count = sum(1 for b in itertools.product(range(1, c + 1), repeat=size) if sum(b) == c)
            assert count == math.comb(c - 1, size - 1)


def test_Dd_at_point_specializations():
    n = 5
    p = power_sum(4, n) + elementary(2, n) * elementary(3, n)
    phi = PolynomialOracle(p)
    pattern = CoincidencePattern(((0, 2), (1,), (3, 4)), (F(1), F(3), F(-2)))
    pt = pattern.point()
    # D_1 = sum_alpha |H_alpha| d^1_H
    want1 = sum(len(b) * combo_value(b, 1, phi, pt) for b in pattern.blocks)
    assert apply_Dd_at_point(1, pattern, phi) == want1
    # D_2 explicit form
    want2 = F(0)
    for a, Ha in enumerate(pattern.blocks):
        for b, Hb in enumerate(pattern.blocks):
            if a != b:
                want2 += 2 * len(Ha) * len(Hb) * combo_value(Ha, 1, phi, pt) / (pattern.values[b] - pattern.values[a])
        want2 += len(Ha) * (len(Ha) - 1) * combo_value(Ha, 2, phi, pt)
    assert apply_Dd_at_point(2, pattern, phi) == want2


def test_coefficient_when_all_c_at_most_one():
    # C_{alpha,c} = C(|H_alpha|, a) prod_{c_beta = 1} |H_beta|
    d, ha = 3, 3
    others = ((1, 2), (0, 4), (1, 3))
    a = d - 2
    assert _dd_coefficient(d, ha, others) == math.comb(ha, a) * 2 * 3


def test_all_distinct_matches_generic_numeric():
    n = 4
    phi = PolynomialOracle(elementary(2, n) ** 2)
    pt = [0.5, 1.25, -2.0, 3.5]
    pattern = detect_pattern(pt)
    assert len(pattern.blocks) == n
    for d in range(1, n + 1):
        want = float(apply_Dd(d, phi.poly).evaluate([F(v) for v in pt]))
        assert apply_Dd_at_point(d, pattern, phi) == pytest.approx(want, rel=1e-12)


def test_single_block_is_scaled_total_diagonal():
    n = 4
    phi = PolynomialOracle(elementary(3, n) + power_sum(5, n))
    a = F(3, 2)
    pattern = detect_pattern([a] * n)
    for d in range(1, n + 1):
        scale = math.factorial(d) * math.comb(n, d)
        assert apply_Dd_at_point(d, pattern, phi) == scale * total_diagonal_Dhat(d, phi, a)


def test_total_diagonal_examples():
    assert total_diagonal_Dhat(3, TraceOracle(3, [0, 0, 0, 1]), F(1)) == 3
    assert total_diagonal_Dhat(1, TraceOracle(2, [0, 0, 1]), F(2)) == 4
    e2 = PolynomialOracle(elementary(2, 3))
    assert total_diagonal_Dhat(2, e2, F(1)) == 1 == apply_Dhat(2, elementary(2, 3)).evaluate([1, 1, 1])


def test_naive_composition_is_wrong():
    n = 3
    phi = PolynomialOracle(power_sum(2, n))
    a = F(1)
    true = apply_Dhat(1, apply_Dhat(1, power_sum(2, n))).evaluate([a] * n)
    assert true == F(2, 3)
    assert naive_diagonal_composition(1, 1, phi, a) == 2 != true


def test_detect_pattern_exact_and_float():
    pat = detect_pattern([F(1), F(2), F(1)])
    assert pat.blocks == ((0, 2), (1,)) and pat.values == (F(1), F(2))
    pat = detect_pattern([1.0, 1.0 + 1e-12, 2.0])
    assert pat.blocks == ((0, 1), (2,))
    assert pat.point() == [1.0, 1.0, 2.0]
    assert detect_pattern([1.0, 1.0 + 1e-6]).blocks == ((0,), (1,))


def test_pattern_validation():
    with pytest.raises(ValueError):
        CoincidencePattern(((0,), (2,)), (1, 2))
    with pytest.raises(CoincidenceError):
        CoincidencePattern(((0,), (1,)), (1, 1))


def test_local_coordinates():
    pat = CoincidencePattern(((0, 1), (2,)), (F(1), F(4)))
    charts = local_coordinates(pat)
    x, y = SparsePoly.var(2, 0), SparsePoly.var(2, 1)
    assert charts[0].coordinates[0] == x + y
    assert charts[0].coordinates[1] == ((x - y) ** 2).scale(F(-1, 4))
    assert len(charts[1].coordinates) == 1
    # trace f = x^3: values f'(y1), -f''(y1), f'(y2)
    tr = TraceOracle(3, [0, 0, 0, 1])
    assert local_derivatives(pat, tr) == [[3, -6], [48]]
    singles = local_coordinates(detect_pattern([F(1), F(2)]))
    assert all(len(c.coordinates) == 1 for c in singles)


@pytest.mark.parametrize("K,nu", [((1,), 0), ((1,), 3), ((1, 2), 2), ((1, 2), 4)])
def test_derivative_with_denominator_identity(K, nu):
    # nu-th x_0 derivative of psi'(x_0) / prod (x_k - x_0)
    n = 3
    x0 = SparsePoly.var(n, 0)
    psi = x0 ** 6 - 3 * x0 ** 4 + x0 * 2
    den = SparsePoly.constant(n, 1)
    for k in K:
        den = den * (SparsePoly.var(n, k) - x0)
    f = RationalFuncX(psi.partial(0), den)
    for _ in range(nu):
        f = f.partial(0)
    rhs = RationalFuncX(SparsePoly.zero(n))
    for t in enumerate_A(K, nu):
        d = SparsePoly.constant(n, 1)
        for k, b in t.b.items():
            d = d * (SparsePoly.var(n, k) - x0) ** b
        rhs = rhs + RationalFuncX(psi.partial(0, t.a).scale(F(math.factorial(nu), math.factorial(t.a - 1))), d)
    assert f == rhs
