import random

import pytest

from drinfeld_measures.carlitz import (BanachExpansion, carlitz_G, carlitz_G_poly, ch_norm, e_poly,
                                       evaluate_expansion, expand_continuous, hyperderivative,
                                       interpolation_points, kernel_hyperderivative, mu_weight,
                                       mu_weight_bound_holds, pi_poly_to_series)
from drinfeld_measures.errors import DivisionByZero
from drinfeld_measures.field import GF
from drinfeld_measures.poly import PolyT
from drinfeld_measures.series import LaurentSeries


def const(F, c):
    return PolyT.const(F, c)


def test_low_basis_polys():
    F = GF(2)
    num, den = carlitz_G_poly(F, 0)
    assert num == [const(F, 1)] and den == const(F, 1)
    num, den = carlitz_G_poly(F, 1)
    assert num == [PolyT(F), const(F, 1)] and den == const(F, 1)


def test_e1_in_char_2():
    F = GF(2)
    assert e_poly(F, 1) == {1: const(F, 1), 2: const(F, 1)}


@pytest.mark.parametrize("q", [2, 3, 4])
def test_E1_vanishes_on_constants(q):
    F = GF(q)
    for a in F.elements():
        assert carlitz_G(F, q, const(F, a)).is_zero()


@pytest.mark.parametrize("q", [2, 3])
def test_G_is_integral_on_polynomials(q):
    F = GF(q)
    for n in range(q**3):
        for a in interpolation_points(F, 3):
            # PolyT result means the division by the denominator was exact
            assert isinstance(carlitz_G(F, n, a), PolyT)


def test_mu_weight_examples():
    assert mu_weight(5, 0, 2) == 3
    for q in (2, 3, 5):
        for l in range(5):
            assert mu_weight(q ** (l + 1), l, q) == 1


@pytest.mark.parametrize("q", [2, 3])
def test_mu_bound_for_n_at_least_q_to_the_l(q):
    for l in range(7):
        for n in range(q**l, 3000):
            assert mu_weight_bound_holds(n, l, q)


@pytest.mark.xfail(strict=True, reason="the lower bound is false for 1 <= n < q^l, e.g. n = 1, l = 1")
def test_mu_bound_full_grid():
    assert all(mu_weight_bound_holds(n, l, 2) for n in range(1, 200) for l in range(7))


def test_expand_basis_element():
    F = GF(2)
    ex = expand_continuous(F, lambda a: carlitz_G(F, 3, a), 7)
    assert ex.exact
    assert [c.is_zero() for c in ex.coeffs] == [n != 3 for n in range(8)]
    assert ex.coeffs[3] == LaurentSeries.one(F)


def test_expand_constant():
    F = GF(3)
    ex = expand_continuous(F, lambda a: const(F, 2), 8)
    assert ex.coeffs[0] == LaurentSeries.monomial(F, 2, 0)
    assert all(c.is_zero() for c in ex.coeffs[1:])


def test_expand_square_reevaluates():
    F = GF(2)
    ex = expand_continuous(F, lambda a: a * a, 7)
    for a in interpolation_points(F, 3):
        assert evaluate_expansion(F, ex, a) == pi_poly_to_series(a * a)


@pytest.mark.parametrize("q", [2, 3])
def test_roundtrip_random_polynomial(q):
    F = GF(q)
    rng = random.Random(q)
    cs = [PolyT(F, [rng.randrange(q) for _ in range(3)]) for _ in range(13)]

    def f(a):
        total, p = PolyT(F), const(F, 1)
        for c in cs:
            total, p = total + c * p, p * a
        return total

    ex = expand_continuous(F, f, 12)
    assert ex.exact
    for a in interpolation_points(F, ex.points_level):
        assert evaluate_expansion(F, ex, a) == pi_poly_to_series(f(a))


def test_ch_norm_examples():
    F = GF(2)
    one, zero = LaurentSeries.one(F), LaurentSeries.zero(F)
    assert ch_norm(BanachExpansion([one]), 0) == 0
    coeffs = [zero, zero, LaurentSeries.pi(F)]
    assert ch_norm(BanachExpansion(coeffs, "Ch(1)"), 1) == 0
    rng = random.Random(4)
    coeffs = [LaurentSeries.monomial(F, 1, rng.randrange(-3, 5)) for _ in range(30)]
    ex = BanachExpansion(coeffs)
    norms = [ch_norm(ex, h) for h in range(5)]
    assert norms == sorted(norms)


def test_hyperderivative_kills_x_to_the_p():
    F = GF(3)
    assert hyperderivative(F, [0, 0, 0, 1], 1) == [0, 0, 0]


def test_hyperderivative_composition():
    F = GF(3)
    x5 = [0] * 5 + [1]
    twice = hyperderivative(F, hyperderivative(F, x5, 1), 1)
    once = [F.mul(F.from_int(2), c) for c in hyperderivative(F, x5, 2)]
    assert twice == once


@pytest.mark.parametrize("p", [2, 3, 5])
def test_difference_quotient_on_the_diagonal(p):
    F = GF(p)
    rng = random.Random(p)
    for deg in range(31):
        cs = [rng.randrange(p) for _ in range(deg + 1)]
        # (f(x) - f(y)) / (x - y) = sum_i c_i sum_k x^k y^(i-1-k), as a table of (k, l) coefficients
        phi = {}
        for i, c in enumerate(cs):
            for k in range(i):
                phi[k, i - 1 - k] = F.add(phi.get((k, i - 1 - k), 0), c)
        diag = [0] * deg
        for (k, l), c in phi.items():
            diag[k + l] = F.add(diag[k + l], c)
        assert diag == hyperderivative(F, cs, 1)


def test_kernel_taylor_identity():
    F = GF(3)
    pi = LaurentSeries.pi(F)
    z = pi.inverse() + LaurentSeries.one(F)
    a = pi
    x = a + pi.power(3)
    want = (z - x).power(-1, cap=20)
    got = LaurentSeries.zero(F, 20)
    for n in range(5):
        got = got + (x - a).power(n) * kernel_hyperderivative(z, a, n, cap=40)
    # the first omitted term has valuation 3*5 + 6 = 21
    assert got.agrees_with(want, 20)


def test_kernel_pole():
    F = GF(2)
    with pytest.raises(DivisionByZero):
        kernel_hyperderivative(LaurentSeries.pi(F), LaurentSeries.pi(F), 1)
