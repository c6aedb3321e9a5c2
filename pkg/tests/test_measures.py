import random

import pytest

from drinfeld_measures.errors import UnsupportedEdgeExponent
from drinfeld_measures.expansion import upsilon_closed
from drinfeld_measures.field import GF, binom_mod_p
from drinfeld_measures.poly import PolyT
from drinfeld_measures.series import LaurentSeries
from drinfeld_measures.tree import (Ball, Edge, Mat2, act, ball_to_edge, fundamental_edge, lam, random_edge,
                                    random_gl2a, random_vertex)
from drinfeld_measures.measures import (build_mu_delta, build_mu_poincare, harmonicity_defect, l_delta,
                                        l_value, moment, moment_centered, moment_poly, one_units_edge,
                                        _centered_coeffs)


def r_of(m):
    return m.r_poly()


@pytest.mark.parametrize("q", [2, 3, 4])
def test_delta_table(q):
    F = GF(q)
    mu = build_mu_delta(F, 12)
    assert mu.moment_table(0, q - 2) == upsilon_closed(F, 0, 12)
    assert not mu.moment_table(0, q - 2).is_zero()
    for j in range(q * q - 2):
        if j != q - 2:
            assert mu.moment_table(0, j).is_zero()
        assert mu.moment_table(3, j).is_zero()


def test_poincare_table():
    F = GF(3)
    mu = build_mu_poincare(F)
    e0 = fundamental_edge(F, 0)
    assert r_of(moment(mu, e0, 0)) == PolyT.const(F, 1)
    assert all(moment(mu, e0, j).is_zero() for j in range(1, 3))
    assert all(moment(mu, fundamental_edge(F, 2), j).is_zero() for j in range(3))
    assert (mu.weight, mu.type) == (4, 1)


def test_custom_x0():
    F = GF(3)
    x0 = LaurentSeries.pi(F) + LaurentSeries.one(F)
    mu = build_mu_poincare(F, x0=x0)
    assert moment(mu, fundamental_edge(F, 0), 0).value == x0


@pytest.mark.parametrize("q", [2, 3])
def test_upsilon_moment_on_e0(q):
    F = GF(q)
    mu = build_mu_delta(F, 12)
    m = moment(mu, fundamental_edge(F, 0), q - 2)
    assert r_of(m) == PolyT.const(F, 1) and m.base == "Upsilon0"


@pytest.mark.parametrize("q", [2, 3])
def test_antisymmetry(q):
    F = GF(q)
    rng = random.Random(q)
    for mu in (build_mu_delta(F), build_mu_poincare(F)):
        for _ in range(40):
            e = random_edge(F, rng)
            for j in range(mu.weight - 1):
                assert (moment(mu, e, j) + moment(mu, e.reversed(), j)).is_zero()


def test_exponent_out_of_range():
    F = GF(3)
    with pytest.raises(UnsupportedEdgeExponent):
        moment(build_mu_delta(F), fundamental_edge(F, 0), 7)


def test_centered_moment_on_ball_at_infinity():
    for q, want in ((2, 1), (3, 0), (4, 0)):
        F = GF(q)
        m = moment_centered(build_mu_delta(F), Ball.at_infinity(F, 1), 0)
        assert r_of(m) == PolyT.const(F, want)


@pytest.mark.parametrize("q", [2, 3])
def test_centered_moments_are_A_multiples(q):
    # balls centred at elements of A; a centre with positive pi-powers takes r outside A
    F = GF(q)
    mu = build_mu_delta(F)
    rng = random.Random(7)
    for _ in range(50):
        a = PolyT(F, [rng.randrange(q) for _ in range(4)]).to_laurent()
        B = Ball.finite(F, a, rng.randrange(-2, 5))
        for j in range(q * q - 2):
            assert r_of(moment_centered(mu, B, j)) is not None


def test_shifted_center_recombines():
    # (x - a')^j = sum_i binom(j, i) (a - a')^(j - i) (x - a)^i
    F = GF(3)
    mu = build_mu_delta(F)
    e = ball_to_edge(Ball.finite(F, LaurentSeries.zero(F), -2))
    a = PolyT(F, [1, 2]).to_laurent()
    a2 = PolyT(F, [0, 1, 1]).to_laurent()
    for j in range(mu.weight - 1):
        direct = moment_poly(mu, e, _centered_coeffs(F, a2, j))
        total = None
        for i in range(j + 1):
            c = LaurentSeries.monomial(F, binom_mod_p(j, i, 3), 0) * (a - a2).power(j - i)
            term = moment_poly(mu, e, _centered_coeffs(F, a, i)).scaled(c)
            total = term if total is None else total + term
        assert (direct - total).is_zero()


@pytest.mark.parametrize("q", [2, 3])
def test_harmonic_at_lambda0_and_lambda2(q):
    F = GF(q)
    mu = build_mu_delta(F)
    for v in (lam(F, 0), lam(F, 2)):
        for j in range(q * q - 2):
            assert harmonicity_defect(mu, v, j).is_zero()


def test_poincare_harmonic_at_random_vertices():
    F = GF(3)
    mu = build_mu_poincare(F)
    rng = random.Random(3)
    for _ in range(10):
        v = random_vertex(F, rng, 4)
        for j in range(3):
            assert harmonicity_defect(mu, v, j).is_zero()


def test_poincare_corollary_upper_triangular():
    F = GF(3)
    mu = build_mu_poincare(F)
    rng = random.Random(8)
    for _ in range(30):
        b = PolyT(F, [rng.randrange(3) for _ in range(4)])
        d = PolyT.const(F, rng.randrange(1, 3))
        g = Mat2(PolyT.const(F, rng.randrange(1, 3)), b, PolyT(F), d)
        e = act(g, fundamental_edge(F, 0), "star")
        for j in range(3):
            assert r_of(moment(mu, e, j)) == b ** j * d ** (2 - j)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_lucas_closed_form(q):
    F = GF(q)
    for j in range(1, q * q - 1):
        lv = l_delta(F, j)
        assert lv.closed_form is not None
        assert lv.closed_form.r_poly() is not None
        assert lv.value.agrees_with(lv.closed_form.value, 12)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_nonvanishing_pattern(q):
    F = GF(q)
    ups = upsilon_closed(F, 0, 12)
    hits = set()
    for l in range(q - 1):
        sign = LaurentSeries.monomial(F, F.from_int(-1 if l % 2 else 1), 0)
        for j in (q - 1 + l * q, q + l * q):
            hits.add(j)
            assert l_delta(F, j).value.agrees_with(sign * ups, 12)
    for j in range(1, q * q - 1):
        if j not in hits:
            assert l_delta(F, j).value.is_zero()


@pytest.mark.parametrize("q", [2, 3, 4])
def test_functional_equation(q):
    F = GF(q)
    for j in range(1, q * q - 1):
        s = l_delta(F, j).value + l_delta(F, q * q - 1 - j).value
        assert s.is_zero()


def test_one_units_edge():
    F = GF(3)
    shift = Mat2.poly(F, 1, -1, 0, 1)
    assert one_units_edge(F) == act(shift, fundamental_edge(F, 0), "star")
    assert one_units_edge(F) == Edge(lam(F, 0), one_units_edge(F).terminal)


def test_l_value_general_edge_range():
    F = GF(3)
    mu = build_mu_delta(F)
    rng = random.Random(2)
    e = act(random_gl2a(F, rng, 2), fundamental_edge(F, 1), "star")
    for j in range(1, mu.weight):
        l_value(mu, e, j)
    with pytest.raises(UnsupportedEdgeExponent):
        l_value(mu, e, mu.weight + 3)
