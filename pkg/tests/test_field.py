import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from drinfeld_measures.errors import CapExceeded, DivisionByZero
from drinfeld_measures.field import GF, binom_mod_p, prime_power
from drinfeld_measures.poly import PolyT
from drinfeld_measures.series import LaurentSeries, embed_rational, laurent_arith, one_unit_part


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_field_axioms(q):
    F = GF(q)
    els = list(F.elements())
    assert len(els) == q
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, q - 1) == 1
    rng = random.Random(q)
    for _ in range(200):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_prime_power_rejects():
    assert prime_power(9) == (3, 2)
    with pytest.raises(ValueError):
        prime_power(6)
    with pytest.raises(CapExceeded):
        GF(1024)


def test_zero_has_no_inverse():
    with pytest.raises(DivisionByZero):
        GF(4).inv(0)


def test_binom_examples():
    assert binom_mod_p(6, 1, 3) == 0
    for q in (2, 3, 4):
        p = prime_power(q)[0]
        n, k = q * q - q - 1, q - 2
        assert binom_mod_p(n, k, p) == math.comb(n, k) % p
    assert all(binom_mod_p(n, 0, 5) == 1 for n in range(50))


@given(st.integers(0, 400), st.integers(0, 400), st.sampled_from([2, 3, 5, 7]))
def test_lucas_matches_pascal(n, k, p):
    assert binom_mod_p(n, k, p) == (math.comb(n, k) % p if k <= n else 0)


def S(F, lead, coeffs, prec=None):
    return LaurentSeries(F, lead, coeffs, prec)


def test_geometric_inverse():
    F = GF(2)
    assert laurent_arith(S(F, 0, [1, 1], 5), None, "inv") == S(F, 0, [1] * 5, 5)


def test_frobenius_squares():
    F = GF(2)
    assert laurent_arith(S(F, 1, [1, 1]), 2, "frobenius_pow") == S(F, 2, [1, 0, 1])


def test_inverse_precision_rule():
    F = GF(2)
    rng = random.Random(1)
    x = S(F, 3, [1] + [rng.randrange(2) for _ in range(8)], 12)
    inv = x.inverse()
    assert inv.prec == 6
    prod = x * inv
    # the sharp bound is min(v(x) + prec(1/x), v(1/x) + prec(x)) = 9
    assert prod.agrees_with(LaurentSeries.one(F), 6)
    assert prod.prec == 9


def test_embed_rational_examples():
    F = GF(2)
    T = PolyT.T(F)
    one = PolyT.const(F, 1)
    assert embed_rational(one, T, 8) == S(F, 1, [1], 8)
    assert embed_rational(one, T + 1, 5) == S(F, 1, [1, 1, 1, 1], 5)
    assert embed_rational(T**2 + 1, T**2, 6) == S(F, 0, [1, 0, 1], 6)


def test_one_unit_part():
    F = GF(2)
    T = PolyT.T(F)
    assert one_unit_part(T**2 + 1) == S(F, 0, [1, 0, 1])
    assert one_unit_part(PolyT.const(F, 1)) == LaurentSeries.one(F)
    assert one_unit_part(T**3 + T) == S(F, 0, [1, 0, 1])


series = st.lists(st.integers(0, 2), min_size=1, max_size=12)


@settings(max_examples=60)
@given(series, series, series)
def test_ring_laws_q3(a, b, c):
    F = GF(3)
    x, y, z = (S(F, 0, v, 12) for v in (a, b, c))
    assert (x * (y + z)).agrees_with(x * y + x * z, 12)
    assert (x * y).agrees_with(y * x, 12)


@settings(max_examples=40)
@given(series)
def test_frobenius_is_power(a):
    F = GF(3)
    x = S(F, 0, a, 10)
    assert x.frobenius(3).agrees_with(x * x * x, 10)
