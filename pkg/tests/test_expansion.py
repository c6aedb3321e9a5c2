import pytest

from drinfeld_measures.errors import CapExceeded, WindowTooNarrow
from drinfeld_measures.expansion import (expand_delta, expand_eisenstein, power_sums, residue, upsilon_closed,
                                         xi_closed)
from drinfeld_measures.field import GF
from drinfeld_measures.oracle import direct_delta_expand, direct_pair_expand
from drinfeld_measures.poly import PolyT
from drinfeld_measures.series import LaurentSeries

WINDOW = (-12, 2)


def agree(a, b, N):
    return all(a.coeffs[e].agrees_with(b.coeffs[e], min(N, b.coeffs[e].prec)) for e in b.coeffs)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_power_sum_examples(q):
    F = GF(q)
    assert power_sums(F, 0, q - 1, "S_d", 10).agrees_with(LaurentSeries.monomial(F, F.neg(1), 0), 10)
    assert all(power_sums(F, n, 0, "T_c").is_zero() for n in range(7))
    if q == 2:
        assert power_sums(F, 0, 1, "T_c") == LaurentSeries.one(F)


@pytest.mark.parametrize("q", [3, 4])
def test_S_vanishes_off_multiples(q):
    F = GF(q)
    for n in range(3):
        for k in range(1, 3 * q):
            if k % (q - 1):
                assert power_sums(F, n, k, "S_d", 12).is_zero()


def test_E1_vanishes_for_q3():
    s = expand_eisenstein(GF(3), 1, 0, WINDOW, 10)
    assert all(c.is_zero() for c in s.coeffs.values())


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("n", [0, 1])
def test_eisenstein_support(q, n):
    F = GF(q)
    for k in (q - 1, q * q - 1):
        s = expand_eisenstein(F, k, n, WINDOW, 10)
        for r, c in s.coeffs.items():
            if r % (q - 1):
                assert c.is_zero()


def test_leading_eisenstein_coefficient():
    for q in (2, 3, 4):
        F = GF(q)
        s = expand_eisenstein(F, q - 1, 0, WINDOW, 10)
        assert s.coeffs[-(q - 1)].agrees_with(LaurentSeries.monomial(F, F.neg(1), 0), 10)


@pytest.mark.parametrize("q,deg_bound", [(2, 7), (3, 4)])
@pytest.mark.parametrize("n", [0, 1])
def test_eisenstein_matches_pair_oracle(q, deg_bound, n):
    F = GF(q)
    for k in (q - 1, q * q - 1):
        fast = expand_eisenstein(F, k, n, (-6, 2), 6)
        slow = direct_pair_expand(F, k, n, (-6, 2), deg_bound, 6)
        assert agree(fast, slow, 6)


def test_single_pair_gives_one():
    F = GF(2)
    s = direct_pair_expand(F, 1, 0, (-3, 1), 0, 8, pairs=[(PolyT(F), PolyT.const(F, 1))])
    assert s.coeffs[0].agrees_with(LaurentSeries.one(F), 8)
    assert all(s.coeffs[r].is_zero() for r in s.coeffs if r)


def test_empty_pair_set():
    s = direct_pair_expand(GF(2), 1, 0, (-4, 0), -1, 6)
    assert all(c.is_zero() for c in s.coeffs.values())


def test_oracle_cap():
    with pytest.raises(CapExceeded):
        direct_pair_expand(GF(3), 2, 0, (-4, 0), 40, 6)


@pytest.mark.parametrize("q", [2, 3])
def test_delta_support_on_annulus0(q):
    F = GF(q)
    s = expand_delta(F, 0, (-40, 2), 10)
    allowed = set()
    for i in range(-5, 41):
        allowed |= {-(q - 1 + i * (q - 1) * q), -i * (q - 1) * q}
    for r, c in s.coeffs.items():
        if r not in allowed:
            assert c.is_zero(), r


def test_delta_matches_pair_oracle():
    F = GF(2)
    fast = expand_delta(F, 0, (-6, 0), 8)
    slow = direct_delta_expand(F, 0, (-6, 0), 11, 8)
    assert agree(fast, slow, 8)


def test_window_stability():
    F = GF(3)
    small = expand_delta(F, 0, (-8, 0), 10)
    big = expand_delta(F, 0, (-10, 2), 10)
    assert all(small.coeffs[r] == big.coeffs[r] for r in small.coeffs)


@pytest.mark.parametrize("q", [2, 3])
def test_residues(q):
    F = GF(q)
    s0, s1 = expand_delta(F, 0, (-q * q, 0), 10), expand_delta(F, 1, (-q * q, 0), 10)
    ups = upsilon_closed(F, 0, 10)
    assert residue(s0, q - 2).agrees_with(ups, 10)
    for j in range(q * q - 2):
        if j not in (q - 2, q * q - q - 1):
            assert residue(s0, j).is_zero()
        assert residue(s1, j).is_zero()


def test_residue_outside_window():
    s = expand_delta(GF(2), 0, (-3, 0), 8)
    with pytest.raises(WindowTooNarrow):
        residue(s, 5)


def test_frozen_upsilon_values():
    # cross-checked against the pair-sum oracle in the acceptance suite
    F2, F3, F4 = GF(2), GF(3), GF(4)
    assert upsilon_closed(F2, 0, 12) == LaurentSeries.from_digits(F2, {-4: 1, -2: 1, 0: 1, 8: 1}, 12)
    assert upsilon_closed(F3, 0, 12) == LaurentSeries.from_digits(F3, {-9: 1, -3: 2, 9: 1}, 12)
    assert upsilon_closed(F4, 0, 12) == LaurentSeries.from_digits(F4, {-16: 1, -4: 1}, 12)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_xi1_vanishes(q):
    F = GF(q)
    assert xi_closed(F, 1, 12).is_zero()
    s = expand_delta(F, 0, (-(q - 1) * q - 1, 0), 12)
    assert s.coeffs[-(q - 1) * q].is_zero()
