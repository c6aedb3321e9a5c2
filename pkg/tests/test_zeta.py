import pytest

from drinfeld_measures.field import GF
from drinfeld_measures.poly import PolyT
from drinfeld_measures.series import LaurentSeries
from drinfeld_measures.tree import Ball
from drinfeld_measures.zeta import ZetaMeasure, digit_sum, zeta_direct, zeta_measure_side, zeta_special


@pytest.mark.parametrize("q", [2, 3])
def test_zeta_at_zero(q):
    F = GF(q)
    res = zeta_special(F, 0)
    assert res.direct == [PolyT.const(F, 1)] and res.agree


def test_zeta_at_minus_one_q2():
    # T and T + 1 have one-unit parts 1 and 1 + pi, so the x^-1 coefficient is pi
    F = GF(2)
    res = zeta_special(F, 1)
    assert res.direct == [PolyT.const(F, 1), PolyT(F, [0, 1])]
    assert res.agree


@pytest.mark.parametrize("q", [2, 3])
def test_two_sides_agree(q):
    F = GF(q)
    for j in range(q * q + 1):
        assert zeta_direct(F, j) == zeta_measure_side(F, j)


def test_degree_bound():
    F = GF(3)
    for j in range(12):
        assert len(zeta_direct(F, j)) - 1 <= digit_sum(j, 3) // 2


@pytest.mark.parametrize("q", [2, 3])
def test_measure_is_additive(q):
    F = GF(q)
    for k in range(1, 4):
        mu = ZetaMeasure(F, k)
        for B in Ball.finite(F, LaurentSeries.zero(F), 0).subballs(k + 1):
            parts = B.subballs(B.radius + 1)
            total = 0
            for P in parts:
                total = F.add(total, mu.value(P))
            assert total == mu.value(B)


def test_rejects_balls_outside_the_integers():
    F = GF(2)
    with pytest.raises(ValueError):
        ZetaMeasure(F, 1).value(Ball.at_infinity(F, 1))
