import pytest

from drinfeld_measures.errors import NonStabilizing, OracleFailure, UnsupportedAdmissibility
from drinfeld_measures.field import GF
from drinfeld_measures.integration import (CuspMeasureOracle, delta_at, eisenstein_sum, reconstruct_cusp_form,
                                           riemann_integrate, riemann_sum)
from drinfeld_measures.measures import build_mu_delta, moment, support_ball
from drinfeld_measures.series import LaurentSeries
from drinfeld_measures.tree import Ball, fundamental_edge
from drinfeld_measures.zeta import ZetaMeasure


def unit_ball(F):
    return Ball.finite(F, LaurentSeries.zero(F), 0)


@pytest.mark.parametrize("q", [2, 3])
def test_total_mass_vanishes(q):
    F = GF(q)
    for k in range(1, 4):
        res = riemann_integrate(ZetaMeasure(F, k), [lambda a: LaurentSeries.one(F)], [unit_ball(F)], k + 2, 50)
        assert res.value.is_zero()


def test_first_moment_of_G1():
    F = GF(2)
    res = riemann_integrate(ZetaMeasure(F, 1), [lambda a: a], [unit_ball(F)], 4, 50)
    assert res.value.agrees_with(LaurentSeries.one(F), 50)


def test_riemann_sums_reproduce_moments():
    F = GF(2)
    mu = build_mu_delta(F, 30)
    e0 = fundamental_edge(F, 0)
    S = support_ball(e0)
    fs = {0: [lambda a: LaurentSeries.one(F), lambda a: LaurentSeries.zero(F)],
          1: [lambda a: a, lambda a: LaurentSeries.one(F)]}
    for j, derivs in fs.items():
        want = moment(mu, e0, j).value
        for level in (2, 4, 6):
            got = riemann_sum(CuspMeasureOracle(mu), derivs, [S], level, 30)
            assert got.agrees_with(want, got.prec)


def test_needs_enough_derivatives():
    F = GF(2)
    with pytest.raises(OracleFailure):
        riemann_integrate(CuspMeasureOracle(build_mu_delta(F)), [lambda a: a], [unit_ball(F)], 3, 10)


class _Wobbly:
    """A fake measure whose sums never settle."""

    h = 0

    def __init__(self, F):
        self.F = F

    def moment(self, B, j, prec):
        return LaurentSeries.monomial(self.F, 1, -B.radius) if B.center.is_zero() else LaurentSeries.zero(self.F)


def test_non_stabilizing_is_reported():
    F = GF(2)
    with pytest.raises(NonStabilizing):
        riemann_integrate(_Wobbly(F), [lambda a: LaurentSeries.one(F)], [unit_ball(F)], 6, 20)


def xi():
    return LaurentSeries(GF(4), 0, [2])


def test_delta_at_is_stable_in_deg_bound():
    z = xi()
    a, b = delta_at(z, 2, 6, 6), delta_at(z, 2, 8, 6)
    assert a.agrees_with(b, 6)
    assert not a.is_zero() and a.valuation < 6


def test_E1_vanishes_at_a_point():
    z = LaurentSeries(GF(9), 0, [3])
    assert eisenstein_sum(z, 3, 1, 3, 8).is_zero()


def test_reconstruction_low_level():
    F = GF(2)
    mu = build_mu_delta(F, 20)
    z = xi()
    res = reconstruct_cusp_form(mu, z, 6, 4)
    assert res.error_exp >= 4
    assert res.value.agrees_with(delta_at(z, 2, 8, 6), 4)


def test_reconstruction_is_linear():
    F = GF(2)
    mu = build_mu_delta(F, 20)
    c = LaurentSeries(F, 0, [1, 1])
    z = xi()
    a = reconstruct_cusp_form(mu, z, 6, 4).value
    b = reconstruct_cusp_form(mu.scaled(c), z, 6, 4).value
    assert b.agrees_with(c.embed(z.field) * a, 4)


def test_reconstruction_needs_h_at_most_1():
    F = GF(3)
    with pytest.raises(UnsupportedAdmissibility):
        reconstruct_cusp_form(build_mu_delta(F), LaurentSeries(GF(9), 0, [3]), 4, 4)
