"""Measures attached to harmonic cocycles: mu_Delta and mu_P.

A measure is stored as a moment table on the fundamental edges; every other
moment follows from Gamma-equivariance. Writing e = gamma * e_r (star
action) with gamma = (a b; c d),

    int_{U(e)} x^j dmu = det(gamma)^(1-m) int_{U(e_r)} (a x + b)^j (c x + d)^(n-2-j) dmu,

so each moment is an exact multiple r * base of a single scalar (Upsilon_0
for mu_Delta, X_0 for mu_P) with r in F_q[T].

Geometry. ``boundary_ball`` pairs an edge with a ball through the ordinary
action, while moments are transported by the star action. The two agree
after the involution x -> -1/x: the measure whose Cauchy transform is the
cusp form gives the ball W.U(e) (W = (0 -1; 1 0)) the moments of e. The
``ball_moment`` helpers use this geometry; ``moment_centered`` keeps the
ordinary pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

from .errors import UnsupportedEdgeExponent
from .expansion import delta_source, upsilon_closed
from .field import FiniteField, binom_mod_p
from .poly import PolyT
from .series import LaurentSeries
from .tree import Ball, Edge, Mat2, Vertex, act, ball_to_edge, fundamental_edge, lam, neighbors, reduce_to_fundamental


@dataclass
class MomentValue:
    """r * base with r an exact finite Laurent polynomial in pi."""

    r: LaurentSeries
    measure: "CocycleMeasure"

    @property
    def base(self) -> str:
        return self.measure.base_name

    @property
    def value(self) -> LaurentSeries:
        return self.r * self.measure.base_value

    def is_zero(self) -> bool:
        return self.r.is_zero()

    def r_poly(self) -> PolyT | None:
        """r as an element of F_q[T] when it is one."""
        if self.r.is_zero():
            return PolyT(self.r.field)
        if self.r.degree > 0:
            return None
        return self.r.polynomial_part()

    def __add__(self, other: "MomentValue") -> "MomentValue":
        return MomentValue(self.r + other.r, self.measure)

    def __neg__(self) -> "MomentValue":
        return MomentValue(-self.r, self.measure)

    def __sub__(self, other: "MomentValue") -> "MomentValue":
        return MomentValue(self.r - other.r, self.measure)

    def scaled(self, s: LaurentSeries) -> "MomentValue":
        return MomentValue(self.r * s, self.measure)

    def to_json(self, with_value: bool = True) -> dict:
        rp = self.r_poly()
        out = {"r": str(rp) if rp is not None else self.r.to_json(), "base": self.base}
        if rp is not None:
            out["r_coeffs"] = rp.to_json()
        if with_value:
            out["value"] = self.value.to_json()
            out["value_text"] = repr(self.value)
        return out

    def __repr__(self) -> str:
        rp = self.r_poly()
        return f"({rp if rp is not None else self.r})*{self.base}"


@dataclass
class CocycleMeasure:
    field: FiniteField
    weight: int
    type: int
    table: dict[tuple[int, int], int]  # (ray index, j) -> multiple of the base scalar
    base_name: str
    base_provider: Callable[[], LaurentSeries]
    prec: int
    expansion_source: Callable | None = None
    _base: LaurentSeries | None = dc_field(default=None, repr=False)

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def h(self) -> int:
        """Admissibility order ceil((n - 2) / 2)."""
        return -(-(self.weight - 2) // 2)

    @property
    def base_value(self) -> LaurentSeries:
        if self._base is None:
            self._base = self.base_provider()
        return self._base

    def moment_table(self, r: int, j: int) -> LaurentSeries:
        c = self.table.get((r, j), 0)
        return self.base_value.scale(c) if c else LaurentSeries.zero(self.field)

    def scaled(self, c: LaurentSeries) -> "CocycleMeasure":
        """The measure c * mu (scales the base scalar)."""
        return CocycleMeasure(self.field, self.weight, self.type, dict(self.table), self.base_name,
                              lambda: c * self.base_value, self.prec, self.expansion_source)


def build_mu_delta(F: FiniteField, prec: int = 12) -> CocycleMeasure:
    q = F.order
    return CocycleMeasure(F, q * q - 1, 0, {(0, q - 2): 1}, "Upsilon0",
                          lambda: upsilon_closed(F, 0, prec), prec,
                          expansion_source=lambda: delta_source(F, 0))


def build_mu_poincare(F: FiniteField, prec: int = 12, x0: LaurentSeries | None = None) -> CocycleMeasure:
    """mu_P with the opaque nonzero constant X_0 normalized to 1 unless given."""
    q = F.order
    val = x0 if x0 is not None else LaurentSeries.one(F)
    return CocycleMeasure(F, q + 1, 1, {(0, 0): 1}, "X0", lambda: val, prec)


def _check_j(mu: CocycleMeasure, j: int) -> None:
    if not 0 <= j <= mu.weight - 2:
        raise UnsupportedEdgeExponent(f"exponent {j} outside [0, {mu.weight - 2}] on a general edge")


def _moment_r(mu: CocycleMeasure, e: Edge, j: int) -> PolyT:
    """Exact A-multiple of the base scalar for int_{U(e)} x^j."""
    F = mu.field
    red = reduce_to_fundamental(e)
    g = red.gamma
    n2 = mu.weight - 2
    p = F.p
    total = PolyT(F)
    for (r, i), mult in mu.table.items():
        if r != red.n or not mult:
            continue
        # coefficient of x^i in (a x + b)^j (c x + d)^(n-2-j)
        coef = PolyT(F)
        for s in range(max(0, i - (n2 - j)), min(j, i) + 1):
            b1 = binom_mod_p(j, s, p)
            b2 = binom_mod_p(n2 - j, i - s, p)
            if not b1 or not b2:
                continue
            term = (g.a ** s) * (g.b ** (j - s)) * (g.c ** (i - s)) * (g.d ** (n2 - j - i + s))
            coef = coef + term.scale(F.from_int(b1 * b2))
        total = total + coef.scale(F.from_int(mult) if isinstance(mult, int) else mult)
    det = g.det()
    total = total.scale(F.pow(det.lc, 1 - mu.type))
    return -total if red.flip else total


def moment(mu: CocycleMeasure, e: Edge, j: int) -> MomentValue:
    """int_{U(e)} x^j dmu as an exact multiple of the base scalar."""
    _check_j(mu, j)
    return MomentValue(_moment_r(mu, e, j).to_laurent(), mu)


def moment_poly(mu: CocycleMeasure, e: Edge, coeffs: dict[int, LaurentSeries]) -> MomentValue:
    """int_{U(e)} sum_i coeffs[i] x^i dmu for exact coefficients in k_inf."""
    F = mu.field
    r = LaurentSeries.zero(F)
    for i, c in coeffs.items():
        if c.is_zero():
            continue
        r = r + c * moment(mu, e, i).r
    return MomentValue(r, mu)


def _centered_coeffs(F: FiniteField, a: LaurentSeries, j: int) -> dict[int, LaurentSeries]:
    """Coefficients of (x - a)^j."""
    out = {}
    na = -a
    for i in range(j + 1):
        b = binom_mod_p(j, i, F.p)
        if b:
            out[i] = na.power(j - i).scale(F.from_int(b)) if j - i else LaurentSeries.one(F).scale(F.from_int(b))
    return out


def ball_center(B: Ball) -> LaurentSeries:
    return B.anchor if B.is_infinite else B.center


def moment_centered(mu: CocycleMeasure, B: Ball, j: int) -> MomentValue:
    """int_{U(e_B)} (x - a)^j dmu with e_B = ball_to_edge(B) and a its canonical center."""
    e = ball_to_edge(B)
    return moment_poly(mu, e, _centered_coeffs(mu.field, ball_center(B), j))


def _w(F: FiniteField) -> Mat2:
    return Mat2.poly(F, 0, -1, 1, 0)


def support_ball(e: Edge) -> Ball:
    """The ball carrying e's moments for the measure of the cusp form: W.U(e)."""
    from .tree import boundary_ball

    return boundary_ball(act(_w(e.origin.field), e, "star"))


def edge_of_ball(B: Ball) -> Edge:
    """Inverse of support_ball."""
    return act(_w(B.field), ball_to_edge(B), "star")


def ball_moment(mu: CocycleMeasure, B: Ball, j: int, center: LaurentSeries | None = None) -> MomentValue:
    """int_B (x - center)^j dmu for the measure of the cusp form (finite balls)."""
    a = ball_center(B) if center is None else center
    return moment_poly(mu, edge_of_ball(B), _centered_coeffs(mu.field, a, j))


def harmonicity_defect(mu: CocycleMeasure, v: Vertex, j: int) -> MomentValue:
    """Sum of moments over the q + 1 edges ending at v."""
    total = MomentValue(LaurentSeries.zero(mu.field), mu)
    for w in neighbors(v):
        total = total + moment(mu, Edge(w, v), j)
    return total


# ---------------------------------------------------------------------------
# L-values


def one_units_edge(F: FiniteField) -> Edge:
    """Lambda_0 -> M_1 on the end of 1; its ball is U_1 = 1 + pi A_inf."""
    return Edge(lam(F, 0), Vertex.make(F, 1, LaurentSeries.one(F)))


@dataclass
class LValue:
    value: LaurentSeries
    closed_form: MomentValue | None = None

    def to_json(self) -> dict:
        out = {"value": self.value.to_json(), "value_text": repr(self.value)}
        if self.closed_form is not None:
            out["closed_form"] = self.closed_form.to_json(with_value=False)
        return out


def _e0_moment_any(mu: CocycleMeasure, t: int, prec: int) -> LaurentSeries:
    """int_{U(e_0)} x^t dmu for any integer t: the residue coefficient at z^(-t-1)."""
    if mu.expansion_source is None:
        raise UnsupportedEdgeExponent("this measure has no expansion for exponents outside the table")
    src = getattr(mu, "_src", None)
    if src is None:
        src = mu.expansion_source()
        mu._src = src
    return src.coeff(-t - 1, prec)


def l_value(mu: CocycleMeasure, e: Edge, j: int, prec: int | None = None) -> LValue:
    """L(mu; e; j) = int_{U(e)} x^(j-1) dmu."""
    F = mu.field
    prec = mu.prec if prec is None else prec
    if 0 <= j - 1 <= mu.weight - 2:
        mv = moment(mu, e, j - 1)
        return LValue(mv.value.truncate(prec), mv)
    e0 = fundamental_edge(F, 0)
    if e == e0:
        return LValue(_e0_moment_any(mu, j - 1, prec))
    if e == e0.reversed():
        return LValue(-_e0_moment_any(mu, j - 1, prec))
    u1 = one_units_edge(F)
    if e in (u1, u1.reversed()):
        val = _one_units_moment(mu, j - 1, prec)
        return LValue(val if e == u1 else -val)
    raise UnsupportedEdgeExponent(f"L-value at j = {j} is only available on e_0 and the one-units edge")


def _one_units_moment(mu: CocycleMeasure, m: int, prec: int) -> LaurentSeries:
    """int over the one-units of x^m, as int_{U(e_0)} (x - 1)^m."""
    F = mu.field
    p = F.p
    total = LaurentSeries.zero(F, prec)
    if m >= 0:
        for t in range(m + 1):
            b = binom_mod_p(m, t, p)
            if b:
                sign = 1 if (m - t) % 2 == 0 else -1
                total = total + _e0_moment_any(mu, t, prec).scale(F.from_int(sign * b))
        return total
    # (x - 1)^(-K) = (-1)^K sum_t C(K + t - 1, t) x^t, converging on |x| < 1
    K = -m
    src = getattr(mu, "_src", None) or mu.expansion_source()
    mu._src = src
    t = 0
    while src.floor(-t - 1) < prec:
        b = binom_mod_p(K + t - 1, t, p)
        if b:
            total = total + _e0_moment_any(mu, t, prec).scale(F.from_int(b))
        t += 1
    return total if K % 2 == 0 else -total


def l_delta(F: FiniteField, j: int, prec: int = 12, mu: CocycleMeasure | None = None) -> LValue:
    """L_Delta(j) on the one-units, with the Lucas closed form when 1 <= j <= q^2 - 2."""
    q = F.order
    mu = mu or build_mu_delta(F, prec)
    lv = l_value(mu, one_units_edge(F), j, prec)
    if 1 <= j <= q * q - 2:
        b = binom_mod_p(j - 1, q - 2, F.p)
        sign = 1 if (j - q + 1) % 2 == 0 else -1
        lv.closed_form = MomentValue(LaurentSeries.one(F).scale(F.from_int(sign * b)), mu)
    return lv
