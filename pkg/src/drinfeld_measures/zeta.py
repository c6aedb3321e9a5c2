"""Special values zeta(x, -j) of the Goss zeta function at infinity.

Direct side: zeta(x, -j) = sum_d x^(-d) sum_{a monic, deg a = d} <a>^j with
<a> = a / T^d the one-unit part.

Measure side: the 0-admissible measures G*_{q^k - 1} on A_inf give a ball
B_alpha(|pi|^l) (l >= k, deg_pi alpha < l) the value (-1)^k when
deg_pi alpha < k and 0 otherwise. With nu_x = sum_k (-1)^k x^(-k) G*_{q^k-1},
zeta(x, -j) = int_{U_1} t^j d(x nu_x)(t), the coefficient of x^(-d) being
(-1)^(d+1) int_{U_1} t^j dG*_{q^(d+1)-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FiniteField
from .integration import riemann_integrate
from .poly import PolyT, polys_of_degree
from .series import LaurentSeries, one_unit_part
from .tree import Ball


def digit_sum(n: int, q: int) -> int:
    s = 0
    while n:
        n, r = divmod(n, q)
        s += r
    return s


class ZetaMeasure:
    """G*_{q^k - 1} as a ball-measure oracle (h = 0)."""

    h = 0

    def __init__(self, F: FiniteField, k: int):
        if k < 1:
            raise ValueError("G*_{q^k-1} needs k >= 1")
        self.field, self.k = F, k

    def value(self, B: Ball) -> int:
        """G*(B) for a finite ball inside A_inf, as an element of F_q."""
        F = self.field
        if B.is_infinite or B.radius < 0 or (B.center.coeffs and B.center.lead < 0):
            raise ValueError(f"{B!r} is not a ball of A_inf")
        if B.radius < self.k:
            # q^(k - l) subballs of equal value: zero in characteristic p
            return 0
        deg = B.center.degree if B.center.coeffs else -1
        if deg < self.k:
            return F.from_int(-1 if self.k % 2 else 1)
        return 0

    def moment(self, B: Ball, j: int, prec: int) -> LaurentSeries:
        if j:
            # 0-admissible: only total masses enter the Riemann sums
            return LaurentSeries.zero(self.field)
        return LaurentSeries.monomial(self.field, self.value(B), 0) if self.value(B) else LaurentSeries.zero(self.field)

    def total_mass(self, level: int) -> int:
        F = self.field
        total = 0
        for B in Ball.finite(F, LaurentSeries.zero(F), 0).subballs(level):
            total = F.add(total, self.value(B))
        return total


@dataclass
class ZetaResult:
    j: int
    direct: list[PolyT]
    measure: list[PolyT]

    @property
    def agree(self) -> bool:
        return self.direct == self.measure

    def to_json(self) -> dict:
        return {"j": self.j, "direct": [c.to_json() for c in self.direct],
                "measure": [c.to_json() for c in self.measure], "agree": self.agree}


def _to_pi_poly(s: LaurentSeries) -> PolyT:
    if s.is_zero():
        return PolyT(s.field)
    if s.lead < 0 or not s.is_exact:
        raise ValueError(f"{s!r} is not an exact element of F_q[pi]")
    return PolyT(s.field, [0] * s.lead + list(s.coeffs))


def _strip_zeros(cs: list[PolyT]) -> list[PolyT]:
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _run(F: FiniteField, j: int, coeff) -> list[PolyT]:
    """Coefficients of x^0, x^-1, ... until q zeros past the digit-sum bound."""
    q = F.order
    bound = digit_sum(j, q) // (q - 1)
    out, zeros, d = [], 0, 0
    while True:
        c = coeff(d)
        out.append(c)
        zeros = zeros + 1 if c.is_zero() else 0
        if d > bound and zeros >= q:
            return _strip_zeros(out)
        d += 1


def zeta_direct(F: FiniteField, j: int) -> list[PolyT]:
    def coeff(d):
        total = LaurentSeries.zero(F)
        for a in polys_of_degree(F, d, monic=True):
            total = total + one_unit_part(a).power(j)
        return _to_pi_poly(total)
    return _run(F, j, coeff)


def zeta_measure_side(F: FiniteField, j: int) -> list[PolyT]:
    one_units = Ball.finite(F, LaurentSeries.one(F), 1)

    def coeff(d):
        k = d + 1
        mu = ZetaMeasure(F, k)
        f = [lambda a: a.power(j)]
        res = riemann_integrate(mu, f, [one_units], k + 2, prec=10**6)
        val = res.value.as_exact()
        if k % 2:
            val = -val
        return _to_pi_poly(val)
    return _run(F, j, coeff)


def zeta_special(F: FiniteField, j: int) -> ZetaResult:
    if j < 0:
        raise ValueError("zeta_special needs j >= 0")
    return ZetaResult(j, zeta_direct(F, j), zeta_measure_side(F, j))
