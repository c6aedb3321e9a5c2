"""Riemann sums against admissible measures, and the cusp form they come from.

The Riemann sum of f over a region at level l is

    R_l = sum_B sum_{j <= h} D_j f(a_B) int_B (x - a_B)^j dmu,

over the balls B of radius |pi|^l, with a_B the canonical center. The
error is certified empirically: R is computed on the last few levels and
the valuation of R_l - R_{l-1} must keep growing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Protocol

import numpy as np

from .errors import CapExceeded, NonStabilizing, OracleFailure, UnsupportedAdmissibility
from .expansion import _bpow
from .field import FiniteField, binom_mod_p
from .measures import CocycleMeasure, ball_moment
from .carlitz import kernel_hyperderivative
from .series import LaurentSeries
from .tree import Ball

MAX_ADMISSIBILITY = 1
STABILIZATION_LEVELS = 3
CHUNK = 1 << 18


class BallMeasureOracle(Protocol):
    h: int

    def moment(self, B: Ball, j: int, prec: int) -> LaurentSeries:
        """int_B (x - a_B)^j for the canonical center a_B."""


class CuspMeasureOracle:
    """Centered ball moments of the measure whose Cauchy transform is the cusp form."""

    def __init__(self, mu: CocycleMeasure):
        self.mu, self.h = mu, mu.h

    def moment(self, B: Ball, j: int, prec: int) -> LaurentSeries:
        return ball_moment(self.mu, B, j).value.truncate(prec)


@dataclass
class RiemannResult:
    value: LaurentSeries
    error_exp: float
    level: int
    history: list[float] = dc_field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.history, self.history[1:]))

    def to_json(self) -> dict:
        enc = lambda v: "inf" if math.isinf(v) else int(v)
        return {"value": self.value.to_json(), "value_text": repr(self.value), "error_exp": enc(self.error_exp),
                "level": self.level, "difference_valuations": [enc(v) for v in self.history], "monotone": self.monotone}


def _gap(a: LaurentSeries, b: LaurentSeries) -> float:
    d = a - b
    if d.is_zero():
        return math.inf if d.prec is None else d.prec
    return d.valuation


def riemann_sum(mu: BallMeasureOracle, derivs: list[Callable[[LaurentSeries], LaurentSeries]],
                region: list[Ball], level: int, prec: int, centers: Callable[[Ball], LaurentSeries] | None = None
                ) -> LaurentSeries:
    """R_level; ``derivs[j](a)`` is D_j f(a)."""
    total = None
    for S in region:
        for B in S.subballs(max(level, S.radius)):
            a = B.center if centers is None else centers(B)
            for j, Dj in enumerate(derivs[:mu.h + 1]):
                m = mu.moment(B, j, prec)
                if m.is_zero() and m.prec is not None and m.prec >= prec:
                    continue
                if m.is_zero() and m.prec is None:
                    continue
                term = Dj(a)
                if term.field is not m.field:
                    m = m.embed(term.field)
                term = (term * m).truncate(prec)
                total = term if total is None else total + term
    if total is None:
        F = derivs[0](region[0].center).field if region else None
        return LaurentSeries.zero(F, prec)
    return total.truncate(prec)


def riemann_integrate(mu: BallMeasureOracle, derivs: list[Callable[[LaurentSeries], LaurentSeries]],
                      region: list[Ball], level: int, prec: int, levels: int = STABILIZATION_LEVELS,
                      centers=None) -> RiemannResult:
    """R_level together with a stabilization certificate over the preceding levels."""
    if len(derivs) < mu.h + 1:
        raise OracleFailure(f"need hyperderivatives up to order {mu.h}")
    base = max(b.radius for b in region)
    lo = max(base, level - levels)
    sums = [riemann_sum(mu, derivs, region, l, prec, centers) for l in range(lo, level + 1)]
    gaps = [_gap(sums[i + 1], sums[i]) for i in range(len(sums) - 1)]
    # a gap equal to prec only says "zero to working precision"
    if len(gaps) >= 2 and gaps[-1] <= gaps[0] and gaps[-1] < prec:
        raise NonStabilizing(f"no valuation gain over {len(gaps)} levels: {gaps}")
    err = gaps[-1] if gaps else math.inf
    value = sums[-1] if math.isinf(err) else sums[-1].truncate(int(err))
    return RiemannResult(value, err, level, gaps)


# ---------------------------------------------------------------------------
# the cusp form from its measure


def _inverse_side_derivs(z: LaurentSeries, n: int, cap: int):
    """D_j of x -> x^(n-1) / (z x + 1), the integrand over B_0(|pi|) after x -> -1/x."""
    F = z.field
    p = F.p

    def make(j):
        def Dj(a: LaurentSeries) -> LaurentSeries:
            a = a.embed(F)
            w = z * a + LaurentSeries.one(F)
            total = LaurentSeries.zero(F)
            for i in range(j + 1):
                b = binom_mod_p(n - 1, i, p)
                if not b or n - 1 - i < 0:
                    continue
                k = j - i
                t = (-z).power(k) * w.power(-(k + 1), cap=cap)
                total = total + (a.power(n - 1 - i) * t).scale(F.from_int(b))
            return total.truncate(cap)
        return Dj

    return [make(j) for j in range(2)]


@dataclass
class ReconstructionResult:
    value: LaurentSeries
    error_exp: float
    inner: RiemannResult
    outer: RiemannResult

    @property
    def monotone(self) -> bool:
        return self.inner.monotone and self.outer.monotone

    def to_json(self) -> dict:
        return {"value": self.value.to_json(), "value_text": repr(self.value),
                "error_exp": "inf" if math.isinf(self.error_exp) else int(self.error_exp),
                "monotone": self.monotone, "inner": self.inner.to_json(), "outer": self.outer.to_json()}


def reconstruct_cusp_form(mu: CocycleMeasure, z: LaurentSeries, level: int, prec: int) -> ReconstructionResult:
    """int_{P^1} dmu(x) / (z - x) by Riemann sums.

    P^1 = {|x| <= 1} + {|x| > 1}; the second piece is pulled back by
    x -> -1/x to B_0(|pi|) where the integrand becomes x^(n-1) / (z x + 1).
    """
    if mu.h > MAX_ADMISSIBILITY:
        raise UnsupportedAdmissibility(f"h = {mu.h} above the supported {MAX_ADMISSIBILITY}")
    F = mu.field
    oracle = CuspMeasureOracle(mu)
    cap = prec + 8
    inner = [lambda a, j=j: kernel_hyperderivative(z, a, j, cap=cap) for j in range(mu.h + 1)]
    unit_ball = Ball.finite(F, LaurentSeries.zero(F), 0)
    small_ball = Ball.finite(F, LaurentSeries.zero(F), 1)
    r1 = riemann_integrate(oracle, inner, [unit_ball], level, prec)
    r2 = riemann_integrate(oracle, _inverse_side_derivs(z, mu.weight, cap), [small_ball], level, prec)
    return ReconstructionResult(r1.value + r2.value, min(r1.error_exp, r2.error_exp), r1, r2)


# ---------------------------------------------------------------------------
# Delta by direct summation at a point


def delta_at(z: LaurentSeries, q: int, deg_bound: int, prec: int) -> LaurentSeries:
    """Delta(z) = (T^(q^2) - T) E_{q^2-1}(z) + (T^q - T)^q E_{q-1}(z)^(q+1) by direct pair sums.

    The precision of the result is what the truncation certificates of the
    two Eisenstein sums support.
    """
    E = z.field
    q2 = q * q
    T = LaurentSeries.monomial(E, 1, -1)
    c1 = T.power(q2) - T
    c2 = (T.power(q) - T).power(q)
    e_small = eisenstein_sum(z, q, q - 1, deg_bound, prec + q2)
    e_big = eisenstein_sum(z, q, q2 - 1, deg_bound, prec + q2)
    return (c1 * e_big + c2 * e_small.power(q + 1)).truncate(prec)


def eisenstein_sum(z: LaurentSeries, q: int, k: int, deg_bound: int, prec: int, pair_cap: int = 1 << 24
                   ) -> LaurentSeries:
    """E_k(z) = sum' 1/(c z + d)^k over c, d in F_q[T] of degree <= deg_bound.

    Needs v(z) = 0 with leading digit outside F_q. The shell of pairs with
    max degree M contributes at valuation >= k M, so the result carries
    precision min(prec, k (deg_bound + 1)) and later shells are skipped.
    """
    E = z.field
    if z.valuation != 0:
        raise OracleFailure("the direct sum needs |z| = 1")
    out_prec = min(prec, k * (deg_bound + 1))
    total = LaurentSeries.zero(E, out_prec)
    zd = np.array([z.digit(i) for i in range(max(out_prec, 1))], dtype=np.int64)
    for M in range(deg_bound + 1):
        lead = k * M
        L = out_prec - lead
        if L <= 0:
            break
        rows = np.array(list(itertools.product(range(q), repeat=M + 1)), dtype=np.int64)
        nr = rows.shape[0]
        if nr * nr > pair_cap:
            raise CapExceeded(f"{nr * nr} pairs in shell {M}")
        acc = np.zeros(L, dtype=np.int64)
        step = max(1, CHUNK // nr)
        for start in range(0, nr, step):
            acc = E.np_add(acc, _shell_block(E, rows[start:start + step], rows, zd, k, M, L))
        total = total + LaurentSeries(E, lead, acc.tolist(), out_prec)
    return total


def _shell_block(E: FiniteField, crows: np.ndarray, drows: np.ndarray, zd: np.ndarray, k: int, M: int, L: int
                 ) -> np.ndarray:
    """sum of ((c z + d) pi^M)^(-k) mod pi^L over c in crows, d in drows, max degree exactly M."""
    nr = drows.shape[0]
    C = np.repeat(crows, nr, axis=0)
    D = np.tile(drows, (crows.shape[0], 1))
    keep = (C[:, 0] != 0) | (D[:, 0] != 0)
    C, D = C[keep], D[keep]
    if not C.shape[0]:
        return np.zeros(L, dtype=np.int64)
    # (c z + d) pi^M = sum_j (sum_i c_{M-i} z_{j-i} + d_{M-j}) pi^j
    W = np.zeros((C.shape[0], L), dtype=np.int64)
    for i in range(min(M + 1, L)):
        seg = min(L - i, len(zd))
        W[:, i:i + seg] = E.np_add(W[:, i:i + seg], E.np_mul(C[:, i:i + 1], zd[None, :seg]))
    w = min(M + 1, L)
    W[:, :w] = E.np_add(W[:, :w], D[:, :w])
    if np.any(W[:, 0] == 0):
        raise OracleFailure("c z + d lost its leading term; the residue of z lies in F_q")
    return E.np_sum(_bpow(E, W, -k, L), axis=0)
