"""Direct pair-sum oracle for Eisenstein expansions.

Sums 1/(cz+d)^k over every pair with deg c, deg d <= deg_bound, expanding
each pair geometrically on its own. No degree-wise factorization and no
vanishing lemma is used, so this is an independent check on the power-sum
path in ``expansion``. It is only practical at low precision.

Truncation certificate on annulus n: an omitted pair has max degree above
deg_bound, so its contribution to z^r (r >= 0) has valuation at least
(deg_bound + 1 - n) k - n r, and to z^(-k-s) at least (deg_bound + 1) k + (n + 1) s.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import CapExceeded
from .expansion import AnnulusSeries, Source, _bconv, _bpow, _collect, binom_neg, delta_source
from .field import FiniteField
from .poly import PolyT
from .series import LaurentSeries

PAIR_CAP = 1 << 26
CHUNK = 1 << 18


def unit_rows(F: FiniteField, m: int) -> np.ndarray:
    """Digits [lc, c_{m-1}, ..., c_0] of every polynomial of exact degree m."""
    q = F.order
    rows = np.zeros(((q - 1) * q**m, m + 1), dtype=np.int64)
    for i, (lc, low) in enumerate(itertools.product(range(1, q), itertools.product(range(q), repeat=m))):
        rows[i, 0] = lc
        rows[i, 1:] = low
    return rows


def _pair_sum(F: FiniteField, U: np.ndarray, V: np.ndarray, L: int) -> np.ndarray:
    """sum over all (u, v) in U x V of u*v mod pi^L, one pair at a time."""
    acc = np.zeros(L, dtype=np.int64)
    nu, nv = U.shape[0], V.shape[0]
    step = max(1, CHUNK // max(nv, 1))
    for start in range(0, nu, step):
        block = U[start:start + step]
        A = np.repeat(block, nv, axis=0)
        B = np.tile(V, (block.shape[0], 1))
        prods = _bconv(F, A, B, L)
        acc = F.np_add(acc, F.np_sum(prods, axis=0))
    return acc


class DirectPairSource(Source):
    def __init__(self, F: FiniteField, k: int, n: int, deg_bound: int, prec_low: int,
                 pairs: list[tuple[PolyT, PolyT]] | None = None, pair_cap: int = PAIR_CAP,
                 certify: bool = True):
        super().__init__(F, n, 0, -k)
        if pairs is None and deg_bound >= 0 and (F.order ** (deg_bound + 1)) ** 2 > pair_cap:
            raise CapExceeded(f"deg_bound {deg_bound} gives more than {pair_cap} pairs")
        self.k, self.D, self.prec_low, self.pairs = k, deg_bound, prec_low, pairs
        # certify=False reports the truncated pair sum itself, not E_k
        self.certify = certify
        self._rows: dict[int, np.ndarray] = {}

    def certified(self, e: int) -> float:
        """Precision to which the truncated pair sum equals E_k at z^e."""
        if self.pairs is not None or not self.certify:
            return float("inf")
        k, n, D = self.k, self.n, self.D
        if e >= 0:
            return (D + 1 - n) * k - n * e
        return (D + 1) * k + (n + 1) * (-e - k)

    def rows(self, m: int) -> np.ndarray:
        if m not in self._rows:
            self._rows[m] = unit_rows(self.field, m)
        return self._rows[m]

    def _compute(self, e: int, N: int) -> LaurentSeries:
        F, k = self.field, self.k
        N = int(min(N, self.prec_low, self.certified(e)))
        if self.pairs is not None:
            return self._explicit(e, N)
        total = LaurentSeries.zero(F, N)
        if e >= 0:
            r = e
            coef = F.from_int(binom_neg(k, r, F.p))
            if not coef:
                return total
            for md in range(0, self.D + 1):
                for mc in range(-1, min(self.D, md + self.n) + 1):
                    total = total + self._class(mc, md, r, -k - r, N)
        else:
            s = -e - k
            if s < 0:
                return LaurentSeries.zero(F, N)
            coef = F.from_int(binom_neg(k, s, F.p))
            if not coef:
                return total
            for mc in range(0, self.D + 1):
                for md in range(-1, mc - self.n):
                    total = total + self._class(md, mc, s, -k - s, N)
        return total.scale(coef)

    def _class(self, m_pos: int, m_neg: int, a: int, b: int, N: int) -> LaurentSeries:
        """sum of x^a y^b over x of degree m_pos (x = 0 when m_pos = -1) and y of degree m_neg."""
        F = self.field
        if m_pos < 0:
            if a:
                return LaurentSeries.zero(F, N)
            lead = -m_neg * b
            L = N - lead
            if L <= 0:
                return LaurentSeries.zero(F, N)
            Y = _bpow(F, self.rows(m_neg), b, L)
            return LaurentSeries(F, lead, F.np_sum(Y, axis=0).tolist(), N)
        lead = -m_pos * a - m_neg * b
        L = N - lead
        if L <= 0:
            return LaurentSeries.zero(F, N)
        X = _bpow(F, self.rows(m_pos), a, L)
        Y = _bpow(F, self.rows(m_neg), b, L)
        return LaurentSeries(F, lead, _pair_sum(F, X, Y, L).tolist(), N)

    def _explicit(self, e: int, N: int) -> LaurentSeries:
        F, k, n = self.field, self.k, self.n
        total = LaurentSeries.zero(F, N)
        for c, d in self.pairs:
            cL, dL = c.to_laurent(), d.to_laurent()
            if not d.is_zero() and d.deg >= c.deg - n:
                if e < 0:
                    continue
                r = e
                if c.is_zero() and r:
                    continue
                term = cL.power(r) * dL.power(-k - r, cap=N - (0 if c.is_zero() else cL.lead * r))
                coef = F.from_int(binom_neg(k, r, F.p))
            else:
                s = -e - k
                if s < 0 or (d.is_zero() and s):
                    continue
                term = dL.power(s) * cL.power(-k - s, cap=N - (0 if d.is_zero() else dL.lead * s))
                coef = F.from_int(binom_neg(k, s, F.p))
            total = total + term.scale(coef)
        return total.truncate(N)

    def certificate(self) -> dict:
        cert = super().certificate()
        cert.update({"method": "direct pair sum", "deg_bound": self.D, "prec_low": self.prec_low,
                     "truncation_floor": (f"z^r: ({self.D} + 1 - {self.n})*{self.k} - {self.n}*r; "
                                          f"z^(-k-s): ({self.D} + 1)*{self.k} + {self.n + 1}*s")})
        return cert


def direct_pair_expand(F: FiniteField, k: int, annulus: int, window: tuple[int, int], deg_bound: int,
                       prec_low: int, pairs=None, certify: bool = True) -> AnnulusSeries:
    src = DirectPairSource(F, k, annulus, deg_bound, prec_low, pairs, certify=certify)
    return _collect(src, window, prec_low, src.certificate())


def direct_delta_expand(F: FiniteField, annulus: int, window: tuple[int, int], deg_bound: int,
                        prec_low: int, certify: bool = True) -> AnnulusSeries:
    """Delta assembled from oracle Eisenstein series.

    With certify=False the result is Delta built from the truncated pair
    sums, reported to prec_low without the truncation bound.
    """
    make = lambda k: DirectPairSource(F, k, annulus, deg_bound, prec_low + F.order**2, certify=certify)
    src = delta_source(F, annulus, eisenstein=make)
    cert = src.certificate()
    cert.update({"method": "direct pair sum", "deg_bound": deg_bound, "certified": certify})
    return _collect(src, window, prec_low, cert)
