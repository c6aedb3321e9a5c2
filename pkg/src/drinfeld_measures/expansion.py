"""Laurent expansions of Eisenstein series and of Delta on the annuli
{|pi|^(n+1) < |z| < |pi|^n}.

On annulus n the pairs (c, d) split into those with deg d >= deg c - n,
where 1/(cz+d)^k is expanded in powers of cz/d, and the rest, expanded in
powers of d/(cz). Summing each side degree by degree factors into the power
sums

    S_d(m, K) = sum_{deg d = m} d^(-K)    T_c(m, r) = sum_{deg c <= m} c^r

which only need sums of <a>^e over monic a of one degree.

Coefficients are produced lazily by "sources" that also carry linear
valuation floors: v(coeff of z^e) >= -n*e + b_pos for e >= 0 and
>= -(n+1)*e + b_neg for e < 0. Every truncation is justified by a floor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import WindowTooNarrow
from .field import FiniteField, binom_mod_p
from .poly import PolyT
from .series import LaurentSeries

# ---------------------------------------------------------------------------
# batched power series over F (rows are independent series mod pi^R)


def _bconv(F: FiniteField, A: np.ndarray, B: np.ndarray, R: int) -> np.ndarray:
    N = max(A.shape[0], B.shape[0])
    out = np.zeros((N, R), dtype=np.int64)
    la, lb = min(A.shape[1], R), min(B.shape[1], R)
    for i in range(la):
        L = min(R - i, lb)
        if L <= 0:
            break
        if F.is_prime:
            out[:, i:i + L] += A[:, i:i + 1] * B[:, :L]
        else:
            out[:, i:i + L] = F.np_add(out[:, i:i + L], F.np_mul(A[:, i:i + 1], B[:, :L]))
    if F.is_prime:
        out %= F.p
    return out


def _binv(F: FiniteField, A: np.ndarray, R: int) -> np.ndarray:
    """Row-wise inverse of series whose constant term is 1."""
    N = A.shape[0]
    B = np.zeros((N, 1), dtype=np.int64)
    B[:, 0] = F.np_inv[A[:, 0]]
    k = 1
    while k < R:
        k = min(2 * k, R)
        AB = _bconv(F, A[:, :k], B, k)
        negAB = F.np_neg[AB]
        negAB[:, 0] = F.np_add(negAB[:, 0], np.full(N, F.from_int(2)))
        B = _bconv(F, B, negAB, k)
    return B[:, :R]


def _bfrob(F: FiniteField, A: np.ndarray, power: int, R: int) -> np.ndarray:
    out = np.zeros((A.shape[0], R), dtype=np.int64)
    idx = np.arange(A.shape[1]) * power
    keep = idx < R
    cols = A[:, keep]
    if not F.is_prime:
        logs = F.np_log[cols]
        cols = np.where(cols == 0, 0, F.np_exp[(logs * power) % (F.order - 1)])
    out[:, idx[keep]] = cols
    return out


def _bpow(F: FiniteField, A: np.ndarray, e: int, R: int) -> np.ndarray:
    """Row-wise A**e mod pi^R for series with unit constant term."""
    if e < 0:
        A = _binv(F, A, R)
        e = -e
    N = A.shape[0]
    out = np.zeros((N, R), dtype=np.int64)
    out[:, 0] = 1
    if e == 0:
        return out
    p, t = F.p, 0
    while e % p == 0:
        e //= p
        t += 1
    Rm = -(-R // p**t)
    base = A[:, :Rm]
    res = out[:, :Rm]
    while True:
        if e & 1:
            res = _bconv(F, res, base, Rm)
        e >>= 1
        if not e:
            break
        base = _bconv(F, base, base, Rm)
    if t:
        return _bfrob(F, res, p**t, R)
    full = np.zeros((N, R), dtype=np.int64)
    full[:, :res.shape[1]] = res
    return full


def monic_unit_parts(F: FiniteField, j: int) -> np.ndarray:
    """Rows <a> = 1 + a_{j-1} pi + ... + a_0 pi^j for every monic a of degree j."""
    q = F.order
    rows = np.zeros((q**j, j + 1), dtype=np.int64)
    rows[:, 0] = 1
    for i, digits in enumerate(itertools.product(range(q), repeat=j)):
        rows[i, 1:] = digits
    return rows


# ---------------------------------------------------------------------------
# power sums


class PowerSumCache:
    """Memo of monic power sums sum_{a monic, deg a = j} <a>^e mod pi^R."""

    def __init__(self, F: FiniteField):
        self.field = F
        self.q = F.order
        self._monic: dict[tuple[int, int], LaurentSeries] = {}
        self._units: dict[int, np.ndarray] = {}

    def _unit_rows(self, j: int) -> np.ndarray:
        if j not in self._units:
            self._units[j] = monic_unit_parts(self.field, j)
        return self._units[j]

    def monic_sum(self, j: int, e: int, rel: int) -> LaurentSeries:
        """sum of <a>^e over monic a of degree j, modulo pi^rel.

        Exact when e >= 0 and rel exceeds the degree j*e of every term.
        """
        F = self.field
        exact_len = j * e + 1 if e >= 0 else None
        if exact_len is not None and rel >= exact_len:
            rel = exact_len
        is_exact = exact_len is not None and rel == exact_len
        if rel <= 0:
            return LaurentSeries.zero(F, rel)
        if j == 0:
            return LaurentSeries.one(F) if is_exact else LaurentSeries(F, 0, (1,), rel)
        # every monomial in the expansion needs exponent >= q-1 in each free digit
        if (self.q - 1) * j * (j + 1) // 2 >= rel:
            return LaurentSeries.zero(F, None if is_exact else rel)
        key = (j, e)
        hit = self._monic.get(key)
        if hit is not None and (hit.prec is None or hit.prec >= rel):
            return hit.truncate(rel).as_exact() if is_exact else hit.truncate(rel)
        rows = self._unit_rows(j)
        powers = _bpow(F, rows, e, rel)
        total = F.np_sum(powers, axis=0).tolist()
        out = LaurentSeries(F, 0, total, None if is_exact else rel)
        self._monic[key] = out
        return out

    def S_d(self, m: int, K: int, prec: int | None) -> LaurentSeries:
        """sum of d^(-K) over all d of degree m (K >= 1)."""
        F = self.field
        if K % (self.q - 1):
            return LaurentSeries.zero(F)
        if prec is None:
            raise ValueError("S_d has no finite expansion; give a precision")
        if m * K >= prec:
            return LaurentSeries.zero(F, prec)
        # sum over the leading coefficient gives sum_eps eps^(-K) = q - 1 = -1
        return -self.monic_sum(m, -K, prec - m * K).shift(m * K)

    def T_c(self, m: int, r: int, prec: int | None = None) -> LaurentSeries:
        """sum of c^r over all c of degree <= m, zero included (0^0 = 1)."""
        F = self.field
        if m < 0:
            return LaurentSeries.one(F) if r == 0 else LaurentSeries.zero(F)
        if r == 0 or r % (self.q - 1) or r < (self.q - 1) * (m + 1):
            return LaurentSeries.zero(F)
        total = LaurentSeries.zero(F, prec)
        for j in range(m + 1):
            rel = None if prec is None else prec + j * r
            shell = self.monic_sum(j, r, j * r + 1 if rel is None else rel)
            total = total - shell.shift(-j * r)
        return total

    def T_c_poly(self, m: int, r: int) -> PolyT:
        """T_c(m, r) as a polynomial in T."""
        s = self.T_c(m, r)
        F = self.field
        if s.is_zero():
            return PolyT(F)
        return s.polynomial_part()


_CACHES: dict[int, PowerSumCache] = {}


def power_sum_cache(F: FiniteField) -> PowerSumCache:
    c = _CACHES.get(id(F))
    if c is None:
        c = _CACHES[id(F)] = PowerSumCache(F)
    return c


def power_sums(F: FiniteField, n: int, exponent: int, kind: str, prec: int | None = None) -> LaurentSeries:
    """S_d(n, exponent) (needs prec) or T_c(n, exponent) (exact by default)."""
    cache = power_sum_cache(F)
    if kind == "S_d":
        if exponent < 1:
            raise ValueError("S_d needs exponent >= 1")
        return cache.S_d(n, exponent, prec)
    if kind == "T_c":
        if exponent < 0:
            raise ValueError("T_c needs exponent >= 0")
        return cache.T_c(n, exponent, prec)
    raise ValueError(f"unknown power-sum kind {kind!r}")


def binom_neg(k: int, r: int, p: int) -> int:
    """C(-k, r) mod p as an int in [0, p)."""
    b = binom_mod_p(k + r - 1, r, p)
    return (-b) % p if r % 2 else b


# ---------------------------------------------------------------------------
# lazy coefficient sources


class Source:
    """Lazily computed z-expansion on one annulus."""

    def __init__(self, F: FiniteField, n: int, b_pos: int, b_neg: int):
        self.field = F
        self.n = n
        self.b_pos = b_pos
        self.b_neg = b_neg
        self._memo: dict[int, LaurentSeries] = {}

    def floor(self, e: int) -> float:
        if e >= 0:
            return -self.n * e + self.b_pos
        return -(self.n + 1) * e + self.b_neg

    def coeff(self, e: int, prec: int) -> LaurentSeries:
        if prec <= self.floor(e):
            return LaurentSeries.zero(self.field, prec)
        hit = self._memo.get(e)
        if hit is not None and (hit.prec is None or hit.prec >= prec):
            return hit.truncate(prec)
        out = self._compute(e, prec)
        self._memo[e] = out
        return out.truncate(prec)

    def _compute(self, e: int, prec: int) -> LaurentSeries:
        raise NotImplementedError

    def certificate(self) -> dict:
        return {"annulus": self.n, "b_pos": self.b_pos, "b_neg": self.b_neg,
                "floor": f"v(a_e) >= {-self.n}*e + b_pos (e >= 0), {-(self.n + 1)}*e + b_neg (e < 0)"}


class EisensteinSource(Source):
    """E_k(z) = sum over (c, d) != (0, 0) of (cz + d)^(-k)."""

    def __init__(self, F: FiniteField, k: int, n: int, cache: PowerSumCache | None = None):
        super().__init__(F, n, 0, -k)
        self.k = k
        self.cache = cache or power_sum_cache(F)

    def _compute(self, e: int, N: int) -> LaurentSeries:
        F, k, n, q = self.field, self.k, self.n, self.field.order
        if k % (q - 1):
            return LaurentSeries.zero(F)
        cache = self.cache
        total = LaurentSeries.zero(F, N)
        if e >= 0:
            r = e
            coef = F.from_int(binom_neg(k, r, F.p))
            if not coef:
                return LaurentSeries.zero(F)
            m = 0
            # term m: S_d(m, k + r) * T_c(m + n, r), valuation >= m k - n r
            while m * k - n * r < N:
                if r > 0 and r < (q - 1) * (m + n + 1):
                    break
                S = cache.S_d(m, k + r, N + (m + n) * r)
                if not S.is_zero():
                    T = cache.T_c(m + n, r, N - m * (k + r))
                    total = total + S * T
                m += 1
        else:
            s = -e - k
            if s < 0:
                return LaurentSeries.zero(F)
            coef = F.from_int(binom_neg(k, s, F.p))
            if not coef:
                return LaurentSeries.zero(F)
            m = n
            # term m: S_d(m, k + s) * T_c(m - n - 1, s), valuation >= m k + (n + 1) s
            while m * k + (n + 1) * s < N:
                if m > n and (s == 0 or s < (q - 1) * (m - n)):
                    break
                S = cache.S_d(m, k + s, N + max(m - n - 1, 0) * s)
                if not S.is_zero():
                    T = cache.T_c(m - n - 1, s, N - m * (k + s))
                    total = total + S * T
                m += 1
        return total.scale(coef).truncate(N)


class ProductSource(Source):
    def __init__(self, A: Source, B: Source):
        n = A.n
        bp = min(A.b_pos + B.b_pos, 1 + A.b_pos + B.b_neg, 1 + A.b_neg + B.b_pos)
        bn = min(A.b_pos + B.b_neg, A.b_neg + B.b_pos, A.b_neg + B.b_neg)
        super().__init__(A.field, n, bp, bn)
        self.A, self.B = A, B

    def _compute(self, M: int, N: int) -> LaurentSeries:
        A, B, n = self.A, self.B, self.n
        lo = min(0, M + 1, -N - n * M + A.b_neg + B.b_pos)
        hi = max(M, 0, N + (n + 1) * M - A.b_pos - B.b_neg)
        total = LaurentSeries.zero(self.field, N)
        for i in range(lo, hi + 1):
            fa, fb = A.floor(i), B.floor(M - i)
            if fa + fb >= N:
                continue
            a = A.coeff(i, int(N - fb))
            if a.is_zero():
                continue
            b = B.coeff(M - i, int(N - a.valuation))
            total = total + a * b
        return total.truncate(N)


class FrobeniusSource(Source):
    def __init__(self, A: Source, power: int):
        super().__init__(A.field, A.n, A.b_pos * power, A.b_neg * power)
        self.A, self.power = A, power

    def _compute(self, e: int, N: int) -> LaurentSeries:
        if e % self.power:
            return LaurentSeries.zero(self.field)
        return self.A.coeff(e // self.power, -(-N // self.power)).frobenius(self.power).truncate(N)


class ScaledSource(Source):
    def __init__(self, A: Source, scalar: LaurentSeries):
        s = scalar.valuation
        super().__init__(A.field, A.n, A.b_pos + s, A.b_neg + s)
        self.A, self.scalar, self.s = A, scalar, s

    def _compute(self, e: int, N: int) -> LaurentSeries:
        return (self.scalar * self.A.coeff(e, N - self.s)).truncate(N)


class SumSource(Source):
    def __init__(self, A: Source, B: Source):
        super().__init__(A.field, A.n, min(A.b_pos, B.b_pos), min(A.b_neg, B.b_neg))
        self.A, self.B = A, B

    def _compute(self, e: int, N: int) -> LaurentSeries:
        return self.A.coeff(e, N) + self.B.coeff(e, N)


def delta_source(F: FiniteField, n: int, eisenstein=None) -> Source:
    """Delta = (T^{q^2} - T) E_{q^2-1} + (T^q - T)^q E_{q-1}^{q+1} on annulus n."""
    q = F.order
    make = eisenstein or (lambda k: EisensteinSource(F, k, n))
    T = PolyT.T(F)
    lam1 = (T ** (q * q) - T).to_laurent()
    lam2 = ((T ** q - T) ** q).to_laurent()
    Eq1 = make(q - 1)
    part1 = ScaledSource(make(q * q - 1), lam1)
    part2 = ScaledSource(ProductSource(FrobeniusSource(Eq1, q), Eq1), lam2)
    return SumSource(part1, part2)


# ---------------------------------------------------------------------------
# public expansion objects


@dataclass
class AnnulusSeries:
    """Window of a z-expansion on annulus n, coefficients mod pi^prec."""

    field: FiniteField
    annulus: int
    window: tuple[int, int]
    prec: int
    coeffs: dict[int, LaurentSeries]
    certificate: dict = dc_field(default_factory=dict)
    source: Source | None = None

    def __getitem__(self, e: int) -> LaurentSeries:
        lo, hi = self.window
        if not lo <= e <= hi:
            raise WindowTooNarrow(f"exponent {e} outside window [{lo}, {hi}]")
        return self.coeffs[e]

    def extended(self, window: tuple[int, int]) -> "AnnulusSeries":
        return _collect(self.source, window, self.prec, self.certificate)

    def to_json(self) -> dict:
        return {"annulus": self.annulus,
                "window": list(self.window),
                "prec": self.prec,
                "coeffs": {str(e): c.to_json() for e, c in sorted(self.coeffs.items())},
                "certificate": self.certificate}


def _collect(src: Source, window, prec: int, certificate: dict) -> AnnulusSeries:
    lo, hi = window
    if lo > hi:
        raise WindowTooNarrow(f"empty window {window}")
    coeffs = {e: src.coeff(e, prec) for e in range(lo, hi + 1)}
    return AnnulusSeries(src.field, src.n, (lo, hi), prec, coeffs, certificate, src)


def expand_eisenstein(F: FiniteField, k: int, annulus: int, window: tuple[int, int], prec: int) -> AnnulusSeries:
    src = EisensteinSource(F, k, annulus)
    cert = src.certificate()
    cert["method"] = "power sums"
    return _collect(src, window, prec, cert)


def expand_delta(F: FiniteField, annulus: int, window: tuple[int, int], prec: int) -> AnnulusSeries:
    src = delta_source(F, annulus)
    cert = src.certificate()
    cert["method"] = "power sums; q-th power by Frobenius"
    return _collect(src, window, prec, cert)


def residue(s: AnnulusSeries, j: int) -> LaurentSeries:
    """Res z^j s(z) dz: the coefficient of z^(-j-1)."""
    return s[-j - 1]


# ---------------------------------------------------------------------------
# Upsilon_i and Xi_i


def _split_sum(cache: PowerSumCache, K: int, N: int, d_side: bool, prec: int) -> LaurentSeries:
    """Pair sums on annulus 0.

    d_side: sum over deg d >= deg c of d^(-K) (c/d)^N
    else:   sum over deg c >= deg d + 1 of c^(-K) (d/c)^N
    """
    F = cache.field
    total = LaurentSeries.zero(F, prec)
    shift = 0 if d_side else -1
    m = 0
    while m * K < prec:
        if N > 0 and N < (cache.q - 1) * (m + shift + 1):
            break
        if not d_side and N == 0 and m >= 1:
            break
        S = cache.S_d(m, K + N, prec + max(m + shift, 0) * N)
        if not S.is_zero():
            total = total + S * cache.T_c(m + shift, N, prec - m * (K + N))
        m += 1
    return total


def _delta_scalar(F: FiniteField) -> LaurentSeries:
    T = PolyT.T(F)
    return ((T ** F.order - T) ** F.order).to_laurent()


def _upsilon0_closed(F: FiniteField, prec: int) -> LaurentSeries:
    q = F.order
    cache = power_sum_cache(F)
    inner = prec + q * q
    ss = lambda K, N, d_side: _split_sum(cache, K, N, d_side, inner)
    u10 = LaurentSeries.zero(F, inner)
    i = 0
    while i == 0 or (q - 1) + i * (q - 1) * q * q < inner:
        N = i * (q - 1) * q * q
        u10 = u10 + ss((q - 1) * q, N, True) * ss(q - 1, N, False)
        i += 1
    j = 1
    while (q - 1) + (j * q - 1) * (q - 1) * q < inner:
        N = (j * q - 1) * (q - 1) * q
        u10 = u10 - ss((q - 1) * q, N, True) * ss(q - 1, N, False)
        j += 1
    u20 = LaurentSeries.zero(F, inner)
    # the z^(-(q-1)) term pairs s with j = sq + 1, starting at s = 0
    s = 0
    while s == 0 or (q - 1) * q + s * (q - 1) * q * q < inner:
        u20 = u20 - ss((q - 1) * q, s * (q - 1) * q * q, False) * ss(q - 1, ((s * q + 1) * q - 1) * (q - 1), True)
        s += 1
    t = 1
    while (q - 1) * q + (t * q - 1) * (q - 1) * q < inner:
        u20 = u20 + ss((q - 1) * q, (t * q - 1) * (q - 1) * q, False) * ss(q - 1, (t * q * q - 1) * (q - 1), True)
        t += 1
    return (_delta_scalar(F) * (u10 + u20)).truncate(prec)


def _xi1_closed(F: FiniteField, prec: int) -> LaurentSeries:
    q = F.order
    cache = power_sum_cache(F)
    inner = prec + q * q
    ss = lambda K, N, d_side: _split_sum(cache, K, N, d_side, inner)
    x11 = LaurentSeries.zero(F, inner)
    i = 0
    while (q - 1) + ((i * q + 1) * q - 1) * (q - 1) < inner:
        x11 = x11 - ss((q - 1) * q, i * (q - 1) * q * q, True) * ss(q - 1, ((i * q + 1) * q - 1) * (q - 1), False)
        i += 1
    j = 1
    while (q - 1) + (j * q * q - 1) * (q - 1) < inner:
        x11 = x11 + ss((q - 1) * q, (j * q - 1) * (q - 1) * q, True) * ss(q - 1, (j * q * q - 1) * (q - 1), False)
        j += 1
    x21 = LaurentSeries.zero(F, inner)
    s = 0
    while s == 0 or (q - 1) * q + s * (q - 1) * q * q < inner:
        N = s * (q - 1) * q * q
        x21 = x21 + ss((q - 1) * q, N, False) * ss(q - 1, N, True)
        s += 1
    t = 1
    while (q - 1) * q + (t * q - 1) * (q - 1) * q < inner:
        N = (t * q - 1) * (q - 1) * q
        x21 = x21 - ss((q - 1) * q, N, False) * ss(q - 1, N, True)
        t += 1
    return (_delta_scalar(F) * (x11 + x21)).truncate(prec)


def upsilon_exponent(q: int, i: int) -> int:
    return -(q - 1) - i * (q - 1) * q


def xi_exponent(q: int, i: int) -> int:
    return -i * (q - 1) * q


def upsilon_closed(F: FiniteField, i: int, prec: int) -> LaurentSeries:
    """Upsilon_i: coefficient of z^(-(q-1) - i(q-1)q) in Delta on annulus 0."""
    if i == 0:
        return _upsilon0_closed(F, prec)
    return delta_source(F, 0).coeff(upsilon_exponent(F.order, i), prec)


def xi_closed(F: FiniteField, i: int, prec: int) -> LaurentSeries:
    """Xi_i: coefficient of z^(-i(q-1)q) in Delta on annulus 0."""
    if i == 1:
        return _xi1_closed(F, prec)
    return delta_source(F, 0).coeff(xi_exponent(F.order, i), prec)
