"""Carlitz polynomials on A_inf = F_q[[pi]] and related tools.

The variable of the Carlitz data is pi, not T: [i] = pi^(q^i) - pi,
D_i = [i] D_{i-1}^q, L_i = [i] L_{i-1}, and

    e_i(x) = prod_{deg alpha < i} (x - alpha),   E_i = e_i / D_i,
    G_n = prod_i E_i^(n_i)   for n = sum_i n_i q^i.

Polynomials in pi are stored as ``PolyT`` (the class does not care what the
variable is called). Every G_n maps F_q[pi] into F_q[pi], which the code
checks by exact division instead of assuming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import CapExceeded, DivisionByZero, OracleFailure
from .field import FiniteField, binom_mod_p
from .poly import PolyT
from .series import LaurentSeries

MAX_INDEX = 12


def digits(n: int, q: int) -> list[int]:
    out = []
    while n:
        n, r = divmod(n, q)
        out.append(r)
    return out


def floor_log(n: int, q: int) -> int:
    """floor(log_q n) for n >= 1, by digit length."""
    if n < 1:
        raise ValueError("floor_log needs n >= 1")
    return len(digits(n, q)) - 1


def frobenius_poly(P: PolyT, t: int = 1) -> PolyT:
    """P^(q^t) for P with F_q coefficients: spreads the coefficients."""
    F = P.field
    step = F.order ** t
    out = [0] * (step * (len(P.coeffs) - 1) + 1) if P.coeffs else []
    for i, c in enumerate(P.coeffs):
        out[i * step] = c
    return PolyT(F, out)


def pi_poly_to_series(P: PolyT) -> LaurentSeries:
    return LaurentSeries(P.field, 0, list(P.coeffs), None)


def series_to_pi_poly(x: LaurentSeries) -> PolyT:
    """An exact element of F_q[pi] as a PolyT in pi."""
    if not x.is_exact or (x.coeffs and x.lead < 0):
        raise OracleFailure(f"{x!r} is not an exact element of F_q[pi]")
    if not x.coeffs:
        return PolyT(x.field)
    return PolyT(x.field, [0] * x.lead + list(x.coeffs))


class CarlitzCache:
    """[i], D_i, L_i and the F_q-linear e_i for i <= bound."""

    def __init__(self, F: FiniteField, bound: int):
        if bound > MAX_INDEX:
            raise CapExceeded(f"Carlitz index bound {bound} above {MAX_INDEX}")
        self.field, self.bound = F, bound
        q = F.order
        pi = PolyT.monomial(F, 1, 1)
        self.bracket = [PolyT(F)] + [PolyT.monomial(F, 1, q**i) - pi for i in range(1, bound + 1)]
        one = PolyT.const(F, 1)
        self.D, self.L = [one], [one]
        for i in range(1, bound + 1):
            self.D.append(self.bracket[i] * frobenius_poly(self.D[-1]))
            self.L.append(self.bracket[i] * self.L[-1])
        # e_i(x) = sum_j lin[i][j] x^(q^j)
        self.lin: list[list[PolyT]] = [[one]]
        for i in range(1, bound + 1):
            prev = self.lin[-1]
            s = self.D[i - 1] ** (q - 1)
            cur = [PolyT(F)] * (i + 1)
            for j, c in enumerate(prev):
                cur[j + 1] = cur[j + 1] + frobenius_poly(c)
                cur[j] = cur[j] - s * c
            self.lin.append(cur)

    def e_poly(self, i: int) -> dict[int, PolyT]:
        """e_i as {exponent: coefficient}."""
        q = self.field.order
        return {q**j: c for j, c in enumerate(self.lin[i]) if not c.is_zero()}

    def e_at(self, i: int, x: PolyT) -> PolyT:
        total = PolyT(self.field)
        for j, c in enumerate(self.lin[i]):
            if not c.is_zero():
                total = total + c * frobenius_poly(x, j)
        return total

    def E_at(self, i: int, x: PolyT) -> PolyT:
        """E_i(x) for x in F_q[pi], exactly."""
        quo, rem = divmod(self.e_at(i, x), self.D[i])
        if not rem.is_zero():
            raise OracleFailure(f"E_{i} is not integral at {x!r}")
        return quo

    def E_series(self, i: int, x: LaurentSeries, digits: int | None = None) -> LaurentSeries:
        """E_i(x) for a general element of A_inf (loses v(D_i) digits).

        With ``digits`` set, only the first ``digits`` digits past the valuation
        of D_i are tracked, which keeps the Frobenius powers short.
        """
        F, q = x.field, self.field.order
        den = pi_poly_to_series(self.D[i]).embed(F)
        N = None if digits is None else den.valuation + digits
        total = LaurentSeries.zero(F, N)
        for j, c in enumerate(self.lin[i]):
            if c.is_zero():
                continue
            cs = pi_poly_to_series(c).embed(F)
            xj = x if N is None else x.truncate(-(-(N - cs.valuation) // q**j))
            total = total + (cs.truncate(N) * xj.frobenius(q**j)).truncate(N)
        return total / den


@lru_cache(maxsize=None)
def carlitz_cache(F: FiniteField, bound: int) -> CarlitzCache:
    return CarlitzCache(F, bound)


def _cache_for(F: FiniteField, n: int) -> CarlitzCache:
    return carlitz_cache(F, max(1, len(digits(n, F.order))))


def bracket(F: FiniteField, i: int) -> PolyT:
    return carlitz_cache(F, max(i, 1)).bracket[i]


def carlitz_D(F: FiniteField, i: int) -> PolyT:
    return carlitz_cache(F, max(i, 1)).D[i]


def carlitz_L(F: FiniteField, i: int) -> PolyT:
    return carlitz_cache(F, max(i, 1)).L[i]


def e_poly(F: FiniteField, i: int) -> dict[int, PolyT]:
    return carlitz_cache(F, max(i, 1)).e_poly(i)


def _poly_mul_x(F: FiniteField, a: dict[int, PolyT], b: dict[int, PolyT]) -> dict[int, PolyT]:
    out: dict[int, PolyT] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, PolyT(F)) + x * y
    return {k: v for k, v in out.items() if not v.is_zero()}


def carlitz_G_poly(F: FiniteField, n: int) -> tuple[list[PolyT], PolyT]:
    """G_n = (sum_k num[k] x^k) / den with num[k], den in F_q[pi]."""
    cache = _cache_for(F, n)
    num: dict[int, PolyT] = {0: PolyT.const(F, 1)}
    den = PolyT.const(F, 1)
    for i, ni in enumerate(digits(n, F.order)):
        for _ in range(ni):
            num = _poly_mul_x(F, num, cache.e_poly(i))
            den = den * cache.D[i]
    out = [PolyT(F)] * (n + 1)
    for k, c in num.items():
        out[k] = c
    return out, den


def carlitz_G(F: FiniteField, n: int, x: LaurentSeries | PolyT) -> LaurentSeries | PolyT:
    """G_n(x): exact in F_q[pi] for x in F_q[pi], a series otherwise."""
    cache = _cache_for(F, n)
    exact = isinstance(x, PolyT)
    result = PolyT.const(F, 1) if exact else LaurentSeries.one(x.field)
    for i, ni in enumerate(digits(n, F.order)):
        if ni:
            Ei = cache.E_at(i, x) if exact else cache.E_series(i, x)
            result = result * Ei ** ni if exact else result * Ei.power(ni)
    return result


def mu_weight(n: int, l: int, q: int) -> int:
    """mu_{n,l} = sum_{i >= l+1} floor(n / q^i)."""
    total, i = 0, l + 1
    while q**i <= n:
        total += n // q**i
        i += 1
    return total


def mu_weight_bound_holds(n: int, l: int, q: int) -> bool:
    """mu_{n,l} >= n/((q-1) q^l) + l - log_q n - 1, decided exactly."""
    if n < 1:
        return True
    # equivalent to log_q n >= y with y = n/((q-1) q^l) + l - 1 - mu, i.e. n >= q^y
    y = Fraction(n, (q - 1) * q**l) + l - 1 - mu_weight(n, l, q)
    approx = math.log(n, q) - float(y)
    if abs(approx) > 1e-9:
        return approx > 0
    if y <= 0:
        return True
    return n ** y.denominator >= q ** y.numerator


@dataclass
class BanachExpansion:
    coeffs: list[LaurentSeries]
    space_tag: str = "C0"
    exact: bool = False
    points_level: int = 0
    certificate: dict = dc_field(default_factory=dict)

    def __getitem__(self, n: int) -> LaurentSeries:
        return self.coeffs[n]

    def to_json(self) -> dict:
        return {"space": self.space_tag, "exact": self.exact, "points_level": self.points_level,
                "coeffs": [c.to_json() for c in self.coeffs]}


def interpolation_points(F: FiniteField, m: int) -> list[PolyT]:
    """alpha_t = sum_i t_i pi^i for t < q^m, in order of t."""
    q = F.order
    return [PolyT(F, digits(t, q)) for t in range(q**m)]


def _np_neg(F: FiniteField, a: np.ndarray) -> np.ndarray:
    return (-a) % F.p if F.is_prime else F.np_neg[a]


def _solve_mod_p(F: FiniteField, M: np.ndarray) -> np.ndarray:
    """Inverse of a square matrix over F_q by Gauss-Jordan elimination."""
    N = M.shape[0]
    A = np.concatenate([M.copy(), np.eye(N, dtype=np.int64)], axis=1)
    for col in range(N):
        piv = next((r for r in range(col, N) if A[r, col]), None)
        if piv is None:
            raise OracleFailure("interpolation matrix is singular mod pi")
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
        A[col] = F.np_mul(A[col], F.inv(int(A[col, col])))
        others = np.nonzero(A[:, col])[0]
        others = others[others != col]
        if len(others):
            factors = _np_neg(F, A[others, col])
            A[others] = F.np_add(A[others], F.np_mul(factors[:, None], A[col][None, :]))
    return A[:, N:]


def _digit_rows(F: FiniteField, polys: list[PolyT], width: int) -> np.ndarray:
    out = np.zeros((len(polys), width), dtype=np.int64)
    for i, P in enumerate(polys):
        cs = P.coeffs[:width]
        out[i, :len(cs)] = cs
    return out


def expand_continuous(F: FiniteField, f: Callable[[PolyT], LaurentSeries | PolyT], n_max: int,
                      prec: int = 20, max_points: int = 4096) -> BanachExpansion:
    """Coefficients a_0..a_{n_max} of f = sum a_n G_n from values on F_q[pi].

    The interpolation points are all alpha of pi-degree < m with q^m > n_max;
    G_n vanishes there for n >= q^m, so the first q^m coefficients are
    recovered exactly. The system V a = f(alpha) is solved by pi-adic lifting
    from V mod pi; when every value is an exact polynomial in pi the lifting
    terminates and the result is exact.
    """
    q = F.order
    m = max(1, len(digits(n_max, q)))
    N = q**m
    if N > max_points:
        raise CapExceeded(f"{N} interpolation points above {max_points}")
    pts = interpolation_points(F, m)
    cache = carlitz_cache(F, m)
    Evals = [[cache.E_at(i, a) for i in range(m)] for a in pts]
    V = [[None] * N for _ in range(N)]
    for t in range(N):
        for n in range(N):
            g = PolyT.const(F, 1)
            for i, ni in enumerate(digits(n, q)):
                if ni:
                    g = g * Evals[t][i] ** ni
            V[t][n] = g

    raw = [f(a) for a in pts]
    exact = True
    vals: list[PolyT] = []
    shift = 0
    series_vals = [r if isinstance(r, LaurentSeries) else pi_poly_to_series(r) for r in raw]
    for s in series_vals:
        if not s.is_zero():
            shift = min(shift, s.valuation)
    for s in series_vals:
        s = s.shift(-shift)
        if not s.is_exact:
            exact = False
            s = s.truncate(prec - shift)
            s = s.as_exact()
        vals.append(series_to_pi_poly(s) if not s.is_zero() else PolyT(F))
    steps = prec - shift if not exact else None
    deg_V = max(int(max(0, g.deg)) for row in V for g in row)
    deg_f = max([int(max(0, v.deg)) for v in vals] + [0])
    W = max(deg_V, deg_f) + 2
    Vd = np.zeros((N, N, W), dtype=np.int64)
    for t in range(N):
        Vd[t] = _digit_rows(F, V[t], W)
    Vbar_inv = _solve_mod_p(F, Vd[:, :, 0])
    r = _digit_rows(F, vals, W)
    sol = []
    s = 0
    while np.any(r) and (steps is None or s < steps):
        low = r[:, 0]
        # a_s = Vbar^{-1} (r mod pi)
        a_s = F.np_sum(F.np_mul(Vbar_inv, low[None, :]), axis=1)
        sol.append(a_s)
        r = F.np_add(r, _np_neg(F, F.np_sum(F.np_mul(Vd, a_s[None, :, None]), axis=1)))
        if np.any(r[:, 0]):
            raise OracleFailure("lifting step left a nonzero constant term")
        r = np.concatenate([r[:, 1:], np.zeros((N, 1), dtype=np.int64)], axis=1)
        s += 1
    if exact and np.any(r):
        raise OracleFailure("lifting did not terminate")
    coeffs = []
    for n in range(n_max + 1):
        digs = [int(a[n]) for a in sol]
        coeffs.append(LaurentSeries(F, shift, digs, None if exact else prec))
    cert = {"points": N, "lifting_steps": s, "value_shift": shift}
    return BanachExpansion(coeffs, "C0", exact, m, cert)


def evaluate_expansion(F: FiniteField, exp: BanachExpansion, x: PolyT) -> LaurentSeries:
    total = LaurentSeries.zero(F)
    for n, a in enumerate(exp.coeffs):
        if not a.is_zero():
            total = total + a * pi_poly_to_series(carlitz_G(F, n, x))
    return total


def ch_norm(exp: BanachExpansion, h: int) -> int | None:
    """log_q of max_j |a_j| q^(h floor(log_q j)); None for the zero expansion."""
    q = exp.coeffs[0].field.order if exp.coeffs else 2
    best = None
    for j, a in enumerate(exp.coeffs):
        if a.is_zero():
            continue
        e = -a.valuation + (h * floor_log(j, q) if j >= 1 else 0)
        best = e if best is None else max(best, e)
    return best


# ---------------------------------------------------------------------------
# hyperderivatives


def hyperderivative(F: FiniteField, coeffs: list, j: int) -> list:
    """D_j(sum c_i x^i) = sum binom(i, j) c_i x^(i-j); entries are field ints or series."""
    out = []
    for i in range(j, len(coeffs)):
        b = binom_mod_p(i, j, F.p)
        c = coeffs[i]
        if isinstance(c, int):
            out.append(F.mul(F.from_int(b), c))
        else:
            out.append(c.scale(F.from_int(b)))
    return out


def kernel_hyperderivative(z: LaurentSeries, a: LaurentSeries, j: int, cap: int | None = None) -> LaurentSeries:
    """D_j[x -> 1/(z - x)](a) = (z - a)^(-(j+1))."""
    d = z - a.embed(z.field) if a.field is not z.field else z - a
    if d.is_zero():
        raise DivisionByZero("kernel evaluated at its pole")
    return d.power(-(j + 1), cap=cap)
