"""Truncated Laurent series in the uniformizer pi = 1/T.

A series is stored as ``lead`` (exponent of the first stored digit), a tuple
of digits and an absolute precision ``prec``: the element is known modulo
``pi**prec``. ``prec=None`` marks an exact element, which is then a finite
Laurent polynomial in pi.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DivisionByZero, InsufficientPrecision, InversionOfApparentZero, ZeroDenominator, ZeroInput
from .field import FiniteField
from .poly import PolyT, convolve


def _inf(p):
    return math.inf if p is None else p


def _fin(p):
    return None if p == math.inf else int(p)


class LaurentSeries:
    __slots__ = ("field", "lead", "coeffs", "prec")

    def __init__(self, field: FiniteField, lead: int, coeffs=(), prec: int | None = None):
        cs = list(coeffs)
        if prec is not None:
            cs = cs[: max(0, prec - lead)]
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        lead += i
        cs = cs[i:]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            lead = prec if prec is not None else 0
        self.field = field
        self.lead = lead
        self.coeffs = tuple(cs)
        self.prec = prec

    # constructors

    @classmethod
    def zero(cls, F: FiniteField, prec: int | None = None) -> "LaurentSeries":
        return cls(F, 0 if prec is None else prec, (), prec)

    @classmethod
    def one(cls, F: FiniteField) -> "LaurentSeries":
        return cls(F, 0, (1,))

    @classmethod
    def monomial(cls, F: FiniteField, c: int, e: int, prec: int | None = None) -> "LaurentSeries":
        return cls(F, e, (c,), prec)

    @classmethod
    def pi(cls, F: FiniteField) -> "LaurentSeries":
        return cls(F, 1, (1,))

    @classmethod
    def from_digits(cls, F: FiniteField, digits: dict[int, int], prec: int | None = None) -> "LaurentSeries":
        """Build from a mapping exponent -> coefficient."""
        digits = {e: c for e, c in digits.items() if c}
        if not digits:
            return cls.zero(F, prec)
        lo, hi = min(digits), max(digits)
        return cls(F, lo, [digits.get(e, 0) for e in range(lo, hi + 1)], prec)

    # inspection

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True when no nonzero digit is known."""
        return not self.coeffs

    @property
    def valuation(self):
        """Exponent of the first nonzero digit; for a zero series, its precision (inf if exact)."""
        if self.coeffs:
            return self.lead
        return _inf(self.prec)

    @property
    def leading_coefficient(self) -> int:
        if not self.coeffs:
            raise InversionOfApparentZero("zero series has no leading coefficient")
        return self.coeffs[0]

    def digit(self, e: int) -> int:
        if self.prec is not None and e >= self.prec:
            raise InsufficientPrecision(f"digit {e} requested from a series known mod pi^{self.prec}")
        i = e - self.lead
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def digits(self) -> dict[int, int]:
        return {self.lead + i: c for i, c in enumerate(self.coeffs) if c}

    @property
    def degree(self) -> int:
        """Largest exponent carrying a nonzero digit."""
        if not self.coeffs:
            raise ZeroInput("zero series")
        return self.lead + len(self.coeffs) - 1

    # ring operations

    def _check(self, other: "LaurentSeries") -> None:
        if other.field is not self.field:
            raise TypeError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check(other)
        F = self.field
        prec = _fin(min(_inf(self.prec), _inf(other.prec)))
        if not other.coeffs:
            return self.truncate(prec)
        if not self.coeffs:
            return other.truncate(prec)
        lo = min(self.lead, other.lead)
        hi = max(self.lead + len(self.coeffs), other.lead + len(other.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        if hi <= lo:
            return LaurentSeries.zero(F, prec)
        out = [0] * (hi - lo)
        for s in (self, other):
            off = s.lead - lo
            for i, c in enumerate(s.coeffs[: max(0, hi - s.lead)]):
                out[off + i] = F.add(out[off + i], c)
        return LaurentSeries(F, lo, out, prec)

    def __neg__(self) -> "LaurentSeries":
        F = self.field
        return LaurentSeries(F, self.lead, [F.neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c: int) -> "LaurentSeries":
        """Multiply by a field constant."""
        F = self.field
        if c == 0:
            return LaurentSeries.zero(F, self.prec)
        return LaurentSeries(F, self.lead, [F.mul(c, x) for x in self.coeffs], self.prec)

    def shift(self, e: int) -> "LaurentSeries":
        """Multiply by pi**e."""
        prec = None if self.prec is None else self.prec + e
        if not self.coeffs:
            return LaurentSeries.zero(self.field, prec)
        return LaurentSeries(self.field, self.lead + e, self.coeffs, prec)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check(other)
        F = self.field
        va, vb = self.valuation, other.valuation
        prec = _fin(min(_inf(self.prec) + vb, _inf(other.prec) + va))
        if not self.coeffs or not other.coeffs:
            return LaurentSeries.zero(F, prec)
        lead = self.lead + other.lead
        n = None if prec is None else prec - lead
        if n is not None and n <= 0:
            return LaurentSeries.zero(F, prec)
        return LaurentSeries(F, lead, convolve(F, self.coeffs, other.coeffs, n), prec)

    def inverse(self, cap: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse.

        Inexact input loses ``2 v`` of absolute precision. An exact
        non-monomial has an infinite expansion, so ``cap`` (absolute
        precision of the result) is then required.
        """
        F = self.field
        if not self.coeffs:
            if self.prec is None:
                raise DivisionByZero("inverse of exact zero")
            raise InversionOfApparentZero(f"inverse of 0 + O(pi^{self.prec})")
        v = self.lead
        if self.prec is None:
            if len(self.coeffs) == 1:
                return LaurentSeries(F, -v, (F.inv(self.coeffs[0]),))
            if cap is None:
                raise InsufficientPrecision("inverse of an exact non-monomial needs a precision cap")
            prec = cap
        else:
            prec = self.prec - 2 * v
            if cap is not None:
                prec = min(prec, cap)
        n = prec + v
        if n <= 0:
            return LaurentSeries.zero(F, prec)
        return LaurentSeries(F, -v, _unit_inverse(F, self.coeffs, n), prec)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if not other.coeffs:
            return self * other.inverse()
        if other.is_exact and len(other.coeffs) > 1:
            if self.is_exact:
                raise InsufficientPrecision("exact quotient needs a cap; use divide(a, b, cap)")
            # enough digits of 1/other that the product keeps precision prec(self) - v(other)
            return self * other.inverse(cap=self.prec - other.lead - self.valuation)
        return self * other.inverse()

    def divide(self, other: "LaurentSeries", cap: int) -> "LaurentSeries":
        """Quotient known to absolute precision at most ``cap``."""
        if not other.coeffs:
            return self * other.inverse()
        va = self.valuation if self.coeffs else 0
        inv = other.inverse(cap=cap - va)
        return (self * inv).truncate(cap)

    def __pow__(self, n: int) -> "LaurentSeries":
        return self.power(n)

    def power(self, n: int, cap: int | None = None) -> "LaurentSeries":
        """self**n; ``cap`` bounds the absolute precision of the result."""
        F = self.field
        if n == 0:
            return LaurentSeries.one(F)
        if not self.coeffs:
            if n < 0:
                return self.inverse()
            return LaurentSeries.zero(F, None if self.prec is None else self.prec + (n - 1) * self.prec)
        v = self.lead
        if n < 0:
            if self.is_exact and len(self.coeffs) > 1:
                if cap is None:
                    raise InsufficientPrecision("negative power of an exact non-monomial needs a cap")
                base = self.inverse(cap=cap + (-n - 1) * v)
            else:
                base = self.inverse(cap=None if cap is None else cap + (-n - 1) * v)
            return base.power(-n, cap)
        p = F.p
        t, m = 0, n
        while m % p == 0:
            m //= p
            t += 1
        # u^(p^t m) = (u^m)^(p^t): relative digits of u^m are multiplied by p^t
        rel_m = None if self.prec is None else self.prec - v
        if cap is not None:
            want = cap - n * v
            if want <= 0:
                return LaurentSeries.zero(F, cap)
            want = -(-want // p**t)
            rel_m = want if rel_m is None else min(rel_m, want)
        u = list(self.coeffs)
        out = [1]
        while True:
            if m & 1:
                out = convolve(F, out, u, rel_m)
            m >>= 1
            if not m:
                break
            u = convolve(F, u, u, rel_m)
        w = LaurentSeries(F, 0, out, rel_m)
        if t:
            w = w.frobenius(p**t)
        res = w.shift(n * v)
        if cap is not None:
            res = res.truncate(cap)
        return res

    def frobenius(self, power: int) -> "LaurentSeries":
        """Raise to ``power`` (a power of p) by powering digits and scaling exponents."""
        F = self.field
        prec = None if self.prec is None else self.prec * power
        if not self.coeffs:
            return LaurentSeries.zero(F, prec)
        lead = self.lead * power
        out = [0] * ((len(self.coeffs) - 1) * power + 1)
        for i, c in enumerate(self.coeffs):
            out[i * power] = F.pow(c, power)
        return LaurentSeries(F, lead, out, prec)

    def truncate(self, N: int | None) -> "LaurentSeries":
        """Forget digits at exponents >= N."""
        if N is None or (self.prec is not None and self.prec <= N):
            return self
        return LaurentSeries(self.field, self.lead, self.coeffs, N)

    def as_exact(self) -> "LaurentSeries":
        """Drop the error term: the stored digits as an exact element."""
        return LaurentSeries(self.field, self.lead, self.coeffs)

    def embed(self, F: FiniteField) -> "LaurentSeries":
        """Same series viewed over a field containing this one as a tower base."""
        if F is self.field:
            return self
        return LaurentSeries(F, self.lead, self.coeffs, self.prec)

    def mod_pi_power(self, k: int) -> "LaurentSeries":
        """Exact representative of self mod pi^k (digits below k)."""
        if self.prec is not None and self.prec < k:
            raise InsufficientPrecision(f"need digits below {k}, have mod pi^{self.prec}")
        return LaurentSeries(self.field, self.lead, self.coeffs[: max(0, k - self.lead)])

    def polynomial_part(self) -> PolyT:
        """Digits at exponents <= 0, read as a polynomial in T."""
        cs = [self.digit(-i) for i in range(0, max(0, -self.lead) + 1)] if self.coeffs else []
        return PolyT(self.field, cs)

    # comparison

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.field is other.field and self.lead == other.lead
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self) -> int:
        return hash((id(self.field), self.lead, self.coeffs, self.prec))

    def agrees_with(self, other: "LaurentSeries", N: int) -> bool:
        """Do the two series agree modulo pi^N?"""
        d = self - other
        if d.coeffs and d.lead < N:
            return False
        if d.prec is not None and d.prec < N:
            raise InsufficientPrecision(f"comparison to O(pi^{N}) but difference known mod pi^{d.prec}")
        return True

    # serialisation

    def to_json(self) -> dict:
        return {"lead": self.lead,
                "coeffs": [self.field.to_json(c) for c in self.coeffs],
                "prec": self.prec}

    @classmethod
    def from_json(cls, F: FiniteField, data: dict) -> "LaurentSeries":
        return cls(F, int(data["lead"]), [F.from_json(c) for c in data["coeffs"]], data.get("prec"))

    def __repr__(self) -> str:
        F = self.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = self.lead + i
            cs = F.format(c)
            mono = "" if e == 0 else "pi" if e == 1 else f"pi^{e}"
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"({cs})*{mono}" if " " in cs else f"{cs}*{mono}")
        if self.prec is not None:
            terms.append(f"O(pi^{self.prec})")
        return " + ".join(terms) if terms else "0"


def _unit_inverse(F: FiniteField, a, n: int) -> list[int]:
    """First n digits of 1/a for a power series a with a[0] != 0."""
    a = list(a[:n]) + [0] * max(0, n - len(a))
    b0 = F.inv(a[0])
    if F.is_prime and n > 24:
        p = F.p
        A = np.asarray(a, dtype=np.int64)
        b = np.array([b0], dtype=np.int64)
        k = 1
        while k < n:
            k = min(2 * k, n)
            ab = np.convolve(A[:k], b)[:k] % p
            ab = (-ab) % p
            ab[0] = (ab[0] + 2) % p
            b = np.convolve(b, ab)[:k] % p
        return b.tolist()
    b = [b0] + [0] * (n - 1)
    for t in range(1, n):
        s = 0
        for i in range(1, t + 1):
            if a[i] and b[t - i]:
                s = F.add(s, F.mul(a[i], b[t - i]))
        b[t] = F.mul(F.neg(s), b0)
    return b


def embed_rational(num: PolyT, den: PolyT, prec: int) -> LaurentSeries:
    """The rational function num/den of T as a series in pi, mod pi^prec."""
    if den.is_zero():
        raise ZeroDenominator("embed_rational with zero denominator")
    F = num.field
    if num.is_zero():
        return LaurentSeries.zero(F, prec)
    n, d = num.to_laurent(), den.to_laurent()
    return (n * d.inverse(cap=prec - n.lead)).truncate(prec)


def one_unit_part(a: PolyT) -> LaurentSeries:
    """a / T^deg(a): a polynomial in pi whose constant term is lc(a)."""
    if a.is_zero():
        raise ZeroInput("one_unit_part(0)")
    return LaurentSeries(a.field, 0, tuple(reversed(a.coeffs)))


def laurent_arith(a: LaurentSeries, b, op: str, cap: int | None = None) -> LaurentSeries:
    """Dispatch for the basic series operations.

    ``b`` is the second operand for add/sub/mul/div, the exponent for pow
    and the Frobenius power (a power of p) for frobenius_pow.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a.divide(b, cap) if cap is not None else a / b
    if op == "inv":
        return a.inverse(cap)
    if op == "pow":
        return a.power(int(b), cap)
    if op == "frobenius_pow":
        return a.frobenius(int(b))
    raise ValueError(f"unknown operation {op!r}")
