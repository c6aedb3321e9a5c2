"""Polynomials in T over a finite field."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DivisionByZero
from .field import FiniteField


def _strip(cs) -> tuple[int, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def convolve(F: FiniteField, a, b, n: int | None = None) -> list[int]:
    """Product of coefficient sequences, truncated to length n."""
    if not len(a) or not len(b):
        return []
    if n is not None:
        a, b = a[:n], b[:n]
    if F.is_prime:
        out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % F.p
        out = out.tolist()
    else:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out if n is None else out[:n]


class PolyT:
    """An element of F_q[T]; coefficients are stored lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs=()):
        self.field = field
        self.coeffs = _strip(coeffs)

    @classmethod
    def T(cls, F: FiniteField) -> "PolyT":
        return cls(F, (0, 1))

    @classmethod
    def const(cls, F: FiniteField, c: int) -> "PolyT":
        return cls(F, (c,))

    @classmethod
    def monomial(cls, F: FiniteField, c: int, n: int) -> "PolyT":
        return cls(F, (0,) * n + (c,))

    @property
    def deg(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lc == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _coerce(self, other) -> "PolyT":
        if isinstance(other, PolyT):
            return other
        if isinstance(other, int):
            return PolyT(self.field, (self.field.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyT(F, [F.add(self[i], other[i]) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return PolyT(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PolyT(self.field, convolve(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c: int) -> "PolyT":
        F = self.field
        return PolyT(F, [F.mul(c, x) for x in self.coeffs])

    def __pow__(self, n: int) -> "PolyT":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = PolyT(self.field, (1,))
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __divmod__(self, other: "PolyT"):
        F = self.field
        if other.is_zero():
            raise DivisionByZero("polynomial division by 0")
        r = list(self.coeffs)
        d = len(other.coeffs) - 1
        inv_lc = F.inv(other.lc)
        qt = [0] * max(len(r) - d, 0)
        for t in range(len(r) - 1, d - 1, -1):
            c = r[t]
            if c:
                f = F.mul(c, inv_lc)
                qt[t - d] = f
                for i, g in enumerate(other.coeffs):
                    r[t - d + i] = F.sub(r[t - d + i], F.mul(f, g))
        return PolyT(F, qt), PolyT(F, r[:d])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def __eq__(self, other) -> bool:
        other = self._coerce(other) if isinstance(other, int) else other
        return isinstance(other, PolyT) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("PolyT", id(self.field), self.coeffs))

    def to_laurent(self):
        """Exact image in F_q((pi)), pi = 1/T."""
        from .series import LaurentSeries

        if self.is_zero():
            return LaurentSeries.zero(self.field)
        return LaurentSeries(self.field, -int(self.deg), tuple(reversed(self.coeffs)))

    def to_json(self):
        return [self.field.to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, F: FiniteField, data) -> "PolyT":
        return cls(F, [F.from_json(c) for c in data])

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        F = self.field
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = F.format(c)
            mono = "" if i == 0 else "T" if i == 1 else f"T^{i}"
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"({cs})*{mono}" if " " in cs else f"{cs}*{mono}")
        return " + ".join(terms)


def polys_of_degree(F: FiniteField, d: int, monic: bool = False):
    """All polynomials of exact degree d (monic ones if asked)."""
    leads = [1] if monic else range(1, F.order)
    for lead in leads:
        for low in itertools.product(range(F.order), repeat=d):
            yield PolyT(F, low + (lead,))


def polys_below(F: FiniteField, d: int):
    """All polynomials of degree < d, zero included."""
    for cs in itertools.product(range(F.order), repeat=d):
        yield PolyT(F, cs[::-1])
