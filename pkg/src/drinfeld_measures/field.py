"""Finite fields F_q and their extensions F_{q^m}.

Elements are plain ints. A field of degree ``m`` over its base stores the
element ``sum(d_i * B**i)`` where ``B`` is the base field's order and the
digits ``d_i`` are base-field elements, i.e. the coefficients of the
element as a polynomial in a root of the field's modulus. For a tower over
F_p this makes the int's base-p digits the absolute coordinates, so
addition is digitwise mod p at every level.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, DivisionByZero

MAX_Q = 16
MAX_EXT_DEGREE = 4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def binom_mod_p(n: int, k: int, p: int) -> int:
    """Binomial coefficient C(n, k) mod p by Lucas' digit product."""
    if k < 0 or n < 0 or k > n:
        return 0
    out = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        out = out * _small_binom(nd, kd) % p
        n //= p
        k //= p
    return out


@functools.lru_cache(maxsize=None)
def _small_binom(n: int, k: int) -> int:
    r = 1
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r


class FiniteField:
    """A finite field, either prime or a simple extension of another field."""

    def __init__(self, base: "FiniteField | None", modulus: tuple[int, ...] | int):
        if base is None:
            p = int(modulus)
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            self.p = p
            self.base = None
            self.degree = 1
            self.modulus = None
            self.order = p
            self.is_prime = True
            self.abs_degree = 1
        else:
            self.p = base.p
            self.base = base
            self.modulus = tuple(modulus)
            self.degree = len(self.modulus) - 1
            if self.modulus[-1] != 1:
                raise ValueError("modulus must be monic")
            if not _is_irreducible(base, self.modulus):
                raise ValueError(f"modulus {self.modulus} is reducible over F_{base.order}")
            self.order = base.order ** self.degree
            self.is_prime = False
            self.abs_degree = base.abs_degree * self.degree
        self._build_tables()

    # construction helpers

    def _digits(self, a: int) -> list[int]:
        B = self.base.order
        return [(a // B**i) % B for i in range(self.degree)]

    def _from_digits(self, ds) -> int:
        B = self.base.order
        return sum(d * B**i for i, d in enumerate(ds))

    def _mul_slow(self, a: int, b: int) -> int:
        F = self.base
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = F.add(prod[i + j], F.mul(x, y))
        m = self.modulus
        for t in range(len(prod) - 1, self.degree - 1, -1):
            c = prod[t]
            if c:
                for i in range(self.degree + 1):
                    prod[t - self.degree + i] = F.sub(prod[t - self.degree + i], F.mul(c, m[i]))
        return self._from_digits(prod[: self.degree])

    def _build_tables(self) -> None:
        n = self.order
        if self.is_prime:
            mul = lambda a, b: a * b % n
        else:
            mul = self._mul_slow
        # smallest generator of the multiplicative group
        for g in range(1 if n == 2 else 2, n):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = mul(x, g)
            if len(exp) == n - 1:
                break
        self.generator = g
        self._exp = exp + exp
        self._log = [0] * n
        for i, x in enumerate(exp):
            self._log[x] = i
        self._inv = [0] + [exp[(-self._log[x]) % (n - 1)] for x in range(1, n)]
        p = self.p
        self._pdigits = self.abs_degree
        if self.is_prime:
            self._neg = [(-x) % p for x in range(n)]
        else:
            self._neg = [self._digitwise(x, 0, lambda u, v: (-u) % p) for x in range(n)]
        self._add_table = None
        if not self.is_prime and p != 2 and n <= 1024:
            self._add_table = [[self._digitwise(a, b, lambda u, v: (u + v) % p) for b in range(n)]
                               for a in range(n)]
        self.np_exp = np.array(self._exp, dtype=np.int64)
        self.np_log = np.array(self._log, dtype=np.int64)
        self.np_neg = np.array(self._neg, dtype=np.int64)
        self.np_inv = np.array(self._inv, dtype=np.int64)

    def _digitwise(self, a: int, b: int, op) -> int:
        p = self.p
        out, scale = 0, 1
        for _ in range(self._pdigits):
            out += op(a % p, b % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    # scalar arithmetic

    def add(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._digitwise(a, b, lambda u, v: (u + v) % self.p)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if self.is_prime:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0 in a finite field")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise DivisionByZero("negative power of 0")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.order - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> this field."""
        return n % self.p

    def elements(self) -> range:
        return range(self.order)

    def contains_base(self, a: int, sub: "FiniteField") -> bool:
        return a < sub.order

    # vectorised arithmetic on int64 arrays

    def np_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.is_prime:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self._pdigits):
            out += (((a // scale) % self.p + (b // scale) % self.p) % self.p) * scale
            scale *= self.p
        return out

    def np_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.is_prime:
            return (a * b) % self.p
        r = self.np_exp[self.np_log[a] + self.np_log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def np_sum(self, a: np.ndarray, axis: int) -> np.ndarray:
        """Field sum along an axis."""
        if self.is_prime:
            return a.sum(axis=axis) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        out = np.zeros(np.delete(a.shape, axis), dtype=np.int64)
        scale = 1
        for _ in range(self._pdigits):
            out += (((a // scale) % self.p).sum(axis=axis) % self.p) * scale
            scale *= self.p
        return out

    # presentation

    def format(self, a: int, var: str = "w") -> str:
        if self.is_prime:
            return str(a)
        ds = self._digits(a)
        terms = []
        for i in range(len(ds) - 1, -1, -1):
            d = ds[i]
            if not d:
                continue
            c = self.base.format(d)
            if i == 0:
                terms.append(c)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                terms.append(mono if c == "1" else f"({c}){mono}" if " " in c else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"

    def to_json(self, a: int):
        if self.is_prime:
            return a
        return [self.base.to_json(d) for d in self._digits(a)]

    def from_json(self, data) -> int:
        if self.is_prime:
            return int(data) % self.p
        return self._from_digits([self.base.from_json(d) for d in data])

    def __repr__(self) -> str:
        if self.is_prime:
            return f"GF({self.p})"
        return f"GF({self.order}; modulus={list(self.modulus)} over {self.base!r})"


def _poly_divides(F: FiniteField, f: list[int], g: tuple[int, ...]) -> bool:
    """Does monic g divide f over F?"""
    r = list(f)
    dg = len(g) - 1
    for t in range(len(r) - 1, dg - 1, -1):
        c = r[t]
        if c:
            for i in range(dg + 1):
                r[t - dg + i] = F.sub(r[t - dg + i], F.mul(c, g[i]))
    return not any(r[:dg])


def _is_irreducible(F: FiniteField, f: tuple[int, ...]) -> bool:
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(F.order), repeat=d):
            if _poly_divides(F, list(f), tuple(low) + (1,)):
                return False
    return True


def least_irreducible(F: FiniteField, m: int) -> tuple[int, ...]:
    """Least monic irreducible of degree m over F.

    Candidates are ordered by their int encoding sum(c_i * |F|**i), which
    compares the highest non-leading coefficient first.
    """
    for code in range(F.order**m):
        low = tuple((code // F.order**i) % F.order for i in range(m))
        f = low + (1,)
        if _is_irreducible(F, f):
            return f
    raise AssertionError("no irreducible polynomial found")


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> FiniteField:
    return FiniteField(None, p)


@functools.lru_cache(maxsize=None)
def extension(base: FiniteField, m: int) -> FiniteField:
    if m == 1:
        return base
    return FiniteField(base, least_irreducible(base, m))


def GF(q: int) -> FiniteField:
    """The field with q elements, built over its prime field."""
    if q > MAX_Q:
        raise CapExceeded(f"q = {q} exceeds the supported maximum {MAX_Q}")
    p, e = prime_power(q)
    return extension(prime_field(p), e)


@dataclass(frozen=True)
class FieldCtx:
    """Constant field F_q together with the coefficient field F_{q^m}."""

    p: int
    e: int
    m: int
    const: FiniteField
    coeff: FiniteField

    @property
    def q(self) -> int:
        return self.p**self.e

    @classmethod
    def make(cls, q: int, m: int = 1, max_q: int = MAX_Q, max_m: int = MAX_EXT_DEGREE) -> "FieldCtx":
        if q > max_q:
            raise CapExceeded(f"q = {q} exceeds cap {max_q}")
        if m > max_m:
            raise CapExceeded(f"extension degree {m} exceeds cap {max_m}")
        p, e = prime_power(q)
        const = extension(prime_field(p), e)
        return cls(p, e, m, const, extension(const, m))

    @property
    def moduli(self) -> dict:
        return {"const": self.const.modulus, "coeff": self.coeff.modulus}
