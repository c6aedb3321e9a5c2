"""The Bruhat-Tits tree of GL2 over F_q((1/T)).

A vertex is stored in the normal form (pi^k, u; 0, 1) and is identified with
the closed ball {x : v(x - u) >= k}. Lambda_n is the vertex (k=-n, u=0); the
fundamental edge e_n runs Lambda_n -> Lambda_{n+1}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import CapExceeded, InsufficientPrecision
from .field import FiniteField
from .poly import PolyT
from .series import LaurentSeries

MAX_DEPTH = 64


@dataclass(frozen=True)
class Vertex:
    field: FiniteField
    k: int
    u: LaurentSeries  # exact, no digits at exponents >= k

    @classmethod
    def make(cls, F: FiniteField, k: int, u: LaurentSeries | None = None) -> "Vertex":
        if u is None:
            u = LaurentSeries.zero(F)
        return cls(F, k, u.mod_pi_power(k))

    def parent(self) -> "Vertex":
        return Vertex.make(self.field, self.k - 1, self.u)

    def child(self, c: int) -> "Vertex":
        F = self.field
        return Vertex(F, self.k + 1, self.u + LaurentSeries.monomial(F, c, self.k)) if c else Vertex(F, self.k + 1, self.u)

    def children(self) -> list["Vertex"]:
        return [self.child(c) for c in range(self.field.order)]

    def matrix(self) -> "Mat2":
        F = self.field
        return Mat2(LaurentSeries.monomial(F, 1, self.k), self.u, LaurentSeries.zero(F), LaurentSeries.one(F))

    def lambda_index(self) -> int | None:
        """n if this vertex is Lambda_n, else None."""
        return -self.k if self.u.is_zero() else None

    def __repr__(self) -> str:
        n = self.lambda_index()
        if n is not None:
            return f"L({n})"
        return f"[pi^{self.k}; {self.u}]"

    def to_json(self) -> dict:
        return {"k": self.k, "u": self.u.to_json()}


def lam(F: FiniteField, n: int) -> Vertex:
    """Lambda_n, the class of T^n A_inf + A_inf."""
    return Vertex.make(F, -n)


def m_vertex(F: FiniteField, j: int, x: LaurentSeries) -> Vertex:
    """M_j on the end of x: the ball of radius |pi|^j around x."""
    return Vertex.make(F, j, x)


@dataclass(frozen=True)
class Edge:
    origin: Vertex
    terminal: Vertex

    @property
    def positive(self) -> bool:
        """Does the edge point towards infinity (terminal is the parent)?"""
        return self.terminal == self.origin.parent()

    def reversed(self) -> "Edge":
        return Edge(self.terminal, self.origin)

    def __repr__(self) -> str:
        return f"{self.origin!r}->{self.terminal!r}"

    def to_json(self) -> dict:
        return {"origin": self.origin.to_json(), "terminal": self.terminal.to_json()}


def fundamental_edge(F: FiniteField, n: int) -> Edge:
    """e_n = Lambda_n -> Lambda_{n+1}."""
    return Edge(lam(F, n), lam(F, n + 1))


class Mat2:
    """2x2 matrix with PolyT or LaurentSeries entries."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def poly(cls, F: FiniteField, a, b, c, d) -> "Mat2":
        """GL2(A) element from PolyT / int entries."""
        conv = lambda x: x if isinstance(x, PolyT) else PolyT.const(F, F.from_int(x) if x >= 0 else F.neg(F.from_int(-x)))
        return cls(conv(a), conv(b), conv(c), conv(d))

    @classmethod
    def identity(cls, F: FiniteField) -> "Mat2":
        return cls.poly(F, 1, 0, 0, 1)

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def to_laurent(self) -> "Mat2":
        conv = lambda x: x.to_laurent() if isinstance(x, PolyT) else x
        return Mat2(conv(self.a), conv(self.b), conv(self.c), conv(self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, o) -> bool:
        return isinstance(o, Mat2) and self.entries() == o.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def to_json(self):
        return [[self.a.to_json(), self.b.to_json()], [self.c.to_json(), self.d.to_json()]]

    def __repr__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def normalize_vertex(M: Mat2) -> Vertex:
    """Normal form of the lattice spanned by the columns of M."""
    M = M.to_laurent()
    F = M.a.field
    c, d = M.c, M.d
    if c.is_zero() and d.is_zero():
        raise InsufficientPrecision("bottom row has no detectable nonzero entry")
    if d.coeffs and (not c.coeffs or d.lead <= c.lead):
        x, y = M.b, d
    else:
        x, y = M.a, c
    if y.prec is not None and (c.prec is not None or d.prec is not None):
        other = c if y is d else d
        if not other.coeffs and other.prec is not None and other.prec <= y.lead:
            raise InsufficientPrecision("cannot decide which bottom entry dominates")
    det = M.det()
    if det.is_zero():
        raise InsufficientPrecision("determinant has no detectable valuation")
    k = det.lead - 2 * y.lead
    if x.is_zero() and x.prec is None:
        return Vertex.make(F, k)
    if x.is_exact and y.is_exact:
        u = x.divide(y, k) if len(y.coeffs) > 1 else x * y.inverse()
    else:
        u = x / y
    if u.prec is not None and u.prec < k:
        raise InsufficientPrecision(f"vertex needs digits below {k}, entries give {u.prec}")
    return Vertex.make(F, k, u.truncate(k).as_exact() if u.prec is not None else u)


def _star_matrix(g: Mat2) -> Mat2:
    # ((g^T)^{-1}) up to the scalar 1/det, which does not move lattice classes
    return Mat2(g.d, -g.c, -g.b, g.a)


def act(g: Mat2, obj, mode: str = "star"):
    """Apply g to a vertex or an edge, by the ordinary or the star action."""
    if mode not in ("star", "ordinary"):
        raise ValueError(f"unknown action mode {mode!r}")
    if isinstance(obj, Edge):
        return Edge(act(g, obj.origin, mode), act(g, obj.terminal, mode))
    h = g.to_laurent()
    if mode == "star":
        h = _star_matrix(h)
    return normalize_vertex(h * obj.matrix())


def neighbors(v: Vertex) -> list[Vertex]:
    return [v.parent()] + v.children()


def _meet_level(v1: Vertex, v2: Vertex) -> int:
    diff = v1.u - v2.u
    level = min(v1.k, v2.k)
    if diff.coeffs:
        level = min(level, diff.lead)
    return level


def path(v1: Vertex, v2: Vertex, max_depth: int = MAX_DEPTH) -> list[Edge]:
    """The geodesic from v1 to v2 as a list of edges."""
    K = _meet_level(v1, v2)
    if (v1.k - K) + (v2.k - K) > max_depth:
        raise CapExceeded(f"path longer than the depth limit {max_depth}")
    F = v1.field
    up = [Vertex.make(F, k, v1.u) for k in range(v1.k, K - 1, -1)]
    down = [Vertex.make(F, k, v2.u) for k in range(K, v2.k + 1)]
    verts = up + down[1:]
    return [Edge(a, b) for a, b in zip(verts, verts[1:])]


def distance(v1: Vertex, v2: Vertex) -> int:
    K = _meet_level(v1, v2)
    return (v1.k - K) + (v2.k - K)


@dataclass(frozen=True)
class Ball:
    """Closed ball in P^1(k_inf).

    Finite: {x : v(x - center) >= radius}. Infinite (center None):
    {x : v(x - anchor) <= -radius} together with infinity, the complement of
    the finite ball of radius 1 - radius around ``anchor``. Anchor 0 gives
    the usual B_inf(|pi|^radius) = {|x| >= q^radius}.
    """

    field: FiniteField
    center: LaurentSeries | None
    radius: int
    anchor: LaurentSeries | None = None

    @classmethod
    def finite(cls, F: FiniteField, center: LaurentSeries, radius: int) -> "Ball":
        return cls(F, center.mod_pi_power(radius), radius)

    @classmethod
    def at_infinity(cls, F: FiniteField, radius: int, anchor: LaurentSeries | None = None) -> "Ball":
        if anchor is None:
            anchor = LaurentSeries.zero(F)
        return cls(F, None, radius, anchor.mod_pi_power(1 - radius))

    @property
    def is_infinite(self) -> bool:
        return self.center is None

    def contains(self, x) -> bool:
        """Membership of a point: a LaurentSeries or None for infinity."""
        if x is None:
            return self.is_infinite
        if self.is_infinite:
            d = x - self.anchor
            if d.coeffs and d.lead < 1 - self.radius:
                return True
            if d.prec is not None and d.prec < 1 - self.radius:
                raise InsufficientPrecision("point known too coarsely to place in the ball")
            return False
        d = x - self.center
        if d.coeffs and d.lead < self.radius:
            return False
        if d.prec is not None and d.prec < self.radius:
            raise InsufficientPrecision("point known too coarsely to place in the ball")
        return True

    def complement(self) -> "Ball":
        if self.is_infinite:
            return Ball.finite(self.field, self.anchor, 1 - self.radius)
        return Ball.at_infinity(self.field, 1 - self.radius, self.center)

    def subballs(self, level: int) -> list["Ball"]:
        """Partition of a finite ball into balls of radius |pi|^level."""
        if self.is_infinite:
            raise ValueError("subballs of an infinite ball are not finite in number")
        balls = [self]
        for k in range(self.radius, level):
            balls = [Ball(self.field, b.center + LaurentSeries.monomial(self.field, c, k) if c else b.center, k + 1)
                     for b in balls for c in range(self.field.order)]
        return balls

    def __repr__(self) -> str:
        if self.is_infinite:
            if self.anchor.is_zero():
                return f"B_inf(|pi|^{self.radius})"
            return f"B_inf(|pi|^{self.radius}; anchor {self.anchor})"
        return f"B_{{{self.center}}}(|pi|^{self.radius})"

    def to_json(self) -> dict:
        if self.is_infinite:
            return {"center": "inf", "radius_exp": self.radius, "anchor": self.anchor.to_json()}
        return {"center": self.center.to_json(), "radius_exp": self.radius}


def boundary_ball(e: Edge) -> Ball:
    """U(e): the ends of the tree reached from e's terminal without crossing e."""
    F = e.origin.field
    if e.positive:
        return Ball.at_infinity(F, 1 - e.origin.k, e.origin.u)
    if e.origin != e.terminal.parent():
        raise ValueError(f"{e!r} is not an edge")
    return Ball.finite(F, e.terminal.u, e.terminal.k)


def ball_to_edge(B: Ball, max_depth: int = MAX_DEPTH) -> Edge:
    if abs(B.radius) > max_depth:
        raise CapExceeded(f"ball radius {B.radius} beyond depth limit {max_depth}")
    F = B.field
    if B.is_infinite:
        origin = Vertex.make(F, 1 - B.radius, B.anchor)
        return Edge(origin, origin.parent())
    terminal = Vertex.make(F, B.radius, B.center)
    return Edge(terminal.parent(), terminal)


# reduction into the fundamental ray


def _translate(v: Vertex, P: LaurentSeries) -> Vertex:
    return Vertex.make(v.field, v.k, v.u + P)


def _invert(v: Vertex) -> Vertex:
    """Image of a vertex under x -> 1/x."""
    if v.u.is_zero():
        return Vertex.make(v.field, -v.k)
    s = v.u.lead
    k = v.k - 2 * s
    return Vertex.make(v.field, k, _inv_to(v.u, k))


def _inv_to(u: LaurentSeries, k: int) -> LaurentSeries:
    if len(u.coeffs) == 1:
        return u.inverse()
    return u.inverse(cap=k)


@dataclass(frozen=True)
class Reduction:
    n: int
    gamma: Mat2
    flip: bool

    def to_json(self) -> dict:
        return {"n": self.n, "gamma": self.gamma.to_json(), "flip": self.flip}


def reduce_to_fundamental(e: Edge) -> Reduction:
    """Find (n, gamma, flip) with e = gamma * e_n (or gamma * ebar_n if flip), star action.

    Continued-fraction sweep: translate the origin's ball by its polynomial
    part and invert until it becomes some Lambda_n, then move the terminal
    onto the fundamental ray with one more translation. The accumulated
    ordinary-action matrix h satisfies h.e = e_n, and gamma = h^T.
    """
    F = e.origin.field
    v, w = e.origin, e.terminal
    h = Mat2.identity(F)
    one, zero = PolyT.const(F, 1), PolyT(F)
    delta = Mat2(zero, one, one, zero)

    def translate(P: PolyT):
        nonlocal v, w, h
        if P.is_zero():
            return
        L = (-P).to_laurent()
        v, w = _translate(v, L), _translate(w, L)
        h = Mat2(one, -P, zero, one) * h

    def invert():
        nonlocal v, w, h
        v, w = _invert(v), _invert(w)
        h = delta * h

    while True:
        k, u = v.k, v.u
        P = u.polynomial_part()
        translate(P)
        if k <= 0:
            n = -k
            break
        if v.u.is_zero():
            invert()
            n = k
            break
        invert()

    if w == lam(F, n + 1):
        flip, idx = False, n
    else:
        # w is a child of Lambda_n: (1 - n, c T^n)
        c = w.u.digit(-n)
        if n >= 1:
            translate(PolyT.monomial(F, c, n))
            flip, idx = True, n - 1
        else:
            translate(PolyT.const(F, c))
            invert()
            flip, idx = False, 0
    return Reduction(idx, h.transpose(), flip)


def random_vertex(F: FiniteField, rng: random.Random, max_k: int = 5) -> Vertex:
    k = rng.randint(-max_k, max_k)
    lo = rng.randint(min(k, 0) - 3, k)
    digits = {e: rng.randrange(F.order) for e in range(lo, k)}
    return Vertex.make(F, k, LaurentSeries.from_digits(F, digits))


def random_edge(F: FiniteField, rng: random.Random, max_k: int = 5) -> Edge:
    v = random_vertex(F, rng, max_k)
    w = rng.choice(neighbors(v))
    return Edge(v, w)


def random_gl2a(F: FiniteField, rng: random.Random, max_deg: int = 3) -> Mat2:
    """Random element of GL2(A) as a product of elementary matrices."""
    one, zero = PolyT.const(F, 1), PolyT(F)
    g = Mat2.identity(F)
    for _ in range(rng.randint(1, 4)):
        P = PolyT(F, [rng.randrange(F.order) for _ in range(rng.randint(0, max_deg) + 1)])
        if rng.random() < 0.5:
            step = Mat2(one, P, zero, one)
        else:
            step = Mat2(one, zero, P, one)
        g = step * g
    u1, u2 = rng.randrange(1, F.order), rng.randrange(1, F.order)
    g = Mat2(PolyT.const(F, u1), zero, zero, PolyT.const(F, u2)) * g
    if rng.random() < 0.5:
        g = Mat2(zero, one, one, zero) * g
    return g
