import random

import pytest

from drinfeld_measures.field import GF
from drinfeld_measures.poly import PolyT, polys_below
from drinfeld_measures.series import LaurentSeries
from drinfeld_measures.tree import (Ball, Edge, Mat2, Vertex, act, ball_to_edge, boundary_ball, distance,
                                    fundamental_edge, lam, m_vertex, neighbors, normalize_vertex, path,
                                    random_edge, random_gl2a, random_vertex, reduce_to_fundamental)


@pytest.fixture
def F2():
    return GF(2)


def test_normalize_examples(F2):
    pi, one, zero = LaurentSeries.pi(F2), LaurentSeries.one(F2), LaurentSeries.zero(F2)
    assert normalize_vertex(Mat2.identity(F2).to_laurent()) == lam(F2, 0)
    assert normalize_vertex(Mat2(pi, one + pi, zero, one)) == Vertex.make(F2, 1, one)
    assert normalize_vertex(Mat2(zero, one, pi.inverse(), one)) == lam(F2, -1)


def test_swap_sends_lambda1_to_lambda_minus1(F2):
    assert act(Mat2.poly(F2, 0, 1, 1, 0), lam(F2, 1), "star") == lam(F2, -1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_translation_of_lambda1(q):
    F = GF(q)
    for b in range(1, q):
        got = act(Mat2.poly(F, 1, PolyT.const(F, b), 0, 1), lam(F, 1), "star")
        assert got == Vertex.make(F, 1, LaurentSeries.monomial(F, F.neg(F.inv(b)), 0))


def test_identity_acts_trivially(F2):
    rng = random.Random(0)
    for _ in range(20):
        v = random_vertex(F2, rng)
        assert act(Mat2.identity(F2), v, "ordinary") == v


@pytest.mark.parametrize("q", [2, 3, 4])
def test_neighbor_count(q):
    F = GF(q)
    rng = random.Random(q)
    for _ in range(50):
        v = random_vertex(F, rng)
        ns = neighbors(v)
        assert len(set(ns)) == q + 1
        assert all(distance(v, w) == 1 for w in ns)


def test_neighbors_of_lambda0(F2):
    want = {lam(F2, 1), lam(F2, -1), Vertex.make(F2, 1, LaurentSeries.one(F2))}
    assert set(neighbors(lam(F2, 0))) == want


def test_paths(F2):
    assert path(lam(F2, 0), lam(F2, 3)) == [fundamental_edge(F2, n) for n in range(3)]
    assert distance(lam(F2, 0), lam(F2, 3)) == 3
    assert path(lam(F2, 2), lam(F2, 2)) == []


def test_path_is_connected():
    F = GF(3)
    rng = random.Random(5)
    for _ in range(30):
        a, b = random_vertex(F, rng), random_vertex(F, rng)
        es = path(a, b)
        assert len(es) == distance(a, b)
        if es:
            assert es[0].origin == a and es[-1].terminal == b
            assert all(x.terminal == y.origin for x, y in zip(es, es[1:]))


def test_boundary_balls(F2):
    assert boundary_ball(Edge(lam(F2, 1), lam(F2, 0))) == Ball.finite(F2, LaurentSeries.zero(F2), 0)
    assert boundary_ball(Edge(lam(F2, 0), lam(F2, 1))) == Ball.at_infinity(F2, 1)


def test_ball_to_edge_follows_the_end(F2):
    x = LaurentSeries.one(F2) + LaurentSeries.pi(F2)
    for j in range(4):
        assert ball_to_edge(Ball.finite(F2, x, j + 1)) == Edge(m_vertex(F2, j, x), m_vertex(F2, j + 1, x))


@pytest.mark.parametrize("q", [2, 3])
def test_ball_edge_roundtrip(q):
    F = GF(q)
    rng = random.Random(11)
    for _ in range(100):
        e = random_edge(F, rng)
        assert ball_to_edge(boundary_ball(e)) == e


def test_reduce_examples(F2):
    r = reduce_to_fundamental(fundamental_edge(F2, 2))
    assert (r.n, r.gamma, r.flip) == (2, Mat2.identity(F2), False)
    r = reduce_to_fundamental(Edge(lam(F2, -1), lam(F2, 0)))
    assert (r.n, r.gamma, r.flip) == (0, Mat2.poly(F2, 0, 1, 1, 0), True)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_reduce_roundtrip_on_translates(q):
    F = GF(q)
    rng = random.Random(q + 100)
    for _ in range(100):
        g = random_gl2a(F, rng, 3)
        e = act(g, fundamental_edge(F, 1), "star")
        r = reduce_to_fundamental(e)
        base = fundamental_edge(F, r.n)
        assert act(r.gamma, base.reversed() if r.flip else base, "star") == e


@pytest.mark.parametrize("q", [2, 3])
def test_upper_triangular_stabilizer(q):
    # (a, b; 0, d) with deg b <= n fixes e_n under the ordinary action; its
    # transpose is what fixes e_n under the star action
    F = GF(q)
    for n in range(4):
        e = fundamental_edge(F, n)
        for b in polys_below(F, n + 1):
            for a in range(1, q):
                for d in range(1, q):
                    g = Mat2.poly(F, a, b, 0, d)
                    assert act(g, e, "ordinary") == e
                    assert act(g.transpose(), e, "star") == e


def test_partition_by_an_edge():
    F = GF(3)
    rng = random.Random(2)
    for _ in range(40):
        e = random_edge(F, rng)
        B, C = boundary_ball(e), boundary_ball(e.reversed())
        for _ in range(25):
            x = LaurentSeries(F, rng.randrange(-4, 4), [rng.randrange(1, 3)] + [rng.randrange(3) for _ in range(10)])
            assert B.contains(x) != C.contains(x)
        assert B.contains(None) != C.contains(None)
