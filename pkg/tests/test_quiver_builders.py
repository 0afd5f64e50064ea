from __future__ import annotations

import pytest

from clusterweyl.lie_data import SUPPORTED_TYPES, cartan_data, parse_type
from clusterweyl.quiver_builders import (
    build_affine_periodic,
    build_periodic,
    build_window,
    circle,
    circles,
    parse_affine,
    vertex_label,
)


def _arrow_set(Q):
    return {(u, v) for u, v, mult in Q.arrows() for _ in range(mult)}


def test_A2_window_arrows():
    Q = build_window("A2", 0, 10)
    arrows = _arrow_set(Q)
    for k in range(2, 8):
        assert ((1, k), (1, k + 1)) in arrows
        assert ((2, k), (2, k + 1)) in arrows
        # eps_{v^1_n, v^2_n'} = delta_{n', n-1} - delta_{n', n}
        assert Q.e((1, k), (2, k - 1)) == 1
        assert Q.e((1, k), (2, k)) == -1


def test_B2_window_arrows():
    # d = 1/2, so k = 2n; node 2 is the short node with d_2 = 1/2
    Q = build_window("B2", 0, 12)
    for k in range(3, 9):
        assert Q.e((2, k), (2, k + 1)) == 1        # v^2_n -> v^2_{n+1/2}
        assert Q.e((2, k), (1, k - 1)) == 1        # v^2_n -> v^1_{n-1/2}
        assert Q.e((1, k + 1), (2, k)) == 1        # v^1_{n+1/2} -> v^2_n
        assert Q.e((1, k), (1, k + 2)) == 1        # v^1_n -> v^1_{n+1}


def test_G2_window_arrows():
    Q = build_window("G2", 0, 14)
    for k in range(4, 9):
        assert Q.e((1, k), (1, k + 1)) == 1
        assert Q.e((2, k), (2, k + 3)) == 1
        assert Q.e((2, k), (1, k)) == 1
        assert Q.e((1, k + 3), (2, k)) == 1


def test_window_drops_edge_arrows():
    Q = build_window("A2", 0, 5)
    assert all(0 <= v[1] <= 5 for v in Q.vertices)
    assert (2, -1) not in Q.index
    # v^1_0 -> v^2_{-1} is dropped, v^2_0 -> v^1_0 is kept
    assert Q.out_neighbours((1, 0)) == [(1, 1)]
    assert Q.e((2, 0), (1, 0)) == 1


def test_window_too_small_rejected():
    with pytest.raises(ValueError):
        build_window("G2", 0, 2)


@pytest.mark.parametrize("name, count", [("A2", 4), ("B2", 8), ("G2", 12)])
def test_periodic_vertex_counts(name, count):
    assert len(build_periodic(name, 2)) == count


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
@pytest.mark.parametrize("m", [2, 3])
def test_periodic_vertex_count_formula(t, m):
    cd = cartan_data(t)
    Q = build_periodic(t, m)
    assert len(Q) == t.rank * m * cd.dprime / cd.d
    assert all(Q.eps[a][a] == 0 for a in range(len(Q)))


def test_periodic_rejects_small_m():
    with pytest.raises(ValueError):
        build_periodic("A2", 1)


EXPECTED_CIRCLES = {"A": lambda l: l, "D": lambda l: l, "E": lambda l: l,
                    "B": lambda l: 2 * l - 1, "C": lambda l: l + 1,
                    "F": lambda l: 6, "G": lambda l: 4}


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
@pytest.mark.parametrize("m", [2, 3])
def test_circle_counts_and_lengths(t, m):
    cd = cartan_data(t)
    cs = circles(t, m)
    assert len(cs) == EXPECTED_CIRCLES[t.family](t.rank)
    for P in cs:
        assert len(P) == m * cd.dprime / cd.di(P.i)
        assert all(v[0] == P.i for v in P.vertices)


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_circles_are_oriented_cycles(t):
    # length >= 3 circles are oriented cycles in eps; a length-2 circle has its
    # two arrows cancel in eps, so only the step structure can be checked there
    m = 3
    Q = build_periodic(t, m)
    for P in circles(t, m):
        if len(P) >= 3:
            for a in range(len(P)):
                assert Q.e(P.vertices[a], P.vertices[(a + 1) % len(P)]) >= 1


def test_circle_examples():
    (P,) = [c for c in circles("A3", 4) if c.i == 2]
    assert [v[1] for v in P.vertices] == [0, 1, 2, 3]
    (Pl,) = [c for c in circles("B3", 2) if c.i == 3]
    assert len(Pl) == 4
    Pc = [c for c in circles("C3", 2) if c.i == 3]
    assert len(Pc) == 2 and all(len(c) == 2 for c in Pc)
    assert circle("C3", 2, 3, 2) in Pc


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_neighbour_dichotomy(t):
    # a vertex of node i sends either no arrows to a circle of an adjacent node
    # or exactly one in and one out
    m = 3
    cd = cartan_data(t)
    Q = build_periodic(t, m)
    for P in circles(t, m):
        on = set(P.vertices)
        for v in Q.vertices:
            if v[0] == P.i or cd.Cij(v[0], P.i) == 0:
                continue
            outs = sum(max(Q.e(v, w), 0) for w in on)
            ins = sum(max(Q.e(w, v), 0) for w in on)
            assert (outs, ins) in ((0, 0), (1, 1))


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_periodic_agrees_with_window_away_from_seam(t):
    cd = cartan_data(t)
    m = 3
    N = cd.period(m)
    Q = build_periodic(t, m)
    W = build_window(t, 0, 2 * N - 1)
    margin = 2 * int(cd.dprime / cd.d)
    for u in W.vertices:
        for v in W.vertices:
            if margin <= u[1] < N + margin and abs(u[1] - v[1]) < N - margin:
                wrap_u, wrap_v = (u[0], u[1] % N), (v[0], v[1] % N)
                if wrap_u != wrap_v and W.e(u, v):
                    assert Q.e(wrap_u, wrap_v) == W.e(u, v)


def test_affine_B3_arrows():
    Q = build_affine_periodic("B3", 3)
    N = cartan_data("B3").period(3)
    for k in range(0, N, 2):
        assert Q.e((0, k), (0, (k + 2) % N)) == 1
        assert Q.e((2, k), (0, k)) == 1
        assert Q.e((0, k), (2, (k - 2) % N)) == 1


def test_affine_G2_arrows():
    Q = build_affine_periodic("G2", 3)
    N = cartan_data("G2").period(3)
    for k in range(0, N, 3):
        assert Q.e((0, k), (0, (k + 3) % N)) == 1
        assert Q.e((2, k), (0, k)) == 1
        assert Q.e((0, k), (2, (k - 3) % N)) == 1


def test_dual_affine_G2_circle():
    m = 2
    aff = parse_affine("G2", dual=True)
    Q = build_affine_periodic(aff, m)
    zero = [v for v in Q.vertices if v[0] == 0]
    assert len(zero) == 3 * m
    N = cartan_data("G2").period(m)
    for k in range(N):
        assert Q.e((1, k), (0, k)) == 1
        assert Q.e((0, k), (1, (k - 1) % N)) == 1


def test_affine_C2_is_built_in_B_orientation():
    assert build_affine_periodic("C2", 2) == build_affine_periodic("B2", 2)


def test_affine_simply_laced_rejected():
    with pytest.raises(ValueError):
        parse_affine("A3")


def test_vertex_label_uses_lattice_index():
    d = cartan_data("B2").d
    assert vertex_label((2, 3), d) == "v2_3/2"
