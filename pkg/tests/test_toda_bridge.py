from __future__ import annotations

import random
from fractions import Fraction

import pytest

from clusterweyl.lie_data import SUPPORTED_TYPES, cartan_data, parse_type
from clusterweyl.qchar_bridge import a_of_y, y_var
from clusterweyl.symbolic import Ring, VarId, monomial_map_structure
from clusterweyl.toda_bridge import (
    ScreeningElement,
    T_factor,
    hamiltonian_bracket,
    numerical_toda_check,
    p_tau,
    phi_tau,
    reduce_anchor,
    s_bracket_constant,
    s_structure,
    s_var,
    screening_apply,
    screening_vs_hamiltonian,
    sigma_check,
    toda_diagram_check,
)


def _y(i, k):
    return Ring.get((y_var(i, k),)).var(y_var(i, k))


def test_s_bracket_examples():
    # same node, congruent indices, n < m
    assert s_bracket_constant("A2", 1, 0, 1, 3) == 1
    assert s_bracket_constant("A2", 1, 3, 1, 0) == -1
    # adjacent nodes, n < m
    assert s_bracket_constant("A2", 1, 0, 2, 2) == Fraction(-1, 2)
    # equal index, i < j
    assert s_bracket_constant("A2", 1, 4, 2, 4) == Fraction(-1, 2)
    assert s_bracket_constant("A2", 2, 4, 1, 4) == Fraction(1, 2)
    # non-adjacent nodes and non-congruent indices on a long node
    assert s_bracket_constant("A3", 1, 0, 3, 2) == 0
    assert s_bracket_constant("B2", 1, 0, 1, 1) == 0


def test_s_structure_is_skew():
    c = s_structure("B2", (0, 8))
    for (a, b), v in c.doubled.items():
        assert c.doubled[(b, a)] == -v


def test_X_bracket_from_four_s_brackets():
    c = s_structure("A1", (0, 6))
    X = {VarId("X", 1, k): {s_var(1, k): 1, s_var(1, k + 1): -1} for k in range(0, 6)}
    pushed = monomial_map_structure(X, c)
    assert pushed.value(VarId("X", 1, 2), VarId("X", 1, 3)) == 1
    assert pushed.value(VarId("X", 1, 2), VarId("X", 1, 4)) == 0


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_sigma_is_poisson(t):
    assert sigma_check(t, 2).ok


def test_reduce_anchor_uses_a_products():
    window = (0, 9)
    c, k0 = reduce_anchor("A2", window, 1, 3)
    assert k0 == 0
    assert c.equals(a_of_y("A2", 1, 0) * a_of_y("A2", 1, 1) * a_of_y("A2", 1, 2))


def test_screening_of_other_node_is_zero():
    assert screening_apply("A2", (0, 9), 1, _y(2, 5)).is_zero()


def test_screening_of_inverse_variable():
    window = (0, 9)
    got = screening_apply("A2", window, 1, _y(1, 5).inverse())
    c, k0 = reduce_anchor("A2", window, 1, 5)
    expected = ScreeningElement(parse_type("A2"), window, 1, {k0: -_y(1, 5).inverse() * c})
    assert got.equals(expected)


def test_screening_of_consecutive_product():
    window = (0, 9)
    f = _y(1, 4) * _y(1, 5)
    got = screening_apply("A2", window, 1, f)
    unreduced = ScreeningElement(parse_type("A2"), window, 1, {4: f * (a_of_y("A2", 1, 4) + 1)})
    assert got.equals(unreduced.reduce())
    assert got.is_reduced()


def test_reduction_is_confluent():
    t = parse_type("B2")
    window = (0, 19)
    rng = random.Random(2)
    for _ in range(5):
        terms = {k: _y(1, rng.randint(6, 12)) * rng.randint(1, 5) for k in rng.sample(range(4, 16), 5)}
        elt = ScreeningElement(t, window, 1, terms)
        canonical = elt.reduce()
        for _ in range(4):
            assert elt.reduce(random.Random(rng.random())).equals(canonical)


def test_screening_requires_interior_support():
    with pytest.raises(ValueError):
        screening_apply("A2", (0, 9), 1, _y(1, 1))


def test_screening_vs_hamiltonian_non_adjacent_nodes_vanish():
    window = (0, 11)
    lhs = screening_apply("A3", window, 1, a_of_y("A3", 3, 5).inverse())
    rhs = hamiltonian_bracket("A3", window, 1, 3, 5)
    assert lhs.is_zero() and rhs.is_zero()


@pytest.mark.parametrize("name, window", [("A2", (0, 9)), ("B2", (0, 19)), ("A3", (0, 9))])
def test_screening_equals_hamiltonian_flow(name, window):
    rep = screening_vs_hamiltonian(name, window)
    assert rep.ok, rep.failures()


def test_p_tau_without_neighbours():
    assert p_tau("A1", 1, 3) == {(1, 5): 1, (1, 3): -1}


def test_p_tau_simply_laced_matches_arrow_pattern():
    for k in range(-2, 3):
        got = phi_tau("A3", p_tau("A3", 2, k))
        expected = {(2, k + 1): 1, (2, k - 1): -1,
                    (1, k): 1, (1, k + 1): -1,      # lower neighbour
                    (3, k - 1): 1, (3, k): -1}      # upper neighbour
        assert got == expected


def test_p_tau_C_tail_case():
    got = p_tau("C3", 2, 0)
    assert got == {(1, 1): 1, (3, 0): 1, (1, 2): -1, (3, 2): -1, (2, 2): 1, (2, 0): -1}


def test_p_tau_G2_short_node():
    assert p_tau("G2", 1, 0) == {(2, 0): 1, (2, 3): -1, (1, 2): 1, (1, 0): -1}


def test_T_factor_uses_row_of_cartan_matrix():
    cd = cartan_data("G2")
    assert cd.Cij(1, 2) == -3
    assert T_factor("G2", 1, 0) == {(2, 0): 1, (2, 1): 1, (2, 2): 1}


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
@pytest.mark.parametrize("m", [2, 3])
def test_toda_diagram(t, m):
    assert toda_diagram_check(t, m).ok


def test_numerical_toda_A1_and_G2():
    for name in ("A1", "G2"):
        rep = numerical_toda_check(name, 2, seed_rng=5, points=20)
        assert rep.ok, rep.failures()


def test_numerical_toda_detects_transposed_cartan_matrix(monkeypatch):
    import clusterweyl.toda_bridge as tb

    def transposed_rhs(t, i, k, s, N):
        cd = cartan_data(t)
        si = cd.step(i)
        total = -s[(i, k % N)] - s[(i, (k + si) % N)]
        for j in cd.type.nodes:
            c = -cd.Cij(i, j)       # should be -C_ji
            if j == i or c <= 0:
                continue
            dij = min(si, cd.step(j))
            for a in (range(1, c + 1) if j < i else range(0, c)):
                total += s[(j, (k + a * dij) % N)]
        return total

    assert tb.numerical_toda_check("B2", 2, seed_rng=1, points=3).ok
    monkeypatch.setattr(tb, "toda_rhs", transposed_rhs)
    assert not tb.numerical_toda_check("B2", 2, seed_rng=1, points=3).ok
