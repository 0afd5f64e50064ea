from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from clusterweyl import lie_data
from clusterweyl.lie_data import (
    SUPPORTED_TYPES,
    RootLatticeVector,
    apply_word,
    cartan_data,
    coxeter_m,
    longest_word,
    parse_type,
    positive_roots,
    simple_reflection,
)


def _simple(t, i):
    return RootLatticeVector.simple(t.rank, i)


def test_cartan_data_A2():
    cd = cartan_data("A2")
    assert cd.C == ((2, -1), (-1, 2))
    assert cd.D == (1, 1)
    assert cd.d == 1 and cd.dprime == 1


def test_cartan_data_B2_symmetrizer():
    cd = cartan_data("B2")
    assert (cd.di(1), cd.di(2)) == (1, Fraction(1, 2))
    assert cd.d == Fraction(1, 2) and cd.dprime == 1


def test_cartan_data_G2_symmetrizer():
    cd = cartan_data("G2")
    assert (cd.di(1), cd.di(2)) == (1, 3)
    assert cd.d == 1 and cd.dprime == 3


def test_cartan_data_C_long_node_has_symmetrizer_two():
    cd = cartan_data("C3")
    assert cd.di(3) == 2 and cd.di(1) == 1


@pytest.mark.parametrize("text", ["A0", "B1", "C1", "D3", "E5", "E9", "F3", "G3", "H2", "A"])
def test_invalid_types_rejected(text):
    with pytest.raises(ValueError):
        parse_type(text)


def test_parse_type_accepts_variants():
    assert parse_type("g2") == parse_type("G_2") == parse_type(" G2 ")


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_symmetrized_matrix_is_symmetric(t):
    cd = cartan_data(t)
    for i, j in product(t.nodes, repeat=2):
        assert cd.Bij(i, j) == cd.Bij(j, i)
        assert cd.Bij(i, j) == cd.di(i) * cd.Cij(i, j)


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_symmetrizer_denominators(t):
    for i in t.nodes:
        assert cartan_data(t).di(i).denominator in (1, 2)


@pytest.mark.parametrize("name, expected", [("A2", 3), ("B2", 4), ("G2", 6)])
def test_coxeter_m_rank_two(name, expected):
    assert coxeter_m(name, 1, 2) == expected
    assert coxeter_m(name, 2, 1) == expected


def test_coxeter_m_diagonal_and_disconnected():
    assert coxeter_m("A3", 2, 2) == 1
    assert coxeter_m("A3", 1, 3) == 2


def test_simple_reflection_examples_A2():
    t = parse_type("A2")
    a1, a2 = _simple(t, 1), _simple(t, 2)
    assert simple_reflection(t, 1, a1) == -a1
    assert simple_reflection(t, 1, a2) == a1 + a2


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_simple_reflections_are_involutions(t):
    for i in t.nodes:
        for v in positive_roots(t):
            assert simple_reflection(t, i, simple_reflection(t, i, v)) == v


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_coxeter_relations_on_simple_roots(t):
    for i, j in product(t.nodes, repeat=2):
        if i == j:
            continue
        word = [i, j] * coxeter_m(t, i, j)
        shorter = [i, j] * (coxeter_m(t, i, j) - 1)
        for k in t.nodes:
            assert apply_word(t, word, _simple(t, k)) == _simple(t, k)
        assert any(apply_word(t, shorter, _simple(t, k)) != _simple(t, k) for k in t.nodes)


def _positive_root_count(t) -> int:
    # independent oracle: breadth-first closure of the simple roots under
    # v -> v - <v, a_i^vee> a_i restricted to positive vectors
    cd = cartan_data(t)
    roots = {_simple(t, i).coeffs for i in t.nodes}
    frontier = list(roots)
    while frontier:
        v = frontier.pop()
        for i in t.nodes:
            pairing = sum(cd.Cij(i, j) * v[j - 1] for j in t.nodes)
            w = list(v)
            w[i - 1] -= pairing
            w = tuple(w)
            if all(c >= 0 for c in w) and any(w) and w not in roots:
                roots.add(w)
                frontier.append(w)
    return len(roots)


@pytest.mark.parametrize("name, length", [("A2", 3), ("B2", 4), ("G2", 6), ("A3", 6), ("B3", 9), ("D4", 12)])
def test_longest_word_lengths(name, length):
    assert len(longest_word(name)) == length


def test_longest_word_A2_is_121():
    assert longest_word("A2") == [1, 2, 1]


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_longest_word_matches_positive_root_count(t):
    w0 = longest_word(t)
    assert len(w0) == _positive_root_count(t) == len(positive_roots(t))
    assert lie_data.is_reduced(t, w0)


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_longest_element_is_negative_dynkin_involution(t):
    w0 = longest_word(t)
    images = [apply_word(t, w0, _simple(t, i)) for i in t.nodes]
    star = []
    for img in images:
        assert img.is_negative
        matches = [j for j in t.nodes if -img == _simple(t, j)]
        assert len(matches) == 1
        star.append(matches[0])
    assert sorted(star) == list(t.nodes)
    assert all(star[star[i - 1] - 1] == i for i in t.nodes)


def test_is_reduced_and_word_length():
    assert lie_data.is_reduced("A2", [1, 2])
    assert not lie_data.is_reduced("A2", [1, 1])
    assert lie_data.word_length("A2", [1, 2, 1]) == 3
    assert lie_data.word_length("A2", [1, 1]) == 0
