from __future__ import annotations

import json
import random

import pytest

from clusterweyl.cluster_core import (
    FPolySeed,
    Mutate,
    MutationSequence,
    Quiver,
    QuiverNotPreserved,
    SignCoherenceError,
    Swap,
    TropSeed,
    apply_sequence,
    check_periodicity,
    dumps_seed,
    initial_seed,
    initial_trop_seed,
    is_green,
    is_maximal_green,
    is_trivial_on,
    mutate_quiver,
    mutate_seed,
    mutate_trop,
    positive_map,
    tropical_sign,
)
from clusterweyl.lie_data import SUPPORTED_TYPES
from clusterweyl.quiver_builders import build_periodic

RANK2 = Quiver([1, 2], [[0, 1], [-1, 0]])
LINE3 = Quiver([1, 2, 3], [[0, 1, 0], [-1, 0, 1], [0, -1, 0]])


def _seq(*moves):
    return MutationSequence(tuple(Mutate(k) if not isinstance(k, tuple) else Swap(*k) for k in moves))


def test_quiver_rejects_malformed_matrices():
    with pytest.raises(ValueError):
        Quiver([1, 2], [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        Quiver([1, 2], [[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        Quiver.from_arrows([1], [(1, 1)])


def test_from_arrows_counts_parallel_arrows():
    Q = Quiver.from_arrows(["a", "b"], [("a", "b"), ("a", "b")])
    assert Q.e("a", "b") == 2 and Q.e("b", "a") == -2
    assert Q.arrows() == [("a", "b", 2)]


def test_mutate_quiver_rank_two():
    assert mutate_quiver(RANK2, 1).eps == ((0, -1), (1, 0))


def test_mutate_quiver_creates_arrow_through_k():
    Q = mutate_quiver(LINE3, 2)
    assert Q.e(1, 3) == 1
    assert Q.e(1, 2) == -1 and Q.e(2, 3) == -1


def test_mutate_quiver_unknown_vertex():
    with pytest.raises(KeyError):
        mutate_quiver(RANK2, 7)


def test_mutate_seed_rank_two_X_and_A():
    s = initial_seed(RANK2)
    X1, X2 = s.x(1), s.x(2)
    A1, A2 = s.a(1), s.a(2)
    one = X1.ring.one()
    s1 = mutate_seed(s, 1)
    assert s1.x(1).equals(X1.inverse())
    assert s1.x(2).equals(X2 * (one + X1))
    assert s1.a(1).equals((A2 + one) / A1)
    assert s1.a(2).equals(A2)


def test_mutate_trop_examples():
    t = initial_trop_seed(RANK2)
    t1 = mutate_trop(t, 1)
    assert t1.at(1) == (-1, 0)
    # x_2 = u_2 with eps_21 = -1 and x_1 = u_1 positive: the tropical factor is trivial
    assert t1.at(2) == (0, 1)
    t2 = mutate_trop(t1, 2)
    assert t2.at(1) == (-1, 0) and t2.at(2) == (0, -1)


def test_tropical_sign_examples():
    assert tropical_sign((1, 2)) == "positive"
    assert tropical_sign((-1, 0)) == "negative"
    assert tropical_sign((1, -1)) == "mixed"
    assert tropical_sign((0, 0)) == "positive"


def test_coherent_mode_rejects_mixed_signs():
    mixed = TropSeed(RANK2, ((1, -1), (0, 1)))
    with pytest.raises(SignCoherenceError):
        mutate_trop(mixed, 1, coherent=True)


@pytest.mark.parametrize("t", SUPPORTED_TYPES, ids=str)
def test_all_mutations_are_involutions_on_built_quivers(t):
    Q = build_periodic(t, 2)
    ts = initial_trop_seed(Q)
    for k in Q.vertices:
        assert mutate_quiver(mutate_quiver(Q, k), k) == Q
        assert mutate_trop(mutate_trop(ts, k, coherent=True), k) == ts


def test_seed_mutation_involution_on_built_quiver():
    Q = build_periodic("B2", 2)
    s = initial_seed(Q)
    for k in Q.vertices:
        assert mutate_seed(mutate_seed(s, k), k).equals(s)


def test_swap_is_an_involution_and_relabels_eps():
    Q = LINE3
    Qs = Q.swap(1, 3)
    assert Qs.swap(1, 3) == Q
    assert Qs.e(3, 2) == Q.e(1, 2) and Qs.e(2, 1) == Q.e(2, 3)
    s = initial_seed(Q)
    s1 = apply_sequence(s, _seq((1, 3)))
    assert s1.x(3).equals(s.x(1)) and s1.a(1).equals(s.a(3))
    assert apply_sequence(s1, _seq((1, 3))).equals(s)


def test_swap_conjugates_mutation():
    # swapping, mutating at the image, and swapping back equals mutating directly
    s = initial_seed(LINE3)
    lhs = apply_sequence(s, _seq((1, 3), 3, (1, 3)))
    rhs = mutate_seed(s, 1)
    assert lhs.equals(rhs)


def test_apply_sequence_identity_cases():
    s = initial_seed(LINE3)
    assert apply_sequence(s, MutationSequence()).equals(s)
    assert apply_sequence(s, _seq(2, 2)).equals(s)
    assert is_trivial_on(s, _seq(2, 2))
    assert check_periodicity(LINE3, _seq(2, 2))


def test_apply_sequence_unknown_vertex():
    with pytest.raises(KeyError):
        apply_sequence(initial_seed(RANK2), _seq(5))


def test_periodicity_requires_quiver_preservation():
    with pytest.raises(QuiverNotPreserved):
        check_periodicity(LINE3, _seq(2))
    with pytest.raises(QuiverNotPreserved):
        is_trivial_on(initial_seed(LINE3), _seq(2))


def test_rank_two_pentagon_periodicity():
    # A_2: mu_1 mu_2 mu_1 mu_2 mu_1 followed by the transposition is the identity
    seq = _seq(1, 2, 1, 2, 1, (1, 2))
    assert check_periodicity(RANK2, seq)
    assert is_trivial_on(initial_seed(RANK2), seq)
    assert not check_periodicity(RANK2, _seq(1, 2, 1, 2))
    assert not is_trivial_on(initial_seed(RANK2), _seq(1, 2, 1, 2))


def test_green_and_maximal_green():
    assert is_green(RANK2, MutationSequence())
    assert not is_maximal_green(RANK2, MutationSequence())
    assert is_maximal_green(RANK2, _seq(1, 2))
    assert is_maximal_green(RANK2, _seq(2, 1, 2))
    assert not is_green(RANK2, _seq(1, 1))


def test_positive_map_examples():
    s = initial_seed(RANK2)
    p = positive_map(s)
    assert p[0].equals(s.a(2))
    assert p[1].equals(s.a(1).inverse())
    iso = initial_seed(Quiver([1, 2], [[0, 0], [0, 0]]))
    assert all(x.equals(x.ring.one()) for x in positive_map(iso))


def test_positive_map_intertwines_mutation():
    # p* commutes with mutation: mu_k(p*(X)) computed from A-mutation equals p*(mu_k X)
    Q = LINE3
    s = initial_seed(Q)
    p0 = positive_map(s)
    xmap = {x.variables().pop(): px for x, px in zip(s.X, p0)}
    for k in Q.vertices:
        s1 = mutate_seed(s, k)
        lhs = positive_map(s1)
        rhs = [x.substitute(xmap) for x in s1.X]
        assert all(a.equals(b) for a, b in zip(lhs, rhs))


def test_fpoly_seed_agrees_with_full_seed():
    rng = random.Random(4)
    Q = build_periodic("A2", 2)
    full = initial_seed(Q)
    sep = FPolySeed.initial(Q)
    for _ in range(12):
        k = rng.choice(Q.vertices)
        full = mutate_seed(full, k)
        sep = apply_sequence(sep, [Mutate(k)])
    ring = full.X[0].ring
    for v in Q.vertices:
        assert sep.x_expr(v).to_ring(ring).equals(full.x(v))


def test_json_round_trip():
    Q = build_periodic("B2", 2)
    obj = json.loads(dumps_seed(initial_trop_seed(Q)))
    assert Quiver.from_json_obj(obj) == Q
    obj = json.loads(dumps_seed(initial_seed(Q)))
    assert len(obj["X"]) == len(Q) and len(obj["A"]) == len(Q)


def test_dot_export_draws_parallel_arrows():
    Q = Quiver.from_arrows(["a", "b"], [("a", "b"), ("a", "b")])
    dot = Q.to_dot()
    assert dot.count("->") == 2
