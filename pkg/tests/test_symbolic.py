from __future__ import annotations

import random
from fractions import Fraction

import pytest

from clusterweyl.symbolic import (
    RationalExpr,
    Ring,
    StructureMatrix,
    TruncatedSeries,
    VarId,
    monomial_map_structure,
    poisson_bracket,
    prod,
    series_inverse,
    series_mul,
    series_truncate,
)

U = [VarId("u", a, 0) for a in range(1, 5)]
RING = Ring.get(U)
u1, u2, u3, u4 = (RING.var(v) for v in U)
ONE = RING.one()


def _random_laurent(rng: random.Random, terms: int = 2) -> RationalExpr:
    out = RING.zero()
    for _ in range(rng.randint(1, terms)):
        exps = {v: rng.randint(-1, 1) for v in U}
        out = out + RING.monomial(exps, rng.choice([1, 2, -1, 3]))
    return out


def _random_rational(rng: random.Random) -> RationalExpr:
    den = _random_laurent(rng)
    while den.is_zero():
        den = _random_laurent(rng)
    return _random_laurent(rng) / (den + ONE * 7)


def test_additive_identity_and_monomial_inverse():
    f = u1 * u2 + u3
    assert (f + RING.zero()).equals(f)
    m = RING.monomial({U[0]: 2, U[1]: -3}, 5)
    assert (m * m.inverse()).equals(ONE)


def test_difference_of_squares():
    assert ((ONE + u1) * (ONE - u1)).equals(ONE - u1 ** 2)


def test_common_factor_cancellation():
    assert (u1 / (ONE + u1)).equals((u1 + u1 ** 2) / (ONE + u1) ** 2)


def test_x_is_not_its_inverse():
    assert not u1.equals(u1.inverse())


def test_zero_representations_agree():
    assert (RING.zero() / ONE).equals(RING.zero() / (ONE + u1))


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        u1 / RING.zero()
    with pytest.raises(ZeroDivisionError):
        (u1 - u1).inverse()


def test_substitute_examples():
    assert u1.substitute({U[0]: u1.inverse()}).equals(u1.inverse())
    f = (ONE + u1 * u2) / (u3 + ONE)
    assert f.substitute({v: RING.var(v) for v in U}).equals(f)
    got = (ONE + u1).substitute({U[0]: u2 / (ONE + u2)})
    assert got.equals((ONE + u2 * 2) / (ONE + u2))


def test_substitute_zero_denominator_raises():
    with pytest.raises(ZeroDivisionError):
        (ONE / (ONE + u1)).substitute({U[0]: -ONE})


def test_substitute_with_negative_monomial_images():
    # monomials with negative exponents in the images must be carried exactly
    f = u1 * u2 + u1 ** 2
    got = f.substitute({U[0]: u3.inverse(), U[1]: u3 * u4})
    assert got.equals(u4 + u3 ** -2)


def test_substitute_distributes_over_arithmetic():
    rng = random.Random(7)
    for _ in range(25):
        f, g = _random_rational(rng), _random_rational(rng)
        images = {v: _random_laurent(rng, 1) + ONE * 11 for v in U}
        fs, gs = f.substitute(images), g.substitute(images)
        assert (f + g).substitute(images).equals(fs + gs)
        assert (f - g).substitute(images).equals(fs - gs)
        assert (f * g).substitute(images).equals(fs * gs)
        if not gs.is_zero():
            assert (f / g).substitute(images).equals(fs / gs)


def test_equals_is_an_equivalence_and_canonical_form_is_idempotent():
    rng = random.Random(3)
    for _ in range(20):
        f = _random_rational(rng)
        g = (f * (u1 + ONE * 2)) / (u1 + ONE * 2)
        h = (g * u2 ** 3) / u2 ** 3
        assert f.equals(f) and f.equals(g) and g.equals(f) and g.equals(h) and f.equals(h)
        again = RationalExpr(f.ring, f.mono, f.p, f.q)
        assert (again.mono, again.p, again.q) == (f.mono, f.p, f.q)


def test_evaluate_exact():
    f = (ONE + u1) / u2
    assert f.evaluate({U[0]: Fraction(1, 2), U[1]: 3}) == Fraction(1, 2)


def test_prod_of_empty_is_one():
    assert prod([], RING).equals(ONE)


C = StructureMatrix.from_values(U, {
    (U[0], U[1]): 1, (U[1], U[0]): -1,
    (U[0], U[2]): Fraction(1, 2), (U[2], U[0]): Fraction(-1, 2),
    (U[1], U[3]): -2, (U[3], U[1]): 2,
})


def test_bracket_of_coordinates_is_log_canonical():
    assert poisson_bracket(u1, u2, C).equals(u1 * u2)
    assert poisson_bracket(u1, u3, C).equals(u1 * u3 * Fraction(1, 2))


def test_bracket_antisymmetry_and_self_bracket():
    f = u1 + u2 * u3
    assert poisson_bracket(f, f, C).is_zero()
    g = u4 / (ONE + u1)
    assert poisson_bracket(f, g, C).equals(-poisson_bracket(g, f, C))


def test_bracket_leibniz_example():
    got = poisson_bracket(u1, u2 * u3, C)
    assert got.equals(u1 * u2 * u3 * (C.value(U[0], U[1]) + C.value(U[0], U[2])))


def test_bracket_jacobi_on_random_monomials():
    rng = random.Random(11)
    for _ in range(20):
        f, g, h = (RING.monomial({v: rng.randint(-2, 2) for v in U}) for _ in range(3))
        jac = (poisson_bracket(f, poisson_bracket(g, h, C), C)
               + poisson_bracket(g, poisson_bracket(h, f, C), C)
               + poisson_bracket(h, poisson_bracket(f, g, C), C))
        assert jac.is_zero()


def test_structure_matrix_rejects_non_skew_and_non_half_integers():
    with pytest.raises(ValueError):
        StructureMatrix(U, {(U[0], U[1]): 2})
    with pytest.raises(ValueError):
        StructureMatrix.from_values(U, {(U[0], U[1]): Fraction(1, 3), (U[1], U[0]): Fraction(-1, 3)})


def test_monomial_map_identity_and_inversion():
    ident = {v: {v: 1} for v in U}
    minus = {v: {v: -1} for v in U}
    assert monomial_map_structure(ident, C) == C
    assert monomial_map_structure(minus, C) == C


def test_monomial_map_matches_direct_bracket():
    x = VarId("x", 1, 0)
    y = VarId("x", 2, 0)
    M = {x: {U[0]: 1, U[1]: 1}, y: {U[2]: 1, U[3]: -1}}
    pushed = monomial_map_structure(M, C)
    fx, fy = u1 * u2, u3 / u4
    assert poisson_bracket(fx, fy, C).equals(fx * fy * pushed.value(x, y))
    assert pushed.value(x, x) == 0


def test_monomial_map_composition():
    rng = random.Random(5)
    W = [VarId("w", a, 0) for a in range(1, 5)]
    Z = [VarId("z", a, 0) for a in range(1, 4)]
    M1 = {w: {u: rng.randint(-2, 2) for u in U} for w in W}
    M2 = {z: {w: rng.randint(-2, 2) for w in W} for z in Z}
    M21 = {z: {u: sum(M2[z][w] * M1[w][u] for w in W) for u in U} for z in Z}
    assert monomial_map_structure(M21, C) == monomial_map_structure(M2, monomial_map_structure(M1, C))


SYM = [VarId("X", 1, k) for k in range(-4, 1)]
BASE = Ring.get([])


def _fhat(order: int) -> TruncatedSeries:
    # 1 + X_0 + X_0 X_-1 + X_0 X_-1 X_-2 + ... over the window of symbols
    total = TruncatedSeries.constant(SYM, order, BASE, 1)
    term = TruncatedSeries.constant(SYM, order, BASE, 1)
    for v in reversed(SYM):
        term = term * TruncatedSeries.symbol(SYM, order, BASE, v)
        total = total + term
    return total


def test_series_truncated_at_order_one_is_constant():
    s = series_truncate(_fhat(6), 1)
    assert s.min_grade() == 0 and list(s.terms) == [(0,) * len(SYM)]


def test_fhat_truncated_at_order_three():
    s = series_truncate(_fhat(6), 3)
    expected = {
        (0, 0, 0, 0, 0): 1,
        (0, 0, 0, 0, 1): 1,
        (0, 0, 0, 1, 1): 1,
    }
    assert {e: c.equals(BASE.const(expected[e])) for e, c in s.terms.items()} == {e: True for e in expected}
    assert set(s.terms) == set(expected)


def test_series_inverse_modulo_grade():
    s = _fhat(5)
    assert (series_mul(s, series_inverse(s)) - TruncatedSeries.constant(SYM, 5, BASE, 1)).is_zero()


def test_series_inverse_requires_constant_term():
    s = TruncatedSeries.symbol(SYM, 4, BASE, SYM[0])
    with pytest.raises(ZeroDivisionError):
        series_inverse(s)
