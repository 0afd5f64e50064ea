"""The ``s``/``tau`` lattices of the lattice Toda field, screening operators and the tau-function map.

* ``s_i(n)`` carries the log-canonical bracket of :func:`s_bracket_constant`;
  ``sigma: X^i_n -> s_i(n) / s_i(n + d_i)`` is checked to be Poisson.
* ``S_i`` acts on ``C(y)`` by ``y_j(n) -> delta_ij y_i(n) s_i(n)`` and is
  compared with ``{H_i, .}`` for ``H_i = sum_n s_i(n)`` after reduction by
  ``s_i(n + d_i) = a_i(n) s_i(n)``.
* ``p_tau`` substitutes ``s_i(n) = T_i(n) / (tau_i(n) tau_i(n + d_i))``; the
  map ``tau_i(n) -> A^i_{n - d_i}`` turns it into ``p*``.
* A numerical check of the lattice Toda equation at random rational data.

All lattice indices are the rescaled integers ``k = n / d`` of the quivers.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .lie_data import DynkinType, cartan_data, parse_type
from .qchar_bridge import a_monomial, a_of_y, y_var
from .quiver_builders import build_periodic
from .symbolic import RationalExpr, Ring, StructureMatrix, VarId, monomial_map_structure
from .weyl_action import Report

__all__ = [
    "s_var",
    "tau_var",
    "s_bracket_constant",
    "s_structure",
    "sigma_check",
    "ScreeningElement",
    "reduce_anchor",
    "screening_apply",
    "hamiltonian_bracket",
    "screening_vs_hamiltonian",
    "T_factor",
    "p_tau",
    "phi_tau",
    "toda_diagram_check",
    "toda_rhs",
    "numerical_toda_check",
]


def s_var(i: int, k: int) -> VarId:
    return VarId("s", i, k)


def tau_var(i: int, k: int) -> VarId:
    return VarId("tau", i, k)


def _margin(t: DynkinType) -> int:
    cd = cartan_data(t)
    return int(2 * cd.dprime / cd.d)


# ---------------------------------------------------------------------------
# Poisson structure of the s-lattice
# ---------------------------------------------------------------------------

def s_bracket_constant(t: DynkinType | str, i: int, k: int, j: int, l: int) -> Fraction:
    """``c`` with ``{s_i(k), s_j(l)} = c s_i(k) s_j(l)`` on the infinite lattice.

    For ``k < l``: ``+1`` on one node when ``k = l (mod d_i)``; ``-1/2`` for
    ``B_ij != 0`` when ``k = l (mod min(d_i, d_j))``.  For ``k = l`` and
    ``i < j`` with ``B_ij != 0``: ``-1/2``.  The rest follows by antisymmetry.
    """
    t = parse_type(t)
    cd = cartan_data(t)
    if (k, i) == (l, j):
        return Fraction(0)
    if k > l or (k == l and i > j):
        return -s_bracket_constant(t, j, l, i, k)
    if i == j:
        if k < l and (l - k) % cd.step(i) == 0:
            return Fraction(1)
        return Fraction(0)
    if cd.Bij(i, j) == 0:
        return Fraction(0)
    if k == l:
        return Fraction(-1, 2)
    if (l - k) % min(cd.step(i), cd.step(j)) == 0:
        return Fraction(-1, 2)
    return Fraction(0)


def s_structure(t: DynkinType | str, window: tuple[int, int]) -> StructureMatrix:
    """Bracket constants of all ``s_i(k)`` with ``window[0] <= k <= window[1]``.

    Only windows are accepted: the ordering ``n < m`` in the brackets has no
    meaning on a periodic lattice.
    """
    t = parse_type(t)
    lo, hi = window
    vs = [(i, k) for i in t.nodes for k in range(lo, hi + 1)]
    vals = {}
    for a, (i, k) in enumerate(vs):
        for (j, l) in vs[a + 1:]:
            c = s_bracket_constant(t, i, k, j, l)
            if c:
                vals[(s_var(i, k), s_var(j, l))] = c
                vals[(s_var(j, l), s_var(i, k))] = -c
    return StructureMatrix.from_values([s_var(*v) for v in vs], vals)


def sigma_check(t: DynkinType | str, m: int = 2) -> Report:
    """``sigma`` pushes the ``s`` brackets onto ``eps`` of ``Q_m``.

    The pushforward is computed on a window of the infinite lattice (it is
    local), and the constants ``{X^i_a, X^j_b}`` for ``b`` running over a
    neighbourhood are folded modulo the period ``N`` before comparison.
    """
    t = parse_type(t)
    cd = cartan_data(t)
    N = cd.period(m)
    span = _margin(t) + max(cd.step(i) for i in t.nodes)
    lo, hi = -N - 2 * span, 2 * N + 2 * span
    c = s_structure(t, (lo, hi))
    xs = {}
    for i in t.nodes:
        for k in range(lo, hi + 1 - cd.step(i)):
            xs[VarId("X", i, k)] = {s_var(i, k): 1, s_var(i, k + cd.step(i)): -1}
    push = monomial_map_structure(xs, c)
    Q = build_periodic(t, m)
    rep = Report("poisson", str(t), m)
    bad = []
    for u in Q.vertices:
        for v in Q.vertices:
            total = Fraction(0)
            reach = span // N + 2
            for q in range(-reach, reach + 1):
                xb = VarId("X", v[0], v[1] + q * N)
                if xb in xs:
                    total += push.value(VarId("X", u[0], u[1]), xb)
            if total != Q.e(u, v):
                bad.append((u, v, total, Q.e(u, v)))
    rep.add("sigma Poisson", "s-lattice Poisson map", not bad, f"first mismatch {bad[0]}" if bad else "")
    return rep


# ---------------------------------------------------------------------------
# screening operators on a window
# ---------------------------------------------------------------------------

def _base_anchor(window: tuple[int, int], step: int, k: int) -> int:
    lo = window[0]
    return lo + ((k - lo) % step)


def _check_support(t: DynkinType, window: tuple[int, int], exps: Mapping[tuple[int, int], int]) -> None:
    lo, hi = window
    for (_, k) in exps:
        if not lo <= k <= hi:
            raise ValueError(f"reduction leaves the window {window} at index {k}")


def reduce_anchor(t: DynkinType | str, window: tuple[int, int], i: int, k: int) -> tuple[RationalExpr, int]:
    """``s_i(k) = c * s_i(k0)`` with ``k0`` the window's base anchor of ``k``'s class.

    ``c = a_i(k0) a_i(k0 + d_i) ... a_i(k - d_i)``.
    """
    t = parse_type(t)
    si = cartan_data(t).step(i)
    k0 = _base_anchor(window, si, k)
    if not window[0] <= k <= window[1]:
        raise ValueError(f"anchor s_{i}({k}) outside window {window}")
    exps: dict[tuple[int, int], int] = {}
    for q in range(k0, k, si):
        for v, e in a_monomial(t, i, q).items():
            exps[v] = exps.get(v, 0) + e
    exps = {v: e for v, e in exps.items() if e}
    _check_support(t, window, exps)
    ring = Ring.get(sorted(y_var(*v) for v in exps))
    return ring.monomial({y_var(*v): e for v, e in exps.items()}), k0


@dataclass
class ScreeningElement:
    """A finite sum ``sum coeff * s_i(anchor)`` over a window, reduced to base anchors.

    ``terms`` maps anchor index to a coefficient in ``C(y)``.  Elements built
    by :func:`screening_apply` and :func:`hamiltonian_bracket` are always
    fully reduced.
    """

    t: DynkinType
    window: tuple[int, int]
    i: int
    terms: dict[int, RationalExpr] = field(default_factory=dict)

    def add(self, anchor: int, coeff: RationalExpr) -> None:
        if coeff.is_zero():
            return
        prev = self.terms.get(anchor)
        val = coeff if prev is None else prev + coeff
        if val.is_zero():
            self.terms.pop(anchor, None)
        else:
            self.terms[anchor] = val

    def is_reduced(self) -> bool:
        si = cartan_data(self.t).step(self.i)
        return all(k == _base_anchor(self.window, si, k) for k in self.terms)

    def reduce(self, rng: random.Random | None = None) -> "ScreeningElement":
        """Rewrite one relation ``s_i(k) -> a_i(k - d_i) s_i(k - d_i)`` at a time.

        With ``rng`` the next anchor to rewrite is chosen at random, which
        exercises confluence of the rewriting.
        """
        si = cartan_data(self.t).step(self.i)
        out = ScreeningElement(self.t, self.window, self.i, dict(self.terms))
        while True:
            pending = [k for k in out.terms if k != _base_anchor(self.window, si, k)]
            if not pending:
                return out
            k = rng.choice(pending) if rng else max(pending)
            coeff = out.terms.pop(k)
            a = a_of_y(self.t, self.i, k - si)
            _check_support(self.t, self.window, a_monomial(self.t, self.i, k - si))
            out.add(k - si, coeff * a)

    def equals(self, other: "ScreeningElement") -> bool:
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            a, b = self.terms.get(k), other.terms.get(k)
            if a is None or b is None:
                if (a if a is not None else b).is_zero():
                    continue
                return False
            if not a.equals(b):
                return False
        return True

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c}) s{self.i}_{k}" for k, c in sorted(self.terms.items()))


def _require_interior(t: DynkinType, window: tuple[int, int], f: RationalExpr) -> None:
    mg = _margin(t)
    lo, hi = window
    for v in f.variables():
        if v.kind != "y":
            raise ValueError(f"screening acts on y-variables, got {v}")
        if not lo + mg <= v.k <= hi - mg:
            raise ValueError(f"{v} too close to the window boundary {window} (margin {mg})")


def screening_apply(t: DynkinType | str, window: tuple[int, int], i: int, f: RationalExpr) -> ScreeningElement:
    """``S_i f = sum_n (y_i(n) d f / d y_i(n)) s_i(n)``, reduced in ``C(y)_i'``."""
    t = parse_type(t)
    _require_interior(t, window, f)
    out = ScreeningElement(t, window, i)
    for v in sorted(f.variables()):
        if v.i != i:
            continue
        coeff = f.euler_derivative(v)
        c, k0 = reduce_anchor(t, window, i, v.k)
        out.add(k0, coeff * c)
    return out


def hamiltonian_bracket(t: DynkinType | str, window: tuple[int, int], i: int, j: int, n: int) -> ScreeningElement:
    """``{H_i, X^j_n}`` with ``H_i = sum_{k in window} s_i(k)``, written in ``C(y)_i'``.

    ``{s_i(k), X^j_n} = (c(s_i(k), s_j(n)) - c(s_i(k), s_j(n + d_j))) s_i(k) X^j_n``
    and ``X^j_n = a_j(n)^{-1}`` through ``beta``.
    """
    t = parse_type(t)
    sj = cartan_data(t).step(j)
    X = a_of_y(t, j, n).inverse()
    _require_interior(t, window, X)
    out = ScreeningElement(t, window, i)
    for k in range(window[0], window[1] + 1):
        c = s_bracket_constant(t, i, k, j, n) - s_bracket_constant(t, i, k, j, n + sj)
        if c:
            coeff, k0 = reduce_anchor(t, window, i, k)
            out.add(k0, X * coeff * X.ring.const(c))
    return out


def screening_vs_hamiltonian(t: DynkinType | str, window: tuple[int, int] | None = None,
                             pairs=None) -> Report:
    """``S_i . X^j_n = {H_i, X^j_n}`` for all nodes ``i, j`` at every interior ``n``.

    The default window has 10 indices per node (more for non-simply-laced
    types, whose margin is wider).
    """
    t = parse_type(t)
    if window is None:
        window = (0, max(9, 4 * _margin(t) + 4))
    rep = Report("screening", str(t), None)
    for i in t.nodes:
        for j in t.nodes:
            if pairs is not None and (i, j) not in pairs:
                continue
            bad, count = [], 0
            for n in range(window[0], window[1] + 1):
                X = a_of_y(t, j, n).inverse()
                try:
                    _require_interior(t, window, X)
                except ValueError:
                    continue
                count += 1
                lhs = screening_apply(t, window, i, X)
                rhs = hamiltonian_bracket(t, window, i, j, n)
                if not lhs.equals(rhs):
                    bad.append(n)
            if count == 0:
                raise ValueError(f"window {window} has no interior point for X^{j}")
            rep.add(f"S_{i} X^{j}_n = {{H_{i}, X^{j}_n}} ({count} points)", "screening = Hamiltonian flow",
                    not bad, f"fails at n={bad[:3]}" if bad else "")
    return rep


# ---------------------------------------------------------------------------
# tau-functions
# ---------------------------------------------------------------------------

def T_factor(t: DynkinType | str, i: int, k: int) -> dict[tuple[int, int], int]:
    """Right-hand side ``T_i(n)`` of the bilinear equation as ``{(j, k): power}``.

    ``prod_{j<i} prod_{a=1}^{-C_ij} tau_j(n + a d_ij) prod_{j>i} prod_{a=0}^{-C_ij-1} tau_j(n + a d_ij)``
    with ``d_ij = min(d_i, d_j)``.
    """
    t = parse_type(t)
    cd = cartan_data(t)
    out: dict[tuple[int, int], int] = {}
    for j in t.nodes:
        c = -cd.Cij(i, j)
        if j == i or c <= 0:
            continue
        dij = min(cd.step(i), cd.step(j))
        rng = range(1, c + 1) if j < i else range(0, c)
        for a in rng:
            key = (j, k + a * dij)
            out[key] = out.get(key, 0) + 1
    return out


def _add(acc: dict, exps: Mapping, sign: int, N: int | None) -> None:
    for (j, k), e in exps.items():
        key = (j, k % N if N else k)
        acc[key] = acc.get(key, 0) + sign * e


def _s_in_tau(t: DynkinType, i: int, k: int) -> dict[tuple[int, int], int]:
    si = cartan_data(t).step(i)
    out = dict(T_factor(t, i, k))
    for kk in (k, k + si):
        out[(i, kk)] = out.get((i, kk), 0) - 1
    return out


def p_tau(t: DynkinType | str, i: int, k: int, m: int | None = None) -> dict[tuple[int, int], int]:
    """``p_tau(X^i_n) = s_i(n) / s_i(n + d_i)`` in ``tau`` as a Laurent exponent dict.

    With ``m`` given, indices are folded modulo the period.
    """
    t = parse_type(t)
    N = cartan_data(t).period(m) if m is not None else None
    si = cartan_data(t).step(i)
    acc: dict[tuple[int, int], int] = {}
    _add(acc, _s_in_tau(t, i, k), 1, N)
    _add(acc, _s_in_tau(t, i, k + si), -1, N)
    return {v: e for v, e in acc.items() if e}


def phi_tau(t: DynkinType | str, exps: Mapping[tuple[int, int], int], m: int | None = None) -> dict[tuple[int, int], int]:
    """``tau_i(n) -> A^i_{n - d_i}`` on exponent dicts."""
    t = parse_type(t)
    cd = cartan_data(t)
    N = cd.period(m) if m is not None else None
    acc: dict[tuple[int, int], int] = {}
    for (i, k), e in exps.items():
        kk = k - cd.step(i)
        key = (i, kk % N if N else kk)
        acc[key] = acc.get(key, 0) + e
    return {v: e for v, e in acc.items() if e}


def toda_diagram_check(t: DynkinType | str, m: int = 2) -> Report:
    """``phi(p_tau(X^i_n)) = p*(X^i_n) = prod_w A_w^{eps_vw}`` at every vertex of ``Q_m``."""
    t = parse_type(t)
    Q = build_periodic(t, m)
    rep = Report("toda", str(t), m)
    bad = []
    for a, v in enumerate(Q.vertices):
        lhs = phi_tau(t, p_tau(t, v[0], v[1], m), m)
        rhs = {Q.vertices[b]: e for b, e in enumerate(Q.eps[a]) if e}
        if lhs != rhs:
            bad.append((v, lhs, rhs))
    rep.add("phi o p_tau = p*", "tau-function realisation", not bad, f"first mismatch {bad[0]}" if bad else "")
    return rep


# ---------------------------------------------------------------------------
# numerical lattice Toda
# ---------------------------------------------------------------------------

def toda_rhs(t: DynkinType | str, i: int, k: int, s: Mapping[tuple[int, int], Fraction], N: int) -> Fraction:
    """``sum_{j<i} sum_{a=1}^{-C_ji} s_j(n + a d_ij) - s_i(n) - s_i(n + d_i) + sum_{j>i} sum_{a=0}^{-C_ji-1} s_j(n + a d_ij)``."""
    t = parse_type(t)
    cd = cartan_data(t)
    si = cd.step(i)
    total = -s[(i, k % N)] - s[(i, (k + si) % N)]
    for j in t.nodes:
        c = -cd.Cij(j, i)
        if j == i or c <= 0:
            continue
        dij = min(si, cd.step(j))
        rng = range(1, c + 1) if j < i else range(0, c)
        for a in rng:
            total += s[(j, (k + a * dij) % N)]
    return total


def numerical_toda_check(t: DynkinType | str, m: int = 2, seed_rng: int | random.Random = 0,
                         points: int = 20, tol: float = 1e-9) -> Report:
    """The lattice Toda equation at random positive rational ``tau`` data.

    At a sample time the values ``tau_i(k)`` on one period are random positive
    rationals.  A strictly periodic ``tau`` cannot satisfy the bilinear
    equations (summing ``d/dt log(tau_i(n) / tau_i(n + d_i)) = s_i(n)`` around
    a circle gives ``0 = sum s_i > 0``), so ``tau`` is extended
    quasi-periodically, ``tau_i(k + N) = lambda tau_i(k)`` with ``lambda = 1``
    at the sample time, one multiplier per circle.  The derivatives
    ``u = (log tau)'`` then solve the bilinear system exactly, with
    ``(log lambda)' = -sum_circle s_i``.  ``X`` and ``s`` stay periodic.

    Reports the bilinear residual and the Toda residual, both exact rationals
    evaluated to floats.
    """
    t = parse_type(t)
    cd = cartan_data(t)
    N = cd.period(m)
    rng = seed_rng if isinstance(seed_rng, random.Random) else random.Random(seed_rng)
    rep = Report("toda", str(t), m)
    worst_bilinear = Fraction(0)
    worst_toda = 0.0
    periodic_gap = Fraction(0)
    for _ in range(points):
        tau = {(i, k): Fraction(rng.randint(1, 50), rng.randint(1, 50)) for i in t.nodes for k in range(N)}

        def T(i: int, k: int) -> Fraction:
            val = Fraction(1)
            for (j, kk), e in T_factor(t, i, k).items():
                val *= tau[(j, kk % N)] ** e
            return val

        s = {(i, k): T(i, k) / (tau[(i, k)] * tau[(i, (k + cd.step(i)) % N)])
             for i in t.nodes for k in range(N)}
        # u on one period, propagated along each circle; mu = (log lambda)'
        u: dict[tuple[int, int], Fraction] = {}
        mu: dict[tuple[int, int], Fraction] = {}
        for i in t.nodes:
            si = cd.step(i)
            for r in range(si):
                u[(i, r)] = Fraction(rng.randint(-20, 20), rng.randint(1, 20))
                for k in range(r, N - si, si):
                    u[(i, k + si)] = u[(i, k)] - s[(i, k)]
                mu[(i, r)] = -sum(s[(i, k)] for k in range(r, N, si))
                periodic_gap = max(periodic_gap, -mu[(i, r)])

        def U(i: int, k: int) -> Fraction:
            q, kk = divmod(k, N)
            return u[(i, kk)] + q * mu[(i, kk % cd.step(i))]

        def dlogT(i: int, k: int) -> Fraction:
            return sum((e * U(j, kk) for (j, kk), e in T_factor(t, i, k).items()), Fraction(0))

        for i in t.nodes:
            si = cd.step(i)
            for k in range(N):
                # D_t tau_i(k) . tau_i(k + d_i) = T_i(k), divided by tau tau
                lhs = (U(i, k) - U(i, k + si)) * tau[(i, k)] * tau[(i, (k + si) % N)]
                worst_bilinear = max(worst_bilinear, abs(lhs - T(i, k)))
                dlogX = dlogT(i, k) - dlogT(i, k + si) + U(i, k + 2 * si) - U(i, k)
                rhs = toda_rhs(t, i, k, s, N)
                err = abs(dlogX - rhs)
                scale = max(abs(rhs), Fraction(1))
                worst_toda = max(worst_toda, float(err / scale))
    rep.add(f"bilinear equations ({points} points)", "bilinear tau equation", worst_bilinear == 0,
            f"max residual {float(worst_bilinear):.3g}; strictly periodic tau would leave "
            f"sum_circle s up to {float(periodic_gap):.3g} unbalanced")
    rep.add(f"lattice Toda equation ({points} points)", "lattice Toda equation", worst_toda < tol,
            f"max relative residual {worst_toda:.3g}")
    return rep
