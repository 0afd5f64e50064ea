"""Weyl group actions realised by mutation sequences on ``Q_m(g)``.

For an oriented circle ``v_1 -> v_2 -> ... -> v_p -> v_1`` the sequence
``R(P)`` is, read left to right::

    mu_{v_1}, ..., mu_{v_{p-2}}, mu_{v_{p-1}}, mu_{v_p}, swap(v_{p-1}, v_p),
    mu_{v_{p-2}}, ..., mu_{v_1}

and ``R_i`` concatenates ``R(P_{i, gamma})`` over ``gamma = 1 .. d_i/d``.

Words: a list ``[i_p, ..., i_1]`` denotes ``w = s_{i_p} ... s_{i_1}`` and
``R(w) = R_{i_p} ... R_{i_1}``, so ``R_{i_1}`` is applied first.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import lie_data
from .cluster_core import (
    FPolySeed, Mutate, MutationSequence, Quiver, ResourceLimitExceeded, Seed,
    SignCoherenceError, Swap, TropSeed, apply_sequence, check_periodicity, green_trace,
    initial_seed, initial_trop_seed, is_trivial_on, mutate_quiver, mutate_seed,
    mutate_trop, positive_map, tropical_sign,
)
from .lie_data import DynkinType, RootLatticeVector, cartan_data, parse_type
from .quiver_builders import Circle, build_periodic, circles
from .symbolic import RationalExpr, Ring

__all__ = [
    "Check",
    "Report",
    "mutation_check",
    "r_sequence",
    "R_i_sequence",
    "r_word_sequence",
    "apply_R_i",
    "f_X",
    "f_A",
    "closed_form_R_on_X",
    "closed_form_R_on_A",
    "trop_R_i",
    "phi",
    "verify_braid",
    "verify_green_word",
    "peripheral_check",
    "root_embedding_check",
    "closed_form_check",
    "quiver_preservation_check",
    "trajectory_check",
    "B2_TRAJECTORY",
    "G2_TRAJECTORY",
]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ref: str
    status: str  # "pass" | "fail" | "error"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        return {"name": self.name, "ref": self.ref, "status": self.status, "detail": self.detail}


@dataclass
class Report:
    suite: str
    type: str
    m: int | None
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ref: str, ok: bool, detail: str = "") -> Check:
        c = Check(name, ref, "pass" if ok else "fail", detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def as_dict(self) -> dict:
        return {"suite": self.suite, "type": self.type, "m": self.m,
                "checks": [c.as_dict() for c in self.checks]}


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

def r_sequence(P: Circle | Sequence, base: int = 0, order: str = "standard") -> MutationSequence:
    """Mutation sequence ``R(P)`` for the circle ``P`` started at position ``base``.

    ``order="alternate"`` mutates ``v_p`` before ``v_{p-1}`` (the two
    mutations commute because there is no arrow between them at that point).
    """
    verts = list(P.vertices if isinstance(P, Circle) else P)
    p = len(verts)
    if p < 2:
        raise ValueError("R(P) needs a circle of length >= 2")
    verts = verts[base:] + verts[:base]
    M = [Mutate(v) for v in verts[: p - 2]]
    mid = [Mutate(verts[p - 2]), Mutate(verts[p - 1])]
    if order == "alternate":
        mid.reverse()
    elif order != "standard":
        raise ValueError(f"unknown order {order!r}")
    return MutationSequence(M + mid + [Swap(verts[p - 2], verts[p - 1])] + M[::-1])


def node_circles(t: DynkinType | str, m: int, i: int, affine=None) -> list[Circle]:
    return [c for c in circles(t, m, affine=affine) if c.i == i]


def R_i_sequence(t: DynkinType | str, m: int, i: int, *, affine=None,
                 gamma_order: Sequence[int] | None = None) -> MutationSequence:
    cs = node_circles(t, m, i, affine)
    if not cs:
        raise ValueError(f"node {i} out of range")
    if gamma_order is not None:
        by = {c.gamma: c for c in cs}
        cs = [by[g] for g in gamma_order]
    seq = MutationSequence()
    for c in cs:
        seq = seq + r_sequence(c)
    return seq


def r_word_sequence(t: DynkinType | str, m: int, word: Sequence[int]) -> MutationSequence:
    """``R(w)`` for ``w = s_{word[0]} s_{word[1]} ...``: the last letter acts first."""
    seq = MutationSequence()
    for i in reversed(list(word)):
        seq = seq + R_i_sequence(t, m, i)
    return seq


def apply_R_i(s, t: DynkinType | str, m: int, i: int):
    return apply_sequence(s, R_i_sequence(t, m, i))


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _circle_shift(P: Circle, v, steps: int):
    """Vertex ``steps`` positions further along ``P`` (negative: backwards)."""
    pos = P.position(v)
    return P.vertices[(pos + steps) % len(P)]


def f_X(P: Circle, v, X: Callable) -> RationalExpr:
    """``1 + sum_{k=0}^{p-2} X_n X_{n-1} ... X_{n-k}`` along the circle, ending at ``v``."""
    p = len(P)
    term = X(v)
    total = term + 1
    cur = v
    for _ in range(1, p - 1):
        cur = _circle_shift(P, cur, -1)
        term = term * X(cur)
        total = total + term
    return total


def _k_of(cd, n_offset: Fraction) -> int:
    k = Fraction(n_offset) / cd.d
    assert k.denominator == 1
    return int(k)


def _wrap(v, N: int):
    return (v[0], v[1] % N)


def closed_form_R_on_X(s: Seed, t: DynkinType | str, m: int, P: Circle) -> dict:
    """Image of every X-variable under ``R(P)``, from the case list of the closed form.

    Returns ``{vertex: RationalExpr}`` for all vertices of ``s.quiver``.
    """
    cd = cartan_data(t)
    t = cd.type
    N = cd.period(m)
    Q = s.quiver
    i = P.i
    di = cd.di(i)
    si = cd.step(i)
    on_P = set(P.vertices)
    X = s.x

    def f(k: int) -> RationalExpr:
        return f_X(P, (i, k % N), X)

    def Xv(node: int, k: int) -> RationalExpr:
        return X((node, k % N))

    half = _k_of(cd, Fraction(1, 2)) if cd.d == Fraction(1, 2) else None
    out = {}
    for v in Q.vertices:
        j, k = v
        img = X(v)
        if j == i:
            if v in on_P:
                img = f(k) / (Xv(i, k - si) * f(k - 2 * si))
        elif j != 0 and cd.di(j) > di:
            img = _exceptional_X(cd, t, i, j, k, Xv, f, N, on_P)
        else:
            src_i = (i, k % N)
            if src_i in on_P and Q.e(src_i, v) > 0:
                # v^j_n <- v^i_n
                img = X(v) * Xv(i, k - si) * f(k - 2 * si) / f(k - si)
            elif src_i in on_P and Q.e(v, src_i) > 0:
                # v^j_n -> v^i_n
                img = X(v) * Xv(i, k) * f(k - si) / f(k)
            elif half is not None and (i, (k - half) % N) in on_P and Q.e(v, (i, (k - half) % N)) > 0:
                # v^j_n -> v^i_{n-1/2}
                img = X(v) * Xv(i, k - half) * f(k - si - half) / f(k - half)
        out[v] = img
    return out


def _exceptional_X(cd, t: DynkinType, i: int, j: int, k: int, Xv, f, N: int, on_P) -> RationalExpr:
    """The ``d_i < d_j`` cases of the closed form."""
    fam, l = t.family, t.rank
    x = Xv(j, k)
    if (fam == "B" and (i, j) == (l, l - 1)) or (fam == "F" and (i, j) == (3, 2)):
        # X^j_n X^i_{n-1/2} X^i_n f(n-1) / f(n)      (k = 2n)
        if (i, k % N) not in on_P:
            return x
        return x * Xv(i, k - 1) * Xv(i, k) * f(k - 2) / f(k)
    if fam == "C" and (i, j) == (l - 1, l):
        if (i, k % N) not in on_P:
            return x
        return x * Xv(i, k) * Xv(i, k + 1) * f(k - 1) / f(k + 1)
    if fam == "G" and (i, j) == (1, 2):
        return x * Xv(1, k) * Xv(1, k + 1) * Xv(1, k + 2) * f(k - 1) / f(k + 2)
    return x


def _n_to_k(cd, n: Fraction) -> int:
    return _k_of(cd, n)


def f_A(s: Seed, t: DynkinType | str, m: int, P: Circle) -> RationalExpr:
    """The common factor ``f_A(i, gamma)`` multiplying ``A^i_n`` on the circle."""
    cd = cartan_data(t)
    t = cd.type
    N = cd.period(m)
    i = P.i
    si = cd.step(i)
    fam, l = t.family, t.rank
    A = s.a
    h = _k_of(cd, Fraction(1, 2)) if cd.d == Fraction(1, 2) else None
    k1 = _k_of(cd, Fraction(1))                 # rescaled "n + 1"

    def Av(node: int, k: int) -> RationalExpr:
        if node < 1 or node > l:
            return A(P.vertices[0]).ring.one()
        return A((node, k % N))

    total = None
    for (_, k) in P.vertices:
        if (fam == "B" and i == l - 1) or (fam == "F" and i == 2):
            term = Av(i + 1, k + h) * Av(i - 1, k + k1) / (Av(i, k) * Av(i, k + k1))
        elif fam == "B" and i == l:
            term = Av(l - 1, k + h) * Av(l - 1, k) / (Av(l, k) * Av(l, k + h))
        elif fam == "C" and i == l - 1:
            term = Av(l - 2, k + 1) * Av(l, k) * Av(l, k - 1) / (Av(l - 1, k) * Av(l - 1, k + 1))
        elif fam == "F" and i == 3:
            term = Av(2, k + h) * Av(2, k) * Av(4, k) / (Av(3, k) * Av(3, k + h))
        elif fam == "G" and i == 1:
            term = Av(2, k) * Av(2, k - 1) * Av(2, k - 2) / (Av(1, k) * Av(1, k + 1))
        else:
            term = (Av(i, k) * Av(i, k + si)).inverse()
            for j in cd.neighbours(i):
                term = term * (Av(j, k) if i < j else Av(j, k + si))
        total = term if total is None else total + term
    return total


def closed_form_R_on_A(s: Seed, t: DynkinType | str, m: int, P: Circle) -> dict:
    fa = f_A(s, t, m, P)
    on_P = set(P.vertices)
    return {v: (s.a(v) * fa if v in on_P else s.a(v)) for v in s.quiver.vertices}


# ---------------------------------------------------------------------------
# tropical closed form
# ---------------------------------------------------------------------------

def trop_R_i(ts: TropSeed, t: DynkinType | str, m: int, i: int) -> TropSeed:
    """Tropical action of ``R_i`` on a seed whose node-``i`` coordinates are all positive."""
    cd = cartan_data(t)
    t = cd.type
    N = cd.period(m)
    Q = ts.quiver
    for v in Q.vertices:
        if v[0] == i and tropical_sign(ts.at(v)) != "positive":
            raise ValueError(f"hypothesis violated: x at {v} is not positive")
    si = cd.step(i)
    di = cd.di(i)
    half = 1 if cd.d == Fraction(1, 2) else None
    fam, l = t.family, t.rank

    def x(node: int, k: int):
        return ts.at((node, k % N))

    def mul(*vecs):
        return tuple(sum(c) for c in zip(*vecs))

    new = []
    for v in Q.vertices:
        j, k = v
        cur = ts.at(v)
        if j == i:
            val = tuple(-e for e in x(i, k - si))
        elif cd.di(j) > di:
            if (fam == "B" and (i, j) == (l, l - 1)) or (fam == "F" and (i, j) == (3, 2)):
                val = mul(cur, x(i, k - 1), x(i, k))
            elif fam == "C" and (i, j) == (l - 1, l):
                val = mul(cur, x(i, k), x(i, k + 1))
            elif fam == "G" and (i, j) == (1, 2):
                val = mul(cur, x(1, k), x(1, k + 1), x(1, k + 2))
            else:
                val = cur
        else:
            vi = (i, k % N)
            if Q.e(vi, v) > 0:
                val = mul(cur, x(i, k - si))
            elif Q.e(v, vi) > 0:
                val = mul(cur, x(i, k))
            elif half is not None and Q.e(v, (i, (k - half) % N)) > 0:
                val = mul(cur, x(i, k - half))
            else:
                val = cur
        new.append(val)
    return TropSeed(Q, tuple(new), ts.generators)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def quiver_preservation_check(t: DynkinType | str, m: int) -> Report:
    t = parse_type(t)
    rep = Report("quiver-preservation", str(t), m)
    Q = build_periodic(t, m)
    for P in circles(t, m):
        ok = apply_sequence(Q, r_sequence(P)) == Q
        rep.add(f"R(P_{P.i},{P.gamma}) preserves Q", "R(P) preserves quiver", ok)
    return rep


def closed_form_check(t: DynkinType | str, m: int = 2, *, circles_filter=None) -> Report:
    """Engine replay of every ``R(P)`` against the closed forms on X and A."""
    t = parse_type(t)
    rep = Report("closed-form", str(t), m)
    Q = build_periodic(t, m)
    s0 = initial_seed(Q)
    for P in circles(t, m):
        if circles_filter and not circles_filter(P):
            continue
        s1 = apply_sequence(s0, r_sequence(P))
        cx = closed_form_R_on_X(s0, t, m, P)
        bad = [v for v in Q.vertices if not s1.x(v).equals(cx[v])]
        rep.add(f"X closed form P_{P.i},{P.gamma}", "closed form on X", not bad,
                f"mismatch at {bad[:3]}" if bad else "")
        ca = closed_form_R_on_A(s0, t, m, P)
        bad = [v for v in Q.vertices if not s1.a(v).equals(ca[v])]
        rep.add(f"A closed form P_{P.i},{P.gamma}", "closed form on A", not bad,
                f"mismatch at {bad[:3]}" if bad else "")
    # tropical corollary against tropical replay
    t0 = initial_trop_seed(Q)
    for i in t.nodes:
        replay = apply_sequence(t0, R_i_sequence(t, m, i), coherent=True)
        ok = replay == trop_R_i(t0, t, m, i)
        rep.add(f"tropical R_{i}", "tropical closed form", ok)
    return rep


# Printed tropical trajectories.  Each entry lists, per step, the images of
# (x^1_n, x^2_n) as {(node, n offset): exponent} in the original variables.
_H = Fraction(1, 2)
B2_TRAJECTORY = [
    (1, {(1, -1): -1}, {(2, 0): 1, (1, -_H): 1}),
    (2, {(2, 0): 1, (2, -_H): 1, (1, -_H): 1}, {(2, -_H): -1, (1, -1): -1}),
    (1, {(2, -1): -1, (2, -3 * _H): -1, (1, -3 * _H): -1}, {(2, -1): 1}),
    (2, {(1, -3 * _H): -1}, {(2, -3 * _H): -1}),
]
G2_TRAJECTORY = [
    (1, {(1, -1): -1}, {(2, 0): 1, (1, 0): 1, (1, 1): 1, (1, 2): 1}),
    (2, {(2, -3): 1, (1, -3): 1, (1, -2): 1}, {(2, -3): -1, (1, -3): -1, (1, -2): -1, (1, -1): -1}),
    (1, {(2, -4): -1, (1, -4): -1, (1, -3): -1}, {(2, -2): 1, (1, -2): 1, (1, -1): 1, (2, -1): 1, (1, 0): 1}),
    (2, {(2, -5): 1, (1, -5): 1}, {(2, -5): -1, (1, -5): -1, (1, -4): -1, (2, -4): -1, (1, -3): -1}),
    (1, {(2, -6): -1, (1, -6): -1}, {(2, -3): 1}),
    (2, {(1, -6): -1}, {(2, -6): -1}),
]


def _expected_vector(cd, N: int, verts, k: int, pattern: Mapping) -> tuple[int, ...]:
    idx = {v: a for a, v in enumerate(verts)}
    vec = [0] * len(verts)
    for (node, off), e in pattern.items():
        vec[idx[(node, (k + _k_of(cd, off)) % N)]] += e
    return tuple(vec)


def trajectory_check(t: DynkinType | str, m: int = 2) -> Report:
    """Replay ``R_1, R_2, R_1, ...`` tropically and compare with the printed trajectory."""
    t = parse_type(t)
    traj = {"B2": B2_TRAJECTORY, "G2": G2_TRAJECTORY}[str(t)]
    cd = cartan_data(t)
    N = cd.period(m)
    Q = build_periodic(t, m)
    ts = initial_trop_seed(Q)
    rep = Report("trajectory", str(t), m)
    for step, (i, img1, img2) in enumerate(traj, 1):
        ts = apply_sequence(ts, R_i_sequence(t, m, i), coherent=True)
        bad = []
        for v in Q.vertices:
            pattern = img1 if v[0] == 1 else img2
            if ts.at(v) != _expected_vector(cd, N, Q.vertices, v[1], pattern):
                bad.append(v)
        rep.add(f"step {step}: after R_{i}", "rank-2 trajectory", not bad,
                f"mismatch at {bad[:3]}" if bad else "")
    # the reverse-order product lands on the same point
    other = initial_trop_seed(Q)
    for (i, _, _) in traj:
        other = apply_sequence(other, R_i_sequence(t, m, 3 - i), coherent=True)
    rep.add("opposite order agrees", "rank-2 trajectory", other == ts)
    return rep


def _fpoly_braid(Q: Quiver, seq: MutationSequence, max_terms: int | None, deadline: float | None) -> tuple[bool, str]:
    def guard(step, mv, s):
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceLimitExceeded(f"time budget exhausted after {step + 1} moves")
    try:
        final = apply_sequence(FPolySeed.initial(Q), seq, max_terms=max_terms, on_step=guard)
    except ResourceLimitExceeded as exc:
        return False, f"not completed: {exc}"
    return final.is_initial(), ""


def _a_braid(Q: Quiver, seq: MutationSequence, deadline: float | None) -> tuple[bool, str]:
    s0 = initial_seed(Q)
    ring = s0.A[0].ring
    # A-side only: X-variables are handled by the separated engine
    s = Seed(Q, tuple(ring.one() for _ in Q.vertices), s0.A)

    def guard(step, mv, cur):
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceLimitExceeded(f"time budget exhausted after {step + 1} moves")
    try:
        final = apply_sequence(s, seq, on_step=guard)
    except ResourceLimitExceeded as exc:
        return False, f"not completed: {exc}"
    return final.quiver == Q and all(a.equals(b) for a, b in zip(final.A, s0.A)), ""


def verify_braid(t: DynkinType | str, m: int, i: int, j: int, *, symbolic: bool | None = None,
                 max_terms: int | None = 2_000_000, time_budget: float | None = None) -> Report:
    """``(R_i R_j)^{m_ij} = 1`` via the tropical certificate, plus an optional symbolic replay.

    The symbolic replay runs by default when the quiver has at most 16
    vertices.  X-variables are replayed in separated (F-polynomial) form and
    A-variables as Laurent polynomials; both must return to the initial seed.
    """
    t = parse_type(t)
    rep = Report("braid", str(t), m)
    Q = build_periodic(t, m)
    mij = lie_data.coxeter_m(t, i, j)
    seq = (R_i_sequence(t, m, i) + R_i_sequence(t, m, j)) * mij
    rep.add(f"(R_{i}R_{j})^{mij} tropical", "tropical periodicity certificate", check_periodicity(Q, seq))
    if i != j and mij > 1:
        shorter = (R_i_sequence(t, m, i) + R_i_sequence(t, m, j)) * (mij - 1)
        rep.add(f"(R_{i}R_{j})^{mij - 1} not trivial", "braid order minimality",
                not check_periodicity(Q, shorter))
    if symbolic is None:
        symbolic = len(Q) <= 16
    if symbolic:
        deadline = None if time_budget is None else time.monotonic() + time_budget
        # the A-side is the cheaper replay, so it runs first on a shared budget
        ok, detail = _a_braid(Q, seq, deadline)
        rep.add(f"(R_{i}R_{j})^{mij} symbolic A", "symbolic braid replay", ok, detail)
        ok, detail = _fpoly_braid(Q, seq, max_terms, deadline)
        rep.add(f"(R_{i}R_{j})^{mij} symbolic X", "symbolic braid replay", ok, detail)
    return rep


def verify_green_word(t: DynkinType | str, m: int, word: Sequence[int]) -> Report:
    t = parse_type(t)
    if not lie_data.is_reduced(t, word):
        raise ValueError(f"word {list(word)} is not reduced")
    rep = Report("green", str(t), m)
    Q = build_periodic(t, m)
    seq = r_word_sequence(t, m, word)
    trace, final = green_trace(Q, seq)
    rep.add(f"R({''.join(map(str, word))}) green", "green sequence", all(s == "positive" for s in trace))
    if len(word) == len(lie_data.positive_roots(t)):
        neg = all(any(vec) and tropical_sign(vec) == "negative" for vec in final.x)
        rep.add(f"R(w0) maximal green", "green sequence", neg)
    return rep


def peripheral_check(t: DynkinType | str, m: int, i: int) -> Report:
    """``R_i^* p^*(X) = p^*(X)`` and invariance of ``xi^j_n = A^j_{n-d_j}/A^j_n``."""
    t = parse_type(t)
    cd = cartan_data(t)
    N = cd.period(m)
    rep = Report("peripheral", str(t), m)
    Q = build_periodic(t, m)
    s0 = initial_seed(Q)
    s1 = apply_sequence(s0, R_i_sequence(t, m, i))
    if s1.quiver != Q:
        rep.add(f"R_{i} preserves Q", "R(P) preserves quiver", False)
        return rep
    images = {a.variables().pop(): b for a, b in zip(s0.A, s1.A)}
    p0 = positive_map(s0)
    bad = []
    for v, px in zip(Q.vertices, p0):
        if not px.substitute(images).equals(px):
            bad.append(v)
    rep.add(f"R_{i} fixes p*(X)", "peripheral invariance", not bad, f"fails at {bad[:3]}" if bad else "")
    bad = []
    for v in Q.vertices:
        j, k = v
        xi0 = s0.a((j, (k - cd.step(j)) % N)) / s0.a(v)
        xi1 = s1.a((j, (k - cd.step(j)) % N)) / s1.a(v)
        if not xi1.equals(xi0):
            bad.append(v)
    rep.add(f"R_{i} fixes xi", "xi invariance", not bad, f"fails at {bad[:3]}" if bad else "")
    return rep


def phi(t: DynkinType | str, v: RootLatticeVector, ts: TropSeed) -> tuple[int, ...]:
    """``phi(v)`` evaluated at a tropical seed: ``prod_i prod_n (x^i_n)^{v_i}`` as an exponent vector."""
    out = [0] * len(ts.generators)
    for vert, vec in zip(ts.quiver.vertices, ts.x):
        c = v[vert[0]]
        if c:
            for a, e in enumerate(vec):
                out[a] += c * e
    return tuple(out)


def root_embedding_check(t: DynkinType | str, m: int, word: Sequence[int]) -> Report:
    """``phi(a_i)(R(w) u) = phi(w^{-1} a_i)(u)`` for all simple roots, and the one-step formulas."""
    t = parse_type(t)
    rep = Report("root-embedding", str(t), m)
    Q = build_periodic(t, m)
    u = initial_trop_seed(Q)
    simple = [RootLatticeVector.simple(t.rank, i) for i in t.nodes]
    # one-step formulas
    for i in t.nodes:
        ui = apply_sequence(u, R_i_sequence(t, m, i), coherent=True)
        ok = True
        for j in t.nodes:
            lhs = phi(t, simple[j - 1], ui)
            if j == i:
                rhs = tuple(-e for e in phi(t, simple[i - 1], u))
            else:
                cij = cartan_data(t).Cij(i, j)
                rhs = tuple(a - cij * b for a, b in zip(phi(t, simple[j - 1], u), phi(t, simple[i - 1], u)))
            ok &= lhs == rhs
        rep.add(f"R_{i}^trop on phi(a_j)", "root embedding one-step", ok)
    uw = apply_sequence(u, r_word_sequence(t, m, word), coherent=True)
    inv = list(reversed(word))
    ok = True
    for i in t.nodes:
        lhs = phi(t, simple[i - 1], uw)
        rhs = phi(t, lie_data.apply_word(t, inv, simple[i - 1]), u)
        ok &= lhs == rhs
    rep.add(f"equivariance for w={''.join(map(str, word)) or 'e'}", "root embedding equivariance", ok)
    if len(word) == len(lie_data.positive_roots(t)):
        neg = all(tropical_sign(phi(t, lie_data.apply_word(t, word, a), u)) == "negative" and
                  any(phi(t, lie_data.apply_word(t, word, a), u)) for a in simple)
        rep.add("phi(w0 a_i) negative", "longest element negativity", neg)
    return rep


# ---------------------------------------------------------------------------
# random mutation walks
# ---------------------------------------------------------------------------

def mutation_check(t: DynkinType | str, m: int = 2, steps: int = 1000, seed: int | random.Random = 0,
                   *, walk_length: int = 25, symbolic_depth: int = 5, symbolic_walks: int = 4) -> Report:
    """Involutivity of mutation and sign coherence along random walks.

    ``steps`` random mutations are run on the tropical seed with the
    sign-coherence guard on, restarting from the initial seed every
    ``walk_length`` steps (arrow multiplicities of non-finite-type quivers grow
    doubly exponentially along a single long walk).  At every step
    ``mu_k mu_k`` is checked to return the quiver and the tropical seed.
    Short walks of the symbolic seed check ``mu_k mu_k = id`` on the X- and
    A-variables as well.
    """
    t = parse_type(t)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    Q = build_periodic(t, m)
    rep = Report("mutation", str(t), m)
    ts = initial_trop_seed(Q)
    inv_ok, coh_ok, detail = True, True, ""
    for step in range(steps):
        if step % walk_length == 0:
            ts = initial_trop_seed(Q)
        k = rng.choice(Q.vertices)
        try:
            nxt = mutate_trop(ts, k, coherent=True)
        except SignCoherenceError as exc:
            coh_ok, detail = False, f"step {step}: {exc}"
            break
        back = mutate_trop(nxt, k)
        if back.x != ts.x or back.quiver != ts.quiver or mutate_quiver(nxt.quiver, k) != ts.quiver:
            inv_ok, detail = False, f"step {step}: mu_{k} not an involution"
            break
        ts = nxt
    rep.add(f"tropical mu_k mu_k = id ({steps} steps)", "mutation involution", inv_ok, "" if inv_ok else detail)
    rep.add(f"tropical sign coherence ({steps} steps)", "sign coherence", coh_ok, "" if coh_ok else detail)
    bad = []
    for w in range(symbolic_walks):
        s = initial_seed(Q)
        for step in range(symbolic_depth):
            k = rng.choice(Q.vertices)
            nxt = mutate_seed(s, k)
            if not mutate_seed(nxt, k).equals(s):
                bad.append((w, step, k))
                break
            s = nxt
    rep.add(f"symbolic mu_k mu_k = id ({symbolic_walks}x{symbolic_depth} steps)", "mutation involution",
            not bad, f"fails at {bad[0]}" if bad else "")
    return rep
