"""Quivers, seeds, tropical seeds and mutation sequences.

Conventions
-----------
* ``eps[a][b]`` is (#arrows a -> b) - (#arrows b -> a).
* Quiver mutation ``mu_k``:
  ``eps'_ij = -eps_ij`` if ``k in (i, j)``, otherwise
  ``eps_ij + (|eps_ik| eps_kj + eps_ik |eps_kj|) / 2``.
* X-mutation: ``X'_k = X_k^{-1}``,
  ``X'_i = X_i (1 + X_k^{-sgn(eps_ik)})^{-eps_ik}``.
* A-mutation: ``A'_k = A_k^{-1} (prod_j A_j^{[eps_kj]_+} + prod_j A_j^{[-eps_kj]_+})``.
* Tropical X-mutation uses the same formula in the semifield of Laurent
  monomials with ``u^a (+) u^b = u^{min(a, b)}``.
* Sequences act left to right; ``Swap(a, b)`` exchanges the data attached to
  the two vertices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence, Union

from .symbolic import RationalExpr, Ring, VarId

__all__ = [
    "Vertex",
    "Quiver",
    "Mutate",
    "Swap",
    "MutationSequence",
    "Seed",
    "TropSeed",
    "FPolySeed",
    "SignCoherenceError",
    "ResourceLimitExceeded",
    "QuiverNotPreserved",
    "mutate_quiver",
    "mutate_seed",
    "mutate_trop",
    "tropical_sign",
    "apply_sequence",
    "initial_seed",
    "initial_trop_seed",
    "is_trivial_on",
    "check_periodicity",
    "is_green",
    "is_maximal_green",
    "green_trace",
    "positive_map",
]

Vertex = Hashable


class SignCoherenceError(AssertionError):
    """A tropical coordinate with mixed signs was produced from ``(Q, u)``."""


class QuiverNotPreserved(ValueError):
    """A sequence expected to fix the quiver did not."""


class ResourceLimitExceeded(RuntimeError):
    """A symbolic computation outgrew its term budget."""


# ---------------------------------------------------------------------------
# quivers
# ---------------------------------------------------------------------------

class Quiver:
    """A finite quiver without loops or 2-cycles, stored as a dense matrix."""

    __slots__ = ("vertices", "eps", "index")

    def __init__(self, vertices: Sequence[Vertex], eps: Sequence[Sequence[int]]):
        self.vertices = tuple(vertices)
        self.eps = tuple(tuple(int(x) for x in row) for row in eps)
        self.index = {v: a for a, v in enumerate(self.vertices)}
        n = len(self.vertices)
        if len(self.index) != n or len(self.eps) != n or any(len(r) != n for r in self.eps):
            raise ValueError("malformed quiver data")
        for a in range(n):
            if self.eps[a][a]:
                raise ValueError(f"loop at {self.vertices[a]}")
            for b in range(a):
                if self.eps[a][b] != -self.eps[b][a]:
                    raise ValueError("exchange matrix is not skew-symmetric")

    @classmethod
    def from_arrows(cls, vertices: Sequence[Vertex], arrows: Iterable[tuple[Vertex, Vertex]]) -> "Quiver":
        idx = {v: a for a, v in enumerate(vertices)}
        n = len(vertices)
        eps = [[0] * n for _ in range(n)]
        for s, t in arrows:
            a, b = idx[s], idx[t]
            if a == b:
                raise ValueError(f"arrow {s} -> {t} is a loop")
            eps[a][b] += 1
            eps[b][a] -= 1
        return cls(vertices, eps)

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertices == other.vertices and self.eps == other.eps

    def __hash__(self) -> int:
        return hash((self.vertices, self.eps))

    def __repr__(self) -> str:
        return f"Quiver({len(self.vertices)} vertices, {self.arrow_count()} arrows)"

    def e(self, u: Vertex, v: Vertex) -> int:
        return self.eps[self.index[u]][self.index[v]]

    def arrows(self) -> list[tuple[Vertex, Vertex, int]]:
        """``(source, target, multiplicity)`` for every ``eps > 0`` entry."""
        out = []
        for a, u in enumerate(self.vertices):
            for b, v in enumerate(self.vertices):
                if self.eps[a][b] > 0:
                    out.append((u, v, self.eps[a][b]))
        return out

    def arrow_count(self) -> int:
        return sum(m for _, _, m in self.arrows())

    def out_neighbours(self, v: Vertex) -> list[Vertex]:
        a = self.index[v]
        return [self.vertices[b] for b in range(len(self)) if self.eps[a][b] > 0]

    def in_neighbours(self, v: Vertex) -> list[Vertex]:
        a = self.index[v]
        return [self.vertices[b] for b in range(len(self)) if self.eps[a][b] < 0]

    def mutate(self, k: Vertex) -> "Quiver":
        return mutate_quiver(self, k)

    def swap(self, u: Vertex, v: Vertex) -> "Quiver":
        a, b = self.index[u], self.index[v]
        perm = list(range(len(self)))
        perm[a], perm[b] = b, a
        n = len(self)
        return Quiver(self.vertices, [[self.eps[perm[r]][perm[c]] for c in range(n)] for r in range(n)])

    # -- serialization ---------------------------------------------------------
    def to_json_obj(self, label: Callable[[Vertex], object] = lambda v: list(v) if isinstance(v, tuple) else v) -> dict:
        triples = [[a, b, self.eps[a][b]] for a in range(len(self)) for b in range(len(self))
                   if self.eps[a][b] > 0]
        return {"vertices": [label(v) for v in self.vertices], "eps": triples}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Quiver":
        verts = [tuple(v) if isinstance(v, list) else v for v in obj["vertices"]]
        n = len(verts)
        eps = [[0] * n for _ in range(n)]
        for a, b, val in obj["eps"]:
            eps[a][b] = val
            eps[b][a] = -val
        return cls(verts, eps)

    def to_dot(self, name: str = "Q", label: Callable[[Vertex], str] = str) -> str:
        lines = [f"digraph {name} {{"]
        ids = {v: f"v{a}" for a, v in enumerate(self.vertices)}
        for v in self.vertices:
            lines.append(f'  {ids[v]} [label="{label(v)}"];')
        for u, v, mult in self.arrows():
            for _ in range(mult):
                lines.append(f"  {ids[u]} -> {ids[v]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def mutate_quiver(Q: Quiver, k: Vertex) -> Quiver:
    """Matrix mutation at ``k``."""
    if k not in Q.index:
        raise KeyError(f"unknown vertex {k!r}")
    c = Q.index[k]
    E = Q.eps
    n = len(Q)
    col = [E[i][c] for i in range(n)]
    row = E[c]
    new = []
    for i in range(n):
        if i == c:
            new.append([-x for x in E[i]])
            continue
        eik = col[i]
        if eik == 0:
            r = list(E[i])
            r[c] = -r[c]
            new.append(r)
            continue
        r = []
        aik = abs(eik)
        for j in range(n):
            if j == c:
                r.append(-E[i][j])
            else:
                ekj = row[j]
                r.append(E[i][j] + (aik * ekj + eik * abs(ekj)) // 2)
        new.append(r)
    return Quiver(Q.vertices, new)


# ---------------------------------------------------------------------------
# mutation sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mutate:
    vertex: Vertex

    def __str__(self) -> str:
        return f"mu{self.vertex}"


@dataclass(frozen=True)
class Swap:
    a: Vertex
    b: Vertex

    def __str__(self) -> str:
        return f"swap{self.a}{self.b}"


Move = Union[Mutate, Swap]


@dataclass(frozen=True)
class MutationSequence:
    """Moves applied left to right."""

    moves: tuple[Move, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "moves", tuple(self.moves))

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def __len__(self) -> int:
        return len(self.moves)

    def __add__(self, other: "MutationSequence") -> "MutationSequence":
        return MutationSequence(self.moves + tuple(other.moves))

    def __mul__(self, times: int) -> "MutationSequence":
        return MutationSequence(self.moves * times)

    def inverse(self) -> "MutationSequence":
        """Mutations and swaps are involutions, so reverse the move list."""
        return MutationSequence(tuple(reversed(self.moves)))

    def mutation_count(self) -> int:
        return sum(isinstance(mv, Mutate) for mv in self.moves)

    def vertices(self) -> set[Vertex]:
        out: set[Vertex] = set()
        for mv in self.moves:
            if isinstance(mv, Mutate):
                out.add(mv.vertex)
            else:
                out.update((mv.a, mv.b))
        return out

    def validate(self, Q: Quiver) -> None:
        missing = self.vertices() - set(Q.vertices)
        if missing:
            raise KeyError(f"sequence references unknown vertices {sorted(missing, key=str)}")


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------

def _var_for(kind: str, v: Vertex) -> VarId:
    if isinstance(v, tuple) and len(v) == 2:
        return VarId(kind, int(v[0]), int(v[1]))
    return VarId(f"{kind}{v}", 0, 0)


@dataclass(frozen=True)
class Seed:
    """A quiver with X- and A-variables (tuples aligned with ``quiver.vertices``)."""

    quiver: Quiver
    X: tuple[RationalExpr, ...]
    A: tuple[RationalExpr, ...]

    def __post_init__(self) -> None:
        n = len(self.quiver)
        if len(self.X) != n or len(self.A) != n:
            raise ValueError("seed variables not indexed by the vertex set")

    def x(self, v: Vertex) -> RationalExpr:
        return self.X[self.quiver.index[v]]

    def a(self, v: Vertex) -> RationalExpr:
        return self.A[self.quiver.index[v]]

    def equals(self, other: "Seed") -> bool:
        return (self.quiver == other.quiver
                and all(x.equals(y) for x, y in zip(self.X, other.X))
                and all(x.equals(y) for x, y in zip(self.A, other.A)))

    def first_difference(self, other: "Seed") -> str | None:
        if self.quiver != other.quiver:
            return "quiver"
        for v, x, y in zip(self.quiver.vertices, self.X, other.X):
            if not x.equals(y):
                return f"X at {v}"
        for v, x, y in zip(self.quiver.vertices, self.A, other.A):
            if not x.equals(y):
                return f"A at {v}"
        return None


def initial_seed(Q: Quiver, ring: Ring | None = None) -> Seed:
    """The seed with independent variables ``X_v`` and ``A_v``."""
    xs = [_var_for("X", v) for v in Q.vertices]
    as_ = [_var_for("A", v) for v in Q.vertices]
    ring = ring or Ring.get(xs + as_)
    return Seed(Q, tuple(ring.var(x) for x in xs), tuple(ring.var(a) for a in as_))


def mutate_seed(s: Seed, k: Vertex) -> Seed:
    Q = s.quiver
    if k not in Q.index:
        raise KeyError(f"unknown vertex {k!r}")
    c = Q.index[k]
    E = Q.eps
    n = len(Q)
    Xk = s.X[c]
    X = list(s.X)
    one_plus = None
    one_plus_inv = None
    for i in range(n):
        e = E[i][c]
        if i == c or e == 0:
            continue
        if e > 0:
            if one_plus_inv is None:
                one_plus_inv = Xk.inverse() + 1
            X[i] = X[i] * one_plus_inv ** (-e)
        else:
            if one_plus is None:
                one_plus = Xk + 1
            X[i] = X[i] * one_plus ** (-e)
    X[c] = Xk.inverse()
    ring = s.A[c].ring
    pos = ring.one()
    neg = ring.one()
    for j in range(n):
        e = E[c][j]
        if e > 0:
            pos = pos * s.A[j] ** e
        elif e < 0:
            neg = neg * s.A[j] ** (-e)
    A = list(s.A)
    A[c] = (pos + neg) / s.A[c]
    return Seed(mutate_quiver(Q, k), tuple(X), tuple(A))


def _swap_seed(s: Seed, u: Vertex, v: Vertex) -> Seed:
    a, b = s.quiver.index[u], s.quiver.index[v]
    X, A = list(s.X), list(s.A)
    X[a], X[b] = X[b], X[a]
    A[a], A[b] = A[b], A[a]
    return Seed(s.quiver.swap(u, v), tuple(X), tuple(A))


# ---------------------------------------------------------------------------
# tropical seeds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TropSeed:
    """Tropical X-seed: ``x[a]`` is the exponent vector of ``x_a`` in the generators ``u``."""

    quiver: Quiver
    x: tuple[tuple[int, ...], ...]
    generators: tuple[Vertex, ...] = ()

    def __post_init__(self) -> None:
        if len(self.x) != len(self.quiver):
            raise ValueError("tropical seed not indexed by the vertex set")
        if not self.generators:
            object.__setattr__(self, "generators", self.quiver.vertices)

    def at(self, v: Vertex) -> tuple[int, ...]:
        return self.x[self.quiver.index[v]]

    def as_dict(self, v: Vertex) -> dict[Vertex, int]:
        return {g: e for g, e in zip(self.generators, self.at(v)) if e}


def initial_trop_seed(Q: Quiver) -> TropSeed:
    n = len(Q)
    return TropSeed(Q, tuple(tuple(int(a == b) for b in range(n)) for a in range(n)), Q.vertices)


def tropical_sign(x: Sequence[int]) -> str:
    """``"positive"`` (all exponents >= 0, including the zero vector), ``"negative"`` or ``"mixed"``."""
    if all(e >= 0 for e in x):
        return "positive"
    if all(e <= 0 for e in x):
        return "negative"
    return "mixed"


def mutate_trop(t: TropSeed, k: Vertex, *, coherent: bool = False) -> TropSeed:
    """Tropical X-mutation; with ``coherent=True`` mixed signs raise."""
    Q = t.quiver
    if k not in Q.index:
        raise KeyError(f"unknown vertex {k!r}")
    c = Q.index[k]
    xk = t.x[c]
    if coherent and tropical_sign(xk) == "mixed":
        raise SignCoherenceError(f"mixed tropical sign at {k}: {xk}")
    neg_part = tuple(min(0, e) for e in xk)     # exponent of 1 (+) x_k
    pos_part = tuple(min(0, -e) for e in xk)    # exponent of 1 (+) x_k^{-1}
    x = list(t.x)
    for i in range(len(Q)):
        e = Q.eps[i][c]
        if i == c or e == 0:
            continue
        base = pos_part if e > 0 else neg_part
        x[i] = tuple(a - e * b for a, b in zip(x[i], base))
    x[c] = tuple(-e for e in xk)
    out = TropSeed(mutate_quiver(Q, k), tuple(x), t.generators)
    if coherent:
        for v, vec in zip(Q.vertices, out.x):
            if tropical_sign(vec) == "mixed":
                raise SignCoherenceError(f"mixed tropical sign at {v} after mu_{k}")
    return out


def _swap_trop(t: TropSeed, u: Vertex, v: Vertex) -> TropSeed:
    a, b = t.quiver.index[u], t.quiver.index[v]
    x = list(t.x)
    x[a], x[b] = x[b], x[a]
    return TropSeed(t.quiver.swap(u, v), tuple(x), t.generators)


# ---------------------------------------------------------------------------
# separated X-seeds (F-polynomial form)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FPolySeed:
    """X-seed in separated form ``X_j = u^{c_j} prod_i F_i^{eps_ji}``.

    ``c`` are the tropical coordinates and ``F`` the F-polynomials (flint
    polynomials in the initial X-variables).  Each mutation costs one exact
    polynomial division, which is much cheaper than rational-function
    arithmetic when replaying long sequences from the initial seed.
    """

    quiver: Quiver
    c: tuple[tuple[int, ...], ...]
    F: tuple
    ring: Ring

    @classmethod
    def initial(cls, Q: Quiver, ring: Ring | None = None) -> "FPolySeed":
        ring = ring or Ring.get([_var_for("X", v) for v in Q.vertices])
        n = len(Q)
        c = tuple(tuple(int(a == b) for b in range(n)) for a in range(n))
        return cls(Q, c, tuple(ring.one_poly for _ in range(n)), ring)

    def max_terms(self) -> int:
        return max((len(f) for f in self.F), default=0)

    def x_expr(self, v: Vertex) -> RationalExpr:
        """The X-variable at ``v`` as a rational function of the initial X's."""
        a = self.quiver.index[v]
        ring = self.ring
        num, den = ring.one_poly, ring.one_poly
        for i, e in enumerate(self.quiver.eps[a]):
            if e > 0:
                num = num * self.F[i] ** e
            elif e < 0:
                den = den * self.F[i] ** (-e)
        mono = ring.remap_mono(self.c[a], ring) if len(self.c[a]) == ring.nvars else self.c[a]
        return RationalExpr(ring, mono, num, den)

    def is_initial(self) -> bool:
        n = len(self.quiver)
        return all(f.is_one() for f in self.F) and all(
            self.c[a] == tuple(int(a == b) for b in range(n)) for a in range(n))


def _mutate_fpoly(s: FPolySeed, k: Vertex, max_terms: int | None) -> FPolySeed:
    Q = s.quiver
    c = Q.index[k]
    ring = s.ring
    ck = s.c[c]
    pos = ring.monomial_poly([max(e, 0) for e in ck])
    neg = ring.monomial_poly([max(-e, 0) for e in ck])
    for i, b in enumerate(Q.eps[c]):
        if b > 0:
            pos = pos * s.F[i] ** b
        elif b < 0:
            neg = neg * s.F[i] ** (-b)
    total = pos + neg
    if max_terms is not None and len(total) > max_terms:
        raise ResourceLimitExceeded(f"F-polynomial exchange numerator has {len(total)} terms")
    quo, rem = divmod(total, s.F[c])
    if not rem.is_zero():
        raise ArithmeticError("F-polynomial exchange relation is not exact")
    F = list(s.F)
    F[c] = quo
    trop = mutate_trop(TropSeed(Q, s.c), k)
    return FPolySeed(trop.quiver, trop.x, tuple(F), ring)


def _swap_fpoly(s: FPolySeed, u: Vertex, v: Vertex) -> FPolySeed:
    a, b = s.quiver.index[u], s.quiver.index[v]
    c, F = list(s.c), list(s.F)
    c[a], c[b] = c[b], c[a]
    F[a], F[b] = F[b], F[a]
    return FPolySeed(s.quiver.swap(u, v), tuple(c), tuple(F), s.ring)


# ---------------------------------------------------------------------------
# sequences on seeds
# ---------------------------------------------------------------------------

def apply_sequence(s, seq: MutationSequence | Iterable[Move], *, coherent: bool = False,
                   max_terms: int | None = None, on_step: Callable | None = None):
    """Apply ``seq`` left to right to a Quiver, Seed, TropSeed or FPolySeed."""
    moves = seq.moves if isinstance(seq, MutationSequence) else tuple(seq)
    Q = s if isinstance(s, Quiver) else s.quiver
    MutationSequence(moves).validate(Q)
    for step, mv in enumerate(moves):
        if isinstance(mv, Mutate):
            if isinstance(s, Quiver):
                s = mutate_quiver(s, mv.vertex)
            elif isinstance(s, Seed):
                s = mutate_seed(s, mv.vertex)
            elif isinstance(s, TropSeed):
                s = mutate_trop(s, mv.vertex, coherent=coherent)
            elif isinstance(s, FPolySeed):
                s = _mutate_fpoly(s, mv.vertex, max_terms)
            else:
                raise TypeError(type(s).__name__)
        elif isinstance(mv, Swap):
            if isinstance(s, Quiver):
                s = s.swap(mv.a, mv.b)
            elif isinstance(s, Seed):
                s = _swap_seed(s, mv.a, mv.b)
            elif isinstance(s, TropSeed):
                s = _swap_trop(s, mv.a, mv.b)
            elif isinstance(s, FPolySeed):
                s = _swap_fpoly(s, mv.a, mv.b)
            else:
                raise TypeError(type(s).__name__)
        else:
            raise TypeError(f"unknown move {mv!r}")
        if on_step is not None:
            on_step(step, mv, s)
    return s


def _require_preserved(Q: Quiver, seq: MutationSequence) -> None:
    if apply_sequence(Q, seq) != Q:
        raise QuiverNotPreserved("sequence does not return the quiver to itself")


def is_trivial_on(s: Seed, seq: MutationSequence) -> bool:
    """Direct symbolic check that ``seq`` fixes the full seed ``s``."""
    _require_preserved(s.quiver, seq)
    return apply_sequence(s, seq).equals(s)


def check_periodicity(Q: Quiver, seq: MutationSequence) -> bool:
    """Tropical certificate: does ``seq`` return ``(Q, u)`` to itself?"""
    _require_preserved(Q, seq)
    t0 = initial_trop_seed(Q)
    return apply_sequence(t0, seq, coherent=True) == t0


def green_trace(Q: Quiver, seq: MutationSequence) -> tuple[list[str], TropSeed]:
    """Tropical sign of the mutated coordinate before every mutation."""
    trace: list[str] = []
    t = initial_trop_seed(Q)
    for mv in seq:
        if isinstance(mv, Mutate):
            trace.append(tropical_sign(t.at(mv.vertex)))
            t = mutate_trop(t, mv.vertex, coherent=True)
        else:
            t = _swap_trop(t, mv.a, mv.b)
    return trace, t


def is_green(Q: Quiver, seq: MutationSequence) -> bool:
    trace, _ = green_trace(Q, seq)
    return all(sign == "positive" for sign in trace)


def is_maximal_green(Q: Quiver, seq: MutationSequence) -> bool:
    trace, t = green_trace(Q, seq)
    if not all(sign == "positive" for sign in trace):
        return False
    return all(any(vec) and tropical_sign(vec) == "negative" for vec in t.x)


def positive_map(s: Seed) -> tuple[RationalExpr, ...]:
    """``p*(X_v) = prod_w A_w^{eps_vw}``."""
    out = []
    ring = s.A[0].ring if s.A else None
    for a in range(len(s.quiver)):
        val = ring.one()
        for b, e in enumerate(s.quiver.eps[a]):
            if e:
                val = val * s.A[b] ** e
        out.append(val)
    return tuple(out)


def dumps_seed(s: Seed | TropSeed) -> str:
    obj = s.quiver.to_json_obj()
    if isinstance(s, Seed):
        obj["X"] = [str(x) for x in s.X]
        obj["A"] = [str(a) for a in s.A]
    else:
        obj["x"] = [list(v) for v in s.x]
    return json.dumps(obj)
