"""Cartan data and Weyl-group word utilities for the finite Dynkin types.

Node numbering (1-based throughout the package):

* ``A_l``: chain ``1 - 2 - ... - l``.
* ``B_l``: chain, node ``l`` short (``d_l = 1/2``).
* ``C_l``: chain, node ``l`` long (``d_l = 2``).
* ``D_l``: chain ``1 - ... - (l-2)`` with ``l-1`` and ``l`` both attached to ``l-2``.
* ``E_l``: chain ``1 - 2 - 3 - 5 - 6 - ... - l`` with node ``4`` attached to ``3``.
* ``F_4``: chain ``1 - 2 - 3 - 4``, nodes ``3, 4`` short.
* ``G_2``: node ``1`` short, node ``2`` long (``d_2 = 3``).

The Cartan matrix convention is ``C_ij = 2 (a_i, a_j) / (a_i, a_i)`` so that
``B = D C`` is symmetric, and the simple reflection acts by
``s_i(a_j) = a_j - C_ij a_i``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "DynkinType",
    "CartanData",
    "RootLatticeVector",
    "parse_type",
    "cartan_data",
    "coxeter_m",
    "simple_reflection",
    "apply_word",
    "longest_word",
    "positive_roots",
    "is_reduced",
    "word_length",
    "SUPPORTED_TYPES",
]

_RANK_RULES = {
    "A": lambda r: r >= 1,
    "B": lambda r: r >= 2,
    "C": lambda r: r >= 2,
    "D": lambda r: r >= 4,
    "E": lambda r: r in (6, 7, 8),
    "F": lambda r: r == 4,
    "G": lambda r: r == 2,
}

# C_ij * C_ji -> m_ij
_COXETER_TABLE = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclass(frozen=True, order=True)
class DynkinType:
    """A finite Dynkin type ``X_l``."""

    family: str
    rank: int

    def __post_init__(self) -> None:
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam not in _RANK_RULES:
            raise ValueError(f"unknown Dynkin family {self.family!r}")
        if not isinstance(self.rank, int) or not _RANK_RULES[fam](self.rank):
            raise ValueError(f"invalid rank {self.rank} for family {fam}")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"


def parse_type(text: str | DynkinType) -> DynkinType:
    """Parse strings such as ``"A3"``, ``"g2"`` or ``"E_8"``."""
    if isinstance(text, DynkinType):
        return text
    mt = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
    if not mt:
        raise ValueError(f"cannot parse Dynkin type {text!r}")
    return DynkinType(mt.group(1).upper(), int(mt.group(2)))


# Every type for which the quiver builders are defined; used by the
# "for every supported type" checks.
SUPPORTED_TYPES: tuple[DynkinType, ...] = tuple(
    parse_type(s)
    for s in ("A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4",
              "D4", "D5", "E6", "E7", "E8", "F4", "G2")
)


@dataclass(frozen=True)
class RootLatticeVector:
    """An element ``sum_i coeffs[i-1] * a_i`` of the root lattice."""

    coeffs: tuple[int, ...]

    @classmethod
    def simple(cls, rank: int, i: int) -> "RootLatticeVector":
        return cls(tuple(int(j == i) for j in range(1, rank + 1)))

    def __add__(self, other: "RootLatticeVector") -> "RootLatticeVector":
        return RootLatticeVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "RootLatticeVector":
        return RootLatticeVector(tuple(-a for a in self.coeffs))

    def __getitem__(self, i: int) -> int:
        """Coefficient of ``a_i`` (1-based)."""
        return self.coeffs[i - 1]

    @property
    def is_positive(self) -> bool:
        return any(self.coeffs) and all(c >= 0 for c in self.coeffs)

    @property
    def is_negative(self) -> bool:
        return any(self.coeffs) and all(c <= 0 for c in self.coeffs)


@dataclass(frozen=True)
class CartanData:
    """Cartan matrix, symmetrizer and derived constants of a finite type.

    Matrices are tuples of rows indexed from 0; use :meth:`Cij` etc. for the
    1-based node labels.
    """

    type: DynkinType
    C: tuple[tuple[int, ...], ...]
    D: tuple[Fraction, ...]
    B: tuple[tuple[Fraction, ...], ...]
    d: Fraction
    dprime: Fraction
    m: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return self.type.rank

    def Cij(self, i: int, j: int) -> int:
        return self.C[i - 1][j - 1]

    def Bij(self, i: int, j: int) -> Fraction:
        return self.B[i - 1][j - 1]

    def di(self, i: int) -> Fraction:
        return self.D[i - 1]

    def step(self, i: int) -> int:
        """``d_i / d``: the lattice step of node ``i`` in rescaled units."""
        s = self.D[i - 1] / self.d
        assert s.denominator == 1
        return int(s)

    def period(self, m: int) -> int:
        """``N = m d' / d``: number of rescaled lattice sites per node."""
        n = m * self.dprime / self.d
        assert n.denominator == 1
        return int(n)

    def neighbours(self, i: int) -> list[int]:
        return [j for j in self.type.nodes if j != i and self.Cij(i, j) != 0]


def _cartan_matrix(t: DynkinType) -> list[list[int]]:
    r = t.rank
    C = [[2 if i == j else 0 for j in range(r)] for i in range(r)]

    def link(i: int, j: int, cij: int = -1, cji: int = -1) -> None:
        C[i - 1][j - 1] = cij
        C[j - 1][i - 1] = cji

    fam = t.family
    if fam in "ABC":
        for i in range(1, r):
            link(i, i + 1)
        if fam == "B":
            link(r - 1, r, -1, -2)
        elif fam == "C":
            link(r - 1, r, -2, -1)
    elif fam == "D":
        for i in range(1, r - 1):
            link(i, i + 1)
        link(r - 2, r)
    elif fam == "E":
        link(1, 2)
        link(2, 3)
        link(3, 4)
        link(3, 5)
        for i in range(5, r):
            link(i, i + 1)
    elif fam == "F":
        link(1, 2)
        link(2, 3, -1, -2)
        link(3, 4)
    elif fam == "G":
        link(1, 2, -3, -1)
    return C


def _symmetrizer(t: DynkinType) -> list[Fraction]:
    r = t.rank
    one, half = Fraction(1), Fraction(1, 2)
    if t.family == "B":
        return [one] * (r - 1) + [half]
    if t.family == "C":
        return [one] * (r - 1) + [Fraction(2)]
    if t.family == "F":
        return [one, one, half, half]
    if t.family == "G":
        return [one, Fraction(3)]
    return [one] * r


@lru_cache(maxsize=None)
def cartan_data(t: DynkinType | str) -> CartanData:
    """Return the Cartan data ``(C, D, B = DC, d, d', m)`` of ``t``."""
    t = parse_type(t)
    C = _cartan_matrix(t)
    D = _symmetrizer(t)
    r = t.rank
    B = [[D[i] * C[i][j] for j in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(r):
            if B[i][j] != B[j][i]:
                raise AssertionError(f"B = DC not symmetric for {t}")
    m = [[1 if i == j else _COXETER_TABLE[C[i][j] * C[j][i]] for j in range(r)]
         for i in range(r)]
    return CartanData(
        type=t,
        C=tuple(tuple(row) for row in C),
        D=tuple(D),
        B=tuple(tuple(row) for row in B),
        d=min(D),
        dprime=max(D),
        m=tuple(tuple(row) for row in m),
    )


def coxeter_m(t: DynkinType | str, i: int, j: int) -> int:
    """Order of ``s_i s_j`` in the Weyl group."""
    return cartan_data(t).m[i - 1][j - 1]


def simple_reflection(t: DynkinType | str, i: int, v: RootLatticeVector) -> RootLatticeVector:
    """``s_i(v)`` using ``s_i(a_j) = a_j - C_ij a_i``."""
    cd = cartan_data(t)
    shift = sum(cd.Cij(i, j) * v[j] for j in cd.type.nodes)
    coeffs = list(v.coeffs)
    coeffs[i - 1] -= shift
    return RootLatticeVector(tuple(coeffs))


def apply_word(t: DynkinType | str, word: Sequence[int], v: RootLatticeVector) -> RootLatticeVector:
    """Apply ``w = s_{i_1} ... s_{i_k}`` to ``v`` (rightmost letter first)."""
    for i in reversed(word):
        v = simple_reflection(t, i, v)
    return v


def positive_roots(t: DynkinType | str) -> list[RootLatticeVector]:
    """Positive roots, by closing the simple roots under all reflections."""
    t = parse_type(t)
    seen = {RootLatticeVector.simple(t.rank, i) for i in t.nodes}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for i in t.nodes:
                u = simple_reflection(t, i, v)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return sorted((v for v in seen if v.is_positive), key=lambda v: (sum(v.coeffs), v.coeffs))


def is_reduced(t: DynkinType | str, word: Sequence[int]) -> bool:
    """Length additivity: ``l(w s_i) = l(w) + 1`` at every step."""
    t = parse_type(t)
    prefix: list[int] = []
    for i in word:
        if i not in t.nodes:
            raise ValueError(f"node {i} out of range for {t}")
        if not apply_word(t, prefix, RootLatticeVector.simple(t.rank, i)).is_positive:
            return False
        prefix.append(i)
    return True


def word_length(t: DynkinType | str, word: Sequence[int]) -> int:
    """Length of the Weyl group element: number of positive roots it negates."""
    return sum(1 for v in positive_roots(t) if apply_word(t, word, v).is_negative)


@lru_cache(maxsize=None)
def _longest_word(t: DynkinType) -> tuple[int, ...]:
    word: list[int] = []
    while True:
        for i in t.nodes:
            if apply_word(t, word, RootLatticeVector.simple(t.rank, i)).is_positive:
                word.append(i)
                break
        else:
            return tuple(word)


def longest_word(t: DynkinType | str) -> list[int]:
    """A reduced word for the longest element ``w_0``.

    Built greedily: append the smallest ``i`` with ``l(w s_i) > l(w)`` until no
    such ``i`` exists.
    """
    return list(_longest_word(parse_type(t)))


def random_reduced_word(t: DynkinType | str, rng, max_length: int | None = None) -> list[int]:
    """A random reduced word (random walk that only takes length-increasing steps)."""
    t = parse_type(t)
    n_pos = len(positive_roots(t))
    target = rng.randint(0, n_pos if max_length is None else min(max_length, n_pos))
    word: list[int] = []
    while len(word) < target:
        options = [i for i in t.nodes
                   if apply_word(t, word, RootLatticeVector.simple(t.rank, i)).is_positive]
        if not options:
            break
        word.append(rng.choice(options))
    return word


def iter_node_pairs(t: DynkinType | str) -> Iterable[tuple[int, int]]:
    t = parse_type(t)
    for i in t.nodes:
        for j in t.nodes:
            if i < j:
                yield i, j
