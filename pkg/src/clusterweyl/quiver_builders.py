"""Builders for the lattice quivers ``Q(g)``, ``Q_m(g)`` and their affine extensions.

Vertices are pairs ``(i, k)``: ``i`` a Dynkin node (``0`` for the affine
node) and ``k = n / d`` the lattice index rescaled to an integer.  Node ``i``
moves in steps of ``d_i / d`` and a periodic build has ``N = m d' / d`` sites
per node.

Arrow rules (stated in the unscaled index ``n``):

* horizontal arrows ``v^i_n -> v^i_{n + d_i}``;
* for adjacent nodes ``i > j`` (every arrow between different nodes goes out
  of the larger label at equal ``n``):

  - ``d_i >= d_j``: ``v^i_n -> v^j_n`` and ``v^j_{n + d_i} -> v^i_n``;
  - ``d_i < d_j``:  ``v^i_n -> v^j_{n - d_i}`` and ``v^j_{n + d_i} -> v^i_n``.

This reproduces the A-G arrow lists, e.g. ``v^2_n -> v^1_n``,
``v^1_{n+3} -> v^2_n`` for ``G_2`` and ``v^l_n -> v^{l-1}_{n-1/2}``,
``v^{l-1}_{n+1/2} -> v^l_n`` for ``B_l``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .cluster_core import Quiver
from .lie_data import CartanData, DynkinType, cartan_data, parse_type

__all__ = [
    "Circle",
    "LatticeVertex",
    "build_window",
    "build_periodic",
    "circles",
    "circle",
    "build_affine_periodic",
    "AffineType",
    "parse_affine",
    "vertex_label",
    "node_steps",
]

LatticeVertex = tuple  # (i, k)


@dataclass(frozen=True)
class Circle:
    """The oriented circle ``P_{i, gamma}`` of a periodic quiver."""

    i: int
    gamma: int
    vertices: tuple[LatticeVertex, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def position(self, v: LatticeVertex) -> int:
        return self.vertices.index(v)


def vertex_label(v: LatticeVertex, d: Fraction) -> str:
    """Human-readable label ``v^i_n`` with ``n = k d``."""
    i, k = v
    n = Fraction(k) * d
    return f"v{i}_{n}"


def _pair_arrows(i: int, j: int, di: Fraction, dj: Fraction, d: Fraction):
    """Arrows between adjacent nodes ``i > j`` as ``(src, tgt)`` offset rules in ``k``.

    Returns a list of ``((node, k_offset), (node, k_offset))`` relative to a
    base index ``k`` of node ``i``.
    """
    si = int(di / d)
    if di >= dj:
        return [((i, 0), (j, 0)), ((j, si), (i, 0))]
    return [((i, 0), (j, -si)), ((j, si), (i, 0))]


def _edge_rules(cd: CartanData, extra: Iterable | None = None):
    """All translation-invariant arrow rules of ``Q(g)``."""
    rules = []
    d = cd.d
    for i in cd.type.nodes:
        rules.append(((i, 0), (i, cd.step(i))))
    for i in cd.type.nodes:
        for j in cd.type.nodes:
            if j < i and cd.Cij(i, j) != 0:
                rules.extend(_pair_arrows(i, j, cd.di(i), cd.di(j), d))
    if extra:
        rules.extend(extra)
    return rules


def node_steps(cd: CartanData) -> dict[int, int]:
    return {i: cd.step(i) for i in cd.type.nodes}


def build_window(t: DynkinType | str, k_min: int, k_max: int) -> Quiver:
    """The finite full subquiver of ``Q(g)`` on ``k_min <= k <= k_max``."""
    cd = cartan_data(t)
    span = int(2 * cd.dprime / cd.d)
    if k_max - k_min < span:
        raise ValueError(f"window [{k_min}, {k_max}] too small; need width >= {span}")
    verts = [(i, k) for i in cd.type.nodes for k in range(k_min, k_max + 1)]
    vset = set(verts)
    arrows = []
    for k in range(k_min - span, k_max + span + 1):
        for (si, so), (ti, to) in _edge_rules(cd):
            src, tgt = (si, k + so), (ti, k + to)
            if src in vset and tgt in vset:
                arrows.append((src, tgt))
    return Quiver.from_arrows(verts, arrows)


def _periodic_from_rules(nodes_sites: dict[int, int], N: int, rules) -> Quiver:
    verts = [(i, k) for i in sorted(nodes_sites) for k in range(N)]
    arrows = []
    for k in range(N):
        for (si, so), (ti, to) in rules:
            src, tgt = (si, (k + so) % N), (ti, (k + to) % N)
            if src == tgt:
                raise ValueError(f"periodic identification creates a loop at {src}")
            arrows.append((src, tgt))
    return Quiver.from_arrows(verts, arrows)


def build_periodic(t: DynkinType | str, m: int) -> Quiver:
    """The ``m``-periodic quiver ``Q_m(g)``."""
    if not isinstance(m, int) or m < 2:
        raise ValueError("periodicity m must be an integer >= 2")
    cd = cartan_data(t)
    N = cd.period(m)
    return _periodic_from_rules({i: N for i in cd.type.nodes}, N, _edge_rules(cd))


def circles(t: DynkinType | str, m: int, *, include_affine: bool = False, affine=None) -> list[Circle]:
    """All circles ``P_{i, gamma}``: the step-``d_i/d`` orbits of node ``i`` in one residue class.

    ``gamma = 1 .. d_i/d`` labels the residue class ``k = gamma (mod d_i/d)``;
    the vertex list starts at the smallest ``k`` in the class.
    """
    cd = cartan_data(t)
    N = cd.period(m)
    steps = dict(node_steps(cd))
    if affine is not None:
        steps[0] = affine.step0
    out = []
    for i in sorted(steps):
        s = steps[i]
        for gamma in range(1, s + 1):
            r = gamma % s
            out.append(Circle(i, gamma, tuple((i, k) for k in range(r, N, s))))
    return out


def circle(t: DynkinType | str, m: int, i: int, gamma: int = 1, affine=None) -> Circle:
    for c in circles(t, m, affine=affine):
        if c.i == i and c.gamma == gamma:
            return c
    raise KeyError(f"no circle P_({i},{gamma})")


# ---------------------------------------------------------------------------
# affine extensions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineType:
    """An affine extension of a finite quiver by node ``0``.

    ``finite`` is the type of the underlying quiver, ``attach`` the node that
    ``0`` is linked to, ``d0`` the symmetrizer of node ``0`` and ``dual``
    whether this is the dual (``g^{(1) v}``) family.
    """

    name: str
    finite: DynkinType
    attach: int
    d0: Fraction
    dual: bool

    @property
    def cartan(self) -> CartanData:
        return cartan_data(self.finite)

    @property
    def step0(self) -> int:
        s = self.d0 / self.cartan.d
        assert s.denominator == 1
        return int(s)


def parse_affine(t: DynkinType | str, dual: bool = False) -> AffineType:
    """Affine data for ``B^{(1)}, C^{(1)}, F_4^{(1)}, G_2^{(1)}`` and their duals.

    Duals are obtained by transposing the affine Cartan matrix (swapping long
    and short roots) and relabelling the finite part to a standard type:

    * ``B_l^{(1) v}``: finite part ``C_l``, node 0 (``d_0 = 1``) on node 2;
    * ``C_l^{(1) v}``: finite part ``B_l``, node 0 (``d_0 = 1/2``) on node 1;
    * ``F_4^{(1) v}``: finite part ``F_4``, node 0 (``d_0 = 1/2``) on node 4;
    * ``G_2^{(1) v}``: finite part ``G_2``, node 0 (``d_0 = 1``) on node 1.
    """
    t = parse_type(t)
    fam, r = t.family, t.rank
    one, half = Fraction(1), Fraction(1, 2)
    if fam in "ADE":
        raise ValueError("affine builders cover only B, C, F, G families")
    if not dual:
        if fam == "B":
            return AffineType(f"B{r}^(1)", t, 2, one, False)
        if fam == "C":
            if r == 2:
                # C_2^(1) is identified with B_2^(1) and built in B-orientation
                return AffineType("B2^(1)", parse_type("B2"), 2, one, False)
            return AffineType(f"C{r}^(1)", t, 1, Fraction(2), False)
        if fam == "F":
            return AffineType("F4^(1)", t, 1, one, False)
        return AffineType("G2^(1)", t, 2, Fraction(3), False)
    if fam == "B":
        if r == 2:
            return AffineType("B2^(1)v", parse_type("B2"), 1, half, True)
        return AffineType(f"B{r}^(1)v", parse_type(f"C{r}"), 2, one, True)
    if fam == "C":
        return AffineType(f"C{r}^(1)v", parse_type(f"B{r}"), 1, half, True)
    if fam == "F":
        return AffineType("F4^(1)v", t, 4, half, True)
    return AffineType("G2^(1)v", t, 1, one, True)


def _affine_rules(aff: AffineType):
    """Node-0 arrows: ``v^0_n -> v^0_{n+d_0}``, ``v^j_n -> v^0_n``, ``v^0_n -> v^j_{n - max(d_0, d_j)}``."""
    cd = aff.cartan
    j = aff.attach
    s0 = aff.step0
    back = int(max(aff.d0, cd.di(j)) / cd.d)
    return [((0, 0), (0, s0)), ((j, 0), (0, 0)), ((0, 0), (j, -back))]


def build_affine_periodic(t: DynkinType | str | AffineType, m: int, dual: bool = False) -> Quiver:
    """``Q_m`` of an affine type: the finite quiver plus the node-0 vertices and arrows."""
    aff = t if isinstance(t, AffineType) else parse_affine(t, dual)
    if not isinstance(m, int) or m < 2:
        raise ValueError("periodicity m must be an integer >= 2")
    cd = aff.cartan
    N = cd.period(m)
    if (N % aff.step0) != 0:
        raise ValueError("node-0 step does not divide the period")
    nodes = {i: N for i in cd.type.nodes}
    nodes[0] = N
    return _periodic_from_rules(nodes, N, _edge_rules(cd, _affine_rules(aff)))


def affine_circles(aff: AffineType, m: int) -> list[Circle]:
    return circles(aff.finite, m, affine=aff)
