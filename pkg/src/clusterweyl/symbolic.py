"""Exact multivariate Laurent / rational-function arithmetic.

Polynomials are stored sparsely by ``python-flint``'s ``fmpz_mpoly`` inside a
:class:`Ring` that fixes an ordered tuple of :class:`VarId`.  On top of that we
keep our own normal form:

* a :class:`LaurentPoly` is ``x^mono * p`` where ``p`` has no monomial factor;
* a :class:`RationalExpr` is ``x^mono * p / q`` where ``p`` and ``q`` have no
  monomial factor, no common integer content, no common polynomial factor and
  ``q`` has positive leading coefficient.

Equality is decided by cross-multiplication, independently of the cancellation
performed by the normal form.

The module also provides log-canonical Poisson brackets
(:func:`poisson_bracket`, :class:`StructureMatrix`,
:func:`monomial_map_structure`) and truncated power series
(:class:`TruncatedSeries`).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

import flint

__all__ = [
    "VarId",
    "Ring",
    "LaurentPoly",
    "RationalExpr",
    "StructureMatrix",
    "TruncatedSeries",
    "poisson_bracket",
    "monomial_map_structure",
    "series_truncate",
    "series_mul",
    "series_inverse",
]


# ---------------------------------------------------------------------------
# variables and rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class VarId:
    """A named variable ``kind^i_k``.

    ``kind`` is a short family tag (``"X"``, ``"A"``, ``"y"``, ``"s"``, ...),
    ``i`` a Dynkin node (0 for affine nodes) and ``k`` a rescaled lattice index.
    """

    kind: str
    i: int = 0
    k: int = 0

    def __str__(self) -> str:
        return f"{self.kind}{self.i}_{self.k}" if self.k >= 0 else f"{self.kind}{self.i}_m{-self.k}"

    @property
    def token(self) -> str:
        return re.sub(r"[^0-9A-Za-z_]", "_", str(self))


class Ring:
    """An ordered set of variables backed by a flint polynomial context."""

    _cache: dict[tuple[VarId, ...], "Ring"] = {}

    def __init__(self, variables: tuple[VarId, ...]):
        self.vars = variables
        self.index = {v: j for j, v in enumerate(variables)}
        if len(self.index) != len(variables):
            raise ValueError("duplicate variables in ring")
        names = tuple(v.token for v in variables) or ("_unit",)
        if len(set(names)) != len(names):
            raise ValueError("variable labels collide")
        self.ctx = flint.fmpz_mpoly_ctx.get(names, "degrevlex")
        self.nvars = len(variables)
        self._nctx = len(names)
        self.zero_poly = self.ctx.from_dict({})
        self.one_poly = self.ctx.from_dict({(0,) * self._nctx: 1})
        self.zero_mono = (0,) * self.nvars

    @classmethod
    def get(cls, variables: Iterable[VarId]) -> "Ring":
        key = tuple(variables)
        ring = cls._cache.get(key)
        if ring is None:
            ring = cls(key)
            cls._cache[key] = ring
        return ring

    def __repr__(self) -> str:
        return f"Ring({len(self.vars)} vars)"

    def union(self, other: "Ring") -> "Ring":
        if other is self:
            return self
        extra = tuple(v for v in other.vars if v not in self.index)
        if not extra:
            return self
        return Ring.get(self.vars + extra)

    def monomial_poly(self, exps: Sequence[int], coeff: int = 1):
        e = tuple(exps) if self.nvars else (0,)
        if any(x < 0 for x in e):
            raise ValueError(f"negative exponent in polynomial monomial {e}")
        return self.ctx.from_dict({e: coeff})

    def project(self, poly, source: "Ring"):
        if source is self:
            return poly
        mapping = {v.token: v.token for v in source.vars}
        return poly.project_to_context(self.ctx, mapping=mapping) if source.nvars else \
            self.ctx.from_dict({(0,) * self._nctx: int(poly.coefficient(0)) if not poly.is_zero() else 0})

    def remap_mono(self, mono: Sequence[int], source: "Ring") -> tuple[int, ...]:
        if source is self:
            return tuple(mono)
        out = [0] * self.nvars
        for v, e in zip(source.vars, mono):
            out[self.index[v]] = e
        return tuple(out)

    # convenience constructors ------------------------------------------------
    def var(self, v: VarId) -> "RationalExpr":
        mono = [0] * self.nvars
        mono[self.index[v]] = 1
        return RationalExpr._raw(self, tuple(mono), self.one_poly, self.one_poly)

    def gens(self) -> dict[VarId, "RationalExpr"]:
        return {v: self.var(v) for v in self.vars}

    def const(self, c: int | Fraction) -> "RationalExpr":
        c = Fraction(c)
        return RationalExpr(self, self.zero_mono, self.ctx.from_dict({(0,) * self._nctx: c.numerator}),
                            self.ctx.from_dict({(0,) * self._nctx: c.denominator}))

    def one(self) -> "RationalExpr":
        return RationalExpr._raw(self, self.zero_mono, self.one_poly, self.one_poly)

    def zero(self) -> "RationalExpr":
        return RationalExpr._raw(self, self.zero_mono, self.zero_poly, self.one_poly)

    def monomial(self, exps: Mapping[VarId, int], coeff: int = 1) -> "RationalExpr":
        mono = [0] * self.nvars
        for v, e in exps.items():
            mono[self.index[v]] += e
        return RationalExpr(self, tuple(mono), self.const(coeff).p, self.one_poly)


def _poly_exponents(poly) -> list[tuple[int, ...]]:
    return poly.monoms()


def _split_monomial(poly, nvars: int) -> tuple[tuple[int, ...], object]:
    """Return ``(e, p')`` with ``poly = x^e p'`` and ``p'`` free of monomial factors."""
    if poly.is_zero() or nvars == 0:
        return (0,) * nvars, poly
    tc = poly.term_content()
    e = tuple(int(x) for x in tc.monoms()[0])
    if not any(e):
        return tuple(e), poly
    mono_poly = poly.context().from_dict({e: 1})
    return tuple(e), poly // mono_poly


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPoly:
    """``x^mono * poly`` with ``poly`` free of monomial factors."""

    __slots__ = ("ring", "mono", "poly")

    def __init__(self, ring: Ring, mono: Sequence[int], poly):
        e, p = _split_monomial(poly, ring.nvars)
        self.ring = ring
        self.poly = p
        self.mono = ring.zero_mono if p.is_zero() else tuple(a + b for a, b in zip(mono, e))

    @classmethod
    def from_terms(cls, ring: Ring, terms: Mapping[tuple[int, ...], int]) -> "LaurentPoly":
        terms = {tuple(k): int(c) for k, c in terms.items() if c}
        if not terms:
            return cls(ring, ring.zero_mono, ring.zero_poly)
        low = tuple(min(k[j] for k in terms) for j in range(ring.nvars))
        shifted = {tuple(a - b for a, b in zip(k, low)) or (0,): c for k, c in terms.items()}
        return cls(ring, low, ring.ctx.from_dict(shifted))

    def terms(self) -> dict[tuple[int, ...], int]:
        """Exponent vector -> coefficient, with the monomial shift applied."""
        if self.poly.is_zero():
            return {}
        if self.ring.nvars == 0:
            return {(): int(self.poly.coefficient(0))}
        return {tuple(a + b for a, b in zip(e, self.mono)): int(c)
                for e, c in self.poly.terms()}

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __len__(self) -> int:
        return len(self.poly)

    def to_rational(self) -> "RationalExpr":
        return RationalExpr(self.ring, self.mono, self.poly, self.ring.one_poly)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.to_rational().equals(other.to_rational())

    def __hash__(self) -> int:
        return hash((self.ring.vars, self.mono, str(self.poly)))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return (self.to_rational() + other.to_rational()).as_laurent()

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return (self.to_rational() * other.to_rational()).as_laurent()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_rational()})"


# ---------------------------------------------------------------------------
# rational expressions
# ---------------------------------------------------------------------------

Scalar = Union[int, Fraction]


class RationalExpr:
    """Exact element ``x^mono * p / q`` of a rational function field."""

    __slots__ = ("ring", "mono", "p", "q")

    def __init__(self, ring: Ring, mono: Sequence[int], p, q, *, reduce: bool = True):
        if q.is_zero():
            raise ZeroDivisionError("zero denominator")
        n = ring.nvars
        if p.is_zero():
            self.ring, self.mono, self.p, self.q = ring, ring.zero_mono, ring.zero_poly, ring.one_poly
            return
        ep, p = _split_monomial(p, n)
        eq, q = _split_monomial(q, n)
        mono = tuple(a + b - c for a, b, c in zip(mono, ep, eq)) if n else ()
        if reduce and not q.is_one():
            if not q.is_constant():
                g = p.gcd(q)
                if not g.is_one():
                    p = p // g
                    q = q // g
            cp, cq = int(p.content()), int(q.content())
            c = math.gcd(cp, cq)
            if c > 1:
                p = p // c
                q = q // c
            if q.leading_coefficient() < 0:
                p, q = -p, -q
        self.ring, self.mono, self.p, self.q = ring, tuple(mono), p, q

    @classmethod
    def _raw(cls, ring: Ring, mono, p, q) -> "RationalExpr":
        obj = object.__new__(cls)
        obj.ring, obj.mono, obj.p, obj.q = ring, tuple(mono), p, q
        return obj

    # -- coercion ------------------------------------------------------------
    def _coerce(self, other) -> tuple["RationalExpr", "RationalExpr"]:
        if isinstance(other, (int, Fraction)):
            return self, self.ring.const(other)
        if not isinstance(other, RationalExpr):
            raise TypeError(f"cannot combine RationalExpr with {type(other).__name__}")
        if other.ring is self.ring:
            return self, other
        ring = self.ring.union(other.ring)
        return self.to_ring(ring), other.to_ring(ring)

    def to_ring(self, ring: Ring) -> "RationalExpr":
        if ring is self.ring:
            return self
        return RationalExpr._raw(ring, ring.remap_mono(self.mono, self.ring),
                                 ring.project(self.p, self.ring), ring.project(self.q, self.ring))

    # -- predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.p.is_zero()

    def is_one(self) -> bool:
        return self.equals(self.ring.one())

    def is_monomial(self) -> bool:
        return self.p.is_constant() and self.q.is_constant() and not self.p.is_zero()

    def is_laurent(self) -> bool:
        return self.q.is_constant()

    # -- arithmetic ----------------------------------------------------------
    def _split_mono(self):
        pos = tuple(max(e, 0) for e in self.mono)
        neg = tuple(max(-e, 0) for e in self.mono)
        return pos, neg

    def __add__(self, other) -> "RationalExpr":
        a, b = self._coerce(other)
        ring = a.ring
        if a.is_zero():
            return b
        if b.is_zero():
            return a
        low = tuple(min(x, y) for x, y in zip(a.mono, b.mono))
        ma = ring.monomial_poly([x - l for x, l in zip(a.mono, low)])
        mb = ring.monomial_poly([y - l for y, l in zip(b.mono, low)])
        if a.q == b.q:
            return RationalExpr(ring, low, ma * a.p + mb * b.p, a.q)
        return RationalExpr(ring, low, ma * a.p * b.q + mb * b.p * a.q, a.q * b.q)

    __radd__ = __add__

    def __neg__(self) -> "RationalExpr":
        return RationalExpr._raw(self.ring, self.mono, -self.p, self.q)

    def __sub__(self, other) -> "RationalExpr":
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other) -> "RationalExpr":
        a, b = self._coerce(other)
        return b + (-a)

    def __mul__(self, other) -> "RationalExpr":
        a, b = self._coerce(other)
        mono = tuple(x + y for x, y in zip(a.mono, b.mono))
        if a.q.is_one() and b.q.is_one():
            return RationalExpr(a.ring, mono, a.p * b.p, a.q, reduce=False)
        if a.q.is_one() and b.q.is_constant() and a.p.is_constant() or \
                b.q.is_one() and a.q.is_constant() and b.p.is_constant():
            return RationalExpr(a.ring, mono, a.p * b.p, a.q * b.q)
        # cross-cancel before multiplying to keep intermediate sizes down
        p1, q2 = _cancel(a.p, b.q)
        p2, q1 = _cancel(b.p, a.q)
        return RationalExpr(a.ring, mono, p1 * p2, q1 * q2, reduce=False)._fix_sign()

    __rmul__ = __mul__

    def _fix_sign(self) -> "RationalExpr":
        if self.q.leading_coefficient() < 0:
            return RationalExpr._raw(self.ring, self.mono, -self.p, -self.q)
        return self

    def inverse(self) -> "RationalExpr":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalExpr._raw(self.ring, tuple(-e for e in self.mono), self.q, self.p)._fix_sign()

    def __truediv__(self, other) -> "RationalExpr":
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> "RationalExpr":
        a, b = self._coerce(other)
        return b * a.inverse()

    def __pow__(self, e: int) -> "RationalExpr":
        if isinstance(e, flint.fmpz):
            e = int(e)
        if not isinstance(e, int):
            raise TypeError("integer exponents only")
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self.ring.one()
        return RationalExpr._raw(self.ring, tuple(x * e for x in self.mono), self.p ** e, self.q ** e)

    # -- equality --------------------------------------------------------------
    def equals(self, other) -> bool:
        """Cross-multiplication test ``f.num * g.den - g.num * f.den == 0``."""
        a, b = self._coerce(other)
        ring = a.ring
        low = tuple(min(x, y) for x, y in zip(a.mono, b.mono))
        ma = ring.monomial_poly([x - l for x, l in zip(a.mono, low)])
        mb = ring.monomial_poly([y - l for y, l in zip(b.mono, low)])
        return (ma * a.p * b.q - mb * b.p * a.q).is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, RationalExpr)):
            return self.equals(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.mono, str(self.p), str(self.q)))

    # -- structure -------------------------------------------------------------
    @property
    def num(self) -> LaurentPoly:
        pos, _ = self._split_mono()
        return LaurentPoly(self.ring, pos, self.p)

    @property
    def den(self) -> LaurentPoly:
        _, neg = self._split_mono()
        return LaurentPoly(self.ring, neg, self.q)

    def as_laurent(self) -> LaurentPoly:
        if not self.q.is_constant():
            raise ValueError("not a Laurent polynomial")
        c = int(self.q.coefficient(0)) if self.ring.nvars else int(self.q.coefficient(0))
        p = self.p
        if c != 1:
            quo, rem = divmod(p, c)
            if not rem.is_zero():
                raise ValueError("non-integral Laurent polynomial")
            p = quo
        return LaurentPoly(self.ring, self.mono, p)

    def monomial_exponents(self) -> dict[VarId, int]:
        """Exponents of a Laurent monomial ``c * x^e`` (raises otherwise)."""
        if not self.is_monomial():
            raise ValueError(f"not a monomial: {self}")
        return {v: e for v, e in zip(self.ring.vars, self.mono) if e}

    def monomial_coefficient(self) -> Fraction:
        if not self.is_monomial():
            raise ValueError("not a monomial")
        return Fraction(int(self.p.coefficient(0)), int(self.q.coefficient(0)))

    def variables(self) -> set[VarId]:
        used = set()
        for j, v in enumerate(self.ring.vars):
            if self.mono[j]:
                used.add(v)
        degs_p = self.p.degrees() if self.ring.nvars else ()
        degs_q = self.q.degrees() if self.ring.nvars else ()
        for j, v in enumerate(self.ring.vars):
            if (degs_p and degs_p[j] > 0) or (degs_q and degs_q[j] > 0):
                used.add(v)
        return used

    def size(self) -> int:
        return len(self.p) + len(self.q)

    # -- calculus --------------------------------------------------------------
    def euler_derivative(self, v: VarId) -> "RationalExpr":
        """``u * df/du`` for the variable ``u = v``."""
        ring = self.ring
        if v not in ring.index or self.is_zero():
            return ring.zero()
        j = ring.index[v]
        u = ring.ctx.gens()[j]
        dp = self.p.derivative(j) * u
        dq = self.q.derivative(j) * u
        # f = x^e p / q  =>  u f' = f * (e + u p'/p - u q'/q)
        num = self.mono[j] * self.p * self.q + dp * self.q - self.p * dq
        return RationalExpr(ring, self.mono, num, self.q * self.q)

    # -- substitution / evaluation ------------------------------------------------
    def substitute(self, mapping: Mapping[VarId, "RationalExpr"], target: Ring | None = None) -> "RationalExpr":
        """Field homomorphism ``x_v -> mapping[v]``; unmapped variables stay put."""
        images = list(mapping.values())
        ring = target or (images[0].ring if images else self.ring)
        for img in images:
            ring = ring.union(img.ring)
        full: list[RationalExpr] = []
        for v in self.ring.vars:
            if v in mapping:
                full.append(mapping[v].to_ring(ring))
            else:
                if v not in ring.index:
                    ring = ring.union(Ring.get((v,)))
                full.append(None)  # type: ignore[arg-type]
        full = [f.to_ring(ring) if f is not None else ring.var(v)
                for f, v in zip(full, self.ring.vars)]
        return _subst_poly(self.p, self.ring, full, ring) * _mono_image(self.mono, full, ring) \
            / _subst_poly(self.q, self.ring, full, ring)

    def evaluate(self, point: Mapping[VarId, Scalar]) -> Fraction:
        """Exact value at a rational point."""
        vals = [Fraction(point[v]) if v in point else None for v in self.ring.vars]

        def ev(poly) -> Fraction:
            total = Fraction(0)
            for e, c in poly.terms():
                t = Fraction(int(c))
                for j, k in enumerate(e):
                    if k:
                        if vals[j] is None:
                            raise KeyError(self.ring.vars[j])
                        t *= vals[j] ** int(k)
                total += t
            return total

        mono = Fraction(1)
        for j, k in enumerate(self.mono):
            if k:
                if vals[j] is None:
                    raise KeyError(self.ring.vars[j])
                mono *= vals[j] ** int(k)
        den = ev(self.q)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at point")
        return mono * ev(self.p) / den

    # -- rendering ----------------------------------------------------------------
    def _fmt_poly(self, poly, mono: Sequence[int]) -> str:
        terms = sorted(poly.terms(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))
        out = []
        for e, c in terms:
            factors = []
            for v, k in zip(self.ring.vars, [a + b for a, b in zip(e, mono)] if mono else e):
                if k == 1:
                    factors.append(str(v))
                elif k:
                    factors.append(f"{v}^{k}")
            c = int(c)
            body = "*".join(factors)
            if not body:
                out.append(str(c))
            elif c == 1:
                out.append(body)
            elif c == -1:
                out.append("-" + body)
            else:
                out.append(f"{c}*{body}")
        s = " + ".join(out).replace("+ -", "- ")
        return s or "0"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pos, neg = self._split_mono()
        num = self._fmt_poly(self.p, pos)
        if self.q.is_one() and not any(neg):
            return num
        den = self._fmt_poly(self.q, neg)
        if len(self.p) > 1:
            num = f"({num})"
        if len(self.q) > 1 or any(neg) and ("*" in den or "^" in den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalExpr({self})"


def _cancel(p, q):
    """Remove the common polynomial factor of ``p`` and ``q``."""
    if q.is_constant() or p.is_constant():
        return p, q
    g = p.gcd(q)
    if g.is_one():
        return p, q
    return p // g, q // g


def _mono_image(mono: Sequence[int], images: Sequence[RationalExpr], ring: Ring) -> RationalExpr:
    out = ring.one()
    for e, img in zip(mono, images):
        if e:
            out = out * img ** e
    return out


def _subst_poly(poly, source: Ring, images: Sequence[RationalExpr], ring: Ring) -> RationalExpr:
    """Image of a polynomial under a substitution, sharing one common denominator."""
    if poly.is_zero():
        return ring.zero()
    if source.nvars == 0:
        return ring.const(int(poly.coefficient(0)))
    terms = list(poly.terms())
    nv = source.nvars
    degs = [max(e[j] for e, _ in terms) for j in range(nv)]
    # images as (mono, num poly, den poly); common denominator prod den^deg
    nums, dens, monos = [], [], []
    for j in range(nv):
        img = images[j]
        nums.append(img.p)
        dens.append(img.q)
        monos.append(img.mono)
    low = [0] * ring.nvars
    for e, _ in terms:
        for t in range(ring.nvars):
            low[t] = min(low[t], sum(e[j] * monos[j][t] for j in range(nv) if e[j]))
    pow_cache: dict[tuple[int, int, int], object] = {}

    def pw(j: int, which: int, k: int):
        key = (j, which, k)
        r = pow_cache.get(key)
        if r is None:
            base = nums[j] if which == 0 else dens[j]
            r = base ** k
            pow_cache[key] = r
        return r

    total = ring.zero_poly
    for e, c in terms:
        shift = [-l for l in low]
        term = ring.one_poly * int(c)
        for j in range(nv):
            if degs[j] == 0:
                continue
            k = e[j]
            if k:
                term = term * pw(j, 0, k)
                for t in range(ring.nvars):
                    shift[t] += k * monos[j][t]
            if degs[j] - k and not dens[j].is_one():
                term = term * pw(j, 1, degs[j] - k)
        total += term * ring.monomial_poly(shift)
    common = ring.one_poly
    for j in range(nv):
        if degs[j] and not dens[j].is_one():
            common = common * pw(j, 1, degs[j])
    return RationalExpr(ring, tuple(low), total, common)


def prod(items: Iterable[RationalExpr], ring: Ring) -> RationalExpr:
    out = ring.one()
    for it in items:
        out = out * it
    return out


# ---------------------------------------------------------------------------
# log-canonical Poisson structures
# ---------------------------------------------------------------------------

class StructureMatrix:
    """Skew-symmetric constants ``c_ab`` of a log-canonical bracket.

    Entries are kept as integers ``2 c_ab`` (``doubled``) so that the
    half-integer constants of the s-variable brackets stay exact.
    """

    __slots__ = ("vars", "doubled")

    def __init__(self, variables: Sequence[VarId], doubled: Mapping[tuple[VarId, VarId], int] | None = None):
        self.vars = tuple(variables)
        self.doubled: dict[tuple[VarId, VarId], int] = {}
        for (a, b), val in (doubled or {}).items():
            if val:
                self.doubled[(a, b)] = int(val)
        for (a, b), val in list(self.doubled.items()):
            if self.doubled.get((b, a), 0) != -val:
                raise ValueError(f"structure matrix not skew-symmetric at {a}, {b}")

    @classmethod
    def from_values(cls, variables: Sequence[VarId], values: Mapping[tuple[VarId, VarId], Fraction | int]) -> "StructureMatrix":
        doubled = {}
        for (a, b), val in values.items():
            val2 = Fraction(val) * 2
            if val2.denominator != 1:
                raise ValueError("structure constants must be half-integers")
            doubled[(a, b)] = int(val2)
        return cls(variables, doubled)

    @classmethod
    def from_exchange_matrix(cls, variables: Sequence[VarId], eps: Sequence[Sequence[int]]) -> "StructureMatrix":
        doubled = {}
        for a, va in enumerate(variables):
            for b, vb in enumerate(variables):
                if eps[a][b]:
                    doubled[(va, vb)] = 2 * eps[a][b]
        return cls(variables, doubled)

    def value(self, a: VarId, b: VarId) -> Fraction:
        return Fraction(self.doubled.get((a, b), 0), 2)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructureMatrix):
            return NotImplemented
        return set(self.vars) == set(other.vars) and self.doubled == other.doubled

    def differences(self, other: "StructureMatrix") -> list[tuple[VarId, VarId, Fraction, Fraction]]:
        keys = set(self.doubled) | set(other.doubled)
        return sorted((a, b, self.value(a, b), other.value(a, b))
                      for a, b in keys if self.doubled.get((a, b), 0) != other.doubled.get((a, b), 0))

    def as_matrix(self) -> list[list[Fraction]]:
        return [[self.value(a, b) for b in self.vars] for a in self.vars]


def poisson_bracket(f: RationalExpr, g: RationalExpr, c: StructureMatrix) -> RationalExpr:
    """``{f, g} = sum_ab c_ab u_a u_b (df/du_a)(dg/du_b)``."""
    f, g = f._coerce(g)
    ring = f.ring
    fv, gv = f.variables(), g.variables()
    df = {a: f.euler_derivative(a) for a in fv}
    dg = {b: g.euler_derivative(b) for b in gv}
    acc: dict[int, RationalExpr] = {}
    total = ring.zero()
    for (a, b), val in c.doubled.items():
        if a in df and b in dg:
            total = total + df[a] * dg[b] * Fraction(val, 2)
    del acc
    return total


def monomial_map_structure(M: Mapping[VarId, Mapping[VarId, int]], c: StructureMatrix) -> StructureMatrix:
    """Pushforward ``M c M^T`` for the monomial map ``x_a = prod_b u_b^{M_ab}``."""
    targets = list(M)
    doubled: dict[tuple[VarId, VarId], int] = {}
    rows = {a: {b: e for b, e in M[a].items() if e} for a in targets}
    # (M c)_a,v = sum_b M_ab c_bv
    cols: dict[VarId, dict[VarId, int]] = {}
    for (b, v), val in c.doubled.items():
        cols.setdefault(b, {})[v] = val
    for a in targets:
        mc: dict[VarId, int] = {}
        for b, e in rows[a].items():
            for v, val in cols.get(b, {}).items():
                mc[v] = mc.get(v, 0) + e * val
        for a2 in targets:
            s = sum(mc.get(v, 0) * e for v, e in rows[a2].items())
            if s:
                doubled[(a, a2)] = s
    return StructureMatrix(targets, doubled)


# ---------------------------------------------------------------------------
# truncated power series
# ---------------------------------------------------------------------------

class TruncatedSeries:
    """Power series in designated "small" symbols ``t_1..t_r`` truncated at grade ``K``.

    Terms map an exponent tuple over the small symbols (non-negative, total
    degree ``< K``) to a :class:`RationalExpr` coefficient over the base ring.
    """

    __slots__ = ("symbols", "order", "terms", "base")

    def __init__(self, symbols: Sequence[VarId], order: int, base: Ring,
                 terms: Mapping[tuple[int, ...], RationalExpr] | None = None):
        if order < 1:
            raise ValueError("truncation order must be positive")
        self.symbols = tuple(symbols)
        self.order = order
        self.base = base
        self.terms: dict[tuple[int, ...], RationalExpr] = {}
        for e, c in (terms or {}).items():
            if sum(e) < order and not c.is_zero():
                prev = self.terms.get(e)
                self.terms[e] = c if prev is None else prev + c
        self.terms = {e: c for e, c in self.terms.items() if not c.is_zero()}

    @property
    def _zero_exp(self) -> tuple[int, ...]:
        return (0,) * len(self.symbols)

    @classmethod
    def constant(cls, symbols, order, base: Ring, c: RationalExpr | int) -> "TruncatedSeries":
        if isinstance(c, (int, Fraction)):
            c = base.const(c)
        return cls(symbols, order, base, {(0,) * len(symbols): c})

    @classmethod
    def symbol(cls, symbols, order, base: Ring, s: VarId, coeff: RationalExpr | None = None) -> "TruncatedSeries":
        e = tuple(int(x == s) for x in symbols)
        return cls(symbols, order, base, {e: coeff if coeff is not None else base.one()})

    def _like(self, terms) -> "TruncatedSeries":
        return TruncatedSeries(self.symbols, self.order, self.base, terms)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return self._like(out)

    def __neg__(self) -> "TruncatedSeries":
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c: RationalExpr) -> "TruncatedSeries":
        return self._like({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_mul(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def grade_part(self, g: int) -> dict[tuple[int, ...], RationalExpr]:
        return {e: c for e, c in self.terms.items() if sum(e) == g}

    def min_grade(self) -> int | None:
        return min((sum(e) for e in self.terms), default=None)

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, {len(self.terms)} terms)"


def series_truncate(s: TruncatedSeries, K: int) -> TruncatedSeries:
    return TruncatedSeries(s.symbols, min(K, s.order), s.base, s.terms)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    if a.symbols != b.symbols:
        raise ValueError("series over different symbols")
    K = min(a.order, b.order)
    out: dict[tuple[int, ...], RationalExpr] = {}
    for e1, c1 in a.terms.items():
        g1 = sum(e1)
        if g1 >= K:
            continue
        for e2, c2 in b.terms.items():
            if g1 + sum(e2) >= K:
                continue
            e = tuple(x + y for x, y in zip(e1, e2))
            v = c1 * c2
            out[e] = out[e] + v if e in out else v
    return TruncatedSeries(a.symbols, K, a.base, out)


def series_inverse(s: TruncatedSeries, K: int | None = None) -> TruncatedSeries:
    """Inverse modulo grade ``K`` via ``1/(c(1+u)) = c^{-1} sum (-u)^j``."""
    K = s.order if K is None else min(K, s.order)
    z = s._zero_exp
    c0 = s.terms.get(z)
    if c0 is None or c0.is_zero():
        raise ZeroDivisionError("constant term not invertible")
    inv0 = c0.inverse()
    u = TruncatedSeries(s.symbols, K, s.base,
                        {e: c * inv0 for e, c in s.terms.items() if e != z})
    result = TruncatedSeries.constant(s.symbols, K, s.base, 1)
    power = TruncatedSeries.constant(s.symbols, K, s.base, 1)
    for _ in range(1, K):
        power = series_mul(power, -u)
        if power.is_zero():
            break
        result = result + power
    return result.scale(inv0)
