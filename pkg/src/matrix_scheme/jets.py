"""Truncated Taylor-polynomial calculus.

A :class:`JetRing` is R[t_1..t_n]/(t)^{k+1} where t = y - center. Monomials
are indexed in graded-lex order (by total degree, then by exponent tuple
descending), so y1 precedes y2 and serialization is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Sequence

from .core.matrix import rref
from .core.poly import MultiPoly
from .core.scalar import EXACT, mode_of, normalize
from .errors import ModeMismatch, RingMismatch, VariableCountMismatch


def graded_monomials(n: int, k: int) -> list[tuple]:
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    for deg in range(k + 1):
        rec([], deg, n)
    return out


@dataclass(frozen=True)
class JetRing:
    n: int
    k: int
    center: tuple = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise VariableCountMismatch("jet rings need at least one variable")
        if self.k < 0:
            raise ValueError("jet order must be nonnegative")
        center = self.center if self.center is not None else (0,) * self.n
        if len(center) != self.n:
            raise VariableCountMismatch("center has the wrong number of coordinates")
        object.__setattr__(self, "center", tuple(normalize(c) if mode_of(c) == EXACT else c
                                                 for c in center))

    @cached_property
    def basis(self) -> tuple:
        return tuple(graded_monomials(self.n, self.k))

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.basis)}

    @property
    def size(self) -> int:
        return len(self.basis)

    @cached_property
    def _table(self) -> list:
        """_table[a][b] = index of basis[a] * basis[b], or None when truncated."""
        idx = self.index
        return [[idx.get(tuple(x + y for x, y in zip(ea, eb))) for eb in self.basis] for ea in self.basis]

    def zero(self) -> "Jet":
        return Jet(self, (Fraction(0),) * self.size)

    def one(self) -> "Jet":
        return self.monomial((0,) * self.n)

    def monomial(self, exp: tuple, coeff=Fraction(1)) -> "Jet":
        c = [Fraction(0)] * self.size
        if exp in self.index:
            c[self.index[exp]] = coeff
        return Jet(self, tuple(c))

    def coordinate(self, i: int) -> "Jet":
        """The local coordinate t_i = y_i - center_i."""
        exp = [0] * self.n
        exp[i] = 1
        return self.monomial(tuple(exp))

    def with_order(self, k: int) -> "JetRing":
        return JetRing(self.n, k, self.center)


@dataclass(frozen=True)
class Jet:
    ring: JetRing
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.ring.size:
            raise VariableCountMismatch("coefficient vector does not match the ring's basis")

    def _same(self, other: "Jet"):
        if self.ring != other.ring:
            raise RingMismatch("jets live in different rings")

    def __add__(self, other: "Jet") -> "Jet":
        self._same(other)
        return Jet(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Jet") -> "Jet":
        self._same(other)
        return Jet(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(self.ring, tuple(other * a for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def terms(self) -> dict:
        return {e: c for e, c in zip(self.ring.basis, self.coeffs) if c}

    def restrict(self, k: int) -> "Jet":
        """Drop everything above total degree k (the tower map)."""
        if k > self.ring.k:
            raise ValueError("cannot raise the order of a jet")
        small = self.ring.with_order(k)
        return Jet(small, tuple(self.coeffs[self.ring.index[e]] for e in small.basis))

    def as_local_poly(self) -> MultiPoly:
        """The jet as a polynomial in the local coordinates t."""
        return MultiPoly(self.ring.n, self.terms())


def truncate(f: MultiPoly, ring: JetRing) -> Jet:
    """Taylor coefficients of f at ring.center up to total degree ring.k."""
    if f.n != ring.n:
        raise VariableCountMismatch(f"polynomial in {f.n} variables, ring has {ring.n}")
    coeffs = [Fraction(0)] * ring.size
    idx = ring.index
    k = ring.k
    for exp, c in f.terms.items():
        # expand c * prod_i (q_i + t_i)^{e_i}, keeping terms with sum(j) <= k
        partial = [((), c)]
        for q, e in zip(ring.center, exp):
            nxt = []
            for js, coef in partial:
                used = sum(js)
                for j in range(min(e, k - used) + 1):
                    w = coef * comb(e, j)
                    if j < e:
                        w = w * q ** (e - j)
                    if w:
                        nxt.append((js + (j,), w))
            partial = nxt
        for js, coef in partial:
            coeffs[idx[js]] += coef
    return Jet(ring, tuple(normalize(x) if mode_of(x) == EXACT else x for x in coeffs))


def jet_mul(a: Jet, b: Jet) -> Jet:
    a._same(b)
    table = a.ring._table
    out = [Fraction(0)] * a.ring.size
    nb = [(j, y) for j, y in enumerate(b.coeffs) if y]
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        row = table[i]
        for j, y in nb:
            k = row[j]
            if k is not None:
                out[k] += x * y
    return Jet(a.ring, tuple(out))


@dataclass(frozen=True)
class JetIdeal:
    ring: JetRing
    basis: tuple   # echelon rows (tuples) spanning the ideal

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def quotient_dim(self) -> int:
        return self.ring.size - self.dim

    def jets(self) -> list[Jet]:
        return [Jet(self.ring, row) for row in self.basis]


def _echelon(rows: list) -> tuple:
    if not rows:
        return ()
    red, _ = rref(rows)
    return tuple(tuple(r) for r in red)


def jet_ideal(generators: Sequence[Jet], ring: JetRing | None = None) -> JetIdeal:
    """Ideal generated by the jets, saturated under multiplication by the coordinates."""
    if not generators:
        if ring is None:
            raise ValueError("need a ring for an empty generator list")
        return JetIdeal(ring, ())
    ring = ring or generators[0].ring
    for g in generators:
        if g.ring != ring:
            raise RingMismatch("generators live in different rings")
    if any(mode_of(c) != EXACT for g in generators for c in g.coeffs):
        raise ModeMismatch("jet ideals are computed exactly")
    coords = [ring.coordinate(i) for i in range(ring.n)]
    basis = _echelon([list(g.coeffs) for g in generators])
    while True:
        rows = [list(b) for b in basis]
        for b in basis:
            for t in coords:
                rows.append(list(jet_mul(Jet(ring, b), t).coeffs))
        new = _echelon(rows)
        if len(new) == len(basis):
            return JetIdeal(ring, new)
        basis = new


def jet_membership(f: Jet, ideal: JetIdeal) -> bool:
    if f.ring != ideal.ring:
        raise RingMismatch("jet and ideal live in different rings")
    if f.is_zero():
        return True
    if not ideal.basis:
        return False
    return len(rref([list(r) for r in ideal.basis] + [list(f.coeffs)])[1]) == ideal.dim
