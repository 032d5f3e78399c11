"""Point and jet closures of polynomial ideals with finite zero sets.

For an ideal I with finite zero set Z, ``f`` lies in the point closure of I
when it vanishes on Z, and in the k-jet closure when its order-k Taylor
polynomial at every x in Z lies in the order-k truncation of I at x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core.matrix import rref
from .core.poly import (MultiPoly, count_real_roots, poly_gcd, rational_roots,
                        remainder_factor)
from .errors import InfiniteZeroSet, SplitFailure, VariableCountMismatch
from .jets import JetRing, jet_ideal, jet_membership, truncate


@dataclass(frozen=True)
class IdealPresentation:
    n: int
    gens: tuple
    zeros: tuple

    def __post_init__(self):
        for g in self.gens:
            if g.n != self.n:
                raise VariableCountMismatch("generator has the wrong number of variables")
        for z in self.zeros:
            if len(z) != self.n:
                raise VariableCountMismatch(f"zero {z} has the wrong number of coordinates")
            for g in self.gens:
                if g.evaluate(z) != 0:
                    raise ValueError(f"generator {g} does not vanish at {z}")


def ideal(gens: Sequence[MultiPoly], zeros: Sequence[Sequence] | None = None) -> IdealPresentation:
    """Build a presentation; the zero set is computed when univariate and not supplied."""
    gens = tuple(gens)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    if zeros is None:
        if n != 1:
            raise ValueError("zero sets of multivariate ideals must be supplied")
        zeros = [(z,) for z in zero_set(gens)]
    zeros = tuple(tuple(Fraction(c) for c in z) for z in zeros)
    return IdealPresentation(n, gens, zeros)


def zero_set(gens: Sequence[MultiPoly]) -> list[Fraction]:
    """Common rational zeros of univariate generators (via their gcd)."""
    g = MultiPoly.zero(1)
    for p in gens:
        if p.n != 1:
            raise VariableCountMismatch("zero_set computes univariate zero sets only")
        g = poly_gcd(g, p)
    if g.is_zero():
        raise InfiniteZeroSet("all generators vanish identically")
    if g.total_degree() == 0:
        return []
    roots, rem = rational_roots(g)
    if rem and count_real_roots(remainder_factor(g, roots)) > 0:
        raise SplitFailure(f"gcd {g} has irrational real roots")
    return [r for r, _ in roots]


@dataclass(frozen=True)
class MembershipVerdict:
    query: MultiPoly
    kind: str            # "point" or "jet"
    k: int | None
    verdict: bool
    witness: tuple | None = None   # (point, exponent of a surviving jet coordinate)

    def __post_init__(self):
        if not self.verdict and self.witness is None:
            raise ValueError("a false verdict needs a witness")


def in_point_closure(f: MultiPoly, zeros: Sequence[Sequence]) -> MembershipVerdict:
    for z in zeros:
        if f.evaluate(tuple(z)) != 0:
            return MembershipVerdict(f, "point", None, False, (tuple(z), None))
    return MembershipVerdict(f, "point", None, True)


def _jet_witness(jet, ideal_) -> tuple | None:
    """First basis monomial on which the jet differs from its reduction mod the ideal."""
    rows = [list(r) for r in ideal_.basis]
    red, pivots = rref(rows) if rows else ([], [])
    v = list(jet.coeffs)
    for row, p in zip(red, pivots):
        c = v[p]
        if c:
            v = [x - c * y for x, y in zip(v, row)]
    for e, c in zip(jet.ring.basis, v):
        if c:
            return e
    return None


def in_k_jet_closure(f: MultiPoly, ideal_: IdealPresentation, k: int) -> MembershipVerdict:
    if f.n != ideal_.n:
        raise VariableCountMismatch("query polynomial has the wrong number of variables")
    for z in ideal_.zeros:
        ring = JetRing(ideal_.n, k, z)
        jid = jet_ideal([truncate(g, ring) for g in ideal_.gens], ring)
        jet = truncate(f, ring)
        if not jet_membership(jet, jid):
            return MembershipVerdict(f, "jet", k, False, (tuple(z), _jet_witness(jet, jid)))
    return MembershipVerdict(f, "jet", k, True)


def minimal_jet_order(f: MultiPoly, ideal_: IdealPresentation, k_max: int) -> int | None:
    """Least k <= k_max whose k-jet closure excludes f, or None."""
    for k in range(k_max + 1):
        if not in_k_jet_closure(f, ideal_, k).verdict:
            return k
    return None


@dataclass(frozen=True)
class HierarchyReport:
    k_max: int
    rows: tuple           # per sample: (f, point verdict, [jet verdicts k = 0..k_max])
    violations: tuple     # (f, description)

    @property
    def ok(self) -> bool:
        return not self.violations


def hierarchy_check(ideal_: IdealPresentation, sample_fs: Sequence[MultiPoly], k_max: int = 6) -> HierarchyReport:
    """Closures must shrink as k grows and all sit inside the point closure."""
    rows = []
    violations = []
    for f in sample_fs:
        point = in_point_closure(f, ideal_.zeros).verdict
        jets = [in_k_jet_closure(f, ideal_, k).verdict for k in range(k_max + 1)]
        rows.append((f, point, tuple(jets)))
        for k in range(1, k_max + 1):
            if jets[k] and not jets[k - 1]:
                violations.append((f, f"in {k}-jet closure but not in {k - 1}-jet closure"))
        if any(jets) and not point:
            violations.append((f, "in a jet closure but not in the point closure"))
    return HierarchyReport(k_max, tuple(rows), tuple(violations))
