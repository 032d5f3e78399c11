"""Finite-dimensional commutative R-algebras and their Weil-algebra factors.

An algebra is given by a basis e_0..e_{d-1} and structure constants
``mul[i][j][k]`` with ``e_i e_j = sum_k mul[i][j][k] e_k``. Decomposition
into local factors goes through the nilradical (kernel of the trace form
tr(L_a L_b), valid in characteristic 0), splits the semisimple quotient by
Lagrange idempotents built from the rational eigenvalues of multiplication
operators, and lifts the resulting idempotents back with the Newton step
e -> 3e^2 - 2e^3.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Sequence

import numpy as np

from .core.matrix import DenseMatrix, char_poly, inverse, kernel_basis, rref
from .core.poly import (MultiPoly, count_real_roots, rational_roots, remainder_factor,
                        squarefree_decomposition)
from .core.scalar import DEFAULT_TOL, EXACT, mode_of, normalize
from .errors import (AlgebraLawViolation, ComplexResidue, DimensionMismatch, ModeMismatch,
                     NotContainingUnit, SplitFailure)

Vector = tuple


@dataclass(frozen=True, eq=False)
class FiniteCommAlgebra:
    dim: int
    mul: tuple
    unit: tuple
    mode: str = EXACT
    _sparse: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise DimensionMismatch("algebra dimension must be positive")
        conv = (lambda x: normalize(x)) if self.mode == EXACT else (lambda x: x)
        if self.mode == EXACT and any(mode_of(x) != EXACT for x in _flat(self.mul)):
            raise ModeMismatch("numeric structure constant in exact algebra")
        mul = tuple(tuple(tuple(conv(x) for x in self.mul[i][j]) for j in range(d)) for i in range(d))
        if len(self.mul) != d or any(len(row) != d or any(len(v) != d for v in row) for row in self.mul):
            raise DimensionMismatch("structure constants must have shape d x d x d")
        if len(self.unit) != d:
            raise DimensionMismatch("unit has the wrong length")
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "unit", tuple(conv(x) for x in self.unit))
        object.__setattr__(self, "_sparse", [[[(k, c) for k, c in enumerate(mul[i][j]) if c]
                                              for j in range(d)] for i in range(d)])

    def __eq__(self, other):
        if not isinstance(other, FiniteCommAlgebra):
            return NotImplemented
        return (self.dim, self.mul, self.unit, self.mode) == (other.dim, other.mul, other.unit, other.mode)

    def __hash__(self):
        return hash((self.dim, self.mul, self.unit))

    def zero(self) -> Vector:
        return (Fraction(0) if self.mode == EXACT else 0.0,) * self.dim

    def basis_vector(self, i: int) -> Vector:
        v = list(self.zero())
        v[i] = Fraction(1) if self.mode == EXACT else 1.0
        return tuple(v)

    def product(self, u: Sequence, v: Sequence) -> Vector:
        out = list(self.zero())
        nu = [(i, x) for i, x in enumerate(u) if x]
        nv = [(j, y) for j, y in enumerate(v) if y]
        for i, x in nu:
            row = self._sparse[i]
            for j, y in nv:
                xy = x * y
                for k, c in row[j]:
                    out[k] += xy * c
        return tuple(out)

    def power(self, u: Sequence, k: int) -> Vector:
        out = self.unit
        for _ in range(k):
            out = self.product(out, u)
        return out

    def mult_matrix(self, u: Sequence) -> DenseMatrix:
        """Matrix of x -> u*x in the basis (column j is u*e_j)."""
        cols = [self.product(u, self.basis_vector(j)) for j in range(self.dim)]
        return DenseMatrix.from_columns(cols, self.mode)


def _flat(mul):
    for row in mul:
        for v in row:
            yield from v


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _is_zero(u, tol=None):
    if tol is None:
        return not any(u)
    return all(abs(x) <= tol for x in u)


# --- verdicts -----------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraVerdict:
    ok: bool
    law: str | None = None
    indices: tuple | None = None

    def __bool__(self):
        return self.ok


def verify_algebra(a: FiniteCommAlgebra, tol: float | None = None) -> AlgebraVerdict:
    """Check commutativity, the unit law and associativity on basis tuples."""
    d = a.dim
    eq = (lambda u, v: u == v) if a.mode == EXACT else (lambda u, v: _is_zero(_sub(u, v), tol or DEFAULT_TOL))
    for i in range(d):
        for j in range(i + 1, d):
            if not eq(a.mul[i][j], a.mul[j][i]):
                return AlgebraVerdict(False, "commutativity", (i, j))
    for i in range(d):
        e = a.basis_vector(i)
        if not eq(a.product(a.unit, e), e):
            return AlgebraVerdict(False, "unit", (i,))
    for i in range(d):
        for j in range(i, d):
            ij = a.mul[i][j]
            for k in range(d):
                lhs = a.product(ij, a.basis_vector(k))
                rhs = a.product(a.basis_vector(i), a.mul[j][k])
                if not eq(lhs, rhs):
                    return AlgebraVerdict(False, "associativity", (i, j, k))
    return AlgebraVerdict(True)


# --- linear-algebra helpers ----------------------------------------------------

class _Span:
    """Incrementally maintained exact echelon basis of a subspace."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, list] = {}   # pivot column -> row with 1 at pivot

    def reduce(self, v) -> list:
        v = list(v)
        for p, row in self.rows.items():
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        piv = v[p]
        v = [x / piv for x in v]
        for q, row in self.rows.items():
            c = row[p]
            if c:
                self.rows[q] = [x - c * y for x, y in zip(row, v)]
        self.rows[p] = v
        return True

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def __len__(self):
        return len(self.rows)


class _Coordinates:
    """Coordinates of vectors with respect to an independent list (exact)."""

    def __init__(self, vectors: Sequence[Sequence]):
        self.vectors = [tuple(v) for v in vectors]
        m = len(self.vectors)
        # pivot columns of the row-stacked vectors pin the coordinates down
        _, pivots = rref([list(v) for v in self.vectors])
        if len(pivots) != m:
            raise DimensionMismatch("vectors are linearly dependent")
        self.positions = pivots
        sub = DenseMatrix([[v[p] for v in self.vectors] for p in pivots])
        self.inv = inverse(sub)

    def __call__(self, v: Sequence) -> tuple:
        rhs = [v[p] for p in self.positions]
        return tuple(normalize(sum((self.inv.entries[i][j] * rhs[j] for j in range(len(rhs))), Fraction(0)))
                     for i in range(len(rhs)))


def restrict(a: FiniteCommAlgebra, basis: Sequence[Sequence], unit_coords: Sequence | None = None) -> FiniteCommAlgebra:
    """The algebra structure on span(basis), which must be multiplicatively closed."""
    coords = _Coordinates(basis)
    m = len(basis)
    mul = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            c = coords(a.product(basis[i], basis[j]))
            mul[i][j] = mul[j][i] = c
    unit = tuple(unit_coords) if unit_coords is not None else coords(a.unit)
    return FiniteCommAlgebra(m, tuple(tuple(r) for r in mul), unit)


def trace_vector(a: FiniteCommAlgebra) -> tuple:
    return tuple(sum((a.mul[k][j][j] for j in range(a.dim)), Fraction(0) if a.mode == EXACT else 0.0)
                 for k in range(a.dim))


def trace_form(a: FiniteCommAlgebra) -> DenseMatrix:
    """Gram matrix tr(L_{e_i} L_{e_j}) = tr(L_{e_i e_j})."""
    t = trace_vector(a)
    d = a.dim
    zero = Fraction(0) if a.mode == EXACT else 0.0
    rows = [[sum((c * t[k] for k, c in a._sparse[i][j]), zero) for j in range(d)] for i in range(d)]
    return DenseMatrix(rows, a.mode)


def nilradical(a: FiniteCommAlgebra, tol: float | None = None) -> list[Vector]:
    """Basis of the nilradical (kernel of the trace form)."""
    form = trace_form(a)
    if a.mode == EXACT:
        return kernel_basis(form)
    return [tuple(x.real for x in v) for v in kernel_basis(form, tol or DEFAULT_TOL)]


def ideal_power_dims(a: FiniteCommAlgebra, ideal: Sequence[Sequence]) -> list[int]:
    """dim(m^1), dim(m^2), ... down to the first 0, for an ideal m of nilpotents."""
    d = a.dim
    if not ideal:
        return [0]
    level = _Span(d)
    for v in ideal:
        level.add(v)
    dims = [len(level)]
    # m^2 from all pairwise products; afterwards m^{j+1} = m^j * (generators of m mod m^2)
    sq = _Span(d)
    basis = [tuple(r) for r in level.rows.values()]
    for i, u in enumerate(basis):
        for v in basis[i:]:
            sq.add(a.product(u, v))
    gens_span = _Span(d)
    for r in sq.rows.values():
        gens_span.add(r)
    gens = [v for v in basis if gens_span.add(v)]
    current = sq
    while len(current):
        dims.append(len(current))
        nxt = _Span(d)
        rows = [tuple(r) for r in current.rows.values()]
        for u in rows:
            for g in gens:
                nxt.add(a.product(u, g))
        current = nxt
    dims.append(0)
    return dims


# --- Weil algebras -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeilAlgebra:
    algebra: FiniteCommAlgebra
    max_ideal: tuple
    nilpotency: int

    @property
    def dim(self) -> int:
        return self.algebra.dim


def nilpotency_index(w: WeilAlgebra | FiniteCommAlgebra, ideal: Sequence[Sequence] | None = None) -> int:
    """Least k >= 1 with m^k = 0."""
    if isinstance(w, WeilAlgebra):
        a, ideal = w.algebra, w.max_ideal
    else:
        a = w
        if ideal is None:
            ideal = nilradical(a)
    return len(ideal_power_dims(a, ideal))


def as_weil(a: FiniteCommAlgebra) -> WeilAlgebra:
    """Wrap an algebra already known to be local with residue field R."""
    if a.mode != EXACT:
        raise ModeMismatch("Weil-algebra recognition runs in exact mode")
    nil = nilradical(a)
    if len(nil) != a.dim - 1:
        raise ValueError(f"not a Weil algebra: semisimple quotient has dimension {a.dim - len(nil)}")
    return WeilAlgebra(a, tuple(nil), nilpotency_index(a, nil))


@dataclass(frozen=True, eq=False)
class AlgebraDecomposition:
    source: FiniteCommAlgebra
    factors: tuple
    idempotents: tuple
    change_of_basis: DenseMatrix   # columns: factor bases in source coordinates, block by block
    blocks: tuple                  # (start, dim) per factor

    def reassemble(self) -> tuple:
        """Structure constants of the direct product, transported to the source basis."""
        d = self.source.dim
        prod_mul = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for (start, m), f in zip(self.blocks, self.factors):
            for i in range(m):
                for j in range(m):
                    for k in range(m):
                        prod_mul[start + i][start + j][start + k] = f.algebra.mul[i][j][k]
        s = self.change_of_basis
        s_inv = inverse(s)
        # e_i = sum_a s_inv[a][i] b_a ; b_a b_b = sum_c prod_mul[a][b][c] b_c ; b_c = sum_k s[k][c] e_k
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                vec = [Fraction(0)] * d
                for a_ in range(d):
                    x = s_inv.entries[a_][i]
                    if not x:
                        continue
                    for b_ in range(d):
                        y = s_inv.entries[b_][j]
                        if not y:
                            continue
                        for c_, z in enumerate(prod_mul[a_][b_]):
                            if z:
                                w = x * y * z
                                for k in range(d):
                                    vec[k] += w * s.entries[k][c_]
                row.append(tuple(normalize(v) for v in vec))
            out.append(tuple(row))
        return tuple(out)


class _Quotient:
    """Semisimple quotient A/N with a complement chosen among standard basis vectors."""

    def __init__(self, a: FiniteCommAlgebra, nil: Sequence[Sequence]):
        self.a = a
        self.span = _Span(a.dim)
        for v in nil:
            self.span.add(v)
        self.free = [i for i in range(a.dim) if i not in self.span.rows]
        self.dim = len(self.free)

    def reduce(self, v) -> tuple:
        r = self.span.reduce(v)
        return tuple(normalize(r[i]) for i in self.free)

    def lift(self, q) -> tuple:
        v = [Fraction(0)] * self.a.dim
        for i, x in zip(self.free, q):
            v[i] = x
        return tuple(v)

    def product(self, p, q) -> tuple:
        return self.reduce(self.a.product(self.lift(p), self.lift(q)))

    def unit(self) -> tuple:
        return self.reduce(self.a.unit)

    def basis(self, i) -> tuple:
        return tuple(Fraction(int(i == j)) for j in range(self.dim))

    def mult_matrix(self, q) -> DenseMatrix:
        return DenseMatrix.from_columns([self.product(q, self.basis(j)) for j in range(self.dim)])


def _split_roots(p: MultiPoly):
    roots, rem = rational_roots(p)
    if rem:
        rest = remainder_factor(p, roots)
        if count_real_roots(rest) < rem:
            raise ComplexResidue(f"a maximal ideal has residue field C (factor {rest})")
        raise SplitFailure(f"minimal polynomial factor {rest} does not split over Q")
    return [lam for lam, _ in roots]


def _lift_idempotent(a: FiniteCommAlgebra, e: tuple) -> tuple:
    while True:
        e2 = a.product(e, e)
        if e2 == e:
            return e
        e3 = a.product(e2, e)
        e = tuple(normalize(3 * x - 2 * y) for x, y in zip(e2, e3))


def decompose(a: FiniteCommAlgebra, check: bool = True) -> AlgebraDecomposition:
    """Split ``a`` into a direct product of Weil algebras."""
    if a.mode != EXACT:
        raise ModeMismatch("decompose runs in exact mode")
    if check:
        verdict = verify_algebra(a)
        if not verdict:
            raise AlgebraLawViolation(f"{verdict.law} fails at basis indices {verdict.indices}")
    nil = nilradical(a)
    quotient = _Quotient(a, nil)
    s = quotient.dim
    if s == 1:
        idems = [a.unit]
    else:
        primitive = [quotient.unit()]
        for i in range(s):
            b = quotient.basis(i)
            lams = _split_roots(char_poly(quotient.mult_matrix(b)))
            if len(lams) < 2:
                continue
            parts = []
            for lam in lams:
                e = quotient.unit()
                for mu in lams:
                    if mu != lam:
                        shifted = tuple(normalize((x - mu * u) / (lam - mu))
                                        for x, u in zip(b, quotient.unit()))
                        e = quotient.product(e, shifted)
                parts.append(e)
            primitive = [g for g in (quotient.product(e, f) for e in primitive for f in parts) if any(g)]
            if len(primitive) == s:
                break
        if len(primitive) != s:
            raise SplitFailure("semisimple quotient did not split into one-dimensional factors")
        idems = [_lift_idempotent(a, quotient.lift(e)) for e in primitive]
    idems.sort(key=lambda e: tuple(-x for x in e))

    factors, columns, blocks = [], [], []
    start = 0
    for e in idems:
        span = _Span(a.dim)
        span.add(e)
        fbasis = [e]
        for n in nil:
            v = a.product(n, e)
            if span.add(v):
                fbasis.append(v)
        local = restrict(a, fbasis, unit_coords=(Fraction(1),) + (Fraction(0),) * (len(fbasis) - 1))
        ideal = tuple(local.basis_vector(i) for i in range(1, local.dim))
        factors.append(WeilAlgebra(local, ideal, nilpotency_index(local, ideal)))
        columns.extend(fbasis)
        blocks.append((start, len(fbasis)))
        start += len(fbasis)
    if start != a.dim:
        raise AssertionError("factor dimensions do not add up to the source dimension")
    return AlgebraDecomposition(a, tuple(factors), tuple(idems),
                                DenseMatrix.from_columns(columns, EXACT), tuple(blocks))


def is_weil(a: FiniteCommAlgebra) -> bool:
    if a.mode != EXACT:
        raise ModeMismatch("is_weil runs in exact mode")
    nil = nilradical(a)
    if len(nil) == a.dim - 1:
        return True
    return len(decompose(a, check=False).factors) == 1


# --- residue signature (works for numeric algebras too) ------------------------

@dataclass(frozen=True)
class ResidueSignature:
    dim: int
    real_factors: int
    complex_factors: int

    @property
    def factor_count(self) -> int:
        return self.real_factors + self.complex_factors


def residue_signature(a: FiniteCommAlgebra, tol: float | None = None) -> ResidueSignature:
    """Count maximal ideals by residue field (R or C) without requiring a split.

    A generic element of the semisimple quotient R^p x C^q has 2q non-real
    eigenvalues (conjugate pairs) and p real ones, all distinct.
    """
    rng = random.Random(20240917)
    if a.mode == EXACT:
        quotient = _Quotient(a, nilradical(a))
        s = quotient.dim
        for _ in range(20):
            g = tuple(Fraction(rng.randint(-30, 30)) for _ in range(s))
            p = char_poly(quotient.mult_matrix(g))
            if sum(f.total_degree() for f, _ in squarefree_decomposition(p)) == s:
                real = count_real_roots(p)
                return ResidueSignature(a.dim, real, (s - real) // 2)
        raise AssertionError("no separating element found")
    tol = tol or DEFAULT_TOL
    c = np.array([[[complex(x).real for x in v] for v in row] for row in a.mul])
    d = a.dim
    t = np.einsum("kjj->k", c)
    form = np.einsum("ijk,k->ij", c, t)
    u, sv, vh = np.linalg.svd(form)
    scale = max(1.0, float(np.max(np.abs(form))) if form.size else 1.0)
    s = int(np.sum(sv > tol * scale))
    basis = vh.T   # columns: first s span a complement, rest span the nilradical
    binv = np.linalg.inv(basis)
    for _ in range(20):
        g = basis[:, :s] @ np.array([rng.uniform(-1, 1) for _ in range(s)])
        lg = np.einsum("i,ijk->kj", g, c)                 # lg[k, j] = (g e_j)_k
        lq = (binv @ lg @ basis)[:s, :s]
        vals = np.linalg.eigvals(lq) if s else np.array([])
        vscale = max(1.0, float(np.max(np.abs(vals)))) if s else 1.0
        clusters: list = []
        for v in vals:
            if not any(abs(v - w) <= 1e3 * tol * vscale for w in clusters):
                clusters.append(v)
        if len(clusters) == s:
            real = sum(1 for v in clusters if abs(v.imag) <= 1e3 * tol * vscale)
            return ResidueSignature(d, real, (s - real) // 2)
    raise AssertionError("no separating element found")


# --- constructions ------------------------------------------------------------

def tensor(r: WeilAlgebra | FiniteCommAlgebra, s: WeilAlgebra | FiniteCommAlgebra) -> WeilAlgebra | FiniteCommAlgebra:
    """Tensor product over R; basis index of e_a (x) f_b is a * dim(s) + b."""
    ra = r.algebra if isinstance(r, WeilAlgebra) else r
    sa = s.algebra if isinstance(s, WeilAlgebra) else s
    dr, ds = ra.dim, sa.dim
    d = dr * ds
    mul = [[None] * d for _ in range(d)]
    for a1, b1, a2, b2 in cartesian(range(dr), range(ds), range(dr), range(ds)):
        vec = [Fraction(0)] * d
        for k1, c1 in ra._sparse[a1][a2]:
            for k2, c2 in sa._sparse[b1][b2]:
                vec[k1 * ds + k2] += c1 * c2
        mul[a1 * ds + b1][a2 * ds + b2] = tuple(vec)
    unit = tuple(x * y for x in ra.unit for y in sa.unit)
    out = FiniteCommAlgebra(d, tuple(tuple(row) for row in mul), unit)
    if isinstance(r, WeilAlgebra) and isinstance(s, WeilAlgebra):
        return as_weil(out)
    return out


def direct_product(*algebras: FiniteCommAlgebra) -> FiniteCommAlgebra:
    d = sum(x.dim for x in algebras)
    mul = [[(Fraction(0),) * d for _ in range(d)] for _ in range(d)]
    unit = []
    start = 0
    for x in algebras:
        for i in range(x.dim):
            for j in range(x.dim):
                vec = [Fraction(0)] * d
                for k, c in enumerate(x.mul[i][j]):
                    vec[start + k] = c
                mul[start + i][start + j] = tuple(vec)
        unit.extend(x.unit)
        start += x.dim
    return FiniteCommAlgebra(d, tuple(tuple(r) for r in mul), tuple(unit))


def polynomial_quotient(p: MultiPoly) -> FiniteCommAlgebra:
    """R[x]/(p) in the basis 1, x, ..., x^{deg p - 1}."""
    c = [normalize(x) for x in p.coeffs()]
    deg = len(c) - 1
    if deg < 1:
        raise DimensionMismatch("quotient by a constant is not a nonzero algebra")
    lead = c[-1]
    monic = [x / lead for x in c]

    def reduce(exp: int) -> list:
        vec = [Fraction(0)] * (2 * deg)
        vec[exp] = Fraction(1)
        for top in range(2 * deg - 1, deg - 1, -1):
            f = vec[top]
            if f:
                for i in range(deg + 1):
                    vec[top - deg + i] -= f * monic[i]
        return vec[:deg]

    mul = tuple(tuple(tuple(reduce(i + j)) for j in range(deg)) for i in range(deg))
    unit = tuple(Fraction(int(i == 0)) for i in range(deg))
    return FiniteCommAlgebra(deg, mul, unit)


def standard_monomials(n: int, generators: Sequence[Sequence[int]]) -> list[tuple]:
    """Monomials not divisible by any generator, in graded-lex order; must be finite."""
    gens = [tuple(g) for g in generators]

    def divisible(e):
        return any(all(x >= y for x, y in zip(e, g)) for g in gens)

    for i in range(n):
        if not any(g[i] > 0 and sum(g) == g[i] for g in gens):
            raise DimensionMismatch(f"monomial ideal has no pure power of variable {i}; quotient is infinite")
    seen = set()
    frontier = [(0,) * n]
    out = []
    while frontier:
        e = frontier.pop()
        if e in seen or divisible(e):
            continue
        seen.add(e)
        out.append(e)
        for i in range(n):
            f = list(e)
            f[i] += 1
            frontier.append(tuple(f))
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


def monomial_algebra(n: int, generators: Sequence[Sequence[int]]) -> FiniteCommAlgebra:
    """R[y_1..y_n]/(monomials) on its standard-monomial basis."""
    basis = standard_monomials(n, generators)
    index = {e: i for i, e in enumerate(basis)}
    d = len(basis)
    mul = []
    for e in basis:
        row = []
        for f in basis:
            vec = [Fraction(0)] * d
            g = tuple(x + y for x, y in zip(e, f))
            if g in index:
                vec[index[g]] = Fraction(1)
            row.append(tuple(vec))
        mul.append(tuple(row))
    return FiniteCommAlgebra(d, tuple(mul), tuple(Fraction(int(i == 0)) for i in range(d)))


def truncated_polynomial_algebra(k: int) -> FiniteCommAlgebra:
    """R[x]/(x^k)."""
    return monomial_algebra(1, [(k,)])


# --- subalgebras ---------------------------------------------------------------

def subalgebra_check(ambient: FiniteCommAlgebra, sub_basis: Sequence[Sequence]) -> bool:
    """True iff span(sub_basis) (which must contain the unit) is closed under products."""
    span = _Span(ambient.dim)
    for v in sub_basis:
        if not span.add(v):
            raise DimensionMismatch("sub_basis vectors are linearly dependent")
    if not span.contains(ambient.unit):
        raise NotContainingUnit("the span does not contain the unit")
    vecs = [tuple(v) for v in sub_basis]
    for i, u in enumerate(vecs):
        for v in vecs[i:]:
            if not span.contains(ambient.product(u, v)):
                return False
    return True
