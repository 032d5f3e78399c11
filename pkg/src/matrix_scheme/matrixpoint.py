"""Maps from a matrix point (rank r) to R^n, given as commuting matrix tuples.

The tuple (A_1, ..., A_n) is the image of the coordinate functions. Its joint
generalized eigenspaces are the support points of the image scheme; the
unital R-algebra generated by the A_i is the fiber algebra, a direct product
of Weil algebras whose factors sit over the support points. Functions act
through their (r-1)-jets at the support:

    f(A) = sum_q sum_{|a| <= r-1} (d^a f(q) / a!) prod_i (A_i - q_i)^{a_i} P_q
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .core.matrix import DenseMatrix, char_poly, mat_mul
from .core.poly import MultiPoly
from .core.scalar import DEFAULT_TOL, EXACT, NUMERIC
from .core.spectral import exact_eigenvalues, joint_spectral, numeric_eigenvalues
from .errors import (ClosureOverflow, ComplexResidue, DimensionMismatch, JetOrderTooLow,
                     MissingJet, ModeMismatch, NonRealSpectrum, NotCommuting, SplitFailure)
from .jets import Jet, JetRing, jet_ideal, truncate
from .weil import (AlgebraDecomposition, FiniteCommAlgebra, ResidueSignature, _Coordinates, _Span,
                   decompose, residue_signature)


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    matrices: tuple
    tol: float = DEFAULT_TOL
    # private memo (support points, monomial matrices); the tuple itself never changes
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def r(self) -> int:
        return self.matrices[0].rows

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def mode(self) -> str:
        return self.matrices[0].mode

    def _abs_tol(self) -> float:
        return self.tol * max(1.0, max(m.max_norm() for m in self.matrices))

    def conjugate(self, s: DenseMatrix, s_inv: DenseMatrix) -> "MatrixTuple":
        return MatrixTuple(tuple(s @ a @ s_inv for a in self.matrices), self.tol)

    def to_numeric(self) -> "MatrixTuple":
        return MatrixTuple(tuple(a.to_numeric() for a in self.matrices), self.tol)


def new_tuple(matrices: Sequence[DenseMatrix], tol: float | None = None) -> MatrixTuple:
    """Validate shapes, modes and pairwise commutation."""
    mats = tuple(m if isinstance(m, DenseMatrix) else DenseMatrix(m) for m in matrices)
    if not mats:
        raise DimensionMismatch("a tuple needs at least one matrix (n >= 1)")
    r = mats[0].rows
    for m in mats:
        if m.rows != r or m.cols != r:
            raise DimensionMismatch(f"all matrices must be {r}x{r}, got {m.rows}x{m.cols}")
        if m.mode != mats[0].mode:
            raise ModeMismatch("matrices in a tuple must share one mode")
    t = MatrixTuple(mats, DEFAULT_TOL if tol is None else tol)
    _check_commuting(mats, t._abs_tol() if t.mode == NUMERIC else None)
    return t


def _check_commuting(mats: Sequence[DenseMatrix], tol: float | None):
    for i, j in combinations(range(len(mats)), 2):
        comm = mats[i] @ mats[j] - mats[j] @ mats[i]
        if not comm.is_zero(tol):
            entry = next((a, b) for a in range(comm.rows) for b in range(comm.cols)
                         if (abs(comm[a, b]) > tol if tol is not None else comm[a, b]))
            raise NotCommuting(
                f"matrices {i} and {j} do not commute: commutator entry {entry} = {comm[entry]}",
                pair=(i, j), entry=(entry, comm[entry]))


# --- admissibility and support ----------------------------------------------------

def check_admissible(t: MatrixTuple) -> bool:
    """True when every A_i has an all-real spectrum; raises otherwise."""
    for i, a in enumerate(t.matrices):
        if t.mode == EXACT:
            exact_eigenvalues(a, i)
        else:
            numeric_eigenvalues(a, t.tol, i)
    return True


@dataclass(frozen=True, eq=False)
class SupportPoint:
    q: tuple
    projector: DenseMatrix
    multiplicity: int


def joint_decompose(t: MatrixTuple) -> list[SupportPoint]:
    if "support" not in t._memo:
        check_admissible(t)
        blocks = joint_spectral(t.matrices, None if t.mode == EXACT else t.tol)
        t._memo["support"] = tuple(SupportPoint(b.point, b.projector, b.multiplicity)
                                   for b in blocks)
    return list(t._memo["support"])


def nilpotent_parts(t: MatrixTuple, point: SupportPoint) -> list[DenseMatrix]:
    """(A_i - q_i) P_q for each coordinate."""
    return [mat_mul(a.shift(q), point.projector) for a, q in zip(t.matrices, point.q)]


# --- span machinery shared by closure and local computations -------------------------

class _NumSpan:
    """Orthonormal basis of a subspace; a vector is new when its residual exceeds
    tol relative to the larger of its own norm, ``ref`` and 1. Pass ``ref`` as the
    size of the data a vector was computed from so rounding noise is not counted."""

    def __init__(self, tol: float):
        self.tol = tol
        self.basis: list = []

    def add(self, v, ref: float = 0.0) -> bool:
        v = np.asarray(v, dtype=complex)
        floor = max(1.0, ref, float(np.linalg.norm(v)))
        for b in self.basis:
            v = v - np.vdot(b, v) * b
        nrm = float(np.linalg.norm(v))
        if nrm <= self.tol * floor:
            return False
        self.basis.append(v / nrm)
        return True

    def __len__(self):
        return len(self.basis)


def _norm(m: DenseMatrix) -> float:
    """Spectral norm in numeric mode; exact spans ignore it."""
    if m.mode == EXACT:
        return 0.0
    return float(np.linalg.norm(m.to_numpy(), 2))


class _ExactSpan(_Span):
    def add(self, v, ref: float = 0.0) -> bool:
        return super().add(v)


def _span_for(mode: str, dim: int, tol: float):
    return _ExactSpan(dim) if mode == EXACT else _NumSpan(tol)


def _flat(m: DenseMatrix) -> list:
    return m.flat_real()


def matrix_closure(unit: DenseMatrix, generators: Sequence[DenseMatrix], tol: float = DEFAULT_TOL,
                   bound: int | None = None, scale: float = 0.0) -> list[DenseMatrix]:
    """Basis (starting with ``unit``) of the R-span of all monomials in the generators.

    In numeric mode ``scale`` bounds the size of the matrices the generators came
    from; products are tested against the noise that size implies."""
    r = unit.rows
    grow = _growth(generators, scale)
    span = _span_for(unit.mode, 2 * r * r, tol)
    if bound is None:
        bound = r * r if all(g.is_real() for g in generators) and unit.is_real() else 2 * r * r
    basis: list[DenseMatrix] = []
    queue: list[DenseMatrix] = []
    if span.add(_flat(unit)):
        basis.append(unit)
        queue.append(unit)
    while queue:
        b = queue.pop(0)
        ref = grow * _norm(b)
        for g in generators:
            m = mat_mul(b, g)
            if span.add(_flat(m), ref):
                if len(basis) >= bound:
                    raise ClosureOverflow(f"closure dimension exceeds {bound}")
                basis.append(m)
                queue.append(m)
    return basis


def _growth(ops: Sequence[DenseMatrix], scale: float) -> float:
    """Bound on how much one multiplication by an op can amplify rounding noise."""
    return max([scale] + [_norm(op) for op in ops])


def _nilpotency_levels(unit: DenseMatrix, ops: Sequence[DenseMatrix], tol: float,
                       scale: float = 0.0) -> list[int]:
    """dims of span{degree-j monomials in ops} * unit for j = 0, 1, ... down to 0."""
    dims = []
    level = [unit]
    ref = _norm(unit)
    grow = _growth(ops, scale)
    while True:
        span = _span_for(unit.mode, 0, tol)
        indep = [m for m in level if span.add(_flat(m), ref)]
        dims.append(len(indep))
        if not indep:
            return dims
        if len(dims) > unit.rows + 1:
            raise AssertionError("monomials in the nilpotent parts did not vanish")
        ref = grow * max(_norm(m) for m in indep)
        level = [mat_mul(m, op) for m in indep for op in ops]


def _filtration(projector: DenseMatrix, ops: Sequence[DenseMatrix], tol: float,
                scale: float = 0.0) -> list[int]:
    """dim_C of m^j E for E = image of the projector, j = 0, 1, ... down to 0."""
    mode = projector.mode
    vecs = [projector.column(j) for j in range(projector.cols)]
    dims = []
    ref = _norm(projector)
    grow = _growth(ops, scale)
    while True:
        span = _span_for(mode, 0, tol)
        vecs = [v for v in vecs if span.add(v, ref)]
        dims.append(len(vecs))
        if not vecs:
            return dims
        if len(dims) > projector.rows + 1:
            raise AssertionError("filtration did not reach 0")
        if mode != EXACT:
            ref = grow * max(float(np.linalg.norm(np.asarray(v, dtype=complex))) for v in vecs)
        vecs = [tuple(mat_mul(op, DenseMatrix.from_columns([v], mode)).column(0))
                for v in vecs for op in ops]


def _scale(t: MatrixTuple) -> float:
    return max(_norm(a) for a in t.matrices)


def local_structure(t: MatrixTuple, point: SupportPoint) -> tuple[int, int, list[int]]:
    """(local_dim, nilpotency index, filtration) computed directly from matrices."""
    tol = t.tol
    nil = nilpotent_parts(t, point)
    local = matrix_closure(point.projector, nil, tol, scale=_scale(t))
    nilpotency = len(_nilpotency_levels(point.projector, nil, tol, _scale(t))) - 1
    return len(local), nilpotency, _filtration(point.projector, nil, tol, _scale(t))


# --- fiber algebra -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiberAlgebra:
    rank: int
    algebra: FiniteCommAlgebra
    basis_matrices: tuple
    decomposition: AlgebraDecomposition | None
    signature: ResidueSignature
    complex_residue: bool = False
    factor_points: tuple = field(default=())   # support point per factor (fiber algebras only)

    def embed(self, v: Sequence) -> DenseMatrix:
        mode = self.basis_matrices[0].mode
        out = DenseMatrix.zeros(self.rank, self.rank, mode)
        for c, m in zip(v, self.basis_matrices):
            if c:
                out = out + m.scale(c if mode == EXACT else complex(c))
        return out

    @property
    def dim(self) -> int:
        return self.algebra.dim


def _structure_constants(basis: Sequence[DenseMatrix], mode: str) -> FiniteCommAlgebra:
    d = len(basis)
    flats = [_flat(m) for m in basis]
    if mode == EXACT:
        coords = _Coordinates(flats)
    else:
        bmat = np.array(flats, dtype=float).T

        def coords(v):
            sol, *_ = np.linalg.lstsq(bmat, np.asarray(v, dtype=float), rcond=None)
            return tuple(float(x) for x in sol)
    mul = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            c = coords(_flat(mat_mul(basis[i], basis[j])))
            mul[i][j] = mul[j][i] = tuple(c)
    one = Fraction(1) if mode == EXACT else 1.0
    zero = Fraction(0) if mode == EXACT else 0.0
    unit = (one,) + (zero,) * (d - 1)
    return FiniteCommAlgebra(d, tuple(tuple(r) for r in mul), unit, mode)


def _build_algebra(r: int, generators: Sequence[DenseMatrix], mode: str, tol: float,
                   strict: bool) -> FiberAlgebra:
    eye = DenseMatrix.identity(r, mode)
    basis = matrix_closure(eye, generators, tol)
    alg = _structure_constants(basis, mode)
    sig = residue_signature(alg, tol if mode == NUMERIC else None)
    decomposition = None
    complex_residue = sig.complex_factors > 0
    if mode == EXACT:
        try:
            decomposition = decompose(alg, check=False)
        except ComplexResidue:
            if strict:
                raise
            complex_residue = True
    return FiberAlgebra(r, alg, tuple(basis), decomposition, sig, complex_residue)


def fiber_algebra(t: MatrixTuple) -> FiberAlgebra:
    """The unital R-algebra generated by the tuple, with its Weil decomposition.

    In exact mode the decomposition's idempotents are matched to the support
    projectors; every local factor must have nilpotency index <= r.
    """
    check_admissible(t)
    fa = _build_algebra(t.r, t.matrices, t.mode, t.tol, strict=True)
    if fa.decomposition is None:
        return fa
    points = joint_decompose(t)
    by_proj = {p.projector: p for p in points}
    matched = []
    for e in fa.decomposition.idempotents:
        mat = fa.embed(e)
        if mat not in by_proj:
            raise AssertionError("fiber-algebra idempotent does not match a support projector")
        matched.append(by_proj[mat].q)
    for f in fa.decomposition.factors:
        if f.nilpotency > t.r:
            raise AssertionError(f"local factor with nilpotency {f.nilpotency} > r = {t.r}")
    return FiberAlgebra(fa.rank, fa.algebra, fa.basis_matrices, fa.decomposition, fa.signature,
                        fa.complex_residue, tuple(matched))


def surrogate(r: int, generators: Sequence[DenseMatrix], tol: float | None = None) -> FiberAlgebra:
    """Unital algebra <Id, generators>; C-residue factors are flagged, not rejected."""
    gens = [g if isinstance(g, DenseMatrix) else DenseMatrix(g) for g in generators]
    mode = gens[0].mode if gens else EXACT
    tol = DEFAULT_TOL if tol is None else tol
    for g in gens:
        if g.rows != r or g.cols != r:
            raise DimensionMismatch(f"surrogate generators must be {r}x{r}")
    scale = max([1.0] + [g.max_norm() for g in gens])
    _check_commuting(gens, tol * scale if mode == NUMERIC else None)
    return _build_algebra(r, gens, mode, tol, strict=False)


# --- evaluation ----------------------------------------------------------------------

def _match_jet(jets, q, tol, exact: bool) -> Jet:
    if isinstance(jets, Mapping):
        if tuple(q) in jets:
            return jets[tuple(q)]
        candidates = list(jets.values())
    else:
        candidates = list(jets)
    for j in candidates:
        c = j.ring.center
        if exact and tuple(c) == tuple(q):
            return j
        if not exact and all(abs(complex(a) - complex(b)) <= tol for a, b in zip(c, q)):
            return j
    raise MissingJet(f"no jet supplied at support point {tuple(q)}")


def _monomial_matrices(t: MatrixTuple, p: SupportPoint) -> list:
    """Nonzero prod_i (A_i - q_i)^{e_i} P_q for |e| <= r - 1, cached per point."""
    key = ("monomials", p.q)
    if key not in t._memo:
        ring = JetRing(t.n, t.r - 1)
        shifted = [a.shift(q) for a, q in zip(t.matrices, p.q)]
        tol = t._abs_tol() if t.mode != EXACT else None
        mats = {(0,) * t.n: p.projector}
        out = [((0,) * t.n, p.projector)]
        for exp in ring.basis[1:]:
            i = next(j for j, e in enumerate(exp) if e)
            prev = exp[:i] + (exp[i] - 1,) + exp[i + 1:]
            if prev not in mats:
                continue
            m = mat_mul(shifted[i], mats[prev])
            if not m.is_zero(tol):
                mats[exp] = m
                out.append((exp, m))
        t._memo[key] = out
    return t._memo[key]


def evaluate(t: MatrixTuple, f: MultiPoly | None = None, jets=None) -> DenseMatrix:
    """f(A_1..A_n) through (r-1)-jets at the support points.

    Either a polynomial ``f`` or ``jets`` (a mapping point -> Jet, or a list of
    Jets matched by center) must be given.
    """
    if (f is None) == (jets is None):
        raise ValueError("pass exactly one of f or jets")
    if f is not None and f.n != t.n:
        raise DimensionMismatch(f"polynomial in {f.n} variables for an n = {t.n} tuple")
    points = joint_decompose(t)
    order = t.r - 1
    r, mode = t.r, t.mode
    zero = Fraction(0) if mode == EXACT else 0j
    acc = [[zero] * r for _ in range(r)]
    for p in points:
        if f is not None:
            jet = truncate(f, JetRing(t.n, order, p.q))
        else:
            jet = _match_jet(jets, p.q, t._abs_tol(), mode == EXACT)
            if jet.ring.k < order:
                raise JetOrderTooLow(f"jet at {p.q} has order {jet.ring.k} < r-1 = {order}")
            if jet.ring.n != t.n:
                raise DimensionMismatch("jet has the wrong number of variables")
            jet = jet.restrict(order)
        for exp, m in _monomial_matrices(t, p):
            c = jet.coeffs[jet.ring.index[exp]]
            if not c:
                continue
            c = c if mode == EXACT else complex(c)
            for row, mrow in zip(acc, m.entries):
                for j, x in enumerate(mrow):
                    if x:
                        row[j] += c * x
    return DenseMatrix(acc, mode)


# --- reports --------------------------------------------------------------------------

@dataclass(frozen=True)
class PushforwardPoint:
    q: tuple
    length: int
    filtration: tuple


@dataclass(frozen=True)
class PushforwardModule:
    points: tuple

    @property
    def total_length(self) -> int:
        return sum(p.length for p in self.points)


def pushforward(t: MatrixTuple) -> PushforwardModule:
    """Lengths and the filtration dim(m^j E_q) of the pushed-forward module."""
    tol = t.tol
    out = []
    for p in joint_decompose(t):
        nil = nilpotent_parts(t, p)
        filt = _filtration(p.projector, nil, tol, _scale(t))
        out.append(PushforwardPoint(p.q, p.multiplicity, tuple(filt)))
    return PushforwardModule(tuple(out))


@dataclass(frozen=True)
class SupportRecord:
    q: tuple
    mult: int
    local_dim: int
    nilpotency: int
    filtration: tuple


@dataclass(frozen=True)
class SchemeReport:
    admissible: bool
    r: int
    mode: str
    support: tuple = ()
    determinacy_order: int | None = None
    error: str | None = None
    message: str | None = None

    def signature(self) -> tuple:
        """Everything conjugation must preserve."""
        return (self.admissible, self.determinacy_order,
                tuple((s.q, s.mult, s.local_dim, s.nilpotency, s.filtration) for s in self.support))


def scheme_report(t: MatrixTuple) -> SchemeReport:
    """joint_decompose + fiber_algebra + pushforward in one record."""
    points = joint_decompose(t)
    push = {p.q: p for p in pushforward(t).points}
    local: dict = {}
    if t.mode == EXACT:
        fa = fiber_algebra(t)
        for q, factor in zip(fa.factor_points, fa.decomposition.factors):
            local[q] = (factor.dim, factor.nilpotency)
    else:
        for p in points:
            dim, nil, _ = local_structure(t, p)
            local[p.q] = (dim, nil)
    records = tuple(SupportRecord(p.q, p.multiplicity, local[p.q][0], local[p.q][1],
                                  push[p.q].filtration) for p in points)
    order = max(rec.nilpotency - 1 for rec in records)
    if order > t.r - 1:
        raise AssertionError(f"determinacy order {order} exceeds r - 1 = {t.r - 1}")
    return SchemeReport(True, t.r, t.mode, records, order)


def safe_scheme_report(t: MatrixTuple) -> SchemeReport:
    """scheme_report, with admissibility failures recorded instead of raised."""
    try:
        return scheme_report(t)
    except (NonRealSpectrum, SplitFailure) as exc:
        return SchemeReport(False, t.r, t.mode, error=type(exc).__name__, message=str(exc))


def graph(t: MatrixTuple, base_point: Sequence) -> SchemeReport:
    """Scheme report of the graph: support points (x, q) in X x Y."""
    rep = scheme_report(t)
    x = tuple(base_point)
    support = tuple(SupportRecord(x + s.q, s.mult, s.local_dim, s.nilpotency, s.filtration)
                    for s in rep.support)
    return SchemeReport(rep.admissible, rep.r, rep.mode, support, rep.determinacy_order)


# --- characteristic ideal versus fiber ---------------------------------------------------

@dataclass(frozen=True)
class CharIdealRecord:
    q: tuple
    dim_quotient: int
    dim_fiber: int

    @property
    def equal(self) -> bool:
        return self.dim_quotient == self.dim_fiber


def char_ideal_compare(t: MatrixTuple) -> list[CharIdealRecord]:
    """Jet quotient by the characteristic polynomials det(y_i - A_i) versus the local fiber."""
    if t.mode != EXACT:
        raise ModeMismatch("char_ideal_compare runs in exact mode")
    rep = scheme_report(t)
    gens = [char_poly(a).embed(t.n, [i]) for i, a in enumerate(t.matrices)]
    out = []
    for s in rep.support:
        ring = JetRing(t.n, t.r - 1, s.q)
        ideal = jet_ideal([truncate(g, ring) for g in gens], ring)
        out.append(CharIdealRecord(s.q, ideal.quotient_dim, s.local_dim))
        if ideal.quotient_dim < s.local_dim:
            raise AssertionError("jet quotient smaller than the fiber factor")
    return out
