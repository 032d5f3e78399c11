"""Matrix tuples varying polynomially over a sampled base window.

A family assigns to every base point x a commuting tuple A_1(x), ..., A_n(x)
whose entries are polynomials in x. Each grid sample is analysed on its own
(numeric mode); for a one-dimensional base the support points are then
chained across neighbouring samples into branch components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .core.matrix import DenseMatrix
from .core.poly import MultiPoly
from .core.scalar import DEFAULT_TOL, NUMERIC
from .errors import (DimensionMismatch, MatchingAmbiguity, NotCommuting, OutOfWindow,
                     VariableCountMismatch)
from .matrixpoint import MatrixTuple, SchemeReport, new_tuple, safe_scheme_report, surrogate


def _poly_matmul(a, b):
    size = len(a)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = MultiPoly.zero(a[0][0].n)
            for k in range(size):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


@dataclass(frozen=True, eq=False)
class MatrixFamily:
    m: int
    r: int
    matrices: tuple          # n matrices, each an r x r tuple of rows of MultiPoly in m variables
    window: tuple            # per-axis (lo, hi) as Fractions

    def __post_init__(self):
        if len(self.window) != self.m:
            raise VariableCountMismatch(f"window has {len(self.window)} axes, base dimension is {self.m}")
        for lo, hi in self.window:
            if lo > hi:
                raise ValueError(f"empty window axis [{lo}, {hi}]")
        for mat in self.matrices:
            if len(mat) != self.r or any(len(row) != self.r for row in mat):
                raise DimensionMismatch(f"family matrices must be {self.r}x{self.r}")
            for row in mat:
                for p in row:
                    if p.n != self.m:
                        raise VariableCountMismatch(
                            f"entry {p} has {p.n} variables, base dimension is {self.m}")
        for i, j in combinations(range(self.n), 2):
            ab = _poly_matmul(self.matrices[i], self.matrices[j])
            ba = _poly_matmul(self.matrices[j], self.matrices[i])
            for a, b in product(range(self.r), repeat=2):
                diff = ab[a][b] - ba[a][b]
                if not diff.is_zero():
                    raise NotCommuting(
                        f"matrices {i} and {j} do not commute: commutator entry {(a, b)} = {diff}",
                        pair=(i, j), entry=((a, b), diff))

    @property
    def n(self) -> int:
        return len(self.matrices)


def matrix_family(matrices: Sequence, window: Sequence, r: int | None = None) -> MatrixFamily:
    """Build a family from nested lists of MultiPoly entries (or scalars)."""
    window = tuple((Fraction(lo), Fraction(hi)) for lo, hi in window)
    m = len(window)
    mats = []
    for mat in matrices:
        mats.append(tuple(tuple(p if isinstance(p, MultiPoly) else MultiPoly.constant(m, p)
                                for p in row) for row in mat))
    if r is None:
        if not mats:
            raise DimensionMismatch("rank must be given for a family without matrices")
        r = len(mats[0])
    return MatrixFamily(m, r, tuple(mats), window)


def _check_window(fam: MatrixFamily, x: Sequence):
    if len(x) != fam.m:
        raise VariableCountMismatch(f"base point has {len(x)} coordinates, expected {fam.m}")
    for xi, (lo, hi) in zip(x, fam.window):
        if not lo <= xi <= hi:
            raise OutOfWindow(f"base point {tuple(x)} lies outside the window")


def _evaluate_matrices(fam: MatrixFamily, x: tuple) -> list[DenseMatrix]:
    return [DenseMatrix([[p.evaluate(x) for p in row] for row in mat]) for mat in fam.matrices]


def sample_fiber(fam: MatrixFamily, x: Sequence, tol: float | None = None) -> MatrixTuple:
    """The tuple over x, evaluated exactly at a rational base point."""
    x = tuple(Fraction(c) for c in x)
    _check_window(fam, x)
    return new_tuple(_evaluate_matrices(fam, x), tol)


def grid(fam: MatrixFamily, counts: Sequence[int]) -> list[tuple]:
    """Uniform rational grid lo + (hi - lo) i / (N - 1), last axis fastest."""
    if len(counts) != fam.m:
        raise VariableCountMismatch(f"grid needs {fam.m} sample counts")
    axes = []
    for n, (lo, hi) in zip(counts, fam.window):
        if n < 1:
            raise ValueError("sample counts must be positive")
        if n == 1:
            axes.append([lo])
        else:
            axes.append([lo + (hi - lo) * i / (n - 1) for i in range(n)])
    return list(product(*axes))


@dataclass(frozen=True)
class FamilySample:
    x: tuple
    report: SchemeReport


@dataclass(frozen=True)
class Branch:
    samples: tuple           # sorted sample indices
    points: tuple            # (sample index, q) pairs


@dataclass(frozen=True)
class Stratum:
    signature: tuple         # (dim, factor count)
    samples: tuple


@dataclass(frozen=True)
class SurrogateSample:
    x: tuple
    dim: int
    real_factors: int
    complex_factors: int

    @property
    def signature(self) -> tuple:
        return (self.dim, self.real_factors + self.complex_factors)


@dataclass(frozen=True)
class FamilyReport:
    m: int
    r: int
    n: int
    samples: tuple
    branches: tuple | None = None
    strata: tuple | None = None

    @property
    def admissible_mask(self) -> tuple:
        return tuple(s.report.admissible for s in self.samples)


def analyze_family(fam: MatrixFamily, counts: Sequence[int], tol: float | None = None) -> FamilyReport:
    """Numeric scheme report at every grid sample; failures are recorded, not raised."""
    if fam.n == 0:
        raise DimensionMismatch("a family needs at least one matrix to analyse")
    tol = DEFAULT_TOL if tol is None else tol
    samples = []
    for x in grid(fam, counts):
        mats = [a.to_numeric() for a in _evaluate_matrices(fam, x)]
        t = MatrixTuple(tuple(mats), tol)
        samples.append(FamilySample(x, safe_scheme_report(t)))
    return FamilyReport(fam.m, fam.r, fam.n, tuple(samples))


def _points(sample: FamilySample) -> list[tuple[np.ndarray, int]]:
    return [(np.array([float(c.real) if isinstance(c, complex) else float(c) for c in s.q]), s.mult)
            for s in sample.report.support]


def _hausdorff(a, b) -> float:
    d = np.array([[np.linalg.norm(p - q) for q, _ in b] for p, _ in a])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _link(src, dst, radius: float, tie_tol: float, where: str) -> list[tuple[int, int]]:
    """Each source point takes nearest targets until their multiplicities cover its own."""
    links = []
    for i, (p, mult) in enumerate(src):
        cand = sorted((float(np.linalg.norm(p - q)), j) for j, (q, _) in enumerate(dst))
        cand = [(d, j) for d, j in cand if d <= radius]
        covered = 0
        taken = 0
        for d, j in cand:
            if covered >= mult:
                break
            links.append((i, j))
            covered += dst[j][1]
            taken += 1
        if 0 < taken < len(cand) and cand[taken][0] - cand[taken - 1][0] <= tie_tol:
            raise MatchingAmbiguity(
                f"{where}: point {p.tolist()} has two candidates at distance "
                f"{cand[taken - 1][0]:.3g} and {cand[taken][0]:.3g}")
    return links


def track_branches(report: FamilyReport, radius: float | None = None,
                   tie_tol: float | None = None) -> list[Branch]:
    """Chain support points across adjacent admissible samples (one-dimensional base)."""
    if report.m != 1:
        raise VariableCountMismatch("branch tracking needs a one-dimensional base")
    xs = [s.x[0] for s in report.samples]
    if xs != sorted(xs):
        raise ValueError("report grid must be sorted")
    pts = {i: _points(s) for i, s in enumerate(report.samples) if s.report.admissible}
    order = sorted(pts)
    pairs = [(a, b) for a, b in zip(order, order[1:]) if b == a + 1]
    scale = max([1.0] + [float(np.abs(p).max()) for v in pts.values() for p, _ in v])
    floor = 1e3 * DEFAULT_TOL * scale
    if radius is None:
        motion = max([0.0] + [_hausdorff(pts[a], pts[b]) for a, b in pairs])
        radius = max(4 * motion, floor)
    if tie_tol is None:
        tie_tol = floor

    parent: dict = {}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    for i in order:
        for j in range(len(pts[i])):
            parent[(i, j)] = (i, j)
    for a, b in pairs:
        for u, v in _link(pts[a], pts[b], radius, tie_tol, f"samples {a}->{b}"):
            union((a, u), (b, v))
        for v, u in _link(pts[b], pts[a], radius, tie_tol, f"samples {b}->{a}"):
            union((a, u), (b, v))

    groups: dict = {}
    for node in parent:
        groups.setdefault(find(node), []).append(node)
    branches = []
    for nodes in groups.values():
        nodes.sort()
        branches.append(Branch(tuple(sorted({i for i, _ in nodes})),
                               tuple((i, report.samples[i].report.support[j].q) for i, j in nodes)))
    branches.sort(key=lambda b: (b.samples[0], [float(np.real(c)) for c in b.points[0][1]]))
    return branches


def analyze_and_track(fam: MatrixFamily, counts: Sequence[int], tol: float | None = None,
                      radius: float | None = None) -> FamilyReport:
    rep = analyze_family(fam, counts, tol)
    if fam.m != 1:
        return rep
    return FamilyReport(rep.m, rep.r, rep.n, rep.samples, tuple(track_branches(rep, radius)))


def surrogate_family(fam: MatrixFamily, counts: Sequence[int], tol: float | None = None) -> FamilyReport:
    """Surrogate algebra dimension and factor counts per sample, grouped into strata."""
    tol = DEFAULT_TOL if tol is None else tol
    samples = []
    for x in grid(fam, counts):
        gens = [a.to_numeric() for a in _evaluate_matrices(fam, x)]
        fa = surrogate(fam.r, gens, tol) if gens else surrogate(fam.r, [DenseMatrix.zeros(fam.r, fam.r, NUMERIC)], tol)
        samples.append(SurrogateSample(x, fa.dim, fa.signature.real_factors, fa.signature.complex_factors))
    strata: dict = {}
    for i, s in enumerate(samples):
        strata.setdefault(s.signature, []).append(i)
    out = sorted((Stratum(sig, tuple(idx)) for sig, idx in strata.items()),
                 key=lambda st: st.samples[0])
    return FamilyReport(fam.m, fam.r, fam.n, tuple(samples), strata=tuple(out))
