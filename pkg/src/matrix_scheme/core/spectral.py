"""Simultaneous generalized-eigenspace decomposition of commuting matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch, NonRealSpectrum, SplitFailure
from .matrix import DenseMatrix, char_poly, hstack, inverse, kernel_basis, mat_mul, submatrix
from .poly import MultiPoly, count_real_roots, rational_roots, remainder_factor
from .scalar import EXACT, DEFAULT_TOL, GaussianRational


@dataclass(frozen=True)
class SpectralBlock:
    """One joint generalized eigenspace: eigenvalue tuple, basis columns, projector."""

    point: tuple
    basis: DenseMatrix
    projector: DenseMatrix

    @property
    def multiplicity(self) -> int:
        return self.basis.cols


def real_char_poly(a: DenseMatrix, index: int = 0) -> MultiPoly:
    """char_poly with a rational-coefficient guarantee; non-real coefficients
    already rule out a real spectrum."""
    p = char_poly(a)
    if any(isinstance(c, GaussianRational) for c in p.terms.values()):
        raise NonRealSpectrum(f"matrix {index} has a characteristic polynomial with "
                              f"non-real coefficients", index=index, factor=p)
    return p


def exact_eigenvalues(a: DenseMatrix, index: int = 0) -> list[tuple[Fraction, int]]:
    """Rational eigenvalues with algebraic multiplicities, or an error explaining why not."""
    p = real_char_poly(a, index)
    roots, rem = rational_roots(p)
    if rem:
        rest = remainder_factor(p, roots)
        if count_real_roots(rest) < rem:
            raise NonRealSpectrum(f"matrix {index} has non-real eigenvalues (factor {rest})",
                                  index=index, factor=rest)
        raise SplitFailure(f"matrix {index} has irrational real eigenvalues (factor {rest}); "
                           f"use numeric mode")
    return roots


def _fat_cluster_ok(arr: np.ndarray, vals: np.ndarray, members: list[int],
                    tol: float, scale: float, radius: float) -> bool:
    """A defective eigenvalue of size k perturbs into a ring of radius ~eps^(1/k);
    accept the group as one k-fold point when (A - mu)^k has a k-dimensional
    numerical kernel."""
    k = len(members)
    mu = vals[members].mean()
    if np.max(np.abs(vals[members] - mu)) > tol ** (1.0 / k) * radius:
        return False
    shifted = np.linalg.matrix_power(arr - mu * np.eye(arr.shape[0]), k)
    sv = np.linalg.svd(shifted, compute_uv=False)
    return bool(np.all(sv[-k:] <= tol * scale ** k))


def numeric_eigenvalues(a: DenseMatrix, tol: float = DEFAULT_TOL,
                        index: int = 0) -> list[tuple[float, int]]:
    """Real eigenvalue clusters (center, size).

    Eigenvalues closer than tol*scale always merge; wider groups merge when they
    pass the numerical generalized-kernel test, which absorbs the sqrt(eps)-sized
    splitting of Jordan blocks. Reality is judged on the cluster centers.
    """
    scale = max(1.0, a.max_norm())
    arr = a.to_numpy()
    vals = np.linalg.eigvals(arr)
    radius = max(1.0, float(np.max(np.abs(vals)))) if len(vals) else 1.0
    clusters = [[i] for i in range(len(vals))]

    def center(c):
        return vals[c].mean()

    def best_union():
        best = None
        for i, seed in enumerate(clusters):
            others = sorted((abs(center(c) - center(seed)), j) for j, c in enumerate(clusters) if j != i)
            members, used = list(seed), [i]
            for dist, j in others:
                members = members + clusters[j]
                used = used + [j]
                if dist <= tol * scale or _fat_cluster_ok(arr, vals, members, tol, scale, radius):
                    if best is None or len(members) > len(best[0]):
                        best = (members, used)
        return best

    while len(clusters) > 1:
        found = best_union()
        if found is None:
            break
        members, used = found
        clusters = [c for j, c in enumerate(clusters) if j not in used] + [members]
    centers = [(center(c), len(c)) for c in clusters]
    bad = [complex(mu) for mu, _ in centers if abs(mu.imag) > tol * scale]
    if bad:
        raise NonRealSpectrum(f"matrix {index} has non-real eigenvalues {bad}", index=index)
    return sorted((float(mu.real), k) for mu, k in centers)


def _split_one(b: DenseMatrix, tol: float | None, index: int):
    """Generalized eigenspaces of a single square matrix as (eigenvalue, basis columns)."""
    m = b.rows
    out = []
    if b.mode == EXACT:
        for lam, mult in exact_eigenvalues(b, index):
            ker = kernel_basis(b.shift(lam) ** m)
            if len(ker) != mult:
                raise AssertionError("generalized eigenspace dimension disagrees with multiplicity")
            out.append((lam, ker))
        return out
    arr = b.to_numpy()
    for lam, mult in numeric_eigenvalues(b, tol, index):
        shifted = np.linalg.matrix_power(arr - lam * np.eye(m), mult)
        _, _, vh = np.linalg.svd(shifted)
        out.append((lam, [tuple(complex(x) for x in vh[i].conj()) for i in range(m - mult, m)]))
    return out


def joint_spectral(matrices: Sequence[DenseMatrix], tol: float | None = None) -> list[SpectralBlock]:
    """Split C^r by the eigenvalues of A_1, refine each block by A_2, ... A_n.

    Blocks are carried in local coordinates (basis V with A_i V = V B_i) so each
    refinement step only sees the restricted operators B_i.
    """
    if not matrices:
        raise DimensionMismatch("need at least one matrix")
    r = matrices[0].rows
    mode = matrices[0].mode
    if mode != EXACT and tol is None:
        tol = DEFAULT_TOL
    blocks = [((), DenseMatrix.identity(r, mode), list(matrices))]
    for i in range(len(matrices)):
        refined = []
        for point, basis, ops in blocks:
            parts = _split_one(ops[i], tol if mode != EXACT else None, i)
            change = DenseMatrix.from_columns([v for _, ker in parts for v in ker], mode)
            change_inv = inverse(change)
            new_ops = [mat_mul(mat_mul(change_inv, op), change) for op in ops]
            start = 0
            for lam, ker in parts:
                idx = list(range(start, start + len(ker)))
                start += len(ker)
                refined.append((
                    point + (lam,),
                    mat_mul(basis, submatrix(change, range(change.rows), idx)),
                    [submatrix(op, idx, idx) for op in new_ops],
                ))
        blocks = refined
    blocks.sort(key=lambda b: tuple(float(x) for x in b[0]))
    full = hstack([b[1] for b in blocks])
    full_inv = inverse(full)
    out = []
    start = 0
    for point, basis, _ in blocks:
        m = basis.cols
        rows = submatrix(full_inv, range(start, start + m), range(full_inv.cols))
        start += m
        out.append(SpectralBlock(point, basis, mat_mul(basis, rows)))
    return out
