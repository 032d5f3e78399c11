"""Dense matrices over exact rationals / Gaussian rationals or complex doubles."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch, ModeMismatch, NotSquare
from .poly import MultiPoly
from .scalar import EXACT, NUMERIC, mode_of, normalize


class DenseMatrix:
    """Immutable row-major matrix; every entry shares one mode tag."""

    __slots__ = ("rows", "cols", "entries", "mode", "_hash")

    def __init__(self, entries: Sequence[Sequence], mode: str | None = None):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise DimensionMismatch("matrices must have at least one row and column")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        modes = {mode_of(x) for r in rows for x in r}
        if mode is None:
            if len(modes) > 1:
                raise ModeMismatch("matrix mixes exact and numeric entries")
            mode = modes.pop()
        if mode == EXACT:
            if NUMERIC in modes:
                raise ModeMismatch("numeric entry in exact matrix")
            data = tuple(tuple(normalize(x) for x in r) for r in rows)
        elif mode == NUMERIC:
            data = tuple(tuple(complex(x) for x in r) for r in rows)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        self.rows = len(rows)
        self.cols = cols
        self.entries = data
        self.mode = mode
        self._hash = None

    @classmethod
    def _raw(cls, data: tuple, mode: str) -> "DenseMatrix":
        m = object.__new__(cls)
        m.rows = len(data)
        m.cols = len(data[0])
        m.entries = data
        m.mode = mode
        m._hash = None
        return m

    # constructors -----------------------------------------------------------
    @classmethod
    def identity(cls, n: int, mode: str = EXACT) -> "DenseMatrix":
        one, zero = (Fraction(1), Fraction(0)) if mode == EXACT else (1 + 0j, 0j)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), mode)

    @classmethod
    def zeros(cls, rows: int, cols: int, mode: str = EXACT) -> "DenseMatrix":
        zero = Fraction(0) if mode == EXACT else 0j
        return cls._raw(tuple((zero,) * cols for _ in range(rows)), mode)

    @classmethod
    def diag(cls, values: Sequence, mode: str | None = None) -> "DenseMatrix":
        n = len(values)
        zero = 0 if mode != NUMERIC else 0.0
        return cls([[values[i] if i == j else zero for j in range(n)] for i in range(n)], mode)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], mode: str | None = None) -> "DenseMatrix":
        return cls([list(r) for r in zip(*columns)], mode)

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> "DenseMatrix":
        return cls._raw(tuple(tuple(complex(x) for x in row) for row in arr), NUMERIC)

    # basic protocol ---------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.mode == other.mode and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.mode, self.entries))
        return self._hash

    def __repr__(self):
        return f"DenseMatrix({[list(r) for r in self.entries]!r}, mode={self.mode!r})"

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix._raw(tuple(zip(*self.entries)), self.mode)

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) for x in r] for r in self.entries], dtype=complex)

    def to_numeric(self) -> "DenseMatrix":
        if self.mode == NUMERIC:
            return self
        return DenseMatrix._raw(tuple(tuple(complex(x) for x in r) for r in self.entries), NUMERIC)

    # arithmetic -------------------------------------------------------------
    def _same(self, other: "DenseMatrix"):
        if self.mode != other.mode:
            raise ModeMismatch(f"{self.mode} vs {other.mode} matrices")

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return DenseMatrix._raw(tuple(tuple(_n(a + b, self.mode) for a, b in zip(r, s))
                                      for r, s in zip(self.entries, other.entries)), self.mode)

    def __neg__(self) -> "DenseMatrix":
        return DenseMatrix._raw(tuple(tuple(-a for a in r) for r in self.entries), self.mode)

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        return self + (-other)

    def scale(self, c) -> "DenseMatrix":
        if self.mode == EXACT and mode_of(c) != EXACT:
            raise ModeMismatch("numeric scalar times exact matrix")
        return DenseMatrix._raw(tuple(tuple(_n(c * a, self.mode) for a in r) for r in self.entries),
                                self.mode)

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "DenseMatrix":
        if not self.is_square():
            raise NotSquare("power of a non-square matrix")
        result = DenseMatrix.identity(self.rows, self.mode)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def shift(self, c) -> "DenseMatrix":
        """self - c * Id."""
        if not self.is_square():
            raise NotSquare("shift of a non-square matrix")
        return self - DenseMatrix.identity(self.rows, self.mode).scale(c)

    def trace(self):
        if not self.is_square():
            raise NotSquare("trace of a non-square matrix")
        total = Fraction(0) if self.mode == EXACT else 0j
        for i in range(self.rows):
            total = total + self.entries[i][i]
        return _n(total, self.mode)

    def max_norm(self) -> float:
        return max(abs(complex(x)) for r in self.entries for x in r)

    def is_zero(self, tol: float | None = None) -> bool:
        if self.mode == EXACT or tol is None:
            return not any(x for r in self.entries for x in r)
        return all(abs(x) <= tol for r in self.entries for x in r)

    def close_to(self, other: "DenseMatrix", tol: float) -> bool:
        return (self - other).is_zero(tol)

    def flat_real(self) -> list:
        """Entries as a real vector (real parts then imaginary parts when complex)."""
        if self.mode == EXACT:
            from .scalar import GaussianRational
            re = [x.re if isinstance(x, GaussianRational) else x for r in self.entries for x in r]
            im = [x.im if isinstance(x, GaussianRational) else Fraction(0) for r in self.entries for x in r]
            return re + im
        re = [x.real for r in self.entries for x in r]
        im = [x.imag for r in self.entries for x in r]
        return re + im

    def is_real(self) -> bool:
        if self.mode == EXACT:
            return all(isinstance(x, Fraction) for r in self.entries for x in r)
        return all(x.imag == 0 for r in self.entries for x in r)


def _n(x, mode):
    return normalize(x) if mode == EXACT else x


def mat_mul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.mode != b.mode:
        raise ModeMismatch(f"{a.mode} @ {b.mode}")
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.shape} @ {b.shape}")
    bt = list(zip(*b.entries))
    zero = Fraction(0) if a.mode == EXACT else 0j
    out = []
    for row in a.entries:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out_row = []
        for col in bt:
            s = zero
            for k, x in nz:
                y = col[k]
                if y:
                    s = s + x * y
            out_row.append(_n(s, a.mode))
        out.append(tuple(out_row))
    return DenseMatrix._raw(tuple(out), a.mode)


def hstack(mats: Sequence[DenseMatrix]) -> DenseMatrix:
    mode = mats[0].mode
    return DenseMatrix._raw(tuple(tuple(x for m in mats for x in m.entries[i])
                                  for i in range(mats[0].rows)), mode)


def submatrix(a: DenseMatrix, rows: Sequence[int], cols: Sequence[int]) -> DenseMatrix:
    return DenseMatrix._raw(tuple(tuple(a.entries[i][j] for j in cols) for i in rows), a.mode)


# --- exact Gaussian elimination --------------------------------------------

def rref(rows: Sequence[Sequence], tol: float | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form. Exact when ``tol`` is None, else partial pivoting
    with entries below ``tol`` treated as zero."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    prow = 0
    for c in range(ncols):
        if prow >= len(m):
            break
        if tol is None:
            pick = next((i for i in range(prow, len(m)) if m[i][c]), None)
        else:
            best = max(range(prow, len(m)), key=lambda i: abs(m[i][c]))
            pick = best if abs(m[best][c]) > tol else None
        if pick is None:
            continue
        m[prow], m[pick] = m[pick], m[prow]
        pv = m[prow][c]
        m[prow] = [_norm_div(x, pv, tol) for x in m[prow]]
        for i in range(len(m)):
            if i != prow:
                f = m[i][c]
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], m[prow])]
        pivots.append(c)
        prow += 1
    return m[:prow], pivots


def _norm_div(x, pv, tol):
    return normalize(x / pv) if tol is None else x / pv


def _tol_for(a: DenseMatrix, tol: float | None) -> float | None:
    if a.mode == EXACT:
        return None
    if tol is None:
        raise ModeMismatch("numeric mode needs a rank tolerance")
    return tol * max(1.0, a.max_norm())


def kernel_basis(a: DenseMatrix, tol: float | None = None) -> list[tuple]:
    """Basis of the null space. Exact RREF in exact mode, SVD in numeric mode."""
    if a.mode == NUMERIC:
        t = _tol_for(a, tol)
        arr = a.to_numpy()
        _, s, vh = np.linalg.svd(arr)
        rank = int(np.sum(s > t))
        return [tuple(complex(x) for x in vh[i].conj()) for i in range(rank, a.cols)]
    red, pivots = rref(a.entries)
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * a.cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = normalize(-row[f])
        basis.append(tuple(v))
    return basis


def rank(a: DenseMatrix, tol: float | None = None) -> int:
    if a.mode == NUMERIC:
        t = _tol_for(a, tol)
        return int(np.sum(np.linalg.svd(a.to_numpy(), compute_uv=False) > t))
    return len(rref(a.entries)[1])


def vectors_rank(vectors: Sequence[Sequence], tol: float | None = None) -> int:
    if not vectors:
        return 0
    if tol is None:
        return len(rref(vectors)[1])
    arr = np.array(vectors, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(arr))))
    return int(np.sum(np.linalg.svd(arr, compute_uv=False) > tol * scale))


def inverse(a: DenseMatrix) -> DenseMatrix:
    if not a.is_square():
        raise NotSquare("inverse of a non-square matrix")
    if a.mode == NUMERIC:
        return DenseMatrix.from_numpy(np.linalg.inv(a.to_numpy()))
    n = a.rows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a.entries)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return DenseMatrix._raw(tuple(tuple(r[n:]) for r in red), EXACT)


def char_poly(a: DenseMatrix) -> MultiPoly:
    """det(y*Id - a) by Faddeev-LeVerrier; only divides by the integers 1..n."""
    if not a.is_square():
        raise NotSquare(f"char_poly of a {a.rows}x{a.cols} matrix")
    n = a.rows
    coeffs = [None] * (n + 1)
    one = Fraction(1) if a.mode == EXACT else 1 + 0j
    coeffs[n] = one
    eye = DenseMatrix.identity(n, a.mode)
    m = DenseMatrix.zeros(n, n, a.mode)
    for k in range(1, n + 1):
        m = (a @ m) + eye.scale(coeffs[n - k + 1])
        am = a @ m
        coeffs[n - k] = _n(-am.trace() / k, a.mode)
    return MultiPoly.from_coeffs(coeffs)


def poly_at_matrix(p: MultiPoly, a: DenseMatrix) -> DenseMatrix:
    """Horner evaluation of a univariate polynomial at a square matrix."""
    c = p.coeffs() if not p.is_zero() else [0]
    eye = DenseMatrix.identity(a.rows, a.mode)
    acc = DenseMatrix.zeros(a.rows, a.cols, a.mode)
    for coef in reversed(c):
        acc = (acc @ a) + eye.scale(coef if a.mode == EXACT else complex(coef))
    return acc


def substitute(f: MultiPoly, matrices: Sequence[DenseMatrix]) -> DenseMatrix:
    """f(A_1, ..., A_n) by direct substitution (the matrices must commute)."""
    if len(matrices) != f.n:
        raise DimensionMismatch(f"{len(matrices)} matrices for {f.n} variables")
    r = matrices[0].rows
    mode = matrices[0].mode
    out = DenseMatrix.zeros(r, r, mode)
    powers: dict = {}
    for exp, c in f.terms.items():
        term = DenseMatrix.identity(r, mode)
        for i, e in enumerate(exp):
            if e:
                if (i, e) not in powers:
                    powers[(i, e)] = matrices[i] ** e
                term = term @ powers[(i, e)]
        out = out + term.scale(c if mode == EXACT else complex(c))
    return out
