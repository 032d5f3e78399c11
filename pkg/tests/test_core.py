from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matrix_scheme.core import (DenseMatrix, GaussianRational, MultiPoly, char_poly,
                                count_real_roots, divides, inverse, joint_spectral, kernel_basis,
                                poly_divmod, poly_gcd, rank, rational_roots, remainder_factor,
                                squarefree_decomposition, substitute)
from matrix_scheme.core.matrix import poly_at_matrix
from matrix_scheme.core.scalar import normalize
from matrix_scheme.core.spectral import exact_eigenvalues, numeric_eigenvalues
from matrix_scheme.errors import (DimensionMismatch, ModeMismatch, NonRealSpectrum,
                                  SplitFailure)
from oracles import leibniz_det, schoolbook_mul, sympy_charpoly

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def square(n):
    return st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n)


small_square = st.integers(1, 4).flatmap(square)
coeff_lists = st.lists(rationals, min_size=1, max_size=7)


def y():
    return MultiPoly.variable(1, 0)


def c(v):
    return MultiPoly.constant(1, v)


# --- scalars ----------------------------------------------------------------------

def test_gaussian_collapses_to_rational():
    z = GaussianRational(Fraction(1, 2), Fraction(1))
    assert normalize(z * z.conjugate()) == Fraction(5, 4)
    assert isinstance(normalize(z * z.conjugate()), Fraction)


def test_gaussian_division_roundtrip():
    a = GaussianRational(Fraction(3), Fraction(-2))
    b = GaussianRational(Fraction(1, 3), Fraction(5))
    assert (a / b) * b == a


# --- polynomials ------------------------------------------------------------------

def test_rational_roots_with_irrational_remainder():
    p = (y() - c(1)) * (y() - c(2)) * (y() ** 2 - c(2))
    roots, rem = rational_roots(p)
    assert roots == [(Fraction(1), 1), (Fraction(2), 1)]
    assert rem == 2


def test_rational_roots_multiplicities_and_fractions():
    p = (c(2) * y() - c(1)) ** 3 * (y() + c(3)) ** 2
    roots, rem = rational_roots(p)
    assert roots == [(Fraction(-3), 2), (Fraction(1, 2), 3)]
    assert rem == 0


def test_count_real_roots_and_remainder():
    p = (y() ** 2 + c(1)) * (y() - c(4))
    roots, _ = rational_roots(p)
    assert count_real_roots(remainder_factor(p, roots)) == 0
    assert count_real_roots(y() ** 2 - c(3)) == 2


@given(coeff_lists, coeff_lists)
def test_divmod_reconstructs(a, b):
    pa, pb = MultiPoly.from_coeffs(a), MultiPoly.from_coeffs(b)
    if pb.is_zero():
        return
    q, r = poly_divmod(pa, pb)
    assert q * pb + r == pa
    assert r.is_zero() or r.total_degree() < pb.total_degree()


@given(coeff_lists, coeff_lists, coeff_lists)
def test_gcd_divides_both(a, b, extra):
    g0 = MultiPoly.from_coeffs(extra)
    if g0.is_zero():
        return
    pa, pb = MultiPoly.from_coeffs(a) * g0, MultiPoly.from_coeffs(b) * g0
    if pa.is_zero() or pb.is_zero():
        return
    g = poly_gcd(pa, pb)
    assert divides(g, pa) and divides(g, pb) and divides(g0, g)


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(1, 3)), min_size=1, max_size=3, unique_by=lambda t: t[0]))
def test_roots_recovered_from_product(roots_with_mult):
    p = c(1)
    for a, m in roots_with_mult:
        p = p * (y() - c(a)) ** m
    roots, rem = rational_roots(p)
    assert rem == 0
    assert roots == sorted((Fraction(a), m) for a, m in roots_with_mult)
    assert sum(m for _, m in roots) == p.total_degree()
    for part, mult in squarefree_decomposition(p):
        assert divides(part ** mult, p)


def test_multivariate_arithmetic_and_evaluate():
    x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    f = (x1 + x2) ** 2 - x1 * x2
    assert f.coeff((1, 1)) == 1
    assert f.evaluate((Fraction(2), Fraction(3))) == 19
    assert f.derivative(0) == 2 * x1 + x2


def test_recenter_matches_evaluation():
    x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    f = x1 ** 3 * x2 - 2 * x2 ** 2 + 5
    center = (Fraction(1, 2), Fraction(-3))
    g = f.recenter(center)
    for pt in [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(2)), (Fraction(-1, 3), Fraction(1))]:
        assert g.evaluate(pt) == f.evaluate(tuple(a + b for a, b in zip(pt, center)))


def test_mixed_variable_counts_rejected():
    with pytest.raises(Exception):
        MultiPoly.variable(1, 0) + MultiPoly.variable(2, 0)


# --- matrices ---------------------------------------------------------------------

@given(small_square, small_square)
def test_matmul_matches_schoolbook(a, b):
    if len(a) != len(b):
        return
    got = DenseMatrix(a) @ DenseMatrix(b)
    assert [list(r) for r in got.entries] == schoolbook_mul(a, b)


@given(small_square)
def test_char_poly_matches_sympy_and_determinant(a):
    p = char_poly(DenseMatrix(a))
    assert p.coeffs() == sympy_charpoly(a)
    n = len(a)
    assert p.coeffs()[0] == (-1) ** n * leibniz_det(a)


@given(small_square)
def test_cayley_hamilton(a):
    m = DenseMatrix(a)
    assert poly_at_matrix(char_poly(m), m).is_zero()


@given(small_square)
def test_inverse_or_kernel(a):
    m = DenseMatrix(a)
    if leibniz_det(a) != 0:
        assert m @ inverse(m) == DenseMatrix.identity(len(a))
        assert rank(m) == len(a)
    else:
        ker = kernel_basis(m)
        assert ker and rank(m) == len(a) - len(ker)
        for v in ker:
            assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in m.entries)


def test_mode_mixing_rejected():
    with pytest.raises(ModeMismatch):
        DenseMatrix([[1, 0.5], [0, 1]])
    with pytest.raises(ModeMismatch):
        DenseMatrix([[1, 0], [0, 1]]) + DenseMatrix([[1.0, 0.0], [0.0, 1.0]], mode="numeric")


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        DenseMatrix([[1, 2]]) @ DenseMatrix([[1, 2]])


def test_substitute_polynomial():
    j = DenseMatrix([[0, 1], [0, 0]])
    f = y() ** 2 + 3 * y() + c(1)
    assert substitute(f, [j]) == DenseMatrix([[1, 3], [0, 1]])


def test_numeric_kernel_is_tolerant():
    m = DenseMatrix([[1.0, 2.0], [2.0, 4.0 + 1e-13]], mode="numeric")
    assert len(kernel_basis(m, 1e-9)) == 1


# --- spectral ---------------------------------------------------------------------

def test_exact_eigenvalues_errors():
    with pytest.raises(NonRealSpectrum) as info:
        exact_eigenvalues(DenseMatrix([[0, -1], [1, 0]]))
    assert info.value.index == 0
    with pytest.raises(SplitFailure):
        exact_eigenvalues(DenseMatrix([[0, 2], [1, 0]]))


def test_numeric_eigenvalue_clusters():
    m = DenseMatrix([[0.0, 1.0], [0.25, 0.0]], mode="numeric")
    vals = numeric_eigenvalues(m)
    assert [v for v, _ in vals] == pytest.approx([-0.5, 0.5])


def test_joint_spectral_projectors_resolve_identity():
    a = DenseMatrix([[2, 1, 0], [0, 2, 0], [0, 0, 5]])
    b = DenseMatrix([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    blocks = joint_spectral([a, b])
    assert [blk.point for blk in blocks] == [(2, 1), (5, -1)]
    total = blocks[0].projector + blocks[1].projector
    assert total == DenseMatrix.identity(3)
    for blk in blocks:
        assert blk.projector @ blk.projector == blk.projector
        assert blk.projector @ a == a @ blk.projector


def test_joint_spectral_numeric_agrees_with_exact():
    a = DenseMatrix([[3, 1, -2], [0, 3, 2], [0, 0, 5]])
    exact = joint_spectral([a])
    num = joint_spectral([a.to_numeric()], tol=1e-9)
    assert [b.multiplicity for b in exact] == [b.multiplicity for b in num]
    for be, bn in zip(exact, num):
        assert np.allclose(np.asarray(be.projector.to_numpy(), dtype=complex), bn.projector.to_numpy(), atol=1e-8)
