from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matrix_scheme.core import MultiPoly
from matrix_scheme.determinacy import (hierarchy_check, ideal, in_k_jet_closure, in_point_closure,
                                       minimal_jet_order, zero_set)
from matrix_scheme.errors import InfiniteZeroSet, SplitFailure, VariableCountMismatch
from oracles import taylor_coefficients

F = Fraction


def y():
    return MultiPoly.variable(1, 0)


def c(v):
    return MultiPoly.constant(1, v)


def test_zero_set_examples():
    assert zero_set([y() ** 2 - 3 * y() + c(2)]) == [1, 2]
    assert zero_set([y() ** 2, y() ** 3]) == [0]
    assert zero_set([y() - c(1), y() - c(2)]) == []
    with pytest.raises(SplitFailure):
        zero_set([y() ** 2 - c(2)])
    with pytest.raises(InfiniteZeroSet):
        zero_set([MultiPoly.zero(1)])


def test_ideal_validates_zeros():
    y1, y2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    assert ideal([y1 * y2, y1 ** 2], zeros=[(0, 0)]).n == 2
    with pytest.raises(ValueError):
        ideal([y1 * y2])
    with pytest.raises(ValueError):
        ideal([y1 - MultiPoly.constant(2, 1)], zeros=[(0, 0)])
    with pytest.raises(VariableCountMismatch):
        ideal([y1], zeros=[(0,)])


def test_point_closure():
    assert in_point_closure(y() ** 3, [(F(0),)]).verdict
    v = in_point_closure(y() - c(1), [(F(0),), (F(1),)])
    assert not v.verdict and v.witness == ((F(0),), None)


def test_jet_closure_examples():
    i = ideal([y() ** 2])
    v = in_k_jet_closure(y(), i, 1)
    assert not v.verdict and v.witness == ((F(0),), (1,))
    assert in_k_jet_closure(y(), i, 0).verdict
    assert in_k_jet_closure(y() ** 2 + y() ** 5, i, 4).verdict


def test_minimal_jet_order_examples():
    i = ideal([y() ** 3])
    assert minimal_jet_order(y(), i, 5) == 1
    assert minimal_jet_order(y() ** 2, i, 5) == 2
    assert minimal_jet_order(y() ** 3, i, 5) is None


def test_two_point_ideal_needs_both_points():
    i = ideal([(y() - c(1)) ** 2 * (y() + c(1))])
    assert [z for z, in i.zeros] == [-1, 1]
    v = in_k_jet_closure(y() - c(1), i, 1)
    assert not v.verdict and v.witness[0] == (F(-1),)
    assert in_k_jet_closure((y() - c(1)) ** 2 * (y() + c(1)) * y(), i, 3).verdict


def _order_at(f: MultiPoly, a: Fraction) -> int:
    coeffs = taylor_coefficients(f.terms, (a,), f.total_degree())
    return min((e[0] for e in coeffs), default=10 ** 9)


polys = st.lists(st.integers(-4, 4), min_size=1, max_size=6).map(MultiPoly.from_coeffs)


@given(polys, st.integers(-2, 2), st.integers(1, 4), st.integers(0, 5))
def test_principal_ideal_membership_matches_vanishing_order(f, a, m, k):
    i = ideal([(y() - c(a)) ** m])
    expected = _order_at(f, F(a)) >= min(m, k + 1)
    assert in_k_jet_closure(f, i, k).verdict == expected


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=3,
                unique_by=lambda t: t[0]),
       st.lists(polys, min_size=1, max_size=4))
def test_hierarchy_holds(roots_with_mult, fs):
    g = c(1)
    for a, m in roots_with_mult:
        g = g * (y() - c(a)) ** m
    report = hierarchy_check(ideal([g]), fs, k_max=4)
    assert report.ok, report.violations
    for f, _, jets in report.rows:
        first_out = next((k for k, v in enumerate(jets) if not v), None)
        assert minimal_jet_order(f, ideal([g]), 4) == first_out
