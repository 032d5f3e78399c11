from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matrix_scheme.core import MultiPoly
from matrix_scheme.errors import RingMismatch, VariableCountMismatch
from matrix_scheme.jets import (Jet, JetRing, graded_monomials, jet_ideal, jet_membership, jet_mul,
                                truncate)
from oracles import monomial_span_ideal_dim, taylor_coefficients

F = Fraction
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=3)


def poly_strategy(n, max_deg=5):
    exps = st.tuples(*[st.integers(0, max_deg)] * n)
    return st.dictionaries(exps, rationals, max_size=5).map(lambda d: MultiPoly(n, d))


def center_strategy(n):
    return st.tuples(*[rationals] * n)


@pytest.mark.parametrize("n,k", [(1, 0), (1, 4), (2, 3), (3, 2), (3, 5)])
def test_basis_size_and_order(n, k):
    ring = JetRing(n, k)
    assert ring.size == comb(n + k, k)
    degrees = [sum(e) for e in ring.basis]
    assert degrees == sorted(degrees)
    assert len(set(ring.basis)) == ring.size


def test_graded_lex_puts_first_variable_first():
    assert graded_monomials(2, 1) == [(0, 0), (1, 0), (0, 1)]


def test_truncate_examples():
    y = MultiPoly.variable(1, 0)
    assert truncate(y ** 5, JetRing(1, 1)).is_zero()
    jet = truncate(y ** 2, JetRing(1, 2, (1,)))
    assert jet.terms() == {(0,): 1, (1,): 2, (2,): 1}
    y1, y2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    jet2 = truncate(y1 ** 2 + y1 * y2, JetRing(2, 1, (1, 1)))
    assert jet2.terms() == {(0, 0): 2, (1, 0): 3, (0, 1): 1}


@given(poly_strategy(2), center_strategy(2), st.integers(0, 4))
def test_truncate_matches_substitution_oracle(f, center, k):
    jet = truncate(f, JetRing(2, k, center))
    assert jet.terms() == taylor_coefficients(f.terms, center, k)


@given(poly_strategy(2), poly_strategy(2), center_strategy(2), st.integers(0, 3))
def test_truncate_is_ring_homomorphism(f, g, center, k):
    ring = JetRing(2, k, center)
    assert truncate(f + g, ring) == truncate(f, ring) + truncate(g, ring)
    assert truncate(f * g, ring) == jet_mul(truncate(f, ring), truncate(g, ring))


@given(poly_strategy(3, 3), center_strategy(3), st.integers(1, 4), st.data())
def test_tower_compatibility(f, center, k, data):
    low = data.draw(st.integers(0, k - 1))
    ring = JetRing(3, k, center)
    assert truncate(f, ring).restrict(low) == truncate(f, ring.with_order(low))


def test_jet_mul_examples():
    r1 = JetRing(1, 1)
    t = r1.coordinate(0)
    assert (t * t).is_zero()
    r2 = JetRing(1, 2)
    a = r2.one() + r2.coordinate(0)
    b = r2.one() - r2.coordinate(0)
    assert (a * b).terms() == {(0,): 1, (2,): -1}
    assert r2.one() * a == a


def test_rings_must_match():
    with pytest.raises(RingMismatch):
        JetRing(1, 2).one() + JetRing(1, 2, (1,)).one()
    with pytest.raises(VariableCountMismatch):
        truncate(MultiPoly.variable(2, 0), JetRing(1, 2))


def test_jet_ideal_examples():
    r2 = JetRing(1, 2)
    assert jet_ideal([r2.coordinate(0)]).dim == 2
    r1 = JetRing(1, 1)
    assert jet_ideal([r1.monomial((2,))], r1).dim == 0


def test_two_variable_ideal_against_oracle():
    ring = JetRing(2, 2)
    gens = [ring.coordinate(0), ring.monomial((0, 2))]
    got = jet_ideal(gens)
    assert got.dim == monomial_span_ideal_dim(2, 2, [{(1, 0): F(1)}, {(0, 2): F(1)}]) == 4


@given(poly_strategy(2, 3), poly_strategy(2, 3), center_strategy(2), st.integers(0, 3))
def test_jet_ideal_matches_brute_force_span(g1, g2, center, k):
    ring = JetRing(2, k, center)
    jets = [truncate(g1, ring), truncate(g2, ring)]
    local = [dict(j.terms()) for j in jets]
    assert jet_ideal(jets, ring).dim == monomial_span_ideal_dim(2, k, local)


@given(poly_strategy(2, 3), center_strategy(2), st.integers(0, 3))
def test_jet_ideal_presentation_independent(g, center, k):
    ring = JetRing(2, k, center)
    jg = truncate(g, ring)
    assert jet_ideal([jg], ring).basis == jet_ideal([jg, jg * ring.coordinate(1)], ring).basis


def test_membership_examples():
    y = MultiPoly.variable(1, 0)
    r1 = JetRing(1, 1)
    ideal1 = jet_ideal([truncate(y ** 2, r1)], r1)
    assert jet_membership(r1.zero(), ideal1)
    assert not jet_membership(truncate(y, r1), ideal1)
    r3 = JetRing(1, 3)
    ideal3 = jet_ideal([truncate(y ** 2, r3)], r3)
    assert jet_membership(truncate(y ** 3 + y ** 2, r3), ideal3)


def test_jet_length_checked():
    with pytest.raises(VariableCountMismatch):
        Jet(JetRing(1, 2), (F(1),))
