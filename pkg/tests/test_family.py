from fractions import Fraction

import numpy as np
import pytest

from matrix_scheme.core import MultiPoly
from matrix_scheme.errors import (DimensionMismatch, MatchingAmbiguity, NotCommuting, OutOfWindow,
                                  VariableCountMismatch)
from matrix_scheme.family import (analyze_and_track, analyze_family, grid, matrix_family,
                                  sample_fiber, surrogate_family, track_branches)

F = Fraction


def x():
    return MultiPoly.variable(1, 0)


def test_grid_is_rational_and_inclusive():
    fam = matrix_family([[[x(), 0], [0, 0]]], [(-1, 1)])
    pts = grid(fam, [5])
    assert pts == [(F(-1),), (F(-1, 2),), (F(0),), (F(1, 2),), (F(1),)]
    assert grid(fam, [1]) == [(F(-1),)]
    with pytest.raises(VariableCountMismatch):
        grid(fam, [3, 3])


def test_family_must_commute_symbolically():
    with pytest.raises(NotCommuting):
        matrix_family([[[0, 1], [0, 0]], [[x(), 0], [0, 0]]], [(0, 1)])
    fam = matrix_family([[[0, 1], [0, 0]], [[x(), 0], [0, x()]]], [(0, 1)])
    assert fam.n == 2


def test_sample_fiber_is_exact_and_windowed():
    fam = matrix_family([[[0, 1], [x(), 0]]], [(-1, 1)])
    t = sample_fiber(fam, (F(1, 4),))
    assert t.matrices[0].entries[1][0] == F(1, 4)
    with pytest.raises(OutOfWindow):
        sample_fiber(fam, (4,))


def test_square_root_family():
    fam = matrix_family([[[0, 1], [x(), 0]]], [(-1, 1)])
    rep = analyze_and_track(fam, [41])
    mask = rep.admissible_mask
    assert sum(mask) == 21
    assert mask == tuple(s.x[0] >= 0 for s in rep.samples)
    origin = rep.samples[20].report
    assert [(s.mult, s.filtration) for s in origin.support] == [(2, (2, 1, 0))]
    for s in rep.samples[21:]:
        qs = sorted(float(p.q[0]) for p in s.report.support)
        root = float(s.x[0]) ** 0.5
        assert np.allclose(qs, [-root, root], atol=1e-6)
    assert len(rep.branches) == 1


def test_crossing_free_lines_are_two_branches():
    fam = matrix_family([[[x(), 0], [0, x() + MultiPoly.constant(1, 1)]]], [(-1, 1)])
    rep = analyze_and_track(fam, [11])
    assert len(rep.branches) == 2
    assert all(len(b.samples) == 11 for b in rep.branches)


def test_constant_family_is_one_branch():
    fam = matrix_family([[[0, 1], [0, 0]]], [(0, 1)])
    rep = analyze_and_track(fam, [6])
    assert len(rep.branches) == 1
    assert all(s.report.support[0].filtration == (2, 1, 0) for s in rep.samples)


def test_moving_fat_point():
    fam = matrix_family([[[x(), 1], [0, x()]]], [(-1, 1)])
    rep = analyze_family(fam, [9])
    for s in rep.samples:
        [pt] = s.report.support
        assert (pt.mult, pt.filtration) == (2, (2, 1, 0))
        assert pt.q[0] == pytest.approx(float(s.x[0]))


def test_close_candidates_within_tie_tolerance_are_ambiguous():
    fam = matrix_family([[[x(), 0], [0, x() + MultiPoly.constant(1, 1)]]], [(0, 1)])
    rep = analyze_family(fam, [3])
    with pytest.raises(MatchingAmbiguity):
        track_branches(rep, radius=5.0, tie_tol=10.0)


def test_tracking_needs_one_dimensional_base():
    y1 = MultiPoly.variable(2, 0)
    fam = matrix_family([[[y1, 0], [0, 0]]], [(0, 1), (0, 1)])
    rep = analyze_family(fam, [2, 2])
    assert len(rep.samples) == 4
    with pytest.raises(VariableCountMismatch):
        track_branches(rep)


def test_family_without_matrices():
    fam = matrix_family([], [(0, 1)], r=2)
    with pytest.raises(DimensionMismatch):
        analyze_family(fam, [3])
    rep = surrogate_family(fam, [3])
    assert [s.signature for s in rep.samples] == [(1, 1)] * 3


def test_surrogate_strata():
    fam = matrix_family([[[0, x()], [0, 0]]], [(-1, 1)])
    rep = surrogate_family(fam, [5])
    assert [st.signature for st in rep.strata] == [(2, 1), (1, 1)]
    assert rep.strata[1].samples == (2,)
    fam = matrix_family([[[x(), 0], [0, -x()]]], [(-1, 1)])
    rep = surrogate_family(fam, [3])
    assert {st.signature: st.samples for st in rep.strata} == {(2, 2): (0, 2), (1, 1): (1,)}
