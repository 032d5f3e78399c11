"""Commuting matrix tuples as maps from a matrix point to R^n.

Support points, fiber algebras and their Weil decompositions, jet-based
evaluation, near-point determinacy of polynomial ideals, and families over a
sampled base.
"""

from .core import DEFAULT_TOL, EXACT, NUMERIC, DenseMatrix, GaussianRational, MultiPoly
from .determinacy import (ideal, in_k_jet_closure, in_point_closure, minimal_jet_order,
                          zero_set)
from .errors import InputError, MatrixSchemeError
from .family import (analyze_family, matrix_family, sample_fiber, surrogate_family,
                     track_branches)
from .jets import Jet, JetRing, jet_ideal, jet_membership, truncate
from .matrixpoint import (MatrixTuple, evaluate, fiber_algebra, joint_decompose, new_tuple,
                          pushforward, scheme_report, surrogate)
from .weil import (FiniteCommAlgebra, WeilAlgebra, decompose, is_weil, nilpotency_index,
                   tensor)

__version__ = "0.1.0"
