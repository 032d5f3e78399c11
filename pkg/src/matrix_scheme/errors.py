"""Exception hierarchy.

Everything derived from :class:`MatrixSchemeError` is a *domain* error: the
input was well formed but the mathematics refuses it. :class:`InputError`
marks malformed input and is what the CLI maps to exit status 2.
"""


class MatrixSchemeError(Exception):
    """Base class for domain errors."""


class DimensionMismatch(MatrixSchemeError):
    pass


class ModeMismatch(MatrixSchemeError):
    pass


class NotSquare(MatrixSchemeError):
    pass


class ZeroPolynomial(MatrixSchemeError):
    pass


class SplitFailure(MatrixSchemeError):
    """A polynomial has real but irrational roots; rerun in numeric mode."""


class NonRealSpectrum(MatrixSchemeError):
    def __init__(self, message, index=None, factor=None):
        super().__init__(message)
        self.index = index
        self.factor = factor


class ComplexResidue(MatrixSchemeError):
    """A maximal ideal with residue field C was found."""


class NotCommuting(MatrixSchemeError):
    def __init__(self, message, pair=None, entry=None):
        super().__init__(message)
        self.pair = pair
        self.entry = entry


class ClosureOverflow(MatrixSchemeError):
    pass


class NotContainingUnit(MatrixSchemeError):
    pass


class VariableCountMismatch(MatrixSchemeError):
    pass


class RingMismatch(MatrixSchemeError):
    pass


class MissingJet(MatrixSchemeError):
    pass


class JetOrderTooLow(MatrixSchemeError):
    pass


class InfiniteZeroSet(MatrixSchemeError):
    pass


class OutOfWindow(MatrixSchemeError):
    pass


class MatchingAmbiguity(MatrixSchemeError):
    pass


class InputError(Exception):
    """Malformed input (bad JSON, wrong schema, unparsable polynomial)."""


class AlgebraLawViolation(MatrixSchemeError):
    """Structure constants that are not commutative, associative and unital."""
