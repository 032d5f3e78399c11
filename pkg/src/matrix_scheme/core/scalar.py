"""Scalars: exact rationals, exact Gaussian rationals and complex doubles.

Exact rationals are plain :class:`fractions.Fraction` values. A Gaussian
rational with zero imaginary part is always collapsed back to a Fraction,
so real exact data never pays for the complex wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from ..errors import ModeMismatch

EXACT = "exact"
NUMERIC = "numeric"
DEFAULT_TOL = 1e-9


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    raise ModeMismatch(f"cannot mix exact and numeric scalars ({x!r})")


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", _rat(self.re))
        object.__setattr__(self, "im", _rat(self.im))

    @staticmethod
    def _coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(_rat(x), Fraction(0))

    def __add__(self, other):
        o = self._coerce(other)
        return normalize(GaussianRational(self.re + o.re, self.im + o.im))

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return normalize(GaussianRational(self.re * o.re - self.im * o.im,
                                          self.re * o.im + self.im * o.re))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return normalize(GaussianRational((self.re * o.re + self.im * o.im) / den,
                                          (self.im * o.re - self.re * o.im) / den))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        out = GaussianRational(Fraction(1), Fraction(0))
        for _ in range(k):
            out = GaussianRational._coerce(out * self)
        return normalize(out)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def normalize(x):
    """Canonical exact form: collapse Gaussian rationals with zero imaginary part."""
    if isinstance(x, GaussianRational):
        return x.re if x.im == 0 else x
    if isinstance(x, bool):
        raise ModeMismatch("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    return x


def mode_of(x) -> str:
    if isinstance(x, (Fraction, GaussianRational, int)) and not isinstance(x, bool):
        return EXACT
    if isinstance(x, (float, complex)):
        return NUMERIC
    raise ModeMismatch(f"not a scalar: {x!r}")


def to_mode(x, mode: str):
    if mode == EXACT:
        if mode_of(x) != EXACT:
            raise ModeMismatch(f"numeric scalar {x!r} in exact context")
        return normalize(x)
    return complex(x)


def is_real(x) -> bool:
    if isinstance(x, GaussianRational):
        return x.im == 0
    if isinstance(x, complex):
        return x.imag == 0
    return True


def real_part(x):
    if isinstance(x, GaussianRational):
        return x.re
    if isinstance(x, complex):
        return x.real
    return x


def is_zero(x, tol: float | None = None) -> bool:
    if tol is None or mode_of(x) == EXACT:
        return not x
    return abs(x) <= tol
