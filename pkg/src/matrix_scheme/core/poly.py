"""Sparse multivariate polynomials and the univariate toolkit built on them."""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian
from math import comb
from types import MappingProxyType
from typing import Mapping, Sequence

from ..errors import DimensionMismatch, VariableCountMismatch, ZeroPolynomial
from .scalar import EXACT, NUMERIC, mode_of, normalize


class MultiPoly:
    """Polynomial in ``n`` variables as a map exponent-tuple -> nonzero coefficient."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple, object] | None = None):
        if n < 0:
            raise ValueError("variable count must be nonnegative")
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise VariableCountMismatch(f"exponent {exp} has length {len(exp)}, expected {n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = normalize(c) if mode_of(c) == EXACT else c
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.n = n
        self._terms = clean
        self._hash = None

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "MultiPoly":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c) -> "MultiPoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "MultiPoly":
        exp = [0] * n
        exp[i] = 1
        return cls(n, {tuple(exp): Fraction(1)})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, n: int = 1, var: int = 0) -> "MultiPoly":
        """Univariate polynomial in variable ``var`` from low-to-high coefficients."""
        terms = {}
        for d, c in enumerate(coeffs):
            exp = [0] * n
            exp[var] = d
            terms[tuple(exp)] = c
        return cls(n, terms)

    # inspection ---------------------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple, object]:
        return MappingProxyType(self._terms)

    @property
    def mode(self) -> str:
        modes = {mode_of(c) for c in self._terms.values()}
        return NUMERIC if NUMERIC in modes else EXACT

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree(self, var: int = 0) -> int:
        if not self._terms:
            return -1
        return max(e[var] for e in self._terms)

    def coeff(self, exp: tuple):
        return self._terms.get(tuple(exp), Fraction(0))

    def coeffs(self) -> list:
        """Low-to-high coefficient list of a univariate polynomial."""
        if self.n != 1:
            raise VariableCountMismatch("coeffs() needs a univariate polynomial")
        deg = self.degree()
        return [self._terms.get((d,), Fraction(0)) for d in range(deg + 1)]

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp in sorted(self._terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            mono = "*".join(
                (f"y{i + 1}" if self.n > 1 else "y") + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp) if e
            )
            c = self._terms[exp]
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # arithmetic ---------------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.n != other.n:
            raise VariableCountMismatch(f"{self.n} vs {other.n} variables")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.n, {e: c * other for e, c in self._terms.items()})
        self._check(other)
        terms: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(self.n, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # evaluation -------------------------------------------------------------
    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        if len(point) != self.n:
            raise VariableCountMismatch(f"point has {len(point)} coordinates, expected {self.n}")
        total = Fraction(0)
        for exp, c in self._terms.items():
            term = c
            for x, e in zip(point, exp):
                if e:
                    term = term * x ** e
            total = total + term
        return total

    def compose(self, polys: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``polys[i]`` for variable ``i``."""
        if len(polys) != self.n:
            raise VariableCountMismatch("compose needs one polynomial per variable")
        m = polys[0].n if polys else 0
        out = MultiPoly.zero(m)
        cache: dict = {}
        for exp, c in self._terms.items():
            term = MultiPoly.constant(m, c)
            for i, e in enumerate(exp):
                if e:
                    if (i, e) not in cache:
                        cache[(i, e)] = polys[i] ** e
                    term = term * cache[(i, e)]
            out = out + term
        return out

    def embed(self, n: int, var_map: Sequence[int]) -> "MultiPoly":
        """Re-index into ``n`` variables; variable ``i`` becomes ``var_map[i]``."""
        terms = {}
        for exp, c in self._terms.items():
            new = [0] * n
            for i, e in enumerate(exp):
                new[var_map[i]] += e
            terms[tuple(new)] = c
        return MultiPoly(n, terms)

    def derivative(self, var: int = 0) -> "MultiPoly":
        terms = {}
        for exp, c in self._terms.items():
            if exp[var]:
                new = list(exp)
                new[var] -= 1
                terms[tuple(new)] = c * exp[var]
        return MultiPoly(self.n, terms)

    def recenter(self, center: Sequence) -> "MultiPoly":
        """Coefficients of ``f(center + t)`` as a polynomial in ``t`` (binomial expansion)."""
        if len(center) != self.n:
            raise VariableCountMismatch("center has wrong dimension")
        terms: dict = {}
        for exp, c in self._terms.items():
            ranges = [range(e + 1) for e in exp]
            for js in _cartesian(*ranges):
                coef = c
                for q, e, j in zip(center, exp, js):
                    if j < e:
                        coef = coef * comb(e, j) * q ** (e - j)
                if coef:
                    terms[js] = terms.get(js, 0) + coef
        return MultiPoly(self.n, terms)


# --- univariate helpers on low-to-high Fraction lists ------------------------

def _trim(c: list) -> list:
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def _divmod(a: list, b: list) -> tuple[list, list]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, bc in enumerate(b):
            r[i + shift] -= f * bc
        r[-1] = Fraction(0)
        r = _trim(r)
    return _trim(q), _trim(r)


def _monic(a: list) -> list:
    a = _trim(a)
    return [c / a[-1] for c in a] if a else a


def _gcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _divmod(a, b)[1]
    return _monic(a)


def _deriv(a: list) -> list:
    return _trim([c * i for i, c in enumerate(a)][1:])


def _as_list(p: MultiPoly) -> list:
    if p.n != 1:
        raise VariableCountMismatch("univariate polynomial expected")
    return [normalize(c) for c in p.coeffs()]


def _as_poly(c: list) -> MultiPoly:
    return MultiPoly.from_coeffs(c)


def poly_divmod(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    q, r = _divmod(_as_list(a), _as_list(b))
    return _as_poly(q), _as_poly(r)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    return _as_poly(_gcd(_as_list(a), _as_list(b)))


def divides(p: MultiPoly, f: MultiPoly) -> bool:
    if p.is_zero():
        return f.is_zero()
    return poly_divmod(f, p)[1].is_zero()


def squarefree_decomposition(p: MultiPoly) -> list[tuple[MultiPoly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime ``a_i`` with p ~ prod a_i^i."""
    f = _as_list(p)
    if not f:
        raise ZeroPolynomial("squarefree decomposition of the zero polynomial")
    out = []
    df = _deriv(f)
    a = _gcd(f, df)
    b = _divmod(f, a)[0]
    c = _divmod(df, a)[0]
    d = [x - y for x, y in _zip_pad(c, _deriv(b))]
    i = 1
    while len(_trim(b)) > 1:
        ai = _gcd(b, d)
        b = _divmod(b, ai)[0]
        c = _divmod(d, ai)[0]
        d = [x - y for x, y in _zip_pad(c, _deriv(b))]
        if len(ai) > 1:
            out.append((_as_poly(_monic(ai)), i))
        i += 1
    return out


def _zip_pad(a: list, b: list):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _eval(c: list, x):
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _sturm_chain(c: list) -> list[list]:
    chain = [_trim(c), _deriv(c)]
    while _trim(chain[-1]):
        r = _divmod(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append([-x for x in r])
    return [s for s in chain if s]


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _changes_at(chain, x) -> int:
    return _sign_changes(_eval(s, x) for s in chain)


def _changes_at_inf(chain, sign: int) -> int:
    vals = []
    for s in chain:
        lead = s[-1]
        deg = len(s) - 1
        vals.append(lead if (sign > 0 or deg % 2 == 0) else -lead)
    return _sign_changes(vals)


def count_real_roots(p: MultiPoly) -> int:
    """Number of distinct real roots (Sturm)."""
    c = _as_list(p)
    if not c:
        raise ZeroPolynomial("real-root count of the zero polynomial")
    chain = _sturm_chain(c)
    return _changes_at_inf(chain, -1) - _changes_at_inf(chain, +1)


def _cauchy_bound(c: list) -> Fraction:
    lead = abs(c[-1])
    return 1 + max((abs(x) / lead for x in c[:-1]), default=Fraction(0))


def _integer_roots_monic_int(c: list) -> list[int]:
    """Integer roots of a squarefree integer polynomial, via Sturm isolation."""
    chain = _sturm_chain(c)
    bound = _cauchy_bound(c)
    lo, hi = -bound - 1, bound + 1
    roots = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        k = _changes_at(chain, a) - _changes_at(chain, b)   # roots in (a, b]
        if k == 0:
            continue
        if b - a <= 1:
            # (a, b] contains at most one integer candidate pair; test both ends exactly
            for z in {int(_floor(b)), int(_floor(b)) - 1}:
                if a < z <= b and _eval(c, z) == 0:
                    roots.append(z)
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(set(roots))


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def rational_roots(p: MultiPoly) -> tuple[list[tuple[Fraction, int]], int]:
    """All rational roots with multiplicities, plus the degree of what is left over.

    Squarefree factorization first, then for each squarefree factor the
    substitution y = z / D (D the common denominator of the monic factor)
    turns rational roots into integer roots of a monic integer polynomial,
    which are isolated exactly with Sturm sequences.
    """
    if p.n != 1:
        raise VariableCountMismatch("rational_roots needs a univariate polynomial")
    if p.is_zero():
        raise ZeroPolynomial("rational_roots of the zero polynomial")
    if p.mode != EXACT or any(not isinstance(normalize(c), Fraction) for c in p.terms.values()):
        raise DimensionMismatch("rational_roots needs exact rational coefficients")
    found: list[tuple[Fraction, int]] = []
    for factor, mult in squarefree_decomposition(p):
        c = _monic(_as_list(factor))
        den = 1
        for x in c:
            den = den * x.denominator // _gcd_int(den, x.denominator)
        deg = len(c) - 1
        # z = D*y ; D^deg * f(z/D) is monic with integer coefficients
        zc = [c[i] * den ** (deg - i) for i in range(deg + 1)]
        zc = [int(x) for x in zc]
        for z in _integer_roots_monic_int([Fraction(x) for x in zc]):
            found.append((Fraction(z, den), mult))
    found.sort()
    remainder = p.total_degree() - sum(m for _, m in found)
    return found, remainder


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def remainder_factor(p: MultiPoly, roots: list[tuple[Fraction, int]]) -> MultiPoly:
    """The monic cofactor of p after removing the given rational roots."""
    c = _as_list(p)
    for r, m in roots:
        for _ in range(m):
            c = _divmod(c, [-r, Fraction(1)])[0]
    return _as_poly(_monic(c))


def binomial(n: int, k: int) -> int:
    return comb(n, k)
