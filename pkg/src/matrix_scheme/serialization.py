"""JSON encoding shared by the command line and the test fixtures.

Scalars: exact rationals are "p/q" strings, Gaussian rationals are
{"re": "p/q", "im": "p/q"}, doubles are [re, im] pairs. Matrices are
row-major nested lists. Polynomials are either term maps {"e1,e2": c} or
strings such as "y1^2 - 3*y2 + 1/2". Anything malformed raises InputError.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

import sympy
from sympy.polys.polyerrors import BasePolynomialError

from .core.matrix import DenseMatrix
from .core.poly import MultiPoly
from .core.scalar import EXACT, NUMERIC, GaussianRational, mode_of, normalize
from .determinacy import MembershipVerdict
from .errors import InputError
from .family import FamilyReport, MatrixFamily, SurrogateSample, matrix_family
from .jets import Jet, JetRing
from .matrixpoint import MatrixTuple, SchemeReport, new_tuple
from .weil import AlgebraDecomposition, FiniteCommAlgebra, WeilAlgebra


def dumps(obj: Any) -> str:
    """Canonical form: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


# --- scalars ----------------------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def encode_scalar(x):
    if isinstance(x, GaussianRational):
        return {"re": _frac_str(x.re), "im": _frac_str(x.im)}
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return _frac_str(Fraction(x))
    c = complex(x)
    return [c.real, c.imag]


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise InputError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {s!r}") from exc
    raise InputError(f"not a rational: {s!r}")


def decode_scalar(obj):
    """Strings, ints and {"re","im"} are exact; floats and [re, im] pairs are numeric."""
    if isinstance(obj, dict):
        if set(obj) != {"re", "im"}:
            raise InputError(f"Gaussian rational needs exactly 're' and 'im': {obj!r}")
        return normalize(GaussianRational(parse_fraction(obj["re"]), parse_fraction(obj["im"])))
    if isinstance(obj, list):
        if len(obj) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            raise InputError(f"complex double must be [re, im]: {obj!r}")
        return complex(obj[0], obj[1])
    if isinstance(obj, float):
        return complex(obj)
    return parse_fraction(obj)


def _to_mode(x, mode: str | None):
    if mode == NUMERIC:
        return complex(x)
    if mode == EXACT and mode_of(x) != EXACT:
        raise InputError(f"floating-point entry {x!r} in exact mode")
    return x


# --- matrices and tuples ----------------------------------------------------------

def encode_matrix(m: DenseMatrix) -> list:
    return [[encode_scalar(x) for x in row] for row in m.entries]


def decode_matrix(obj, mode: str | None = None) -> DenseMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise InputError("a matrix is a non-empty list of rows")
    if len({len(r) for r in obj}) != 1:
        raise InputError("matrix rows have different lengths")
    rows = [[decode_scalar(x) for x in r] for r in obj]
    if mode is None:
        mode = NUMERIC if any(mode_of(x) != EXACT for r in rows for x in r) else EXACT
    return DenseMatrix([[_to_mode(x, mode) for x in r] for r in rows], mode)


def _field(obj: dict, key: str):
    if not isinstance(obj, dict):
        raise InputError(f"expected a JSON object, got {type(obj).__name__}")
    if key not in obj:
        raise InputError(f"missing field {key!r}")
    return obj[key]


def decode_tuple(obj: dict, mode: str | None = None, tol: float | None = None) -> MatrixTuple:
    mode = mode or obj.get("mode")
    if mode not in (None, EXACT, NUMERIC):
        raise InputError(f"unknown mode {mode!r}")
    mats = [decode_matrix(m, mode) for m in _field(obj, "matrices")]
    if not mats:
        raise InputError("a tuple needs at least one matrix")
    if "r" in obj and obj["r"] != mats[0].rows:
        raise InputError(f"declared r = {obj['r']} but matrices are {mats[0].rows}x{mats[0].rows}")
    if "n" in obj and obj["n"] != len(mats):
        raise InputError(f"declared n = {obj['n']} but {len(mats)} matrices given")
    return new_tuple(mats, tol)


def encode_tuple(t: MatrixTuple) -> dict:
    return {"r": t.r, "n": t.n, "mode": t.mode, "matrices": [encode_matrix(m) for m in t.matrices]}


# --- polynomials ------------------------------------------------------------------

def _exp_key(e: Sequence[int]) -> str:
    return ",".join(str(x) for x in e)


def encode_poly(p: MultiPoly) -> dict:
    return {_exp_key(e): encode_scalar(c) for e, c in p.terms.items()}


def _symbols(n: int, prefix: str) -> list:
    if n == 1:
        return [sympy.Symbol(prefix)]
    return [sympy.Symbol(f"{prefix}{i + 1}") for i in range(n)]


def parse_poly_string(s: str, n: int, prefix: str = "y") -> MultiPoly:
    gens = _symbols(n, prefix)
    local = {str(g): g for g in gens}
    try:
        expr = sympy.sympify(s.replace("^", "**"), locals=local, rational=True)
        poly = sympy.Poly(expr, *gens, domain="QQ")
    except (sympy.SympifyError, BasePolynomialError, TypeError, SyntaxError) as exc:
        raise InputError(f"cannot parse polynomial {s!r} in {', '.join(map(str, gens))}") from exc
    terms = {tuple(int(x) for x in e): Fraction(int(c.p), int(c.q)) for e, c in poly.terms() if c}
    return MultiPoly(n, terms)


def decode_poly(obj, n: int | None = None, prefix: str = "y") -> MultiPoly:
    if isinstance(obj, str):
        if n is None:
            raise InputError("polynomial strings need a known variable count")
        return parse_poly_string(obj, n, prefix)
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        if n is None:
            raise InputError("constant polynomials need a known variable count")
        return MultiPoly.constant(n, decode_scalar(obj if isinstance(obj, float) else str(obj)))
    if not isinstance(obj, dict):
        raise InputError(f"a polynomial is a term map or a string: {obj!r}")
    terms = {}
    for key, c in obj.items():
        try:
            e = tuple(int(x) for x in key.split(","))
        except ValueError as exc:
            raise InputError(f"bad exponent key {key!r}") from exc
        if any(x < 0 for x in e):
            raise InputError(f"negative exponent in {key!r}")
        if n is None:
            n = len(e)
        if len(e) != n:
            raise InputError(f"exponent key {key!r} does not have {n} entries")
        terms[e] = decode_scalar(c)
    if n is None:
        raise InputError("empty term map needs a known variable count")
    return MultiPoly(n, terms)


# --- jets -------------------------------------------------------------------------

def encode_jet(j: Jet) -> dict:
    return {"n": j.ring.n, "k": j.ring.k, "center": [encode_scalar(c) for c in j.ring.center],
            "coeffs": {_exp_key(e): encode_scalar(c) for e, c in j.terms().items()}}


def decode_jet(obj: dict) -> Jet:
    n, k = _field(obj, "n"), _field(obj, "k")
    if not isinstance(n, int) or not isinstance(k, int):
        raise InputError("jet 'n' and 'k' must be integers")
    center = tuple(decode_scalar(c) for c in _field(obj, "center"))
    ring = JetRing(n, k, center)
    coeffs = [Fraction(0)] * ring.size
    for key, c in _field(obj, "coeffs").items():
        e = tuple(int(x) for x in key.split(","))
        if e not in ring.index:
            raise InputError(f"jet coefficient {key!r} is outside order {k}")
        coeffs[ring.index[e]] = decode_scalar(c)
    return Jet(ring, tuple(coeffs))


# --- algebras ---------------------------------------------------------------------

def encode_algebra(a: FiniteCommAlgebra | WeilAlgebra) -> dict:
    if isinstance(a, WeilAlgebra):
        a = a.algebra
    return {"dim": a.dim, "unit": [encode_scalar(x) for x in a.unit],
            "mul": [[[encode_scalar(x) for x in v] for v in row] for row in a.mul]}


def decode_algebra(obj: dict) -> FiniteCommAlgebra:
    dim = _field(obj, "dim")
    unit = tuple(decode_scalar(x) for x in _field(obj, "unit"))
    mul = tuple(tuple(tuple(decode_scalar(x) for x in v) for v in row) for row in _field(obj, "mul"))
    if len(unit) != dim or len(mul) != dim or any(len(row) != dim or any(len(v) != dim for v in row)
                                                 for row in mul):
        raise InputError(f"algebra tables do not match dim = {dim}")
    mode = NUMERIC if any(mode_of(x) != EXACT for x in unit) or any(
        mode_of(x) != EXACT for row in mul for v in row for x in v) else EXACT
    if mode == NUMERIC:
        unit = tuple(complex(x).real for x in unit)
        mul = tuple(tuple(tuple(complex(x).real for x in v) for v in row) for row in mul)
    return FiniteCommAlgebra(dim, mul, unit, mode)


def encode_decomposition(d: AlgebraDecomposition) -> dict:
    return {"factors": [dict(encode_algebra(f), nilpotency=f.nilpotency) for f in d.factors],
            "idempotents": [[encode_scalar(x) for x in e] for e in d.idempotents],
            "change_of_basis": encode_matrix(d.change_of_basis)}


# --- reports ----------------------------------------------------------------------

def _encode_point(q) -> list:
    return [encode_scalar(c) for c in q]


def encode_report(rep: SchemeReport) -> dict:
    out = {"admissible": rep.admissible, "r": rep.r, "mode": rep.mode,
           "support": [{"q": _encode_point(s.q), "mult": s.mult, "local_dim": s.local_dim,
                        "nilpotency": s.nilpotency, "filtration": list(s.filtration)}
                       for s in rep.support],
           "determinacy_order": rep.determinacy_order}
    if rep.error:
        out["error"] = {"type": rep.error, "message": rep.message}
    return out


def encode_verdict(v: MembershipVerdict) -> dict:
    witness = None
    if v.witness is not None:
        point, exp = v.witness
        witness = {"point": _encode_point(point), "exponent": list(exp) if exp is not None else None}
    return {"query": encode_poly(v.query), "kind": v.kind, "k": v.k, "verdict": v.verdict,
            "witness": witness}


def decode_family(obj: dict) -> MatrixFamily:
    window = _field(obj, "window")
    if not isinstance(window, list) or not all(isinstance(w, list) and len(w) == 2 for w in window):
        raise InputError("window must be a list of [lo, hi] pairs")
    window = [(parse_fraction(lo), parse_fraction(hi)) for lo, hi in window]
    m = len(window)
    if obj.get("m", m) != m:
        raise InputError(f"declared m = {obj['m']} but window has {m} axes")
    mats = []
    for mat in _field(obj, "matrices"):
        if not isinstance(mat, list) or not all(isinstance(r, list) for r in mat):
            raise InputError("family matrices are lists of rows")
        mats.append([[decode_poly(p, m, prefix="x") for p in row] for row in mat])
    r = obj.get("r")
    if mats and r is not None and r != len(mats[0]):
        raise InputError(f"declared r = {r} but matrices have {len(mats[0])} rows")
    if "n" in obj and obj["n"] != len(mats):
        raise InputError(f"declared n = {obj['n']} but {len(mats)} matrices given")
    return matrix_family(mats, window, r)


def encode_family_report(rep: FamilyReport) -> dict:
    samples = []
    for s in rep.samples:
        if isinstance(s, SurrogateSample):
            samples.append({"x": _encode_point(s.x), "dim": s.dim, "real_factors": s.real_factors,
                            "complex_factors": s.complex_factors})
        else:
            samples.append(dict(encode_report(s.report), x=_encode_point(s.x)))
    out = {"m": rep.m, "r": rep.r, "n": rep.n, "samples": samples}
    if rep.strata is None:
        out["admissible"] = list(rep.admissible_mask)
    if rep.branches is not None:
        out["branches"] = [{"samples": list(b.samples),
                            "points": [{"sample": i, "q": _encode_point(q)} for i, q in b.points]}
                           for b in rep.branches]
    if rep.strata is not None:
        out["strata"] = [{"signature": list(st.signature), "samples": list(st.samples)}
                         for st in rep.strata]
    return out


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
