"""Command-line front end: JSON in, canonical JSON (or a text summary) out.

Exit status: 0 on success, 1 when the mathematics refuses the input (the
error object is written to stdout), 2 when the input itself is malformed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence, TextIO

from .core.scalar import DEFAULT_TOL, EXACT, NUMERIC
from .determinacy import ideal, in_k_jet_closure, in_point_closure
from .errors import InputError, MatrixSchemeError
from .family import analyze_and_track, surrogate_family
from .matrixpoint import evaluate, scheme_report
from .serialization import (decode_algebra, decode_family, decode_jet, decode_poly, decode_tuple,
                            dumps, encode_algebra, encode_decomposition, encode_family_report,
                            encode_matrix, encode_report, encode_scalar, encode_verdict, load_json,
                            parse_fraction)
from .weil import (decompose, is_weil, monomial_algebra, nilpotency_index, polynomial_quotient,
                   tensor, verify_algebra)

TOL_ENV = "MATRIX_SCHEME_TOL"


def _resolve_tol(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise InputError(f"{TOL_ENV}={env!r} is not a number") from exc
    return DEFAULT_TOL


# --- subcommands ------------------------------------------------------------------

def _analyze(data, args, tol):
    t = decode_tuple(data, args.mode, tol)
    return encode_report(scheme_report(t))


def _eval(data, args, tol):
    t = decode_tuple(data.get("tuple") if isinstance(data, dict) else None, args.mode, tol)
    if "jets" in data:
        jets = [decode_jet(j) for j in data["jets"]]
        return {"matrix": encode_matrix(evaluate(t, jets=jets))}
    if "f" not in data:
        raise InputError("eval needs 'f' or 'jets'")
    f = decode_poly(data["f"], t.n)
    if f.n != t.n:
        raise InputError(f"f has {f.n} variables, the tuple has {t.n} matrices")
    return {"matrix": encode_matrix(evaluate(t, f))}


def _family(data, args, tol):
    if args.mode == EXACT:
        print("warning: family grids always run in numeric mode", file=sys.stderr)
    fam = decode_family(data)
    counts = data.get("samples", [21] * fam.m)
    if not isinstance(counts, list) or len(counts) != fam.m or not all(isinstance(c, int) for c in counts):
        raise InputError(f"'samples' must list {fam.m} integer counts")
    op = data.get("op", "analyze")
    if op == "analyze":
        rep = analyze_and_track(fam, counts, tol, data.get("radius"))
    elif op == "surrogate":
        rep = surrogate_family(fam, counts, tol)
    else:
        raise InputError(f"unknown family op {op!r}")
    return encode_family_report(rep)


def _determinacy(data, args, tol):
    gens_raw = data.get("gens") if isinstance(data, dict) else None
    if not gens_raw:
        raise InputError("determinacy needs a non-empty 'gens' list")
    n = data.get("n")
    if n is None:
        keyed = [g for g in gens_raw + [data.get("query")] if isinstance(g, dict) and g]
        n = len(next(iter(keyed[0])).split(",")) if keyed else 1
    gens = [decode_poly(g, n) for g in gens_raw]
    query = decode_poly(data.get("query"), n)
    zeros = data.get("zeros")
    if zeros is not None:
        zeros = [[parse_fraction(c) for c in z] for z in zeros]
    presentation = ideal(gens, zeros)
    k = data.get("k")
    if k is None:
        return encode_verdict(in_point_closure(query, presentation.zeros))
    if not isinstance(k, int) or k < 0:
        raise InputError("'k' must be a nonnegative integer")
    return encode_verdict(in_k_jet_closure(query, presentation, k))


def _algebra(desc):
    if not isinstance(desc, dict):
        raise InputError("an algebra is a JSON object")
    if "quotient" in desc:
        return polynomial_quotient(decode_poly(desc["quotient"], 1, prefix="x"))
    if "monomial" in desc:
        mono = desc["monomial"]
        return monomial_algebra(mono["n"], [tuple(g) for g in mono["gens"]])
    return decode_algebra(desc)


def _weil(data, args, tol):
    op = data.get("op") if isinstance(data, dict) else None
    if op == "tensor":
        algebras = data.get("algebras")
        if not isinstance(algebras, list) or len(algebras) != 2:
            raise InputError("tensor needs exactly two 'algebras'")
        a, b = (_algebra(x) for x in algebras)
        prod = tensor(a, b)
        alg = getattr(prod, "algebra", prod)
        weil = is_weil(alg)
        return {"algebra": encode_algebra(alg), "is_weil": weil,
                "nilpotency": nilpotency_index(alg) if weil else None}
    a = _algebra(data.get("algebra"))
    if op == "decompose":
        return encode_decomposition(decompose(a))
    if op == "is_weil":
        return {"is_weil": is_weil(a)}
    if op == "nilpotency":
        if not is_weil(a):
            raise InputError("nilpotency index is defined for Weil algebras only")
        return {"nilpotency": nilpotency_index(a)}
    if op == "verify":
        v = verify_algebra(a, tol if a.mode == NUMERIC else None)
        return {"ok": v.ok, "law": v.law, "indices": list(v.indices) if v.indices else None}
    raise InputError(f"unknown weil op {op!r}")


COMMANDS = {"analyze": _analyze, "eval": _eval, "family": _family,
            "determinacy": _determinacy, "weil": _weil}


# --- text summaries ---------------------------------------------------------------

def _fmt(x) -> str:
    enc = encode_scalar(x) if not isinstance(x, (str, list, dict)) else x
    if isinstance(enc, list):
        return f"{enc[0]:.6g}" if enc[1] == 0 else f"{enc[0]:.6g}{enc[1]:+.6g}i"
    if isinstance(enc, str) and enc.endswith("/1"):
        return enc[:-2]
    return str(enc)


def _text(command: str, out: dict) -> str:
    lines = []
    if "error" in out and "admissible" not in out:
        return f"error: {out['error']['type']}: {out['error']['message']}\n"
    if command == "analyze":
        if not out["admissible"]:
            return f"not admissible: {out['error']['type']}: {out['error']['message']}\n"
        lines.append(f"rank {out['r']}, {out['mode']} mode, determinacy order {out['determinacy_order']}")
        for s in out["support"]:
            q = ", ".join(_fmt(c) for c in s["q"])
            lines.append(f"  q = ({q})  mult {s['mult']}  local dim {s['local_dim']}  "
                         f"index {s['nilpotency']}  filtration {tuple(s['filtration'])}")
    elif command == "eval":
        for row in out["matrix"]:
            lines.append("  ".join(_fmt(x) for x in row))
    elif command == "family":
        for s in out["samples"]:
            x = ", ".join(_fmt(c) for c in s["x"])
            if "dim" in s:
                lines.append(f"x = ({x})  dim {s['dim']}  factors {s['real_factors']}+{s['complex_factors']}")
            elif s["admissible"]:
                pts = "; ".join(f"{', '.join(_fmt(c) for c in p['q'])} (x{p['mult']})" for p in s["support"])
                lines.append(f"x = ({x})  order {s['determinacy_order']}  support {pts}")
            else:
                lines.append(f"x = ({x})  not admissible ({s['error']['type']})")
        if "branches" in out:
            lines.append(f"{len(out['branches'])} branch component(s)")
        for st in out.get("strata", []):
            lines.append(f"stratum {tuple(st['signature'])}: samples {st['samples']}")
    elif command == "determinacy":
        order = "" if out["k"] is None else f" (k = {out['k']})"
        verdict = "member" if out["verdict"] else "not a member"
        lines.append(f"{out['kind']} closure{order}: {verdict}")
        if out["witness"]:
            w = out["witness"]
            lines.append(f"  witness at ({', '.join(_fmt(c) for c in w['point'])})"
                         + (f", monomial {tuple(w['exponent'])}" if w["exponent"] else ""))
    else:
        for key in sorted(out):
            val = out[key]
            if isinstance(val, dict) and "dim" in val:
                val = f"algebra of dimension {val['dim']}"
            elif key == "factors":
                val = ", ".join(f"dim {f['dim']} index {f['nilpotency']}" for f in val)
            elif key in ("idempotents", "change_of_basis"):
                continue
            lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


# --- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-", help="input JSON file, or - for stdin")
    common.add_argument("--mode", choices=[EXACT, NUMERIC], help="override the input's arithmetic mode")
    common.add_argument("--tol", type=float, help=f"numeric tolerance (fallback: ${TOL_ENV})")
    common.add_argument("--format", choices=["json", "text"], default="json")
    parser = argparse.ArgumentParser(prog="matrix-scheme",
                                     description="Commuting matrix tuples as maps to R^n.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="scheme report of a matrix tuple")
    sub.add_parser("eval", parents=[common], help="evaluate a polynomial or jets on a tuple")
    sub.add_parser("family", parents=[common], help="sample a polynomial family over a base window")
    sub.add_parser("determinacy", parents=[common], help="point and jet closure membership")
    sub.add_parser("weil", parents=[common], help="Weil algebra operations")
    return parser


def run(argv: Sequence[str] | None = None, stdin: TextIO | None = None,
        stdout: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    fmt = args.format

    def emit(obj, command):
        stdout.write(dumps(obj) if fmt == "json" else _text(command, obj))

    def fail(kind: str, message: str, code: int):
        emit({"error": {"type": kind, "message": message}}, args.command)
        return code

    try:
        tol = _resolve_tol(args)
        if args.tol is not None and args.mode == EXACT:
            print("warning: --tol has no effect in exact mode", file=sys.stderr)
        if args.input == "-":
            text = stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        data = load_json(text)
        if not isinstance(data, dict):
            raise InputError("top-level JSON must be an object")
        out = COMMANDS[args.command](data, args, tol)
    except InputError as exc:
        return fail("InputError", str(exc), 2)
    except OSError as exc:
        return fail("InputError", f"cannot read input: {exc}", 2)
    except MatrixSchemeError as exc:
        return fail(type(exc).__name__, str(exc), 1)
    except (ValueError, TypeError, KeyError, AttributeError) as exc:
        return fail("InputError", f"{type(exc).__name__}: {exc}", 2)
    emit(out, args.command)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
