"""Expression grammar, JSON/text reports, and command dispatch.

Grammar (extended with unary minus at the head of a sum and powers of
parenthesized groups, which the catalog operators need):

    operator := ["-"] prod { ("+"|"-") prod }
    prod     := atom { ("*"|"/") atom }
    atom     := primary ["^" nat]
    primary  := nat | "z" | "D" | "theta" | "(" operator ")"

Juxtaposition is never multiplication; "*" is mandatory.  "/" requires both
sides free of derivation symbols.  Mixing D and theta is an error.  Scalars
embed as order-0 operators, so the usual precedence rules give the intended
non-commutative semantics.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .catalog import CATALOG, catalog_get, catalog_ids
from .diffop import (
    Basis,
    DiffOp,
    INFINITY,
    RatMat,
    TruncatedSeries,
    companion,
    is_infinity,
)
from .errors import DomainError, MixedBasisError, ParseError, UsageError
from .exact_arith import Fraction as _F, Poly, RatFn, poly_text, primes_upto, ratfn_text
from .growth import (
    ExactLog,
    GalochkinTrace,
    SizeRadiusReport,
    bombieri_report,
    galochkin_trace,
    radius_estimate,
    size_estimate,
)
from .local_analysis import IndicialData, OperatorProfile, classify_operator, exponents
from .p_curvature import GlobalScan, global_scan, prime_report
from .pade import build_pade_system, pade_type2, residual_order, siegel_bound_report


# ---------------------------------------------------------------------------
# tokenizer and parser


_SYMBOLS = "+-*/^()"


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind, self.value, self.line, self.col = kind, value, line, col


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 0
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("num", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and text[j].isalnum():
                j += 1
            word = text[i:j]
            if word not in ("z", "D", "theta"):
                raise ParseError(f"unknown symbol {word!r}", line, col)
            tokens.append(_Token(word, word, line, col))
            col += j - i
            i = j
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token(ch, ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("end", None, line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.basis: Optional[Basis] = None

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind=None) -> _Token:
        tok = self.tokens[self.pos]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.kind!r}", tok.line, tok.col)
        self.pos += 1
        return tok

    def _use_basis(self, basis: Basis, tok: _Token):
        if self.basis is None:
            self.basis = basis
        elif self.basis is not basis:
            raise MixedBasisError("both D and theta appear in one expression")

    # values are ("scalar", RatFn) or ("op", DiffOp)

    def parse(self) -> DiffOp:
        value = self.sum()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"trailing input at {tok.kind!r}", tok.line, tok.col)
        if value[0] == "scalar":
            return DiffOp(self.basis or Basis.D, [value[1]])
        return value[1]

    def sum(self):
        negate = False
        if self.peek().kind == "-":
            self.take()
            negate = True
        acc = self.prod()
        if negate:
            acc = _neg(acc)
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.prod()
            acc = _add(acc, rhs) if op == "+" else _add(acc, _neg(rhs))
        return acc

    def prod(self):
        acc = self.atom()
        while self.peek().kind in ("*", "/"):
            tok = self.take()
            rhs = self.atom()
            if tok.kind == "*":
                acc = _mul(acc, rhs)
            else:
                if acc[0] != "scalar" or rhs[0] != "scalar":
                    raise ParseError("division needs scalar operands", tok.line, tok.col)
                if rhs[1].is_zero():
                    raise ParseError("division by zero", tok.line, tok.col)
                acc = ("scalar", acc[1] / rhs[1])
        return acc

    def atom(self):
        value = self.primary()
        if self.peek().kind == "^":
            self.take()
            tok = self.take("num")
            n = tok.value
            if value[0] == "scalar":
                value = ("scalar", value[1] ** n)
            else:
                from .diffop import op_pow

                value = ("op", op_pow(value[1], n))
        return value

    def primary(self):
        tok = self.take()
        if tok.kind == "num":
            return ("scalar", RatFn.const(tok.value))
        if tok.kind == "z":
            return ("scalar", RatFn.Z)
        if tok.kind == "D":
            self._use_basis(Basis.D, tok)
            return ("op", DiffOp(Basis.D, [0, 1]))
        if tok.kind == "theta":
            self._use_basis(Basis.THETA, tok)
            return ("op", DiffOp(Basis.THETA, [0, 1]))
        if tok.kind == "(":
            inner = self.sum()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {tok.kind!r}", tok.line, tok.col)


def _neg(v):
    if v[0] == "scalar":
        return ("scalar", -v[1])
    return ("op", v[1].scaled(-1))


def _promote(v, basis: Basis) -> DiffOp:
    if v[0] == "op":
        return v[1]
    return DiffOp(basis, [v[1]])


def _add(a, b):
    if a[0] == "scalar" and b[0] == "scalar":
        return ("scalar", a[1] + b[1])
    from .diffop import op_add

    basis = a[1].basis if a[0] == "op" else b[1].basis
    return ("op", op_add(_promote(a, basis), _promote(b, basis)))


def _mul(a, b):
    if a[0] == "scalar" and b[0] == "scalar":
        return ("scalar", a[1] * b[1])
    from .diffop import op_mul

    basis = a[1].basis if a[0] == "op" else b[1].basis
    return ("op", op_mul(_promote(a, basis), _promote(b, basis)))


def parse_operator(text: str) -> DiffOp:
    return _Parser(text).parse()


def operator_text(l: DiffOp) -> str:
    """Canonical rendering, parseable by parse_operator."""
    if l.is_zero():
        return "0"
    sym = "D" if l.basis is Basis.D else "theta"
    parts = []
    for k in range(l.order, -1, -1):
        c = l.coeff(k)
        if c.is_zero():
            continue
        coeff = f"({ratfn_text(c)})"
        if k == 0:
            parts.append(coeff)
        elif k == 1:
            parts.append(f"{coeff}*{sym}")
        else:
            parts.append(f"{coeff}*{sym}^{k}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# serialization


def frac_str(q) -> str:
    q = Fraction(q)
    return str(q)


def dec15(x: float) -> str:
    return f"{x:.15g}"


def poly_json(p: Poly) -> dict:
    return {"coeffs": [frac_str(c) for c in p.coeffs], "text": poly_text(p, "x")}


def exactlog_json(v: ExactLog) -> dict:
    return {
        "terms": [[p, frac_str(e)] for p, e in v.terms.items()],
        "decimal": dec15(v.to_float()),
    }


def location_json(loc) -> object:
    if is_infinity(loc):
        return "inf"
    if isinstance(loc, Poly):
        return {"algebraic_class": poly_json(loc)}
    return frac_str(loc)


def indicial_json(data: IndicialData) -> dict:
    return {
        "location": location_json(data.point.location),
        "regular": data.point.regular,
        "pole_profile": [list(x) for x in data.point.pole_profile],
        "indicial_polynomial": None if data.phi is None else poly_json(data.phi),
        "rational_exponents": [frac_str(e) for e in data.rational_exponents],
        "nonrational_factors": [poly_json(f) for f in data.nonrational_factors],
        "apparent_singularity_candidate": data.apparent_candidate,
    }


def profile_json(profile: OperatorProfile) -> dict:
    return {
        "operator": operator_text(profile.operator),
        "order": profile.operator.order,
        "basis": profile.operator.basis.value,
        "points": [indicial_json(pt) for pt in profile.points],
        "fuchsian": profile.fuchsian,
        "all_exponents_rational": profile.all_exponents_rational,
        "katz_consistent": profile.katz_consistent,
    }


def scan_json(scan: GlobalScan) -> dict:
    return {
        "subject": scan.subject,
        "primes": list(scan.primes),
        "reports": [
            {
                "prime": r.prime,
                "status": r.status,
                "nilpotence_index": r.nilpotence_index,
                "method_agreement": r.method_agreement,
                "detail": r.detail,
            }
            for r in scan.reports
        ],
        "verdict": scan.verdict,
    }


def trace_json(trace: GalochkinTrace) -> dict:
    return {
        "T": poly_json(trace.T) | {"text": poly_text(trace.T, "z")},
        "s": list(trace.s_values),
        "q": [str(q) for q in trace.q],
        "log_q_over_s": [dec15(x) for x in trace.log_q_over_s],
    }


def bombieri_json(rep: SizeRadiusReport) -> dict:
    return {
        "n": rep.n,
        "s": rep.s_max,
        "prime_bound": rep.prime_bound,
        "h_table": {str(p): frac_str(e) for p, e in sorted(rep.h_table.items()) if e},
        "sigma_hat": exactlog_json(rep.sigma_hat),
        "rho_hat": exactlog_json(rep.rho_hat),
        "slack": dec15(rep.slack),
        "lower_ok": rep.lower_ok,
        "upper_ok": rep.upper_ok,
        "sandwich_ok": rep.sandwich_ok,
    }


# ---------------------------------------------------------------------------
# input resolution


def _parse_point(text: str):
    if text in ("inf", "infinity", "oo"):
        return INFINITY
    try:
        return Fraction(text)
    except ValueError as exc:
        raise UsageError(f"bad point {text!r}") from exc


def _parse_primes(text: str) -> list[int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError as exc:
        raise UsageError(f"bad prime range {text!r}, expected a..b") from exc
    return [p for p in primes_upto(hi) if p >= lo]


def _resolve_operator(args) -> tuple[str, DiffOp]:
    if getattr(args, "catalog", None):
        entry = catalog_get(args.catalog)
        return entry.id, entry.operator
    if getattr(args, "expr", None):
        op = parse_operator(args.expr)
        if op.order < 1:
            raise UsageError("expression has no derivation symbol")
        return args.expr, op
    raise UsageError("need an operator expression or --catalog ID")


def _resolve_system(args) -> tuple[str, RatMat]:
    if getattr(args, "catalog", None):
        entry = catalog_get(args.catalog)
        if entry.system is not None:
            return entry.id, entry.system
        return entry.id, companion(entry.operator)
    if getattr(args, "expr", None):
        return args.expr, companion(parse_operator(args.expr))
    raise UsageError("need an operator expression or --catalog ID")


def _load_series_file(path: str) -> list[TruncatedSeries]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    order = data["trunc_order"]
    out = []
    for comp in data["components"]:
        coeffs = [Fraction(int(num), int(den)) for num, den in comp]
        if len(coeffs) != order:
            raise UsageError("component length does not match trunc_order")
        out.append(TruncatedSeries(coeffs))
    return out


# ---------------------------------------------------------------------------
# commands


def _cmd_classify(args) -> dict:
    label, op = _resolve_operator(args)
    return {"input": label, "profile": profile_json(classify_operator(op))}


def _cmd_exponents(args) -> dict:
    label, op = _resolve_operator(args)
    point = _parse_point(args.point)
    rationals, leftovers = exponents(op, point)
    return {
        "input": label,
        "point": "inf" if is_infinity(point) else frac_str(point),
        "rational_exponents": [frac_str(e) for e in rationals],
        "nonrational_factors": [poly_json(f) for f in leftovers],
    }


def _cmd_pcurv(args) -> dict:
    # single-prime detail: BadPrime propagates (exit 2), unlike in scans
    from .p_curvature import is_nilpotent, operator_nilpotence_by_division, p_curvature

    label, op = _resolve_operator(args)
    g = companion(op)
    gp = p_curvature(g, args.prime)
    nil, index = is_nilpotent(gp)
    division = operator_nilpotence_by_division(op, args.prime)
    return {
        "input": label,
        "prime": args.prime,
        "status": "Nilpotent" if nil else "NonNilpotent",
        "nilpotence_index": index,
        "method_agreement": division == nil,
    }


def _cmd_scan(args) -> dict:
    primes = _parse_primes(args.primes)
    if getattr(args, "catalog", None):
        entry = catalog_get(args.catalog)
        subject = entry.operator if entry.system is None else entry.system
        if isinstance(subject, RatMat):
            scan = global_scan(subject, primes, subject_id=entry.id)
        else:
            scan = global_scan(subject, primes, subject_id=entry.id)
    else:
        label, op = _resolve_operator(args)
        scan = global_scan(op, primes, subject_id=label)
    return scan_json(scan)


def _cmd_galochkin(args) -> dict:
    label, g = _resolve_system(args)
    trace = galochkin_trace(g, args.smax)
    return {"input": label} | trace_json(trace)


def _cmd_size(args) -> dict:
    label, g = _resolve_system(args)
    value = size_estimate(g, args.s, args.prime_bound)
    return {
        "input": label,
        "s": args.s,
        "prime_bound": args.prime_bound,
        "sigma_hat": exactlog_json(value),
    }


def _cmd_radius(args) -> dict:
    label, g = _resolve_system(args)
    value = radius_estimate(g, args.prime, args.smax)
    return {
        "input": label,
        "prime": args.prime,
        "s_max": args.smax,
        "rho_p_hat": exactlog_json(value),
    }


def _cmd_bombieri(args) -> dict:
    label, g = _resolve_system(args)
    rep = bombieri_report(g, args.s, args.prime_bound, slack=args.slack)
    return {"input": label} | bombieri_json(rep)


def _cmd_pade(args) -> dict:
    if args.series:
        f = _load_series_file(args.series)
        q, ps = pade_type2(f, args.N, args.M)
        res = residual_order(q, ps, f)
        return {
            "input": args.series,
            "N": args.N,
            "M": args.M,
            "Q": poly_json(q) | {"text": poly_text(q, "z")},
            "P": [poly_json(p) | {"text": poly_text(p, "z")} for p in ps],
            "residual_order": res,
            "siegel": _siegel_json(siegel_bound_report(f, args.N, args.M)),
        }
    entry = catalog_get(args.catalog) if args.catalog else None
    if entry is None or entry.system is None:
        raise UsageError("pade needs --series FILE or a --catalog entry with a system")
    order = args.N + args.M + 8
    f = [gen.series(order) for gen in entry.components]
    system = build_pade_system(f, entry.system, args.N, args.M)
    return {
        "input": entry.id,
        "N": system.big_n,
        "M": system.big_m,
        "Q": poly_json(system.q) | {"text": poly_text(system.q, "z")},
        "P": [poly_json(p) | {"text": poly_text(p, "z")} for p in system.p],
        "T": poly_json(system.t) | {"text": poly_text(system.t, "z")},
        "residual_order": system.residual,
        "tower_degrees": [
            [p.degree for p in vec] for vec in system.tower
        ],
        "delta_degree": system.delta.degree,
        "delta_is_zero": system.delta.is_zero(),
        "siegel": _siegel_json(system.siegel),
    }


def _siegel_json(data: dict) -> dict:
    return {
        "equations": data["equations"],
        "unknowns": data["unknowns"],
        "height": str(data["height"]),
        "denominator_scale": str(data["denominator_scale"]),
        "bound": dec15(data["bound"]),
    }


def _cmd_catalog(args) -> dict:
    if args.action == "list":
        return {
            "entries": [
                {
                    "id": e.id,
                    "description": e.description,
                    "order": e.operator.order,
                    "has_system": e.system is not None,
                }
                for e in CATALOG.values()
            ]
        }
    entry = catalog_get(args.id)
    return {
        "id": entry.id,
        "description": entry.description,
        "operator": operator_text(entry.operator),
        "order": entry.operator.order,
        "basis": entry.operator.basis.value,
        "system_dimension": None if entry.system is None else entry.system.n,
        "ordinary_point": frac_str(entry.ordinary_point),
    }


_COMMANDS = {
    "classify": _cmd_classify,
    "exponents": _cmd_exponents,
    "pcurv": _cmd_pcurv,
    "scan": _cmd_scan,
    "galochkin": _cmd_galochkin,
    "size": _cmd_size,
    "radius": _cmd_radius,
    "bombieri": _cmd_bombieri,
    "pade": _cmd_pade,
    "catalog": _cmd_catalog,
}


def _build_argparser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="gop", description="exact analysis of linear differential operators over Q(z)")
    top.add_argument("--format", choices=("json", "text"), default="json")
    sub = top.add_subparsers(dest="command", required=True)

    def with_operator(p):
        p.add_argument("expr", nargs="?", help="operator expression")
        p.add_argument("--catalog", help="catalog id instead of an expression")

    p = sub.add_parser("classify")
    with_operator(p)
    p = sub.add_parser("exponents")
    with_operator(p)
    p.add_argument("--point", required=True)
    p = sub.add_parser("pcurv")
    with_operator(p)
    p.add_argument("--prime", type=int, required=True)
    p = sub.add_parser("scan")
    with_operator(p)
    p.add_argument("--primes", default="2..50")
    p = sub.add_parser("galochkin")
    with_operator(p)
    p.add_argument("--smax", type=int, default=30)
    p = sub.add_parser("size")
    with_operator(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--prime-bound", type=int, required=True, dest="prime_bound")
    p = sub.add_parser("radius")
    with_operator(p)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--smax", type=int, required=True)
    p = sub.add_parser("bombieri")
    with_operator(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--prime-bound", type=int, required=True, dest="prime_bound")
    p.add_argument("--slack", type=float, default=0.3)
    p = sub.add_parser("pade")
    p.add_argument("--series", help="JSON series-vector file")
    p.add_argument("--catalog", help="catalog id with a system")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p = sub.add_parser("catalog")
    p.add_argument("action", choices=("list", "get"))
    p.add_argument("id", nargs="?")
    return top


def _render_text(value, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def run_command(argv) -> tuple[int, dict]:
    """Dispatch one command; returns (exit code, envelope)."""
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (0 if exc.code == 0 else 1), {}
    started = time.perf_counter()
    try:
        result = _COMMANDS[args.command](args)
        code = 0
    except UsageError as exc:
        return 1, {
            "tool": "gop",
            "version": __version__,
            "command": args.command,
            "error": str(exc),
        }
    except DomainError as exc:
        return 2, {
            "tool": "gop",
            "version": __version__,
            "command": args.command,
            "error": str(exc),
            "error_kind": type(exc).__name__,
        }
    envelope = {
        "tool": "gop",
        "version": __version__,
        "command": args.command,
        "result": result,
        "timing_ms": int((time.perf_counter() - started) * 1000),
    }
    return code, envelope


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json"
    if "--format" in argv:
        idx = argv.index("--format")
        if idx + 1 < len(argv):
            fmt = argv[idx + 1]
            del argv[idx : idx + 2]
    code, envelope = run_command(argv)
    if envelope:
        if fmt == "text":
            print("\n".join(_render_text(envelope)))
        else:
            print(json.dumps(envelope, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
