"""Command line interface: reproducible exact computations and checks.

Every command parses its inputs, runs an exact computation or verification
and emits either plain text or a structured JSON report.  Identical inputs
produce identical structured output except for the timing field, and
reports round-trip: re-serializing the parsed JSON reproduces the bytes.

Exit codes: 0 success, 2 malformed input, 3 verification failure or an
exceeded degree/word budget.
"""

from __future__ import annotations

import argparse
import sys
import time

from .coeff import rf, laurent_A
from .errors import (
    BudgetExceeded,
    DegreeTooHigh,
    DivisionByZero,
    InvalidIndex,
    MixedSystems,
    NotPrimitive,
    ParseError,
    SkeinError,
    WrongSystem,
)
from .fmt import (
    canonical_json,
    certificate_data,
    format_curve,
    format_nc,
    format_torus,
    format_twist_word,
    nc_data,
    parse_curve,
    parse_nc,
    parse_torus,
    parse_twist_word,
    torus_data,
)
from .freealg import DEFAULT_DEGREE_CAP, coxeter_relators, two_generator_system
from .quotient import (
    DEFAULT_WORD_BUDGET,
    build_span,
    member,
    verify_certificate,
)
from .torus import (
    boundary_element,
    curve_element,
    psi,
    set_memoization,
    twist_word_auto,
    witness,
    witness_boundary,
)
from . import verify as verify_mod

_INPUT_ERRORS = (ParseError, NotPrimitive, InvalidIndex, WrongSystem,
                 MixedSystems, DivisionByZero, ValueError, TypeError)
_BUDGET_ERRORS = (BudgetExceeded, DegreeTooHigh)

H_INV = rf(1, laurent_A(2) - laurent_A(-2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skeincalc",
        description="Exact skein-algebra calculator for the one-holed torus.")
    parser.add_argument("--format", choices=("text", "structured"),
                        default="text", help="output format")
    parser.add_argument("--degree-cap", type=int, default=None, metavar="N",
                        help="cap on twist-image degrees (default: per "
                             f"command, at least {DEFAULT_DEGREE_CAP})")
    parser.add_argument("--seed", type=int, default=0, metavar="N",
                        help="seed for randomized reduction orders")
    parser.add_argument("--no-memo", action="store_true",
                        help="disable memoization for audit runs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nf", help="normal form of an expression in x, y, z")
    p.add_argument("expr")

    p = sub.add_parser("mul", help="product of two expressions in x, y, z")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("twist", help="apply a twist word to an element")
    p.add_argument("word", help='e.g. "t1 t2^-1"')
    p.add_argument("expr")

    p = sub.add_parser("psi", help="image of a free-algebra expression")
    p.add_argument("expr", help='e.g. "A*X1*X2 - A^-1*X2*X1"')

    p = sub.add_parser("witness",
                       help="generating polynomial for a curve")
    p.add_argument("curve", help='"p,q" or "boundary"')

    p = sub.add_parser("member", help="bounded-degree ideal membership")
    p.add_argument("--target", required=True, help="free-algebra expression")
    p.add_argument("--degree", type=int, required=True, metavar="N")
    p.add_argument("--gens", default=None,
                   help="semicolon-separated generator expressions "
                        "(default: the defining relator elements)")
    p.add_argument("--certificate", default=None, metavar="FILE",
                   help="write the certificate to FILE as JSON")
    p.add_argument("--budget", type=int, default=DEFAULT_WORD_BUDGET,
                   metavar="N", help="word enumeration budget")

    p = sub.add_parser("span", help="row-reduce a degree-bounded ideal slice")
    p.add_argument("--degree", type=int, required=True, metavar="N")
    p.add_argument("--gens", default=None,
                   help="semicolon-separated generator expressions "
                        "(default: the defining relator elements)")
    p.add_argument("--budget", type=int, default=DEFAULT_WORD_BUDGET,
                   metavar="N", help="word enumeration budget")
    p.add_argument("--show-basis", action="store_true",
                   help="print every basis element")

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("suite", choices=sorted(verify_mod.SUITES))
    p.add_argument("--max-word", type=int, default=3, metavar="N",
                   help="equivariance: maximum operator-word length")
    p.add_argument("--length", type=int, default=6, metavar="N",
                   help="confluence: product-word length")
    p.add_argument("--orders", type=int, default=100, metavar="N",
                   help="confluence: randomized orders per word")
    p.add_argument("--max", type=int, default=8, metavar="N", dest="max_coord",
                   help="witness: coordinate range")
    p.add_argument("--target", default=None,
                   help="membership: target expression")
    p.add_argument("--degree", type=int, default=9, metavar="N",
                   help="membership: elimination degree bound")
    p.add_argument("--certificate", default=None, metavar="FILE",
                   help="membership: certificate output file")
    return parser


def _parse_gens(text: str | None, degree_cap: int):
    sys2 = two_generator_system()
    if text is None:
        return tuple(coxeter_relators())
    return tuple(parse_nc(part, sys2, degree_cap=degree_cap)
                 for part in text.split(";") if part.strip())


def _cap(args, default: int) -> int:
    return args.degree_cap if args.degree_cap is not None else default


def cmd_nf(args):
    el = parse_torus(args.expr)
    text = format_torus(el)
    return True, {"element": torus_data(el), "text": text}, [text], \
        {"expr": args.expr}


def cmd_mul(args):
    left = parse_torus(args.left)
    right = parse_torus(args.right)
    el = left * right
    text = format_torus(el)
    return True, {"element": torus_data(el), "text": text}, [text], \
        {"left": args.left, "right": args.right}


def cmd_twist(args):
    word = parse_twist_word(args.word)
    el = twist_word_auto(word, parse_torus(args.expr))
    text = format_torus(el)
    return True, {"element": torus_data(el), "text": text}, [text], \
        {"word": format_twist_word(word), "expr": args.expr}


def cmd_psi(args):
    sys2 = two_generator_system()
    p = parse_nc(args.expr, sys2, degree_cap=_cap(args, DEFAULT_DEGREE_CAP))
    el = psi(p)
    text = format_torus(el)
    return True, {"element": torus_data(el), "text": text}, [text], \
        {"expr": args.expr}


def cmd_witness(args):
    cap = _cap(args, DEFAULT_DEGREE_CAP)
    if args.curve.strip() == "boundary":
        w = witness_boundary(degree_cap=cap)
        verified = psi(w) == boundary_element()
        echo = {"curve": "boundary"}
    else:
        v = parse_curve(args.curve)
        w = witness(v, degree_cap=cap)
        verified = psi(w) == curve_element(v).scale(H_INV)
        echo = {"curve": format_curve(v)}
    text = format_nc(w)
    lines = [text, "verified" if verified else "verification failed"]
    payload = {"witness": nc_data(w), "text": text, "verified": verified}
    return verified, payload, lines, echo


def _write_certificate(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(payload))
        fh.write("\n")


def cmd_member(args):
    sys2 = two_generator_system()
    cap = _cap(args, max(32, args.degree))
    gens = _parse_gens(args.gens, cap)
    target = parse_nc(args.target, sys2, degree_cap=cap)
    span = build_span(gens, args.degree, budget=args.budget)
    res = member(target, span)
    echo = {"target": args.target, "degree": args.degree}
    if res.is_member:
        ok = verify_certificate(target, gens, res.certificate)
        cert = certificate_data(res.certificate)
        payload = {"status": res.status, "certificate": cert,
                   "entries": len(cert), "reverified": ok}
        lines = ["member", f"certificate entries: {len(cert)}",
                 f"reverified: {'yes' if ok else 'no'}"]
        if args.certificate:
            _write_certificate(args.certificate, {
                "target": args.target, "degree": args.degree,
                "certificate": cert})
            lines.append(f"certificate written to {args.certificate}")
            payload["certificate_file"] = args.certificate
        return ok, payload, lines, echo
    remainder = format_nc(res.remainder)
    payload = {"status": res.status, "remainder": remainder}
    lines = ["not in the ideal slice at this degree",
             f"remainder: {remainder}"]
    return False, payload, lines, echo


def cmd_span(args):
    cap = _cap(args, max(32, args.degree))
    gens = _parse_gens(args.gens, cap)
    span = build_span(gens, args.degree, budget=args.budget)
    basis = span.basis()
    payload = {"dimension": span.dimension, "degree": args.degree,
               "generators": len(gens)}
    lines = [f"dimension: {span.dimension}"]
    if args.show_basis:
        texts = [format_nc(b) for b in basis]
        payload["basis"] = texts
        lines.extend(texts)
    return True, payload, lines, \
        {"degree": args.degree, "generators": len(gens)}


def cmd_check(args):
    suite = args.suite
    echo = {"suite": suite}
    if suite == "equivariance":
        ok, payload = verify_mod.suite_equivariance(
            max_word=args.max_word,
            degree_cap=_cap(args, DEFAULT_DEGREE_CAP))
        echo["max_word"] = args.max_word
    elif suite == "braiding":
        ok, payload = verify_mod.suite_braiding(degree_cap=_cap(args, 24))
    elif suite == "boundary":
        ok, payload = verify_mod.suite_boundary()
    elif suite == "confluence":
        ok, payload = verify_mod.suite_confluence(
            length=args.length, orders=args.orders, seed=args.seed)
        echo.update(length=args.length, orders=args.orders, seed=args.seed)
    elif suite == "witness":
        ok, payload = verify_mod.suite_witness(
            max_coord=args.max_coord,
            degree_cap=_cap(args, DEFAULT_DEGREE_CAP))
        echo["max"] = args.max_coord
    else:
        if not args.target:
            raise ParseError("check membership requires --target")
        ok, payload = verify_mod.suite_membership(
            args.target, degree=args.degree, degree_cap=args.degree_cap)
        echo.update(target=args.target, degree=args.degree)
        if ok:
            path = args.certificate or "membership-certificate.json"
            _write_certificate(path, {
                "target": args.target, "degree": args.degree,
                "chain": payload.get("chain"),
                "certificate": payload.get("certificate")})
            payload["certificate_file"] = path
    lines = ["ok" if ok else "failed"]
    for key, value in payload.items():
        if key in ("chain", "certificate"):
            continue
        if isinstance(value, dict):
            lines.append(f"{key}: {canonical_json(value)}")
        else:
            lines.append(f"{key}: {value}")
    return ok, payload, lines, echo


_DISPATCH = {
    "nf": cmd_nf,
    "mul": cmd_mul,
    "twist": cmd_twist,
    "psi": cmd_psi,
    "witness": cmd_witness,
    "member": cmd_member,
    "span": cmd_span,
    "check": cmd_check,
}


def _emit(args, command, ok, payload, lines, echo, started):
    timing = int((time.perf_counter() - started) * 1000)
    if args.format == "structured":
        report = {"command": command, "inputs": echo, "result": payload,
                  "status": "ok" if ok else "failed", "timing": timing}
        print(canonical_json(report))
    else:
        for line in lines:
            print(line)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.no_memo:
        set_memoization(False)
    started = time.perf_counter()
    try:
        ok, payload, lines, echo = _DISPATCH[args.command](args)
    except _BUDGET_ERRORS as exc:
        _emit_error(args, exc, started)
        return 3
    except _INPUT_ERRORS as exc:
        _emit_error(args, exc, started)
        return 2
    finally:
        if args.no_memo:
            set_memoization(True)
    _emit(args, args.command, ok, payload, lines, echo, started)
    return 0 if ok else 3


def _emit_error(args, exc, started):
    timing = int((time.perf_counter() - started) * 1000)
    if args.format == "structured":
        report = {"command": args.command, "inputs": {},
                  "result": {"error": str(exc),
                             "kind": type(exc).__name__},
                  "status": "failed", "timing": timing}
        print(canonical_json(report))
    else:
        print(f"error: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
