"""Command-line interface.

Exit status: 0 on success, 1 on a domain error (bad partition, integrality
failure, insufficient precision, ...), 2 when a verification suite finds a
mismatch, 64 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, TextIO

from .hlv import CurveData, ParabolicData, dim_moduli, hlv_H, hlv_kernel, poincare_polynomial, springer_count
from .macdonald import hall_littlewood, macdonald_htilde
from .partitions import Partition
from .seriesalg import TSMatrix, classify
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_MISMATCH = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2, which means mismatch here
        raise UsageError(f"{self.prog}: error: {message}")


def _composition(text: str) -> List[int]:
    parts = [int(x) for x in text.split(",")] if text.strip() not in ("", "-") else []
    if any(x < 0 for x in parts):
        raise ValueError("composition parts must be nonnegative")
    return parts


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hlvkit", description="Macdonald polynomials, HLV kernels and finite-field checks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("macdonald", help="modified Macdonald polynomial in the monomial basis")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--t0", action="store_true", help="set t = 0 (Hall-Littlewood)")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("hall-littlewood", help="H_lambda[X;q] in the monomial basis")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--json", action="store_true")

    for name, help_ in (("kernel", "the HLV kernel"), ("hlog", "(q-1)(1-t) pLog of the HLV kernel")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--genus", type=_nonneg, required=True)
        sp.add_argument("--punctures", type=_nonneg, required=True)
        sp.add_argument("--tmax", "--Tmax", dest="tmax", type=_nonneg, required=True)
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("poincare", help="Poincare polynomial of the character variety, in s = q^(1/2)")
    sp.add_argument("--genus", type=_nonneg, required=True)
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--mults", required=True, help='one row per puncture, e.g. "1,1;1,1;1,1"')
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("springer", help="t-series of affine Springer fiber counts")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--tmax", "--Tmax", dest="tmax", type=_nonneg, default=3)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("classify", help="type and degree of a nilpotent matrix over F_p[[x]]")
    sp.add_argument("matrix", help='e.g. "0,x;0,0 @p=2,m=4"')
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("verify", help="compare brute-force counts with the algebraic side")
    sp.add_argument("--suite", choices=sorted(SUITES), required=True)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--max", dest="nmax", type=_nonneg, default=None)
    return ap


def _emit(out: TextIO, args, obj, text: str) -> None:
    if getattr(args, "json", False):
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def _cmd_macdonald(args, out: TextIO) -> int:
    lam = Partition.parse(args.lam)
    F = hall_littlewood(lam) if args.t0 else macdonald_htilde(lam)
    _emit(out, args, {"lambda": list(lam), "t0": args.t0, "result": F.to_json()}, F.to_text())
    return EXIT_OK


def _cmd_hall_littlewood(args, out: TextIO) -> int:
    lam = Partition.parse(args.lam)
    F = hall_littlewood(lam)
    _emit(out, args, {"lambda": list(lam), "result": F.to_json()}, F.to_text())
    return EXIT_OK


def _cmd_kernel(args, out: TextIO) -> int:
    c = CurveData(args.genus, args.punctures)
    S = hlv_kernel(c, args.tmax) if args.command == "kernel" else hlv_H(c, args.tmax)
    _emit(out, args, {"genus": args.genus, "punctures": args.punctures, "tmax": args.tmax,
                      "result": S.to_json()}, S.to_text())
    return EXIT_OK


def _cmd_poincare(args, out: TextIO) -> int:
    P = ParabolicData.parse(args.rank, args.mults)
    poly = poincare_polynomial(args.genus, P)
    obj = {"genus": args.genus, "rank": args.rank, "mults": [list(r) for r in P.mults],
           "dim": dim_moduli(args.genus, P), "result": poly.to_json(), "text": poly.to_text()}
    _emit(out, args, obj, poly.to_text())
    return EXIT_OK


def _cmd_springer(args, out: TextIO) -> int:
    lam, mu = Partition.parse(args.lam), _composition(args.mu)
    coeffs = springer_count(lam, mu, args.tmax)
    lines = [f"t^{d}: {c.to_text()}" for d, c in enumerate(coeffs)]
    obj = {"lambda": list(lam), "mu": mu, "coeffs": [c.to_json() for c in coeffs]}
    _emit(out, args, obj, "\n".join(lines))
    return EXIT_OK


def _cmd_classify(args, out: TextIO) -> int:
    theta = TSMatrix.parse(args.matrix)
    res = classify(theta)
    obj = {"lambda": list(res.lam), "d": res.d, "nondegenerate": res.nondegenerate,
           "pole_order": res.pole_order, "precision": res.precision}
    text = (f"lambda = {res.lam.text()}\nd = {res.d}\nnondegenerate = {str(res.nondegenerate).lower()}\n"
            f"pole_order = {res.pole_order}\nprecision = {res.precision}")
    _emit(out, args, obj, text)
    return EXIT_OK


def _cmd_verify(args, out: TextIO) -> int:
    rep = run_suite(args.suite, args.p, args.nmax)
    out.write(json.dumps(rep.to_json(), sort_keys=True) + "\n")
    return EXIT_OK if rep.ok else EXIT_MISMATCH


_DISPATCH = {
    "macdonald": _cmd_macdonald,
    "hall-littlewood": _cmd_hall_littlewood,
    "kernel": _cmd_kernel,
    "hlog": _cmd_kernel,
    "poincare": _cmd_poincare,
    "springer": _cmd_springer,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
}


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except UsageError as exc:
        err.write(parser.format_usage() + str(exc) + "\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return _DISPATCH[args.command](args, out)
    except (ValueError, ArithmeticError, KeyError) as exc:
        err.write(f"hlvkit {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
