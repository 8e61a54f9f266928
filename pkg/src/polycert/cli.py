"""Command-line front end.

Commands::

    certify  --poly TEXT | --input FILE  [--mode auto|pos|neg|nopert] [--seed N] [--k N] [--out FILE]
    verify   --poly TEXT | --input FILE  --cert FILE
    sospert  --poly TEXT | --input FILE  [--epsilon P/Q] [--t N] [--out FILE]
    eval     --poly TEXT | --input FILE  --point "p1/q1,...,pn/qn"

Exit status: 0 on success (nonnegative, valid, PSD), 1 on a negative
outcome (witness found, invalid certificate, not PSD), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from .certify import CertificationError, PertType, certificate_to_json, hj_sos_rur, verify_certificate
from .polycore import PolySyntaxError, evaluate, infer_variables, parse_poly
from .rational import Q, fmt
from .sospert import certify_sos_perturbed, sos_pert_report_json, sos_pert_threshold

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_MALFORMED = 2

MOTZKIN_ALIASES = {"motzkin": "x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1"}


class UsageError(Exception):
    """Malformed command-line input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep argparse from exiting the interpreter
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polycert", description="Exact nonnegativity certificates for polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--poly", help="polynomial text, e.g. 'x1^2 - 4*x1 + 3'")
        group.add_argument("--input", help="file containing the polynomial text")

    c = sub.add_parser("certify", help="certify nonnegativity or find a negative point")
    source(c)
    c.add_argument("--mode", choices=["auto", "pos", "neg", "nopert"], default="auto")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--k", type=int, default=4)
    c.add_argument("--out", help="certificate file (default: certificate.json)", default="certificate.json")

    v = sub.add_parser("verify", help="check a certificate file against a polynomial")
    source(v)
    v.add_argument("--cert", required=True)

    s = sub.add_parser("sospert", help="Gram-matrix check for f + eps*(1+|x|^2)^t")
    source(s)
    s.add_argument("--epsilon", default="1")
    s.add_argument("--t", type=int)
    s.add_argument("--out", help="write the JSON report here")

    e = sub.add_parser("eval", help="evaluate the polynomial exactly at a rational point")
    source(e)
    e.add_argument("--point", required=True)
    return parser


def _read_poly(args) -> tuple:
    if args.poly is not None:
        text = args.poly
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from None
    text = MOTZKIN_ALIASES.get(text.strip().lower(), text)
    variables = infer_variables(text)
    return parse_poly(text, variables), variables


def _write(path: str, data: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(data)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _cmd_certify(args, out: TextIO) -> int:
    f, variables = _read_poly(args)
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    cert = hj_sos_rur(f, seed=args.seed, k=args.k, mode=args.mode, variables=variables)
    _write(args.out, certificate_to_json(cert))
    if cert.nonneg:
        if cert.pert_type is PertType.NEGPERT:
            print(f"NONNEGATIVE (strictly positive: negative perturbation with lambda = {fmt(cert.lam)})", file=out)
        elif cert.pert_type is PertType.POSPERT:
            print(f"NONNEGATIVE (positive perturbation with lambda = {fmt(cert.lam)})", file=out)
        else:
            print("NONNEGATIVE (no perturbation)", file=out)
        print(f"certificate written to {args.out}", file=out)
        return EXIT_OK
    point = ",".join(fmt(x) for x in cert.witness.point)
    print(f"NEGATIVE(witness) point = ({point}) value = {fmt(cert.witness.value)}", file=out)
    print(f"certificate written to {args.out}", file=out)
    return EXIT_NEGATIVE


def _cmd_verify(args, out: TextIO) -> int:
    f, _ = _read_poly(args)
    try:
        with open(args.cert, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.cert}: {exc}") from None
    report = verify_certificate(f, text)
    for name, ok, detail in report.checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=out)
    print("VALID" if report.valid else "INVALID", file=out)
    return EXIT_OK if report.valid else EXIT_NEGATIVE


def _cmd_sospert(args, out: TextIO) -> int:
    f, _ = _read_poly(args)
    try:
        eps = Q(args.epsilon)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--epsilon: {exc}") from None
    if eps <= 0:
        raise UsageError("--epsilon must be positive")
    if f.degree % 2:
        raise UsageError("the polynomial must have even degree")
    if f.constant_term < 0:
        raise UsageError("the polynomial must satisfy f(0) >= 0")
    t = args.t if args.t is not None else sos_pert_threshold(f, eps)
    if t < max(f.degree, 0) // 2:
        raise UsageError(f"--t must be at least {max(f.degree, 0) // 2}")
    result = certify_sos_perturbed(f, eps, t)
    report = sos_pert_report_json(f, result)
    if args.out:
        _write(args.out, report)
    out.write(report)
    print("PSD" if result.report.psd else "NOT PSD", file=out)
    return EXIT_OK if result.report.psd else EXIT_NEGATIVE


def _cmd_eval(args, out: TextIO) -> int:
    f, _ = _read_poly(args)
    try:
        point = [Q(x) for x in args.point.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--point: {exc}") from None
    if len(point) != f.nvars:
        raise UsageError(f"--point has {len(point)} coordinates, the polynomial has {f.nvars} variables")
    print(fmt(evaluate(f, point)), file=out)
    return EXIT_OK


COMMANDS = {"certify": _cmd_certify, "verify": _cmd_verify, "sospert": _cmd_sospert, "eval": _cmd_eval}


def run_cli(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        return COMMANDS[args.command](args, out)
    except PolySyntaxError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_MALFORMED
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_MALFORMED
    except (ValueError, CertificationError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_MALFORMED


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
