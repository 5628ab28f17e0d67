"""Command-line front end.

Subcommands run one verification pipeline each and print a flat JSON
document to stdout (or ``--output``); ``--csv`` switches the tabular
payloads (scan samples, constant-comparison table) to CSV.  Identical
argv produce byte-identical output when ``--no-timestamp`` is given.

Exit codes: 0 success, 1 validation error, 2 numerical-accuracy failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from datetime import datetime, timezone

import mpmath

from .engine import certificate, scan_max, scan_samples
from .errors import AccuracyError
from .precision import DOUBLE, Precision, check_constants, constants
from .primes import iterated_log, sieve_primes
from .resonator import (
    ResonatorSpec,
    S_brute,
    S_jet,
    layer_product,
    proposition_report,
    yang_factor,
)
from .zeta import EvalPoint, dirichlet_poly, zeta_deriv_cauchy

ENV_PRECISION = "RZ_PRECISION"


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _resolve_precision(flag_value: int | None) -> Precision:
    if flag_value is None:
        env = os.environ.get(ENV_PRECISION, "").strip()
        if env:
            flag_value = int(env)
    if flag_value in (None, 0):
        return DOUBLE
    return Precision(flag_value)


def _jsonable(value, prec: Precision):
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, prec.effective_digits)
    if isinstance(value, dict):
        return {k: _jsonable(v, prec) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, prec) for v in value]
    return value


def _emit(doc: dict, args, prec: Precision = DOUBLE) -> None:
    if not args.no_timestamp:
        doc = {**doc, "timestamp": datetime.now(timezone.utc).isoformat()}
    text = json.dumps(_jsonable(doc, prec), sort_keys=True, indent=2) + "\n"
    _write(text, args.output)


def _write(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header, rows, args) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _write(buf.getvalue(), args.output)


# ------------------------------------------------------------ subcommands --

def _cmd_sieve(args, prec):
    table = sieve_primes(args.limit)
    doc = {
        "limit": table.limit,
        "count": len(table.primes),
        "largest": table.primes[-1] if table.primes else None,
    }
    if len(table.primes) <= 200:
        doc["primes"] = list(table.primes)
    _emit(doc, args)


def _cmd_ssum(args, prec):
    spec = ResonatorSpec(args.x, args.b)
    doc = {"x": args.x, "b": args.b, "ell": args.ell, "method": args.method}
    if args.method in ("brute", "both"):
        doc["S_brute"] = S_brute(spec, args.ell, cap=args.cap, prec=prec)
    if args.method in ("jet", "both"):
        doc["S_jet"] = S_jet(spec, args.ell, prec=prec)
    if args.method == "both":
        sb, sj = doc["S_brute"], doc["S_jet"]
        scale = max(abs(sb), abs(sj), 1e-300)
        doc["rel_diff"] = float(abs(sb - sj) / scale)
    doc["S"] = doc.get("S_jet", doc.get("S_brute"))
    _emit(doc, args, prec)


def _cmd_prop(args, prec):
    spec = ResonatorSpec(args.x, args.b, args.J)
    rep = proposition_report(spec, args.ell, prec)
    doc = {
        "x": args.x,
        "b": args.b,
        "J": args.J,
        "ell": args.ell,
        "S_over_M": rep.S_over_M,
        "target": rep.target,
        "ratio": rep.ratio,
        "error_budget": rep.error_budget,
        "partition_bound_over_M": rep.partition_bound_over_M,
    }
    _emit(doc, args, prec)


def _cmd_lemma(args, prec):
    spec = ResonatorSpec(args.x, args.b)
    product = layer_product(spec, spec.J, prec)
    asym = constants(prec).exp_gamma * iterated_log(args.x, 1, prec)
    ratio = product / asym
    doc = {
        "x": args.x,
        "b": args.b,
        "product": product,
        "asymptotic_main_term": asym,
        "ratio": ratio,
        "deviation": ratio - 1,
    }
    _emit(doc, args, prec)


def _cmd_zeta(args, prec):
    point = EvalPoint(args.t, args.ell, args.T)
    value = dirichlet_poly(point, check_range=True)
    doc = {
        "T": args.T,
        "t": args.t,
        "ell": args.ell,
        "dirichlet_re": value.real,
        "dirichlet_im": value.imag,
    }
    if args.oracle:
        z = zeta_deriv_cauchy(1 + 1j * args.t, args.ell)
        signed = (-1) ** args.ell * z
        doc["oracle_re"] = signed.real
        doc["oracle_im"] = signed.imag
        doc["abs_error"] = abs(signed - value)
    _emit(doc, args)


def _cmd_resonate(args, prec):
    spec = ResonatorSpec(args.x, args.b)
    cert = certificate(spec, args.T, args.ell)
    doc = {"x": args.x, "b": args.b, "T": args.T, "ell": args.ell}
    doc.update(cert.to_dict())
    _emit(doc, args)


def _cmd_scan(args, prec):
    if args.csv:
        t, v = scan_samples(args.T, args.ell, args.step)
        _emit_csv(
            ("t", "value"),
            ((repr(float(a)), repr(float(b))) for a, b in zip(t, v)),
            args,
        )
        return
    spec = None
    if args.x is not None or args.b is not None:
        if args.x is None or args.b is None:
            raise ValueError("scan needs both --x and --b, or neither")
        spec = ResonatorSpec(args.x, args.b)
    report = scan_max(args.T, args.ell, args.step, refine=args.refine, spec=spec)
    _emit(report.to_dict(), args)


def comparison_rows(ell_max: int, T: float) -> list[dict]:
    """Rows of the constant-comparison table: the improved main term
    e^gamma/(l+1) (log_2 T)^(l+1) against the older
    e^gamma l^l/(l+1)^(l+1) (log_2 T - log_3 T)^(l+1), with the
    improvement factor (1+1/l)^l.  Asymptotic O(1) terms are rendered 0."""
    if ell_max < 1:
        raise ValueError(f"need ell_max >= 1, got {ell_max}")
    if T <= math.exp(math.e):
        raise ValueError(f"need T > e^e, got {T}")
    eg = constants().exp_gamma
    log2T = iterated_log(T, 2)
    log3T = iterated_log(T, 3)
    rows = []
    for ell in range(ell_max + 1):
        new_bound = eg / (ell + 1) * log2T ** (ell + 1)
        yang_bound = (
            eg * ell**ell / (ell + 1) ** (ell + 1) * (log2T - log3T) ** (ell + 1)
        )
        rows.append(
            {
                "ell": ell,
                "new_bound": new_bound,
                "yang_bound": yang_bound,
                "factor": yang_factor(ell) if ell >= 1 else None,
            }
        )
    return rows


def _cmd_factors(args, prec):
    rows = comparison_rows(args.ellmax, args.T)
    if args.csv:
        _emit_csv(
            ("ell", "new_bound", "yang_bound", "factor"),
            (
                (
                    r["ell"],
                    repr(r["new_bound"]),
                    repr(r["yang_bound"]),
                    "" if r["factor"] is None else repr(r["factor"]),
                )
                for r in rows
            ),
            args,
        )
        return
    _emit({"T": args.T, "ell_max": args.ellmax, "rows": rows}, args)


# ----------------------------------------------------------------- parser --

def _build_parser() -> _Parser:
    parser = _Parser(
        prog="rzeta",
        description=(
            "Resonance-method certificates and verification suites for "
            "large values of zeta derivatives on the 1-line."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--precision",
        type=int,
        default=None,
        help="significant decimal digits (>= 50) for the combinatorial "
        f"routines; hardware double if omitted (env {ENV_PRECISION})",
    )
    common.add_argument("--output", default=None, help="write to file")
    common.add_argument(
        "--no-timestamp",
        action="store_true",
        help="omit the timestamp for byte-identical reruns",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", parents=[common], help="prime table summary")
    p.add_argument("--limit", type=int, required=True)
    p.set_defaults(func=_cmd_sieve)

    p = sub.add_parser("ssum", parents=[common], help="weighted divisor sum")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--method", choices=("brute", "jet", "both"), default="jet")
    p.add_argument("--cap", type=int, default=10**6)
    p.set_defaults(func=_cmd_ssum)

    p = sub.add_parser(
        "prop", parents=[common], help="normalized sum vs asymptotic target"
    )
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--J", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=_cmd_prop)

    p = sub.add_parser(
        "lemma", parents=[common], help="Euler product vs e^gamma log x"
    )
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(func=_cmd_lemma)

    p = sub.add_parser(
        "zeta", parents=[common], help="Dirichlet polynomial at one height"
    )
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=_cmd_zeta)

    p = sub.add_parser(
        "resonate", parents=[common], help="moment-ratio certificate"
    )
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=_cmd_resonate)

    p = sub.add_parser("scan", parents=[common], help="grid maximum search")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--csv", action="store_true", help="dump (t, value) samples")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser(
        "factors", parents=[common], help="constant-comparison table"
    )
    p.add_argument("--ellmax", type=int, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=_cmd_factors)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        prec = _resolve_precision(args.precision)
        check_constants(prec)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            args.func(args, prec)
        return 0
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AccuracyError as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
