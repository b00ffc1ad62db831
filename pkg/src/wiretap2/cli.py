"""Command-line front end.

Every subcommand prints one JSON document on stdout. Diagnostics go to
stderr. Exit codes: 0 success, 1 usage error, 2 unreadable or invalid
input, 3 infeasible tuple or failed audit, 4 no extension vector during
synthesis, 5 a synthesized code failed its own audit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .audit import AuditMismatch, full_audit
from .codec import DimensionError as CodecDimensionError
from .codec import by_channel, decode, encode
from .gf import FieldError
from .model import (
    InstanceError,
    ProblemInstance,
    RateTuple,
    format_rational,
    load_instance,
    load_tuple,
    to_rational,
    validate_instance,
)
from .pipeline import plan
from .region import (
    VARIANTS,
    DimensionError,
    InfeasibleError,
    RegionQuery,
    check_membership,
    minimize_key_rate,
)
from .synth import ConstructionFailed, InvalidParams, LinearCode, load_code, synthesize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_CONSTRUCTION = 4
EXIT_INTERNAL = 5


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(payload: dict, out: str | None = None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _warn(msg: str) -> None:
    print(f"wiretap2: {msg}", file=sys.stderr)


def _instance(path: str) -> ProblemInstance:
    inst = load_instance(path)
    rep = validate_instance(inst)
    for w in rep.warnings:
        _warn(f"warning: {w}")
    if not rep.ok:
        raise InputError("invalid instance: " + "; ".join(rep.violations))
    return inst


def _symbols(text: str, q: int, what: str) -> np.ndarray:
    text = text.strip()
    try:
        vals = [int(t) for t in text.split(",")] if text else []
    except ValueError:
        raise InputError(f"{what} must be comma-separated integers, got {text!r}") from None
    bad = [v for v in vals if not 0 <= v < q]
    if bad:
        raise InputError(f"{what} symbols must lie in [0, {q}), got {bad[0]}")
    return np.array(vals, dtype=np.int64)


def _join(v) -> str:
    return ",".join(str(int(x)) for x in v)


def cmd_check(args) -> int:
    inst = _instance(args.instance)
    tup = load_tuple(args.tuple)
    res = check_membership(RegionQuery(inst, tup, args.variant))
    _emit(res.to_dict(), args.out)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_minimize_key(args) -> int:
    inst = _instance(args.instance)
    try:
        R_M = to_rational(args.R_M)
        eqv = [to_rational(r) for r in args.equivocations]
    except (InstanceError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rate: {exc}") from None
    try:
        key, witness = minimize_key_rate(inst, R_M, eqv)
    except InfeasibleError as exc:
        _emit({"feasible": False, "certificate": exc.certificate.to_dict()}, args.out)
        return EXIT_INFEASIBLE
    _emit({"feasible": True, "R_K": format_rational(key), "witness": witness.to_list()}, args.out)
    return EXIT_OK


def cmd_synthesize(args) -> int:
    inst = _instance(args.instance)
    tup = load_tuple(args.tuple)
    try:
        _, witness, reduced, params = plan(inst, tup)
    except InfeasibleError as exc:
        _emit({"feasible": False, "certificate": exc.certificate.to_dict()})
        return EXIT_INFEASIBLE
    try:
        code = synthesize(inst, params)
    except ConstructionFailed as exc:
        _warn(str(exc))
        _emit({"feasible": True, "error": "construction-failed", "step": exc.step,
               "sets": [list(s) for s in exc.sets], "message": str(exc)})
        return EXIT_CONSTRUCTION
    report = full_audit(code, inst, params, cap=args.cap, seed=args.seed)
    summary = {
        "feasible": True,
        "witness": witness.to_list(),
        "reduced_tuple": reduced.to_dict(),
        "params": params.to_dict(),
        "audit": report.to_dict(),
    }
    if not report.passed:
        _warn("synthesized code failed its audit; nothing written")
        _emit(summary)
        return EXIT_INTERNAL
    if args.out:
        Path(args.out).write_text(code.dumps())
        summary["code_file"] = args.out
    else:
        summary["code"] = code.to_dict()
    _emit(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    code = load_code(args.code)
    inst = _instance(args.instance)
    report = full_audit(code, inst, cap=args.cap, seed=args.seed)
    _emit(report.to_dict(), args.out)
    print(report.table(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_INFEASIBLE


def cmd_encode(args) -> int:
    code = load_code(args.code)
    q = code.field.q
    m = _symbols(args.message, q, "message")
    k = _symbols(args.key, q, "key")
    x = encode(code, m, k)
    _emit({"symbols": _join(x), "channels": by_channel(code, x)}, args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    code = load_code(args.code)
    x = _symbols(args.symbols, code.field.q, "channel word")
    m, k = decode(code, x)
    _emit({"message": _join(m), "key": _join(k)}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wiretap2", description="Rate regions, code synthesis and secrecy audits for wiretap channel II with imperfect secrecy.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, audit=False):
        sp.add_argument("--out", metavar="PATH", help="write the JSON result here instead of stdout")
        if audit:
            sp.add_argument("--cap", type=int, default=None, metavar="STATES",
                            help="largest enumeration for the entropy oracle (default 2^20, env WIRETAP2_CAP)")
            sp.add_argument("--seed", type=int, default=0, help="seed for sampled decode checks")

    sp = sub.add_parser("check", help="decide membership of a rate tuple")
    sp.add_argument("instance")
    sp.add_argument("tuple")
    sp.add_argument("--variant", choices=VARIANTS, default=VARIANTS[0])
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("minimize-key", help="smallest key rate for given message and equivocation rates")
    sp.add_argument("instance")
    sp.add_argument("R_M")
    sp.add_argument("equivocations", nargs="*", metavar="R_j")
    common(sp)
    sp.set_defaults(func=cmd_minimize_key)

    sp = sub.add_parser("synthesize", help="build and audit a linear code for a tuple")
    sp.add_argument("instance")
    sp.add_argument("tuple")
    common(sp, audit=True)
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("verify", help="audit a code file against an instance")
    sp.add_argument("code")
    sp.add_argument("instance")
    common(sp, audit=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("encode", help="encode a message and key")
    sp.add_argument("code")
    sp.add_argument("--message", "-m", required=True, help="comma-separated symbols")
    sp.add_argument("--key", "-k", required=True, help="comma-separated symbols")
    common(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="recover message and key from a channel word")
    sp.add_argument("code")
    sp.add_argument("symbols", help="comma-separated symbols")
    common(sp)
    sp.set_defaults(func=cmd_decode)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "cap", None) is not None and args.cap < 1:
        _warn("--cap must be positive")
        return EXIT_USAGE
    if getattr(args, "seed", 0) < 0:
        _warn("--seed must be non-negative")
        return EXIT_USAGE
    try:
        return args.func(args)
    except (InputError, InstanceError, DimensionError, CodecDimensionError,
            AuditMismatch, FieldError, InvalidParams) as exc:
        _warn(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
