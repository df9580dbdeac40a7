"""Command-line interface.

Exit codes: 0 success or accepted, 1 rejected or non-existent, 2 input or
parameter error.  Transform commands write their artifact to ``-o`` or to
standard output; verdict commands print a report.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import bridge, formats, generate, interleave, module as modrep, oracles
from .barcode import Barcode, decompose, from_barcode
from .bridge import GradedPresentation
from .errors import BudgetExceeded, PmodError
from .exact import DEFAULT_FIELD, as_rational, check_field, parse_rational
from .interleave import InterleavingCertificate
from .module import NAT, REAL, TameModule
from .report import Report

EXIT_OK, EXIT_REJECTED, EXIT_ERROR = 0, 1, 2


class _Abort(Exception):
    def __init__(self, message: str):
        super().__init__(message)


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except PmodError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def default_field() -> int:
    env = os.environ.get("PMOD_FIELD")
    if not env:
        return DEFAULT_FIELD
    try:
        return check_field(int(env))
    except (ValueError, PmodError):
        raise _Abort(f"PMOD_FIELD must be a prime, got {env!r}") from None


class Session:
    """Per-invocation I/O: input hashing, artifact and report destinations."""

    def __init__(self, args, report: Report):
        self.args = args
        self.report = report

    def read(self, name: str, path: str):
        if path == "-":
            data = sys.stdin.buffer.read()
            base = None
        else:
            try:
                data = Path(path).read_bytes()
            except OSError as exc:
                raise _Abort(f"cannot read {path}: {exc.strerror}") from None
            base = Path(path).parent
        self.report.add_input(name, data)
        self.report.params.setdefault(name, path)
        text = data.decode("utf-8")
        header = formats.detect_header(text)
        if header == formats.CERT_HEADER:
            return formats.parse_certificate(text, base)
        return formats.PARSERS[header](text)

    def field(self) -> int:
        p = self.args.field if getattr(self.args, "field", None) is not None else default_field()
        return check_field(p)

    def module(self, name: str, path: str) -> TameModule:
        value = self.read(name, path)
        if isinstance(value, Barcode):
            return from_barcode(value, self.field())
        if not isinstance(value, TameModule):
            raise _Abort(f"{path}: expected a module or barcode file")
        return value

    def certificate(self, path: str) -> InterleavingCertificate:
        value = self.read("cert", path)
        if not isinstance(value, InterleavingCertificate):
            raise _Abort(f"{path}: expected a certificate file")
        return value

    def emit(self, value) -> None:
        text = formats.dump(value)
        out = getattr(self.args, "output", None)
        if out:
            Path(out).write_text(text, encoding="utf-8")
            self.report.artifacts["output"] = out
        else:
            sys.stdout.write(text)

    def finish(self, primary_report: bool) -> None:
        text = self.report.render()
        dest = getattr(self.args, "report", None)
        if dest and dest != "-":
            Path(dest).write_text(text, encoding="utf-8")
        elif dest == "-" or primary_report or getattr(self.args, "output", None):
            sys.stdout.write(text)


def _verdict_exit(*verdicts) -> int:
    return EXIT_OK if all(v.accepted for v in verdicts) else EXIT_REJECTED


# subcommand bodies: each returns an exit code

def cmd_decompose(s: Session, a) -> int:
    m = s.module("input", a.input)
    bc = decompose(m)
    s.report.values["bars"] = len(bc)
    s.emit(bc)
    return EXIT_OK


def cmd_compose(s: Session, a) -> int:
    bc = s.read("input", a.input)
    if not isinstance(bc, Barcode):
        raise _Abort(f"{a.input}: expected a barcode file")
    p = s.field()
    s.report.params["field"] = p
    s.emit(from_barcode(bc, p))
    return EXIT_OK


def cmd_translate(s: Session, a) -> int:
    s.report.params["p"] = a.p
    s.emit(modrep.translate(s.module("input", a.input), a.p))
    return EXIT_OK


def cmd_pixelize(s: Session, a) -> int:
    s.report.params.update(x0=a.x0, epsilon=a.epsilon)
    s.emit(modrep.pixelize(s.module("input", a.input), a.x0, a.epsilon))
    return EXIT_OK


def _unary_eps(fn):
    def run(s: Session, a) -> int:
        s.report.params["epsilon"] = a.epsilon
        s.emit(fn(s.module("input", a.input), a.epsilon))
        return EXIT_OK
    return run


def cmd_to_graded(s: Session, a) -> int:
    s.emit(bridge.nat_to_graded(s.module("input", a.input)))
    return EXIT_OK


def cmd_from_graded(s: Session, a) -> int:
    pres = s.read("input", a.input)
    if not isinstance(pres, GradedPresentation):
        raise _Abort(f"{a.input}: expected a graded presentation file")
    s.report.params["horizon"] = a.horizon
    s.emit(bridge.graded_to_nat(pres, a.horizon))
    return EXIT_OK


def cmd_canonical(s: Session, a) -> int:
    m = s.module("input", a.input)
    s.report.params.update(kind=a.kind, epsilon=a.epsilon)
    if a.kind == "shift":
        cert = interleave.canonical_shift_interleaving(m, a.epsilon)
    elif a.kind == "pixel":
        s.report.params["x0"] = a.x0
        cert = interleave.canonical_pixel_interleaving(m, a.x0, a.epsilon)
    elif a.kind == "gf":
        cert = interleave.canonical_gf_interleaving(m, a.epsilon)
    else:
        cert = interleave.canonical_fg_interleaving(m, a.epsilon)
    verdict = interleave.verify(cert)
    s.report.verdicts[cert.kind] = verdict
    s.emit(cert)
    return _verdict_exit(verdict)


def cmd_check(s: Session, a) -> int:
    cert = s.certificate(a.cert)
    s.report.params.update(kind=cert.kind, epsilon=cert.shift)
    if cert.basepoint is not None:
        s.report.params["x0"] = cert.basepoint
    verdict = interleave.verify(cert)
    s.report.verdicts[cert.kind] = verdict
    return _verdict_exit(verdict)


def cmd_promote(s: Session, a) -> int:
    cert = s.certificate(a.cert)
    s.report.params.update(epsilon=cert.shift, x0=cert.basepoint)
    promoted = interleave.promote_weak_to_strong(cert)
    verdict = interleave.verify_strong(promoted)
    s.report.verdicts["strong"] = verdict
    s.report.values["promoted_epsilon"] = promoted.shift
    s.emit(promoted)
    return _verdict_exit(verdict)


def cmd_distance(s: Session, a) -> int:
    s.report.params.update(method=a.method, epsilon=a.epsilon)
    if a.method == "bottleneck":
        bcs = []
        for name, path in (("first", a.first), ("second", a.second)):
            value = s.read(name, path)
            if isinstance(value, TameModule):
                value = decompose(value)
            elif not isinstance(value, Barcode):
                raise _Abort(f"{path}: expected a module or barcode file")
            bcs.append(value)
        dist = oracles.bottleneck_distance(*bcs)
        s.report.values["bottleneck"] = dist
        if a.epsilon is None:
            return EXIT_OK
        ok = dist <= a.epsilon
        s.report.values["within_epsilon"] = ok
        return EXIT_OK if ok else EXIT_REJECTED
    if a.epsilon is None:
        raise _Abort("--method bruteforce needs --epsilon")
    s.report.params["budget"] = a.budget
    m, n = s.module("first", a.first), s.module("second", a.second)
    exists = oracles.brute_force_interleaving_exists(m, n, a.epsilon, a.budget)
    s.report.values["interleaving_exists"] = exists
    return EXIT_OK if exists else EXIT_REJECTED


def cmd_report(s: Session, a) -> int:
    m = s.module("input", a.input)
    s.report.params["epsilon"] = a.epsilon
    rep = interleave.equivalence_report(m, a.epsilon)
    s.report.verdicts.update(rep.verdicts)
    for k, v in rep.informational.items():
        s.report.values[f"{k}_informational"] = "accepted" if v.accepted else "rejected"
    s.report.values.update(rep.diagnostics)
    s.report.values["all_accepted"] = rep.all_accepted
    if a.certs_dir:
        out = Path(a.certs_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, cert in rep.certificates.items():
            path = out / f"{name}.cert"
            path.write_text(formats.dump(cert), encoding="utf-8")
            s.report.artifacts[name] = str(path)
    return EXIT_OK if rep.all_accepted else EXIT_REJECTED


def cmd_gen(s: Session, a) -> int:
    p = s.field()
    s.report.params.update(seed=a.seed, kind=a.kind, field=p, format=a.format, raw=a.raw)
    if a.raw:
        s.report.params.update(max_grid=a.max_grid, max_dim=a.max_dim, max_endpoint=a.max_endpoint)
        value = generate.random_raw_module(a.seed, a.kind, p=p, max_grid=a.max_grid, max_dim=a.max_dim,
                                           min_endpoint=a.min_endpoint, max_endpoint=a.max_endpoint,
                                           denominators=a.denominator)
        if a.format == "barcode":
            value = decompose(value)
    else:
        s.report.params.update(bars=a.bars, max_endpoint=a.max_endpoint)
        value = generate.random_barcode(a.seed, a.bars, a.max_endpoint, a.kind, min_endpoint=a.min_endpoint,
                                        denominators=a.denominator)
        if a.format == "module":
            value = from_barcode(value, p)
    s.emit(value)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pmod", description="Exact persistence modules and interleaving certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help_text, primary_report=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(run=fn, primary_report=primary_report)
        sp.add_argument("--field", type=int, default=None, help="coefficient prime (default: $PMOD_FIELD or 2)")
        sp.add_argument("--report", metavar="PATH", help="write the run report here ('-' for stdout)")
        if not primary_report:
            sp.add_argument("-o", "--output", metavar="PATH", help="write the artifact here instead of stdout")
        return sp

    def eps(sp, required=True):
        sp.add_argument("--epsilon", type=_rational_arg, required=required)

    sp = command("decompose", cmd_decompose, "barcode of a module")
    sp.add_argument("input")
    sp = command("compose", cmd_compose, "module of a barcode")
    sp.add_argument("input")
    sp = command("translate", cmd_translate, "shift a module, T_p M(q) = M(p + q)")
    sp.add_argument("input")
    sp.add_argument("--p", type=_rational_arg, required=True)
    sp = command("pixelize", cmd_pixelize, "pixelize a real module on x0 + Z epsilon")
    sp.add_argument("input")
    sp.add_argument("--x0", type=_rational_arg, default=as_rational(0))
    eps(sp)
    for name, fn, text in (("discretize", bridge.discretize, "real -> natural, n -> M((n+1) eps)"),
                           ("realify", bridge.realify, "natural -> real, x -> N(floor(x/eps) + 1)"),
                           ("gf", bridge.compose_gf, "real -> real composite"),
                           ("fg", bridge.compose_fg, "natural -> natural composite")):
        sp = command(name, _unary_eps(fn), text)
        sp.add_argument("input")
        eps(sp)
    sp = command("to-graded", cmd_to_graded, "natural module -> graded presentation")
    sp.add_argument("input")
    sp = command("from-graded", cmd_from_graded, "graded presentation -> natural module")
    sp.add_argument("input")
    sp.add_argument("--horizon", type=int, default=None)
    sp = command("canonical", cmd_canonical, "build a canonical interleaving certificate")
    sp.add_argument("input")
    sp.add_argument("--kind", choices=("shift", "pixel", "gf", "fg"), required=True)
    sp.add_argument("--x0", type=_rational_arg, default=as_rational(0))
    eps(sp)
    sp = command("check", cmd_check, "verify a certificate", primary_report=True)
    sp.add_argument("--cert", required=True)
    sp = command("promote", cmd_promote, "promote a weak certificate to a strong one at twice the shift")
    sp.add_argument("--cert", required=True)
    sp = command("distance", cmd_distance, "bottleneck distance or brute-force interleaving search",
                 primary_report=True)
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--method", choices=("bottleneck", "bruteforce"), default="bottleneck")
    sp.add_argument("--budget", type=int, default=oracles.DEFAULT_BUDGET)
    eps(sp, required=False)
    sp = command("report", cmd_report, "interleaved-equivalence report for a module", primary_report=True)
    sp.add_argument("input")
    sp.add_argument("--certs-dir", metavar="DIR", help="also write every certificate into DIR")
    eps(sp)
    sp = command("gen", cmd_gen, "deterministic random barcode or module")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--bars", type=int, default=3)
    sp.add_argument("--max-endpoint", type=_rational_arg, default=as_rational(10))
    sp.add_argument("--min-endpoint", type=_rational_arg, default=as_rational(0))
    sp.add_argument("--denominator", type=int, action="append", default=None,
                    help="allowed endpoint denominators (repeatable, default 1)")
    sp.add_argument("--kind", choices=(REAL, NAT), default=REAL)
    sp.add_argument("--format", choices=("barcode", "module"), default="barcode")
    sp.add_argument("--raw", action="store_true", help="random matrices instead of an interval sum")
    sp.add_argument("--max-grid", type=int, default=5)
    sp.add_argument("--max-dim", type=int, default=3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "denominator", "unset") is None:
        args.denominator = [1]
    report = Report(args.command)
    session = Session(args, report)
    start = time.perf_counter()
    try:
        if args.field is not None:
            report.params["field"] = session.field()
        code = args.run(session, args)
    except (PmodError, _Abort) as exc:
        if isinstance(exc, BudgetExceeded):
            print(f"pmod: resource limit: {exc}", file=sys.stderr)
        else:
            print(f"pmod: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except UnicodeDecodeError:
        print("pmod: error: input is not UTF-8 text", file=sys.stderr)
        return EXIT_ERROR
    report.elapsed = time.perf_counter() - start
    session.finish(args.primary_report)
    return code


if __name__ == "__main__":
    sys.exit(main())
