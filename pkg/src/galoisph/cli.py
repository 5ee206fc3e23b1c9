"""Command-line interface: ``galoisph <subcommand> ...``.

Exit codes: 2 parse error, 3 validation error, 4 negative diagram, 5 invalid
interleaving, 6 bad slicing line, 7 self-test failure.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from . import io
from .diagram import (
    diagram_of,
    fibered_barcode,
    rank_diagram_direct,
    rank_diagram_via_formula,
)
from .errors import (
    BadDirection,
    EmptyIntersection,
    GaloisPHError,
    NegativeDiagram,
    NoNonnegativeRepresentative,
    ParseError,
)
from .ext import ext, fmt
from .homology import parse_filtration, persistence_module
from .linalg import PrimeField
from .matching import bottleneck_distance, validate_matching
from .mobius import mobius_invert
from .pmod import adjoin_zero_top

EXIT_PARSE, EXIT_INVALID, EXIT_NEGATIVE, EXIT_INTERLEAVING, EXIT_LINE, EXIT_SELFTEST = 2, 3, 4, 5, 6, 7


class CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CLIError(EXIT_PARSE, f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _field(args) -> int:
    p = args.field if args.field is not None else int(os.environ.get("GALOISPH_FIELD", "2"))
    try:
        return PrimeField(p).p
    except GaloisPHError as e:
        raise CLIError(EXIT_INVALID, str(e)) from None


def _module_from_filtration(args):
    filt = parse_filtration(_read(args.input))
    return filt, persistence_module(filt, args.dim, _field(args))


# -- subcommands ------------------------------------------------------------------------
def cmd_diagram(args) -> int:
    _, m = _module_from_filtration(args)
    _write(args.output, io.format_diagram(diagram_of(m, args.route)))
    return 0


def cmd_bottleneck(args) -> int:
    d1 = io.parse_diagram(_read(args.dgm1), path=args.dgm1)
    d2 = io.parse_diagram(_read(args.dgm2), path=args.dgm2)
    res = bottleneck_distance(d1, d2)
    if not validate_matching(res.certificate, d1, d2):
        raise CLIError(EXIT_INVALID, "certificate failed validation")
    print(fmt(res.distance))
    if args.certificate:
        _write(args.certificate, io.format_certificate(res.certificate))
    return 0


def cmd_stability(args) -> int:
    from .interleave import stability_matching
    try:
        il = io.parse_interleaving(_read(args.interleaving), _field(args))
    except ParseError:
        raise
    except GaloisPHError as e:
        raise CLIError(EXIT_INTERLEAVING, f"invalid interleaving: {e}{_witness(e)}") from None
    rep = stability_matching(il)
    if not validate_matching(rep.matching, rep.start, rep.end):
        raise CLIError(EXIT_INVALID, "glued certificate failed validation")
    lines = [
        "critical " + " ".join(fmt(t) for t in rep.critical_ts),
    ]
    for k, (c, b) in enumerate(zip(rep.step_costs, rep.step_bounds)):
        lines.append(f"step {fmt(rep.critical_ts[k])} {fmt(rep.critical_ts[k + 1])} "
                     f"cost {fmt(c)} bound {fmt(b)}")
    lines.append(f"final {fmt(rep.cost)}")
    lines.append(f"epsilon {fmt(rep.epsilon)}")
    lines.append(f"{'PASS' if rep.ok else 'FAIL'} final <= epsilon")
    print("\n".join(lines))
    if args.certificate:
        _write(args.certificate, io.format_certificate(rep.matching))
    return 0 if rep.ok else EXIT_INVALID


def _parse_line(text: str):
    try:
        o, d = text.split(";")
        offset = tuple(ext(v) for v in o.split(","))
        direction = tuple(ext(v) for v in d.split(","))
    except (ValueError, ZeroDivisionError):
        raise CLIError(EXIT_LINE, f"bad line {text!r}; expected 'o1,o2;d1,d2'") from None
    return offset, direction


def cmd_fiber(args) -> int:
    offset, direction = _parse_line(args.line)
    filt, m = _module_from_filtration(args)
    if filt.params != 2:
        raise CLIError(EXIT_INVALID, "fibered barcodes need a 2-parameter filtration")
    try:
        if args.check:
            pushed, direct = fibered_barcode(m, offset, direction, check=True)
            if pushed != direct:
                raise CLIError(EXIT_INVALID, f"slice mismatch: {pushed!r} vs {direct!r}")
        else:
            pushed = fibered_barcode(m, offset, direction)
    except (BadDirection, EmptyIntersection) as e:
        raise CLIError(EXIT_LINE, str(e)) from None
    _write(args.output, io.format_diagram(pushed))
    return 0


def cmd_mobius(args) -> int:
    p = io.parse_poset(_read(args.poset))
    fn = io.parse_intfn(_read(args.function), p)
    _write(args.output, io.format_intfn(mobius_invert(fn)))
    return 0


def cmd_rank(args) -> int:
    if args.module:
        m = io.parse_module(_read(args.input), field=_field(args))
        top = m.base.top
        if top is None or m.dims[top] != 0:
            m = adjoin_zero_top(m, "top")
    else:
        _, m = _module_from_filtration(args)
    direct = rank_diagram_direct(m)
    if args.compare:
        formula = rank_diagram_via_formula(m)
        same = direct == formula
        print(f"{'PASS' if same else 'FAIL'} rank formula agrees with direct inversion")
        if not same:
            return EXIT_INVALID
    _write(args.output, io.format_diagram(direct))
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest
    report = run_selftest(args.seed, args.iters, field=_field(args))
    print(report.text())
    if not report.ok:
        print(f"reproduce with: galoisph selftest --seed {args.seed} --iters {args.iters}",
              file=sys.stderr)
        return EXIT_SELFTEST
    return 0


# -- entry point ------------------------------------------------------------------------
def _witness(e: GaloisPHError) -> str:
    w = getattr(e, "witness", None)
    if w is None:
        return ""
    return f" (witness: {_render(w)})"


def _render(w) -> str:
    if isinstance(w, tuple) and len(w) == 2 and type(w).__name__ == "Interval":
        return f"[{io.elt_id(w.lo)}, {io.elt_id(w.hi)}]"
    if isinstance(w, tuple):
        return "(" + ", ".join(_render(v) for v in w) + ")"
    if isinstance(w, (Fraction, int, float)):
        return fmt(w) if not isinstance(w, bool) else str(w)
    return str(w)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="galoisph", description=__doc__.splitlines()[0])
    ap.add_argument("--field", type=int, default=None,
                    help="prime field size (default: $GALOISPH_FIELD or 2)")
    sub = ap.add_subparsers(dest="command", required=True)

    def filt_args(p):
        p.add_argument("input", help="filtration file, or - for stdin")
        p.add_argument("--dim", type=int, default=0, help="homology degree")
        p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("diagram", help="persistence diagram of a filtration")
    filt_args(p)
    p.add_argument("--route", choices=("kernel", "presentation"), default="kernel")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("bottleneck", help="bottleneck distance with a matching certificate")
    p.add_argument("dgm1")
    p.add_argument("dgm2")
    p.add_argument("--certificate", default=None, help="write the optimal matching here")
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("stability", help="stability certificate for an interleaving")
    p.add_argument("interleaving", help="interleaving file: middle poset, module, f0, f1")
    p.add_argument("--certificate", default=None)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("fiber", help="fibered barcode along a line")
    filt_args(p)
    p.add_argument("--line", required=True, help="'o1,o2;d1,d2'")
    p.add_argument("--check", action="store_true", help="also compare with the direct slice")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("mobius", help="Mobius inversion of an integer function")
    p.add_argument("poset")
    p.add_argument("function")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("rank", help="rank diagram of a filtration or module")
    filt_args(p)
    p.add_argument("--module", action="store_true", help="input is a module file")
    p.add_argument("--compare", action="store_true", help="check the formula route")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("selftest", help="randomized identity checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=50)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (NegativeDiagram, NoNonnegativeRepresentative) as e:
        print(f"negative diagram: {e}{_witness(e)}", file=sys.stderr)
        return EXIT_NEGATIVE
    except GaloisPHError as e:
        print(f"invalid input: {e}{_witness(e)}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
