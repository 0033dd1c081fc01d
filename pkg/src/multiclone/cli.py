"""Command-line entry point.

Exit status: 0 decided, 1 usage or parse error, 2 inconclusive (limit or
cap reached), 3 falsifier.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .closure import DEFAULT_LIMIT, ClosureLimitExceeded, GeneratorSet, close_fixed_arity, fg_generators, fg_slice
from .core import DEFAULT_CAP, MAX_ARITY, Universe, is_operation
from .fivetype import GuaranteeFailed, classify_five_type
from .opfile import OpFileError, emit_opfile
from .projection import Verdict, enumerate_boolean_groups, projection_property_equivalence
from . import report

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_FALSIFIER = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="multiclone", description="Multioperation clones on small finite universes.")
    p.add_argument("-v", "--verbose", action="store_true", help="log closure progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, cap=True, limit=True):
        sp.add_argument("file", help="OpFile or JSON report; '-' reads stdin")
        if cap:
            sp.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="largest arity examined")
        if limit:
            sp.add_argument("--limit", type=_positive, default=DEFAULT_LIMIT, help="member bound per fragment")
        sp.add_argument("--out", help="write output here instead of stdout")

    sp = sub.add_parser("classify", help="witness one of the five types")
    common(sp)
    sp.add_argument("--zero", type=_nonneg, default=0, help="neutral element for the group extraction")

    sp = sub.add_parser("close", help="emit the fixed-arity fragment as an OpFile")
    common(sp, cap=False)
    sp.add_argument("--arity", type=_positive, required=True)

    sp = sub.add_parser("props", help="predicate table for each operation")
    common(sp, cap=False, limit=False)

    sp = sub.add_parser("projection", help="check the projection-property characterization")
    common(sp)

    sp = sub.add_parser("fg", help="emit the generators (or a slice) of the Boolean-group clone")
    sp.add_argument("universe", type=_positive, help="universe size, a power of two")
    sp.add_argument("--zero", type=_nonneg, default=0, help="neutral element of the group")
    sp.add_argument("--arity", type=_positive, help="emit the whole arity-n slice instead")
    sp.add_argument("--out")
    return p


def _read(path: str) -> GeneratorSet:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return report.load_source(text)
    except OpFileError as exc:
        raise UsageError(f"{path}:{exc.line}: {exc.reason}") from None
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def cmd_classify(args) -> int:
    gens = _read(args.file)
    if args.zero >= gens.universe.size:
        raise UsageError(f"--zero {args.zero} is not an element of the universe")
    try:
        tw = classify_five_type(gens, args.cap, args.limit, args.zero)
    except GuaranteeFailed as exc:
        _write(report.dumps(report.falsifier_report("classify", exc)), args.out)
        return EXIT_FALSIFIER
    _write(report.dumps(report.classify_report(tw, gens.universe.size, args.cap, args.limit, args.zero)), args.out)
    return EXIT_OK if tw.decided else EXIT_INCONCLUSIVE


def cmd_close(args) -> int:
    gens = _read(args.file)
    if args.arity > MAX_ARITY:
        raise UsageError(f"--arity must be at most {MAX_ARITY}")
    if args.limit < args.arity:
        raise UsageError("--limit must be at least the arity")
    frag = close_fixed_arity(gens, args.arity, args.limit)
    _write(emit_opfile(frag.as_generator_set()), args.out)
    status = {"arity": frag.arity, "members": len(frag), "saturated": frag.saturated, "exact": frag.exact}
    sys.stderr.write(json.dumps(status) + "\n")
    return EXIT_OK if frag.saturated else EXIT_INCONCLUSIVE


def cmd_props(args) -> int:
    _write(report.dumps(report.props_report(_read(args.file))), args.out)
    return EXIT_OK


def cmd_projection(args) -> int:
    gens = _read(args.file)
    for name, g in gens.items():
        if not is_operation(g):
            raise UsageError(f"{name!r} is not an operation; the characterization concerns clones of operations")
    if args.cap < 3:
        raise UsageError("--cap must be at least 3")
    rep = projection_property_equivalence(gens, args.cap, args.limit)
    _write(report.dumps(report.projection_property_report(rep, gens.universe.size, args.limit)), args.out)
    return {Verdict.FALSIFIER: EXIT_FALSIFIER, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}.get(rep.verdict, EXIT_OK)


def cmd_fg(args) -> int:
    try:
        u = Universe(args.universe)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    groups = [G for G in enumerate_boolean_groups(u) if G.zero == args.zero]
    if not groups:
        raise UsageError(f"no Boolean group on {args.universe} elements with zero {args.zero}")
    G = groups[0]
    if args.arity is None:
        gens = fg_generators(G)
    else:
        if args.arity > MAX_ARITY:
            raise UsageError(f"--arity must be at most {MAX_ARITY}")
        ops = fg_slice(G, args.arity)
        gens = GeneratorSet(u, tuple(ops), tuple(f"f{i}" for i in range(len(ops))))
    _write(emit_opfile(gens), args.out)
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "close": cmd_close,
    "props": cmd_props,
    "projection": cmd_projection,
    "fg": cmd_fg,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"multiclone {args.command}: {exc}\n")
        return EXIT_USAGE
    except ClosureLimitExceeded as exc:
        sys.stderr.write(f"multiclone {args.command}: {exc}\n")
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
