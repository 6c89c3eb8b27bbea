"""Command line entry point: relcheck <command> [options].

Exit codes: 0 everything passed (skips count as passes), 1 a check failed,
2 the input could not be read or understood.
"""
import argparse
import os
import sys

from .audit import Budget, audit, derive_classes, replay_witness
from .category import MissingStructure, UnknownMorphism, BoundaryError
from .equivalence import check_equivalence
from .factorization import FactorizationSystem, check_factorization_system
from .finset import FinSet
from .formats import (ParseError, parse_category, parse_fs, parse_double, parse_report,
                      emit_report, emit_double, emit_fs)
from .spans import RelDouble
from .table import table_copy, explicit_copy

COMMANDS = ("audit", "build-rel", "compose", "factorize", "derive-fs", "equivalence", "report")


class InputError(Exception):
    pass


def default_max_size():
    raw = os.environ.get("RELCHECK_BUDGET")
    if raw is None:
        return 6
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"RELCHECK_BUDGET must be an integer, got {raw!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--category", help="a .fcat file or finset(N)")
    common.add_argument("--fs", help="a .fs file or epimono")
    common.add_argument("--double", help="a .dblcat file")
    common.add_argument("--max-size", type=int, default=None,
                        help="largest N accepted in finset(N) (default: $RELCHECK_BUDGET or 6)")
    common.add_argument("--exhaustive", action="store_true", help="check every instance")
    common.add_argument("--samples", type=int, default=200, help="instances per condition when sampling")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "dblrep"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")
    p = argparse.ArgumentParser(prog="relcheck", description="Audit finite double categories of relations.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("audit", parents=[common], help="check every condition and report witnesses")
    sub.add_parser("build-rel", parents=[common], help="write Rel(C;F) as a .dblcat file")
    c = sub.add_parser("compose", parents=[common], help="compose two relations")
    c.add_argument("left", help='span literal, e.g. "span 1 2 2 [1,1]:2->1 [1,2]:2->2"')
    c.add_argument("right")
    f = sub.add_parser("factorize", parents=[common], help="factor an arrow through the system")
    f.add_argument("arrow")
    sub.add_parser("derive-fs", parents=[common], help="derive covers and inclusions from a double category")
    sub.add_parser("equivalence", parents=[common], help="audit, then build and check F and G")
    r = sub.add_parser("report", parents=[common], help="re-emit a .dblrep file, replaying its witnesses")
    r.add_argument("file")
    return p


def _budget(args):
    if args.samples < 1:
        raise InputError("--samples must be positive")
    return Budget(args.exhaustive, args.samples, args.seed)


def _category(args):
    if not args.category:
        raise InputError("--category is required")
    max_size = args.max_size if args.max_size is not None else default_max_size()
    C = parse_category(args.category, max_size)
    if args.fs is None:
        if not isinstance(C, FinSet):
            raise InputError("--fs is required for a category given by a file")
        fs = parse_fs("epimono", C)
    else:
        fs = parse_fs(args.fs, C)
    return C, fs


def _double(args):
    """(D, fs) from --double, or Rel(C;F) from --category/--fs."""
    if args.double:
        if args.category:
            raise InputError("give either --double or --category, not both")
        return parse_double(args.double), None
    C, fs = _category(args)
    return RelDouble(C, fs), fs


def _write(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_audit(args):
    D, fs = _double(args)
    report = audit(D, _budget(args), fs)
    _write(args, emit_report(report, args.format))
    return 0 if report.ok else 1


def cmd_equivalence(args):
    D, fs = _double(args)
    budget = _budget(args)
    report = audit(D, budget, fs)
    report.equivalence = check_equivalence(D, budget, fs, report)
    _write(args, emit_report(report, args.format))
    return 0 if report.ok else 1


def cmd_build_rel(args):
    C, fs = _category(args)
    R = RelDouble(C, fs)
    D = table_copy(R) if isinstance(C, FinSet) else explicit_copy(R)
    _write(args, emit_double(D))
    return 0


def _relation(R, text):
    try:
        s = R.decode_proarrow(text)
    except (ValueError, KeyError, UnknownMorphism) as exc:
        raise InputError(f"cannot read relation {text!r}: {exc}") from None
    for x in (s.src, s.tgt):
        if x not in R.window:
            raise InputError(f"object {x} is outside the category")
    try:
        return R.canonical(s)[0]
    except MissingStructure:
        raise InputError(f"{text!r} is not a relation (legs not jointly in M)") from None


def cmd_compose(args):
    C, fs = _category(args)
    R = RelDouble(C, fs)
    a, b = _relation(R, args.left), _relation(R, args.right)
    if a.tgt != b.src:
        raise InputError(f"cannot compose a relation into {a.tgt} with one out of {b.src}")
    k = R.hcomp(a, b)
    lines = [R.encode_proarrow(k)]
    if isinstance(C, FinSet):
        lines.append("pairs " + " ".join(f"{i + 1}-{j + 1}" for i, j in k.pairs()))
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_factorize(args):
    C, fs = _category(args)
    try:
        f = C.parse_arrow(args.arrow)
    except (ValueError, KeyError, UnknownMorphism):
        raise InputError(f"unknown arrow {args.arrow!r}") from None
    e, m = fs.factorize(f)
    _write(args, f"{C.describe(f)} = {C.describe(m)} after {C.describe(e)}\n"
                 f"left {C.describe(e)}\nright {C.describe(m)}\n")
    return 0


def cmd_derive_fs(args):
    D, _ = _double(args)
    Cw, E, M = derive_classes(D)
    rep = check_factorization_system(Cw, E, M)
    fs = FactorizationSystem(Cw, E, M, name="derived")
    if rep.ok:
        text = emit_fs(fs, Cw)
    else:
        text = (f"left: {' '.join(Cw.describe(f) for f in E)}\n"
                f"right: {' '.join(Cw.describe(f) for f in M)}\n")
        text += "".join(f"# {line}\n" for line in str(rep).splitlines())
    _write(args, text)
    return 0 if rep.ok else 1


def cmd_report(args):
    report = parse_report(args.file)
    code = 0 if report.ok else 1
    notes = []
    if args.double or args.category:
        D, fs = _double(args)
        ws = report.witnesses() + (list(report.equivalence.witnesses) if report.equivalence else [])
        for w in ws:
            if replay_witness(D, w, fs):
                notes.append(f"# witness {w.id} reproduces")
            else:
                notes.append(f"# witness {w.id} does not reproduce")
                code = 1
    text = emit_report(report, args.format)
    _write(args, text + "".join(n + "\n" for n in notes))
    return code


HANDLERS = {"audit": cmd_audit, "build-rel": cmd_build_rel, "compose": cmd_compose,
            "factorize": cmd_factorize, "derive-fs": cmd_derive_fs,
            "equivalence": cmd_equivalence, "report": cmd_report}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return HANDLERS[args.command](args)
    except (InputError, ParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"relcheck: {exc}", file=sys.stderr)
        return 2
    except (MissingStructure, BoundaryError, UnknownMorphism) as exc:
        print(f"relcheck: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
