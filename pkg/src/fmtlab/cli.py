"""Command-line entry point.

Every subcommand is a thin wrapper over the library: generation
(``gen``), formula evaluation (``eval``), homomorphism queries
(``hom``), minor checks (``minor``), chromatic number (``chrom``),
bottleneck search (``bottleneck``), and the verification suites
(``verify``).

Exit codes: 0 success / check passed, 1 check failed, 2 usage or input
error.
"""

from __future__ import annotations

import argparse
import sys

from . import families, formulas, lab, minors, solver
from .structures import (StructureError, read_structure,
                         serialize_structure, write_structure)


def _read_formula(spec, vocab=None):
    if spec in formulas.BUILTIN_FORMULAS:
        return formulas.BUILTIN_FORMULAS[spec]
    with open(spec, "r", encoding="utf-8") as fh:
        return formulas.parse(fh.read(), vocab=vocab)


def _bool_word(b):
    return "true" if b else "false"


def _cmd_gen(args):
    G = families.gen(args.spec)
    text = serialize_structure(G)
    if args.output:
        write_structure(G, args.output)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_eval(args):
    A = read_structure(args.structure)
    phi = _read_formula(args.formula, vocab=A.vocab)
    value = formulas.evaluate(phi, A)
    print(_bool_word(value))
    return 0 if value else 1


def _cmd_hom(args):
    A = read_structure(args.source)
    B = read_structure(args.target)
    if args.mode == "count":
        homs = solver.enumerate_homs(A, B, require=args.require)
        print("homs: %d" % len(homs))
        return 0 if homs else 1
    if args.mode == "all":
        homs = solver.enumerate_homs(A, B)
        for h in homs:
            print("hom %s" % " ".join(str(b) for b in h.map))
        print("homs: %d" % len(homs))
        ok = bool(homs)
        if args.require:
            flag = all(solver.classify(h)[args.require] for h in homs)
            print("all-%s: %s" % (args.require, _bool_word(flag)))
            ok = ok and flag
        return 0 if ok else 1
    h = solver.find_hom(A, B, require=args.require)
    print("exists: %s" % _bool_word(h is not None))
    return 0 if h is not None else 1


def _cmd_minor(args):
    G = read_structure(args.graph)
    if args.pattern in minors.PATTERN_NAMES:
        H = args.pattern
    else:
        H = read_structure(args.pattern)
    found = minors.has_minor(G, H)
    print("minor: %s" % _bool_word(found))
    return 0 if found else 1


def _cmd_chrom(args):
    G = read_structure(args.graph)
    print(solver.chromatic_number(G))
    return 0


def _cmd_bottleneck(args):
    G = read_structure(args.graph)
    res = minors.find_bottleneck(G, args.radius, args.count, cap=args.cap)
    if res is None:
        print("none")
        return 1
    print("S: %s" % " ".join(str(v) for v in res.S))
    print("A: %s" % " ".join(str(v) for v in res.A))
    print("complete: %s" % _bool_word(res.complete))
    return 0


def _cmd_verify(args):
    report = lab.run_suite(args.suite, size=args.size, jobs=args.jobs)
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fmtlab",
        description="Finite-model workbench: structures, formulas, "
        "homomorphisms, minors, and verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a family member")
    p.add_argument("spec", help="family:params, e.g. wheel:9 or bouquet:5+7")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("eval", help="evaluate a sentence on a structure")
    p.add_argument("-f", "--formula", required=True,
                   help="builtin formula name or file")
    p.add_argument("-s", "--structure", required=True, help="structure file")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("hom", help="homomorphism queries")
    p.add_argument("-A", "--source", required=True, help="source structure file")
    p.add_argument("-B", "--target", required=True, help="target structure file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exists", dest="mode", action="store_const",
                      const="exists", help="existence query (default)")
    mode.add_argument("--all", dest="mode", action="store_const", const="all",
                      help="enumerate all homomorphisms")
    mode.add_argument("--count", dest="mode", action="store_const",
                      const="count", help="count homomorphisms")
    p.add_argument("--require",
                   choices=("injective", "full", "strong", "embedding"),
                   help="with --exists/--count: constrain the search; "
                   "with --all: report whether every hom satisfies it")
    p.set_defaults(func=_cmd_hom, mode="exists")

    p = sub.add_parser("minor", help="minor containment check")
    p.add_argument("-G", "--graph", required=True, help="graph file")
    p.add_argument("-H", "--pattern", required=True,
                   help="pattern name (%s) or file" % ", ".join(minors.PATTERN_NAMES))
    p.set_defaults(func=_cmd_minor)

    p = sub.add_parser("chrom", help="chromatic number")
    p.add_argument("-G", "--graph", required=True, help="graph file")
    p.set_defaults(func=_cmd_chrom)

    p = sub.add_parser("bottleneck", help="separator + scattered-set search")
    p.add_argument("-G", "--graph", required=True, help="graph file")
    p.add_argument("-r", "--radius", type=int, required=True,
                   help="scatter distance")
    p.add_argument("-m", "--count", type=int, required=True,
                   help="scattered-set size")
    p.add_argument("--cap", type=int, default=3,
                   help="largest separator size tried (default 3)")
    p.set_defaults(func=_cmd_bottleneck)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", help="suite name (see docs)")
    p.add_argument("--size", type=int, default=None,
                   help="scale the suite where meaningful")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes for independent checks")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors and --help
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except solver.BudgetExceededError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (OSError, ValueError, StructureError, lab.LabError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
