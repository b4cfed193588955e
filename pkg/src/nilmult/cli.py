"""Command-line front end.

Exit codes: 0 ok, 1 fixture failure, 2 bad arguments, 3 malformed group file,
4 computation cap exceeded.  Errors go to stderr as ``nilmult: error[CODE]: message``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from nilmult import __version__
from nilmult.abelian import AbelianGroup
from nilmult.bounds import BoundContext, all_reports, compare_bounds, half_class_exponent_note
from nilmult.caps import CapExceeded
from nilmult.corpus import UnknownGroupName, resolve, sweep
from nilmult.free_nilpotent import free_nilpotent_group, parse_word
from nilmult.io import GroupFileError, load_group, reports_csv, reports_json
from nilmult.multiplier import MultiplierQuery, known_multiplier
from nilmult.witt_hall import hall_basis, stratum_counts, witt

EXIT_FIXTURE, EXIT_ARGS, EXIT_GROUP_FILE, EXIT_CAP = 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _fail("E_ARGS", message)
        sys.exit(EXIT_ARGS)


def _fail(code: str, message: str) -> None:
    print(f"nilmult: error[{code}]: {message}", file=sys.stderr)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _load(spec: str):
    """A path to a group file, or a built-in corpus name."""
    path = Path(spec)
    if path.is_file():
        return load_group(path), path.stem
    if spec.endswith(".json") or "/" in spec:
        raise GroupFileError(f"no such group file: {spec}")
    try:
        return resolve(spec), spec
    except UnknownGroupName as exc:
        raise UsageError(str(exc)) from exc


def _context(g) -> BoundContext:
    return BoundContext.from_abelian(g) if isinstance(g, AbelianGroup) else BoundContext.from_group(g)


# -- subcommands ------------------------------------------------------------------


def cmd_witt(args) -> int:
    print(witt(args.n, args.d))
    return 0


def cmd_hall(args) -> int:
    basis = hall_basis(args.d, args.max_weight)
    if args.counts:
        for w, k in sorted(stratum_counts(basis).items()):
            print(f"weight {w}: {k}")
    else:
        for b in basis:
            print(f"{b.order_index}\t{b.weight}\t{b}")
    return 0


def cmd_multiplier(args) -> int:
    g, _ = _load(args.group)
    km = known_multiplier(MultiplierQuery(g, args.c), d8_formula_at_c1=args.d8_formula_at_c1)
    print("unknown" if km is None else str(km))
    return 0


def cmd_bounds(args) -> int:
    g, name = _load(args.group)
    ctx = _context(g)
    ctx.d8_formula_at_c1 = args.d8_formula_at_c1
    reports = all_reports(ctx, args.c)
    km = ctx.multiplier(args.c)
    if args.format == "json":
        mult = None if km is None else {"invariants": [str(x) for x in km.value.invariants],
                                        "provenance": km.provenance}
        sys.stdout.write(reports_json(name, args.c, reports, mult))
    elif args.format == "csv":
        sys.stdout.write(reports_csv(reports))
    else:
        print(f"group {name}, c = {args.c}, M^({args.c}) = {'unknown' if km is None else km}")
        for r in reports:
            lhs = "unknown" if r.lhs is None else r.lhs
            rhs = "-" if r.rhs is None else r.rhs
            tail = r.reason if not r.applicable else r.note
            print(f"{r.bound_id:34s} {r.lhs_label:28s} {str(lhs):>10s} {r.relation:8s} {str(rhs):>12s}  "
                  f"{r.status}  {tail}")
        note = half_class_exponent_note(ctx)
        if note:
            print(note)
    return 0 if all(r.holds is not False for r in reports) else EXIT_FIXTURE


def cmd_compare(args) -> int:
    g, name = _load(args.group)
    ctx = _context(g)
    print(f"group {name}, c = {args.c}")
    for cmp in compare_bounds(ctx, args.c):
        winner = cmp.strict_winner
        print(f"{cmp.quantity}: {cmp.lhs_label}")
        for bound_id, rhs in cmp.rows:
            mark = "*" if bound_id in cmp.tightest else " "
            print(f"  {mark} {bound_id:34s} {rhs}")
        print(f"  tightest: {winner if winner else 'tie between ' + ', '.join(cmp.tightest)}"
              if len(cmp.rows) > 1 else f"  only bound: {cmp.rows[0][0]}")
    return 0


def cmd_corpus(args) -> int:
    if not args.run:
        from nilmult.corpus import CORPUS

        for e in CORPUS:
            print(e.name)
        return 0
    res = sweep(args.class_max)
    for line in res.lines:
        if args.verbose or line.startswith("FAIL"):
            print(line)
    print(f"{res.checks - len(res.failures)}/{res.checks} checks passed in {res.seconds:.2f}s")
    return 0 if res.ok else EXIT_FIXTURE


def cmd_collect(args) -> int:
    try:
        word = parse_word(args.word)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    g = free_nilpotent_group(args.d, args.c)
    try:
        u = g.collect(word)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(" ".join(map(str, u.exponents)))
    if args.verbose:
        print(u)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nilmult", description="Nilpotent multipliers: Witt counts, Hall bases and bounds.")
    p.add_argument("--version", action="version", version=f"nilmult {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("witt", help="Witt count chi_n(d)")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--d", type=_positive, required=True)
    s.set_defaults(func=cmd_witt)

    s = sub.add_parser("hall", help="Hall basic commutators")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--max-weight", type=_positive, required=True)
    s.add_argument("--counts", action="store_true", help="print per-weight counts only")
    s.set_defaults(func=cmd_hall)

    for name, func, help_text in (("multiplier", cmd_multiplier, "known c-nilpotent multiplier"),
                                  ("bounds", cmd_bounds, "all bound reports"),
                                  ("compare", cmd_compare, "applicable upper bounds, sorted")):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--group", required=True, help="group file (JSON) or built-in name such as d8")
        s.add_argument("--class", dest="c", type=_positive, required=True)
        if name != "compare":
            s.add_argument("--d8-formula-at-c1", action="store_true",
                           help="apply the c >= 2 D8 formula at c = 1 (gives Z4 instead of Z2)")
        if name == "bounds":
            s.add_argument("--format", choices=("text", "json", "csv"), default="text")
        s.set_defaults(func=func)

    s = sub.add_parser("corpus", help="list or sweep the built-in corpus")
    s.add_argument("--run", action="store_true")
    s.add_argument("--class-max", type=_positive, default=3)
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_corpus)

    s = sub.add_parser("collect", help="normal form in the free nilpotent group")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--class", dest="c", type=_positive, required=True)
    s.add_argument("--word", required=True, help='e.g. "x2 x1^-1" or "2,1,-1"')
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_collect)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _fail("E_ARGS", str(exc))
        return EXIT_ARGS
    except GroupFileError as exc:
        _fail("E_GROUP_FILE", str(exc))
        return EXIT_GROUP_FILE
    except CapExceeded as exc:
        _fail("E_CAP", str(exc))
        return EXIT_CAP


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
