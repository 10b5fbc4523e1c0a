"""Command-line entry point.

Exit codes: 0 success, 1 internal invariant violation, 2 invalid
arguments, 3 a verification found a witness, 4 a budget was exhausted.
Every run writes its fully resolved parameters to stderr as a comment
line that can be pasted back as a command.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from thincirc import MATRIX_FORMAT_VERSION, SWEEP_CSV_VERSION, __version__
from thincirc.construction import (
    ConstructionFailed,
    ConstructionParams,
    construct_thin_circulant,
)
from thincirc.core import SupportSet, loads_matrix
from thincirc.errors import BudgetExhausted, InvalidArgument, InvariantViolation
from thincirc.experiment import (
    SweepSpec,
    corollary_report,
    density_sweep,
    rows_to_csv,
    rows_to_json,
)
from thincirc.freeness import (
    CYCLIC,
    DEFAULT_BUDGET,
    INTEGER_SUMS,
    find_block_naive,
    find_rectangle_integer,
    is_free_cyclic,
)
from thincirc.rectangles import LEMMA_CHECKS, enumerate_rectangles
from thincirc.rho import rho_by_max, rho_closed
from thincirc.sumset import (
    SumsetBoundQuery,
    grid_search,
    min_sumset_case,
    partition_search,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_WITNESS = 3
EXIT_BUDGET = 4

log = logging.getLogger("thincirc")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _header(argv_resolved: list[str]):
    print("# thincirc " + " ".join(argv_resolved), file=sys.stderr)


def _resolved(args, names: list[str], sub: list[str]) -> list[str]:
    out = list(sub)
    for name in names:
        val = getattr(args, name)
        if val is None or val is False:
            continue
        flag = "--" + name.replace("_", "-")
        if val is True:
            out.append(flag)
        elif isinstance(val, (list, tuple)):
            out += [flag, *map(str, val)]
        else:
            out += [flag, str(val)]
    return out


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


# -- subcommands -----------------------------------------------------------

def cmd_construct(args) -> int:
    scale = Fraction(args.scale)
    _header(_resolved(args, ["n", "k", "l", "scale", "max_trials", "seed",
                             "budget", "jobs", "out"], ["construct"]))
    params = ConstructionParams(N=args.n, k=args.k, l=args.l, density_scale=scale,
                                max_trials=args.max_trials, seed=args.seed,
                                budget=args.budget)
    try:
        res = construct_thin_circulant(params, jobs=args.jobs)
    except ConstructionFailed as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return EXIT_BUDGET
    _write(args.out, json.dumps(res.to_dict()))
    return EXIT_OK


def cmd_verify(args) -> int:
    _header(_resolved(args, ["input", "k", "l", "mode", "budget", "naive"], ["verify"]))
    with open(args.input) as fh:
        m = loads_matrix(fh.read())
    if args.naive:
        w = find_block_naive(m, args.k, args.l, limit=max(m.n, 1))
    elif args.mode == INTEGER_SUMS:
        w = find_rectangle_integer(SupportSet(m.n, m.row.members), args.k, args.l,
                                   budget=args.budget, max_k=args.k)
    else:
        w = is_free_cyclic(m, args.k, args.l, budget=args.budget, max_k=args.k)
    if w is None:
        print("free")
        return EXIT_OK
    print(json.dumps(w.to_dict()))
    return EXIT_WITNESS


def cmd_rho(args) -> int:
    _header(_resolved(args, ["k", "l", "table", "format", "check"], ["rho"]))
    if args.table:
        kmax, lmax = args.table
        lines = ["K,L,rho,rho_float,argmax_n"]
        for K in range(2, kmax + 1):
            for L in range(K, lmax + 1):
                r = rho_closed(K, L)
                if args.check and rho_by_max(K, L).value != r.value:
                    raise InvariantViolation(f"closed form and maximum differ at ({K},{L})")
                if args.format == "csv":
                    lines.append(f"{K},{L},{r.value},{float(r.value)!r},{r.argmax_n}")
                else:
                    lines.append(f"{K} {L} {r.value} {float(r.value):.12g} n={r.argmax_n}")
        if args.format != "csv":
            lines = lines[1:]
        _write(None, "\n".join(lines))
        return EXIT_OK
    if args.k is None or args.l is None:
        raise InvalidArgument("rho needs --k and --l (or --table)")
    r = rho_closed(args.k, args.l, allow_swap=True)
    if args.check and rho_by_max(args.k, args.l, allow_swap=True).value != r.value:
        raise InvariantViolation("closed form and maximum differ")
    if r.swapped:
        print("# note: K > L, arguments swapped", file=sys.stderr)
    print(f"{r.value} {float(r.value):.12g}")
    return EXIT_OK


def cmd_sumset_min(args) -> int:
    _header(_resolved(args, ["k", "l", "n", "oracle", "radius"], ["sumset-min"]))
    K, L = args.k, args.l
    if K > L:
        print("# note: K > L, arguments swapped", file=sys.stderr)
        K, L = L, K
    q = SumsetBoundQuery(args.n, K, L)
    value, case = min_sumset_case(q)
    if args.oracle is None:
        print(value)
        return EXIT_OK
    if args.oracle == "partition":
        got, part = partition_search(q)
        if got != value:
            raise InvariantViolation(f"case ({case}) gives {value}, partition search gives {got}")
        print(got)
        if part is None:
            print("witness: dim A + dim B = n (all K*L sums distinct)")
        else:
            print("witness: s={} s_a={} s_b={}".format(*part))
        return EXIT_OK
    got, pair = grid_search(K, L, args.n, args.radius)
    if got is None:
        print("none")
        print(f"# no pair in the radius-{args.radius} grid reaches dimension {args.n}",
              file=sys.stderr)
        return EXIT_OK
    print(got)
    print("witness: A={} B={}".format(sorted(pair[0].points), sorted(pair[1].points)))
    if got != value:
        print(f"# note: grid minimum {got} differs from the case ({case}) value {value}",
              file=sys.stderr)
    return EXIT_OK


def cmd_enum_rect(args) -> int:
    _header(_resolved(args, ["n", "k", "l", "verify", "format", "ordered", "override"],
                      ["enum-rect"]))
    if args.verify:
        names = list(LEMMA_CHECKS) if args.verify == "all" else [args.verify]
        reports = [LEMMA_CHECKS[name](args.n, args.k, args.l, override=args.override)
                   for name in names]
        if args.format == "json":
            _write(None, json.dumps([r.to_dict() for r in reports], indent=2, default=list))
        else:
            for r in reports:
                spectrum = ", ".join(f"n={n}: {c}" for n, c in sorted(r.n_spectrum.items()))
                print(f"{r.lemma}: rectangles={r.rectangles} classes={r.classes} "
                      f"max_ratio={r.max_ratio} ({float(r.max_ratio):.4g}) "
                      f"violations={len(r.violations)} [{spectrum}]")
        return EXIT_OK if all(r.ok for r in reports) else EXIT_INTERNAL
    rects = enumerate_rectangles(args.n, args.k, args.l, ordered=args.ordered,
                                 override=args.override)
    if args.format == "json":
        _write(None, json.dumps([{"a": list(e.a), "b": list(e.b)} for e in rects]))
    else:
        for e in rects:
            print(" ".join(map(str, e.a)), "|", " ".join(map(str, e.b)))
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.exp == "corollary":
        _header(_resolved(args, ["n"], ["experiment", "corollary"]))
        _write(None, json.dumps(corollary_report(args.n).to_dict(), indent=2))
        return EXIT_OK
    _header(_resolved(args, ["spec", "out", "format", "jobs"], ["experiment", "sweep"]))
    with open(args.spec) as fh:
        spec = SweepSpec.from_dict(json.load(fh))
    print("# resolved spec: " + json.dumps(spec.__dict__, default=list), file=sys.stderr)
    rows = density_sweep(spec, jobs=args.jobs)
    text = rows_to_json(rows) if args.format == "json" else rows_to_csv(rows)
    _write(args.out, text)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="thincirc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="store_true",
                   help="print package and file-format versions")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    jobs_default = os.cpu_count() or 1

    c = sub.add_parser("construct", help="build a (k,l)-free 2N x 2N circulant")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--scale", default="1", help="multiplier on the reference density")
    c.add_argument("--max-trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a matrix JSON for an all-ones k x l block")
    v.add_argument("--input", required=True)
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--l", type=int, required=True)
    v.add_argument("--mode", choices=[CYCLIC, INTEGER_SUMS], default=CYCLIC)
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    v.add_argument("--naive", action="store_true", help="use the row-subset scan")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("rho", help="exact exponent rho(K, L)")
    r.add_argument("--k", type=int)
    r.add_argument("--l", type=int)
    r.add_argument("--table", type=int, nargs=2, metavar=("KMAX", "LMAX"))
    r.add_argument("--format", choices=["csv", "text"], default="text")
    r.add_argument("--check", action="store_true",
                   help="also compare against the maximization over n")
    r.set_defaults(func=cmd_rho)

    s = sub.add_parser("sumset-min", help="minimum |A+B| for given sizes and dimension")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--oracle", choices=["partition", "grid"])
    s.add_argument("--radius", type=int, default=2)
    s.set_defaults(func=cmd_sumset_min)

    e = sub.add_parser("enum-rect", help="enumerate rectangles / check the counting lemmas")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--l", type=int, required=True)
    e.add_argument("--verify", choices=[*LEMMA_CHECKS, "all"])
    e.add_argument("--format", choices=["json", "text"], default="text")
    e.add_argument("--ordered", action="store_true")
    e.add_argument("--override", action="store_true", help="lift the enumeration size guard")
    e.set_defaults(func=cmd_enum_rect)

    x = sub.add_parser("experiment", help="density sweeps and corollary report")
    xs = x.add_subparsers(dest="exp", required=True, parser_class=_Parser)
    sw = xs.add_parser("sweep")
    sw.add_argument("--spec", required=True)
    sw.add_argument("--out")
    sw.add_argument("--format", choices=["csv", "json"], default="csv")
    sw.add_argument("--jobs", type=int, default=jobs_default)
    co = xs.add_parser("corollary")
    co.add_argument("--n", type=int, required=True)
    x.set_defaults(func=cmd_experiment)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.version:
        print(f"thincirc {__version__}; matrix-json v{MATRIX_FORMAT_VERSION}; "
              f"sweep-csv v{SWEEP_CSV_VERSION}")
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidArgument, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
