"""Command line driver.

Subcommands: regions (cohomology-region grids), cohomology (tables of a
line-bundle complex), split-check (splitting verdict), tate-profile
(Tate term dimensions and exactness checksums).

Exit codes: 0 success / Split, 2 usage or input schema error,
3 truncation instability, 4 insufficient table coverage,
10 NonSplit, 11 Inconclusive.
"""

import argparse
import json
import sys

from . import bott, cech, linalg, splitter, tate
from .coxring import LineBundleComplex, SchemaError
from .lattice import (
    LatticeError,
    Polarization,
    ProductSpace,
    Window,
    render_region,
    safe_region,
    vadd,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TRUNCATION = 3
EXIT_COVERAGE = 4
EXIT_NONSPLIT = 10
EXIT_INCONCLUSIVE = 11


class UsageError(ValueError):
    pass


def parse_ints(text, what):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError("bad %s %r: %s" % (what, text, exc)) from exc


def parse_window(text):
    los, his = [], []
    for piece in text.split(","):
        if ":" not in piece:
            raise UsageError("bad window component %r (expected lo:hi)" % piece)
        lo, hi = piece.split(":", 1)
        try:
            los.append(int(lo))
            his.append(int(hi))
        except ValueError as exc:
            raise UsageError("bad window %r: %s" % (text, exc)) from exc
    try:
        return Window(tuple(los), tuple(his))
    except LatticeError as exc:
        raise UsageError(str(exc)) from exc


def load_complex(path, field_flag=None):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(
            "%s: invalid JSON at line %d column %d: %s"
            % (path, exc.lineno, exc.colno, exc.msg)
        ) from exc
    override = linalg.parse_field(field_flag) if field_flag else None
    return LineBundleComplex.from_json(obj, field_override=override)


def emit(text):
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def dump_json(obj):
    emit(json.dumps(obj, sort_keys=True, indent=2))


def cmd_regions(args):
    space = ProductSpace(parse_ints(args.space, "space"))
    window = parse_window(args.window)
    if len(window.lo) != space.t:
        raise UsageError("window dimension does not match the space")
    if space.t != 2:
        if not args.slice:
            raise UsageError(
                "regions renders 2-D grids; pass --slice v3,...,vt to fix the "
                "remaining coordinates"
            )
        fixed = parse_ints(args.slice, "slice")
        if len(fixed) != space.t - 2:
            raise UsageError("--slice needs %d values" % (space.t - 2))
    else:
        fixed = ()

    if args.mode == "safe":
        if not args.d:
            raise UsageError("--mode safe requires --d")
        d = Polarization(parse_ints(args.d, "polarization"))
        cells = safe_region(space, d, window)
    else:
        cells = set()
        for a in window.twists():
            sig = bott.signature(space, a)
            if sig is None:
                continue
            if args.mode == "full" or 0 < sig[0] < space.m:
                cells.add(a)

    if fixed:
        cells = {a[:2] for a in cells if a[2:] == fixed}
        window = Window(window.lo[:2], window.hi[:2])

    if args.format == "ascii":
        emit(render_region(cells, window))
    elif args.format == "json":
        dump_json(
            {
                "space": space.to_json(),
                "window": window.to_json(),
                "mode": args.mode,
                "cells": sorted([list(a) for a in cells]),
            }
        )
    else:
        lines = ["a1,a2,member"]
        for a in window.twists():
            lines.append("%d,%d,%d" % (a[0], a[1], 1 if a in cells else 0))
        emit("\n".join(lines))
    return EXIT_OK


def _table_ascii(table):
    space = table.space
    head = " ".join("a%d" % (j + 1) for j in range(space.t))
    head += " | " + " ".join("h%d" % i for i in range(space.m + 1))
    lines = [head]
    for a in table.window.twists():
        h = table.h_vector(a)
        lines.append(
            " ".join("%3d" % x for x in a)
            + " | "
            + " ".join(str(x) for x in h)
        )
    return "\n".join(lines)


def cmd_cohomology(args):
    C = load_complex(args.input, args.field)
    depth = parse_ints(args.depth, "depth") if args.depth else None
    if args.twist:
        a = C.space.degree(parse_ints(args.twist, "twist"))
        h = cech.hypercohomology(C, a, depth=depth)
        if args.check_prime and not isinstance(C.field, linalg.RationalField):
            other = load_complex(args.input, "p:%d" % args.check_prime)
            h2 = cech.hypercohomology(other, a, depth=depth)
            if h2 != h:
                raise cech.TruncationInstability(
                    "dimensions differ between primes: %r vs %r" % (h, h2)
                )
        if args.format == "json":
            dump_json({"twist": list(a), "h": list(h)})
        else:
            emit("h(F(%s)) = %s" % (",".join(map(str, a)), list(h)))
        return EXIT_OK
    if not args.window:
        raise UsageError("cohomology needs --twist or --window")
    window = parse_window(args.window)
    table = cech.cohomology_table(C, window, depth=depth)
    if args.check_prime and not isinstance(C.field, linalg.RationalField):
        other = load_complex(args.input, "p:%d" % args.check_prime)
        table2 = cech.cohomology_table(other, window, depth=depth)
        if table2.cells != table.cells:
            raise cech.TruncationInstability("tables differ between primes")
    if args.format == "json":
        dump_json(table.to_json())
    elif args.format == "csv":
        emit(table.to_csv())
    else:
        emit(_table_ascii(table))
    return EXIT_OK


def cmd_split_check(args):
    C = load_complex(args.input, args.field)
    d = Polarization(parse_ints(args.d, "polarization"))
    window = parse_window(args.window)
    verdict = splitter.split_check(
        C, d, window, torsion_free_asserted=args.assert_torsion_free
    )
    if verdict.kind == "split":
        label = " + ".join(
            "O(%dH)^%d" % (k, mult) for k, mult in verdict.summands
        ) or "0"
        backing = (
            "theorem-backed" if verdict.torsion_free_asserted else
            "necessary conditions only (torsion-freeness not asserted)"
        )
        emit("SPLIT: F = %s  [%s]" % (label, backing))
    elif verdict.kind == "nonsplit":
        a, i = verdict.witness
        emit(
            "NONSPLIT: h^%d(F(%s)) != 0 at the safe twist %s"
            % (i, ",".join(map(str, a)), list(a))
        )
    else:
        emit("INCONCLUSIVE: %s" % verdict.reason)
    dump_json(verdict.to_json())
    return {
        "split": EXIT_OK,
        "nonsplit": EXIT_NONSPLIT,
        "inconclusive": EXIT_INCONCLUSIVE,
    }[verdict.kind]


def cmd_tate_profile(args):
    b = None
    if args.table:
        try:
            with open(args.table) as fh:
                table = tate.CohomologyTable.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise SchemaError("table %s: %s" % (args.table, exc)) from exc
        space = table.space
        b = space.degree(parse_ints(args.b, "internal degree"))
    else:
        if not args.input:
            raise UsageError("tate-profile needs --input or --table")
        C = load_complex(args.input, args.field)
        space = C.space
        b = space.degree(parse_ints(args.b, "internal degree"))
        window = (
            parse_window(args.window) if args.window else tate.support_box(space, b)
        )
        table = cech.cohomology_table(C, window)

    profile = tate.tate_term_dims(table, b)
    report = {
        "b": list(b),
        "profile": {str(d): v for d, v in sorted(profile.dims.items())},
        "checksum": profile.checksum(),
    }
    checks = [c for c in (args.checks or "").split(",") if c]
    for check in checks:
        if check == "tate":
            continue  # the headline checksum above
        elif check == "corner":
            if not args.c:
                raise UsageError("--checks corner requires --c")
            c = space.degree(parse_ints(args.c, "corner degree"))
            report["corner"] = {
                "c": list(c),
                "value": tate.corner_checksum(table, c, b),
                "exact_expected": True,
            }
        elif check == "strand":
            if not args.c:
                raise UsageError("--checks strand requires --c")
            c = space.degree(parse_ints(args.c, "strand degree"))
            I = set(parse_ints(args.I, "I") if args.I else ())
            J = set(parse_ints(args.J, "J") if args.J else ())
            K = set(parse_ints(args.K, "K") if args.K else ())
            report["strand"] = {
                "c": list(c),
                "I": sorted(I),
                "J": sorted(J),
                "K": sorted(K),
                "value": tate.strand_checksum(table, c, I, J, K, b),
                "exact_expected": tate.strand_is_guaranteed(space, I, J, K),
            }
        else:
            raise UsageError("unknown check %r" % check)
    dump_json(report)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="prodcoh",
        description="Exact multigraded sheaf cohomology on products of "
        "projective spaces, and the splitting test for sums of O(kH).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regions", help="render cohomology regions of line bundles")
    p.add_argument("--space", required=True, help="factor dimensions, e.g. 2,3")
    p.add_argument("--window", required=True, help="per-factor lo:hi, e.g. -5:1,-5:2")
    p.add_argument("--mode", choices=["full", "intermediate", "safe"], default="full")
    p.add_argument("--d", help="polarization degrees (required for --mode safe)")
    p.add_argument("--slice", help="fixed values of coordinates 3..t")
    p.add_argument("--format", choices=["ascii", "json", "csv"], default="ascii")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("cohomology", help="cohomology of a line-bundle complex")
    p.add_argument("--input", required=True, help="complex JSON file")
    p.add_argument("--twist", help="single twist a1,...,at")
    p.add_argument("--window", help="per-factor lo:hi")
    p.add_argument("--field", help="q or p:<prime> (overrides the file)")
    p.add_argument("--depth", help="explicit truncation depths per factor")
    p.add_argument(
        "--check-prime", type=int, default=None,
        help="recompute at this prime and compare (guards unlucky primes)",
    )
    p.add_argument("--format", choices=["ascii", "json", "csv"], default="ascii")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("split-check", help="decide splitting into sums of O(kH)")
    p.add_argument("--input", required=True, help="complex JSON file")
    p.add_argument("--d", required=True, help="polarization degrees, e.g. 1,1")
    p.add_argument("--window", required=True, help="per-factor lo:hi")
    p.add_argument("--field", help="q or p:<prime>")
    p.add_argument(
        "--assert-torsion-free", action="store_true",
        help="record the torsion-freeness hypothesis (not verified)",
    )
    p.set_defaults(func=cmd_split_check)

    p = sub.add_parser("tate-profile", help="Tate term dimensions and checksums")
    p.add_argument("--input", help="complex JSON file")
    p.add_argument("--table", help="precomputed table JSON file")
    p.add_argument("--b", required=True, help="internal degree b1,...,bt")
    p.add_argument("--window", help="table window (default: the support box of b)")
    p.add_argument("--field", help="q or p:<prime>")
    p.add_argument("--checks", help="comma list from tate,strand,corner")
    p.add_argument("--c", help="quadrant degree for strand/corner checks")
    p.add_argument("--I", help="strand factors with a_i < c_i (0-based)")
    p.add_argument("--J", help="strand factors with a_i = c_i (0-based)")
    p.add_argument("--K", help="strand factors with a_i >= c_i (0-based)")
    p.set_defaults(func=cmd_tate_profile)

    return parser


# Flags whose values routinely start with '-' (negative degrees); join them
# with '=' so argparse does not mistake the value for an option.
_VALUE_FLAGS = {
    "--space", "--window", "--twist", "--b", "--c", "--d", "--slice",
    "--depth", "--I", "--J", "--K",
}


def _join_values(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            val = next(it, None)
            if val is None:
                out.append(tok)
            else:
                out.append("%s=%s" % (tok, val))
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_values(list(argv)))
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, SchemaError, LatticeError, linalg.FieldError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE
    except cech.TruncationInstability as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_TRUNCATION
    except tate.TateCoverageError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_COVERAGE


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
