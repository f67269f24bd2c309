"""Command-line interface: ``surfbundle validate|fiberings|bounds|family``."""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import Sequence

from .errors import DomainError, GraphInvalid, InternalInvariantError
from .fileformat import ParseError, dump_construction, family_construction, load_construction
from .report import BoundsTable, bounds_row, build_report, render_table, to_json

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_PARSE = 3
EXIT_INTERNAL = 4

FAMILY_MIN = {"line": 1, "basic": 2, "tower": 1}


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _emit(text: str, out_path: str | None = None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".surfbundle-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _render(value, fmt: str) -> str:
    return to_json(value) if fmt == "json" else render_table(value)


def cmd_validate(args) -> int:
    c = load_construction(args.path)
    kind = "section-sum" if hasattr(c, "fiber_piece") else "cover"
    print(f"ok: valid {kind} construction with {c.graph.n_vertices} vertices and {c.graph.n_edges} edges",
          file=sys.stderr)
    return EXIT_OK


def cmd_fiberings(args) -> int:
    c = load_construction(args.path)
    rep = build_report(c, certify=args.certify, with_monodromy=args.monodromy)
    _emit(_render(rep, args.format))
    return EXIT_OK


def cmd_bounds(args) -> int:
    ds = range(1, args.sweep + 1) if args.sweep else [args.d]
    table = BoundsTable([bounds_row(d, args.hillman) for d in ds])
    _emit(_render(table, args.format))
    return EXIT_OK


def cmd_family(args) -> int:
    if args.n < FAMILY_MIN[args.kind]:
        raise DomainError(f"{args.kind} family needs a parameter >= {FAMILY_MIN[args.kind]}")
    _emit(dump_construction(family_construction(args.kind, args.n)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="surfbundle", description="Surface bundles over surfaces with many fiberings.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a construction file")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    f = sub.add_parser("fiberings", help="enumerate fiberings of a construction")
    f.add_argument("path")
    f.add_argument("--certify", action="store_true", help="emit pairwise distinctness certificates")
    f.add_argument("--monodromy", action="store_true", help="emit generator monodromy matrices")
    f.add_argument("--format", choices=("table", "json"), default="table")
    f.set_defaults(func=cmd_fiberings)

    b = sub.add_parser("bounds", help="bounds on the fibering count for chi = 4d")
    b.add_argument("d", type=_positive, nargs="?", default=1)
    b.add_argument("--sweep", type=_positive, metavar="MAX", help="tabulate d = 1..MAX")
    b.add_argument("--hillman", action="store_true", help="use the sharper d^(2d+6) variant")
    b.add_argument("--format", choices=("table", "json"), default="table")
    b.set_defaults(func=cmd_bounds)

    fam = sub.add_parser("family", help="write a construction file for a standard family")
    fam.add_argument("kind", choices=("line", "basic", "tower"))
    fam.add_argument("n", type=int)
    fam.add_argument("-o", "--output", help="output path (default: standard output)")
    fam.set_defaults(func=cmd_family)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GraphInvalid as exc:
        for v in exc.violations:
            print(f"invalid: {v}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InternalInvariantError as exc:
        print(f"internal error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DomainError, ValueError, KeyError) as exc:
        name = type(exc).__name__
        print(f"invalid ({name}): {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
