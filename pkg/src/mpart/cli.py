"""Command-line surface.

Exit codes: 0 success / valid / isomorphic; 1 usage or I/O error;
2 invalid design (or definitive negative answer); 3 non-isomorphic;
4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import fixtures
from .errors import UNKNOWN, BudgetExceededError, DesignError
from .files import (
    parse_blocks,
    parse_concise,
    render,
    serialize_concise,
    serialize_json,
)
from .isomorphism import are_isomorphic, are_weakly_isomorphic, canonical_form
from .model import (
    BlockDesign,
    MultipartDesign,
    relabel_levels,
    reorder_blocks,
)
from .tables import enumerate_reachable, render_rows
from .verify import check_admissible, check_multipart, find_partition
from . import constructions as cons
from . import ingredients as ing

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_NONISO = 3
EXIT_BUDGET = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _load_design(path: str) -> MultipartDesign:
    if path.startswith("fixture:"):
        return fixtures.load_design(path.split(":", 1)[1])
    return parse_concise(Path(path).read_text())


def _load_blocks(path: str) -> BlockDesign:
    if path.startswith("fixture:"):
        return fixtures.load_block_design(path.split(":", 1)[1])
    return parse_blocks(Path(path).read_text())


def _write_design(design: MultipartDesign, out: str | None, fmt: str):
    text = serialize_json(design) if fmt == "json" else serialize_concise(design)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, tuple):
        return [_jsonable(x) for x in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_jsonable(x) for x in value]
    return value


def _triple(text: str) -> tuple[int, int, int]:
    parts = [int(x) for x in text.replace(",", " ").split()]
    if len(parts) != 3:
        raise _UsageError(f"expected v,k,lambda, got {text!r}")
    return parts[0], parts[1], parts[2]


def _build(args) -> int:
    fmt = args.format
    name = args.construction
    if name == "cartesian":
        parts = [ing.get_bibd(*_triple(t)) for t in args.ingredient]
        design = cons.cartesian_product(parts)
    elif name == "subcartesian":
        if len(args.ingredient) != 2:
            raise _UsageError("subcartesian needs exactly two --ingredient")
        d1 = ing.get_bibd(*_triple(args.ingredient[0]))
        d2 = ing.get_bibd(*_triple(args.ingredient[1]))
        c = args.classes or 1
        from .model import as_multipart
        partition = find_partition(as_multipart(d2), c, budget=args.budget)
        if partition is UNKNOWN:
            print("partition search budget exhausted", file=sys.stderr)
            return EXIT_BUDGET
        if partition is None:
            print(f"second ingredient is not {c}-partitionable", file=sys.stderr)
            return EXIT_INVALID
        design = cons.subcartesian_product(d1, d2, partition)
    elif name == "hadamard":
        H = ing.hadamard_matrix(args.order)
        design = cons.hadamard_2part(H, second_row=args.second_row)
    elif name == "symmetric-split":
        if len(args.ingredient) != 1:
            raise _UsageError("symmetric-split needs one --ingredient")
        design = cons.symmetric_block_split(
            ing.get_bibd(*_triple(args.ingredient[0])), args.gamma)
    elif name == "augment":
        design = cons.augment(_load_design(args.design[0]), args.factor)
    elif name == "part-swap":
        design = cons.part_swap(_load_design(args.design[0]), args.factor)
    elif name == "product":
        if len(args.design) != 2:
            raise _UsageError("product needs exactly two --design")
        design = cons.multipart_product(_load_design(args.design[0]),
                                        _load_design(args.design[1]))
    elif name == "oa":
        ingredients = [ing.get_bibd(*_triple(t)) for t in args.ingredient]
        c = args.classes or 1
        from .model import as_multipart
        partitions = []
        for bd in ingredients:
            partition = find_partition(as_multipart(bd), c, budget=args.budget)
            if partition is None or partition is UNKNOWN:
                print(f"ingredient is not {c}-partitionable", file=sys.stderr)
                return EXIT_INVALID
            partitions.append(partition)
        oa = ing.orthogonal_array([bd.b // c for bd in ingredients], args.strength)
        design = cons.oa_compose(ingredients, partitions, oa)
    elif name == "meet-filter":
        host = _load_blocks(args.host)
        special = [int(x) - 1 for x in args.special.replace(",", " ").split()]
        design = cons.meet_filter(host, special, args.t)
    elif name == "class-matched":
        theta = _load_design(args.design[0])
        c = args.classes
        partition = find_partition(theta, c, budget=args.budget)
        if partition is None or partition is UNKNOWN:
            print(f"design is not {c}-partitionable", file=sys.stderr)
            return EXIT_INVALID
        delta = ing.get_bibd(*_triple(args.ingredient[0]))
        design = cons.class_matched_product(theta, partition, delta)
    else:  # pragma: no cover - argparse restricts choices
        raise _UsageError(f"unknown construction {name}")
    _write_design(design, args.output, fmt)
    return EXIT_OK


def _verify(args) -> int:
    design = _load_design(args.file)
    report = check_multipart(design, allow_degenerate=args.allow_degenerate)
    if args.format == "json":
        print(json.dumps(_jsonable(asdict(report)), indent=2))
    else:
        print(report.summary())
    return EXIT_OK if report.valid else EXIT_INVALID


def _params(args) -> int:
    values = args.numbers
    if len(values) < 3 or len(values) % 2 == 0:
        raise _UsageError("params needs: b v1..vm k1..km")
    m = (len(values) - 1) // 2
    b, v, k = values[0], values[1:1 + m], values[1 + m:]
    report = check_admissible(b, v, k, c=args.c)
    if args.format == "json":
        print(json.dumps(_jsonable(asdict(report)), indent=2))
    else:
        print(report.summary())
    return EXIT_OK if report.ok else EXIT_INVALID


def _canon(args) -> int:
    design = _load_design(args.file)
    form = canonical_form(design, budget=args.budget)
    if args.selfcheck:
        rng = random.Random(args.seed)
        for _ in range(args.selfcheck):
            perms = [rng.sample(range(size), size) for size in design.v]
            order = rng.sample(range(design.b), design.b)
            shuffled = reorder_blocks(relabel_levels(design, perms), order)
            if canonical_form(shuffled, budget=args.budget).certificate != form.certificate:
                print("certificate changed under relabeling", file=sys.stderr)
                return EXIT_INVALID
        print(f"selfcheck: {args.selfcheck} relabelings, certificate stable")
    _write_design(form.design, args.output, args.format)
    return EXIT_OK


def _iso(args, weak: bool) -> int:
    d1 = _load_design(args.file1)
    d2 = _load_design(args.file2)
    same = (are_weakly_isomorphic if weak else are_isomorphic)(d1, d2, budget=args.budget)
    print(("weakly " if weak else "") + ("isomorphic" if same else "not isomorphic"))
    return EXIT_OK if same else EXIT_NONISO


def _partition(args) -> int:
    design = _load_design(args.file)
    result = find_partition(design, args.c, budget=args.budget)
    if result is UNKNOWN:
        print("budget exhausted: undecided")
        return EXIT_BUDGET
    if result is None:
        print(f"no {args.c}-class partition exists")
        return EXIT_INVALID
    if args.format == "json":
        print(json.dumps([[t + 1 for t in cls] for cls in result.classes]))
    else:
        for j, cls in enumerate(result.classes):
            print(f"class {j + 1}: blocks " + " ".join(str(t + 1) for t in cls))
    return EXIT_OK


def _render(args) -> int:
    design = _load_design(args.file)
    sys.stdout.write(render(design, mode=args.mode))
    return EXIT_OK


def _tables(args) -> int:
    rows = enumerate_reachable(
        max_b=args.max_b,
        constructions=args.constructions,
        exclude=args.exclude,
        swap_convention=not args.no_swap_convention,
    )
    if args.format == "json":
        print(json.dumps([_jsonable(asdict(row)) for row in rows], indent=2))
    else:
        sys.stdout.write(render_rows(rows))
    return EXIT_OK


def _make_parser() -> _Parser:
    parser = _Parser(prog="mpart", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--budget", type=int, default=10_000_000)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("build", help="run a construction and write the design")
    p.add_argument("construction", choices=(
        "cartesian", "subcartesian", "hadamard", "symmetric-split", "augment",
        "part-swap", "product", "oa", "meet-filter", "class-matched"))
    p.add_argument("--ingredient", action="append", default=[],
                   metavar="v,k,lambda", help="catalog design (repeatable)")
    p.add_argument("--design", action="append", default=[],
                   metavar="FILE", help="design file input (repeatable)")
    p.add_argument("--host", metavar="FILE", help="block-design file for meet-filter")
    p.add_argument("--special", metavar="PTS", help="1-based points for meet-filter")
    p.add_argument("--t", type=int, default=2, help="meet size for meet-filter")
    p.add_argument("--order", type=int, default=12, help="Hadamard order")
    p.add_argument("--second-row", type=int, default=1)
    p.add_argument("--gamma", type=int, default=0, help="block removed by symmetric-split")
    p.add_argument("--factor", type=int, default=0)
    p.add_argument("--classes", type=int, default=None)
    p.add_argument("--strength", type=int, default=2)
    p.add_argument("-o", "--output")
    common(p)
    p.set_defaults(func=_build)

    p = sub.add_parser("verify", help="check the balance conditions")
    p.add_argument("file")
    p.add_argument("--allow-degenerate", action="store_true")
    common(p)
    p.set_defaults(func=_verify)

    p = sub.add_parser("params", help="admissibility of b v1..vm k1..km")
    p.add_argument("numbers", type=int, nargs="+")
    p.add_argument("--c", type=int, default=None)
    common(p)
    p.set_defaults(func=_params)

    p = sub.add_parser("canon", help="canonical form of a design")
    p.add_argument("file")
    p.add_argument("--selfcheck", type=int, default=0,
                   help="also verify the certificate on N random relabelings")
    p.add_argument("-o", "--output")
    common(p)
    p.set_defaults(func=_canon)

    p = sub.add_parser("iso", help="exit 0 if isomorphic, 3 if not")
    p.add_argument("file1")
    p.add_argument("file2")
    common(p)
    p.set_defaults(func=lambda args: _iso(args, weak=False))

    p = sub.add_parser("weak-iso", help="isomorphism up to factor exchange")
    p.add_argument("file1")
    p.add_argument("file2")
    common(p)
    p.set_defaults(func=lambda args: _iso(args, weak=True))

    p = sub.add_parser("partition", help="find c equally replicated block classes")
    p.add_argument("file")
    p.add_argument("--c", type=int, required=True)
    common(p)
    p.set_defaults(func=_partition)

    p = sub.add_parser("render", help="concise, dual or full rendering")
    p.add_argument("file")
    p.add_argument("--mode", choices=("concise", "dual", "full"), default="concise")
    common(p)
    p.set_defaults(func=_render)

    p = sub.add_parser("tables", help="least-b parameter rows per construction")
    p.add_argument("--max-b", type=int, default=60)
    p.add_argument("--constructions", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--exclude", type=int, nargs="+", default=[])
    p.add_argument("--no-swap-convention", action="store_true")
    common(p)
    p.set_defaults(func=_tables)

    return parser


def cli_main(argv=None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, DesignError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
