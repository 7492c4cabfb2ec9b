"""Command-line interface: analyze, generate, verify, sweep.

Standard output carries JSON only; diagnostics go to standard error.
Exit codes: 0 success, 1 bound violation, 2 usage/parse/I-O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, constructions, oracle
from .grid import ParseError, emit_image, read_image, write_image

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2


def metrics_document(image, hints=None) -> dict:
    report = bounds.full_report(image, hints)
    mt = report.metrics
    return {
        "width": mt.width,
        "height": mt.height,
        "area": mt.area,
        "boundary_length": mt.boundary_length,
        "component_count": mt.component_count,
        "component_sizes": sorted(mt.component_sizes, reverse=True),
        "largest_component": mt.largest_component,
        "hole_count": mt.hole_count,
        "hole_free": mt.hole_free,
        "max_ball_radius": mt.max_ball_radius,
        "level_counts": list(mt.level_counts),
        "iboundary_lengths": list(mt.iboundary_lengths),
        "bounds": [e.to_dict() for e in report.entries],
    }


def _dump(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _hints(args):
    if args.m is None and args.c is None:
        return None
    if args.m is None or args.c is None:
        raise SystemExit(_fail("--m and --c must be given together"))
    return (args.m, args.c)


def _fail(msg: str) -> int:
    print(f"binshape: error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def _load(args):
    try:
        return read_image(args.path, args.format)
    except ParseError as exc:
        raise SystemExit(_fail(f"{args.path}: {exc}"))
    except (OSError, UnicodeDecodeError) as exc:
        raise SystemExit(_fail(f"{args.path}: {exc}"))


def cmd_analyze(args) -> int:
    image = _load(args)
    _dump(metrics_document(image, _hints(args)))
    return EXIT_OK


def cmd_generate(args) -> int:
    names = {"square": ("m",), "theorem1": ("m", "c"), "theorem2": ("m", "c"), "hole-lattice": ("u", "c"),
             "rectangle": ("a", "t"), "ball": ("k",)}[args.kind]
    params = {}
    for name in names:
        value = getattr(args, name)
        if value is None:
            return _fail(f"generate {args.kind} requires --{name}")
        params[name] = value
    try:
        image, spec = constructions.build(args.kind, **params)
    except ValueError as exc:
        return _fail(str(exc))
    fmt = args.format or "pbm"
    doc = {
        "kind": spec.kind,
        "parameters": spec.parameters,
        "width": image.width,
        "height": image.height,
        "expected": {k: list(v) if isinstance(v, tuple) else v for k, v in spec.expected.items()},
    }
    if args.out:
        try:
            write_image(image, args.out, fmt)
        except OSError as exc:
            return _fail(f"{args.out}: {exc}")
        doc["path"] = args.out
        doc["format"] = fmt
        _dump(doc)
    else:
        # the image itself is the machine-readable output; metrics go to stderr
        sys.stdout.write(emit_image(image, fmt))
        sys.stderr.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    image = _load(args)
    report = bounds.full_report(image, _hints(args))
    for e in report.entries:
        if not e.applicable:
            status = "n/a "
        elif e.violated:
            status = "FAIL"
        elif e.satisfied:
            status = "ok  "
        else:
            status = "info"
        note = f"  ({e.note})" if e.note else ""
        print(f"{status} {e.id}: actual {e.actual} {e.relation} bound {bounds.json_number(e.bound)}{note}", file=sys.stderr)
    failures = report.violations
    _dump({"ok": not failures, "failures": [e.to_dict() for e in failures], "checked": len(report.entries)})
    if failures:
        print(f"{len(failures)} bound(s) violated", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.jobs < 1:
        return _fail("--jobs must be >= 1")
    try:
        report = oracle.exhaustive_verify(args.width, args.height, jobs=args.jobs)
    except ValueError as exc:
        return _fail(str(exc))
    sys.stdout.write(report.to_json())
    print(
        f"{report.images_checked} images on {args.width}x{args.height}, {len(report.violations)} violation(s)",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binshape", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def image_args(p):
        p.add_argument("path")
        p.add_argument("--format", choices=("auto", "pbm", "ascii"), default="auto")
        p.add_argument("--m", type=int)
        p.add_argument("--c", type=int)

    p = sub.add_parser("analyze", help="print metrics and bound report as JSON")
    image_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="write a construction and its expected metrics")
    p.add_argument("kind", choices=constructions.KINDS)
    for name in ("m", "c", "u", "a", "t", "k"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("pbm", "ascii"))
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="exit 0 iff every applicable bound holds")
    image_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="check every image on a small grid")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
