"""Command-line front end.

    tbilliard geometry --level N [--out DIR] [--format json|svg]
    tbilliard orbit    --level N --x0 X --slope M [--signs ++] [--cap C] [--out DIR]
    tbilliard verify   SUITE [--levels N] [--cap C] [--seed S] [--jobs J] [--out FILE] [--format json|csv]
    tbilliard path     --x0 X --slope M [--signs ++] [--levels N] [--out DIR] [--format json|csv|svg]

Exact inputs are written ``p/q`` or ``p/q+r/s*sqrt(2)``.  Exit status: 0 on
success, 1 when a verification assertion fails (or a path is undefined),
2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .exact import format_scalar, parse_scalar
from .flow import DEFAULT_CAP, Direction, PhasePoint, trace_orbit
from .geometry import Point
from .suites import DEFAULT_SEED

log = logging.getLogger("tbilliard")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2



class UsageError(Exception):
    pass


def _scalar(text: str):
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _level(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"level must be an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("level must be nonnegative")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _signs(text: str) -> tuple[int, int]:
    """``++``, ``+-``, ``-+``, ``--`` or ``1,-1`` style."""
    t = text.replace(" ", "")
    if len(t) == 2 and set(t) <= {"+", "-"}:
        return tuple(1 if c == "+" else -1 for c in t)  # type: ignore[return-value]
    parts = t.split(",")
    if len(parts) == 2 and all(p in ("1", "+1", "-1") for p in parts):
        return int(parts[0]), int(parts[1])
    raise argparse.ArgumentTypeError(f"signs must look like '++' or '1,-1', got {text!r}")


def _slope(text: str):
    if text.strip().lower() in ("inf", "vertical", "infinity"):
        raise argparse.ArgumentTypeError("vertical directions are not supported")
    v = _scalar(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("slope is the positive magnitude |dy/dx|; use --signs for the quadrant")
    return v


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_geometry(args) -> int:
    from .analysis import prefractal
    from .serialize import boundary_svg, boundary_to_json, dumps

    T = prefractal(args.level)
    data = dumps(boundary_to_json(T))
    svg = boundary_svg(T)
    if args.out:
        out = Path(args.out)
        if args.format in (None, "json"):
            _write(out / f"T{args.level}.json", data)
        if args.format in (None, "svg"):
            _write(out / f"T{args.level}.svg", svg)
    else:
        sys.stdout.write(svg if args.format == "svg" else data)
    print(f"T_{args.level}: {len(T.vertices)} vertices, {T.copy_count} copies, perimeter {format_scalar(T.perimeter)}, "
          f"height {format_scalar(T.height)}", file=sys.stderr)
    return EXIT_OK


def cmd_orbit(args) -> int:
    from .analysis import first_escape, first_return, prefractal
    from .serialize import dumps, orbit_svg, orbit_to_json

    T = prefractal(args.level)
    init = PhasePoint(Point(args.x0, args.y0), Direction(args.signs[0], args.signs[1], args.slope))
    try:
        o = trace_orbit(T, init, cap=args.cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = dumps(orbit_to_json(o))
    if args.out:
        out = Path(args.out)
        stem = f"orbit_T{args.level}"
        if args.format in (None, "json"):
            _write(out / f"{stem}.json", data)
        if args.format in (None, "svg"):
            _write(out / f"{stem}.svg", orbit_svg(o))
    elif args.format == "svg":
        sys.stdout.write(orbit_svg(o))
    elif args.format == "json":
        sys.stdout.write(data)
    tau = first_escape(o)
    ups = first_return(o)
    line = f"{o.termination}: {o.n_collisions} collisions"
    if o.period:
        line += f", period {o.period}"
    if o.singular_vertex is not None:
        line += f", reflex corner ({format_scalar(o.singular_vertex.x)}, {format_scalar(o.singular_vertex.y)})"
    line += f", tau {'inf' if tau == math.inf else tau}, upsilon {'inf' if ups == math.inf else ups}"
    print(line, file=sys.stderr if args.format and not args.out else sys.stdout)
    return EXIT_OK


def _run_one(payload):
    name, levels, cap, seed = payload
    from .suites import SuiteConfig, run_suite

    return run_suite(name, SuiteConfig(levels=levels, cap=cap, seed=seed))


def cmd_verify(args) -> int:
    from .suites import SUITES

    names = list(SUITES) if args.suite == "all" else [args.suite]
    payloads = [(n, args.levels, args.cap, args.seed) for n in names]
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_run_one, payloads))
    else:
        results = [_run_one(p) for p in payloads]
    ok = all(r.ok for r in results)
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"[{status}] {r.name:20s} {len(r.checks) - len(r.failures)}/{len(r.checks)} checks  "
              f"({r.seconds:.1f} s)  {r.description}")
        for c in r.failures[:5]:
            detail = ", ".join(f"{k}={v}" for k, v in r.as_dict()["checks"][r.checks.index(c)].items() if k not in ("case", "ok"))
            print(f"         x {c.case}: {detail}")
        if len(r.failures) > 5:
            print(f"         ... {len(r.failures) - 5} more failures")
    if args.out:
        out = Path(args.out)
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["suite", "case", "ok", "detail"])
            for r in results:
                for c in r.as_dict()["checks"]:
                    detail = {k: v for k, v in c.items() if k not in ("case", "ok")}
                    w.writerow([r.name, c["case"], c["ok"], json.dumps(detail, sort_keys=True)])
            _write(out, buf.getvalue())
        else:
            report = {"ok": ok, "seed": args.seed, "suites": [r.as_dict() for r in results]}
            _write(out, json.dumps(report, indent=2) + "\n")
    print("all checks passed" if ok else "some checks FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_path(args) -> int:
    from .analysis import NotApplicableError, build_nontrivial_path, build_sequence, classify
    from .serialize import dumps, escape_distance_rows, path_svg, path_to_json, rows_to_csv, sequence_to_json

    d = Direction(args.signs[0], args.signs[1], args.slope)
    try:
        seq = build_sequence(args.x0, d, args.levels, y0=args.y0, cap=args.cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cl = classify(seq)
    report = {"sequence": sequence_to_json(seq, cl)}
    try:
        path = build_nontrivial_path(seq)
    except NotApplicableError as exc:
        report["path"] = None
        report["error"] = str(exc)
        print(f"no nontrivial path: {exc}")
        if args.out:
            _write(Path(args.out) / "path.json", dumps(report))
        return EXIT_FAIL
    report["path"] = path_to_json(path)
    if args.out:
        out = Path(args.out)
        if args.format in (None, "json"):
            _write(out / "path.json", dumps(report))
        if args.format in (None, "svg"):
            _write(out / "path.svg", path_svg(path))
        if args.format in (None, "csv") and seq.direction.sy > 0:
            try:
                header, rows = escape_distance_rows(seq, args.x0, d.sx)
                _write(out / "escape_distances.csv", rows_to_csv(header, rows))
            except (ValueError, NotApplicableError) as exc:
                log.warning("escape-distance table skipped: %s", exc)
    elif args.format == "svg":
        sys.stdout.write(path_svg(path))
    elif args.format == "json":
        sys.stdout.write(dumps(report))
    print("escape words: " + " ".join(path.escape_words))
    if path.limit_point is not None:
        print(f"limit point ({format_scalar(path.limit_point.x)}, 3), address {path.address}")
    else:
        lo, hi = path.limit_interval
        print(f"limit point in [{format_scalar(lo)}, {format_scalar(hi)}] x {{3}}")
    print(f"classification: {cl.verdict} ({cl.evidence.get('reason')})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .suites import suite_names

    p = argparse.ArgumentParser(prog="tbilliard", description="Exact billiards on prefractal T-shaped tables.")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for any sampled cases (default %(default)s)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("geometry", help="boundary of T_level as JSON/SVG")
    g.add_argument("--level", type=_level, required=True)
    g.add_argument("--out")
    g.add_argument("--format", choices=["json", "svg"])

    o = sub.add_parser("orbit", help="trace one orbit")
    o.add_argument("--level", type=_level, default=0)
    o.add_argument("--x0", type=_scalar, required=True)
    o.add_argument("--y0", type=_scalar, default=0)
    o.add_argument("--slope", type=_slope, required=True)
    o.add_argument("--signs", type=_signs, default=(1, 1))
    o.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP)
    o.add_argument("--out")
    o.add_argument("--format", choices=["json", "svg"])

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=suite_names())
    v.add_argument("--levels", type=_level)
    v.add_argument("--cap", type=_positive_int)
    v.add_argument("--jobs", type=_positive_int, default=1)
    v.add_argument("--out")
    v.add_argument("--format", choices=["json", "csv"], default="json")

    q = sub.add_parser("path", help="nontrivial path of a compatible sequence")
    q.add_argument("--x0", type=_scalar, required=True)
    q.add_argument("--y0", type=_scalar, default=0)
    q.add_argument("--slope", type=_slope, required=True)
    q.add_argument("--signs", type=_signs, default=(1, 1))
    q.add_argument("--levels", type=_level, default=6)
    q.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP)
    q.add_argument("--out")
    q.add_argument("--format", choices=["json", "csv", "svg"])

    for sp in (g, o, v, q):
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    return p


COMMANDS = {"geometry": cmd_geometry, "orbit": cmd_orbit, "verify": cmd_verify, "path": cmd_path}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    random.seed(args.seed)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"tbilliard {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
