"""Command-line front end.

Exit codes: 0 success, 1 result is not a valid partition, 2 unreadable
input, 3 degenerate input, 4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_geom import DegenerateInputError, fraction_str
from .fileio import (
    ParseError,
    format_points,
    parse_planes,
    parse_points,
    parse_vector,
    parse_weighted_points,
    read_text,
)
from .grid_search import GridSearchError
from .partition import (
    ORACLE_CAP,
    InternalError,
    default_direction,
    eight_partition,
    generate,
    oracle_triples,
    prepare,
    verify,
)
from .planar import four_partition_with_bisector
from .tracer import trace, trace_log_lines

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_DEGENERATE, EXIT_INTERNAL = 0, 1, 2, 3, 4
DEFAULT_SEED = 0


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    seed: int = DEFAULT_SEED
    direction: tuple[Fraction, ...] = (Fraction(0), Fraction(0), Fraction(1))
    perturb: bool = False
    oracle_check: bool = False
    emit_trace_log: str | None = None
    fmt: str = "json"
    extra: dict = field(default_factory=dict)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_partition(cfg: RunConfig) -> int:
    points = parse_points(read_text(cfg.input))
    result = eight_partition(points, cfg.direction, seed=cfg.seed, perturb=cfg.perturb)
    report = result.report
    doc = report.to_json()
    code = EXIT_OK if report.valid else EXIT_INVALID
    if cfg.oracle_check:
        if len(points) <= ORACLE_CAP:
            oracle = oracle_triples(points, cfg.direction, seed=cfg.seed, perturb=cfg.perturb)
            found = oracle.report is not None and oracle.report.valid
            doc["oracle"] = {"valid": found, "agrees": found == report.valid, "candidates": oracle.candidates}
            if found != report.valid:
                code = EXIT_INTERNAL
        else:
            doc["oracle"] = {"skipped": f"more than {ORACLE_CAP} points"}
    if result.search is not None:
        doc["search"] = {
            "zero": list(result.search.zero),
            "rounds": result.search.rounds,
            "round_bound": result.search.bound,
            "m": result.curve.m,
        }
    if cfg.emit_trace_log and result.curve is not None:
        with open(cfg.emit_trace_log, "w", encoding="utf-8") as fh:
            for rec in trace_log_lines(result.curve):
                fh.write(json.dumps({"kind": "trace", **rec}, sort_keys=True) + "\n")
            for rec in result.search.log:
                fh.write(json.dumps({"kind": "search", **rec}, sort_keys=True) + "\n")
    if cfg.fmt == "text":
        _emit(cfg, report.to_text())
    else:
        _emit(cfg, _dump(doc))
    return code


def cmd_verify(cfg: RunConfig) -> int:
    points = parse_points(read_text(cfg.input))
    planes = parse_planes(read_text(cfg.extra["planes"]))
    report = verify(points, *planes)
    if cfg.fmt == "text":
        _emit(cfg, "valid\n" if report.valid else "invalid\n")
    else:
        _emit(cfg, _dump(report.to_json()))
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_generate(cfg: RunConfig) -> int:
    pts = generate(cfg.extra["kind"], cfg.extra["size"], cfg.seed)
    if cfg.fmt == "json":
        _emit(cfg, _dump([[fraction_str(c) for c in p] for p in pts]))
    else:
        _emit(cfg, format_points(pts))
    return EXIT_OK


def cmd_trace(cfg: RunConfig) -> int:
    points = parse_points(read_text(cfg.input))
    inst = prepare(points, cfg.direction, cfg.seed, cfg.perturb)
    curve = trace(inst.colored)
    doc = curve.to_json(include_timings=cfg.extra.get("timings", False))
    doc["padding"] = inst.padding.to_json()
    _emit(cfg, _dump(doc))
    return EXIT_OK


STATS_FIELDS = ["kind", "n", "seed", "k", "m", "area", "rounds", "round_bound", "within_bound", "valid"]
TIME_FIELDS = ["trace_seconds", "search_seconds", "total_seconds"]


def stats_rows(kind: str, sizes: Sequence[int], seeds: Sequence[int], timings: bool = True) -> list[dict]:
    rows = []
    for n in sizes:
        for seed in seeds:
            pts = generate(kind, n, seed)
            t0 = time.perf_counter()
            res = eight_partition(pts, default_direction(kind), seed=seed)
            total = time.perf_counter() - t0
            row = {
                "kind": kind,
                "n": n,
                "seed": seed,
                "k": res.instance.k if res.instance else 0,
                "m": res.curve.m if res.curve else 0,
                "area": res.search.area if res.search else 0,
                "rounds": res.search.rounds if res.search else 0,
                "round_bound": res.search.bound if res.search else 0,
                "within_bound": res.search is None or res.search.rounds <= res.search.bound,
                "valid": res.report.valid,
            }
            if timings:
                row["trace_seconds"] = f"{res.timings.get('trace', 0.0):.6f}"
                row["search_seconds"] = f"{res.timings.get('search', 0.0):.6f}"
                row["total_seconds"] = f"{total:.6f}"
            rows.append(row)
    return rows


def fit_exponent(rows: Sequence[dict]) -> float | None:
    """Least-squares slope of log m against log n."""
    pts = [(math.log(r["n"]), math.log(r["m"])) for r in rows if r["m"] > 0]
    if len({x for x, _ in pts}) < 2:
        return None
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    sxy = sum((x - mx) * (y - my) for x, y in pts)
    return sxy / sxx


def cmd_stats(cfg: RunConfig) -> int:
    kind = cfg.extra["kind"]
    sizes = cfg.extra["sizes"]
    seeds = range(cfg.seed, cfg.seed + cfg.extra["seeds"])
    timings = cfg.extra.get("timings", True)
    rows = stats_rows(kind, sizes, seeds, timings)
    exponent = fit_exponent(rows)
    if cfg.fmt == "json":
        _emit(cfg, _dump({"rows": rows, "fitted_exponent_m_vs_n": exponent}))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=STATS_FIELDS + (TIME_FIELDS if timings else []), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _emit(cfg, buf.getvalue())
        if exponent is not None:
            print(f"fitted exponent of m versus n: {exponent:.3f}", file=sys.stderr)
    ok = all(r["within_bound"] and r["valid"] for r in rows)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_plane4(cfg: RunConfig) -> int:
    points = parse_weighted_points(read_text(cfg.input))
    if not points:
        raise ParseError("no points")
    res = four_partition_with_bisector(points, cfg.extra["bisector"])
    doc = {
        "alpha": res.alpha,
        "line1": res.line1.to_strings(),
        "line2": res.line2.to_strings(),
        "quadrant_weights": {k: fraction_str(v) for k, v in res.quadrant_weights.items()},
        "total_weight": fraction_str(res.total_weight),
        "valid": res.valid,
    }
    if cfg.fmt == "text":
        _emit(cfg, " ".join(doc["line1"]) + "\n" + " ".join(doc["line2"]) + "\n")
    else:
        _emit(cfg, _dump(doc))
    return EXIT_OK


COMMANDS = {
    "partition": cmd_partition,
    "verify": cmd_verify,
    "generate": cmd_generate,
    "trace": cmd_trace,
    "stats": cmd_stats,
    "plane4": cmd_plane4,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eightpart", description="Eight-partitions of 3D point sets with a prescribed first normal.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_choices=("json", "text")):
        p.add_argument("-o", "--output", help="write here instead of stdout")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for padding and generators (default {DEFAULT_SEED})")
        p.add_argument("--format", dest="fmt", choices=fmt_choices, default=fmt_choices[0])

    def geometry(p):
        p.add_argument("--direction", default="0,0,1", help='normal of the first plane, "a,b,c"')
        p.add_argument("--perturb", action="store_true", help="jitter degenerate input instead of failing")

    p = sub.add_parser("partition", help="compute an eight-partition")
    p.add_argument("input")
    common(p)
    geometry(p)
    p.add_argument("--oracle-check", action="store_true", help=f"cross-check with brute force (n <= {ORACLE_CAP})")
    p.add_argument("--emit-trace-log", metavar="PATH", help="write trace and search records as JSON lines")

    p = sub.add_parser("verify", help="check three planes against a point set")
    p.add_argument("input")
    p.add_argument("planes", help="three lines of four rationals each")
    common(p)

    p = sub.add_parser("generate", help="write a seeded instance")
    p.add_argument("kind", choices=["random", "adversarial"])
    p.add_argument("size", type=int)
    common(p, ("text", "json"))

    p = sub.add_parser("trace", help="trace the curve L of an instance")
    p.add_argument("input")
    common(p, ("json",))
    geometry(p)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")

    p = sub.add_parser("stats", help="complexity measurements over generated instances")
    p.add_argument("--sizes", default="15,23,31,63,127,247")
    p.add_argument("--kind", choices=["random", "adversarial"], default="random")
    p.add_argument("--seeds", type=int, default=1, help="instances per size, starting at --seed")
    p.add_argument("--no-timings", action="store_true", help="omit timing columns, for reproducible output")
    common(p, ("csv", "json"))

    p = sub.add_parser("plane4", help="planar four-partition with a prescribed bisector")
    p.add_argument("input", help='lines "x y [weight]"')
    p.add_argument("--bisector", default="0,1", help='bisecting direction "a,b"')
    common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        output=args.output,
        seed=args.seed,
        fmt=args.fmt,
        perturb=getattr(args, "perturb", False),
        oracle_check=getattr(args, "oracle_check", False),
        emit_trace_log=getattr(args, "emit_trace_log", None),
    )
    if hasattr(args, "direction"):
        cfg.direction = parse_vector(args.direction, 3)
    if args.command == "verify":
        cfg.extra["planes"] = args.planes
    elif args.command == "generate":
        if args.size < 1:
            raise ParseError("size must be positive")
        cfg.extra.update(kind=args.kind, size=args.size)
    elif args.command == "trace":
        cfg.extra["timings"] = args.timings
    elif args.command == "stats":
        try:
            sizes = [int(t) for t in args.sizes.split(",") if t.strip()]
        except ValueError:
            raise ParseError(f"bad --sizes {args.sizes!r}") from None
        if not sizes or min(sizes) < 1 or args.seeds < 1:
            raise ParseError("sizes and seed counts must be positive")
        cfg.extra.update(kind=args.kind, sizes=sizes, seeds=args.seeds, timings=not args.no_timings)
    elif args.command == "plane4":
        cfg.extra["bisector"] = parse_vector(args.bisector, 2)
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateInputError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (InternalError, GridSearchError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
