"""Command line entry point: generate, solve, validate, exact, bench, experiment."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .exact import ExactLimits, LimitExceeded, exact_solve
from .generator import PRESETS, GenerationError, GenParams, generate, manifest_entry
from .greedy import AllocationError, SolverConfig, solve
from .model import (
    FORMAT_VERSION,
    InstanceFormatError,
    InstanceValidationError,
    dumps_canonical,
    read_instance,
    read_solution,
    save_solution,
    write_instance,
)
from .validator import validate

SCHEMAS = f"""\
schemas (format_version {FORMAT_VERSION}; loaders reject other major versions):
  instance: {{name, params: {{item_goal, picklist_volume, orders_per_batch}},
             zones: [{{id, aisles, racks, cross_aisle_racks: [r0, r1, r2]}}],
             articles: [{{id, volume}}], items: [{{id, article, zone, aisle, rack}}],
             orders: [{{id, articles: [...]}}]}}   depot = (aisle 0, rack 0) of each zone
  solution: {{instance, algorithm, seed, goal_met, objective, pcpi, selected_items,
             batches: [{{orders: [...], picklists: [{{zone, items: [...]}}]}}]}}
"""


class CliError(Exception):
    def __init__(self, kind: str, message: str, problems=None):
        super().__init__(message)
        self.kind = kind
        self.problems = problems or []


def _write_bytes(data: bytes, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(data.decode("utf-8"))
    else:
        Path(out).write_bytes(data)


def _instance_files(directory: str) -> list[Path]:
    files = sorted(p for p in Path(directory).glob("*.json") if p.name != "manifest.json")
    if not files:
        raise CliError("usage", f"no instance files found in {directory}")
    return files


def cmd_generate(args) -> int:
    overrides = dict(
        items=args.items, orders=args.orders, zones=args.zones, racks=args.racks, aisles=args.aisles,
        mean_order_size=args.mean_order_size, max_order_size=args.max_order_size, ig_ratio=args.ig_ratio,
        picklist_volume=args.picklist_volume, orders_per_batch=args.orders_per_batch, articles=args.articles,
    )
    if args.volume_range:
        overrides["volume_range"] = tuple(args.volume_range)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for k in range(args.count):
        name = f"{args.preset}-{k}"
        params = GenParams.preset(args.preset, seed=args.seed + k, name=name, **overrides)
        instance = generate(params)
        write_instance(instance, out / f"{name}.json")
        manifest.append(manifest_entry(instance, params))
        print(f"{name}: {instance.n_items} items, {len(instance.orders)} orders, "
              f"{instance.total_order_articles} order articles, IG {instance.item_goal}", file=sys.stderr)
    (out / "manifest.json").write_text(dumps_canonical({"format_version": FORMAT_VERSION, "instances": manifest}))
    return 0


def cmd_solve(args) -> int:
    instance = read_instance(args.instance)
    solution = solve(instance, SolverConfig(args.algorithm, args.seed))
    _write_bytes(save_solution(solution), args.out)
    return 0


def cmd_validate(args) -> int:
    instance = read_instance(args.instance)
    solution = read_solution(args.solution)
    report = validate(instance, solution)
    sys.stdout.write(dumps_canonical(report.to_dict()))
    if not report.feasible:
        print(report.summary(), file=sys.stderr)
    return 0 if report.feasible else 1


def cmd_exact(args) -> int:
    instance = read_instance(args.instance)
    limits = ExactLimits(max_total_order_articles=args.max_order_articles, max_items=args.max_items)
    solution = exact_solve(instance, limits)
    _write_bytes(save_solution(solution), args.out)
    return 0


def cmd_bench(args) -> int:
    configs = [SolverConfig(a.strip(), args.seed) for a in args.algorithms.split(",") if a.strip()]
    instances = [read_instance(p) for p in _instance_files(args.instances)]
    rows = bench.run_benchmark(instances, configs, jobs=args.jobs)
    with open(args.out, "w", encoding="utf-8", newline="") as fp:
        bench.write_csv(rows, fp, bench.BenchRow)
    Path(args.out + ".meta.json").write_text(dumps_canonical(bench.machine_tags()))
    print(bench.format_bench_table(rows))
    return 0


def cmd_selection(args) -> int:
    rows = [bench.run_selection_study(read_instance(p), repeats=args.repeats, seed=args.seed) for p in args.instance]
    with open(args.out, "w", encoding="utf-8", newline="") as fp:
        bench.write_csv(rows, fp, bench.SelectionRow)
    print(bench.format_selection_table(rows))
    return 0


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="josabpp",
        description="Joint order selection, allocation, batching and picking: generator, solvers, validator.",
        epilog=SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, func):
        p = sub.add_parser(name, help=help_, description=help_, epilog=SCHEMAS,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    g = add("generate", "generate benchmark instances and a manifest", cmd_generate)
    g.add_argument("--preset", choices=sorted(PRESETS), required=True, help="size category")
    g.add_argument("--seed", type=_seed, default=0, help="seed of the first instance; instance k uses seed + k")
    g.add_argument("--count", type=int, default=1, help="number of instances (default 1)")
    g.add_argument("--out", default=".", help="output directory (default .)")
    g.add_argument("--orders-per-batch", type=int, help="Q, max orders per batch (default 46)")
    g.add_argument("--picklist-volume", type=float, help="V, max volume per picklist (default 60)")
    g.add_argument("--ig-ratio", type=float, help="item goal as a share of total order articles (default 0.20)")
    g.add_argument("--items", type=int, help="override the preset's item count")
    g.add_argument("--orders", type=int, help="override the preset's order count")
    g.add_argument("--zones", type=int, help="override the preset's zone count")
    g.add_argument("--racks", type=int, help="racks per zone (default 100)")
    g.add_argument("--aisles", type=int, help="aisles per zone (default 100)")
    g.add_argument("--articles", type=int, help="article count (default items / 20)")
    g.add_argument("--mean-order-size", type=float, help="mean articles per order (default 2.64)")
    g.add_argument("--max-order-size", type=int, help="cap on articles per order (default 20)")
    g.add_argument("--volume-range", type=int, nargs=2, metavar=("MIN", "MAX"),
                   help="integer article volume range (default 1 10)")

    s = add("solve", "run DGA or RDGA on an instance", cmd_solve)
    s.add_argument("--algorithm", choices=["dga", "rdga"], required=True)
    s.add_argument("--instance", required=True, help="instance JSON file")
    s.add_argument("--seed", type=_seed, default=0, help="RNG seed (used by rdga, recorded always)")
    s.add_argument("--out", default="-", help="solution JSON file (default stdout)")

    v = add("validate", "check a solution; exit 0 iff feasible", cmd_validate)
    v.add_argument("--instance", required=True, help="instance JSON file")
    v.add_argument("--solution", required=True, help="solution JSON file")

    e = add("exact", "optimal solution of a tiny instance by enumeration", cmd_exact)
    e.add_argument("--instance", required=True, help="instance JSON file")
    e.add_argument("--max-items", type=int, default=14, help="refuse instances with more items (default 14)")
    e.add_argument("--max-order-articles", type=int, default=10,
                   help="refuse instances with more order articles (default 10)")
    e.add_argument("--out", default="-", help="solution JSON file (default stdout)")

    b = add("bench", "solve every instance in a directory and write a CSV", cmd_bench)
    b.add_argument("--instances", required=True, help="directory of instance JSON files")
    b.add_argument("--algorithms", default="dga,rdga", help="comma separated list (default dga,rdga)")
    b.add_argument("--seed", type=_seed, default=0, help="RNG seed passed to every run")
    b.add_argument("--out", required=True, help="CSV output; machine tags go to <out>.meta.json")
    b.add_argument("--jobs", type=int, default=1, help="worker processes for validation (timing stays serial)")

    x = add("experiment", "reproduction experiments", lambda args: 2)
    xs = x.add_subparsers(dest="experiment", required=True)
    sel = xs.add_parser("selection", help="order-selection impact study (full vs trimmed order pools)",
                        description="DGA on the full pool vs mean over trimmed pools; trimmed pool k uses seed + k")
    sel.set_defaults(func=cmd_selection)
    sel.add_argument("--instance", required=True, action="append", help="instance JSON file (repeatable)")
    sel.add_argument("--repeats", type=int, default=5, help="trimmed pools per instance (default 5)")
    sel.add_argument("--seed", type=_seed, default=0, help="master seed")
    sel.add_argument("--out", required=True, help="CSV output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, InstanceFormatError, InstanceValidationError, GenerationError, LimitExceeded,
            AllocationError, bench.BenchmarkError, OSError, ValueError) as exc:
        kind = getattr(exc, "kind", type(exc).__name__)
        problems = getattr(exc, "problems", [])
        err = {"error": kind, "message": str(exc).splitlines()[0] if str(exc) else kind}
        if problems:
            err["problems"] = problems
        print(json.dumps(err), file=sys.stderr)
        return 2 if kind == "usage" else 1


if __name__ == "__main__":
    sys.exit(main())
