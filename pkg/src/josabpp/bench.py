"""Benchmark campaigns: DGA vs RDGA tables and the order-selection study."""

from __future__ import annotations

import csv
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import IO, Iterable, Sequence

from .generator import trim_order_pool
from .greedy import SolverConfig, solve
from .model import Instance, Solution
from .validator import validate


class BenchmarkError(RuntimeError):
    """A solver produced an infeasible solution during a campaign."""


@dataclass(frozen=True)
class BenchRow:
    instance: str
    algorithm: str
    seed: int
    runtime_s: float
    objective: float
    selected_items: int
    picklists: int
    batches: int
    pcpi: float
    goal_met: bool


@dataclass(frozen=True)
class SelectionRow:
    instance: str
    pcpi_modified: float
    pcpi_original: float
    difference_pct: float


def machine_tags() -> dict:
    return {
        "machine": platform.machine(),
        "processor": platform.processor(),
        "system": platform.system(),
        "release": platform.release(),
        "python": platform.python_version(),
    }


def _check(instance: Instance, solution: Solution, config: SolverConfig) -> None:
    report = validate(instance, solution)
    if not report.feasible:
        raise BenchmarkError(
            f"{config.algorithm.value} (seed {config.seed}) produced an infeasible solution "
            f"for {instance.name}:\n{report.summary()}"
        )


def _validate_job(args) -> tuple[bool, str]:
    instance, solution = args
    report = validate(instance, solution)
    return report.feasible, report.summary()


def warm_up() -> None:
    """Compile the solver kernels so the first timed run is not charged for it."""
    from .generator import GenParams, generate

    tiny = generate(GenParams(items=40, orders=4, zones=2, racks=5, aisles=3, articles=4, seed=0))
    for algorithm in ("dga", "rdga"):
        solve(tiny, SolverConfig(algorithm))


def run_benchmark(instances: Iterable[Instance], configs: Sequence[SolverConfig], jobs: int = 1) -> list[BenchRow]:
    """Solve every (instance, config) pair once, serially, and validate each solution.

    Rows come out in input order. With jobs > 1 only the validation runs in
    worker processes; timed solver runs always stay on this process.
    """
    warm_up()
    rows: list[BenchRow] = []
    solved: list[tuple[Instance, Solution, SolverConfig]] = []
    for instance in instances:
        for config in configs:
            start = time.perf_counter()
            solution = solve(instance, config)
            elapsed = time.perf_counter() - start
            solved.append((instance, solution, config))
            rows.append(BenchRow(
                instance=instance.name,
                algorithm=config.algorithm.value,
                seed=config.seed,
                runtime_s=elapsed,
                objective=solution.objective,
                selected_items=solution.selected_items,
                picklists=solution.n_picklists,
                batches=len(solution.batches),
                pcpi=solution.pcpi,
                goal_met=solution.goal_met,
            ))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_validate_job, [(inst, sol) for inst, sol, _ in solved]))
        for (instance, _, config), (ok, summary) in zip(solved, results):
            if not ok:
                raise BenchmarkError(
                    f"{config.algorithm.value} (seed {config.seed}) produced an infeasible solution "
                    f"for {instance.name}:\n{summary}"
                )
    else:
        for instance, solution, config in solved:
            _check(instance, solution, config)
    return rows


def run_selection_study(instance: Instance, repeats: int = 5, seed: int = 0) -> SelectionRow:
    """Compare DGA's pcpi on the full pool with its mean pcpi on randomly trimmed pools.

    Trimmed pool k uses seed + k. The difference is expressed relative to
    the trimmed (modified) pcpi, so a negative value means order selection helps.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    config = SolverConfig("dga")
    original = solve(instance, config)
    _check(instance, original, config)
    pcpis = []
    for k in range(repeats):
        trimmed = trim_order_pool(instance, seed + k)
        solution = solve(trimmed, config)
        _check(trimmed, solution, config)
        pcpis.append(solution.pcpi)
    modified = sum(pcpis) / len(pcpis)
    return SelectionRow(
        instance=instance.name,
        pcpi_modified=modified,
        pcpi_original=original.pcpi,
        difference_pct=(original.pcpi - modified) / modified * 100.0,
    )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Sequence[BenchRow] | Sequence[SelectionRow], fp: IO[str], row_type=None) -> None:
    row_type = row_type or (type(rows[0]) if rows else BenchRow)
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow([f.name for f in fields(row_type)])
    for row in rows:
        writer.writerow([_fmt(v) for v in astuple(row)])


def format_bench_table(rows: Sequence[BenchRow]) -> str:
    """Aligned text table in the layout of the DGA/RDGA result tables."""
    header = ("Instance", "Algorithm", "Runtime (s)", "Objective", "Selected Items", "Picklists", "Batches", "pcpi")
    body = [
        (r.instance, r.algorithm.upper(), f"{r.runtime_s:.3f}", f"{r.objective:,.0f}", f"{r.selected_items:,}",
         f"{r.picklists:,}", str(r.batches), f"{r.pcpi:.2f}")
        for r in rows
    ]
    return _align(header, body)


def format_selection_table(rows: Sequence[SelectionRow]) -> str:
    header = ("Instance", "pcpi modified", "pcpi original", "Difference")
    body = [
        (r.instance, f"{r.pcpi_modified:.2f}", f"{r.pcpi_original:.2f}", f"{r.difference_pct:.0f}%")
        for r in rows
    ]
    return _align(header, body)


def _align(header, body) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *body)]
    lines = [" | ".join(h.ljust(w) if k == 0 else h.rjust(w) for k, (h, w) in enumerate(zip(header, widths)))]
    lines.append("-+-".join("-" * w for w in widths))
    for row in body:
        lines.append(" | ".join(c.ljust(w) if k == 0 else c.rjust(w) for k, (c, w) in enumerate(zip(row, widths))))
    return "\n".join(lines)
