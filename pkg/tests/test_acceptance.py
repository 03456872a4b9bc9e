"""End-to-end acceptance checks; each test prints one PASS/FAIL line in the terminal summary."""

import csv
import itertools
import subprocess
import sys
import time

import numpy as np

from josabpp.bench import run_selection_study, warm_up
from josabpp.exact import exact_solve
from josabpp.generator import GenParams, generate
from josabpp.geometry import distance
from josabpp.greedy import SolverConfig, solve
from josabpp.model import Location, ZoneSpec
from josabpp.validator import validate

from builders import BASE, costed, fixture_instance, mutated
from oracles import BfsMetric, bfs_distances, rescore_best_order, tiny_instances

DGA = SolverConfig("dga")


def small(seed):
    return generate(GenParams.preset("small", seed=seed, name=f"small-{seed}"))


def wall(fn, repeats=1):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_c01_feasibility_on_50_small_instances():
    failures = []
    for seed in range(50):
        inst = small(seed)
        for config in (DGA, SolverConfig("rdga", seed=seed)):
            report = validate(inst, solve(inst, config))
            if not report.feasible or report.violations:
                failures.append((seed, config.algorithm.value, report.summary()))
    assert failures == []


def test_c02_exact_oracle_and_rescoring_on_200_tiny_instances():
    checked = 0
    for k, inst in enumerate(tiny_instances(200)):
        ex = exact_solve(inst)
        assert validate(inst, ex).feasible
        metric = BfsMetric(inst)

        def observe(choice):
            expected = rescore_best_order(inst, choice.pool, choice.inventory, choice.batch_selected, metric)
            assert (choice.order, choice.items, choice.distance) == expected

        dga = solve(inst, DGA, observer=observe)
        rdga = solve(inst, SolverConfig("rdga", seed=k))
        assert ex.objective <= dga.objective, inst.name
        assert ex.objective <= rdga.objective, inst.name
        checked += 1
    assert checked == 200


def test_c03_rdga_about_twice_dga():
    ratios, wins = [], 0
    for seed in range(5):
        inst = small(seed)
        d = solve(inst, DGA).objective
        r = solve(inst, SolverConfig("rdga", seed=0)).objective
        ratios.append(r / d)
        wins += d <= r
    print(f"RDGA/DGA objective ratios: {[round(x, 2) for x in ratios]}")
    assert 1.3 <= np.mean(ratios) <= 3.0
    assert wins >= 4


def test_c04_dga_much_slower_than_rdga_on_medium():
    inst = generate(GenParams.preset("medium", seed=0, name="medium-0"))
    warm_up()
    t_dga = wall(lambda: solve(inst, DGA))
    t_rdga = wall(lambda: solve(inst, SolverConfig("rdga", seed=0)), repeats=3)
    print(f"medium: DGA {t_dga:.2f}s, RDGA {t_rdga:.3f}s, ratio {t_dga / t_rdga:.1f}")
    assert t_dga / t_rdga >= 20


def test_c05_selection_study_band():
    diffs = [run_selection_study(small(seed), repeats=5, seed=0).difference_pct for seed in range(5)]
    print(f"selection differences (%): {[round(d, 1) for d in diffs]}")
    assert all(d < 0 for d in diffs)
    assert -50 <= np.mean(diffs) <= -20


def test_c06_generator_fidelity():
    inst = small(0)
    assert (inst.n_items, len(inst.orders), len(inst.zones)) == (10_000, 500, 10)
    total = inst.total_order_articles
    assert abs(total - 1322) <= 0.10 * 1322
    assert inst.item_goal == int(np.floor(0.20 * total + 0.5))


def test_c07_distance_equals_bfs_on_20_zones():
    rng = np.random.default_rng(7)
    for _ in range(20):
        aisles, racks = int(rng.integers(1, 13)), int(rng.integers(3, 13))
        mid = rng.choice(np.arange(1, racks), size=2, replace=False)
        cross = tuple(sorted([0, *map(int, mid)]))
        zone = ZoneSpec(0, aisles, racks, cross)
        for sa, sr in itertools.product(range(aisles), range(racks)):
            for (ta, tr), d in bfs_distances(aisles, racks, cross, (sa, sr)).items():
                assert distance(zone, Location(0, sa, sr), Location(0, ta, tr)) == d


def _cli(*args):
    res = subprocess.run([sys.executable, "-m", "josabpp.cli", *args], capture_output=True)
    assert res.returncode == 0, res.stderr
    return res.stdout


def test_c08_cli_runs_are_byte_identical(tmp_path):
    for run in ("a", "b"):
        _cli("generate", "--preset", "small", "--seed", "3", "--count", "2", "--out", str(tmp_path / run))
    for name in ("small-0.json", "small-1.json", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    inst = str(tmp_path / "a" / "small-0.json")
    for algorithm in ("dga", "rdga"):
        outs = [_cli("solve", "--algorithm", algorithm, "--instance", inst, "--seed", "11") for _ in range(2)]
        assert outs[0] == outs[1]

    tables = []
    for run in ("a", "b"):
        out = tmp_path / f"bench-{run}.csv"
        _cli("bench", "--instances", str(tmp_path / "a"), "--seed", "4", "--out", str(out))
        rows = list(csv.DictReader(out.open()))
        tables.append([{k: v for k, v in r.items() if k != "runtime_s"} for r in rows])
    assert tables[0] == tables[1] and len(tables[0]) == 4


def test_c09_validator_kills_every_mutation():
    inst = fixture_instance()
    assert validate(inst, costed(inst, BASE)).feasible
    misses = []
    for constraint in range(2, 9):
        report = validate(inst, mutated(inst, constraint))
        if report.feasible or report.constraints() != {constraint}:
            misses.append((constraint, report.summary()))
    assert misses == []


def test_c10_dga_time_grows_superlinearly():
    warm_up()
    times = []
    for n in (1_000, 3_000, 10_000):
        inst = generate(GenParams(items=n, orders=n // 20, zones=n // 1000, seed=1, name=f"ladder-{n}"))
        times.append(wall(lambda: solve(inst, DGA), repeats=3))
    print(f"DGA ladder times: {[f'{t:.4f}' for t in times]}")
    assert times[0] < times[1] < times[2]
    assert times[2] / times[0] > 10
