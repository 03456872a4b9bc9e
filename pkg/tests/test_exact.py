import itertools
import random

import pytest

from josabpp.exact import ExactLimits, LimitExceeded, _Oracle, exact_solve
from josabpp.greedy import SolverConfig, solve
from josabpp.validator import validate

from builders import build_instance
from oracles import BfsMetric, random_feasible_solution, tiny_instances


def test_single_order_micro_instance():
    inst = build_instance([(0, 0, 1, 0)], [[0]], [1], item_goal=1, Q=1)
    sol = exact_solve(inst)
    assert sol.objective == 2
    assert sol.optimal
    assert [b.orders for b in sol.batches] == [(0,)]


def test_goal_forcing_all_orders():
    inst = build_instance([(0, 0, 1, 1), (1, 0, 2, 4), (2, 0, 3, 2)], [[0], [1], [2]], [1, 1, 1],
                          item_goal=3, Q=2, aisles=5, racks=6)
    sol = exact_solve(inst)
    assert sorted(sol.order_ids) == [0, 1, 2]
    assert validate(inst, sol).feasible


def test_picks_the_cheap_order_when_goal_allows():
    inst = build_instance([(0, 0, 0, 9), (1, 0, 0, 1)], [[0], [1]], [1, 1], item_goal=1, racks=12)
    assert exact_solve(inst).order_ids == [1]


def test_refuses_oversized_instances(mini_instance):
    with pytest.raises(LimitExceeded, match="items"):
        exact_solve(mini_instance)
    inst = build_instance([(0, 0, 1, 1)] * 3, [[0, 0, 0]], [1])
    with pytest.raises(LimitExceeded):
        exact_solve(inst, ExactLimits(max_total_order_articles=2))


def test_optimal_routes_may_beat_sorted_routes():
    # sorted by aisle the tour zig-zags; the oracle may reorder
    inst = build_instance([(0, 0, 1, 8), (0, 0, 2, 1), (0, 0, 3, 8)], [[0, 0, 0]], [1],
                          item_goal=3, aisles=4, racks=10, cross=(0, 4, 9))
    assert exact_solve(inst).objective <= solve(inst).objective


def test_tour_matches_permutation_brute_force():
    for inst in itertools.islice(tiny_instances(30, start=500), 30):
        oracle = _Oracle(inst)
        metric = BfsMetric(inst)
        for zone, mask in oracle.zone_mask.items():
            items = [i for i in range(inst.n_items) if mask >> i & 1][:6]
            sub = sum(1 << i for i in items)
            cost, route = oracle.tour(sub)
            brute = min(metric.tour(zone, perm) for perm in itertools.permutations(items))
            assert cost == brute
            assert metric.tour(zone, route) == cost


def test_exact_lower_bounds_greedy():
    for inst in tiny_instances(25, start=1000):
        ex = exact_solve(inst)
        assert validate(inst, ex).feasible
        dga = solve(inst)
        rdga = [solve(inst, SolverConfig("rdga", seed)).objective for seed in range(100)]
        assert ex.objective <= dga.objective
        assert ex.objective <= min(rdga)
        assert dga.objective <= max(rdga)


@pytest.mark.parametrize("start", [2000, 3000, 4000])
def test_random_feasible_solutions_never_beat_exact(start):
    inst = next(tiny_instances(1, start=start))
    best = exact_solve(inst).objective
    rng = random.Random(start)
    metric = BfsMetric(inst)
    for _ in range(10_000):
        sample = random_feasible_solution(inst, rng, metric)
        assert sample.objective >= best


def test_sampler_produces_feasible_solutions():
    rng = random.Random(0)
    for inst in tiny_instances(10, start=5000):
        metric = BfsMetric(inst)
        for _ in range(20):
            report = validate(inst, random_feasible_solution(inst, rng, metric))
            assert report.feasible, report.summary()
