"""Independent reference implementations used as test oracles.

Nothing here may import the solver, geometry or picklisting code paths it
checks; only the plain data model.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from fractions import Fraction

import numpy as np

from josabpp.generator import GenParams, generate
from josabpp.model import Batch, Instance, Picklist, Solution


def bfs_distances(aisles: int, racks: int, cross, source: tuple[int, int]) -> dict[tuple[int, int], int]:
    """Shortest paths on the explicit movement graph of one zone.

    Nodes are (aisle, rack). Moving along an aisle (rack +- 1) is always
    allowed; moving to a neighbouring aisle is only allowed at a cross-aisle rack.
    """
    cross = set(cross)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        a, r = queue.popleft()
        steps = [(a, r - 1), (a, r + 1)]
        if r in cross:
            steps += [(a - 1, r), (a + 1, r)]
        for na, nr in steps:
            if 0 <= na < aisles and 0 <= nr < racks and (na, nr) not in dist:
                dist[(na, nr)] = dist[(a, r)] + 1
                queue.append((na, nr))
    return dist


class BfsMetric:
    """Memoized all-pairs BFS distance over the zones of an instance."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self._tables: dict = {}

    def __call__(self, zone: int, x: tuple[int, int], y: tuple[int, int]) -> int:
        key = (zone, x)
        if key not in self._tables:
            z = self.instance.zones[zone]
            self._tables[key] = bfs_distances(z.aisles, z.racks, z.cross_aisle_racks, x)
        return self._tables[key][y]

    def item(self, i: int) -> tuple[int, tuple[int, int]]:
        inst = self.instance
        return int(inst.item_zone[i]), (int(inst.item_aisle[i]), int(inst.item_rack[i]))

    def tour(self, zone: int, items) -> int:
        stops = [(0, 0)] + [self.item(i)[1] for i in items] + [(0, 0)]
        return sum(self(zone, a, b) for a, b in zip(stops, stops[1:]))


def rescore_best_order(instance: Instance, pool, inventory, selected, metric: BfsMetric):
    """Literal re-evaluation of the greedy order choice from scratch.

    For every order and every article occurrence, take the free item of that
    article closest to any reference location (items of the order so far,
    items of the open batch, every depot); cross-zone pairs count as infinite.
    Returns (order id, items, total distance) of the order with the smallest
    mean distance, lowest id on ties.
    """
    inventory = sorted(inventory)
    by_article: dict[int, list[int]] = {}
    for i in inventory:
        by_article.setdefault(int(instance.item_article[i]), []).append(i)
    depots = [(z.id, (0, 0)) for z in instance.zones]
    best = None
    for oid in sorted(pool):
        order = instance.order_by_id[oid]
        d_total, chosen = 0, []
        for a in order.articles:
            refs = [metric.item(j) for j in chosen + list(selected)] + depots
            candidates = []
            for i in by_article.get(a, []):
                if i in chosen:
                    continue
                zi, xi = metric.item(i)
                dmin = min(
                    (metric(zi, xi, xj) for zj, xj in refs if zj == zi),
                    default=float("inf"),
                )
                candidates.append((dmin, i))
            d, i = min(candidates)
            d_total += d
            chosen.append(i)
        score = Fraction(d_total, len(chosen))
        if best is None or score < best[0]:
            best = (score, oid, chosen, d_total)
    return best[1], best[2], best[3]


def random_feasible_solution(instance: Instance, rng: random.Random, metric: BfsMetric) -> Solution:
    """Sample a feasible solution uniformly-ish: orders, batches, items, picklists, routes."""
    orders = list(instance.orders)
    rng.shuffle(orders)
    IG = instance.item_goal
    total = sum(len(o.articles) for o in orders)
    chosen, count = [], 0
    for o in orders:
        if count >= IG and total >= IG and rng.random() < 0.5:
            break
        chosen.append(o)
        count += len(o.articles)
    Q = instance.orders_per_batch
    rng.shuffle(chosen)
    blocks, k = [], 0
    while k < len(chosen):
        size = rng.randint(1, Q)
        blocks.append(chosen[k:k + size])
        k += size

    free: dict[int, list[int]] = {}
    for i in range(instance.n_items):
        free.setdefault(int(instance.item_article[i]), []).append(i)
    batches, objective, n_items = [], 0, 0
    V = instance.picklist_volume
    for block in blocks:
        items = []
        for o in block:
            for a in o.articles:
                pick = rng.choice(free[a])
                free[a].remove(pick)
                items.append(pick)
        by_zone: dict[int, list[int]] = {}
        for i in items:
            by_zone.setdefault(int(instance.item_zone[i]), []).append(i)
        picklists = []
        for zone in sorted(by_zone):
            zitems = by_zone[zone]
            rng.shuffle(zitems)
            current, load = [], 0.0
            for i in zitems:
                vol = instance.item_volume[i]
                if current and (load + vol > V or rng.random() < 0.3):
                    picklists.append(Picklist(zone, tuple(current)))
                    current, load = [], 0.0
                current.append(i)
                load += vol
            picklists.append(Picklist(zone, tuple(current)))
        objective += sum(metric.tour(p.zone, p.items) for p in picklists)
        n_items += len(items)
        batches.append(Batch(tuple(o.id for o in block), tuple(picklists)))
    return Solution(
        batches=tuple(batches),
        objective=float(objective),
        pcpi=objective / n_items if n_items else 0.0,
        goal_met=n_items >= IG,
    )


def tiny_instance(seed: int, max_articles: int = 10, max_items: int = 14) -> Instance | None:
    """A random toy instance within the exact oracle's limits, or None if the draw overshoots."""
    rng = np.random.default_rng(seed)
    params = GenParams(
        items=int(rng.integers(4, max_items + 1)),
        orders=int(rng.integers(1, 6)),
        zones=int(rng.integers(1, 3)),
        racks=int(rng.integers(3, 8)),
        aisles=int(rng.integers(1, 6)),
        mean_order_size=1.8,
        max_order_size=4,
        articles=int(rng.integers(1, 5)),
        picklist_volume=float(rng.integers(10, 25)),
        orders_per_batch=int(rng.integers(1, 4)),
        ig_ratio=float(rng.uniform(0.2, 1.0)),
        seed=seed,
        name=f"tiny-{seed}",
    )
    try:
        instance = generate(params)
    except ValueError:
        return None
    if instance.total_order_articles > max_articles:
        return None
    return instance


def tiny_instances(count: int, start: int = 0):
    seed = start
    found = 0
    while found < count:
        inst = tiny_instance(seed)
        seed += 1
        if inst is not None:
            found += 1
            yield inst


def article_multiset(instance: Instance, batch: Batch) -> tuple[Counter, Counter]:
    wanted = Counter(a for o in batch.orders for a in instance.order_by_id[o].articles)
    got = Counter(int(instance.item_article[i]) for p in batch.picklists for i in p.items)
    return wanted, got
