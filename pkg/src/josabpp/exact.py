"""Exhaustive optimal solver for toy instances.

Enumerates every admissible order subset, every split of it into batches of
at most Q orders, every item allocation, every volume-feasible split of a
batch's items into single-zone picklists, and the best visiting order of
each picklist. Only meant for instances with a handful of items; it is the
ground truth the heuristics are checked against.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .geometry import distance
from .model import Batch, Instance, Picklist, Solution


@dataclass(frozen=True)
class ExactLimits:
    max_total_order_articles: int = 10
    max_items: int = 14


class LimitExceeded(ValueError):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Oracle:
    def __init__(self, instance: Instance):
        self.instance = instance
        self.n = instance.n_items
        self.loc = [instance.location(i) for i in range(self.n)]
        self.vol = instance.item_volume.tolist()
        self.zone_mask: dict[int, int] = {}
        for i, loc in enumerate(self.loc):
            self.zone_mask[loc.zone] = self.zone_mask.get(loc.zone, 0) | (1 << i)
        self.tour = lru_cache(maxsize=None)(self._tour)
        self.zone_split = lru_cache(maxsize=None)(self._zone_split)

    def _tour(self, mask: int) -> tuple[float, tuple[int, ...]]:
        """Cheapest depot round trip through the items of `mask` (one zone)."""
        items = list(_bits(mask))
        zone = self.instance.zones[self.loc[items[0]].zone]
        # co-located items are visited back to back at no extra cost
        stops: dict = {}
        for i in items:
            stops.setdefault(self.loc[i], []).append(i)
        places = list(stops)
        k = len(places)
        d = lambda a, b: distance(zone, a, b)
        depot = zone.depot
        # Held-Karp over visiting subsets; ties keep the first (lexicographic) path
        best: dict[tuple[int, int], tuple[float, tuple[int, ...]]] = {}
        for j in range(k):
            best[(1 << j, j)] = (d(depot, places[j]), (j,))
        for subset in range(1, 1 << k):
            for last in range(k):
                entry = best.get((subset, last))
                if entry is None:
                    continue
                cost, path = entry
                for nxt in range(k):
                    if subset >> nxt & 1:
                        continue
                    key = (subset | 1 << nxt, nxt)
                    cand = (cost + d(places[last], places[nxt]), path + (nxt,))
                    if key not in best or cand < best[key]:
                        best[key] = cand
        full = (1 << k) - 1
        cost, path = min(
            (best[(full, last)][0] + d(places[last], depot), best[(full, last)][1]) for last in range(k)
        )
        return cost, tuple(i for j in path for i in sorted(stops[places[j]]))

    def _zone_split(self, mask: int) -> tuple[float, tuple[tuple[int, ...], ...]]:
        """Cheapest split of single-zone items into volume-feasible picklists."""
        if not mask:
            return 0.0, ()
        V = self.instance.picklist_volume
        low = mask & -mask
        rest = mask ^ low
        best = None
        sub = rest
        while True:
            group = sub | low
            if sum(self.vol[i] for i in _bits(group)) <= V:
                t_cost, route = self.tour(group)
                r_cost, routes = self.zone_split(mask ^ group)
                cand = (t_cost + r_cost, (route,) + routes)
                if best is None or cand < best:
                    best = cand
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return best

    def batch_cost(self, mask: int) -> tuple[float, tuple[Picklist, ...]]:
        total = 0.0
        picklists = []
        for zone in sorted(self.zone_mask):
            part = mask & self.zone_mask[zone]
            if part:
                cost, routes = self.zone_split(part)
                total += cost
                picklists.extend(Picklist(zone, r) for r in routes)
        return total, tuple(picklists)


def _allocations(articles: Counter, free_by_article: dict[int, list[int]], used: int):
    """Every item bitmask that supplies the article multiset from unused items."""
    choices = []
    for a in sorted(articles):
        free = [i for i in free_by_article.get(a, []) if not used >> i & 1]
        combos = list(itertools.combinations(free, articles[a]))
        if not combos:
            return
        choices.append(combos)
    for pick in itertools.product(*choices):
        mask = 0
        for combo in pick:
            for i in combo:
                mask |= 1 << i
        yield mask


def exact_solve(instance: Instance, limits: ExactLimits = ExactLimits()) -> Solution:
    total_articles = instance.total_order_articles
    if total_articles > limits.max_total_order_articles or instance.n_items > limits.max_items:
        raise LimitExceeded(
            f"instance has {total_articles} order articles and {instance.n_items} items; "
            f"limits are {limits.max_total_order_articles} and {limits.max_items}"
        )
    oracle = _Oracle(instance)
    orders = sorted(instance.orders, key=lambda o: o.id)
    n_orders = len(orders)
    Q = instance.orders_per_batch
    IG = instance.item_goal
    free_by_article: dict[int, list[int]] = {}
    for i in range(instance.n_items):
        free_by_article.setdefault(int(instance.item_article[i]), []).append(i)
    size = [len(o.articles) for o in orders]

    @lru_cache(maxsize=None)
    def plan(todo: int, used: int):
        """Cheapest batching of the orders in `todo` using items outside `used`."""
        if not todo:
            return 0.0, ()
        first = todo & -todo
        rest = todo ^ first
        best = None
        # the batch holding the lowest remaining order, with up to Q - 1 companions
        for extra in range(min(Q - 1, bin(rest).count("1")) + 1):
            for companions in itertools.combinations(list(_bits(rest)), extra):
                block = first
                for c in companions:
                    block |= 1 << c
                wanted = Counter(a for k in _bits(block) for a in orders[k].articles)
                for items in _allocations(wanted, free_by_article, used):
                    cost, picklists = oracle.batch_cost(items)
                    if best is not None and cost >= best[0]:
                        continue
                    sub = plan(todo ^ block, used | items)
                    if sub is None:
                        continue
                    cand = (cost + sub[0], ((block, picklists),) + sub[1])
                    if best is None or cand[0] < best[0]:
                        best = cand
        return best

    full = (1 << n_orders) - 1
    if sum(size) < IG:
        subsets = [full]
    else:
        subsets = [m for m in range(1 << n_orders) if sum(size[k] for k in _bits(m)) >= IG]

    best = None
    for subset in subsets:
        result = plan(subset, 0)
        if result is not None and (best is None or result[0] < best[0]):
            best = result
    if best is None:
        raise ValueError("instance admits no feasible solution")

    objective, blocks = best
    batches = tuple(
        Batch(tuple(orders[k].id for k in _bits(block)), picklists) for block, picklists in blocks
    )
    selected = sum(len(p) for b in batches for p in b.picklists)
    return Solution(
        batches=batches,
        objective=objective,
        pcpi=objective / selected if selected else 0.0,
        goal_met=selected >= IG,
        instance=instance.name,
        algorithm="exact",
        optimal=True,
    )
