"""Distance greedy batching (DGA) and its randomized variant (RDGA).

Both build batches one order at a time until the item goal is reached or
the order pool runs dry. DGA scores every remaining order by the average
distance of its allocated items to the items already in the batch (or to a
depot); RDGA draws the next order uniformly at random and allocates its
items with the same nearest-location rule.

The per-item minimum over "items selected for the open batch plus all
depots" is kept in a cache that is refreshed whenever the batch grows, so
one scoring pass only touches the candidate items of the remaining orders.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numba
import numpy as np

from .geometry import distance_array
from .model import Batch, Instance, Order, SelectionState, Solution
from .picklisting import compute_picklists, picklist_cost


class Algorithm(str, enum.Enum):
    DGA = "dga"
    RDGA = "rdga"


@dataclass(frozen=True)
class SolverConfig:
    algorithm: Algorithm = Algorithm.DGA
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class AllocationError(RuntimeError):
    """An order asks for an article with no item left; the supply invariant was broken."""


class Choice(NamedTuple):
    """Snapshot handed to a solve() observer just before an order joins the batch."""

    pool: list[int]
    inventory: list[int]
    batch_selected: list[int]
    order: int
    items: list[int]
    distance: int


# ---------------------------------------------------------------- kernels

_NO_ITEM = -1


@numba.njit(cache=True, inline="always")
def _dist(a1, r1, a2, r2, cross):
    if a1 == a2:
        return abs(r1 - r2)
    best = abs(r1 - cross[0]) + abs(r2 - cross[0])
    for k in range(1, cross.shape[0]):
        v = abs(r1 - cross[k]) + abs(r2 - cross[k])
        if v < best:
            best = v
    return abs(a1 - a2) + best


@numba.njit(cache=True)
def _allocate(o, order_ptr, order_art, art_ptr, art_items, available, near,
              zone, aisle, rack, cross, out):
    """Nearest-item allocation of one order into `out`; returns total distance or -1."""
    n = 0
    total = 0
    for k in range(order_ptr[o], order_ptr[o + 1]):
        a = order_art[k]
        best_i = _NO_ITEM
        best_d = 0
        for idx in range(art_ptr[a], art_ptr[a + 1]):
            i = art_items[idx]
            if not available[i]:
                continue
            taken = False
            for t in range(n):
                if out[t] == i:
                    taken = True
                    break
            if taken:
                continue
            d = near[i]
            zi = zone[i]
            for t in range(n):
                j = out[t]
                if zone[j] == zi:
                    dj = _dist(aisle[i], rack[i], aisle[j], rack[j], cross[zi])
                    if dj < d:
                        d = dj
            if best_i == _NO_ITEM or d < best_d:
                best_i = i
                best_d = d
        if best_i == _NO_ITEM:
            return -1
        out[n] = best_i
        n += 1
        total += best_d
    return total


@numba.njit(cache=True)
def _best_order(alive, order_ptr, order_art, art_ptr, art_items, available, near,
                zone, aisle, rack, cross, buf, best_items):
    """Scan live orders in index order; keep the strictly smallest d/|s|.

    Returns (order index, distance); order index -1 means empty pool and
    -(o + 2) reports that order o could not be allocated.
    """
    best_o = -1
    best_d = 0
    best_n = 1
    for o in range(alive.shape[0]):
        if not alive[o]:
            continue
        d = _allocate(o, order_ptr, order_art, art_ptr, art_items, available, near,
                      zone, aisle, rack, cross, buf)
        if d < 0:
            return -(o + 2), 0
        n = order_ptr[o + 1] - order_ptr[o]
        # d / n < best_d / best_n, in exact integer arithmetic
        if best_o < 0 or d * best_n < best_d * n:
            best_o = o
            best_d = d
            best_n = n
            for t in range(n):
                best_items[t] = buf[t]
    return best_o, best_d


@numba.njit(cache=True)
def _absorb(new_items, available, near, zone, aisle, rack, cross, zone_ptr, zone_items):
    """Move items into the open batch and refresh the nearest-reference cache."""
    for j in new_items:
        available[j] = False
    for j in new_items:
        z = zone[j]
        cz = cross[z]
        aj = aisle[j]
        rj = rack[j]
        for idx in range(zone_ptr[z], zone_ptr[z + 1]):
            i = zone_items[idx]
            if available[i]:
                d = _dist(aisle[i], rack[i], aj, rj, cz)
                if d < near[i]:
                    near[i] = d


def _csr(keys: np.ndarray, n_keys: int) -> tuple[np.ndarray, np.ndarray]:
    """Group indices 0..len(keys)-1 by key; members ascending within a group."""
    members = np.argsort(keys, kind="stable").astype(np.int64)
    ptr = np.zeros(n_keys + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n_keys), out=ptr[1:])
    return ptr, members


class _Engine:
    """Array-backed selection state shared by DGA and RDGA."""

    def __init__(self, instance: Instance, orders: Sequence[Order] | None = None):
        self.instance = instance
        orders = instance.orders if orders is None else orders
        self.orders = sorted(orders, key=lambda o: o.id)
        self.order_ids = [o.id for o in self.orders]
        lengths = np.array([len(o.articles) for o in self.orders], dtype=np.int64)
        self.order_ptr = np.zeros(len(self.orders) + 1, dtype=np.int64)
        np.cumsum(lengths, out=self.order_ptr[1:])
        self.order_art = np.array([a for o in self.orders for a in o.articles], dtype=np.int64)
        self.alive = np.ones(len(self.orders), dtype=np.bool_)
        self.pool_size = len(self.orders)

        self.zone = np.ascontiguousarray(instance.item_zone)
        self.aisle = np.ascontiguousarray(instance.item_aisle)
        self.rack = np.ascontiguousarray(instance.item_rack)
        self.cross = np.array([z.cross_aisle_racks for z in instance.zones], dtype=np.int64).reshape(-1, 3)
        self.art_ptr, self.art_items = _csr(instance.item_article, len(instance.articles))
        self.zone_ptr, self.zone_items = _csr(instance.item_zone, len(instance.zones))
        # depots sit at aisle 0, rack 0
        self.depot_dist = distance_array(self.cross[self.zone].T, 0, 0, self.aisle, self.rack).astype(np.int64)
        self.available = np.ones(instance.n_items, dtype=np.bool_)
        self.near = self.depot_dist.copy()
        max_len = int(lengths.max()) if len(lengths) else 1
        self._buf = np.empty(max_len, dtype=np.int64)
        self._best = np.empty(max_len, dtype=np.int64)
        self.batch_selected: list[int] = []

    def _kernel_args(self):
        return (self.order_ptr, self.order_art, self.art_ptr, self.art_items, self.available, self.near,
                self.zone, self.aisle, self.rack, self.cross)

    def start_batch(self) -> None:
        np.copyto(self.near, self.depot_dist)
        self.batch_selected = []

    def best(self) -> tuple[int, list[int], int]:
        o, d = _best_order(self.alive, *self._kernel_args(), self._buf, self._best)
        if o < -1:
            self._fail(-o - 2)
        n = self.order_ptr[o + 1] - self.order_ptr[o]
        return o, self._best[:n].tolist(), int(d)

    def allocate(self, o: int) -> tuple[list[int], int]:
        d = _allocate(o, *self._kernel_args(), self._buf)
        if d < 0:
            self._fail(o)
        n = self.order_ptr[o + 1] - self.order_ptr[o]
        return self._buf[:n].tolist(), int(d)

    def take(self, o: int, items: list[int]) -> None:
        self.alive[o] = False
        self.pool_size -= 1
        _absorb(np.array(items, dtype=np.int64), self.available, self.near, self.zone, self.aisle, self.rack,
                self.cross, self.zone_ptr, self.zone_items)
        self.batch_selected.extend(items)

    def snapshot(self, o: int, items: list[int], d: int) -> Choice:
        return Choice(
            pool=[self.order_ids[k] for k in np.flatnonzero(self.alive)],
            inventory=np.flatnonzero(self.available).tolist(),
            batch_selected=list(self.batch_selected),
            order=self.order_ids[o],
            items=list(items),
            distance=d,
        )

    def _fail(self, o: int):
        raise AllocationError(
            f"order {self.order_ids[o]} requests an article with no remaining item; "
            "supply no longer covers demand"
        )

    @classmethod
    def from_state(cls, instance: Instance, pool: Sequence[Order | int], state: SelectionState) -> "_Engine":
        state.check()
        orders = [instance.order_by_id[o] if isinstance(o, (int, np.integer)) else o for o in pool]
        engine = cls(instance, orders)
        engine.available[:] = False
        engine.available[list(state.remaining_inventory)] = True
        selected = np.array(state.batch_selected, dtype=np.int64)
        _absorb(selected, engine.available, engine.near, engine.zone, engine.aisle, engine.rack,
                engine.cross, engine.zone_ptr, engine.zone_items)
        engine.batch_selected = list(state.batch_selected)
        return engine


# ---------------------------------------------------------------- public API


def best_order(instance: Instance, pool: Sequence[Order | int], state: SelectionState) -> tuple[int, list[int]]:
    """The pool order whose nearest-item allocation has the smallest mean distance.

    Ties go to the lowest order id; item ties to the lowest item id.
    """
    if not pool:
        raise ValueError("best_order needs a non-empty pool")
    engine = _Engine.from_state(instance, pool, state)
    o, items, _ = engine.best()
    return engine.order_ids[o], items


def random_order(instance: Instance, pool: Sequence[Order | int], state: SelectionState,
                 rng: np.random.Generator) -> tuple[int, list[int]]:
    """A uniformly drawn pool order plus its nearest-item allocation."""
    if not pool:
        raise ValueError("random_order needs a non-empty pool")
    engine = _Engine.from_state(instance, pool, state)
    o = int(rng.integers(len(engine.orders)))
    items, _ = engine.allocate(o)
    return engine.order_ids[o], items


def solve(instance: Instance, config: SolverConfig = SolverConfig(),
          observer: Callable[[Choice], None] | None = None) -> Solution:
    engine = _Engine(instance)
    rng = np.random.default_rng(config.seed)
    # RDGA draws from the live pool kept in ascending id order
    pool = list(range(len(engine.orders)))
    Q = instance.orders_per_batch
    remaining = instance.item_goal
    batches: list[Batch] = []
    objective = 0.0
    selected_total = 0

    while remaining > 0 and engine.pool_size:
        engine.start_batch()
        batch_orders: list[int] = []
        while len(batch_orders) < Q and engine.pool_size and len(engine.batch_selected) < remaining:
            if config.algorithm is Algorithm.DGA:
                o, items, d = engine.best()
                pool.remove(o)
            else:
                o = pool.pop(int(rng.integers(len(pool))))
                items, d = engine.allocate(o)
            if observer is not None:
                observer(engine.snapshot(o, items, d))
            engine.take(o, items)
            batch_orders.append(engine.order_ids[o])

        picklists = compute_picklists(instance, engine.batch_selected)
        objective += sum(picklist_cost(instance, p) for p in picklists)
        selected_total += len(engine.batch_selected)
        remaining -= len(engine.batch_selected)
        batches.append(Batch(tuple(batch_orders), tuple(picklists)))

    return Solution(
        batches=tuple(batches),
        objective=objective,
        pcpi=objective / selected_total if selected_total else 0.0,
        goal_met=remaining <= 0,
        instance=instance.name,
        algorithm=config.algorithm.value,
        seed=config.seed,
    )
