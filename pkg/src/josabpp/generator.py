"""Seeded benchmark instance generator and order-pool trimming."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .model import Article, Instance, Order, ZoneSpec, check_instance, default_cross_aisles

PRESETS = {
    "small": dict(items=10_000, orders=500, zones=10, racks=100, aisles=100),
    "medium": dict(items=100_000, orders=5_000, zones=50, racks=100, aisles=100),
    "large": dict(items=1_000_000, orders=50_000, zones=100, racks=100, aisles=100),
}


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    items: int
    orders: int
    zones: int
    racks: int = 100
    aisles: int = 100
    mean_order_size: float = 2.64
    max_order_size: int = 20
    ig_ratio: float = 0.20
    volume_range: tuple[int, int] = (1, 10)
    picklist_volume: float = 60.0
    orders_per_batch: int = 46
    articles: int | None = None  # defaults to items // 20
    seed: int = 0
    name: str = ""

    @classmethod
    def preset(cls, category: str, **overrides) -> "GenParams":
        try:
            base = PRESETS[category]
        except KeyError:
            raise ValueError(f"unknown preset {category!r}; choose from {sorted(PRESETS)}") from None
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return cls(**{**base, **overrides})

    @property
    def n_articles(self) -> int:
        return self.articles if self.articles is not None else max(1, self.items // 20)

    def replace(self, **changes) -> "GenParams":
        return dataclasses.replace(self, **changes)


def _check_params(p: GenParams) -> None:
    problems = []
    if min(p.items, p.orders, p.zones) < 1:
        problems.append("items, orders and zones must be positive")
    if p.racks < 3:
        problems.append("need at least 3 racks per zone for the three cross-aisles")
    if p.aisles < 1:
        problems.append("aisles must be positive")
    if not p.mean_order_size >= 1:
        problems.append("mean_order_size must be >= 1")
    if p.max_order_size < 1 or p.max_order_size < p.mean_order_size:
        problems.append("max_order_size must be >= max(1, mean_order_size)")
    if not 0 < p.ig_ratio <= 1:
        problems.append("ig_ratio must lie in (0, 1]")
    lo, hi = p.volume_range
    if not 0 < lo <= hi:
        problems.append("volume_range must be a positive interval")
    if hi > p.picklist_volume:
        problems.append("largest article volume exceeds the picklist volume")
    if p.orders_per_batch < 1:
        problems.append("orders_per_batch must be positive")
    if p.n_articles < 1:
        problems.append("need at least one article")
    if not 0 <= p.seed < 2**64:
        problems.append("seed must be a 64-bit unsigned integer")
    if problems:
        raise GenerationError("; ".join(problems))


def _order_sizes(rng: np.random.Generator, p: GenParams) -> np.ndarray:
    # geometric on {1, 2, ...}; values above the cap are redrawn
    sizes = rng.geometric(1.0 / p.mean_order_size, size=p.orders)
    over = sizes > p.max_order_size
    while over.any():
        sizes[over] = rng.geometric(1.0 / p.mean_order_size, size=int(over.sum()))
        over = sizes > p.max_order_size
    return sizes


def generate(params: GenParams) -> Instance:
    """Build one instance deterministically from `params.seed`."""
    _check_params(params)
    rng = np.random.default_rng(params.seed)
    n_art = params.n_articles

    lo, hi = params.volume_range
    volumes = rng.integers(lo, hi + 1, size=n_art)

    sizes = _order_sizes(rng, params)
    order_articles = rng.integers(0, n_art, size=int(sizes.sum()))
    bounds = np.concatenate(([0], np.cumsum(sizes)))
    orders = tuple(
        Order(k, tuple(order_articles[bounds[k]:bounds[k + 1]].tolist())) for k in range(params.orders)
    )

    demand = np.bincount(order_articles, minlength=n_art)
    total = int(demand.sum())
    if total > params.items:
        raise GenerationError(f"{params.items} items cannot cover a total demand of {total}")
    # every article gets its demand, the remainder is spread uniformly
    item_article = np.concatenate(
        (np.repeat(np.arange(n_art), demand), rng.integers(0, n_art, size=params.items - total))
    )
    item_article = rng.permutation(item_article)
    item_zone = rng.integers(0, params.zones, size=params.items)
    item_aisle = rng.integers(0, params.aisles, size=params.items)
    item_rack = rng.integers(0, params.racks, size=params.items)

    item_goal = max(1, int(np.floor(params.ig_ratio * total + 0.5)))
    cross = default_cross_aisles(params.racks)
    instance = Instance(
        name=params.name or f"gen-{params.seed}",
        articles=tuple(Article(a, float(v)) for a, v in enumerate(volumes.tolist())),
        orders=orders,
        zones=tuple(ZoneSpec(z, params.aisles, params.racks, cross) for z in range(params.zones)),
        item_article=item_article,
        item_zone=item_zone,
        item_aisle=item_aisle,
        item_rack=item_rack,
        item_goal=item_goal,
        picklist_volume=float(params.picklist_volume),
        orders_per_batch=params.orders_per_batch,
    )
    problems = check_instance(instance)
    if problems:
        raise GenerationError("generated instance is invalid: " + "; ".join(problems))
    return instance


def trim_order_pool(instance: Instance, seed: int) -> Instance:
    """Keep randomly drawn orders until their article count first reaches the item goal."""
    if instance.total_order_articles < instance.item_goal:
        raise ValueError("order pool is already smaller than the item goal")
    rng = np.random.default_rng(seed)
    kept: list[Order] = []
    count = 0
    for k in rng.permutation(len(instance.orders)).tolist():
        if count >= instance.item_goal:
            break
        order = instance.orders[k]
        kept.append(order)
        count += len(order.articles)
    trimmed = instance.with_orders(kept, name=f"{instance.name}-trim{seed}")
    problems = check_instance(trimmed)
    if problems:
        raise GenerationError("; ".join(problems))
    return trimmed


def manifest_entry(instance: Instance, params: GenParams) -> dict:
    return {
        "name": instance.name,
        "seed": params.seed,
        "params": {k: (list(v) if isinstance(v, tuple) else v) for k, v in dataclasses.asdict(params).items()
                   if k not in ("seed", "name")},
        "items": instance.n_items,
        "orders": len(instance.orders),
        "zones": len(instance.zones),
        "total_order_articles": instance.total_order_articles,
        "item_goal": instance.item_goal,
    }
