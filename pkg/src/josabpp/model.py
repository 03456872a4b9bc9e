"""Problem data: articles, orders, zones, warehouse items, and solution structures.

Items are stored column-wise (numpy arrays indexed by item id) so that
instances with a million items stay compact. Everything else is a small
frozen dataclass referenced by integer id.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Sequence

import numpy as np

FORMAT_VERSION = "1.0"


class InstanceFormatError(ValueError):
    """Raised when an instance or solution document cannot be parsed."""


class InstanceValidationError(ValueError):
    """Raised when a parsed instance violates one or more invariants."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("invalid instance:\n  " + "\n  ".join(self.problems))


@dataclass(frozen=True)
class Article:
    id: int
    volume: float


@dataclass(frozen=True)
class Order:
    id: int
    articles: tuple[int, ...]


@dataclass(frozen=True)
class Location:
    zone: int
    aisle: int
    rack: int


@dataclass(frozen=True)
class ZoneSpec:
    id: int
    aisles: int
    racks: int
    cross_aisle_racks: tuple[int, int, int]

    @property
    def depot(self) -> Location:
        return Location(self.id, 0, 0)

    def contains(self, loc: Location) -> bool:
        return loc.zone == self.id and 0 <= loc.aisle < self.aisles and 0 <= loc.rack < self.racks


def default_cross_aisles(racks: int) -> tuple[int, int, int]:
    """Front, middle and back rack of a zone."""
    return (0, (racks - 1) // 2, racks - 1)


@dataclass(frozen=True)
class WarehouseItem:
    id: int
    article: int
    location: Location


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    name: str
    articles: tuple[Article, ...]
    orders: tuple[Order, ...]
    zones: tuple[ZoneSpec, ...]
    item_article: np.ndarray
    item_zone: np.ndarray
    item_aisle: np.ndarray
    item_rack: np.ndarray
    item_goal: int
    picklist_volume: float
    orders_per_batch: int

    def __post_init__(self):
        for attr in ("item_article", "item_zone", "item_aisle", "item_rack"):
            object.__setattr__(self, attr, _frozen_array(getattr(self, attr), np.int64))
        if not (len(self.item_article) == len(self.item_zone) == len(self.item_aisle) == len(self.item_rack)):
            raise ValueError("item columns must have equal length")

    @property
    def n_items(self) -> int:
        return len(self.item_article)

    @cached_property
    def article_volume(self) -> np.ndarray:
        return _frozen_array([a.volume for a in self.articles], np.float64)

    @cached_property
    def item_volume(self) -> np.ndarray:
        return _frozen_array(self.article_volume[self.item_article], np.float64)

    @cached_property
    def order_by_id(self) -> dict[int, Order]:
        return {o.id: o for o in self.orders}

    @property
    def total_order_articles(self) -> int:
        return sum(len(o.articles) for o in self.orders)

    def item(self, i: int) -> WarehouseItem:
        return WarehouseItem(int(i), int(self.item_article[i]), self.location(i))

    def location(self, i: int) -> Location:
        return Location(int(self.item_zone[i]), int(self.item_aisle[i]), int(self.item_rack[i]))

    def items(self) -> Iterable[WarehouseItem]:
        for i in range(self.n_items):
            yield self.item(i)

    def with_orders(self, orders: Iterable[Order], name: str | None = None) -> "Instance":
        """Copy of this instance with a different order pool; items and params are shared."""
        return Instance(
            name=self.name if name is None else name,
            articles=self.articles,
            orders=tuple(sorted(orders, key=lambda o: o.id)),
            zones=self.zones,
            item_article=self.item_article,
            item_zone=self.item_zone,
            item_aisle=self.item_aisle,
            item_rack=self.item_rack,
            item_goal=self.item_goal,
            picklist_volume=self.picklist_volume,
            orders_per_batch=self.orders_per_batch,
        )


# ---------------------------------------------------------------- solutions


@dataclass(frozen=True)
class Picklist:
    zone: int
    items: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class Batch:
    orders: tuple[int, ...]
    picklists: tuple[Picklist, ...]

    @property
    def items(self) -> list[int]:
        return [i for p in self.picklists for i in p.items]


@dataclass(frozen=True)
class Solution:
    batches: tuple[Batch, ...]
    objective: float
    pcpi: float
    goal_met: bool
    instance: str = ""
    algorithm: str = ""
    seed: int = 0
    optimal: bool = False

    @property
    def selected_items(self) -> int:
        return sum(len(p) for b in self.batches for p in b.picklists)

    @property
    def n_picklists(self) -> int:
        return sum(len(b.picklists) for b in self.batches)

    @property
    def order_ids(self) -> list[int]:
        return [o for b in self.batches for o in b.orders]


@dataclass
class SelectionState:
    """Mutable bookkeeping of a greedy run: what is left and what the open batch holds."""

    remaining_inventory: set[int]
    batch_selected: list[int] = field(default_factory=list)
    remaining_goal: int = 0

    def check(self) -> None:
        if self.remaining_inventory.intersection(self.batch_selected):
            raise ValueError("selected items must not remain in the inventory")


# ---------------------------------------------------------------- checks


def demand_profile(instance: Instance) -> dict[int, int]:
    """Total demanded count per article id, zero for articles nobody ordered."""
    counts = Counter(a for o in instance.orders for a in o.articles)
    return {a.id: counts.get(a.id, 0) for a in instance.articles}


def _dense(ids: list[int], what: str, problems: list[str]) -> None:
    if sorted(ids) != list(range(len(ids))):
        problems.append(f"{what} ids must be dense 0..{len(ids) - 1}")


def check_instance(instance: Instance) -> list[str]:
    """Return a description of every violated invariant (empty when valid)."""
    problems: list[str] = []
    V = instance.picklist_volume
    if not V > 0:
        problems.append(f"picklist_volume must be positive, got {V}")
    if instance.orders_per_batch < 1:
        problems.append(f"orders_per_batch must be >= 1, got {instance.orders_per_batch}")
    if instance.item_goal < 1:
        problems.append(f"item_goal must be >= 1, got {instance.item_goal}")
    if instance.item_goal > instance.n_items:
        problems.append(f"item_goal {instance.item_goal} exceeds item count {instance.n_items}")

    _dense([a.id for a in instance.articles], "article", problems)
    _dense([z.id for z in instance.zones], "zone", problems)
    for a in instance.articles:
        if not a.volume > 0:
            problems.append(f"article {a.id}: volume must be positive, got {a.volume}")
        elif a.volume > V:
            problems.append(f"article {a.id}: volume {a.volume} exceeds picklist volume {V}")

    for z in instance.zones:
        cross = z.cross_aisle_racks
        if z.aisles < 1 or z.racks < 1:
            problems.append(f"zone {z.id}: aisles and racks must be positive")
        if len(cross) != 3 or len(set(cross)) != 3:
            problems.append(f"zone {z.id}: need exactly 3 distinct cross-aisle racks, got {list(cross)}")
        elif cross[0] != 0:
            problems.append(f"zone {z.id}: first cross-aisle must be rack 0 (depot), got {cross[0]}")
        if any(not 0 <= c < z.racks for c in cross):
            problems.append(f"zone {z.id}: cross-aisle racks out of range [0, {z.racks})")

    seen_orders: set[int] = set()
    n_articles = len(instance.articles)
    for o in instance.orders:
        if o.id < 0 or o.id in seen_orders:
            problems.append(f"order {o.id}: duplicate or negative id")
        seen_orders.add(o.id)
        if not o.articles:
            problems.append(f"order {o.id}: empty order")
        bad = sorted({a for a in o.articles if not 0 <= a < n_articles})
        if bad:
            problems.append(f"order {o.id}: unknown article ids {bad}")

    n_zones = len(instance.zones)
    if instance.n_items:
        art, zone = instance.item_article, instance.item_zone
        bad_art = np.flatnonzero((art < 0) | (art >= n_articles))
        if len(bad_art):
            problems.append(f"items with unknown article: {bad_art[:10].tolist()}")
        bad_zone = np.flatnonzero((zone < 0) | (zone >= n_zones))
        if len(bad_zone):
            problems.append(f"items with unknown zone: {bad_zone[:10].tolist()}")
        elif n_zones:
            aisles = np.array([z.aisles for z in instance.zones])[zone]
            racks = np.array([z.racks for z in instance.zones])[zone]
            off = np.flatnonzero(
                (instance.item_aisle < 0) | (instance.item_aisle >= aisles)
                | (instance.item_rack < 0) | (instance.item_rack >= racks)
            )
            if len(off):
                problems.append(f"items outside their zone grid: {off[:10].tolist()}")

    if not problems:
        supply = np.bincount(instance.item_article, minlength=n_articles)
        for a, need in demand_profile(instance).items():
            if need > supply[a]:
                problems.append(f"supply < demand for article {a}: {supply[a]} < {need}")
    return problems


# ---------------------------------------------------------------- JSON


def _num(x: float) -> int | float:
    x = float(x)
    return int(x) if x.is_integer() else x


def _check_version(doc: dict) -> None:
    version = str(doc.get("format_version", FORMAT_VERSION))
    if version.split(".")[0] != FORMAT_VERSION.split(".")[0]:
        raise InstanceFormatError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")


def _read_json(source) -> dict:
    if isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    elif isinstance(source, str):
        raw = source.encode()
    else:
        raw = source.read()
        if isinstance(raw, str):
            raw = raw.encode()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceFormatError("top-level JSON value must be an object")
    _check_version(doc)
    return doc


def instance_to_dict(instance: Instance) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "name": instance.name,
        "params": {
            "item_goal": int(instance.item_goal),
            "picklist_volume": _num(instance.picklist_volume),
            "orders_per_batch": int(instance.orders_per_batch),
        },
        "zones": [
            {"id": z.id, "aisles": z.aisles, "racks": z.racks, "cross_aisle_racks": list(z.cross_aisle_racks)}
            for z in instance.zones
        ],
        "articles": [{"id": a.id, "volume": _num(a.volume)} for a in instance.articles],
        "items": [
            {"id": i, "article": a, "zone": z, "aisle": x, "rack": r}
            for i, (a, z, x, r) in enumerate(
                zip(
                    instance.item_article.tolist(),
                    instance.item_zone.tolist(),
                    instance.item_aisle.tolist(),
                    instance.item_rack.tolist(),
                )
            )
        ],
        "orders": [{"id": o.id, "articles": list(o.articles)} for o in instance.orders],
    }


def dumps_canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def save_instance(instance: Instance, fp: IO[bytes] | None = None) -> bytes:
    data = dumps_canonical(instance_to_dict(instance)).encode("utf-8")
    if fp is not None:
        fp.write(data)
    return data


def instance_from_dict(doc: dict) -> Instance:
    try:
        params = doc["params"]
        zones = tuple(
            ZoneSpec(int(z["id"]), int(z["aisles"]), int(z["racks"]),
                     tuple(int(c) for c in z.get("cross_aisle_racks") or default_cross_aisles(int(z["racks"]))))
            for z in sorted(doc["zones"], key=lambda z: z["id"])
        )
        articles = tuple(
            Article(int(a["id"]), float(a["volume"])) for a in sorted(doc["articles"], key=lambda a: a["id"])
        )
        orders = tuple(
            Order(int(o["id"]), tuple(int(a) for a in o["articles"]))
            for o in sorted(doc["orders"], key=lambda o: o["id"])
        )
        raw_items = doc["items"]
        ids = [int(it["id"]) for it in raw_items]
        if sorted(ids) != list(range(len(ids))):
            raise InstanceValidationError([f"item ids must be dense 0..{len(ids) - 1}"])
        cols = np.zeros((4, len(ids)), dtype=np.int64)
        for it in raw_items:
            cols[:, int(it["id"])] = (int(it["article"]), int(it["zone"]), int(it["aisle"]), int(it["rack"]))
        return Instance(
            name=str(doc.get("name", "")),
            articles=articles,
            orders=orders,
            zones=zones,
            item_article=cols[0],
            item_zone=cols[1],
            item_aisle=cols[2],
            item_rack=cols[3],
            item_goal=int(params["item_goal"]),
            picklist_volume=float(params["picklist_volume"]),
            orders_per_batch=int(params["orders_per_batch"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceValidationError):
            raise
        raise InstanceFormatError(f"malformed instance document: {exc!r}") from exc


def load_instance(source: IO[bytes] | bytes | str) -> Instance:
    """Parse and validate an instance JSON document.

    Raises InstanceFormatError for malformed input and
    InstanceValidationError listing every violated invariant otherwise.
    """
    instance = instance_from_dict(_read_json(source))
    problems = check_instance(instance)
    if problems:
        raise InstanceValidationError(problems)
    return instance


def read_instance(path) -> Instance:
    with open(path, "rb") as fp:
        return load_instance(fp)


def write_instance(instance: Instance, path) -> None:
    with open(path, "wb") as fp:
        save_instance(instance, fp)


def solution_to_dict(solution: Solution) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "instance": solution.instance,
        "algorithm": solution.algorithm,
        "seed": int(solution.seed),
        "goal_met": bool(solution.goal_met),
        "objective": _num(solution.objective),
        "pcpi": float(solution.pcpi),
        "selected_items": solution.selected_items,
        "batches": [
            {
                "orders": list(b.orders),
                "picklists": [{"zone": p.zone, "items": list(p.items)} for p in b.picklists],
            }
            for b in solution.batches
        ],
    }
    if solution.optimal:
        doc["optimal"] = True
    return doc


def save_solution(solution: Solution, fp: IO[bytes] | None = None) -> bytes:
    data = dumps_canonical(solution_to_dict(solution)).encode("utf-8")
    if fp is not None:
        fp.write(data)
    return data


def load_solution(source: IO[bytes] | bytes | str) -> Solution:
    doc = _read_json(source)
    try:
        batches = tuple(
            Batch(
                tuple(int(o) for o in b["orders"]),
                tuple(Picklist(int(p["zone"]), tuple(int(i) for i in p["items"])) for p in b["picklists"]),
            )
            for b in doc["batches"]
        )
        return Solution(
            batches=batches,
            objective=float(doc["objective"]),
            pcpi=float(doc["pcpi"]),
            goal_met=bool(doc["goal_met"]),
            instance=str(doc.get("instance", "")),
            algorithm=str(doc.get("algorithm", "")),
            seed=int(doc.get("seed", 0)),
            optimal=bool(doc.get("optimal", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"malformed solution document: {exc!r}") from exc


def read_solution(path) -> Solution:
    with open(path, "rb") as fp:
        return load_solution(fp)


def write_solution(solution: Solution, path) -> None:
    with open(path, "wb") as fp:
        save_solution(solution, fp)
