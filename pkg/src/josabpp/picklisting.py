"""Splitting selected items into picklists and costing a picklist tour."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .geometry import DomainError, distance
from .model import Instance, Picklist


def picklist_cost(instance: Instance, p: Picklist) -> float:
    """Depot -> items in the given order -> depot."""
    zone = instance.zones[p.zone]
    stops = [zone.depot]
    for i in p.items:
        loc = instance.location(i)
        if loc.zone != p.zone:
            raise DomainError(f"item {i} lies in zone {loc.zone}, picklist is in zone {p.zone}")
        stops.append(loc)
    stops.append(zone.depot)
    return float(sum(distance(zone, a, b) for a, b in zip(stops, stops[1:])))


def compute_picklists(instance: Instance, selected: Iterable[int]) -> list[Picklist]:
    """Group items by zone, sort by (aisle, rack, id) and pack first-fit under V.

    An item that does not fit closes the current picklist and opens the next
    one. Items are never reordered by volume.
    """
    items = np.fromiter(selected, dtype=np.int64)
    if len(items) == 0:
        return []
    V = instance.picklist_volume
    order = np.lexsort((items, instance.item_rack[items], instance.item_aisle[items], instance.item_zone[items]))
    items = items[order]
    zones = instance.item_zone[items].tolist()
    vols = instance.item_volume[items].tolist()

    picklists: list[Picklist] = []
    current: list[int] = []
    load = 0.0
    current_zone = zones[0]
    for i, z, vol in zip(items.tolist(), zones, vols):
        if z != current_zone or load + vol > V:
            picklists.append(Picklist(current_zone, tuple(current)))
            current, load, current_zone = [], 0.0, z
        current.append(i)
        load += vol
    picklists.append(Picklist(current_zone, tuple(current)))
    return picklists
