"""Walking distance inside one zone.

Within an aisle the rack coordinate can be walked freely; moving between
aisles is only possible along the three cross-aisles. Every grid step costs 1.
"""

from __future__ import annotations

import numpy as np

from .model import Location, ZoneSpec


class DomainError(ValueError):
    """Distance requested between locations of different zones (or outside the zone)."""


def _rack_detour(cross, r1: int, r2: int) -> int:
    return min(abs(r1 - c) + abs(r2 - c) for c in cross)


def distance(zone: ZoneSpec, x: Location, y: Location) -> float:
    if x.zone != zone.id or y.zone != zone.id:
        raise DomainError(f"distance is only defined inside one zone: {x} / {y} vs zone {zone.id}")
    if x.aisle == y.aisle:
        return float(abs(x.rack - y.rack))
    return float(abs(x.aisle - y.aisle) + _rack_detour(zone.cross_aisle_racks, x.rack, y.rack))


def distance_to_depot(zone: ZoneSpec, x: Location) -> float:
    return distance(zone, zone.depot, x)


def distance_array(cross, aisle1, rack1, aisle2, rack2) -> np.ndarray:
    """Vectorized distance for same-zone coordinate arrays (broadcasting)."""
    aisle1, rack1, aisle2, rack2 = (np.asarray(v, dtype=np.int64) for v in (aisle1, rack1, aisle2, rack2))
    detour = np.min(
        [np.abs(rack1 - c) + np.abs(rack2 - c) for c in cross], axis=0
    )
    return np.where(aisle1 == aisle2, np.abs(rack1 - rack2), np.abs(aisle1 - aisle2) + detour)
