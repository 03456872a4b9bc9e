"""Order selection, allocation, batching and picking for zoned mixed-shelves warehouses."""

from .geometry import DomainError, distance, distance_to_depot
from .greedy import Algorithm, SolverConfig, best_order, random_order, solve
from .model import (
    Article,
    Batch,
    Instance,
    InstanceFormatError,
    InstanceValidationError,
    Location,
    Order,
    Picklist,
    SelectionState,
    Solution,
    WarehouseItem,
    ZoneSpec,
    demand_profile,
    load_instance,
    load_solution,
    save_instance,
    save_solution,
)
from .picklisting import compute_picklists, picklist_cost

__all__ = [
    "Algorithm",
    "Article",
    "Batch",
    "DomainError",
    "Instance",
    "InstanceFormatError",
    "InstanceValidationError",
    "Location",
    "Order",
    "Picklist",
    "SelectionState",
    "Solution",
    "SolverConfig",
    "WarehouseItem",
    "ZoneSpec",
    "best_order",
    "compute_picklists",
    "demand_profile",
    "distance",
    "distance_to_depot",
    "load_instance",
    "load_solution",
    "picklist_cost",
    "random_order",
    "save_instance",
    "save_solution",
    "solve",
]
