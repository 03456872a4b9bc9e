"""Feasibility referee for solutions; independent of every solver.

Violations are numbered after the model they check:
0 unknown ids, 1 recorded objective/pcpi, 2 order disjointness,
3 item disjointness, 4 order/picklist article match, 5 single-zone
picklists, 6 picklist volume, 7 orders per batch, 8 item goal.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .model import Instance, Picklist, Solution
from .picklisting import picklist_cost

_TOL = 1e-9


class IntegrityError(ValueError):
    """The recorded objective or pcpi disagrees with the recomputed one."""


@dataclass(frozen=True)
class Violation:
    constraint: int
    batch: int
    detail: str

    def to_dict(self) -> dict:
        return {"constraint": self.constraint, "batch": self.batch, "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)
    objective: float = 0.0
    pcpi: float | None = None

    @property
    def feasible(self) -> bool:
        return not self.violations

    def constraints(self) -> set[int]:
        return {v.constraint for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "violations": [v.to_dict() for v in self.violations],
            "warnings": [v.to_dict() for v in self.warnings],
            "objective": self.objective,
            "pcpi": self.pcpi,
        }

    def summary(self) -> str:
        lines = [f"feasible: {self.feasible}", f"objective: {self.objective:g}"]
        lines.append("pcpi: " + ("undefined" if self.pcpi is None else f"{self.pcpi:.2f}"))
        for v in self.violations:
            lines.append(f"  ({v.constraint}) batch {v.batch}: {v.detail}")
        for w in self.warnings:
            lines.append(f"  warning ({w.constraint}) batch {w.batch}: {w.detail}")
        return "\n".join(lines)


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=_TOL, abs_tol=_TOL)


def _known_items(instance: Instance, p: Picklist) -> list[int]:
    return [i for i in p.items if 0 <= i < instance.n_items]


def validate(instance: Instance, solution: Solution) -> ValidationReport:
    report = ValidationReport()
    bad = report.violations.append
    V, Q = instance.picklist_volume, instance.orders_per_batch
    orders = instance.order_by_id

    order_seen: dict[int, int] = {}
    item_seen: dict[int, int] = {}
    objective = 0.0
    costable = True
    picked: set[int] = set()

    for b, batch in enumerate(solution.batches):
        unknown_orders = [o for o in batch.orders if o not in orders]
        if unknown_orders:
            bad(Violation(0, b, f"unknown order ids {unknown_orders}"))
        for p in batch.picklists:
            unknown = [i for i in p.items if not 0 <= i < instance.n_items]
            if unknown:
                bad(Violation(0, b, f"unknown item ids {unknown}"))
            if not 0 <= p.zone < len(instance.zones):
                bad(Violation(0, b, f"unknown zone {p.zone}"))

        for o in batch.orders:
            if o in order_seen:
                bad(Violation(2, b, f"order {o} already assigned in batch {order_seen[o]}"))
            else:
                order_seen[o] = b

        batch_orders = {o for o in batch.orders if o in orders}
        if len(batch_orders) > Q:
            bad(Violation(7, b, f"{len(batch_orders)} orders exceed the limit of {Q}"))

        batch_items: set[int] = set()
        for k, p in enumerate(batch.picklists):
            items = _known_items(instance, p)
            for i in items:
                if i in item_seen:
                    bad(Violation(3, b, f"item {i} already picked in batch {item_seen[i]}"))
                elif i in batch_items:
                    bad(Violation(3, b, f"item {i} appears twice in the batch"))
                else:
                    item_seen[i] = b
                batch_items.add(i)
            if not p.items:
                bad(Violation(5, b, f"picklist {k} is empty"))
                continue
            if len(items) != len(p.items) or not 0 <= p.zone < len(instance.zones):
                costable = False
                continue
            off_zone = [i for i in items if instance.item_zone[i] != p.zone]
            if off_zone:
                bad(Violation(5, b, f"picklist {k} (zone {p.zone}) holds items from other zones: {off_zone}"))
            volume = sum(instance.item_volume[i] for i in items)
            if volume > V + _TOL:
                bad(Violation(6, b, f"picklist {k} volume {volume:g} exceeds {V:g}"))
            if off_zone:
                costable = False
            else:
                objective += picklist_cost(instance, p)

        wanted = Counter(a for o in batch_orders for a in orders[o].articles)
        supplied = Counter(int(instance.item_article[i]) for i in batch_items)
        if wanted != supplied:
            missing = sorted((wanted - supplied).elements())
            extra = sorted((supplied - wanted).elements())
            bad(Violation(4, b, f"articles ordered but not picked {missing}, picked but not ordered {extra}"))
        picked |= batch_items

    report.objective = objective
    report.pcpi = objective / len(picked) if picked else None

    if costable and not _close(objective, solution.objective):
        bad(Violation(1, -1, f"recorded objective {solution.objective:g} != recomputed {objective:g}"))
    if costable and report.pcpi is not None and not _close(report.pcpi, solution.pcpi):
        bad(Violation(1, -1, f"recorded pcpi {solution.pcpi!r} != recomputed {report.pcpi!r}"))

    IG = instance.item_goal
    if len(picked) >= IG:
        if not solution.goal_met:
            bad(Violation(8, -1, f"goal_met is false although {len(picked)} >= {IG} items were picked"))
    elif solution.goal_met:
        bad(Violation(8, -1, f"only {len(picked)} items picked, item goal is {IG}"))
    elif set(order_seen) >= set(orders):
        report.warnings.append(Violation(8, -1, f"order pool exhausted at {len(picked)} of {IG} items"))
    else:
        bad(Violation(8, -1, f"only {len(picked)} items picked, item goal is {IG}, with orders left"))
    return report


def objective(instance: Instance, solution: Solution) -> float:
    """Recompute the total picklist cost; raise IntegrityError if the recorded value differs."""
    total = sum(picklist_cost(instance, p) for b in solution.batches for p in b.picklists)
    if not _close(total, solution.objective):
        raise IntegrityError(f"recorded objective {solution.objective:g} != recomputed {total:g}")
    return total


def pcpi(instance: Instance, solution: Solution) -> float:
    n = len({i for b in solution.batches for p in b.picklists for i in p.items})
    if n == 0:
        raise ValueError("pcpi is undefined for a solution without items")
    return objective(instance, solution) / n
