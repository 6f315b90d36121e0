"""Exhaustive exact optimizer for desk-scale instances.

Every order gets the complete list of its individually feasible timed
routes; a depth-first search over the cross product then enforces the
joint constraints (shared capacity, one booking per container and week,
the port booking cap) and charges each booking's fixed cost once.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .model import (
    Booking, CostBreakdown, Instance, Leg, LocationKind, ProductOrder, ShipmentPlan,
    leg_allowed, leg_cost_cents, plan_cost, route_mode,
)


class OracleLimitError(ValueError):
    """The instance is too large for exhaustive search."""


@dataclass(frozen=True)
class OracleLimits:
    max_orders: int = 6
    max_weeks: int = 14
    max_fcl_slots: int = 3  # parallel FCL containers on one lane
    max_legs: int = 3


@dataclass(frozen=True)
class RoutingOption:
    order: str
    legs: tuple[Leg, ...]
    mode: str
    cost_cents: int  # per-order leg costs, fixed booking costs excluded
    bookings: tuple[tuple[str, int], ...]  # FCL (edge, week) slots used
    slots: tuple[tuple[str, int], ...]  # every capacitated (edge, week) used

    @property
    def id(self) -> str:
        return ">".join(f"{leg.edge}@{leg.depart_week}" for leg in self.legs)


@dataclass(frozen=True)
class OracleResult:
    plan: ShipmentPlan
    cost: CostBreakdown
    nodes: int  # search nodes expanded


def enumerate_options(instance: Instance, order: ProductOrder,
                      max_legs: int = 3) -> list[RoutingOption]:
    """All feasible (route, timing) combinations for one order on its own."""
    net = instance.network
    H = instance.horizon_weeks
    rho = instance.dwell_limit_weeks
    found: list[tuple[Leg, ...]] = []

    def extend(node: str, lo: int, hi: int, legs: list[Leg]):
        if len(legs) == max_legs:
            return
        for edge in net.out_edges.get(node, ()):
            for t in range(lo, min(hi, H - 1) + 1):
                if not leg_allowed(instance, order, edge, t):
                    continue
                s = t + edge.transit_weeks
                legs.append(Leg(edge.id, t))
                if edge.dest == order.destination:
                    if order.earliest_week <= s <= order.latest_week:
                        found.append(tuple(legs))
                elif net.kind(edge.dest) is LocationKind.IN_TRANSIT:
                    extend(edge.dest, s, s + rho, legs)
                legs.pop()

    extend(order.origin, order.ready_week, H - 1, [])
    out = []
    for legs in found:
        edges = [net.edge_by_id[leg.edge] for leg in legs]
        out.append(RoutingOption(
            order=order.id,
            legs=legs,
            mode=route_mode(instance, legs),
            cost_cents=sum(leg_cost_cents(e, order) for e in edges),
            bookings=tuple((e.id, leg.depart_week) for e, leg in zip(edges, legs) if e.is_fcl),
            slots=tuple((e.id, leg.depart_week) for e, leg in zip(edges, legs)
                        if e.capacity_kg is not None),
        ))
    out.sort(key=lambda o: o.id)
    return out


def check_limits(instance: Instance, limits: OracleLimits = OracleLimits()) -> None:
    if len(instance.orders) > limits.max_orders:
        raise OracleLimitError(
            f"{len(instance.orders)} orders exceed the oracle limit of {limits.max_orders}")
    if instance.horizon_weeks > limits.max_weeks:
        raise OracleLimitError(
            f"{instance.horizon_weeks} weeks exceed the oracle limit of {limits.max_weeks}")
    lanes = Counter((e.origin, e.dest) for e in instance.network.fcl_edges())
    widest = max(lanes.values(), default=0)
    if widest > limits.max_fcl_slots:
        raise OracleLimitError(
            f"{widest} FCL containers on one lane exceed the oracle limit of {limits.max_fcl_slots}")


def _collapse(options: list[RoutingOption]) -> list[RoutingOption]:
    # Options touching the same capacitated slots are interchangeable as far
    # as other orders are concerned, so only the cheapest of each group can
    # appear in an optimum (ties keep the smaller id).
    best: dict[tuple, RoutingOption] = {}
    for opt in options:
        key = opt.slots
        cur = best.get(key)
        if cur is None or (opt.cost_cents, opt.id) < (cur.cost_cents, cur.id):
            best[key] = opt
    return sorted(best.values(), key=lambda o: (o.cost_cents, o.id))


def solve_exact(instance: Instance, limits: OracleLimits = OracleLimits()) -> OracleResult:
    """Minimum-cost plan. Among equal-cost plans the one whose option ids,
    listed in order-id order, are lexicographically smallest wins."""
    check_limits(instance, limits)
    net = instance.network
    lam = instance.bookings_per_port_week

    per_order: dict[str, list[RoutingOption]] = {}
    for o in instance.orders:
        per_order[o.id] = _collapse(enumerate_options(instance, o, limits.max_legs))
    active = sorted((o for o in instance.orders if per_order[o.id]),
                    key=lambda o: (-o.gross_weight_kg, o.id))
    hopeless = tuple(sorted(o.id for o in instance.orders if not per_order[o.id]))
    id_rank = {oid: k for k, oid in enumerate(sorted(o.id for o in active))}

    fixed = {e.id: e.fixed_cost_cents for e in net.fcl_edges()}
    port = {e.id: e.origin for e in net.fcl_edges()}
    cap = {e.id: e.capacity_kg for e in net.edges if e.capacity_kg is not None}
    # share of a fresh booking's fixed cost an order is sure to cause
    share = {}
    for o in active:
        for opt in per_order[o.id]:
            for b in opt.bookings:
                share[(o.id, b)] = fixed[b[0]] * o.gross_weight_kg / cap[b[0]]

    load: Counter = Counter()
    booked: set = set()
    port_week: Counter = Counter()
    chosen: list[Optional[RoutingOption]] = [None] * len(active)
    best_cost: Optional[int] = None
    best_key: Optional[tuple] = None
    best_pick: list[RoutingOption] = []
    nodes = 0

    def bound(k: int) -> float:
        lb = 0.0
        for o in active[k:]:
            lb += min(opt.cost_cents + sum(share[(o.id, b)] for b in opt.bookings if b not in booked)
                      for opt in per_order[o.id])
        return lb

    def key_of(pick) -> tuple:
        ids = [""] * len(pick)
        for opt in pick:
            ids[id_rank[opt.order]] = opt.id
        return tuple(ids)

    def search(k: int, cost: int):
        nonlocal best_cost, best_key, best_pick, nodes
        nodes += 1
        if k == len(active):
            key = key_of(chosen)
            if best_cost is None or (cost, key) < (best_cost, best_key):
                best_cost, best_key, best_pick = cost, key, list(chosen)
            return
        if best_cost is not None and cost + bound(k) > best_cost + 1e-6:
            return
        o = active[k]
        w = o.gross_weight_kg
        for opt in per_order[o.id]:
            if any(load[s] + w > cap[s[0]] for s in opt.slots):
                continue
            new = [b for b in opt.bookings if b not in booked]
            ports = Counter((port[b[0]], b[1]) for b in new)
            if any(port_week[pw] + n > lam for pw, n in ports.items()):
                continue
            add = opt.cost_cents + sum(fixed[b[0]] for b in new)
            for s in opt.slots:
                load[s] += w
            booked.update(new)
            port_week.update(ports)
            chosen[k] = opt
            search(k + 1, cost + add)
            for s in opt.slots:
                load[s] -= w
            booked.difference_update(new)
            port_week.subtract(ports)
        chosen[k] = None

    search(0, 0)
    routes = {opt.order: opt.legs for opt in best_pick}
    bookings = sorted({b for opt in best_pick for b in opt.bookings})
    plan = ShipmentPlan(routes=dict(sorted(routes.items())),
                        bookings=tuple(Booking(e, t) for e, t in bookings),
                        unservable=hopeless)
    cost = plan_cost(instance, plan)
    assert best_cost is None or cost.total_cents == best_cost
    return OracleResult(plan, cost, nodes)


def options_by_order(instance: Instance, max_legs: int = 3) -> dict[str, list[RoutingOption]]:
    return {o.id: enumerate_options(instance, o, max_legs) for o in instance.orders}


__all__ = [
    "OracleLimitError", "OracleLimits", "OracleResult", "RoutingOption",
    "check_limits", "enumerate_options", "options_by_order", "solve_exact",
]
