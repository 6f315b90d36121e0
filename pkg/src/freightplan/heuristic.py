"""Knapsack-based rolling-horizon heuristic for FCL booking.

Outline:

1. Per order, the departure-week windows for air, LCL and FCL main-haul
   legs, and the cheapest route in each induced network (air only,
   ground+LCL, ground+one FCL container edge).
2. The saving of putting an order into container ``m`` instead of its
   cheapest alternative, in whole dollars, is its knapsack value.
3. Sweep the FCL-eligible weeks. At each week solve one knapsack per
   bookable container, take the best ``value - fixed cost``, and look ahead
   week by week (charging for anchor items that drop out of their FCL
   window) while the adjusted value keeps strictly increasing. Book at the
   best week, then re-solve the same week for further containers.
4. Whatever is left ships by the cheaper of LCL and air.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .knapsack import KnapsackResult, knapsack
from .model import (
    Booking, CostBreakdown, Edge, Instance, Leg, ModeClass, ProductOrder, ShipmentPlan,
    leg_cost_cents, plan_cost,
)
from .shortest_path import dijkstra

log = logging.getLogger(__name__)

Window = Optional[tuple[int, int]]  # inclusive week range, None when empty


class HeuristicConfigError(ValueError):
    """The network does not fit the heuristic's assumptions."""


@dataclass(frozen=True)
class TransitTimes:
    air: Optional[int]
    ocean: Optional[int]
    ground: Optional[int]


@dataclass(frozen=True)
class TimeRanges:
    air: Window
    lcl: Window
    fcl: Window


@dataclass(frozen=True)
class RouteCosts:
    air: Optional[tuple[int, tuple[Edge, ...]]]
    lcl: Optional[tuple[int, tuple[Edge, ...]]]
    fcl: dict[str, tuple[int, tuple[Edge, ...]]]  # keyed by FCL edge id


@dataclass
class Commit:
    edge: str
    week: int
    orders: tuple[str, ...]
    value_dollars: int
    anchor_week: int


@dataclass
class HeuristicResult:
    plan: ShipmentPlan
    cost: CostBreakdown
    unservable: tuple[str, ...]
    commits: list[Commit] = field(default_factory=list)


def _window(lo: int, hi: int) -> Window:
    return (lo, hi) if lo <= hi else None


def _in(window: Window, t: int) -> bool:
    return window is not None and window[0] <= t <= window[1]


def transit_times(instance: Instance) -> TransitTimes:
    """Common transit time of each mode family; error if a family varies."""
    fam: dict[str, set[int]] = {"air": set(), "ocean": set(), "ground": set()}
    for e in instance.network.edges:
        key = {ModeClass.AIR: "air", ModeClass.GROUND: "ground"}.get(e.mode.cls, "ocean")
        fam[key].add(e.transit_weeks)
    for key, vals in fam.items():
        if len(vals) > 1:
            raise HeuristicConfigError(
                f"{key} transit times differ across the network ({sorted(vals)}); "
                "per-edge time windows are not supported")
    return TransitTimes(*(next(iter(fam[k]), None) for k in ("air", "ocean", "ground")))


def time_ranges(instance: Instance, order: ProductOrder, times: TransitTimes | None = None) -> TimeRanges:
    """Main-haul departure windows per mode family.

    Besides availability and deadlines, windows are cut so every leg of
    the route departs inside the horizon.
    """
    times = times or transit_times(instance)
    H = instance.horizon_weeks
    a, xi, Xi = order.ready_week, order.earliest_week, order.latest_week
    rho = instance.dwell_limit_weeks
    air = None
    if times.air is not None:
        air = _window(max(a, xi - times.air), min(Xi - times.air, H - 1))
    lcl = fcl = None
    if times.ocean is not None and times.ground is not None:
        to, tg = times.ocean, times.ground
        lo = max(a + tg, xi - to - tg - rho)
        hi = min(Xi - to - tg, H - 1 - to)
        if xi - tg <= H - 1:  # last mile must leave by the final week
            lcl = _window(lo, hi)
            fcl = _window(max(lo, instance.booking_lead_weeks), hi)
    return TimeRanges(air, lcl, fcl)


def _induced(instance: Instance, keep) -> dict[str, list[Edge]]:
    adj: dict[str, list[Edge]] = {}
    for e in instance.network.edges:
        if keep(e):
            adj.setdefault(e.origin, []).append(e)
    return adj


def route_costs(instance: Instance, order: ProductOrder, graphs: dict | None = None) -> RouteCosts:
    """Cheapest air, LCL and per-container FCL routes (fixed charge excluded)."""
    graphs = graphs or _induced_graphs(instance)

    def run(adj):
        res = dijkstra(adj, order.origin, order.destination,
                       weight=lambda e: leg_cost_cents(e, order), head=lambda e: e.dest)
        return None if res is None else (res[0], tuple(res[1]))

    air = run(graphs["air"])
    lcl = run(graphs["lcl"])
    fcl = {}
    for eid, adj in graphs["fcl"].items():
        res = run(adj)
        if res is not None and any(e.id == eid for e in res[1]):
            fcl[eid] = res
    for name, res in (("air", air), ("lcl", lcl), *(("fcl", r) for r in fcl.values())):
        if res is not None:
            _check_shape(name, res[1])
    return RouteCosts(air, lcl, fcl)


def _induced_graphs(instance: Instance) -> dict:
    ground = ModeClass.GROUND
    return {
        "air": _induced(instance, lambda e: e.mode.cls is ModeClass.AIR),
        "lcl": _induced(instance, lambda e: e.mode.cls in (ground, ModeClass.LCL)),
        "fcl": {m.id: _induced(instance, lambda e, m=m: e.mode.cls is ground or e.id == m.id)
                for m in instance.network.fcl_edges()},
    }


def _check_shape(name: str, path: tuple[Edge, ...]) -> None:
    classes = [e.mode.cls for e in path]
    ok = (classes == [ModeClass.AIR] if name == "air"
          else len(classes) == 3 and classes[0] is ModeClass.GROUND and classes[2] is ModeClass.GROUND)
    if not ok:
        raise HeuristicConfigError(f"unsupported {name} route shape: {[e.id for e in path]}")


def item_value(lcl_cents: Optional[int], air_cents: Optional[int], fcl_cents: Optional[int]) -> Optional[int]:
    """Whole-dollar saving of the FCL route over the cheapest alternative.

    None when the order has no FCL route or no alternative to compare with.
    """
    alts = [c for c in (lcl_cents, air_cents) if c is not None]
    if fcl_cents is None or not alts:
        return None
    return (min(alts) - fcl_cents) // 100


def _schedule(path: tuple[Edge, ...], main: int, week: int, order: ProductOrder) -> tuple[Leg, ...]:
    """Legs for a route whose main-haul leg (index ``main``) departs ``week``.

    Legs before the main haul run back to back; the wait needed to respect
    the earliest delivery week is spent at the first stop after it.
    """
    deps = [0] * len(path)
    deps[main] = week
    for k in range(main - 1, -1, -1):
        deps[k] = deps[k + 1] - path[k].transit_weeks
    t = week + path[main].transit_weeks
    if main + 1 < len(path):
        natural = t + sum(e.transit_weeks for e in path[main + 1:])
        t += max(0, order.earliest_week - natural)
        for k in range(main + 1, len(path)):
            deps[k] = t
            t += path[k].transit_weeks
    return tuple(Leg(e.id, d) for e, d in zip(path, deps))


def _main_index(path: tuple[Edge, ...]) -> int:
    return 0 if len(path) == 1 else 1


class _Sweep:
    def __init__(self, instance: Instance, ranges, costs, values, fcl_edges):
        self.inst = instance
        self.ranges = ranges
        self.costs = costs
        self.values = values  # order id -> {fcl edge id: dollars > 0}
        self.fcl = fcl_edges  # sorted by tie-break key
        self.placed: dict[str, tuple[str, int]] = {}
        self.booked: set[tuple[str, int]] = set()
        self.port_count: Counter = Counter()
        self.commits: list[Commit] = []
        self.weights = {o.id: o.gross_weight_kg for o in instance.orders}

    def available(self, m: Edge, t: int) -> bool:
        return ((m.id, t) not in self.booked
                and self.port_count[(m.origin, t)] < self.inst.bookings_per_port_week)

    def best(self, t: int) -> Optional[tuple[int, Edge, KnapsackResult]]:
        """Best (o_m - f in cents, container, knapsack) at week t."""
        best = None
        for m in self.fcl:
            if not self.available(m, t):
                continue
            items = [(oid, self.weights[oid], vals[m.id])
                     for oid, vals in self.values.items()
                     if m.id in vals and oid not in self.placed and _in(self.ranges[oid].fcl, t)]
            if not items:
                continue
            res = knapsack(items, m.capacity_kg)
            net = res.value * 100 - m.fixed_cost_cents
            if best is None or net > best[0]:
                best = (net, m, res)
        return best

    def run(self, lo: int, hi: int) -> None:
        t0 = lo
        while t0 <= hi:
            cand = self.best(t0)
            if cand is None or cand[0] <= 0:
                t0 += 1
                continue
            net0, m0, res0 = cand
            anchor = {oid: self.values[oid][m0.id] for oid in res0.selected}
            choice, week, prev = cand, t0, net0
            t = t0 + 1
            while t <= hi:
                nxt = self.best(t)
                if nxt is None:
                    break
                lost = sum(v for oid, v in anchor.items() if not _in(self.ranges[oid].fcl, t))
                score = nxt[0] - lost * 100
                if score <= prev:
                    break
                choice, week, prev = nxt, t, score
                t += 1
            self.commit(choice[1], week, choice[2], t0)

    def commit(self, m: Edge, t: int, res: KnapsackResult, anchor_week: int) -> None:
        self.booked.add((m.id, t))
        self.port_count[(m.origin, t)] += 1
        for oid in res.selected:
            self.placed[oid] = (m.id, t)
        self.commits.append(Commit(m.id, t, res.selected, res.value, anchor_week))
        log.debug("book %s at week %d for %d orders (value $%d)", m.id, t, len(res.selected), res.value)


def plan(instance: Instance, fallback_week: str = "latest", threads: int = 1) -> HeuristicResult:
    """Run the heuristic. Output is identical for any ``threads`` value."""
    if fallback_week not in ("latest", "earliest"):
        raise ValueError("fallback_week must be 'latest' or 'earliest'")
    times = transit_times(instance)
    graphs = _induced_graphs(instance)
    orders = instance.orders
    ranges = {o.id: time_ranges(instance, o, times) for o in orders}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cost_list = list(pool.map(lambda o: route_costs(instance, o, graphs), orders))
    else:
        cost_list = [route_costs(instance, o, graphs) for o in orders]
    costs = dict(zip((o.id for o in orders), cost_list))

    def alt(oid, kind):
        rc = getattr(costs[oid], kind)
        return rc[0] if rc is not None and getattr(ranges[oid], kind) is not None else None

    values: dict[str, dict[str, int]] = {}
    for o in orders:
        if ranges[o.id].fcl is None:
            continue
        vals = {}
        for mid, (fc, _) in costs[o.id].fcl.items():
            v = item_value(alt(o.id, "lcl"), alt(o.id, "air"), fc)
            if v is not None and v > 0:
                vals[mid] = v
        if vals:
            values[o.id] = vals

    fcl_edges = sorted(instance.network.fcl_edges(),
                       key=lambda e: (e.origin, e.dest, e.mode.container_index, e.id))
    sweep = _Sweep(instance, ranges, costs, values, fcl_edges)
    if fcl_edges and times.ocean is not None:
        sweep.run(instance.booking_lead_weeks, instance.horizon_weeks - 1 - times.ocean)

    edge_by_id = instance.network.edge_by_id
    routes: dict[str, tuple[Leg, ...]] = {}
    unservable = []
    for o in orders:
        if o.id not in sweep.placed and not _fallback_options(o.id, alt, ranges, fallback_week):
            _rescue_fcl(sweep, o, costs[o.id], ranges[o.id], edge_by_id)
    for o in orders:
        if o.id in sweep.placed:
            mid, t = sweep.placed[o.id]
            path = costs[o.id].fcl[mid][1]
            routes[o.id] = _schedule(path, _main_index(path), t, o)
            continue
        options = _fallback_options(o.id, alt, ranges, fallback_week)
        if options:
            c, kind, t = min(options, key=lambda x: x[0])
            path = getattr(costs[o.id], kind)[1]
            routes[o.id] = _schedule(path, _main_index(path), t, o)
        else:
            unservable.append(o.id)

    bookings = tuple(Booking(c.edge, c.week) for c in sweep.commits)
    shipment = ShipmentPlan({oid: routes[oid] for oid in (o.id for o in orders) if oid in routes},
                            bookings, tuple(unservable))
    return HeuristicResult(shipment, plan_cost(instance, shipment), tuple(unservable), sweep.commits)


def _fallback_options(oid, alt, ranges, fallback_week):
    options = []
    for kind in ("lcl", "air"):
        c = alt(oid, kind)
        if c is not None:
            win = getattr(ranges[oid], kind)
            options.append((c, kind, win[1] if fallback_week == "latest" else win[0]))
    return options


def _rescue_fcl(sweep: _Sweep, order: ProductOrder, rc: RouteCosts, rng: TimeRanges, edge_by_id) -> bool:
    """Place an order that only FCL can carry: join a booked container with
    room, else book the cheapest free container slot."""
    if rng.fcl is None or not rc.fcl:
        return False
    load = Counter()
    for oid, key in sweep.placed.items():
        load[key] += sweep.weights[oid]
    w = order.gross_weight_kg
    lanes = sorted(rc.fcl.items(), key=lambda kv: (kv[1][0], kv[0]))
    for mid, _ in lanes:
        m = edge_by_id[mid]
        for t in range(rng.fcl[0], rng.fcl[1] + 1):
            if (mid, t) in sweep.booked and load[(mid, t)] + w <= m.capacity_kg:
                sweep.placed[order.id] = (mid, t)
                for c in sweep.commits:
                    if (c.edge, c.week) == (mid, t):
                        c.orders = c.orders + (order.id,)
                return True
    for mid, _ in lanes:
        m = edge_by_id[mid]
        for t in range(rng.fcl[0], rng.fcl[1] + 1):
            if sweep.available(m, t) and w <= m.capacity_kg:
                sweep.commit(m, t, KnapsackResult((order.id,), 0, w), t)
                return True
    return False
