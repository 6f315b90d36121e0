"""Domain types, plan validation and cost accounting.

Money is integer cents, weights are integer kilograms and volumes are CBM
with four decimals. Everything here is an immutable value object; the
functions are pure.
"""
from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Union


class InstanceError(ValueError):
    """An instance is structurally inconsistent."""


class PlanStructureError(ValueError):
    """A plan references orders or edges the instance does not have."""


class PlanCostError(ValueError):
    """The cost of a plan is undefined (e.g. FCL leg without a booking)."""


class LocationKind(str, enum.Enum):
    SUPPLY = "supply"
    IN_TRANSIT = "in_transit"
    DEMAND = "demand"


class ModeClass(str, enum.Enum):
    GROUND = "ground"
    AIR = "air"
    LCL = "lcl"
    FCL = "fcl"


@dataclass(frozen=True)
class Location:
    id: str
    kind: LocationKind
    label: str = ""


@dataclass(frozen=True)
class TransportMode:
    cls: ModeClass
    container_index: Optional[int] = None

    def __post_init__(self):
        if self.cls is ModeClass.FCL:
            if self.container_index is None or self.container_index < 1:
                raise InstanceError("FCL modes need a container index >= 1")
        elif self.container_index is not None:
            raise InstanceError(f"{self.cls.value} modes carry no container index")


@dataclass(frozen=True)
class PerKgRate:
    """Ground and air pricing. Air legs are charged on air-charge weight."""

    cents_per_kg: int


@dataclass(frozen=True)
class LclSpec:
    bunker_cents: int
    rate_cents_per_cbm: int


@dataclass(frozen=True)
class FclSpec:
    fixed_cost_cents: int
    variable_cents_per_order: int = 0


CostSpec = Union[PerKgRate, LclSpec, FclSpec]


@dataclass(frozen=True)
class Edge:
    id: str
    origin: str
    dest: str
    mode: TransportMode
    transit_weeks: int
    capacity_kg: Optional[int]  # None means unbounded
    cost: CostSpec

    @property
    def is_fcl(self) -> bool:
        return self.mode.cls is ModeClass.FCL

    @property
    def fixed_cost_cents(self) -> int:
        return self.cost.fixed_cost_cents if isinstance(self.cost, FclSpec) else 0


def _to_e4(x: float) -> int:
    return int(round(x * 10000))


def _div_half_up(num: int, den: int) -> int:
    return (num + den // 2) // den


@dataclass(frozen=True)
class ProductOrder:
    id: str
    origin: str
    destination: str
    gross_weight_kg: int
    volume_cbm: float
    air_charge_weight_kg: float
    ready_week: int
    earliest_week: int
    latest_week: int

    @property
    def volume_e4(self) -> int:
        return _to_e4(self.volume_cbm)

    @property
    def air_charge_e4(self) -> int:
        return _to_e4(self.air_charge_weight_kg)


@dataclass(frozen=True)
class Network:
    locations: tuple[Location, ...]
    edges: tuple[Edge, ...]

    @cached_property
    def location_by_id(self) -> dict[str, Location]:
        return {loc.id: loc for loc in self.locations}

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        out = defaultdict(list)
        for e in self.edges:
            out[e.origin].append(e)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[Edge, ...]]:
        inc = defaultdict(list)
        for e in self.edges:
            inc[e.dest].append(e)
        return {k: tuple(v) for k, v in inc.items()}

    def kind(self, loc_id: str) -> LocationKind:
        return self.location_by_id[loc_id].kind

    def fcl_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.is_fcl]


@dataclass(frozen=True)
class Instance:
    network: Network
    orders: tuple[ProductOrder, ...]
    horizon_weeks: int
    dwell_limit_weeks: int = 2
    booking_lead_weeks: int = 4
    bookings_per_port_week: int = 2
    meta: Mapping = field(default_factory=dict, compare=False)

    @cached_property
    def order_by_id(self) -> dict[str, ProductOrder]:
        return {o.id: o for o in self.orders}


@dataclass(frozen=True)
class Leg:
    edge: str
    depart_week: int


@dataclass(frozen=True)
class Booking:
    edge: str
    depart_week: int


@dataclass(frozen=True)
class ShipmentPlan:
    routes: Mapping[str, tuple[Leg, ...]] = field(default_factory=dict)
    bookings: tuple[Booking, ...] = ()
    # informational: orders the producer could not serve
    unservable: tuple[str, ...] = ()


@dataclass(frozen=True)
class CostBreakdown:
    fcl_fixed_cents: int = 0
    fcl_variable_cents: int = 0
    lcl_cents: int = 0
    air_cents: int = 0
    ground_cents: int = 0
    penalty_cents: int = 0

    @property
    def total_cents(self) -> int:
        return (self.fcl_fixed_cents + self.fcl_variable_cents + self.lcl_cents
                + self.air_cents + self.ground_cents + self.penalty_cents)

    def as_dict(self) -> dict:
        return {
            "fcl_fixed_cents": self.fcl_fixed_cents,
            "fcl_variable_cents": self.fcl_variable_cents,
            "lcl_cents": self.lcl_cents,
            "air_cents": self.air_cents,
            "ground_cents": self.ground_cents,
            "penalty_cents": self.penalty_cents,
            "total_cents": self.total_cents,
        }


@dataclass(frozen=True)
class Violation:
    family: str
    message: str
    order: Optional[str] = None
    edge: Optional[str] = None
    week: Optional[int] = None


# --------------------------------------------------------------------------
# structural checks


def validate_instance(instance: Instance) -> None:
    """Raise InstanceError if the instance breaks a structural invariant."""
    net = instance.network
    locs = net.location_by_id
    if len(locs) != len(net.locations):
        raise InstanceError("duplicate location ids")
    if len(net.edge_by_id) != len(net.edges):
        raise InstanceError("duplicate edge ids")
    for e in net.edges:
        if e.origin not in locs or e.dest not in locs:
            raise InstanceError(f"edge {e.id} has a dangling endpoint")
        if e.transit_weeks < 0:
            raise InstanceError(f"edge {e.id} has negative transit time")
        cls = e.mode.cls
        if cls is ModeClass.FCL:
            if not isinstance(e.cost, FclSpec) or e.capacity_kg is None:
                raise InstanceError(f"FCL edge {e.id} needs FclSpec and finite capacity")
        elif cls is ModeClass.LCL:
            if not isinstance(e.cost, LclSpec) or e.capacity_kg is not None:
                raise InstanceError(f"LCL edge {e.id} needs LclSpec and no capacity")
        else:
            if not isinstance(e.cost, PerKgRate):
                raise InstanceError(f"edge {e.id} needs a per-kg rate")
            if cls is ModeClass.AIR and e.capacity_kg is not None:
                raise InstanceError(f"air edge {e.id} must be uncapacitated")
        if e.capacity_kg is not None and e.capacity_kg <= 0:
            raise InstanceError(f"edge {e.id} has non-positive capacity")
        for v in vars(e.cost).values():
            if v < 0:
                raise InstanceError(f"edge {e.id} has a negative cost")
    if instance.horizon_weeks <= 0:
        raise InstanceError("horizon must be positive")
    if instance.horizon_weeks <= instance.booking_lead_weeks:
        raise InstanceError("horizon must exceed the booking lead")
    if instance.dwell_limit_weeks < 0 or instance.booking_lead_weeks < 0:
        raise InstanceError("dwell limit and booking lead must be nonnegative")
    if instance.bookings_per_port_week < 1:
        raise InstanceError("port booking cap must be positive")
    if len(instance.order_by_id) != len(instance.orders):
        raise InstanceError("duplicate order ids")
    for o in instance.orders:
        if locs.get(o.origin, None) is None or locs[o.origin].kind is not LocationKind.SUPPLY:
            raise InstanceError(f"order {o.id}: origin must be a supply location")
        if locs.get(o.destination, None) is None or locs[o.destination].kind is not LocationKind.DEMAND:
            raise InstanceError(f"order {o.id}: destination must be a demand location")
        if o.gross_weight_kg <= 0 or o.volume_cbm <= 0 or o.air_charge_weight_kg <= 0:
            raise InstanceError(f"order {o.id}: weight and volume must be positive")
        if not 0 <= o.ready_week < instance.horizon_weeks:
            raise InstanceError(f"order {o.id}: ready week outside the horizon")
        if o.earliest_week > o.latest_week or o.ready_week > o.latest_week:
            raise InstanceError(f"order {o.id}: inconsistent deadlines")


# --------------------------------------------------------------------------
# per-order reachability in the time-expanded network


def leg_allowed(instance: Instance, order: ProductOrder, edge: Edge, week: int) -> bool:
    """Single-order admissibility of departing on ``edge`` at ``week``."""
    if not 0 <= week < instance.horizon_weeks:
        return False
    if edge.capacity_kg is not None and order.gross_weight_kg > edge.capacity_kg:
        return False
    if edge.is_fcl and week < instance.booking_lead_weeks:
        return False
    return True


def feasible_legs(instance: Instance, order: ProductOrder, strict: bool = True) -> set[tuple[str, int]]:
    """Every (edge id, departure week) lying on some route the order could
    take on its own: right endpoints, dwell within the limit, departures
    inside the horizon, and (when ``strict``) arrival inside the deadline
    window. Capacity sharing and port caps between orders are ignored.
    """
    net = instance.network
    H = instance.horizon_weeks
    rho = instance.dwell_limit_weeks
    memo: dict[tuple[str, int], bool] = {}
    good: set[tuple[str, int]] = set()

    def arrival_ok(dest: str, week: int) -> Optional[bool]:
        # None: continue from an in-transit node
        if dest == order.destination:
            return not strict or order.earliest_week <= week <= order.latest_week
        if net.kind(dest) is LocationKind.IN_TRANSIT:
            return None
        return False

    leg_memo: dict[tuple[str, int], bool] = {}

    def leg_good(edge: Edge, t: int) -> bool:
        key = (edge.id, t)
        if key in leg_memo:
            return leg_memo[key]
        ok = False
        if leg_allowed(instance, order, edge, t):
            s = t + edge.transit_weeks
            ok = arrival_ok(edge.dest, s)
            if ok is None:
                ok = state_good(edge.dest, s)
        if ok:
            good.add(key)
        leg_memo[key] = ok
        return ok

    def state_good(node: str, s: int) -> bool:
        key = (node, s)
        if key in memo:
            return memo[key]
        memo[key] = False  # guards zero-transit cycles
        res = False
        for edge in net.out_edges.get(node, ()):
            for t in range(s, min(s + rho, H - 1) + 1):
                if leg_good(edge, t):
                    res = True
        memo[key] = res
        return res

    for edge in net.out_edges.get(order.origin, ()):
        for t in range(order.ready_week, H):
            leg_good(edge, t)
    return good


def is_servable(instance: Instance, order: ProductOrder) -> bool:
    return bool(feasible_legs(instance, order))


# --------------------------------------------------------------------------
# cost accounting


def leg_cost_cents(edge: Edge, order: ProductOrder) -> int:
    """Per-order variable cost of one leg (no FCL fixed charge)."""
    c = edge.cost
    if isinstance(c, FclSpec):
        return c.variable_cents_per_order
    if isinstance(c, LclSpec):
        return c.bunker_cents + _div_half_up(c.rate_cents_per_cbm * order.volume_e4, 10000)
    if edge.mode.cls is ModeClass.AIR:
        return _div_half_up(c.cents_per_kg * order.air_charge_e4, 10000)
    return c.cents_per_kg * order.gross_weight_kg


def _lookup_edge(instance: Instance, edge_id: str) -> Edge:
    try:
        return instance.network.edge_by_id[edge_id]
    except KeyError:
        raise PlanStructureError(f"unknown edge {edge_id!r}") from None


def _check_references(instance: Instance, plan: ShipmentPlan) -> None:
    for oid, legs in plan.routes.items():
        if oid not in instance.order_by_id:
            raise PlanStructureError(f"unknown order {oid!r}")
        for leg in legs:
            _lookup_edge(instance, leg.edge)
    for b in plan.bookings:
        _lookup_edge(instance, b.edge)


def plan_cost(instance: Instance, plan: ShipmentPlan) -> CostBreakdown:
    _check_references(instance, plan)
    booked = {(b.edge, b.depart_week) for b in plan.bookings}
    sums = Counter()
    for oid, legs in plan.routes.items():
        order = instance.order_by_id[oid]
        for leg in legs:
            edge = instance.network.edge_by_id[leg.edge]
            cls = edge.mode.cls
            if cls is ModeClass.FCL and (leg.edge, leg.depart_week) not in booked:
                raise PlanCostError(
                    f"order {oid} uses FCL {leg.edge} at week {leg.depart_week} without a booking")
            key = "fcl_variable" if cls is ModeClass.FCL else cls.value
            sums[key] += leg_cost_cents(edge, order)
    fixed = sum(instance.network.edge_by_id[b.edge].fixed_cost_cents for b in plan.bookings)
    return CostBreakdown(
        fcl_fixed_cents=fixed,
        fcl_variable_cents=sums["fcl_variable"],
        lcl_cents=sums["lcl"],
        air_cents=sums["air"],
        ground_cents=sums["ground"],
    )


def arrival_week(instance: Instance, plan: ShipmentPlan, order_id: str) -> Optional[int]:
    legs = plan.routes.get(order_id)
    if not legs:
        return None
    last = legs[-1]
    return last.depart_week + _lookup_edge(instance, last.edge).transit_weeks


def heuristic_error(cost_heur: int, cost_ref: int) -> float:
    """Relative excess of a heuristic objective over a reference objective."""
    if cost_ref <= 0:
        raise ValueError("heuristic error is undefined for a non-positive reference cost")
    return (cost_heur - cost_ref) / cost_ref


def route_mode(instance: Instance, legs: Iterable[Leg]) -> str:
    """Classify a route by its main-haul leg: 'fcl', 'lcl', 'air' or 'ground'."""
    classes = {instance.network.edge_by_id[leg.edge].mode.cls for leg in legs}
    for cls in (ModeClass.FCL, ModeClass.LCL, ModeClass.AIR):
        if cls in classes:
            return cls.value
    return ModeClass.GROUND.value


# --------------------------------------------------------------------------
# validation


def validate_plan(instance: Instance, plan: ShipmentPlan) -> list[Violation]:
    """List every constraint the plan breaks; an empty list means feasible.

    Orders that have no individually feasible route at all may be left
    unrouted; every other order must be delivered.
    """
    _check_references(instance, plan)
    net = instance.network
    H = instance.horizon_weeks
    rho = instance.dwell_limit_weeks
    out: list[Violation] = []
    booked = Counter((b.edge, b.depart_week) for b in plan.bookings)
    load: Counter = Counter()

    for oid, legs in plan.routes.items():
        if not legs:
            continue
        order = instance.order_by_id[oid]
        prev_arrival = None
        prev_dest = order.origin
        for k, leg in enumerate(legs):
            edge = net.edge_by_id[leg.edge]
            t = leg.depart_week
            if edge.origin != prev_dest:
                out.append(Violation("route", f"leg {k} departs {edge.origin}, expected {prev_dest}",
                                     oid, edge.id, t))
            if k > 0 and net.kind(edge.origin) is not LocationKind.IN_TRANSIT:
                out.append(Violation("route", f"intermediate stop {edge.origin} is not in-transit",
                                     oid, edge.id, t))
            if not 0 <= t < H:
                out.append(Violation("horizon", "departure outside the planning horizon", oid, edge.id, t))
            if k == 0 and t < order.ready_week:
                out.append(Violation("availability", f"departs before ready week {order.ready_week}",
                                     oid, edge.id, t))
            if prev_arrival is not None:
                dwell = t - prev_arrival
                if dwell < 0:
                    out.append(Violation("timing", f"departs {-dwell} week(s) before arriving",
                                         oid, edge.id, t))
                elif dwell > rho:
                    out.append(Violation("dwell", f"waits {dwell} weeks at {edge.origin} (limit {rho})",
                                         oid, edge.id, t))
            if edge.is_fcl and booked[(edge.id, t)] == 0:
                out.append(Violation("fcl_booking", "FCL leg without a booking", oid, edge.id, t))
            if edge.capacity_kg is not None:
                load[(edge.id, t)] += order.gross_weight_kg
            prev_arrival = t + edge.transit_weeks
            prev_dest = edge.dest
        if prev_dest != order.destination:
            out.append(Violation("route", f"route ends at {prev_dest}, not {order.destination}", oid))
        elif not order.earliest_week <= prev_arrival <= order.latest_week:
            out.append(Violation(
                "deadline",
                f"arrives week {prev_arrival}, window [{order.earliest_week}, {order.latest_week}]",
                oid, week=prev_arrival))

    for (eid, t), kg in sorted(load.items()):
        cap = net.edge_by_id[eid].capacity_kg
        if kg > cap:
            out.append(Violation("capacity", f"{kg} kg exceeds capacity {cap} kg", edge=eid, week=t))

    port_week: Counter = Counter()
    for (eid, t), n in booked.items():
        edge = net.edge_by_id[eid]
        if not edge.is_fcl:
            out.append(Violation("booking_mode", "booking on a non-FCL edge", edge=eid, week=t))
            continue
        if n > 1:
            out.append(Violation("duplicate_booking", f"booked {n} times", edge=eid, week=t))
        if not 0 <= t < H:
            out.append(Violation("horizon", "booking outside the planning horizon", edge=eid, week=t))
        if t < instance.booking_lead_weeks:
            out.append(Violation("booking_lead",
                                 f"week {t} is inside the {instance.booking_lead_weeks}-week booking lead",
                                 edge=eid, week=t))
        port_week[(edge.origin, t)] += 1
    for (port, t), n in sorted(port_week.items()):
        if n > instance.bookings_per_port_week:
            out.append(Violation("port_cap",
                                 f"{n} FCL bookings at {port} (limit {instance.bookings_per_port_week})",
                                 week=t))

    for order in instance.orders:
        if not plan.routes.get(order.id) and is_servable(instance, order):
            out.append(Violation("demand", "servable order is not delivered", order.id))
    return out
