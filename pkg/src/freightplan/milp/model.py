"""Solver-neutral integer program for the time-expanded flow model.

Row families (name prefix, one row per ...):

    cap        capacitated (edge, week) with at least one x variable
    supply     order: departures from the origin <= 1
    flow_in    (in-transit node, order, week) with departures: each
               departure at t needs an arrival in [t - rho, t]
    flow_out   (in-transit node, order, week) with arrivals: each arrival
               at s needs a departure in [s, s + rho]
    flow_bal   (in-transit node, order) with variables: total in = total out
    inv        (in-transit node, order, week), inventory mode
    dwell      (in-transit node, order), inventory mode: sum of r <= rho
    demand     order: arrivals at the destination = 1
    fcl_use    FCL x variable: x <= z
    port_cap   (port with FCL departures, week): sum of z <= lambda
    arr_lb     x into the destination: (t + tau) x - arr <= 0
    arr_ub     x into the destination: arr + M x <= t + tau + M
    window_lo  order: arr (+ dev_early) >= earliest
    window_hi  order: arr (- dev_late) <= latest
    svc_late   order, service-level mode: dev_late - gamma ind <= 0
    svc_level  service-level mode: sum of ind <= floor(kappa |P|)
    sym        symmetry mode: z(k) - z(k+1) >= 0 per lane, week and k

The original in-transit rows implement a dwell-window reading of the
second flow-balance family; the inventory rows are the alternative
formulation. Both admit the same plans.

x variables are created only for (edge, week) pairs on some route the
order could take by itself (see ``feasible_legs``); orders without any
such route are left out of the model. Release dates are enforced by this
elision rather than by explicit rows.
"""
from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from ..model import (
    Instance, LocationKind, ShipmentPlan, feasible_legs, leg_cost_cents, validate_plan,
)

Number = Union[int, float]


class ModelConfigError(ValueError):
    """Inconsistent variant configuration."""


class DeadlineMode(str, enum.Enum):
    STRICT = "strict"
    PENALIZED = "penalized"
    SERVICE_LEVEL = "service-level"


class InTransitMode(str, enum.Enum):
    ORIGINAL = "original"
    INVENTORY = "inventory"


@dataclass(frozen=True)
class VariantConfig:
    deadline_mode: DeadlineMode = DeadlineMode.STRICT
    in_transit_mode: InTransitMode = InTransitMode.INVENTORY
    symmetry_breaking: bool = False
    big_m: Optional[int] = None  # default: horizon + max transit + 1
    gamma: Optional[int] = None  # weeks of lateness allowed for a flagged order
    kappa: Optional[float] = None  # share of orders that may be flagged
    penalty_cents_per_week: int = 1

    def __post_init__(self):
        for name, enum_cls in (("deadline_mode", DeadlineMode), ("in_transit_mode", InTransitMode)):
            value = getattr(self, name)
            if not isinstance(value, enum_cls):
                try:
                    object.__setattr__(self, name, enum_cls(value))
                except ValueError:
                    raise ModelConfigError(f"unknown {name} {value!r}") from None
        if self.deadline_mode is DeadlineMode.SERVICE_LEVEL:
            if self.gamma is None or self.kappa is None:
                raise ModelConfigError("service-level mode needs gamma and kappa")
            if not (isinstance(self.gamma, int) and self.gamma > 0):
                raise ModelConfigError("gamma must be a positive integer")
            if not 0 < self.kappa <= 1:
                raise ModelConfigError("kappa must lie in (0, 1]")
        elif self.gamma is not None or self.kappa is not None:
            raise ModelConfigError("gamma and kappa only apply to service-level mode")
        if self.penalty_cents_per_week < 0:
            raise ModelConfigError("penalty weight must be nonnegative")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # binary | integer | continuous
    lb: Optional[Number] = 0  # None: -inf
    ub: Optional[Number] = None  # None: +inf


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: Mapping[str, Number]
    sense: str  # <=, >=, =
    rhs: Number


@dataclass
class ModelDescription:
    name: str = "freight"
    variables: dict[str, Variable] = field(default_factory=dict)
    constraints: dict[str, Constraint] = field(default_factory=dict)
    objective: dict[str, Number] = field(default_factory=dict)
    sense: str = "minimize"
    # set by build_model; not part of the written file
    instance: Optional[Instance] = field(default=None, compare=False, repr=False)
    variant: Optional[VariantConfig] = field(default=None, compare=False, repr=False)

    def add_var(self, name: str, kind: str, lb: Optional[Number] = 0, ub: Optional[Number] = None,
                cost: Number = 0) -> str:
        if name in self.variables:
            raise ValueError(f"duplicate variable {name}")
        self.variables[name] = Variable(name, kind, lb, ub)
        if cost:
            self.objective[name] = cost
        return name

    def add_row(self, name: str, coeffs: Mapping[str, Number], sense: str, rhs: Number) -> None:
        if name in self.constraints:
            raise ValueError(f"duplicate constraint {name}")
        clean = {}
        for v, a in coeffs.items():
            if a:
                clean[v] = clean.get(v, 0) + a
        clean = {v: a for v, a in clean.items() if a}
        if not clean:
            raise ValueError(f"constraint {name} has no terms")
        self.constraints[name] = Constraint(name, clean, sense, rhs)

    def check(self) -> None:
        """Raise ValueError if a row mentions an undeclared variable."""
        for row in self.constraints.values():
            if row.sense not in ("<=", ">=", "="):
                raise ValueError(f"row {row.name}: bad sense {row.sense!r}")
            missing = [v for v in row.coeffs if v not in self.variables]
            if missing:
                raise ValueError(f"row {row.name} uses undeclared {missing[0]}")
        missing = [v for v in self.objective if v not in self.variables]
        if missing:
            raise ValueError(f"objective uses undeclared {missing[0]}")

    def family_counts(self) -> dict[str, int]:
        out: dict[str, int] = defaultdict(int)
        for name in self.constraints:
            out[name.split("(", 1)[0]] += 1
        return dict(out)


# --------------------------------------------------------------------------
# naming

def x_name(edge: str, order: str, t: int) -> str:
    return f"x({edge},{order},{t})"


def z_name(edge: str, t: int) -> str:
    return f"z({edge},{t})"


def arr_name(order: str) -> str:
    return f"arr({order})"


def r_name(node: str, order: str, t: int) -> str:
    return f"r({node},{order},{t})"


# --------------------------------------------------------------------------
# assembly

def default_big_m(instance: Instance) -> int:
    tau = max((e.transit_weeks for e in instance.network.edges), default=0)
    return instance.horizon_weeks + tau + 1


def model_orders(instance: Instance, variant: VariantConfig) -> dict[str, set[tuple[str, int]]]:
    """Per included order, the (edge, week) pairs that get an x variable."""
    strict = variant.deadline_mode is DeadlineMode.STRICT
    out = {}
    for o in instance.orders:
        legs = feasible_legs(instance, o, strict=strict)
        if legs:
            out[o.id] = legs
    return out


def build_model(instance: Instance, variant: VariantConfig = VariantConfig()) -> ModelDescription:
    net = instance.network
    H = instance.horizon_weeks
    rho = instance.dwell_limit_weeks
    tau_max = max((e.transit_weeks for e in net.edges), default=0)
    big_m = variant.big_m if variant.big_m is not None else default_big_m(instance)
    if big_m < H + tau_max:
        raise ModelConfigError(f"big_m must be at least {H + tau_max}")
    m = ModelDescription(instance=instance, variant=variant)
    legs = model_orders(instance, variant)
    orders = [o for o in instance.orders if o.id in legs]
    transit_nodes = [loc.id for loc in net.locations if loc.kind is LocationKind.IN_TRANSIT]

    # variables
    for o in orders:
        for eid, t in sorted(legs[o.id]):
            edge = net.edge_by_id[eid]
            m.add_var(x_name(eid, o.id, t), "binary", 0, 1, cost=leg_cost_cents(edge, o))
    fcl = sorted(net.fcl_edges(), key=lambda e: (e.origin, e.dest, e.mode.container_index, e.id))
    for e in fcl:
        for t in range(H):
            ub = 0 if t < instance.booking_lead_weeks else 1
            m.add_var(z_name(e.id, t), "binary", 0, ub, cost=e.fixed_cost_cents)
    for o in orders:
        m.add_var(arr_name(o.id), "integer", 0, H - 1 + tau_max)
    pen = variant.penalty_cents_per_week
    relaxed = variant.deadline_mode is not DeadlineMode.STRICT
    if relaxed:
        for o in orders:
            m.add_var(f"dev_early({o.id})", "integer", 0, None, cost=pen)
            m.add_var(f"dev_late({o.id})", "integer", 0, None, cost=pen)
    if variant.deadline_mode is DeadlineMode.SERVICE_LEVEL:
        for o in orders:
            m.add_var(f"ind({o.id})", "binary", 0, 1)
    inventory = variant.in_transit_mode is InTransitMode.INVENTORY
    if inventory:
        for i in transit_nodes:
            for o in orders:
                for t in range(H):
                    m.add_var(r_name(i, o.id, t), "continuous", 0, None if t < H - 1 else 0)

    # index x variables per order: node -> week -> names
    cap_rows: dict[tuple[str, int], dict[str, int]] = defaultdict(dict)
    out_of: dict[str, dict[str, dict[int, list[str]]]] = {}
    into: dict[str, dict[str, dict[int, list[str]]]] = {}
    for o in orders:
        dep = out_of[o.id] = defaultdict(lambda: defaultdict(list))
        arr = into[o.id] = defaultdict(lambda: defaultdict(list))
        for eid, t in sorted(legs[o.id]):
            edge = net.edge_by_id[eid]
            name = x_name(eid, o.id, t)
            if edge.capacity_kg is not None:
                cap_rows[(eid, t)][name] = o.gross_weight_kg
            dep[edge.origin][t].append(name)
            arr[edge.dest][t + edge.transit_weeks].append(name)

    for (eid, t), coeffs in sorted(cap_rows.items()):
        m.add_row(f"cap({eid},{t})", coeffs, "<=", net.edge_by_id[eid].capacity_kg)

    for o in orders:
        supply = [n for t in sorted(out_of[o.id][o.origin]) for n in out_of[o.id][o.origin][t]]
        m.add_row(f"supply({o.id})", dict.fromkeys(supply, 1), "<=", 1)

    for i in transit_nodes:
        for o in orders:
            deps = out_of[o.id].get(i, {})
            arrs = into[o.id].get(i, {})
            if inventory:
                for t in range(H):
                    coeffs = dict.fromkeys(deps.get(t, ()), 1)
                    coeffs[r_name(i, o.id, t)] = 1
                    if t > 0:
                        coeffs[r_name(i, o.id, t - 1)] = -1
                    for n in arrs.get(t, ()):
                        coeffs[n] = coeffs.get(n, 0) - 1
                    m.add_row(f"inv({i},{o.id},{t})", coeffs, "=", 0)
                m.add_row(f"dwell({i},{o.id})",
                          {r_name(i, o.id, t): 1 for t in range(H)}, "<=", rho)
                continue
            for t, ns in sorted(deps.items()):
                coeffs = dict.fromkeys(ns, 1)
                for s in range(t - rho, t + 1):
                    for n in arrs.get(s, ()):
                        coeffs[n] = coeffs.get(n, 0) - 1
                m.add_row(f"flow_in({i},{o.id},{t})", coeffs, "<=", 0)
            for s, ns in sorted(arrs.items()):
                coeffs = dict.fromkeys(ns, 1)
                for t in range(s, s + rho + 1):
                    for n in deps.get(t, ()):
                        coeffs[n] = coeffs.get(n, 0) - 1
                m.add_row(f"flow_out({i},{o.id},{s})", coeffs, "<=", 0)
            if deps or arrs:
                coeffs = {}
                for ns in arrs.values():
                    for n in ns:
                        coeffs[n] = coeffs.get(n, 0) + 1
                for ns in deps.values():
                    for n in ns:
                        coeffs[n] = coeffs.get(n, 0) - 1
                m.add_row(f"flow_bal({i},{o.id})", coeffs, "=", 0)

    for o in orders:
        at_dest = into[o.id].get(o.destination, {})
        dest_x = [(n, s) for s in sorted(at_dest) for n in at_dest[s]]
        m.add_row(f"demand({o.id})", {n: 1 for n, _ in dest_x}, "=", 1)
        a = arr_name(o.id)
        for n, s in dest_x:
            m.add_row(f"arr_lb({n})", {n: s, a: -1}, "<=", 0)
            m.add_row(f"arr_ub({n})", {a: 1, n: big_m}, "<=", s + big_m)
        if relaxed:
            m.add_row(f"window_lo({o.id})", {a: 1, f"dev_early({o.id})": 1}, ">=", o.earliest_week)
            m.add_row(f"window_hi({o.id})", {a: 1, f"dev_late({o.id})": -1}, "<=", o.latest_week)
        else:
            m.add_row(f"window_lo({o.id})", {a: 1}, ">=", o.earliest_week)
            m.add_row(f"window_hi({o.id})", {a: 1}, "<=", o.latest_week)
        if variant.deadline_mode is DeadlineMode.SERVICE_LEVEL:
            m.add_row(f"svc_late({o.id})", {f"dev_late({o.id})": 1, f"ind({o.id})": -variant.gamma},
                      "<=", 0)
    if variant.deadline_mode is DeadlineMode.SERVICE_LEVEL and orders:
        m.add_row("svc_level", {f"ind({o.id})": 1 for o in orders}, "<=",
                  math.floor(variant.kappa * len(orders) + 1e-9))

    for o in orders:
        for eid, t in sorted(legs[o.id]):
            if net.edge_by_id[eid].is_fcl:
                n = x_name(eid, o.id, t)
                m.add_row(f"fcl_use({n})", {n: 1, z_name(eid, t): -1}, "<=", 0)

    ports = sorted({e.origin for e in fcl})
    for i in ports:
        for t in range(H):
            m.add_row(f"port_cap({i},{t})", {z_name(e.id, t): 1 for e in fcl if e.origin == i},
                      "<=", instance.bookings_per_port_week)

    if variant.symmetry_breaking:
        for lane in _lanes(instance).values():
            for k in range(len(lane) - 1):
                for t in range(H):
                    m.add_row(f"sym({lane[k].id},{lane[k + 1].id},{t})",
                              {z_name(lane[k].id, t): 1, z_name(lane[k + 1].id, t): -1}, ">=", 0)
    m.check()
    return m


def _lanes(instance: Instance) -> dict[tuple[str, str], list]:
    lanes = defaultdict(list)
    for e in instance.network.fcl_edges():
        lanes[(e.origin, e.dest)].append(e)
    return {k: sorted(v, key=lambda e: (e.mode.container_index, e.id)) for k, v in sorted(lanes.items())}


# --------------------------------------------------------------------------
# plans as assignments

def canonical_containers(instance: Instance, plan: ShipmentPlan) -> ShipmentPlan:
    """Relabel containers so that on every lane and week the booked ones
    carry the smallest indices. Containers on a lane must be identical."""
    from ..model import Booking, Leg

    remap: dict[tuple[str, int], str] = {}
    booked = {(b.edge, b.depart_week) for b in plan.bookings}
    for lane in _lanes(instance).values():
        ref = lane[0]
        for e in lane[1:]:
            if (e.capacity_kg, e.cost, e.transit_weeks) != (ref.capacity_kg, ref.cost, ref.transit_weeks):
                raise ValueError(f"containers on lane {ref.origin}->{ref.dest} differ")
        weeks = {t for (eid, t) in booked if eid in {e.id for e in lane}}
        for t in weeks:
            used = [e.id for e in lane if (e.id, t) in booked]
            for new, old in zip([e.id for e in lane], used):
                remap[(old, t)] = new
    routes = {oid: tuple(Leg(remap.get((leg.edge, leg.depart_week), leg.edge), leg.depart_week)
                         for leg in legs)
              for oid, legs in plan.routes.items()}
    bookings = tuple(Booking(remap.get((b.edge, b.depart_week), b.edge), b.depart_week)
                     for b in plan.bookings)
    return ShipmentPlan(routes, bookings, plan.unservable)


def encode_plan(model: ModelDescription, plan: ShipmentPlan) -> dict[str, Number]:
    """Variable assignment induced by a plan (only nonzero values listed)."""
    instance, variant = model.instance, model.variant
    if instance is None:
        raise ValueError("model has no instance attached; build it with build_model")
    net = instance.network
    if variant.symmetry_breaking:
        plan = canonical_containers(instance, plan)
    val: dict[str, Number] = {}
    for b in plan.bookings:
        val[z_name(b.edge, b.depart_week)] = val.get(z_name(b.edge, b.depart_week), 0) + 1
    inventory = variant.in_transit_mode is InTransitMode.INVENTORY
    for oid, legs in plan.routes.items():
        if not legs:
            continue
        o = instance.order_by_id[oid]
        prev = None
        for leg in legs:
            edge = net.edge_by_id[leg.edge]
            n = x_name(leg.edge, oid, leg.depart_week)
            val[n] = val.get(n, 0) + 1
            if prev is not None and inventory:
                node, s = prev
                for t in range(s, leg.depart_week):
                    rn = r_name(node, oid, t)
                    val[rn] = val.get(rn, 0) + 1
            prev = (edge.dest, leg.depart_week + edge.transit_weeks)
        s = prev[1]
        val[arr_name(oid)] = s
        if variant.deadline_mode is not DeadlineMode.STRICT:
            early, late = max(0, o.earliest_week - s), max(0, s - o.latest_week)
            if early:
                val[f"dev_early({oid})"] = early
            if late:
                val[f"dev_late({oid})"] = late
            if late and variant.deadline_mode is DeadlineMode.SERVICE_LEVEL:
                val[f"ind({oid})"] = 1
    return {k: v for k, v in val.items() if v}


def check_assignment(model: ModelDescription, values: Mapping[str, Number], tol: float = 1e-9) -> list[str]:
    """Names of violated rows, plus 'bound:' / 'integrality:' / 'unknown:'
    entries for variable-level problems. Missing variables read as zero."""
    bad = []
    for name in values:
        if name not in model.variables:
            bad.append(f"unknown:{name}")
    for v in model.variables.values():
        x = values.get(v.name, 0)
        if (v.lb is not None and x < v.lb - tol) or (v.ub is not None and x > v.ub + tol):
            bad.append(f"bound:{v.name}")
        if v.kind != "continuous" and abs(x - round(x)) > tol:
            bad.append(f"integrality:{v.name}")
    for row in model.constraints.values():
        lhs = sum(a * values.get(n, 0) for n, a in row.coeffs.items())
        if row.sense == "<=":
            ok = lhs <= row.rhs + tol
        elif row.sense == ">=":
            ok = lhs >= row.rhs - tol
        else:
            ok = abs(lhs - row.rhs) <= tol
        if not ok:
            bad.append(row.name)
    return bad


def objective_value(model: ModelDescription, values: Mapping[str, Number]) -> Number:
    return sum(c * values.get(n, 0) for n, c in model.objective.items())


def decode_assignment(model: ModelDescription, values: Mapping[str, Number]) -> ShipmentPlan:
    """Plan read off the x and z variables (each order's legs chained by
    departure time). Inverse of encode_plan on feasible assignments."""
    from ..model import Booking, Leg

    instance = model.instance
    if instance is None:
        raise ValueError("model has no instance attached")
    legs: dict[str, list[Leg]] = defaultdict(list)
    bookings = []
    for name, val in values.items():
        if not val:
            continue
        head, _, rest = name.partition("(")
        parts = rest[:-1].split(",")
        if head == "x":
            legs[parts[1]].append(Leg(parts[0], int(parts[2])))
        elif head == "z":
            bookings.extend([Booking(parts[0], int(parts[1]))] * int(round(val)))
    routes = {oid: tuple(sorted(ls, key=lambda leg: leg.depart_week)) for oid, ls in sorted(legs.items())}
    return ShipmentPlan(routes, tuple(sorted(bookings, key=lambda b: (b.edge, b.depart_week))))


def plan_violations_for_start(model: ModelDescription, plan: ShipmentPlan) -> list[str]:
    """Why a plan cannot serve as a start: violated rows, or validation
    findings when the plan already fails on the instance."""
    issues = [f"{v.family}: {v.message}" for v in validate_plan(model.instance, plan)
              if model.variant.deadline_mode is DeadlineMode.STRICT or v.family != "deadline"]
    return issues + check_assignment(model, encode_plan(model, plan))
