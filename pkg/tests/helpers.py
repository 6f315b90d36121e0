"""Test-side builders and brute-force oracles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from freightplan.model import (
    Booking, Edge, FclSpec, Instance, LclSpec, Leg, Location, LocationKind, ModeClass, Network,
    PerKgRate, ProductOrder, ShipmentPlan, TransportMode, validate_plan,
)

S, I, D = LocationKind.SUPPLY, LocationKind.IN_TRANSIT, LocationKind.DEMAND


@dataclass
class Tiny:
    """One lane: O -ground-> A -ocean-> B -ground-> D, plus air O -> D."""
    ground_weeks: int = 1
    ocean_weeks: int = 2
    air_weeks: int = 2
    containers: int = 2
    capacity_kg: int = 1000
    fixed_cents: int = 50_000
    lcl_bunker_cents: int = 10_000
    lcl_rate_cents: int = 20_000
    first_mile_cents: int = 10
    last_mile_cents: int = 20
    air_cents: int = 300
    with_lcl: bool = True
    with_air: bool = True

    def network(self) -> Network:
        locs = (Location("O", S, "origin"), Location("A", I, "export port"),
                Location("B", I, "import port"), Location("D", D, "destination"))
        g = ModeClass.GROUND
        edges = [
            Edge("GND.O.A", "O", "A", TransportMode(g), self.ground_weeks, None, PerKgRate(self.first_mile_cents)),
            Edge("GND.B.D", "B", "D", TransportMode(g), self.ground_weeks, None, PerKgRate(self.last_mile_cents)),
        ]
        for k in range(1, self.containers + 1):
            edges.append(Edge(f"FCL{k}.A.B", "A", "B", TransportMode(ModeClass.FCL, k), self.ocean_weeks,
                              self.capacity_kg, FclSpec(self.fixed_cents)))
        if self.with_lcl:
            edges.append(Edge("LCL.A.B", "A", "B", TransportMode(ModeClass.LCL), self.ocean_weeks, None,
                              LclSpec(self.lcl_bunker_cents, self.lcl_rate_cents)))
        if self.with_air:
            edges.append(Edge("AIR.O.D", "O", "D", TransportMode(ModeClass.AIR), self.air_weeks, None,
                              PerKgRate(self.air_cents)))
        return Network(locs, tuple(edges))

    def instance(self, orders, horizon=8, rho=1, lead=2, lam=1) -> Instance:
        return Instance(self.network(), tuple(orders), horizon, rho, lead, lam)


def order(oid="P1", w=100, vol=1.0, ready=0, early=5, late=7, acw=None) -> ProductOrder:
    return ProductOrder(oid, "O", "D", w, vol, float(w if acw is None else acw), ready, early, late)


# --------------------------------------------------------------------------
# brute-force subset / path enumeration

def brute_knapsack(items, capacity) -> int:
    best = 0
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            if sum(w for _, w, _ in combo) <= capacity:
                best = max(best, sum(v for _, _, v in combo))
    return best


def brute_shortest(out_edges, source, target, weight, head) -> Optional[int]:
    best = None

    def walk(node, seen, cost):
        nonlocal best
        if node == target:
            best = cost if best is None else min(best, cost)
            return
        for e in out_edges.get(node, ()):
            nxt = head(e)
            if nxt not in seen:
                walk(nxt, seen | {nxt}, cost + weight(e))

    walk(source, {source}, 0)
    return best


# --------------------------------------------------------------------------
# every 0/1 point of a small model

def _affine_r(model):
    """Express each r variable as an affine form over binaries using the
    inventory rows, solved in week order."""
    forms: dict[str, dict] = {}
    rows = [r for r in model.constraints.values() if r.name.startswith("inv(")]
    rows.sort(key=lambda r: int(r.name.rsplit(",", 1)[1][:-1]))
    for row in rows:
        node, oid, t = row.name[4:-1].rsplit(",", 2)
        target = f"r({node},{oid},{t})"
        form = {"": row.rhs}
        for v, a in row.coeffs.items():
            if v == target:
                continue
            if v in forms:
                for k, b in forms[v].items():
                    form[k] = form.get(k, 0) - a * b
            else:
                form[v] = form.get(v, 0) - a
        forms[target] = form  # coefficient of target is +1
    return forms


def binary_rows(model):
    """Rows restricted to binary variables: inventory variables are
    substituted out, rows touching integer arrival variables are left for
    the final check."""
    forms = _affine_r(model) if any(n.startswith("r(") for n in model.variables) else {}
    out = []

    def add(coeffs, sense, rhs):
        const = coeffs.pop("", 0)
        coeffs = {k: a for k, a in coeffs.items() if a}
        out.append((coeffs, sense, rhs - const))

    for row in model.constraints.values():
        if row.name.startswith("inv("):
            continue
        if any(model.variables[v].kind == "integer" for v in row.coeffs):
            continue
        expr: dict = {}
        for v, a in row.coeffs.items():
            if v in forms:
                for k, b in forms[v].items():
                    expr[k] = expr.get(k, 0) + a * b
            else:
                expr[v] = expr.get(v, 0) + a
        add(expr, row.sense, row.rhs)
    for name, form in forms.items():
        var = model.variables[name]
        add(dict(form), ">=", var.lb)
        if var.ub is not None:
            add(dict(form), "<=", var.ub)
    return out, forms


def enumerate_model(model) -> set:
    """All feasible assignments, projected on the binary x/z variables.
    Depth-first over binaries with interval propagation on each row; the
    dependent variables are filled in at the leaves and the full row set
    is checked there."""
    from freightplan.milp.model import check_assignment

    rows, forms = binary_rows(model)
    bins = [v.name for v in model.variables.values() if v.kind == "binary"]
    fixed = {v.name: 0 for v in model.variables.values() if v.kind == "binary" and v.ub == 0}
    free = [b for b in bins if b not in fixed]
    uses: dict[str, list[int]] = {b: [] for b in bins}
    lo, hi = [], []
    for k, (coeffs, _, _) in enumerate(rows):
        lo.append(sum(min(0, a) for v, a in coeffs.items() if v not in fixed))
        hi.append(sum(max(0, a) for v, a in coeffs.items() if v not in fixed))
        for v in coeffs:
            uses[v].append(k)

    def ok(k):
        _, sense, rhs = rows[k]
        if sense == "<=":
            return lo[k] <= rhs
        if sense == ">=":
            return hi[k] >= rhs
        return lo[k] <= rhs <= hi[k]

    found = set()
    val = dict(fixed)

    def leaf():
        full = dict(val)
        for name, form in forms.items():
            full[name] = form.get("", 0) + sum(a * full.get(v, 0) for v, a in form.items() if v)
        for name, var in model.variables.items():
            if name.startswith("arr("):
                oid = name[4:-1]
                s = [int(x.rsplit(",", 1)[1][:-1]) + _transit(model, x) for x in val
                     if x.startswith("x(") and val[x] and x.split(",")[1] == oid
                     and _is_final(model, x)]
                full[name] = s[0] if len(s) == 1 else 0
        if not check_assignment(model, full):
            found.add(frozenset(v for v, x in val.items() if x))

    def dfs(i):
        if i == len(free):
            leaf()
            return
        v = free[i]
        for x in (0, 1):
            changed = []
            for k in uses[v]:
                a = rows[k][0][v]
                old = (lo[k], hi[k])
                if x == 1:
                    lo[k] += a - min(0, a)
                    hi[k] += a - max(0, a)
                else:
                    lo[k] -= min(0, a)
                    hi[k] -= max(0, a)
                changed.append((k, old))
            val[v] = x
            if all(ok(k) for k, _ in changed):
                dfs(i + 1)
            for k, old in changed:
                lo[k], hi[k] = old
        del val[v]

    dfs(0)
    return found


def _transit(model, xname):
    edge = xname[2:].split(",")[0]
    return model.instance.network.edge_by_id[edge].transit_weeks


def _is_final(model, xname):
    edge = model.instance.network.edge_by_id[xname[2:].split(",")[0]]
    return edge.dest == model.instance.order_by_id[xname.split(",")[1]].destination


# --------------------------------------------------------------------------
# every plan validate_plan accepts on a tiny instance

def all_paths(instance, order, max_legs=3):
    """Every leg sequence from the origin to the destination with any
    departure weeks in the horizon (timing not checked)."""
    net = instance.network
    H = instance.horizon_weeks
    out = []

    def walk(node, legs):
        if node == order.destination and legs:
            out.append(tuple(legs))
            return
        if len(legs) == max_legs:
            return
        for e in net.out_edges.get(node, ()):
            for t in range(H):
                walk(e.dest, legs + [Leg(e.id, t)])

    walk(order.origin, [])
    return out


def plan_key(plan: ShipmentPlan) -> frozenset:
    names = {f"x({leg.edge},{oid},{leg.depart_week})" for oid, legs in plan.routes.items() for leg in legs}
    names |= {f"z({b.edge},{b.depart_week})" for b in plan.bookings}
    return frozenset(names)


def enumerate_valid_plans(instance) -> set:
    """Keys of all plans with zero validation findings. Routes and booking
    sets are screened one at a time first (checks that only look at one
    route or at the bookings), then every combination is validated whole."""
    H = instance.horizon_weeks
    per_order = []
    for o in instance.orders:
        keep = [()]
        for legs in all_paths(instance, o):
            fcl = sorted({(leg.edge, leg.depart_week) for leg in legs
                          if instance.network.edge_by_id[leg.edge].is_fcl})
            single = ShipmentPlan({o.id: legs}, tuple(Booking(e, t) for e, t in fcl))
            if all(v.family == "demand" and v.order != o.id for v in validate_plan(instance, single)):
                keep.append(legs)
        per_order.append(keep)
    slots = [(e.id, t) for e in instance.network.fcl_edges() for t in range(H)]
    booking_sets = []
    for r in range(len(slots) + 1):
        for combo in itertools.combinations(slots, r):
            plan = ShipmentPlan({}, tuple(Booking(e, t) for e, t in combo))
            if all(v.family == "demand" for v in validate_plan(instance, plan)):
                booking_sets.append(combo)
    found = set()
    for routes in itertools.product(*per_order):
        used = {(leg.edge, leg.depart_week) for legs in routes for leg in legs
                if instance.network.edge_by_id[leg.edge].is_fcl}
        for combo in booking_sets:
            if not used <= set(combo):
                continue  # an FCL leg without a booking is a finding on its own
            plan = ShipmentPlan({o.id: legs for o, legs in zip(instance.orders, routes) if legs},
                                tuple(Booking(e, t) for e, t in combo))
            if not validate_plan(instance, plan):
                found.add(plan_key(plan))
    return found
