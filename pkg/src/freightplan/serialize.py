"""JSON and CSV serialization for instances, plans, costs and reports.

Documents are written with sorted keys and a fixed separator layout so the
same object always produces the same bytes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from typing import Any, Iterable, Mapping

import jsonschema

from . import __version__
from .model import (
    Booking, CostBreakdown, Edge, FclSpec, Instance, LclSpec, Leg, Location, LocationKind,
    ModeClass, Network, PerKgRate, ProductOrder, ShipmentPlan, TransportMode, Violation,
    validate_instance,
)

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """A document does not match its JSON schema."""

    def __init__(self, kind: str, errors: list[str]):
        self.kind = kind
        self.errors = errors
        super().__init__(f"invalid {kind} document: " + "; ".join(errors))


_nonneg = {"type": "integer", "minimum": 0}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "horizon_weeks", "dwell_limit_weeks", "booking_lead_weeks",
                 "bookings_per_port_week", "locations", "edges", "orders"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "horizon_weeks": {"type": "integer", "minimum": 1},
        "dwell_limit_weeks": _nonneg,
        "booking_lead_weeks": _nonneg,
        "bookings_per_port_week": {"type": "integer", "minimum": 1},
        "meta": {"type": "object"},
        "locations": {"type": "array", "items": {
            "type": "object", "required": ["id", "kind"],
            "properties": {
                "id": {"type": "string", "minLength": 1},
                "kind": {"enum": [k.value for k in LocationKind]},
                "label": {"type": "string"},
            },
        }},
        "edges": {"type": "array", "items": {
            "type": "object",
            "required": ["id", "origin", "dest", "mode", "transit_weeks", "capacity_kg", "cost"],
            "properties": {
                "id": {"type": "string", "minLength": 1},
                "origin": {"type": "string"},
                "dest": {"type": "string"},
                "mode": {"enum": [m.value for m in ModeClass]},
                "container_index": {"type": ["integer", "null"], "minimum": 1},
                "transit_weeks": _nonneg,
                "capacity_kg": {"type": ["integer", "null"], "minimum": 1},
                "cost": {"type": "object", "additionalProperties": _nonneg},
            },
        }},
        "orders": {"type": "array", "items": {
            "type": "object",
            "required": ["id", "origin", "destination", "gross_weight_kg", "volume_cbm",
                         "air_charge_weight_kg", "ready_week", "earliest_week", "latest_week"],
            "properties": {
                "id": {"type": "string", "minLength": 1},
                "origin": {"type": "string"},
                "destination": {"type": "string"},
                "gross_weight_kg": {"type": "integer", "minimum": 1},
                "volume_cbm": {"type": "number", "exclusiveMinimum": 0},
                "air_charge_weight_kg": {"type": "number", "exclusiveMinimum": 0},
                "ready_week": _nonneg,
                "earliest_week": {"type": "integer"},
                "latest_week": {"type": "integer"},
            },
        }},
    },
}

_leg_schema = {
    "type": "object", "required": ["edge", "depart_week"],
    "properties": {"edge": {"type": "string"}, "depart_week": {"type": "integer"}},
}

PLAN_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "routes", "bookings"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "routes": {"type": "object", "additionalProperties": {"type": "array", "items": _leg_schema}},
        "bookings": {"type": "array", "items": _leg_schema},
        "unservable": {"type": "array", "items": {"type": "string"}},
        "meta": {"type": "object"},
    },
}


def _check(doc: Any, schema: dict, kind: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = ["/".join(str(p) for p in e.absolute_path) + ": " + e.message for e in errors[:20]]
        raise SchemaError(kind, msgs)


def dumps(doc: Mapping) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return "sha256:" + hashlib.sha256(data).hexdigest()


# --------------------------------------------------------------------------
# instance


def _cost_to_dict(cost) -> dict:
    if isinstance(cost, PerKgRate):
        return {"cents_per_kg": cost.cents_per_kg}
    if isinstance(cost, LclSpec):
        return {"bunker_cents": cost.bunker_cents, "rate_cents_per_cbm": cost.rate_cents_per_cbm}
    return {"fixed_cost_cents": cost.fixed_cost_cents,
            "variable_cents_per_order": cost.variable_cents_per_order}


def _cost_from_dict(mode: ModeClass, d: dict):
    try:
        if mode is ModeClass.FCL:
            return FclSpec(d["fixed_cost_cents"], d.get("variable_cents_per_order", 0))
        if mode is ModeClass.LCL:
            return LclSpec(d["bunker_cents"], d["rate_cents_per_cbm"])
        return PerKgRate(d["cents_per_kg"])
    except KeyError as exc:
        raise SchemaError("instance", [f"{mode.value} cost is missing {exc.args[0]}"]) from None


def instance_to_dict(inst: Instance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "horizon_weeks": inst.horizon_weeks,
        "dwell_limit_weeks": inst.dwell_limit_weeks,
        "booking_lead_weeks": inst.booking_lead_weeks,
        "bookings_per_port_week": inst.bookings_per_port_week,
        "meta": dict(inst.meta),
        "locations": [{"id": l.id, "kind": l.kind.value, "label": l.label}
                      for l in inst.network.locations],
        "edges": [{
            "id": e.id, "origin": e.origin, "dest": e.dest, "mode": e.mode.cls.value,
            "container_index": e.mode.container_index, "transit_weeks": e.transit_weeks,
            "capacity_kg": e.capacity_kg, "cost": _cost_to_dict(e.cost),
        } for e in inst.network.edges],
        "orders": [{
            "id": o.id, "origin": o.origin, "destination": o.destination,
            "gross_weight_kg": o.gross_weight_kg, "volume_cbm": o.volume_cbm,
            "air_charge_weight_kg": o.air_charge_weight_kg, "ready_week": o.ready_week,
            "earliest_week": o.earliest_week, "latest_week": o.latest_week,
        } for o in inst.orders],
    }


def instance_from_dict(doc: Any) -> Instance:
    _check(doc, INSTANCE_SCHEMA, "instance")
    locs = tuple(Location(d["id"], LocationKind(d["kind"]), d.get("label", ""))
                 for d in doc["locations"])
    edges = []
    for d in doc["edges"]:
        mode = ModeClass(d["mode"])
        edges.append(Edge(d["id"], d["origin"], d["dest"],
                          TransportMode(mode, d.get("container_index")),
                          d["transit_weeks"], d["capacity_kg"], _cost_from_dict(mode, d["cost"])))
    orders = tuple(ProductOrder(d["id"], d["origin"], d["destination"], d["gross_weight_kg"],
                                float(d["volume_cbm"]), float(d["air_charge_weight_kg"]),
                                d["ready_week"], d["earliest_week"], d["latest_week"])
                   for d in doc["orders"])
    inst = Instance(Network(locs, tuple(edges)), orders, doc["horizon_weeks"],
                    doc["dwell_limit_weeks"], doc["booking_lead_weeks"],
                    doc["bookings_per_port_week"], meta=doc.get("meta", {}))
    validate_instance(inst)
    return inst


def dump_instance(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def load_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("instance", [str(exc)]) from None
    return instance_from_dict(doc)


# --------------------------------------------------------------------------
# plan


def plan_to_dict(plan: ShipmentPlan, meta: Mapping | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "routes": {oid: [{"edge": l.edge, "depart_week": l.depart_week} for l in legs]
                   for oid, legs in plan.routes.items()},
        "bookings": [{"edge": b.edge, "depart_week": b.depart_week} for b in plan.bookings],
        "unservable": list(plan.unservable),
    }
    if meta is not None:
        doc["meta"] = dict(meta)
    return doc


def plan_from_dict(doc: Any) -> ShipmentPlan:
    _check(doc, PLAN_SCHEMA, "plan")
    routes = {oid: tuple(Leg(l["edge"], l["depart_week"]) for l in legs)
              for oid, legs in doc["routes"].items()}
    bookings = tuple(Booking(b["edge"], b["depart_week"]) for b in doc["bookings"])
    return ShipmentPlan(routes, bookings, tuple(doc.get("unservable", ())))


def dump_plan(plan: ShipmentPlan, meta: Mapping | None = None) -> str:
    return dumps(plan_to_dict(plan, meta))


def load_plan(text: str) -> ShipmentPlan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("plan", [str(exc)]) from None
    return plan_from_dict(doc)


# --------------------------------------------------------------------------
# reports


def violations_to_dicts(violations: Iterable[Violation]) -> list[dict]:
    return [{"family": v.family, "message": v.message, "order": v.order,
             "edge": v.edge, "week": v.week} for v in violations]


def to_csv(rows: list[Mapping], fieldnames: list[str] | None = None) -> str:
    """CSV with a header row and LF line endings."""
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in fieldnames})
    return buf.getvalue()


def cost_csv(cost: CostBreakdown) -> str:
    return to_csv([cost.as_dict()])


def artifact_meta(input_digest: str | None = None, **extra) -> dict:
    meta = {"tool": "freightplan", "tool_version": __version__}
    if input_digest is not None:
        meta["input_digest"] = input_digest
    meta.update(extra)
    return meta
