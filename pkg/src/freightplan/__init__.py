"""Inbound freight planning: multi-period consolidation model, knapsack
rolling-horizon heuristic, brute-force oracle, instance generator and MILP
export."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    Booking, CostBreakdown, Edge, FclSpec, Instance, LclSpec, Leg, Location, LocationKind,
    ModeClass, Network, PerKgRate, ProductOrder, ShipmentPlan, TransportMode, Violation,
    arrival_week, heuristic_error, plan_cost, validate_instance, validate_plan,
)
