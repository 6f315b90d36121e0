"""Run reports and the solver front door shared by the CLI and demos."""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import heuristic, oracle
from .model import CostBreakdown, Instance, ShipmentPlan, heuristic_error, route_mode, validate_plan
from .serialize import dump_instance, digest

SOLVERS = ("heuristic", "oracle")


@dataclass
class RunReport:
    digest: str
    scenario: str
    solver: str
    cost: dict
    bookings: int
    orders_by_mode: dict
    wall_ms: int
    unservable: list = field(default_factory=list)
    violations: int = 0
    heuristic_error: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SolveOutcome:
    solver: str
    plan: ShipmentPlan
    cost: CostBreakdown
    wall_ms: int


def instance_digest(instance: Instance) -> str:
    return digest(dump_instance(instance))


def scenario_of(instance: Instance) -> str:
    return str(instance.meta.get("scenario", "custom"))


def solve(instance: Instance, solver: str, threads: int = 1) -> SolveOutcome:
    """Run one solver. Raises OracleLimitError for oversized oracle runs."""
    start = time.perf_counter()
    if solver == "heuristic":
        res = heuristic.plan(instance, threads=threads)
        plan, cost = res.plan, res.cost
    elif solver == "oracle":
        res = oracle.solve_exact(instance)
        plan, cost = res.plan, res.cost
    else:
        raise ValueError(f"unknown solver {solver!r}")
    ms = int(round((time.perf_counter() - start) * 1000))
    return SolveOutcome(solver, plan, cost, ms)


def mode_counts(instance: Instance, plan: ShipmentPlan) -> dict:
    counts = Counter({"fcl": 0, "lcl": 0, "air": 0, "ground": 0})
    for legs in plan.routes.values():
        if legs:
            counts[route_mode(instance, legs)] += 1
    return dict(sorted(counts.items()))


def make_report(instance: Instance, outcome: SolveOutcome, inst_digest: Optional[str] = None,
                reference_cost: Optional[int] = None) -> RunReport:
    err = None
    if reference_cost is not None and reference_cost > 0:
        err = heuristic_error(outcome.cost.total_cents, reference_cost)
    return RunReport(
        digest=inst_digest or instance_digest(instance),
        scenario=scenario_of(instance),
        solver=outcome.solver,
        cost=outcome.cost.as_dict(),
        bookings=len(outcome.plan.bookings),
        orders_by_mode=mode_counts(instance, outcome.plan),
        wall_ms=outcome.wall_ms,
        unservable=sorted(o.id for o in instance.orders if not outcome.plan.routes.get(o.id)),
        violations=len(validate_plan(instance, outcome.plan)),
        heuristic_error=err,
    )


COMPARE_FIELDS = ["solver", "total_cents", "fcl_count", "fcl_fixed_cents", "fcl_variable_cents",
                  "lcl_cents", "air_cents", "ground_cents", "penalty_cents", "heuristic_error",
                  "tool_version", "input_digest"]


def compare_rows(instance: Instance, threads: int = 1, inst_digest: Optional[str] = None) -> list[dict]:
    """Heuristic row, plus an oracle row when the instance is small enough."""
    from . import __version__

    inst_digest = inst_digest or instance_digest(instance)
    outcomes = [solve(instance, "heuristic", threads)]
    try:
        oracle.check_limits(instance)
    except oracle.OracleLimitError:
        pass
    else:
        outcomes.append(solve(instance, "oracle"))
    ref = outcomes[1].cost.total_cents if len(outcomes) > 1 else None
    rows = []
    for out in outcomes:
        row = {"solver": out.solver, **out.cost.as_dict(), "fcl_count": len(out.plan.bookings)}
        if ref is not None and ref > 0:
            row["heuristic_error"] = f"{heuristic_error(out.cost.total_cents, ref):.6f}"
        elif ref == 0:
            row["heuristic_error"] = "0.000000" if out.cost.total_cents == 0 else ""
        row["tool_version"] = __version__
        row["input_digest"] = inst_digest
        rows.append(row)
    return rows


SUITE_FIELDS = ["scenario", "solver", "total_cents", "fcl_count", "edges", "unservable",
                "cost_increase_pct", "tool_version", "input_digest"]


def suite_rows(suite: dict, solvers: tuple[str, ...], config_digest: str, threads: int = 1) -> list[dict]:
    """Three scenario rows per solver with cost increases versus baseline."""
    from . import __version__

    rows = []
    for solver in solvers:
        base = None
        for scenario, inst in suite.items():
            out = solve(inst, solver, threads)
            total = out.cost.total_cents
            if base is None:
                base = total
            inc = "" if not base else f"{100.0 * (total - base) / base:.2f}"
            rows.append({
                "scenario": scenario.value if hasattr(scenario, "value") else str(scenario),
                "solver": solver, "total_cents": total, "fcl_count": len(out.plan.bookings),
                "edges": len(inst.network.edges),
                "unservable": sum(1 for o in inst.orders if not out.plan.routes.get(o.id)),
                "cost_increase_pct": inc, "tool_version": __version__, "input_digest": config_digest,
            })
    return rows
