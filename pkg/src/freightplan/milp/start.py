"""MIP start files: one "name value" line per nonzero variable."""
from __future__ import annotations

from typing import Iterable, TextIO

from ..model import ShipmentPlan
from .model import ModelDescription, check_assignment, encode_plan


class MipStartError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        shown = ", ".join(violations[:10])
        more = f" (+{len(violations) - 10} more)" if len(violations) > 10 else ""
        super().__init__(f"plan violates the model: {shown}{more}")


def mip_start_values(plan: ShipmentPlan, model: ModelDescription) -> dict:
    """Assignment for ``plan``; raises MipStartError if any row fails."""
    values = encode_plan(model, plan)
    bad = check_assignment(model, values)
    if bad:
        raise MipStartError(bad)
    return values


def write_mip_start(plan: ShipmentPlan, model: ModelDescription, sink: TextIO,
                    header: Iterable[str] = ()) -> dict:
    values = mip_start_values(plan, model)
    lines = [f"# {h}" for h in header]
    lines += [f"{name} {values[name]}" for name in model.variables if values.get(name)]
    if lines:
        sink.write("\n".join(lines) + "\n")
    return values


def read_mip_start(source: TextIO) -> dict:
    values = {}
    for ln in source.read().splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        name, val = ln.rsplit(None, 1)
        values[name] = int(val) if val.lstrip("-").isdigit() else float(val)
    return values
