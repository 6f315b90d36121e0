"""Write the integer program for a small instance and warm-start it.

The LP and MPS files can be handed to any MILP solver. The heuristic
plan is turned into a start file after checking it against every row.
"""
import io
import tempfile
from pathlib import Path

from freightplan.generator import GenConfig, generate
from freightplan.heuristic import plan
from freightplan.milp import (
    VariantConfig, build_model, objective_value, read_lp, write_lp, write_mip_start, write_mps,
    write_names,
)

inst = generate(GenConfig(seed=5, n_products=8, horizon_weeks=20, containers_per_lane=2))
res = plan(inst)
out = Path(tempfile.mkdtemp(prefix="freightplan-"))

for variant in (VariantConfig(),
                VariantConfig(in_transit_mode="original", symmetry_breaking=True),
                VariantConfig(deadline_mode="service-level", gamma=2, kappa=0.25)):
    model = build_model(inst, variant)
    tag = f"{variant.deadline_mode.value}-{variant.in_transit_mode.value}"
    counts = model.family_counts()
    print(f"{tag}: {len(model.variables)} variables, {len(model.constraints)} rows")
    print("   " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))

    with open(out / f"{tag}.lp", "w") as fh:
        write_lp(model, fh, header=[f"variant {tag}"])
    with open(out / f"{tag}.mps", "w") as fh:
        renamed = write_mps(model, fh)
    with open(out / f"{tag}.names.csv", "w") as fh:
        write_names(renamed, fh)

    # the parser gives back exactly what was written
    assert read_lp(io.StringIO((out / f"{tag}.lp").read_text())) == model

    if variant.deadline_mode.value == "strict":
        buf = io.StringIO()
        values = write_mip_start(res.plan, model, buf)
        (out / f"{tag}.start").write_text(buf.getvalue())
        print(f"   start objective {objective_value(model, values)} cents "
              f"(plan cost {res.cost.total_cents})")

print(f"files in {out}")
