"""A year of orders: 1,000 products, 52 weeks, three destinations."""
import time
from collections import Counter

from freightplan.model import route_mode, validate_plan
from freightplan.generator import GenConfig, generate
from freightplan.heuristic import plan

inst = generate(GenConfig(seed=2024, n_products=1000, horizon_months=12, n_destinations=3,
                          containers_per_lane=2))
t0 = time.perf_counter()
res = plan(inst)
secs = time.perf_counter() - t0

modes = Counter(route_mode(inst, legs) for legs in res.plan.routes.values())
c = res.cost
print(f"solved in {secs:.1f}s, {len(validate_plan(inst, res.plan))} validation findings")
print(f"orders by mode: {dict(modes)}, unserved {len(res.unservable)}")
print(f"containers booked: {len(res.plan.bookings)}")
print(f"total ${c.total_cents / 100:,.2f}")
for part in ("fcl_fixed_cents", "fcl_variable_cents", "lcl_cents", "air_cents", "ground_cents"):
    print(f"  {part[:-6]:14s} ${getattr(c, part) / 100:>12,.2f}")

fill = Counter()
for oid, legs in res.plan.routes.items():
    for leg in legs:
        if inst.network.edge_by_id[leg.edge].is_fcl:
            fill[(leg.edge, leg.depart_week)] += inst.order_by_id[oid].gross_weight_kg
if fill:
    avg = sum(fill.values()) / len(fill) / 20_000
    print(f"average container fill {100 * avg:.0f}% of 20 t")
