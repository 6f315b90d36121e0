"""One order book under three network scenarios.

The generator draws prices once and filters edges per scenario, so the
same orders can be compared with Shanghai closed or with no FCL service.
Small books are solved exactly as well as heuristically.
"""
from freightplan.generator import GenConfig, Scenario, scenario_suite
from freightplan.heuristic import plan
from freightplan.oracle import solve_exact

print("desk-scale book, 5 orders over 14 weeks")
for seed in range(3):
    suite = scenario_suite(GenConfig(seed=seed, n_products=5, horizon_weeks=14))
    row = []
    for scenario, inst in suite.items():
        h = plan(inst).cost.total_cents
        o = solve_exact(inst).cost.total_cents
        row.append(f"{scenario.value}: heur ${h / 100:,.0f} / exact ${o / 100:,.0f}")
    print(f"  seed {seed}: " + "; ".join(row))

print()
print("half-year book, 300 orders (heuristic only)")
suite = scenario_suite(GenConfig(seed=11, n_products=300, horizon_months=6, n_destinations=2))
base = None
for scenario, inst in suite.items():
    res = plan(inst)
    total = res.cost.total_cents
    base = base or total
    print(f"  {scenario.value:13s} ${total / 100:>12,.2f}  containers={len(res.plan.bookings):3d}"
          f"  vs baseline {100 * (total - base) / base:+6.1f}%  unserved={len(res.unservable)}")
assert Scenario.BASELINE in suite
