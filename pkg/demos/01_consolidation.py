"""Two small orders, one ocean lane: when is a full container worth it?

A hand-built network with one origin, two ports and one warehouse. We
run the knapsack heuristic and the exhaustive oracle on the same book
and print the plans side by side.
"""
from freightplan import (
    Edge, FclSpec, Instance, LclSpec, Location, LocationKind, ModeClass, Network, PerKgRate,
    ProductOrder, TransportMode, plan_cost, validate_plan,
)
from freightplan.heuristic import plan
from freightplan.oracle import solve_exact

S, I, D = LocationKind.SUPPLY, LocationKind.IN_TRANSIT, LocationKind.DEMAND
locations = (
    Location("SUP", S, "supplier"),
    Location("PORT_A", I, "export port"),
    Location("PORT_B", I, "import port"),
    Location("DC", D, "warehouse"),
)
edges = (
    Edge("GND.SUP.A", "SUP", "PORT_A", TransportMode(ModeClass.GROUND), 1, None, PerKgRate(10)),
    Edge("FCL1.A.B", "PORT_A", "PORT_B", TransportMode(ModeClass.FCL, 1), 2, 1000, FclSpec(50_000)),
    Edge("LCL.A.B", "PORT_A", "PORT_B", TransportMode(ModeClass.LCL), 2, None, LclSpec(10_000, 20_000)),
    Edge("GND.B.DC", "PORT_B", "DC", TransportMode(ModeClass.GROUND), 1, None, PerKgRate(20)),
    Edge("AIR.SUP.DC", "SUP", "DC", TransportMode(ModeClass.AIR), 2, None, PerKgRate(300)),
)
network = Network(locations, edges)


def book(*weights):
    # every order: ready week 0, deliver in weeks 5..7, 2 CBM per 400 kg
    return tuple(ProductOrder(f"P{k}", "SUP", "DC", w, w / 200, float(w), 0, 5, 7)
                 for k, w in enumerate(weights, 1))


def show(title, inst, p):
    cost = plan_cost(inst, p)
    print(f"  {title}: ${cost.total_cents / 100:,.2f}  bookings={[(b.edge, b.depart_week) for b in p.bookings]}")
    for oid, legs in p.routes.items():
        print(f"    {oid}: " + " -> ".join(f"{leg.edge}@{leg.depart_week}" for leg in legs))
    assert not validate_plan(inst, p)


for weights in [(400,), (400, 400), (300, 300, 300, 300)]:
    inst = Instance(network, book(*weights), horizon_weeks=8, dwell_limit_weeks=1,
                    booking_lead_weeks=2, bookings_per_port_week=1)
    print(f"orders {weights} kg")
    show("heuristic", inst, plan(inst).plan)
    show("oracle   ", inst, solve_exact(inst).plan)
    print()
