"""Acceptance checks. Each prints one "[acceptance N] PASS/FAIL ..." line.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import io
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from freightplan.generator import GenConfig, Scenario, generate, scenario_suite  # noqa: E402
from freightplan.heuristic import plan  # noqa: E402
from freightplan.knapsack import knapsack  # noqa: E402
from freightplan.milp import (  # noqa: E402
    DeadlineMode, InTransitMode, VariantConfig, build_model, check_assignment, encode_plan, read_lp,
    read_mps, read_names, write_lp, write_mps, write_names,
)
from freightplan.milp.model import model_orders  # noqa: E402
from freightplan.model import (  # noqa: E402
    Edge, ModeClass, PerKgRate, TransportMode, heuristic_error, leg_cost_cents, validate_plan,
)
from freightplan.oracle import solve_exact  # noqa: E402
from freightplan.shortest_path import dijkstra  # noqa: E402

from helpers import Tiny, brute_shortest, enumerate_model, enumerate_valid_plans, order  # noqa: E402


def _error(h, o):
    if o == 0:
        return 0.0 if h == 0 else math.inf
    return heuristic_error(h, o)


def acceptance_1():
    start = time.perf_counter()
    errors, bad, n, served, total, with_fcl = [], [], 0, 0, 0, 0
    for seed in range(200):
        inst = generate(GenConfig(seed=seed, n_products=3 + seed % 4, horizon_weeks=10 + seed % 5))
        h, o = plan(inst), solve_exact(inst)
        n += 1
        total += len(inst.orders)
        served += len(o.plan.routes)
        with_fcl += bool(o.plan.bookings)
        if h.cost.total_cents < o.cost.total_cents or validate_plan(inst, h.plan):
            bad.append(seed)
        errors.append(_error(h.cost.total_cents, o.cost.total_cents))
    secs = time.perf_counter() - start
    mean = sum(errors) / len(errors)
    ok = not bad and mean <= 0.25 and secs < 60
    return ok, (f"{n} instances, mean error {mean:.4f}, {sum(e > 0 for e in errors)} with a gap, "
                f"{served}/{total} orders servable, {with_fcl} oracle plans book FCL, "
                f"bad seeds {bad[:5]}, {secs:.1f}s")


def acceptance_2():
    diffs = []
    for seed in range(60):
        inst = generate(GenConfig(seed=1000 + seed, n_products=3 + seed % 4,
                                  horizon_weeks=10 + seed % 5, scenario=Scenario.NO_FCL))
        h, o = plan(inst), solve_exact(inst)
        if h.cost.total_cents != o.cost.total_cents:
            diffs.append((seed, h.cost.total_cents, o.cost.total_cents))
    return not diffs, f"60 no-fcl instances, {len(diffs)} mismatches {diffs[:3]}"


def acceptance_3():
    bad, inc_nofcl, inc_closure = [], [], []
    for seed in range(40):
        suite = scenario_suite(GenConfig(seed=2000 + seed, n_products=4 + seed % 3, horizon_weeks=14))
        c = {s: solve_exact(inst).cost.total_cents for s, inst in suite.items()}
        base = c[Scenario.BASELINE]
        if c[Scenario.NO_FCL] < base or c[Scenario.PORT_CLOSURE] < base:
            bad.append(seed)
        if base:
            inc_nofcl.append(100 * (c[Scenario.NO_FCL] - base) / base)
            inc_closure.append(100 * (c[Scenario.PORT_CLOSURE] - base) / base)
    mean = lambda xs: sum(xs) / len(xs) if xs else 0.0  # noqa: E731
    return not bad, (f"40 order books, violations {bad}, mean increase no-fcl {mean(inc_nofcl):.1f}%, "
                     f"port-closure {mean(inc_closure):.1f}%")


def acceptance_4():
    air = Edge("AIR.X.Y", "X", "Y", TransportMode(ModeClass.AIR), 2, None, PerKgRate(1323))
    o = order("P1", w=10, vol=0.01)
    cents = leg_cost_cents(air, o)
    return cents == 13_230, f"10 kg by air costs {cents} cents"


def acceptance_5():
    n = 10_000
    inst = generate(GenConfig(seed=77, n_products=n, horizon_months=12))
    ws = np.array([o.gross_weight_kg for o in inst.orders])
    light = float(np.mean(ws < 500))
    coef = np.array([o.volume_cbm * 1000 / o.gross_weight_kg for o in inst.orders])
    edges = [0.5, 1.5, 3.0, 4.5, 6.0, 7.5 + 1e-9]
    freq = np.histogram(coef, bins=edges)[0] / n
    expect = np.array([0.125, 0.675, 0.10, 0.025, 0.075])
    sigma = np.sqrt(expect * (1 - expect) / n)
    vol_ok = bool(np.all(np.abs(freq - expect) <= 3 * sigma))
    gaps = np.array([o.earliest_week - o.ready_week for o in inst.orders])
    p12 = float(np.mean(gaps == 12))
    rule_bad = 0
    for o in inst.orders:
        ratio = Fraction(str(o.volume_cbm)) * 1000 / o.gross_weight_kg
        want = Fraction(o.gross_weight_kg) * Fraction("1.2121") if ratio >= 3 else Fraction(o.gross_weight_kg)
        rule_bad += abs(Fraction(o.air_charge_weight_kg) - want) > Fraction(1, 10**6)
    ok = abs(light - 0.63) <= 0.015 and vol_ok and abs(p12 - 0.40) <= 0.015 and rule_bad == 0
    return ok, (f"light share {light:.4f}, volume buckets {np.round(freq, 4).tolist()}, "
                f"P(gap 12) {p12:.4f}, air rule misses {rule_bad}")


def _subset_best(weights, values, cap):
    n = len(weights)
    if n == 0:
        return 0
    masks = (np.arange(2 ** n)[:, None] >> np.arange(n)) & 1
    tw, tv = masks @ np.array(weights), masks @ np.array(values)
    return int(tv[tw <= cap].max())


def acceptance_6():
    rng = random.Random(6)
    bad = 0
    for _ in range(1000):
        k = rng.randint(0, 15)
        items = [(j, rng.randint(1, 5000), rng.randint(1, 900)) for j in range(k)]
        cap = rng.randint(0, 20_000)
        got = knapsack(items, cap).value
        bad += got != _subset_best([w for _, w, _ in items], [v for _, _, v in items], cap)
    return bad == 0, f"1000 instances, {bad} mismatches"


def acceptance_7():
    rng = random.Random(7)
    bad = 0
    for _ in range(200):
        n = rng.randint(2, 10)
        out = {}
        for k in range(rng.randint(0, 2 * n)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                out.setdefault(u, []).append((k, v, rng.randint(0, 50)))
        res = dijkstra(out, 0, n - 1, weight=lambda e: e[2], head=lambda e: e[1])
        ref = brute_shortest(out, 0, n - 1, weight=lambda e: e[2], head=lambda e: e[1])
        bad += (None if res is None else res[0]) != ref
    return bad == 0, f"200 networks, {bad} mismatches"


_VARIANTS = [
    VariantConfig(deadline_mode=d, in_transit_mode=m, symmetry_breaking=s,
                  **({"gamma": 2, "kappa": 0.5} if d is DeadlineMode.SERVICE_LEVEL else {}))
    for d in DeadlineMode for m in InTransitMode for s in (False, True)
]


def acceptance_8():
    trip_bad, start_bad, checked, skipped = 0, 0, 0, 0
    for k in range(50):
        inst = generate(GenConfig(seed=3000 + k, n_products=4 + k % 5, horizon_weeks=16 + k % 6,
                                  containers_per_lane=1 + k % 2, n_destinations=1 + k % 2))
        variant = _VARIANTS[k % len(_VARIANTS)]
        model = build_model(inst, variant)
        buf = io.StringIO()
        write_lp(model, buf)
        trip_bad += read_lp(io.StringIO(buf.getvalue())) != model
        buf, names = io.StringIO(), io.StringIO()
        write_names(write_mps(model, buf), names)
        trip_bad += read_mps(io.StringIO(buf.getvalue()), read_names(io.StringIO(names.getvalue()))) != model
        res = plan(inst)
        if set(model_orders(inst, variant)) <= set(res.plan.routes):
            checked += 1
            start_bad += bool(check_assignment(model, encode_plan(model, res.plan)))
        else:
            skipped += 1  # an order the model must route has no heuristic route
    ok = trip_bad == 0 and start_bad == 0
    return ok, (f"50 instances over {len(_VARIANTS)} variants, {trip_bad} round-trip mismatches, "
                f"starts checked {checked} (skipped {skipped}), {start_bad} infeasible")


def _tiny_instances():
    rng = random.Random(9)
    out = []
    for k in range(4):
        H = rng.randint(6, 8)
        n = 3 if k == 0 else rng.randint(1, 2)
        orders = []
        for j in range(n):
            ready = rng.randint(0, 1)
            early = ready + rng.randint(3, 4)
            orders.append(order(f"P{j}", rng.randint(100, 600), round(rng.uniform(0.3, 3), 1),
                                ready, early, min(early + 1, H)))
        t = Tiny(containers=1 if n == 3 else rng.randint(1, 2))
        out.append(t.instance(orders, horizon=H, rho=rng.randint(0, 1), lead=max(2, H - 5 + (n == 3))))
    return out


def acceptance_9():
    mismatches, sizes = 0, []
    for inst in _tiny_instances():
        plans = enumerate_valid_plans(inst)
        sizes.append(len(plans))
        for mode in InTransitMode:
            model = build_model(inst, VariantConfig(in_transit_mode=mode))
            mismatches += enumerate_model(model) != plans
    return mismatches == 0, f"{len(sizes)} instances x 2 modes, plan counts {sizes}, {mismatches} mismatches"


def acceptance_10():
    inst = generate(GenConfig(seed=2024, n_products=1000, horizon_months=12))
    start = time.perf_counter()
    res = plan(inst, threads=1)
    secs = time.perf_counter() - start
    bad = validate_plan(inst, res.plan)
    return secs < 60 and not bad, (f"1000 orders, {secs:.1f}s, {len(res.plan.bookings)} bookings, "
                                   f"{len(bad)} findings")


CHECKS = [acceptance_1, acceptance_2, acceptance_3, acceptance_4, acceptance_5,
          acceptance_6, acceptance_7, acceptance_8, acceptance_9, acceptance_10]


def _line(k, ok, detail):
    return f"[acceptance {k}] {'PASS' if ok else 'FAIL'} {detail}"


@pytest.mark.parametrize("k", range(1, len(CHECKS) + 1))
def test_acceptance(k, capsys):
    ok, detail = CHECKS[k - 1]()
    with capsys.disabled():
        print("\n" + _line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for k, check in enumerate(CHECKS, 1):
        ok, detail = check()
        failed += not ok
        print(_line(k, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
