from collections import Counter

import numpy as np
import pytest

from freightplan import generator as gen
from freightplan.generator import (
    ConfigError, GenConfig, Scenario, air_charge_weight, build_network, generate, sample_gross_weight,
    sample_timing, sample_volume, sample_volume_coefficient, scenario_suite, stream,
    volume_from_coefficient,
)
from freightplan.heuristic import time_ranges
from freightplan.model import ModeClass, validate_instance
from freightplan.serialize import dump_instance


def test_weights_within_support():
    rng = stream(0, "weight")
    draws = [sample_gross_weight(rng) for _ in range(2000)]
    assert min(draws) >= 50 and max(draws) <= 5000
    assert all(isinstance(w, int) for w in draws)


def test_volume_coefficient_within_buckets():
    rng = stream(0, "volume")
    coefs = [sample_volume_coefficient(rng) for _ in range(2000)]
    assert 0.5 <= min(coefs) and max(coefs) <= 7.5


def test_volume_is_coefficient_times_tons():
    assert volume_from_coefficient(2.0, 1000) == 2.0
    assert volume_from_coefficient(1.5, 250) == 0.375
    with pytest.raises(ValueError):
        sample_volume(stream(0, "volume"), 0)


def test_air_charge_rule_examples():
    assert air_charge_weight(1000, 2.0) == 1000
    assert air_charge_weight(1000, 3.5) == pytest.approx(1212.1)
    assert air_charge_weight(1000, 3.0) == pytest.approx(1212.1)  # ratio exactly 3
    assert air_charge_weight(1000, 2.9999) == 1000


def test_timing_rules():
    rng = stream(9, "timing")
    for H in (26, 52):
        for _ in range(3000):
            ready, early, late = sample_timing(rng, H)
            assert late == early + 2
            assert early - ready >= 11
            assert 0 <= ready < int(0.35 * H)


def test_timing_degenerate_branch_clamps_to_13():
    # on 15 weeks the open-ended branch never has room past 13
    rng = stream(2, "timing")
    gaps = Counter(e - r for r, e, _ in (sample_timing(rng, 15) for _ in range(2000)))
    assert set(gaps) == {11, 12, 13}


def test_network_shapes_per_scenario():
    rng = lambda: stream(5, "network")  # noqa: E731
    base = build_network(Scenario.BASELINE, 1, rng())
    lanes = lambda net, cls: {(e.origin, e.dest) for e in net.edges if e.mode.cls is cls}  # noqa: E731
    assert len(lanes(base, ModeClass.FCL)) == 8 and len(lanes(base, ModeClass.LCL)) == 8
    closed = build_network(Scenario.PORT_CLOSURE, 1, rng())
    assert len(lanes(closed, ModeClass.LCL)) == 4
    assert all("CN_SHA" not in (e.origin, e.dest) for e in closed.edges)
    nofcl = build_network(Scenario.NO_FCL, 1, rng())
    assert not nofcl.fcl_edges()
    assert len(lanes(nofcl, ModeClass.LCL)) == 8
    with pytest.raises(ConfigError):
        build_network(Scenario.BASELINE, 4, rng())


def test_network_costs_and_times():
    net = build_network(Scenario.BASELINE, 3, stream(8, "network"), containers_per_lane=2)
    for e in net.edges:
        cls = e.mode.cls
        if cls is ModeClass.GROUND:
            assert e.transit_weeks == 2 and 10 <= e.cost.cents_per_kg <= 50
        elif cls is ModeClass.FCL:
            assert (e.transit_weeks, e.capacity_kg, e.cost.fixed_cost_cents) == (7, 20_000, 1_253_800)
        elif cls is ModeClass.LCL:
            assert e.transit_weeks == 7 and e.cost.bunker_cents == 116_000
            assert 70_000 <= e.cost.rate_cents_per_cbm <= 90_000
        else:
            assert e.transit_weeks == 2 and e.cost.cents_per_kg == 1323
    assert len(net.fcl_edges()) == 16
    dests = [l.id for l in net.locations if l.kind.value == "demand"]
    assert dests == ["DST_GVL", "DST_BGR", "DST_ATL"]


def test_scenarios_share_prices_on_surviving_edges():
    suite = scenario_suite(GenConfig(seed=12, n_products=20))
    base = {e.id: e for e in suite[Scenario.BASELINE].network.edges}
    for s in (Scenario.PORT_CLOSURE, Scenario.NO_FCL):
        for e in suite[s].network.edges:
            assert base[e.id] == e
        assert suite[s].orders == suite[Scenario.BASELINE].orders


def test_generate_is_deterministic_and_sized():
    cfg = GenConfig(seed=7, n_products=50, horizon_months=6)
    a, b = dump_instance(generate(cfg)), dump_instance(generate(cfg))
    assert a == b
    inst = generate(cfg)
    assert len(inst.orders) == 50 and inst.horizon_weeks == 26
    assert generate(GenConfig(seed=7, n_products=5, horizon_months=12)).horizon_weeks == 52
    assert all(o.earliest_week >= o.ready_week + 11 for o in inst.orders)
    validate_instance(inst)


def test_more_orders_do_not_perturb_earlier_ones():
    small = generate(GenConfig(seed=21, n_products=10, n_destinations=2))
    large = generate(GenConfig(seed=21, n_products=30, n_destinations=2))
    assert large.orders[:10] == small.orders
    assert large.network == small.network


def test_destinations_are_drawn_from_the_configured_set():
    inst = generate(GenConfig(seed=2, n_products=300, n_destinations=3))
    counts = Counter(o.destination for o in inst.orders)
    assert set(counts) == {"DST_GVL", "DST_BGR", "DST_ATL"}
    assert min(counts.values()) > 60
    custom = generate(GenConfig(seed=2, n_products=20, n_destinations=1, destinations=("DST_SCH",)))
    assert {o.destination for o in custom.orders} == {"DST_SCH"}


def test_config_errors():
    for bad in (dict(n_products=-1), dict(horizon_months=7), dict(n_destinations=0),
                dict(port_cap=0), dict(containers_per_lane=0), dict(horizon_weeks=3),
                dict(destinations=("DST_GVL", "DST_XXX"), n_destinations=2)):
        with pytest.raises(ConfigError):
            generate(GenConfig(**{"seed": 1, "n_products": 5, **bad}))
    with pytest.raises(ConfigError):
        GenConfig(seed=1, n_products=5, scenario="closed")


def test_zero_products_allowed():
    assert generate(GenConfig(seed=1, n_products=0)).orders == ()


def test_dwell_limit_only_widens_ocean_windows():
    for seed in range(5):
        tight = generate(GenConfig(seed=seed, n_products=50, dwell_limit=0))
        loose = generate(GenConfig(seed=seed, n_products=50, dwell_limit=2))
        for a, b in zip(tight.orders, loose.orders):
            ra, rb = time_ranges(tight, a), time_ranges(loose, b)
            assert ra.air == rb.air
            if ra.lcl is not None:
                assert rb.lcl[0] <= ra.lcl[0] and rb.lcl[1] == ra.lcl[1]


def test_streams_are_independent_per_dimension():
    a = stream(1, "weight").random(5)
    b = stream(1, "volume").random(5)
    assert not np.allclose(a, b)
    assert gen.GENERATOR_VERSION
