"""Seeded synthetic instances: order book, China-to-US network, scenarios.

Each random dimension (network prices, weights, volumes, timing,
destinations) draws from its own PCG64 stream derived from the seed, and
every order consumes a fixed number of draws per stream. Growing the order
book therefore leaves the earlier orders untouched, and the three scenarios
of one seed share the same order book and the same lane prices.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .model import (
    Edge, FclSpec, Instance, LclSpec, Location, LocationKind, ModeClass, Network, PerKgRate,
    ProductOrder, TransportMode, validate_instance,
)

GENERATOR_VERSION = "1"

ORIGIN = ("CN_INLAND", "China inland supplier")
CHINA_PORTS = (("CN_SHA", "Shanghai Port"), ("CN_TAO", "Qingdao Port"))
US_PORTS = (("US_BAL", "Baltimore Port"), ("US_CHS", "Charleston Port"),
            ("US_EWR", "Newark Port"), ("US_SAV", "Savannah Port"))
DESTINATIONS = (("DST_GVL", "Greenville"), ("DST_BGR", "Bangor"),
                ("DST_ATL", "Atlanta"), ("DST_SCH", "Schenectady"))
CLOSED_PORT = "CN_SHA"

GROUND_WEEKS = 2
OCEAN_WEEKS = 7
AIR_WEEKS = 2
FCL_CAPACITY_KG = 20_000
FCL_FIXED_CENTS = 12_538_00
LCL_BUNKER_CENTS = 1_160_00
LCL_RATE_DOLLARS = (700, 900)
GROUND_RATE_CENTS = (10, 50)
AIR_RATE_CENTS = 1323

LIGHT_SHARE = 0.63
LIGHT_KG = (50, 500)
HEAVY_KG = (500, 5000)
VOLUME_BUCKETS = (  # (probability, coefficient low, coefficient high)
    (0.125, 0.5, 1.5),
    (0.675, 1.5, 3.0),
    (0.10, 3.0, 4.5),
    (0.025, 4.5, 6.0),
    (0.075, 6.0, 7.5),
)
AIR_VOLUMETRIC_RATIO = 3
AIR_MULTIPLIER_E4 = 12121  # 1.2121
GAP_11_SHARE = 0.075
GAP_12_SHARE = 0.40
READY_SHARE_PCT = 35
DEADLINE_SPAN = 2

_STREAMS = {"network": 0, "weight": 1, "volume": 2, "timing": 3, "destination": 4}


class ConfigError(ValueError):
    pass


class Scenario(str, enum.Enum):
    BASELINE = "baseline"
    PORT_CLOSURE = "port-closure"
    NO_FCL = "no-fcl"


@dataclass(frozen=True)
class GenConfig:
    seed: int
    n_products: int
    horizon_months: int = 6
    n_destinations: int = 1
    scenario: Scenario = Scenario.BASELINE
    dwell_limit: int = 2
    booking_lead: int = 4
    port_cap: int = 2
    horizon_weeks: Optional[int] = None  # overrides horizon_months (desk-scale runs)
    containers_per_lane: int = 1
    destinations: Optional[tuple[str, ...]] = None  # ids; default: first n_destinations

    def __post_init__(self):
        if not isinstance(self.scenario, Scenario):
            try:
                object.__setattr__(self, "scenario", Scenario(self.scenario))
            except ValueError:
                raise ConfigError(f"unknown scenario {self.scenario!r}") from None

    def weeks(self) -> int:
        if self.horizon_weeks is not None:
            return self.horizon_weeks
        return {6: 26, 12: 52}[self.horizon_months]

    def check(self) -> None:
        if self.n_products < 0:
            raise ConfigError("n_products must be nonnegative")
        if self.horizon_weeks is None and self.horizon_months not in (6, 12):
            raise ConfigError("horizon_months must be 6 or 12")
        if self.horizon_weeks is not None and self.horizon_weeks <= self.booking_lead:
            raise ConfigError("horizon_weeks must exceed the booking lead")
        if self.n_destinations not in (1, 2, 3):
            raise ConfigError("n_destinations must be 1, 2 or 3")
        if self.destinations is not None:
            known = {d for d, _ in DESTINATIONS}
            if len(self.destinations) != self.n_destinations or not set(self.destinations) <= known:
                raise ConfigError(f"destinations must be {self.n_destinations} of {sorted(known)}")
        if self.dwell_limit < 0 or self.booking_lead < 0 or self.port_cap < 1:
            raise ConfigError("dwell_limit/booking_lead must be >= 0 and port_cap >= 1")
        if self.containers_per_lane < 1:
            raise ConfigError("containers_per_lane must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scenario"] = self.scenario.value
        if d["destinations"] is not None:
            d["destinations"] = list(d["destinations"])
        return d


def stream(seed: int, name: str) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(_STREAMS[name],))))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def sample_gross_weight(rng: np.random.Generator) -> int:
    u_bucket, u_val = rng.random(2)
    lo, hi = LIGHT_KG if u_bucket < LIGHT_SHARE else HEAVY_KG
    return _round_half_up(lo + u_val * (hi - lo))


def sample_volume_coefficient(rng: np.random.Generator) -> float:
    u_bucket, u_val = rng.random(2)
    acc = 0.0
    for p, lo, hi in VOLUME_BUCKETS:
        acc += p
        if u_bucket < acc:
            break
    return float(lo + u_val * (hi - lo))


def volume_from_coefficient(coefficient: float, gross_weight_kg: int) -> float:
    return round(float(coefficient) * gross_weight_kg / 1000, 4)


def sample_volume(rng: np.random.Generator, gross_weight_kg: int) -> float:
    """Volume in CBM: a mixture coefficient times the weight in metric tons."""
    if gross_weight_kg <= 0:
        raise ValueError("weight must be positive")
    return volume_from_coefficient(sample_volume_coefficient(rng), gross_weight_kg)


def air_charge_weight(gross_kg: int, volume_cbm: float) -> float:
    """Chargeable air weight: gross weight, or 1.2121x gross when bulky."""
    if gross_kg <= 0:
        raise ValueError("gross weight must be positive")
    # ratio = volume / (gross / 1000), compared exactly on 1e-4 CBM units
    if int(round(volume_cbm * 10000)) * 1000 < AIR_VOLUMETRIC_RATIO * gross_kg * 10000:
        return float(gross_kg)
    return gross_kg * AIR_MULTIPLIER_E4 / 10000


def sample_timing(rng: np.random.Generator, horizon_weeks: int) -> tuple[int, int, int]:
    """(ready, earliest, latest) weeks.

    When the open-ended branch has no room (late ready weeks on short
    horizons) the gap is clamped to 13 weeks.
    """
    u_ready, u_branch, u_gap = rng.random(3)
    n_ready = READY_SHARE_PCT * horizon_weeks // 100
    ready = min(int(u_ready * n_ready), n_ready - 1) if n_ready > 0 else 0
    if u_branch < GAP_11_SHARE:
        gap = 11
    elif u_branch < GAP_11_SHARE + GAP_12_SHARE:
        gap = 12
    else:
        hi = horizon_weeks - DEADLINE_SPAN - ready
        gap = 13 if hi < 13 else 13 + min(int(u_gap * (hi - 12)), hi - 13)
    earliest = ready + gap
    return ready, earliest, earliest + DEADLINE_SPAN


def build_network(scenario: Scenario | str, n_destinations: int, rng: np.random.Generator,
                  containers_per_lane: int = 1,
                  destinations: Optional[Sequence[str]] = None) -> Network:
    """China-to-US network. Lane prices are drawn for the full baseline
    network in a fixed order and then filtered by scenario, so every
    scenario of one stream sees identical prices on its surviving edges."""
    scenario = Scenario(scenario)
    if n_destinations not in (1, 2, 3):
        raise ConfigError("n_destinations must be 1, 2 or 3")
    if destinations is None:
        destinations = [d for d, _ in DESTINATIONS[:n_destinations]]
    origin = ORIGIN[0]

    first_mile = {port: int(rng.integers(GROUND_RATE_CENTS[0], GROUND_RATE_CENTS[1] + 1))
                  for port, _ in CHINA_PORTS}
    lcl_rate = {(cn, us): int(rng.integers(LCL_RATE_DOLLARS[0], LCL_RATE_DOLLARS[1] + 1)) * 100
                for cn, _ in CHINA_PORTS for us, _ in US_PORTS}
    last_mile = {(us, dst): int(rng.integers(GROUND_RATE_CENTS[0], GROUND_RATE_CENTS[1] + 1))
                 for us, _ in US_PORTS for dst, _ in DESTINATIONS}

    edges: list[Edge] = []
    for cn, _ in CHINA_PORTS:
        edges.append(Edge(f"GND.{origin}.{cn}", origin, cn, TransportMode(ModeClass.GROUND),
                          GROUND_WEEKS, None, PerKgRate(first_mile[cn])))
    for cn, _ in CHINA_PORTS:
        for us, _ in US_PORTS:
            if scenario is not Scenario.NO_FCL:
                for k in range(1, containers_per_lane + 1):
                    edges.append(Edge(f"FCL{k}.{cn}.{us}", cn, us, TransportMode(ModeClass.FCL, k),
                                      OCEAN_WEEKS, FCL_CAPACITY_KG, FclSpec(FCL_FIXED_CENTS, 0)))
            edges.append(Edge(f"LCL.{cn}.{us}", cn, us, TransportMode(ModeClass.LCL),
                              OCEAN_WEEKS, None, LclSpec(LCL_BUNKER_CENTS, lcl_rate[(cn, us)])))
    for us, _ in US_PORTS:
        for dst in destinations:
            edges.append(Edge(f"GND.{us}.{dst}", us, dst, TransportMode(ModeClass.GROUND),
                              GROUND_WEEKS, None, PerKgRate(last_mile[(us, dst)])))
    for dst in destinations:
        edges.append(Edge(f"AIR.{origin}.{dst}", origin, dst, TransportMode(ModeClass.AIR),
                          AIR_WEEKS, None, PerKgRate(AIR_RATE_CENTS)))
    if scenario is Scenario.PORT_CLOSURE:
        edges = [e for e in edges if CLOSED_PORT not in (e.origin, e.dest)]

    labels = dict(CHINA_PORTS + US_PORTS + DESTINATIONS)
    locs = [Location(origin, LocationKind.SUPPLY, ORIGIN[1])]
    locs += [Location(p, LocationKind.IN_TRANSIT, labels[p]) for p, _ in CHINA_PORTS + US_PORTS
             if not (scenario is Scenario.PORT_CLOSURE and p == CLOSED_PORT)]
    locs += [Location(d, LocationKind.DEMAND, labels[d]) for d in destinations]
    return Network(tuple(locs), tuple(edges))


def generate(config: GenConfig) -> Instance:
    config.check()
    weeks = config.weeks()
    dests = list(config.destinations or [d for d, _ in DESTINATIONS[:config.n_destinations]])
    network = build_network(config.scenario, config.n_destinations, stream(config.seed, "network"),
                            config.containers_per_lane, dests)
    r_w, r_v, r_t, r_d = (stream(config.seed, s) for s in ("weight", "volume", "timing", "destination"))
    width = max(4, len(str(config.n_products)))
    orders = []
    for i in range(1, config.n_products + 1):
        w = sample_gross_weight(r_w)
        vol = sample_volume(r_v, w)
        ready, earliest, latest = sample_timing(r_t, weeks)
        dst = dests[int(r_d.integers(0, len(dests)))]
        orders.append(ProductOrder(f"P{i:0{width}d}", ORIGIN[0], dst, w, vol,
                                   air_charge_weight(w, vol), ready, earliest, latest))
    inst = Instance(network, tuple(orders), weeks, config.dwell_limit, config.booking_lead,
                    config.port_cap,
                    meta={"generator": "freightplan.generator", "generator_version": GENERATOR_VERSION,
                          "seed": config.seed, "scenario": config.scenario.value,
                          "config": config.to_dict()})
    validate_instance(inst)
    return inst


def scenario_suite(config: GenConfig) -> dict[Scenario, Instance]:
    """The three scenario variants of one order book."""
    return {s: generate(replace(config, scenario=s)) for s in Scenario}
