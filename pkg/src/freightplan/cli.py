"""Command-line front end.

Exit codes: 0 success, 2 input or configuration error, 3 capability
refusal (an exact solve beyond the oracle's size limits).
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .generator import ConfigError, GenConfig, Scenario, generate, scenario_suite
from .milp import (
    MipStartError, ModelConfigError, VariantConfig, build_model, write_lp, write_mip_start,
    write_mps, write_names,
)
from .model import InstanceError, PlanCostError, PlanStructureError
from .oracle import OracleLimitError, check_limits
from .reports import (
    COMPARE_FIELDS, SUITE_FIELDS, compare_rows, make_report, solve, suite_rows,
)
from .serialize import (
    SchemaError, artifact_meta, digest, dump_instance, dump_plan, dumps, load_instance, load_plan,
    to_csv,
)

log = logging.getLogger("freightplan")

EXIT_OK, EXIT_INPUT, EXIT_REFUSED = 0, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _load_instance(path: str):
    text = _read(path)
    return load_instance(text), digest(text)


def _gen_config(args, scenario=None) -> GenConfig:
    dests = tuple(args.destination_ids.split(",")) if args.destination_ids else None
    return GenConfig(
        seed=args.seed, n_products=args.products, horizon_months=args.months,
        n_destinations=args.destinations, scenario=scenario or args.scenario,
        dwell_limit=args.dwell, booking_lead=args.lead, port_cap=args.port_cap,
        horizon_weeks=args.weeks, containers_per_lane=args.containers, destinations=dests,
    )


def cmd_gen(args) -> int:
    inst = generate(_gen_config(args))
    _write(args.out, dump_instance(inst))
    log.info("wrote %d orders over %d weeks to %s", len(inst.orders), inst.horizon_weeks, args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst, dig = _load_instance(args.instance)
    if args.solver == "oracle":
        check_limits(inst)
    out = solve(inst, args.solver, args.threads)
    ref = None
    if args.solver == "heuristic" and args.with_oracle:
        try:
            check_limits(inst)
            ref = solve(inst, "oracle").cost.total_cents
        except OracleLimitError as exc:
            log.warning("no reference cost: %s", exc)
    report = make_report(inst, out, dig, ref)
    meta = artifact_meta(dig, solver=args.solver)
    _write(args.out, dump_plan(out.plan, meta))
    doc = {**report.to_dict(), "meta": meta}
    if args.report:
        _write(args.report, dumps(doc))
    else:
        sys.stdout.write(dumps(doc))
    if args.cost_csv:
        row = {**out.cost.as_dict(), "tool_version": __version__, "input_digest": dig}
        _write(args.cost_csv, to_csv([row]))
    return EXIT_OK


def cmd_compare(args) -> int:
    inst, dig = _load_instance(args.instance)
    text = to_csv(compare_rows(inst, args.threads, dig), COMPARE_FIELDS)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_scenario_suite(args) -> int:
    cfg = _gen_config(args, scenario=Scenario.BASELINE)
    cfg.check()
    suite = scenario_suite(cfg)
    cfg_digest = digest(dumps(cfg.to_dict()))
    solvers = ("heuristic", "oracle") if args.solver == "both" else (args.solver,)
    if args.solver in ("oracle", "both"):
        try:
            for inst in suite.values():
                check_limits(inst)
        except OracleLimitError:
            if args.solver == "oracle":
                raise
            log.warning("order book exceeds oracle limits; heuristic rows only")
            solvers = ("heuristic",)
    text = to_csv(suite_rows(suite, solvers, cfg_digest, args.threads), SUITE_FIELDS)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_export(args) -> int:
    inst, dig = _load_instance(args.instance)
    variant = VariantConfig(
        deadline_mode=args.deadline,
        in_transit_mode="inventory" if args.inventory else "original",
        symmetry_breaking=args.symmetry, big_m=args.big_m, gamma=args.gamma, kappa=args.kappa,
        penalty_cents_per_week=args.penalty,
    )
    model = build_model(inst, variant)
    header = [f"freightplan {__version__}", f"input {dig}",
              f"variant deadline={variant.deadline_mode.value} in_transit={variant.in_transit_mode.value}"
              f" symmetry={int(variant.symmetry_breaking)}"]
    start_plan = load_plan(_read(args.mip_start)) if args.mip_start else None
    if start_plan is not None and not args.start_out:
        raise InputError("--mip-start needs --start-out")
    sbuf = io.StringIO()
    if start_plan is not None:
        write_mip_start(start_plan, model, sbuf, header)  # refuses before anything is written
    buf = io.StringIO()
    if args.format == "lp":
        write_lp(model, buf, header)
        renamed = {}
    else:
        renamed = write_mps(model, buf, header)
    _write(args.out, buf.getvalue())
    if renamed:
        names = args.names or args.out + ".names.csv"
        nbuf = io.StringIO()
        write_names(renamed, nbuf)
        _write(names, nbuf.getvalue())
    if start_plan is not None:
        _write(args.start_out, sbuf.getvalue())
    log.info("%d variables, %d rows", len(model.variables), len(model.constraints))
    return EXIT_OK


def _add_gen_flags(p, scenario=True):
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--products", type=int, required=True)
    p.add_argument("--months", type=int, choices=(6, 12), default=6)
    p.add_argument("--weeks", type=int, default=None, help="override the horizon in weeks")
    p.add_argument("--destinations", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--destination-ids", default=None, help="comma-separated destination ids")
    if scenario:
        p.add_argument("--scenario", choices=[s.value for s in Scenario], default="baseline")
    p.add_argument("--containers", type=int, default=1, help="FCL containers per lane")
    p.add_argument("--dwell", type=int, default=2)
    p.add_argument("--lead", type=int, default=4)
    p.add_argument("--port-cap", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="freightplan", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"freightplan {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic instance")
    _add_gen_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("instance")
    p.add_argument("--solver", choices=("heuristic", "oracle"), default="heuristic")
    p.add_argument("--out", required=True, help="plan JSON")
    p.add_argument("--report", default=None, help="report JSON (default: stdout)")
    p.add_argument("--cost-csv", default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--with-oracle", action="store_true",
                   help="also run the oracle to fill heuristic_error")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="heuristic versus oracle table")
    p.add_argument("instance")
    p.add_argument("--out", default=None, help="CSV (default: stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("scenario-suite", help="solve the three scenarios of one order book")
    _add_gen_flags(p, scenario=False)
    p.add_argument("--solver", choices=("heuristic", "oracle", "both"), default="both")
    p.add_argument("--out", default=None, help="CSV (default: stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_scenario_suite)

    p = sub.add_parser("export", help="write the integer program as LP or MPS")
    p.add_argument("instance")
    p.add_argument("--format", choices=("lp", "mps"), default="lp")
    p.add_argument("--out", required=True)
    p.add_argument("--names", default=None, help="MPS name sidecar (default: OUT.names.csv)")
    p.add_argument("--deadline", choices=("strict", "penalized", "service-level"), default="strict")
    p.add_argument("--gamma", type=int, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--penalty", type=int, default=1, help="cents per week of deadline deviation")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--inventory", dest="inventory", action="store_true", default=True)
    mode.add_argument("--original", dest="inventory", action="store_false")
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--big-m", type=int, default=None)
    p.add_argument("--mip-start", default=None, help="plan JSON to turn into a start")
    p.add_argument("--start-out", default=None)
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except OracleLimitError as exc:
        print(f"error: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except SchemaError as exc:
        print(f"error: invalid {exc.kind}:", file=sys.stderr)
        for msg in exc.errors:
            print(f"  {msg}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, ModelConfigError, InstanceError, PlanStructureError, PlanCostError,
            MipStartError, InputError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
