"""Command-line entry point: ``runway-planner <command> ...``.

Exit codes: 0 success, 2 validation error, 3 parse error, 4 no sustainable
policy or unstable queue, 5 infeasible schedule.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import sim
from .day_planner import DaySchedule, RunwayConfiguration, SlotDemand, plan_day
from .domains import (
    SlotContext,
    congestion_rates,
    delay_policy_domain,
    secondary_demand_domain,
    sustainable_policy_domain,
)
from .envelope import validate_envelope
from .errors import (
    DegenerateObjective,
    EmptyDomain,
    InfeasibleSchedule,
    InfeasibleTolerance,
    InvalidInput,
    NoSustainablePolicy,
    UnstableSystem,
)
from .slot_optimizer import DelayCosts, optimize_slot

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARSE = 3
EXIT_NO_POLICY = 4
EXIT_INFEASIBLE = 5

SEED_ENV = "RUNWAY_PLANNER_SEED"


class ParseError(Exception):
    pass


class ValidationError(Exception):
    pass


@dataclass
class Config:
    configurations: dict[str, RunwayConfiguration]
    p_a: float
    p_d: float
    costs: DelayCosts
    slot_costs: DelayCosts
    slot_minutes: float = 15.0


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc


def _number(obj, key, where):
    try:
        value = obj[key]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{where}: missing field {key!r}") from exc
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: field {key!r} must be a number, got {value!r}")
    return float(value)


def _costs(obj, where):
    try:
        return DelayCosts(_number(obj, "c_a", where), _number(obj, "c_d", where))
    except InvalidInput as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def load_config(path) -> Config:
    raw = _read_json(path)
    if not isinstance(raw, dict) or not isinstance(raw.get("configurations"), list):
        raise ParseError(f"{path}: expected an object with a 'configurations' list")
    if not raw["configurations"]:
        raise ValidationError(f"{path}: no configurations")
    configs = {}
    for i, entry in enumerate(raw["configurations"]):
        where = f"configurations[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise ParseError(f"{where}: missing or empty 'name'")
        if name in configs:
            raise ValidationError(f"{where}: duplicate configuration name {name!r}")
        points = entry.get("control_points")
        if not isinstance(points, list) or not all(
            isinstance(p, list) and len(p) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in p)
            for p in points
        ):
            raise ParseError(f"{where}: 'control_points' must be a list of [x, y] numbers")
        q_a, q_d = _number(entry, "q_a", where), _number(entry, "q_d", where)
        try:
            env = validate_envelope(points, name)
            configs[name] = RunwayConfiguration(env, q_a, q_d)
        except InvalidInput as exc:
            raise ValidationError(f"{where} ({name}): {exc}") from exc

    tol = raw.get("tolerances")
    p_a, p_d = _number(tol, "p_a", "tolerances"), _number(tol, "p_d", "tolerances")
    if not (p_a > 0 and p_d > 0):
        raise ValidationError(f"tolerances must be positive, got ({p_a}, {p_d})")
    costs = _costs(raw.get("costs"), "costs")
    slot_costs = _costs(raw["slot_costs"], "slot_costs") if "slot_costs" in raw else costs
    slot_minutes = _number(raw, "slot_minutes", "config") if "slot_minutes" in raw else 15.0
    return Config(configs, p_a, p_d, costs, slot_costs, slot_minutes)


def load_schedule(path, config: Config) -> DaySchedule:
    raw = _read_json(path)
    if not isinstance(raw, dict) or not isinstance(raw.get("slots"), list):
        raise ParseError(f"{path}: expected an object with a 'slots' list")
    slots = []
    for i, entry in enumerate(raw["slots"]):
        where = f"slots[{i}]"
        lam_a, lam_d = _number(entry, "lambda_a", where), _number(entry, "lambda_d", where)
        name = entry.get("config")
        if not isinstance(name, str):
            raise ParseError(f"{where}: missing 'config' name")
        if name not in config.configurations:
            raise ValidationError(f"{where}: unknown configuration {name!r}")
        try:
            slots.append(SlotDemand(lam_a, lam_d, name))
        except InvalidInput as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    try:
        return DaySchedule(tuple(slots), config.p_a, config.p_d)
    except InvalidInput as exc:
        raise ValidationError(str(exc)) from exc


def _pick(config: Config, name: str | None) -> RunwayConfiguration:
    if name is None:
        return next(iter(config.configurations.values()))
    if name not in config.configurations:
        raise ValidationError(f"unknown configuration {name!r}")
    return config.configurations[name]


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def _write_polyline(path: Path, points) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y"])
        for x, y in points:
            writer.writerow([repr(float(x)), repr(float(y))])


def cmd_validate(args) -> int:
    config = load_config(args.config)
    for name, cfg in config.configurations.items():
        env = cfg.envelope
        print(
            f"{name}: J={env.n_segments} mu_a_max={_fmt(env.mu_a_max)} "
            f"mu_d_max={_fmt(env.mu_d_max)} q_a={_fmt(cfg.q_a)} q_d={_fmt(cfg.q_d)}"
        )
    print(f"tolerances: p_a={_fmt(config.p_a)} p_d={_fmt(config.p_d)}")
    return EXIT_OK


def cmd_domains(args) -> int:
    config = load_config(args.config)
    cfg = _pick(config, args.config_name)
    try:
        ctx = SlotContext(cfg.envelope, cfg.q_a, cfg.q_d, config.p_a, config.p_d,
                          args.lambda_a, args.lambda_d)
    except InvalidInput as exc:
        raise ValidationError(str(exc)) from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    _write_polyline(out / "envelope.csv", cfg.envelope.points)
    try:
        demand = secondary_demand_domain(cfg.envelope, cfg.q_a, cfg.q_d, config.p_a, config.p_d)
        _write_polyline(out / "secondary_demand.csv", demand.vertices)
    except InfeasibleTolerance as exc:
        print(f"secondary demand domain: empty ({exc})")

    mu_a_cong, mu_d_cong = congestion_rates(ctx)
    print(f"congestion corner: mu_a_cong={_fmt(mu_a_cong)} mu_d_cong={_fmt(mu_d_cong)}")
    try:
        policy = sustainable_policy_domain(ctx)
        delay = delay_policy_domain(ctx)
    except NoSustainablePolicy:
        print("verdict: no sustainable policy")
        return EXIT_NO_POLICY
    _write_polyline(out / "sustainable_policy.csv", policy.points)
    _write_polyline(out / "delay_policy.csv", delay.vertices)
    print(f"delay caps: p_a={_fmt(config.p_a)} p_d={_fmt(config.p_d)}")
    print("verdict: sustainable policy exists")
    return EXIT_OK


def cmd_optimize_slot(args) -> int:
    config = load_config(args.config)
    cfg = _pick(config, args.config_name)
    try:
        ctx = SlotContext(cfg.envelope, cfg.q_a, cfg.q_d, config.p_a, config.p_d,
                          args.lambda_a, args.lambda_d)
    except InvalidInput as exc:
        raise ValidationError(str(exc)) from exc
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateObjective)
        try:
            policy = optimize_slot(ctx, config.slot_costs)
        except NoSustainablePolicy:
            print("verdict: no sustainable policy")
            return EXIT_NO_POLICY
    print(
        f"z_a={_fmt(policy.z_a)} z_d={_fmt(policy.z_d)} "
        f"mu_a={_fmt(policy.mu_a)} mu_d={_fmt(policy.mu_d)} cost={_fmt(policy.expected_cost)}"
    )
    return EXIT_OK


def plan_to_dict(plan, day: DaySchedule, config: Config) -> dict:
    t = plan.transfers
    rounded_a, rounded_d = t.rounded()
    return {
        "slot_minutes": config.slot_minutes,
        "n_slots": day.n_slots,
        "tolerances": {"p_a": config.p_a, "p_d": config.p_d},
        "transfers": {"s_a": [float(v) for v in t.s_a], "s_d": [float(v) for v in t.s_d]},
        "rounded_transfers": {
            "s_a": [int(v) for v in rounded_a],
            "s_d": [int(v) for v in rounded_d],
        },
        "secondary_schedule": [
            {"lambda_a": float(a), "lambda_d": float(d), "config": slot.config_id}
            for a, d, slot in zip(t.lambda2_a, t.lambda2_d, day.slots)
        ],
        "policies": [
            {
                "slot": i,
                "z_a": p.z_a,
                "z_d": p.z_d,
                "mu_a": p.mu_a,
                "mu_d": p.mu_d,
                "expected_cost": p.expected_cost,
                "vertex": i in plan.vertex_slots,
                "within_tolerance": i not in plan.chord_slots,
            }
            for i, p in enumerate(plan.policies)
        ],
        "total_transfer_cost": plan.total_transfer_cost,
        "total_delay_cost": plan.total_delay_cost,
    }


def cmd_plan_day(args) -> int:
    config = load_config(args.config)
    day = load_schedule(args.schedule, config)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateObjective)
        try:
            plan = plan_day(day, config.configurations, config.costs, config.slot_costs)
        except InfeasibleTolerance as exc:
            raise ValidationError(str(exc)) from exc
        except InfeasibleSchedule as exc:
            print(f"verdict: infeasible schedule ({exc})")
            return EXIT_INFEASIBLE
    payload = plan_to_dict(plan, day, config)
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        print(
            f"slots={day.n_slots} transfer_cost={_fmt(plan.total_transfer_cost)} "
            f"delay_cost={_fmt(plan.total_delay_cost)} -> {args.out}"
        )
    return EXIT_OK


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return sim.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise ParseError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        model = sim.ArrivalServiceModel.from_rates(args.lam, args.mu, args.qc, args.qs)
        report = sim.compare_to_kingman(model, args.n, args.warmup, seed)
    except UnstableSystem as exc:
        print(f"verdict: unstable system ({exc})")
        return EXIT_NO_POLICY
    except InvalidInput as exc:
        raise ValidationError(str(exc)) from exc
    print(
        f"simulated_z={_fmt(report.simulated_z)} formula_z={_fmt(report.formula_z)} "
        f"relative_gap={_fmt(report.relative_gap)} "
        f"mean_queue_length={_fmt(report.result.mean_queue_length)} seed={seed}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="runway-planner", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a configuration file")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("domains", help="write envelope and derived domains as CSV polylines")
    p.add_argument("config")
    p.add_argument("--lambda-a", type=float, required=True)
    p.add_argument("--lambda-d", type=float, required=True)
    p.add_argument("--config-name")
    p.add_argument("--out", default="domains")
    p.set_defaults(func=cmd_domains)

    p = sub.add_parser("optimize-slot", help="best service policy for one slot")
    p.add_argument("config")
    p.add_argument("--lambda-a", type=float, required=True)
    p.add_argument("--lambda-d", type=float, required=True)
    p.add_argument("--config-name")
    p.set_defaults(func=cmd_optimize_slot)

    p = sub.add_parser("plan-day", help="minimal-cost slot transfers for a day schedule")
    p.add_argument("config")
    p.add_argument("schedule")
    p.add_argument("--out", default="plan.json", help="output file, '-' for stdout")
    p.set_defaults(func=cmd_plan_day)

    p = sub.add_parser("simulate", help="compare a simulated queue with the Kingman formula")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--qc", type=float, default=2.0)
    p.add_argument("--qs", type=float, default=2.0)
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--warmup", type=float, default=sim.DEFAULT_WARMUP_FRACTION,
                   help="fraction of arrivals discarded")
    p.add_argument("--seed", type=int, help=f"defaults to ${SEED_ENV} or {sim.DEFAULT_SEED}")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, EmptyDomain) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
