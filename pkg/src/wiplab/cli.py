"""Command-line interface.

Subcommands:
    simulate         run one chasing-task simulation and report metrics
    record           simulate and also save the foot-sample trace
    replay           feed a saved trace back through the pipeline
    calibrate-bands  band counts needed to hit force targets
    acceptance       run the named acceptance checks

Configuration precedence is flags > scenario file > built-in defaults.
Exit codes: 0 success, 1 failed acceptance check, 2 bad input, 3 runtime
failure (diverged/non-terminating/empty-window runs).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace
from typing import Any

from . import acceptance as acceptance_mod
from .core import (
    DivergedSimulation,
    EmptyWindow,
    InvalidRate,
    NegativeExtension,
    NonMonotonicTime,
    NonPositiveGain,
    NonPositiveHeight,
    NonTermination,
    OutOfRangeHeight,
    Variant,
    WipParams,
    WrongArity,
    ZeroExtension,
)
from .elastic import ElasticRig, PullDirection, bands_for_target, rig_force
from .harness import DEFAULT_TIMESTEP, ChaseScenario, FrameRow, replay_trace, run_chase
from .synth import WalkerAgent
from .traceio import (
    TraceParseError,
    load_trace,
    params_from_echo,
    parse_rig_spec,
    report_document,
    save_report,
    save_trace,
    scenario_echo,
    scenario_from_echo,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_RUNTIME = 3

# Keys a JSON scenario file may set, with their defaults. target_speed has
# no default: it must come from the file or from --target.
RUN_DEFAULTS: dict[str, Any] = {
    "variant": "shef",
    "target_speed": None,
    "user_height": 1.72,
    "speed_gain": 1.0,
    "natural_visual_gain": 1.0,
    "noise_sd": 0.0,
    "seed": 0,
    "rig": "none",
    "timestep": DEFAULT_TIMESTEP,
    "prep_distance": 5.0,
    "prep_duration": 10.0,
    "countdown": 3.0,
    "chase_duration": 20.0,
    "circle_lead": 1.0,
    "sphere_radius": 0.25,
}

# (flag attribute, config key) pairs for the run subcommands.
_FLAG_TO_KEY = (
    ("variant", "variant"),
    ("target", "target_speed"),
    ("user_height", "user_height"),
    ("gain", "speed_gain"),
    ("natural_gain", "natural_visual_gain"),
    ("noise", "noise_sd"),
    ("seed", "seed"),
    ("rig", "rig"),
    ("timestep", "timestep"),
)


def _load_scenario_file(path: str) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: scenario file must be a JSON object")
    unknown = sorted(set(data) - set(RUN_DEFAULTS))
    if unknown:
        raise ValueError(f"{path}: unknown scenario keys: {', '.join(unknown)}")
    return data


def _merge_run_config(args: argparse.Namespace) -> dict[str, Any]:
    config = dict(RUN_DEFAULTS)
    if getattr(args, "scenario", None):
        config.update(_load_scenario_file(args.scenario))
    for flag, key in _FLAG_TO_KEY:
        value = getattr(args, flag, None)
        if value is not None:
            config[key] = value
    if config["target_speed"] is None:
        raise ValueError(
            "no target speed: pass --target or a scenario file with target_speed"
        )
    return config


def _build_run(
    config: dict[str, Any],
) -> tuple[WipParams, ChaseScenario, WalkerAgent, ElasticRig | None]:
    params = WipParams(
        user_height=float(config["user_height"]),
        variant=Variant(str(config["variant"])),
        speed_gain=float(config["speed_gain"]),
        natural_visual_gain=float(config["natural_visual_gain"]),
    )
    scenario = ChaseScenario(
        target_speed=float(config["target_speed"]),
        prep_distance=float(config["prep_distance"]),
        prep_duration=float(config["prep_duration"]),
        countdown=float(config["countdown"]),
        chase_duration=float(config["chase_duration"]),
        circle_lead=float(config["circle_lead"]),
        sphere_radius=float(config["sphere_radius"]),
        timestep=float(config["timestep"]),
    )
    rig = parse_rig_spec(str(config["rig"]))
    agent = WalkerAgent(
        params, noise_sd=float(config["noise_sd"]), seed=int(config["seed"]), rig=rig
    )
    return params, scenario, agent, rig


def _emit_report(out: str | None, document: dict[str, Any]) -> None:
    text = save_report(out, document)
    if out is None:
        print(text)
    else:
        print(f"wrote {out}", file=sys.stderr)


def _write_frames(path: str, rows: list[FrameRow]) -> None:
    columns = (
        "time,stage,height_left,height_right,est_frequency,est_step_height,"
        "raw_speed,output_speed,position,sphere,error"
    )
    lines = [columns]
    for r in rows:
        lines.append(
            f"{r.time!r},{r.stage.value},{r.height_left!r},{r.height_right!r},"
            f"{r.est_frequency!r},{r.est_step_height!r},{r.raw_speed!r},"
            f"{r.output_speed!r},{r.position!r},{r.sphere!r},{r.error!r}"
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _merge_run_config(args)
    params, scenario, agent, rig = _build_run(config)
    report, _log = run_chase(scenario, agent, params)
    echo = scenario_echo(
        scenario,
        params,
        seed=int(config["seed"]),
        noise_sd=float(config["noise_sd"]),
        rig=rig,
    )
    _emit_report(args.out, report_document("chase", echo, asdict(report)))
    return EXIT_OK


def cmd_record(args: argparse.Namespace) -> int:
    config = _merge_run_config(args)
    params, scenario, agent, rig = _build_run(config)
    report, log = run_chase(scenario, agent, params)
    echo = scenario_echo(
        scenario,
        params,
        seed=int(config["seed"]),
        noise_sd=float(config["noise_sd"]),
        rig=rig,
    )
    save_trace(
        args.trace_out,
        log.samples,
        sample_rate_hint=1.0 / scenario.timestep,
        user_height=params.user_height,
        scenario=echo,
    )
    print(f"wrote {args.trace_out}", file=sys.stderr)
    if args.out is not None:
        _emit_report(args.out, report_document("chase", echo, asdict(report)))
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    header, samples = load_trace(args.trace)
    params = params_from_echo(header.scenario)
    if args.variant is not None:
        params = replace(params, variant=Variant(args.variant))
    if args.user_height is not None:
        params = replace(params, user_height=args.user_height)
    if args.gain is not None:
        params = replace(params, speed_gain=args.gain)
    if args.natural_gain is not None:
        params = replace(params, natural_visual_gain=args.natural_gain)
    scenario = scenario_from_echo(header.scenario)
    report, log = replay_trace(samples, params, scenario)
    _emit_report(
        args.out, report_document("replay", dict(header.scenario), asdict(report))
    )
    if args.frames_out is not None:
        _write_frames(args.frames_out, log.rows)
        print(f"wrote {args.frames_out}", file=sys.stderr)
    return EXIT_OK


def cmd_calibrate_bands(args: argparse.Namespace) -> int:
    direction = PullDirection(args.direction)
    height = args.height
    if height is None:
        height = 0.156 if direction is PullDirection.DOWNWARD else 0.0
    try:
        targets = [float(part) for part in args.targets.split(",") if part.strip()]
    except ValueError as exc:
        raise ValueError(f"bad --targets value {args.targets!r}: {exc}") from exc
    if not targets:
        raise ValueError("--targets must list at least one force in kgf")

    rows: list[dict[str, Any]] = []
    for target_kgf in targets:
        count = bands_for_target(direction, target_kgf, height)
        reading = rig_force(ElasticRig(direction=direction, band_count=count), height)
        achieved_kgf = reading.magnitude / 9.81
        rows.append(
            {
                "direction": direction.value,
                "target_kgf": target_kgf,
                "foot_height_m": height,
                "bands": count,
                "achieved_kgf": achieved_kgf,
            }
        )
    print(f"{'direction':<10} {'target_kgf':>10} {'foot_height_m':>14} {'bands':>6} {'achieved_kgf':>13}")
    for row in rows:
        print(
            f"{row['direction']:<10} {row['target_kgf']:>10.3f} "
            f"{row['foot_height_m']:>14.3f} {row['bands']:>6d} "
            f"{row['achieved_kgf']:>13.3f}"
        )
    if args.out is not None:
        scenario = {"direction": direction.value, "foot_height_m": height}
        _emit_report(args.out, report_document("calibration", scenario, {}, rows=rows))
    return EXIT_OK


def cmd_acceptance(args: argparse.Namespace) -> int:
    only: list[str] | None = args.only or None
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                try:
                    config = json.load(fh)
                except json.JSONDecodeError as exc:
                    raise ValueError(
                        f"{args.config}: line {exc.lineno}: {exc.msg}"
                    ) from exc
        except FileNotFoundError:
            print(
                f"warning: config {args.config} not found, using defaults",
                file=sys.stderr,
            )
            config = {}
        if not isinstance(config, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
        if only is None and "only" in config:
            only = list(config["only"])
    if only is not None:
        unknown = sorted(set(only) - set(acceptance_mod.CHECK_NAMES))
        if unknown:
            raise ValueError(f"unknown check names: {', '.join(unknown)}")

    results = acceptance_mod.run_all(only)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"[{status}] {result.name}: {result.detail}")
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", metavar="FILE", help="JSON scenario file")
    parser.add_argument("--variant", choices=[v.value for v in Variant])
    parser.add_argument("--target", type=float, help="chase target speed, m/s")
    parser.add_argument("--user-height", dest="user_height", type=float, metavar="M")
    parser.add_argument("--gain", type=float, help="speed gain applied to raw speed")
    parser.add_argument(
        "--natural-gain", dest="natural_gain", type=float, metavar="G",
        help="natural visual gain multiplier",
    )
    parser.add_argument("--noise", type=float, metavar="SD", help="height noise SD, m")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--rig", help="elastic rig: none, up:<bands>, or down:<bands>")
    parser.add_argument("--timestep", type=float, metavar="S")
    parser.add_argument("--out", metavar="FILE", help="write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wiplab",
        description="Walking-in-place locomotion laws and simulation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one chasing-task simulation")
    _add_run_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("record", help="simulate and save the foot-sample trace")
    _add_run_flags(p)
    p.add_argument("--trace-out", dest="trace_out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_record)

    p = sub.add_parser("replay", help="re-run a saved trace through the pipeline")
    p.add_argument("trace", help="trace file written by record")
    p.add_argument("--variant", choices=[v.value for v in Variant])
    p.add_argument("--user-height", dest="user_height", type=float, metavar="M")
    p.add_argument("--gain", type=float)
    p.add_argument("--natural-gain", dest="natural_gain", type=float, metavar="G")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--frames-out", dest="frames_out", metavar="FILE",
                   help="also write per-frame rows as CSV")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("calibrate-bands", help="band counts for force targets")
    p.add_argument("--direction", required=True, choices=["up", "down"])
    p.add_argument("--targets", default="1,2,3", metavar="KGF[,KGF...]",
                   help="comma-separated force targets in kgf (default 1,2,3)")
    p.add_argument("--height", type=float, metavar="M",
                   help="foot height to calibrate at (default 0.156 down, 0.0 up)")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_calibrate_bands)

    p = sub.add_parser("acceptance", help="run the acceptance checks")
    p.add_argument("--config", metavar="FILE",
                   help='optional JSON config, e.g. {"only": ["EQ1-ANCHOR"]}')
    p.add_argument("--only", action="append", choices=acceptance_mod.CHECK_NAMES,
                   help="run only this check (repeatable)")
    p.set_defaults(func=cmd_acceptance)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TraceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (
        NonMonotonicTime,
        OutOfRangeHeight,
        NonPositiveGain,
        NonPositiveHeight,
        NegativeExtension,
        ZeroExtension,
        InvalidRate,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (DivergedSimulation, EmptyWindow, NonTermination, WrongArity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
