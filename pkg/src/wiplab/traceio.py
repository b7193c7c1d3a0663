"""On-disk formats: foot-sample traces and simulation reports.

Traces are line-oriented text: '#'-prefixed header lines carrying key:value
metadata, a column line, then one row per sample. Floats are written with
repr() so a load/save cycle is lossless. Reports are JSON documents with a
schema_version field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .core import (
    DivergedSimulation,
    Foot,
    FootSample,
    Variant,
    WipError,
    WipParams,
    validate_sample,
)
from .elastic import ElasticRig, PullDirection
from .harness import ChaseScenario

TRACE_MAGIC = "wip-trace v1"
REPORT_SCHEMA_VERSION = 1


class TraceParseError(WipError):
    """Malformed trace file; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class TraceHeader:
    sample_rate_hint: float | None = None
    user_height: float | None = None
    scenario: dict[str, Any] = field(default_factory=dict)  # flat echo, may be empty


def save_trace(
    path: str,
    samples: list[FootSample],
    *,
    sample_rate_hint: float | None = None,
    user_height: float | None = None,
    scenario: dict[str, Any] | None = None,
) -> None:
    """Write samples with a commented header. Rows must be sorted by time."""
    lines = [f"# {TRACE_MAGIC}"]
    if sample_rate_hint is not None:
        lines.append(f"# sample_rate_hint: {sample_rate_hint!r}")
    if user_height is not None:
        lines.append(f"# user_height: {user_height!r}")
    for key, value in (scenario or {}).items():
        lines.append(f"# scenario.{key}: {value!r}")
    lines.append("time,foot,height")
    for s in samples:
        lines.append(f"{s.time!r},{s.foot.value},{s.height!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_scalar(text: str):
    text = text.strip()
    if text.startswith("'") and text.endswith("'") and len(text) >= 2:
        return text[1:-1]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def load_trace(path: str) -> tuple[TraceHeader, list[FootSample]]:
    """Read a trace; raises TraceParseError with a line number on bad input."""
    header = TraceHeader()
    samples: list[FootSample] = []
    saw_magic = False
    saw_columns = False
    last_time: float | None = None
    last_time_per_foot: dict[Foot, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body == TRACE_MAGIC:
                    saw_magic = True
                    continue
                if ":" not in body:
                    raise TraceParseError(f"malformed header {body!r}", lineno)
                key, _, value = body.partition(":")
                key = key.strip()
                parsed = _parse_scalar(value)
                if key == "sample_rate_hint":
                    header.sample_rate_hint = float(parsed)
                elif key == "user_height":
                    header.user_height = float(parsed)
                elif key.startswith("scenario."):
                    header.scenario[key[len("scenario."):]] = parsed
                # unknown header keys are ignored for forward compatibility
                continue
            if not saw_magic:
                raise TraceParseError("missing trace format line", lineno)
            if not saw_columns:
                if line.strip() != "time,foot,height":
                    raise TraceParseError(f"unexpected column line {line!r}", lineno)
                saw_columns = True
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise TraceParseError(f"expected 3 fields, got {len(parts)}", lineno)
            try:
                t = float(parts[0])
                foot = Foot(parts[1].strip())
                h = float(parts[2])
            except (ValueError, KeyError) as exc:
                raise TraceParseError(str(exc), lineno) from exc
            if last_time is not None and t < last_time:
                raise TraceParseError(
                    f"rows not sorted by time ({t!r} after {last_time!r})", lineno
                )
            last_time = t
            sample = FootSample(time=t, foot=foot, height=h)
            try:
                validate_sample(sample, last_time_per_foot.get(foot))
            except WipError as exc:
                raise TraceParseError(str(exc), lineno) from exc
            last_time_per_foot[foot] = t
            samples.append(sample)
    if not saw_magic:
        raise TraceParseError("missing trace format line", 1)
    return header, samples


def _check_finite(obj: Any, path: str = "$") -> None:
    if isinstance(obj, bool):
        return
    if isinstance(obj, (int, float)):
        if not math.isfinite(obj):
            raise DivergedSimulation(f"non-finite value at {path}")
        return
    if isinstance(obj, dict):
        for k, v in obj.items():
            _check_finite(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _check_finite(v, f"{path}[{i}]")


def report_document(kind: str, scenario: dict[str, Any], metrics_fields: dict[str, float],
                    rows: list[dict[str, Any]] | None = None) -> dict[str, Any]:
    """Assemble a report document; numeric fields must be finite."""
    doc: dict[str, Any] = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": kind,
        "scenario": scenario,
        "metrics": metrics_fields,
    }
    if rows is not None:
        doc["rows"] = rows
    _check_finite(doc)
    return doc


def save_report(path: str | None, document: dict[str, Any]) -> str:
    """Serialize a report; writes to path when given, always returns the text."""
    _check_finite(document)
    text = json.dumps(document, indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text


def load_report(path: str) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# --- scenario echo ---------------------------------------------------------
#
# A recorded trace carries enough header metadata to re-run the exact same
# simulation: the chase scenario geometry, the control-law settings, and the
# agent's noise/seed/rig configuration. Keys are flat "scenario.<name>"
# entries in the file.


def rig_spec(rig: ElasticRig | None) -> str:
    """Render a rig as the compact form used on the command line, e.g. 'down:4'."""
    if rig is None or rig.direction is PullDirection.NONE:
        return "none"
    return f"{rig.direction.value}:{rig.band_count}"


def parse_rig_spec(text: str) -> ElasticRig | None:
    """Inverse of rig_spec. Returns None for 'none'; raises ValueError otherwise."""
    text = text.strip().lower()
    if text == "none":
        return None
    direction_text, sep, count_text = text.partition(":")
    if not sep:
        raise ValueError(f"rig spec {text!r} must look like 'down:4', 'up:6', or 'none'")
    try:
        direction = PullDirection(direction_text)
        count = int(count_text)
    except ValueError as exc:
        raise ValueError(f"bad rig spec {text!r}: {exc}") from exc
    if direction is PullDirection.NONE or count < 1:
        raise ValueError(f"rig spec {text!r} needs a pull direction and >= 1 band")
    return ElasticRig(direction=direction, band_count=count)


def scenario_echo(
    scenario: ChaseScenario,
    params: WipParams,
    *,
    seed: int | None = None,
    noise_sd: float | None = None,
    rig: ElasticRig | None = None,
) -> dict[str, Any]:
    """Flatten a run configuration into trace-header key/value pairs."""
    echo: dict[str, Any] = {
        "variant": params.variant.value,
        "user_height": params.user_height,
        "speed_gain": params.speed_gain,
        "natural_visual_gain": params.natural_visual_gain,
        "target_speed": scenario.target_speed,
        "prep_distance": scenario.prep_distance,
        "prep_duration": scenario.prep_duration,
        "countdown": scenario.countdown,
        "chase_duration": scenario.chase_duration,
        "circle_lead": scenario.circle_lead,
        "sphere_radius": scenario.sphere_radius,
        "timestep": scenario.timestep,
    }
    if seed is not None:
        echo["seed"] = seed
    if noise_sd is not None:
        echo["noise_sd"] = noise_sd
    echo["rig"] = rig_spec(rig)
    return echo


def params_from_echo(echo: dict[str, Any]) -> WipParams:
    """Rebuild control-law settings from header metadata (defaults fill gaps)."""
    kwargs: dict[str, Any] = {}
    if "variant" in echo:
        kwargs["variant"] = Variant(echo["variant"])
    for key in ("user_height", "speed_gain", "natural_visual_gain"):
        if key in echo:
            kwargs[key] = float(echo[key])
    return WipParams(**kwargs)


def scenario_from_echo(echo: dict[str, Any]) -> ChaseScenario | None:
    """Rebuild the chase scenario; None when the header has no target_speed."""
    if "target_speed" not in echo:
        return None
    kwargs: dict[str, Any] = {"target_speed": float(echo["target_speed"])}
    for key in (
        "prep_distance",
        "prep_duration",
        "countdown",
        "chase_duration",
        "circle_lead",
        "sphere_radius",
        "timestep",
    ):
        if key in echo:
            kwargs[key] = float(echo[key])
    return ChaseScenario(**kwargs)
