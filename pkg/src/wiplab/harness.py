"""Deterministic fixed-timestep simulations: the chasing task, slope walks,
and the gain-adjustment staircase.

A chase run has three stages. During preparation the target sphere mirrors
the walker's own speed from its start position one circle-lead ahead, first
over a fixed distance and then for a fixed duration. The countdown keeps
mirroring (so the chase starts with zero error), and the timed chase moves
the sphere at constant speed while every metric is collected. Metrics are
computed strictly from frames and step events inside the chase window.

Replaying a recorded trace drives the identical kinematics code path, which
is what makes record/replay reports bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Sequence

from .core import (
    DivergedSimulation,
    EmptyWindow,
    Foot,
    FootSample,
    NonTermination,
    WipParams,
    WrongArity,
)
from .gait import GaitConfig, GaitTracker, StepEvent
from .speed import apply_gain, output_speed
from .synth import WalkerAgent, chase_policy

REPLAN_INTERVAL = 0.5  # s, how often agents re-plan their gait
DEFAULT_TIMESTEP = 1.0 / 90.0

# Shipped slope gain presets for quick simulations.
UPHILL_GAIN_DEFAULT = 0.71
DOWNHILL_GAIN_DEFAULT = 1.43
SLOPE_NATURAL_GAIN = 2.02  # natural visual gain used in slope scenarios


class Stage(Enum):
    PREP = "prep"
    COUNTDOWN = "countdown"
    CHASE = "chase"


@dataclass(frozen=True)
class ChaseScenario:
    """Geometry and timing of one chasing-task run."""

    target_speed: float          # m/s, sphere speed during the chase
    prep_distance: float = 5.0   # m walked before the timed prep
    prep_duration: float = 10.0  # s
    countdown: float = 3.0       # s
    chase_duration: float = 20.0 # s, the measurement window
    circle_lead: float = 1.0     # m, catch circle ahead of the walker
    sphere_radius: float = 0.25  # m
    timestep: float = DEFAULT_TIMESTEP

    def __post_init__(self) -> None:
        if self.target_speed < 0.0:
            raise ValueError("target_speed must be >= 0")
        for name in (
            "prep_distance",
            "prep_duration",
            "countdown",
            "chase_duration",
            "circle_lead",
            "sphere_radius",
            "timestep",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0")

    @property
    def prep_walk_time(self) -> float:
        # The walker covers the prep distance at roughly the target speed,
        # so that stage has a deterministic length; a zero target skips it.
        if self.target_speed <= 0.0:
            return 0.0
        return self.prep_distance / self.target_speed

    @property
    def chase_start(self) -> float:
        return self.prep_walk_time + self.prep_duration + self.countdown

    @property
    def total_duration(self) -> float:
        return self.chase_start + self.chase_duration


@dataclass(frozen=True)
class MetricsReport:
    """Per-run summary over the chase window."""

    avg_step_height: float      # m, mean apex of completed steps
    avg_step_frequency: float   # Hz, mean of per-footfall-interval cadences
    avg_target_distance: float  # m, mean |sphere - catch circle center|
    avg_speed: float            # m/s, mean per-frame output speed
    speed_sd: float             # m/s, population SD of per-frame output speed

    def __post_init__(self) -> None:
        for name in (
            "avg_step_height",
            "avg_step_frequency",
            "avg_target_distance",
            "avg_speed",
            "speed_sd",
        ):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class FrameRow:
    time: float
    stage: Stage
    height_left: float
    height_right: float
    est_frequency: float
    est_step_height: float
    raw_speed: float
    output_speed: float
    position: float
    sphere: float
    error: float  # sphere minus catch-circle center; positive means behind


@dataclass
class RunLog:
    """Everything a run produced: per-frame rows, step events, raw samples."""

    scenario: ChaseScenario | None
    rows: list[FrameRow] = field(default_factory=list)
    events: list[StepEvent] = field(default_factory=list)
    samples: list[FootSample] = field(default_factory=list)

    @property
    def window(self) -> tuple[float, float]:
        if self.scenario is None:
            if not self.rows:
                return (0.0, 0.0)
            return (self.rows[0].time, self.rows[-1].time + 1e-9)
        start = self.scenario.chase_start
        return (start, start + self.scenario.chase_duration)


class PinnedAgent:
    """Closed-loop identity double: realizes the commanded speed exactly."""

    pins_output = True

    def __init__(self) -> None:
        self.pinned_speed = 0.0

    def command(self, speed: float) -> None:
        self.pinned_speed = speed

    def samples(self, now: float, dt: float) -> list[FootSample]:
        return []


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _population_sd(values: Sequence[float]) -> float:
    m = _mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / len(values))


def compute_metrics(log: RunLog) -> MetricsReport:
    """Metrics over the chase window only.

    Speed statistics come from per-frame output speeds; step statistics
    come from StepEvents whose re-grounding time falls inside the window.
    Raises EmptyWindow when no frame is in the window.
    """
    start, end = log.window
    rows = [r for r in log.rows if start <= r.time < end]
    if not rows:
        raise EmptyWindow("no frames inside the measurement window")
    speeds = [r.output_speed for r in rows]
    distances = [abs(r.error) for r in rows]

    events = sorted(
        (e for e in log.events if start <= e.end < end), key=lambda e: e.end
    )
    if events:
        avg_height = _mean([e.apex_height for e in events])
    else:
        avg_height = 0.0
    if len(events) >= 2:
        cadences = [
            1.0 / (b.end - a.end) for a, b in zip(events, events[1:]) if b.end > a.end
        ]
        avg_freq = _mean(cadences) if cadences else 0.0
    else:
        avg_freq = 0.0

    return MetricsReport(
        avg_step_height=avg_height,
        avg_step_frequency=avg_freq,
        avg_target_distance=_mean(distances),
        avg_speed=_mean(speeds),
        speed_sd=_population_sd(speeds),
    )


def _stage_at(scenario: ChaseScenario, t: float) -> Stage:
    if t < scenario.prep_walk_time + scenario.prep_duration:
        return Stage.PREP
    if t < scenario.chase_start:
        return Stage.COUNTDOWN
    return Stage.CHASE


def run_chase(
    scenario: ChaseScenario,
    agent,
    params: WipParams,
    *,
    gait_config: GaitConfig | None = None,
) -> tuple[MetricsReport, RunLog]:
    """Simulate one chasing-task run and compute its metrics.

    The agent must provide command(speed) and samples(now, dt). Agents with
    pins_output True bypass the estimation pipeline and realize commanded
    speed exactly; everything else flows through the gait tracker and the
    configured speed law.
    """
    dt = scenario.timestep
    tracker = GaitTracker(gait_config)
    n_frames = int(round(scenario.total_duration / dt))
    replan_every = max(1, int(round(REPLAN_INTERVAL / dt)))
    chase_start = scenario.chase_start

    position = 0.0
    sphere = scenario.circle_lead  # starts at the catch-circle center
    log = RunLog(scenario=scenario)

    agent.command(chase_policy(0.0, scenario.target_speed))
    for k in range(n_frames):
        t = k * dt
        error = sphere - (position + scenario.circle_lead)
        if k % replan_every == 0:
            agent.command(chase_policy(error, scenario.target_speed))

        frame_samples = agent.samples(t, dt)
        height_left = height_right = 0.0
        for s in frame_samples:
            ev = tracker.advance(s)
            if ev is not None:
                log.events.append(ev)
            if s.foot is Foot.LEFT:
                height_left = s.height
            else:
                height_right = s.height
        log.samples.extend(frame_samples)

        if agent.pins_output:
            est_f = est_sh = 0.0
            raw = out = agent.pinned_speed
        else:
            est = tracker.estimate(t)
            spd = output_speed(params, est)
            est_f, est_sh = est.step_frequency, est.step_height
            raw, out = spd.raw_speed, spd.output_speed

        log.rows.append(
            FrameRow(
                time=t,
                stage=_stage_at(scenario, t),
                height_left=height_left,
                height_right=height_right,
                est_frequency=est_f,
                est_step_height=est_sh,
                raw_speed=raw,
                output_speed=out,
                position=position,
                sphere=sphere,
                error=error,
            )
        )

        position += out * dt
        sphere += (scenario.target_speed if t >= chase_start else out) * dt
        if not (math.isfinite(position) and math.isfinite(sphere)):
            raise DivergedSimulation(f"non-finite state at t={t:.3f}")

    return compute_metrics(log), log


def replay_trace(
    samples: Sequence[FootSample],
    params: WipParams,
    scenario: ChaseScenario | None = None,
    *,
    gait_config: GaitConfig | None = None,
) -> tuple[MetricsReport, RunLog]:
    """Feed recorded samples through gait and speed in file order.

    With a scenario the full chase kinematics are reconstructed frame by
    frame in the same operation order as run_chase, so the resulting
    MetricsReport is bit-identical to the recording run's. Without one the
    whole trace is the measurement window and the target distance is zero.
    """
    if not samples:
        raise EmptyWindow("trace holds no samples")
    tracker = GaitTracker(gait_config)
    log = RunLog(scenario=scenario)
    log.samples = list(samples)

    ticks: list[tuple[float, list[FootSample]]] = []
    for s in samples:
        if ticks and ticks[-1][0] == s.time:
            ticks[-1][1].append(s)
        else:
            ticks.append((s.time, [s]))

    position = 0.0
    sphere = scenario.circle_lead if scenario is not None else 0.0
    chase_start = scenario.chase_start if scenario is not None else 0.0

    for i, (t, tick_samples) in enumerate(ticks):
        if scenario is not None:
            dt = scenario.timestep
            error = sphere - (position + scenario.circle_lead)
            stage = _stage_at(scenario, t)
        else:
            dt = ticks[i + 1][0] - t if i + 1 < len(ticks) else 0.0
            error = 0.0
            stage = Stage.CHASE

        height_left = height_right = 0.0
        for s in tick_samples:
            ev = tracker.advance(s)
            if ev is not None:
                log.events.append(ev)
            if s.foot is Foot.LEFT:
                height_left = s.height
            else:
                height_right = s.height

        est = tracker.estimate(t)
        spd = output_speed(params, est)

        log.rows.append(
            FrameRow(
                time=t,
                stage=stage,
                height_left=height_left,
                height_right=height_right,
                est_frequency=est.step_frequency,
                est_step_height=est.step_height,
                raw_speed=spd.raw_speed,
                output_speed=spd.output_speed,
                position=position,
                sphere=sphere,
                error=error,
            )
        )

        position += spd.output_speed * dt
        if scenario is not None:
            sphere += (scenario.target_speed if t >= chase_start else spd.output_speed) * dt
        if not math.isfinite(position):
            raise DivergedSimulation(f"non-finite state at t={t:.3f}")

    return compute_metrics(log), log


# ----------------------------------------------------------------------
# slope walking and the gain-adjustment staircase


@dataclass(frozen=True)
class SlopeProfile:
    """Straight virtual path: a flat lead-in, then a uniform grade."""

    gradient_deg: float = 5.71
    slope_length: float = 75.0
    flat_leadin: float = 10.0
    gain_on_slope: float = 1.0

    def __post_init__(self) -> None:
        if self.gain_on_slope <= 0.0:
            raise ValueError("gain_on_slope must be > 0")

    def gain_at(self, position: float) -> float:
        """Speed gain applied at a path position; unity on the lead-in."""
        return 1.0 if position < self.flat_leadin else self.gain_on_slope

    def elevation_at(self, position: float) -> float:
        """Unsigned elevation change at a path position."""
        on_slope = min(max(0.0, position - self.flat_leadin), self.slope_length)
        return on_slope * math.tan(math.radians(self.gradient_deg))


@dataclass(frozen=True)
class SlopeFrame:
    time: float
    raw_speed: float
    output_speed: float
    position: float
    gain: float


def run_slope_bout(
    profile: SlopeProfile,
    params: WipParams,
    agent,
    duration: float,
    *,
    cruise_speed: float = 1.0,
    timestep: float = DEFAULT_TIMESTEP,
    gait_config: GaitConfig | None = None,
) -> list[SlopeFrame]:
    """Walk the slope path for a fixed duration at a constant commanded pace.

    The position-gated profile gain replaces params.speed_gain here; the
    natural visual gain still applies everywhere.
    """
    tracker = GaitTracker(gait_config)
    agent.command(cruise_speed)
    n_frames = int(round(duration / timestep))
    position = 0.0
    frames: list[SlopeFrame] = []
    for k in range(n_frames):
        t = k * timestep
        for s in agent.samples(t, timestep):
            tracker.advance(s)
        est = tracker.estimate(t)
        spd = output_speed(replace(params, speed_gain=1.0), est)
        gain = profile.gain_at(position)
        out = apply_gain(spd.raw_speed, gain, params.natural_visual_gain)
        frames.append(
            SlopeFrame(time=t, raw_speed=spd.raw_speed, output_speed=out,
                       position=position, gain=gain)
        )
        position += out * timestep
        if not math.isfinite(position):
            raise DivergedSimulation(f"non-finite position at t={t:.3f}")
    return frames


class SlopeKind(Enum):
    UPHILL = "uphill"
    DOWNHILL = "downhill"


class SeriesKind(Enum):
    ASCENDING = "ascending"    # gain climbs from a low start
    DESCENDING = "descending"  # gain falls from a high start


# (interval, ascending start, descending start) per slope
STAIRCASE_PRESETS = {
    SlopeKind.UPHILL: (0.07, 0.3, 1.0),
    SlopeKind.DOWNHILL: (0.15, 1.0, 2.5),
}


@dataclass(frozen=True)
class AdjustmentProtocol:
    """One staircase series: walk a bout, judge the gain, step, repeat."""

    slope: SlopeKind
    series: SeriesKind
    initial_gain: float
    interval: float
    judge: Callable[[float], bool]
    bout_duration: float = 5.0
    max_bouts: int = 100

    @classmethod
    def preset(
        cls,
        slope: SlopeKind,
        series: SeriesKind,
        judge: Callable[[float], bool],
        **overrides,
    ) -> "AdjustmentProtocol":
        interval, asc_start, desc_start = STAIRCASE_PRESETS[slope]
        initial = asc_start if series is SeriesKind.ASCENDING else desc_start
        fields = dict(
            slope=slope,
            series=series,
            initial_gain=initial,
            interval=interval,
            judge=judge,
        )
        fields.update(overrides)
        return cls(**fields)


def make_reference_judge(reference: float, tolerance: float) -> Callable[[float], bool]:
    """Synthetic stand-in for a human judgment: satisfied near a reference."""

    def judge(gain: float) -> bool:
        return abs(gain - reference) <= tolerance

    return judge


def run_adjustment(
    protocol: AdjustmentProtocol,
    params: WipParams,
    *,
    profile: SlopeProfile | None = None,
    agent_factory: Callable[[], object] | None = None,
    cruise_speed: float = 1.0,
    timestep: float = DEFAULT_TIMESTEP,
    simulate_bouts: bool = True,
) -> float:
    """Run one staircase series and return the accepted gain.

    Every bout walks the slope at the current gain (a fresh agent per bout,
    the walker is returned to the start), then asks the judge. Gains step
    by the protocol interval in the series direction. Raises NonTermination
    if the judge stays unsatisfied for max_bouts bouts or the gain leaves
    the positive domain.
    """
    base = profile or SlopeProfile()
    direction = 1.0 if protocol.series is SeriesKind.ASCENDING else -1.0
    for k in range(protocol.max_bouts):
        gain = protocol.initial_gain + direction * k * protocol.interval
        if gain <= 0.0:
            raise NonTermination(
                f"staircase left the positive-gain domain after {k} bouts"
            )
        if simulate_bouts:
            agent = agent_factory() if agent_factory is not None else WalkerAgent(params)
            run_slope_bout(
                replace(base, gain_on_slope=gain),
                params,
                agent,
                protocol.bout_duration,
                cruise_speed=cruise_speed,
                timestep=timestep,
            )
        if protocol.judge(gain):
            return gain
    raise NonTermination(f"judge unsatisfied after {protocol.max_bouts} bouts")


def aggregate_adjustments(gains: Iterable[float]) -> float:
    """Mean of exactly four series results (two per direction)."""
    values = list(gains)
    if len(values) != 4:
        raise WrongArity(f"expected 4 adjustment results, got {len(values)}")
    return sum(values) / 4.0
