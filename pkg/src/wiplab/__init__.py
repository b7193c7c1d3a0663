"""Walking-in-place locomotion: speed laws, gait tracking, and a simulation
harness for chasing-task and slope-gain experiments."""

from .core import (
    DivergedSimulation,
    EmptyWindow,
    Foot,
    FootSample,
    GaitEstimate,
    InvalidRate,
    NegativeExtension,
    NonMonotonicTime,
    NonPositiveGain,
    NonPositiveHeight,
    NonTermination,
    OutOfRangeHeight,
    Variant,
    WipError,
    WipParams,
    WrongArity,
    ZeroExtension,
)
from .elastic import (
    ElasticRig,
    ForceReading,
    PullDirection,
    band_force_kgf,
    bands_for_target,
    rig_force,
)
from .gait import GaitConfig, GaitTracker, Phase, StepEvent
from .harness import (
    AdjustmentProtocol,
    ChaseScenario,
    MetricsReport,
    PinnedAgent,
    RunLog,
    SeriesKind,
    SlopeKind,
    SlopeProfile,
    aggregate_adjustments,
    compute_metrics,
    make_reference_judge,
    replay_trace,
    run_adjustment,
    run_chase,
    run_slope_bout,
)
from .speed import apply_gain, gud_speed, output_speed, shef_speed
from .synth import (
    AgentCaps,
    GaitProgram,
    WalkerAgent,
    chase_policy,
    plan_gait,
    synth_trace,
)
from .traceio import load_report, load_trace, save_report, save_trace

__version__ = "0.1.0"

__all__ = [
    "AdjustmentProtocol",
    "AgentCaps",
    "ChaseScenario",
    "DivergedSimulation",
    "ElasticRig",
    "EmptyWindow",
    "Foot",
    "FootSample",
    "ForceReading",
    "GaitConfig",
    "GaitEstimate",
    "GaitProgram",
    "GaitTracker",
    "InvalidRate",
    "MetricsReport",
    "NegativeExtension",
    "NonMonotonicTime",
    "NonPositiveGain",
    "NonPositiveHeight",
    "NonTermination",
    "OutOfRangeHeight",
    "Phase",
    "PinnedAgent",
    "PullDirection",
    "RunLog",
    "SeriesKind",
    "SlopeKind",
    "SlopeProfile",
    "StepEvent",
    "Variant",
    "WalkerAgent",
    "WipError",
    "WipParams",
    "WrongArity",
    "ZeroExtension",
    "aggregate_adjustments",
    "apply_gain",
    "band_force_kgf",
    "bands_for_target",
    "chase_policy",
    "compute_metrics",
    "gud_speed",
    "load_report",
    "load_trace",
    "make_reference_judge",
    "output_speed",
    "plan_gait",
    "replay_trace",
    "rig_force",
    "run_adjustment",
    "run_chase",
    "run_slope_bout",
    "save_report",
    "save_trace",
    "shef_speed",
    "synth_trace",
]
