"""Control laws mapping gait estimates to virtual locomotion speed.

Two variants share the same frequency core: the base law squares the
height-normalized cadence, and the height-scaled law multiplies it by the
step height relative to a 0.1 m reference. A separate gain stage applies
the experiment gain and the natural visual gain.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    GaitEstimate,
    NonPositiveGain,
    NonPositiveHeight,
    Variant,
    WipParams,
)


@dataclass(frozen=True)
class SpeedSample:
    time: float          # s
    raw_speed: float     # m/s, law output before gains
    output_speed: float  # m/s, after gains


def gud_speed(
    step_frequency: float,
    user_height: float,
    *,
    ref_frequency: float = 1.57,
    ref_user_height: float = 1.72,
) -> float:
    """Virtual speed from cadence and body height alone.

    Normalized so the reference cadence at the reference height gives
    exactly 1 m/s. Quadratic in both factors, so doubling the cadence
    quadruples the speed.
    """
    if user_height <= 0.0:
        raise NonPositiveHeight(f"user height {user_height} must be > 0")
    if step_frequency < 0.0:
        raise ValueError("step frequency must be >= 0")
    scaled = (step_frequency / ref_frequency) * (user_height / ref_user_height)
    return scaled * scaled


def shef_speed(
    step_frequency: float,
    user_height: float,
    step_height: float,
    *,
    ref_frequency: float = 1.57,
    ref_user_height: float = 1.72,
    ref_step_height: float = 0.1,
) -> float:
    """Height-scaled variant: the base law times step height over reference.

    Identical to gud_speed when step_height equals the reference, which is
    what makes the two variants comparable at the same gait.
    """
    if step_height < 0.0:
        raise ValueError("step height must be >= 0")
    base = gud_speed(
        step_frequency,
        user_height,
        ref_frequency=ref_frequency,
        ref_user_height=ref_user_height,
    )
    return base * (step_height / ref_step_height)


def apply_gain(speed: float, gain: float, natural_visual_gain: float = 1.0) -> float:
    """Output stage: speed times the experiment gain times the natural gain."""
    if gain <= 0.0 or natural_visual_gain <= 0.0:
        raise NonPositiveGain("gains must be > 0")
    return speed * gain * natural_visual_gain


def output_speed(params: WipParams, estimate: GaitEstimate) -> SpeedSample:
    """Dispatch one gait estimate through the configured law and gain stage.

    Stale estimates short-circuit to zero output so a stopped user stops
    moving immediately.
    """
    if estimate.stale:
        return SpeedSample(time=estimate.as_of, raw_speed=0.0, output_speed=0.0)
    if params.variant is Variant.GUD:
        raw = gud_speed(
            estimate.step_frequency,
            params.user_height,
            ref_frequency=params.ref_frequency,
            ref_user_height=params.ref_user_height,
        )
    else:
        raw = shef_speed(
            estimate.step_frequency,
            params.user_height,
            estimate.step_height,
            ref_frequency=params.ref_frequency,
            ref_user_height=params.ref_user_height,
            ref_step_height=params.ref_step_height,
        )
    out = apply_gain(raw, params.speed_gain, params.natural_visual_gain)
    return SpeedSample(time=estimate.as_of, raw_speed=raw, output_speed=out)
