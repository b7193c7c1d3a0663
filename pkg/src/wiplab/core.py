"""Shared domain types, units, and validation for the locomotion engine.

All quantities are SI: seconds, meters, Hz. Time is a real number rather
than a frame index, so every consumer stays sample-rate independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

# Trackers may report slightly negative heights while a foot rests on the
# floor; anything below this is a sensor fault, not noise.
HEIGHT_FLOOR = -0.005  # m
HEIGHT_CEILING = 2.0   # m, no foot gets this high


class WipError(Exception):
    """Base class for engine errors."""


class NonMonotonicTime(WipError):
    """Sample time did not advance for its foot."""


class OutOfRangeHeight(WipError):
    """Foot height outside the plausible sensor range."""


class NonPositiveHeight(WipError):
    """User height must be strictly positive."""


class NonPositiveGain(WipError):
    """Speed gains must be strictly positive."""


class NegativeExtension(WipError):
    """Band extension below zero has no meaning."""


class ZeroExtension(WipError):
    """Rig geometry yields no extension, so no target force is attainable."""


class InvalidRate(WipError):
    """Sample rate too low for gait segmentation."""


class DivergedSimulation(WipError):
    """A simulated quantity went non-finite."""


class NonTermination(WipError):
    """Adjustment staircase failed to satisfy its judge within the bout cap."""


class WrongArity(WipError):
    """Aggregation got the wrong number of series."""


class EmptyWindow(WipError):
    """No frames fall inside the measurement window."""


class Foot(Enum):
    LEFT = "L"
    RIGHT = "R"


class Variant(Enum):
    """Which control law converts gait estimates into virtual speed."""

    GUD = "gud"    # frequency-driven
    SHEF = "shef"  # frequency-driven, scaled by step height


@dataclass(frozen=True)
class FootSample:
    """Timestamped vertical height of one foot above the ground plane."""

    time: float    # s
    foot: Foot
    height: float  # m


def validate_sample(sample: FootSample, previous_time_for_foot: float | None) -> FootSample:
    """Check one sample against the stream invariants and return it unchanged.

    ``previous_time_for_foot`` is the time of the last accepted sample for
    the same foot, or None at stream start. Raises NonMonotonicTime or
    OutOfRangeHeight on violation.
    """
    if sample.time < 0.0:
        raise NonMonotonicTime(f"sample time {sample.time!r} precedes stream start")
    if previous_time_for_foot is not None and sample.time <= previous_time_for_foot:
        raise NonMonotonicTime(
            f"foot {sample.foot.value} sample at t={sample.time!r} does not advance "
            f"past t={previous_time_for_foot!r}"
        )
    if not (HEIGHT_FLOOR <= sample.height <= HEIGHT_CEILING):
        raise OutOfRangeHeight(
            f"height {sample.height!r} m outside [{HEIGHT_FLOOR}, {HEIGHT_CEILING}]"
        )
    return sample


@dataclass(frozen=True)
class WipParams:
    """User constants of the speed laws plus the output gain stage.

    The reference values pin the unit of the law: stepping at the reference
    cadence with the reference body height (and, for the height-scaled
    variant, the reference step height) yields exactly 1 m/s before gains.
    """

    user_height: float = 1.72          # m
    variant: Variant = Variant.SHEF
    speed_gain: float = 1.0            # experiment-controlled multiplier
    natural_visual_gain: float = 1.0   # 2.02 in slope-perception scenarios
    ref_frequency: float = 1.57        # Hz
    ref_user_height: float = 1.72      # m
    ref_step_height: float = 0.1       # m

    def __post_init__(self) -> None:
        if not 1.0 <= self.user_height <= 2.5:
            raise ValueError(f"user_height {self.user_height} outside [1.0, 2.5] m")
        if self.speed_gain <= 0.0 or self.natural_visual_gain <= 0.0:
            raise NonPositiveGain("speed gains must be > 0")
        if min(self.ref_frequency, self.ref_user_height, self.ref_step_height) <= 0.0:
            raise ValueError("reference constants must be > 0")


@dataclass(frozen=True)
class GaitEstimate:
    """Instantaneous gait state consumed by the speed laws.

    A stale estimate means no gait activity inside the tracker's stop
    window; staleness forces the frequency to zero so downstream speed is
    zero regardless of history.
    """

    step_frequency: float  # Hz, footfalls per second over both feet
    step_height: float     # m, smoothed apex height
    as_of: float           # s, query time
    stale: bool = False

    def __post_init__(self) -> None:
        if self.step_frequency < 0.0 or self.step_height < 0.0:
            raise ValueError("gait estimates are non-negative")
        if self.stale and self.step_frequency != 0.0:
            object.__setattr__(self, "step_frequency", 0.0)
