"""Synthetic gait generation and simulated walker agents.

Foot trajectories are half-sine swings over a stance/swing cycle, feet half
a cycle apart. Agents invert the speed laws to pick a cadence and apex for
a commanded speed, re-plan while chasing, and degrade their execution when
asked for more than their caps can deliver: stepping at the limit is
sloppier than stepping comfortably, which is what makes the frequency-only
variant wobble at high targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import Foot, FootSample, InvalidRate, Variant, WipParams
from .elastic import ElasticRig, PullDirection, rig_force
from .speed import gud_speed, shef_speed

MIN_SAMPLE_RATE = 30.0  # Hz, below this swing segmentation falls apart

# Knob coupling rig force into realized step apex, meters per newton of net
# downward force. Zero disables the coupling.
APEX_FORCE_RESPONSE = 0.002

# How strongly an unachievable command degrades execution noise.
STRAIN_NOISE_GAIN = 3.0


@dataclass(frozen=True)
class GaitProgram:
    """Parameters of one synthetic gait."""

    step_frequency: float   # Hz, footfall cadence over both feet
    apex_height: float      # m
    stance_fraction: float = 0.4   # share of the per-foot cycle on the ground
    phase_offset_between_feet: float = 0.5
    noise_sd: float = 0.0   # m, additive Gaussian on every height sample
    seed: int = 0

    def __post_init__(self) -> None:
        if self.step_frequency < 0.0 or self.apex_height < 0.0 or self.noise_sd < 0.0:
            raise ValueError("gait program values must be >= 0")
        if not 0.0 < self.stance_fraction < 1.0:
            raise ValueError("stance_fraction must be in (0, 1)")


@dataclass(frozen=True)
class AgentCaps:
    """Behavioral limits of a simulated walker."""

    max_frequency: float = 2.2    # Hz
    max_step_height: float = 0.3  # m
    comfort_band: tuple[float, float] = (1.2, 2.2)  # Hz, preferred cadence range

    def __post_init__(self) -> None:
        lo, hi = self.comfort_band
        if not (0.0 <= lo <= hi <= self.max_frequency):
            raise ValueError("comfort band must sit inside [0, max_frequency]")
        if self.max_step_height <= 0.0:
            raise ValueError("max_step_height must be > 0")


def cycle_height(cycle_pos: float, stance_fraction: float, apex: float) -> float:
    """Foot height at a normalized cycle position in [0, 1).

    Zero through stance, then a half sine over the swing: lifts off at the
    stance boundary, peaks mid-swing, lands at the wrap.
    """
    if cycle_pos < stance_fraction:
        return 0.0
    u = (cycle_pos - stance_fraction) / (1.0 - stance_fraction)
    return apex * math.sin(math.pi * u)


def synth_trace(program: GaitProgram, duration: float, sample_rate: float) -> list[FootSample]:
    """Closed-form two-foot trace sampled on a regular grid.

    Deterministic for a given program (the seed fixes the noise stream).
    Left starts at cycle position 0, right at the configured offset, so the
    right foot typically enters mid-swing at t = 0.
    """
    if sample_rate < MIN_SAMPLE_RATE:
        raise InvalidRate(f"sample rate {sample_rate} Hz below {MIN_SAMPLE_RATE} Hz")
    rng = np.random.default_rng(program.seed)
    n = int(round(duration * sample_rate))
    samples: list[FootSample] = []
    for k in range(n):
        t = k / sample_rate
        for foot, offset in ((Foot.LEFT, 0.0), (Foot.RIGHT, program.phase_offset_between_feet)):
            if program.step_frequency <= 0.0:
                h = 0.0
            else:
                # per-foot cycle period is 2/f: two alternating feet share the cadence
                cycle = (t * program.step_frequency / 2.0 + offset) % 1.0
                h = cycle_height(cycle, program.stance_fraction, program.apex_height)
            if program.noise_sd > 0.0:
                h = max(0.0, h + program.noise_sd * rng.standard_normal())
            samples.append(FootSample(time=t, foot=foot, height=h))
    return samples


def plan_gait(target_speed: float, params: WipParams, caps: AgentCaps) -> GaitProgram:
    """Choose cadence and apex that reach target_speed under the caps.

    Inverting the frequency law gives the cadence that would reach the
    target at the reference step height. The frequency-only variant clamps
    that cadence at max_frequency and steps at the reference height. The
    height-scaled variant instead settles on the nearest comfortable
    cadence and makes up the difference with step height, clamped at
    max_step_height.
    """
    if target_speed < 0.0:
        raise ValueError("target speed must be >= 0")
    if target_speed == 0.0:
        return GaitProgram(step_frequency=0.0, apex_height=0.0)
    f_solo = (
        params.ref_frequency
        * math.sqrt(target_speed)
        * (params.ref_user_height / params.user_height)
    )
    if params.variant is Variant.GUD:
        f = min(f_solo, caps.max_frequency)
        apex = params.ref_step_height
    else:
        lo, hi = caps.comfort_band
        f = min(max(f_solo, lo), hi)
        base = gud_speed(
            f,
            params.user_height,
            ref_frequency=params.ref_frequency,
            ref_user_height=params.ref_user_height,
        )
        apex = params.ref_step_height * target_speed / base
        apex = min(max(apex, 0.0), caps.max_step_height)
    return GaitProgram(step_frequency=f, apex_height=apex)


def program_speed(program: GaitProgram, params: WipParams) -> float:
    """Forward-evaluate the configured law on a program's gait parameters."""
    if params.variant is Variant.GUD:
        return gud_speed(
            program.step_frequency,
            params.user_height,
            ref_frequency=params.ref_frequency,
            ref_user_height=params.ref_user_height,
        )
    return shef_speed(
        program.step_frequency,
        params.user_height,
        program.apex_height,
        ref_frequency=params.ref_frequency,
        ref_user_height=params.ref_user_height,
        ref_step_height=params.ref_step_height,
    )


def chase_policy(distance_error: float, target_speed: float, *, gain: float = 0.5) -> float:
    """Commanded speed while chasing: target plus a proportional correction.

    Positive error means the follower is behind. Never commands backwards
    walking; the floor is zero.
    """
    return max(0.0, target_speed + gain * distance_error)


def elastic_apex_shift(
    rig: ElasticRig | None,
    planned_apex: float,
    response: float = APEX_FORCE_RESPONSE,
) -> float:
    """Apex change induced by a rig: downward pull lowers steps, upward
    pull assists them. Force is evaluated at the planned apex height."""
    if rig is None or rig.direction is PullDirection.NONE or response == 0.0:
        return 0.0
    reading = rig_force(rig, planned_apex)
    net_downward = -reading.direction_sign * reading.magnitude
    return -response * net_downward


class WalkerAgent:
    """Phase-continuous stepping generator driven by commanded speed.

    Re-planning changes cadence immediately but latches a new apex only at
    each foot's next lift-off, so emitted heights stay continuous within a
    run. When the plan cannot reach the commanded speed the shortfall
    scales the execution noise up (strain): a walker forced against its
    caps steps raggedly, while one inside its comfort zone does not.
    """

    pins_output = False

    def __init__(
        self,
        params: WipParams,
        caps: AgentCaps | None = None,
        *,
        noise_sd: float = 0.0,
        seed: int = 0,
        rig: ElasticRig | None = None,
        apex_response: float = APEX_FORCE_RESPONSE,
        strain_noise_gain: float = STRAIN_NOISE_GAIN,
        stance_fraction: float = 0.4,
    ):
        self.params = params
        self.caps = caps or AgentCaps()
        self.noise_sd = noise_sd
        self.rig = rig
        self.apex_response = apex_response
        self.strain_noise_gain = strain_noise_gain
        self.stance_fraction = stance_fraction
        self._rng = np.random.default_rng(seed)
        self._cycle = {Foot.LEFT: 0.0, Foot.RIGHT: 0.5}
        self._apex = {Foot.LEFT: 0.0, Foot.RIGHT: 0.0}
        self._in_stance = {Foot.LEFT: True, Foot.RIGHT: True}
        self._pending_apex = 0.0
        self._frequency = 0.0
        self._effective_sd = noise_sd

    def command(self, speed: float) -> GaitProgram:
        """Re-plan for a commanded speed; returns the adopted program."""
        program = plan_gait(speed, self.params, self.caps)
        planned_v = program_speed(program, self.params)
        strain = 0.0
        if speed > 0.0:
            strain = max(0.0, speed - planned_v) / speed
        self._effective_sd = self.noise_sd * (1.0 + self.strain_noise_gain * strain)
        self._frequency = program.step_frequency
        shift = elastic_apex_shift(self.rig, program.apex_height, self.apex_response)
        self._pending_apex = max(0.0, program.apex_height + shift)
        if self._frequency <= 0.0:
            # feet settle; park both cycles at stance start
            self._cycle = {Foot.LEFT: 0.0, Foot.RIGHT: 0.0}
            self._in_stance = {Foot.LEFT: True, Foot.RIGHT: True}
        return replace(program, apex_height=self._pending_apex)

    def samples(self, now: float, dt: float) -> list[FootSample]:
        """Emit both feet at time `now`, then advance the gait clock by dt."""
        out: list[FootSample] = []
        for foot in (Foot.LEFT, Foot.RIGHT):
            cyc = self._cycle[foot]
            in_stance = self._frequency <= 0.0 or cyc < self.stance_fraction
            if not in_stance and self._in_stance[foot]:
                # lift-off: adopt whatever plan is current
                self._apex[foot] = self._pending_apex
            self._in_stance[foot] = in_stance
            h = 0.0 if in_stance else cycle_height(cyc, self.stance_fraction, self._apex[foot])
            if self._effective_sd > 0.0:
                h = max(0.0, h + self._effective_sd * self._rng.standard_normal())
            out.append(FootSample(time=now, foot=foot, height=h))
            if self._frequency > 0.0:
                self._cycle[foot] = (cyc + dt * self._frequency / 2.0) % 1.0
        return out
