"""Synthetic gait generation, gait planning, and the simulated walker."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wiplab.core import Foot, InvalidRate, Variant, WipParams
from wiplab.elastic import ElasticRig, PullDirection
from wiplab.speed import gud_speed
from wiplab.synth import (
    AgentCaps,
    GaitProgram,
    WalkerAgent,
    chase_policy,
    cycle_height,
    elastic_apex_shift,
    plan_gait,
    program_speed,
    synth_trace,
)

GUD = WipParams(variant=Variant.GUD)
SHEF = WipParams(variant=Variant.SHEF)


def test_cycle_height_profile():
    assert cycle_height(0.0, 0.4, 0.2) == 0.0
    assert cycle_height(0.39, 0.4, 0.2) == 0.0
    assert cycle_height(0.7, 0.4, 0.2) == pytest.approx(0.2)  # mid-swing apex
    # symmetric about the apex
    assert cycle_height(0.55, 0.4, 0.2) == pytest.approx(cycle_height(0.85, 0.4, 0.2))


class TestSynthTrace:
    def test_deterministic_per_seed(self):
        program = GaitProgram(step_frequency=2.0, apex_height=0.15, noise_sd=0.003, seed=7)
        assert synth_trace(program, 2.0, 90.0) == synth_trace(program, 2.0, 90.0)

    def test_seed_changes_noise(self):
        a = GaitProgram(step_frequency=2.0, apex_height=0.15, noise_sd=0.003, seed=1)
        b = GaitProgram(step_frequency=2.0, apex_height=0.15, noise_sd=0.003, seed=2)
        assert synth_trace(a, 1.0, 90.0) != synth_trace(b, 1.0, 90.0)

    def test_grid_and_interleaving(self):
        trace = synth_trace(GaitProgram(2.0, 0.15), 1.0, 90.0)
        assert len(trace) == 180  # 90 ticks, both feet
        for k in range(90):
            left, right = trace[2 * k], trace[2 * k + 1]
            assert left.foot is Foot.LEFT and right.foot is Foot.RIGHT
            assert left.time == right.time == k / 90.0

    def test_liftoff_count_over_five_seconds(self):
        trace = synth_trace(GaitProgram(2.0, 0.15), 5.0, 90.0)
        lifts = 0
        prev = {}
        for s in trace:
            if s.foot in prev and prev[s.foot] == 0.0 and s.height > 0.0:
                lifts += 1
            prev[s.foot] = s.height
        assert lifts == 10  # one per foot per second, minus the leading edge

    def test_noise_never_digs_below_ground(self):
        program = GaitProgram(2.0, 0.1, noise_sd=0.05, seed=3)
        assert all(s.height >= 0.0 for s in synth_trace(program, 3.0, 90.0))

    def test_zero_frequency_is_flat(self):
        trace = synth_trace(GaitProgram(0.0, 0.0), 1.0, 90.0)
        assert all(s.height == 0.0 for s in trace)

    def test_rejects_low_sample_rate(self):
        with pytest.raises(InvalidRate):
            synth_trace(GaitProgram(2.0, 0.1), 1.0, 29.9)

    @pytest.mark.parametrize(
        "kwargs", [dict(step_frequency=-1.0, apex_height=0.1),
                   dict(step_frequency=1.0, apex_height=-0.1),
                   dict(step_frequency=1.0, apex_height=0.1, noise_sd=-0.01),
                   dict(step_frequency=1.0, apex_height=0.1, stance_fraction=1.0)]
    )
    def test_program_validation(self, kwargs):
        with pytest.raises(ValueError):
            GaitProgram(**kwargs)


class TestPlanGait:
    def test_zero_target_parks(self):
        program = plan_gait(0.0, SHEF, AgentCaps())
        assert program.step_frequency == 0.0
        assert program.apex_height == 0.0

    def test_negative_target_rejected(self):
        with pytest.raises(ValueError):
            plan_gait(-0.1, SHEF, AgentCaps())

    def test_gud_plans_reference_gait_for_unit_speed(self):
        program = plan_gait(1.0, GUD, AgentCaps())
        assert program.step_frequency == pytest.approx(1.57)
        assert program.apex_height == pytest.approx(0.1)

    def test_gud_cadence_saturates(self):
        program = plan_gait(6.0, GUD, AgentCaps())
        assert program.step_frequency == pytest.approx(2.2)
        assert program_speed(program, GUD) == pytest.approx(gud_speed(2.2, 1.72))

    def test_shef_keeps_cadence_in_comfort_band(self):
        for target in (0.3, 0.5, 1.0, 2.0, 4.0, 6.0):
            program = plan_gait(target, SHEF, AgentCaps())
            lo, hi = AgentCaps().comfort_band
            assert lo <= program.step_frequency <= hi

    def test_shef_apex_saturates(self):
        program = plan_gait(8.0, SHEF, AgentCaps())
        assert program.apex_height == pytest.approx(AgentCaps().max_step_height)

    @settings(max_examples=60, deadline=None)
    @given(target=st.floats(min_value=0.05, max_value=5.5))
    def test_shef_plan_inverts_exactly_until_the_apex_cap(self, target):
        program = plan_gait(target, SHEF, AgentCaps())
        if program.apex_height < AgentCaps().max_step_height:
            assert program_speed(program, SHEF) == pytest.approx(target, rel=1e-9)

    @given(target=st.floats(min_value=0.05, max_value=1.9))
    def test_gud_plan_inverts_below_the_cap(self, target):
        # the 2.2 Hz cap binds above (2.2/1.57)^2 = 1.96 m/s at default height
        program = plan_gait(target, GUD, AgentCaps())
        assert program_speed(program, GUD) == pytest.approx(target, rel=1e-9)

    def test_variants_separate_when_saturated(self):
        gud_v = program_speed(plan_gait(6.0, GUD, AgentCaps()), GUD)
        shef_v = program_speed(plan_gait(6.0, SHEF, AgentCaps()), SHEF)
        assert shef_v / gud_v == pytest.approx(3.0, rel=1e-9)

    def test_taller_user_needs_less_cadence(self):
        short = plan_gait(1.5, WipParams(variant=Variant.GUD, user_height=1.55), AgentCaps())
        tall = plan_gait(1.5, WipParams(variant=Variant.GUD, user_height=2.0), AgentCaps())
        assert tall.step_frequency < short.step_frequency


class TestChasePolicy:
    def test_on_track_commands_target(self):
        assert chase_policy(0.0, 1.5) == 1.5

    def test_behind_speeds_up(self):
        assert chase_policy(2.0, 1.5) == pytest.approx(2.5)

    def test_far_ahead_clamps_to_zero(self):
        assert chase_policy(-10.0, 1.5) == 0.0

    def test_custom_gain(self):
        assert chase_policy(1.0, 1.0, gain=0.25) == pytest.approx(1.25)


class TestElasticApexShift:
    def test_no_rig_no_shift(self):
        assert elastic_apex_shift(None, 0.15) == 0.0

    def test_downward_rig_lowers_the_apex(self):
        rig = ElasticRig(direction=PullDirection.DOWNWARD, band_count=8)
        assert elastic_apex_shift(rig, 0.15) < 0.0

    def test_upward_rig_raises_the_apex(self):
        rig = ElasticRig(direction=PullDirection.UPWARD, band_count=6)
        assert elastic_apex_shift(rig, 0.15) > 0.0

    def test_more_bands_shift_more(self):
        light = ElasticRig(direction=PullDirection.DOWNWARD, band_count=4)
        heavy = ElasticRig(direction=PullDirection.DOWNWARD, band_count=12)
        assert elastic_apex_shift(heavy, 0.15) < elastic_apex_shift(light, 0.15)


class TestWalkerAgent:
    def test_streams_through_the_pipeline(self):
        agent = WalkerAgent(SHEF)
        agent.command(1.5)
        dt = 1.0 / 90.0
        heights = []
        for k in range(270):
            for s in agent.samples(k * dt, dt):
                heights.append(s.height)
        assert max(heights) > 0.05  # it actually walks

    def test_does_not_pin_output(self):
        assert WalkerAgent(SHEF).pins_output is False

    def test_command_zero_parks_the_feet(self):
        agent = WalkerAgent(SHEF)
        agent.command(1.5)
        dt = 1.0 / 90.0
        for k in range(90):
            agent.samples(k * dt, dt)
        agent.command(0.0)
        flat = [s.height for k in range(90, 180) for s in agent.samples(k * dt, dt)]
        assert all(h == 0.0 for h in flat)

    def test_deterministic_for_seed(self):
        def run(seed):
            agent = WalkerAgent(SHEF, noise_sd=0.004, seed=seed)
            agent.command(2.0)
            dt = 1.0 / 90.0
            return [s for k in range(180) for s in agent.samples(k * dt, dt)]

        assert run(5) == run(5)
        assert run(5) != run(6)

    def test_unreachable_command_strains_execution(self):
        agent = WalkerAgent(GUD, noise_sd=0.004)
        agent.command(1.5)
        assert agent._effective_sd == pytest.approx(0.004)
        agent.command(8.0)  # far beyond the cadence cap
        assert agent._effective_sd > 0.004

    def test_noiseless_agent_ignores_strain(self):
        agent = WalkerAgent(GUD, noise_sd=0.0)
        agent.command(8.0)
        assert agent._effective_sd == 0.0

    def test_replanning_keeps_heights_continuous(self):
        agent = WalkerAgent(SHEF)
        dt = 1.0 / 90.0
        prev = {}
        worst = 0.0
        for k in range(540):
            t = k * dt
            if k % 45 == 0:  # replan twice a second, alternating demands
                agent.command(1.0 if (k // 45) % 2 == 0 else 3.5)
            for s in agent.samples(t, dt):
                if s.foot in prev:
                    worst = max(worst, abs(s.height - prev[s.foot]))
                prev[s.foot] = s.height
        # a latched apex changes only at lift-off, so no sample-to-sample jump
        # ever approaches the apex scale
        assert worst < 0.05

    def test_downward_rig_flattens_steps(self):
        def apex_with(rig):
            agent = WalkerAgent(SHEF, rig=rig)
            agent.command(1.5)
            dt = 1.0 / 90.0
            return max(
                s.height for k in range(360) for s in agent.samples(k * dt, dt)
            )

        free = apex_with(None)
        weighted = apex_with(ElasticRig(direction=PullDirection.DOWNWARD, band_count=12))
        assisted = apex_with(ElasticRig(direction=PullDirection.UPWARD, band_count=10))
        assert weighted < free < assisted
