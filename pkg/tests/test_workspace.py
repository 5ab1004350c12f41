"""Validity gate tests: limits, bench/base collision, gate composition, sampling."""

import math

import numpy as np
import pytest

from armlink.kinematics import JointAngles, LinkLengths
from armlink.workspace import (
    JointLimits,
    Scene,
    ViolationKind,
    check_collision,
    check_limits,
    sample_workspace,
    validate_command,
)

from oracles import pitch_fk_chain

REST = JointAngles()


def kinds(report):
    return [v.kind for v in report.violations]


class TestLimits:
    def test_rest_pose_valid(self):
        assert check_limits(REST).valid

    def test_pitch_over_limit(self):
        report = check_limits(JointAngles.from_degrees(0, 120, 0, 0, 0))
        assert kinds(report) == [ViolationKind.LIMIT_EXCEEDED]
        assert "joint 2" in report.violations[0].detail

    def test_gripper_below_range(self):
        report = check_limits(JointAngles.from_degrees(0, 0, 0, 0, -10))
        assert kinds(report) == [ViolationKind.LIMIT_EXCEEDED]
        assert "joint 5" in report.violations[0].detail

    def test_one_violation_per_joint(self):
        report = check_limits(JointAngles.from_degrees(0, 120, -120, 0, 100))
        assert len(report.violations) == 3

    def test_bounds_inclusive(self):
        assert check_limits(JointAngles.from_degrees(90, 90, -90, 90, 0)).valid

    def test_limits_validate(self):
        with pytest.raises(ValueError):
            JointLimits(theta2=(1.0, 1.0))


class TestCollision:
    def test_rest_pose_clear(self):
        assert check_collision(REST).valid

    def test_forward_sweep_hits_bench(self):
        # upper arm horizontal, forearm keeps its 90 degree bend and points
        # straight down: wrist ends at z = 63 - 170 = -107
        report = check_collision(JointAngles.from_degrees(0, 90, 0, 0, 0))
        assert ViolationKind.FLOOR_COLLISION in kinds(report)

    def test_backward_sweep_stays_clear(self):
        # mirrored pose swings the forearm straight up instead
        assert check_collision(JointAngles.from_degrees(0, -90, 0, 0, 0)).valid

    def test_raised_floor_rejects_everything(self):
        scene = Scene(floor_z=1000.0)
        for angles in (REST, JointAngles.from_degrees(0, 45, -30, 10, 0)):
            report = check_collision(angles, scene=scene)
            assert ViolationKind.FLOOR_COLLISION in kinds(report)

    def test_wrist_dipping_into_base_cylinder(self):
        # forearm folded back over the base: wrist lands near (14, 0, 29),
        # inside the r < 40, z < 63 keep-out region
        angles = JointAngles.from_degrees(0, 30, 80, -110, 0)
        chain = pitch_fk_chain(*[math.radians(d) for d in (0, 30, 80, -110)])
        wx, wy, wz = chain[3]
        assert math.hypot(wx, wy) < 40 and 0 < wz < 63  # oracle confirms the setup
        report = check_collision(angles)
        assert kinds(report) == [ViolationKind.BASE_COLLISION]

    def test_base_column_exempt_from_cylinder(self):
        # link 1 lives inside the keep-out cylinder by construction
        assert check_collision(REST).valid

    def test_interpolated_points_catch_mid_link_crossing(self):
        # hand link passes straight through the keep-out cylinder while both
        # endpoints stay outside it: only interpolated samples can see that
        a1, a2, a3 = 63.0, 145.0, 170.0
        wrist_r, wrist_z = 55.0, 30.0  # outside r=40, below z=63
        alpha = math.atan2(wrist_z - a1, wrist_r)
        k = math.hypot(wrist_r, wrist_z - a1)
        gamma = math.acos((a2**2 + k**2 - a3**2) / (2 * a2 * k))
        beta = math.acos((a2**2 + a3**2 - k**2) / (2 * a2 * a3))
        t2 = math.pi / 2 - alpha - gamma
        t3 = math.pi / 2 - beta
        t4 = 3 * math.pi / 2 - (t2 + math.pi / 2 + t3)  # hand points along -x
        chain = pitch_fk_chain(0.0, t2, t3, t4)
        (wx, _, wz), (tx, _, tz) = chain[3], chain[4]
        assert abs(wx) > 40 and abs(tx) > 40  # endpoints clear of the cylinder
        assert wz < 63 and tz < 63 and min(wz, tz) > 0  # crossing region, above bench
        report = check_collision(JointAngles(0.0, t2, t3, t4, 0.0))
        assert kinds(report) == [ViolationKind.BASE_COLLISION]


class TestGate:
    def test_rest_valid(self):
        assert validate_command(REST).valid

    def test_limit_violation_alone(self):
        report = validate_command(JointAngles.from_degrees(0, 120, 0, 0, 0))
        assert not report.valid
        assert report.violations[0].kind == ViolationKind.LIMIT_EXCEEDED

    def test_collision_within_limits(self):
        report = validate_command(JointAngles.from_degrees(0, 90, 0, 0, 0))
        assert kinds(report) == [ViolationKind.FLOOR_COLLISION]

    def test_gate_implies_both_subchecks(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            angles = JointAngles(*rng.uniform(-math.pi / 2, math.pi / 2, size=5))
            if validate_command(angles).valid:
                assert check_limits(angles).valid
                assert check_collision(angles).valid

    def test_shrinking_limits_never_validates(self):
        rng = np.random.default_rng(37)
        wide = JointLimits()
        for _ in range(200):
            angles = JointAngles(*rng.uniform(-math.pi / 2, math.pi / 2, size=5))
            shrink = rng.uniform(0.1, 1.0, size=5)
            narrow = JointLimits(
                *(
                    (lo * s, hi * s) if lo < 0 else (lo, hi * s)
                    for (lo, hi), s in zip(wide.pairs(), shrink)
                )
            )
            if not validate_command(angles, limits=wide).valid:
                assert not validate_command(angles, limits=narrow).valid

    def test_floor_soundness(self):
        # any pose whose analytic wrist sits clearly below the bench is caught
        rng = np.random.default_rng(41)
        flagged = 0
        for _ in range(500):
            t = rng.uniform(-math.pi / 2, math.pi / 2, size=5)
            wrist_z = pitch_fk_chain(*t[:4])[3][2]
            if wrist_z < -1.0:
                report = check_collision(JointAngles(*t))
                assert ViolationKind.FLOOR_COLLISION in kinds(report)
                flagged += 1
        assert flagged > 10


class TestSceneValidation:
    def test_scene_defaults(self):
        scene = Scene()
        assert scene.floor_z == 0.0
        assert scene.base_radius == 40.0
        assert scene.base_height == LinkLengths().a1

    def test_scene_rejects_bad_values(self):
        with pytest.raises(ValueError):
            Scene(base_radius=0.0)
        with pytest.raises(ValueError):
            Scene(base_height=-1.0)


class TestSampleWorkspace:
    def test_single_record(self):
        records = sample_workspace(n=1)
        assert len(records) == 1
        angles, position, valid = records[0]
        assert isinstance(valid, bool)

    def test_deterministic_per_seed(self):
        a = sample_workspace(n=50, seed=123)
        b = sample_workspace(n=50, seed=123)
        assert a == b
        c = sample_workspace(n=50, seed=124)
        assert a != c

    def test_valid_records_within_reach(self):
        for _, position, valid in sample_workspace(n=500, seed=2):
            if valid:
                assert math.hypot(position.x, position.y) <= 425.0 + 1e-9

    def test_rejects_nonpositive_count(self):
        with pytest.raises(ValueError):
            sample_workspace(n=0)
