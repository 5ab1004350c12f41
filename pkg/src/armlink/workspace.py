"""Pose validity: joint limits, bench plane and base keep-out cylinder.

A commanded pose is valid when every joint is inside its limits and no part
of the arm touches the bench or the base column.  Links are checked as
sampled polylines through the forward-kinematics joint chain; the sampling
density (10 interior points per link) keeps the worst geometric gap near
2 mm for these link lengths, well under the 40 mm keep-out radius.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .kinematics import JointAngles, LinkLengths, ToolPosition, fk_full, fk_position

__all__ = [
    "ViolationKind",
    "Violation",
    "ValidityReport",
    "JointLimits",
    "Scene",
    "check_limits",
    "check_collision",
    "validate_command",
    "sample_workspace",
]

_INTERP_POINTS = 10  # interior samples per link segment


class ViolationKind(enum.Enum):
    LIMIT_EXCEEDED = "LimitExceeded"
    FLOOR_COLLISION = "FloorCollision"
    BASE_COLLISION = "BaseCollision"
    UNREACHABLE = "Unreachable"
    NEGATIVE_REACH = "NegativeReach"
    BASE_SINGULAR = "BaseSingular"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    detail: str


@dataclass(frozen=True)
class ValidityReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def merged_with(self, other: "ValidityReport") -> "ValidityReport":
        return ValidityReport(self.violations + other.violations)

    def first_kind(self) -> ViolationKind | None:
        return self.violations[0].kind if self.violations else None


@dataclass(frozen=True)
class JointLimits:
    """Per-joint (min, max) bounds in radians, inclusive."""

    theta1: tuple[float, float] = (-math.pi / 2, math.pi / 2)
    theta2: tuple[float, float] = (-math.pi / 2, math.pi / 2)
    theta3: tuple[float, float] = (-math.pi / 2, math.pi / 2)
    theta4: tuple[float, float] = (-math.pi / 2, math.pi / 2)
    theta5: tuple[float, float] = (0.0, math.pi / 2)

    def __post_init__(self) -> None:
        for i, (lo, hi) in enumerate(self.pairs(), start=1):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"joint {i} limits must satisfy min < max, got ({lo}, {hi})")

    def pairs(self) -> tuple[tuple[float, float], ...]:
        return (self.theta1, self.theta2, self.theta3, self.theta4, self.theta5)

    @classmethod
    def from_degrees(cls, *pairs_deg: tuple[float, float]) -> "JointLimits":
        if len(pairs_deg) != 5:
            raise ValueError(f"expected 5 (min, max) pairs, got {len(pairs_deg)}")
        rad = tuple((math.radians(lo), math.radians(hi)) for lo, hi in pairs_deg)
        return cls(*rad)


@dataclass(frozen=True)
class Scene:
    """Bench plane height plus the keep-out cylinder around the base column."""

    floor_z: float = 0.0
    base_radius: float = 40.0
    base_height: float = 63.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.base_radius) and self.base_radius > 0):
            raise ValueError(f"base_radius must be positive, got {self.base_radius!r}")
        if not (math.isfinite(self.base_height) and self.base_height > 0):
            raise ValueError(f"base_height must be positive, got {self.base_height!r}")
        if not math.isfinite(self.floor_z):
            raise ValueError(f"floor_z must be finite, got {self.floor_z!r}")


def check_limits(angles: JointAngles, limits: JointLimits = JointLimits()) -> ValidityReport:
    """One LimitExceeded violation per joint outside its inclusive bounds."""
    violations = []
    for i, (theta, (lo, hi)) in enumerate(zip(angles, limits.pairs()), start=1):
        if theta < lo or theta > hi:
            violations.append(
                Violation(
                    ViolationKind.LIMIT_EXCEEDED,
                    f"joint {i} at {math.degrees(theta):.3f} deg outside "
                    f"[{math.degrees(lo):.3f}, {math.degrees(hi):.3f}] deg",
                )
            )
    return ValidityReport(tuple(violations))


def _sampled_segments(angles: JointAngles, links: LinkLengths):
    """Per-link sample points along the joint chain, including both endpoints."""
    _, chain = fk_full(angles, links)
    pts = np.array([p.as_tuple() for p in chain])
    ts = np.linspace(0.0, 1.0, _INTERP_POINTS + 2)
    for i in range(len(pts) - 1):
        seg = pts[i][None, :] + ts[:, None] * (pts[i + 1] - pts[i])[None, :]
        yield i + 1, seg  # link index 1..4


def check_collision(
    angles: JointAngles, links: LinkLengths = LinkLengths(), scene: Scene = Scene()
) -> ValidityReport:
    """Bench-plane and base-cylinder checks over the sampled link polylines.

    Every sampled point must stay at or above the bench; the moving links
    (2..4) must also stay out of the keep-out cylinder around the base
    column.  Link 1 is the base column itself and is exempt from the
    cylinder check.
    """
    violations = []
    floor_hit = None
    base_hit = None
    for link_index, seg in _sampled_segments(angles, links):
        if floor_hit is None:
            below = seg[:, 2] < scene.floor_z
            if below.any():
                p = seg[below][0]
                floor_hit = (link_index, p)
        if base_hit is None and link_index >= 2:
            r = np.hypot(seg[:, 0], seg[:, 1])
            inside = (r < scene.base_radius) & (seg[:, 2] < scene.base_height)
            if inside.any():
                p = seg[inside][0]
                base_hit = (link_index, p)
    if floor_hit is not None:
        link_index, p = floor_hit
        violations.append(
            Violation(
                ViolationKind.FLOOR_COLLISION,
                f"link {link_index} point ({p[0]:.1f}, {p[1]:.1f}, {p[2]:.1f}) "
                f"below bench z={scene.floor_z:.1f}",
            )
        )
    if base_hit is not None:
        link_index, p = base_hit
        violations.append(
            Violation(
                ViolationKind.BASE_COLLISION,
                f"link {link_index} point ({p[0]:.1f}, {p[1]:.1f}, {p[2]:.1f}) "
                f"inside base cylinder r<{scene.base_radius:.1f}, z<{scene.base_height:.1f}",
            )
        )
    return ValidityReport(tuple(violations))


def validate_command(
    angles: JointAngles,
    links: LinkLengths = LinkLengths(),
    limits: JointLimits = JointLimits(),
    scene: Scene = Scene(),
) -> ValidityReport:
    """The single gate the slave runs before actuating: limits plus collision."""
    return check_limits(angles, limits).merged_with(check_collision(angles, links, scene))


def sample_workspace(
    links: LinkLengths = LinkLengths(),
    limits: JointLimits = JointLimits(),
    scene: Scene = Scene(),
    n: int = 1000,
    seed: int = 0,
) -> list[tuple[JointAngles, ToolPosition, bool]]:
    """Low-discrepancy sweep of the joint box, each pose run through the gate.

    Deterministic for a given seed; used by the atlas report and the tests.
    """
    if n <= 0:
        raise ValueError(f"sample count must be positive, got {n}")
    lo = np.array([p[0] for p in limits.pairs()])
    hi = np.array([p[1] for p in limits.pairs()])
    unit = qmc.Halton(d=5, scramble=True, seed=seed).random(n)
    records = []
    for row in lo + unit * (hi - lo):
        angles = JointAngles.from_iterable(row)
        position = fk_position(angles, links)
        report = validate_command(angles, links, limits, scene)
        records.append((angles, position, report.valid))
    return records
