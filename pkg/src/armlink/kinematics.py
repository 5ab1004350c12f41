"""Forward and inverse kinematics of the 5-DOF desk arm.

The arm is a revolute chain: a base yaw joint (theta1), three pitch joints
(theta2..theta4) and a gripper roll (theta5) that opens/closes the claw but
never moves the tool point.  Each link is a fixed offset along its local z
axis, so every link matrix is a translation stacked with a rotation, and the
tool frame is the product of the four link matrices.  The second link matrix
carries a built-in 90 degree pitch offset because the arm rests with the
upper arm vertical and the forearm horizontal.

All angles are radians and all lengths millimeters.  Transforms are plain
4x4 numpy arrays in row-major layout with bottom row (0, 0, 0, 1).

The inverse kinematics is the geometric two-view construction: the yaw comes
from the top view, the two pitch angles from the side-view triangle between
shoulder and wrist, and theta4 undoes the accumulated pitch so the hand link
stays parallel to the bench.  Only the elbow-up branch is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JointAngles",
    "LinkLengths",
    "ToolPosition",
    "IkIntermediates",
    "IkSolution",
    "RoundtripReport",
    "IkError",
    "NegativeReach",
    "Unreachable",
    "BaseSingular",
    "rot_x",
    "rot_y",
    "rot_z",
    "translate",
    "compose",
    "link_transforms",
    "fk_full",
    "fk_position",
    "ik_solve",
    "roundtrip_validate",
    "deg_to_rad",
    "rad_to_deg",
]

# Tolerance for acos arguments that drift past [-1, 1] at boundary poses
# (e.g. the fully stretched arm); anything further out is a real miss.
_ACOS_SLACK = 1e-9


class IkError(ValueError):
    """A target position the geometric solver cannot reach."""


class NegativeReach(IkError):
    """Target is closer to the base axis than the horizontal hand link a4."""


class Unreachable(IkError):
    """Shoulder-to-wrist distance falls outside the two-link annulus."""


class BaseSingular(IkError):
    """Target sits on the base axis (x = y = 0); yaw is undefined."""


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class JointAngles:
    """The five joint variables, radians."""

    theta1: float = 0.0
    theta2: float = 0.0
    theta3: float = 0.0
    theta4: float = 0.0
    theta5: float = 0.0

    def __post_init__(self) -> None:
        _require_finite("joint angle", *self.as_tuple())

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.theta1, self.theta2, self.theta3, self.theta4, self.theta5)

    def __iter__(self):
        return iter(self.as_tuple())

    @classmethod
    def from_iterable(cls, values) -> "JointAngles":
        t = tuple(float(v) for v in values)
        if len(t) != 5:
            raise ValueError(f"expected 5 joint angles, got {len(t)}")
        return cls(*t)

    @classmethod
    def from_degrees(cls, *degrees: float) -> "JointAngles":
        return cls.from_iterable(deg_to_rad(d) for d in degrees)


@dataclass(frozen=True)
class LinkLengths:
    """Link offsets in millimeters: base column a1, upper arm a2, forearm a3, hand a4."""

    a1: float = 63.0
    a2: float = 145.0
    a3: float = 170.0
    a4: float = 110.0

    def __post_init__(self) -> None:
        for name, v in (("a1", self.a1), ("a2", self.a2), ("a3", self.a3), ("a4", self.a4)):
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"link length {name} must be strictly positive, got {v!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4)


@dataclass(frozen=True)
class ToolPosition:
    """A point in the base frame, millimeters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        _require_finite("coordinate", self.x, self.y, self.z)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def distance_to(self, other: "ToolPosition") -> float:
        return math.dist(self.as_tuple(), other.as_tuple())


@dataclass(frozen=True)
class IkIntermediates:
    """Side/top view construction values kept for inspection and tests.

    w      horizontal reach from the base axis to the wrist, mm
    k      straight-line shoulder-to-wrist distance, mm
    alpha  elevation of the shoulder-to-wrist line, rad
    gamma  angle at the shoulder inside the arm triangle, rad
    beta   angle at the elbow inside the arm triangle, rad
    """

    w: float
    k: float
    alpha: float
    gamma: float
    beta: float


@dataclass(frozen=True)
class IkSolution:
    angles: JointAngles
    intermediates: IkIntermediates


@dataclass(frozen=True)
class RoundtripReport:
    """Outcome of one fk -> ik -> fk self-check."""

    status: str  # "pass" | "fail" | "skip"
    error_mm: float  # nan when skipped
    reason: str | None  # solver error name when skipped
    target: ToolPosition
    recovered: ToolPosition | None


def deg_to_rad(degrees: float) -> float:
    return math.radians(degrees)


def rad_to_deg(radians: float) -> float:
    return math.degrees(radians)


def rot_x(theta: float) -> np.ndarray:
    """Homogeneous rotation about the x axis."""
    _require_finite("theta", theta)
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, -s, 0.0],
            [0.0, s, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def rot_y(theta: float) -> np.ndarray:
    """Homogeneous rotation about the y axis."""
    _require_finite("theta", theta)
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [-s, 0.0, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def rot_z(theta: float) -> np.ndarray:
    """Homogeneous rotation about the z axis."""
    _require_finite("theta", theta)
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [c, -s, 0.0, 0.0],
            [s, c, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def translate(dx: float, dy: float, dz: float) -> np.ndarray:
    """Homogeneous translation by (dx, dy, dz)."""
    _require_finite("translation", dx, dy, dz)
    m = np.eye(4)
    m[0, 3] = dx
    m[1, 3] = dy
    m[2, 3] = dz
    return m


def compose(first: np.ndarray, *rest: np.ndarray) -> np.ndarray:
    """Chain transforms left to right: compose(a, b) applies b in a's frame."""
    out = first
    for m in rest:
        out = out @ m
    return out


def link_transforms(
    angles: JointAngles, links: LinkLengths = LinkLengths()
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four link matrices, base to tool.

    Link 1 is the base yaw with the column height folded into its z slot,
    followed by the shoulder pitch.  Link 2 translates up the upper arm and
    applies the forearm pitch with its built-in 90 degree rest offset.
    Link 3 translates along the forearm and pitches the hand.  Link 4
    translates along the hand and rolls the gripper.
    """
    t1, t2, t3, t4, t5 = angles.as_tuple()
    a1, a2, a3, a4 = links.as_tuple()
    base = rot_z(t1)
    base[2, 3] = a1
    m1 = base @ rot_y(t2)
    m2 = translate(0.0, 0.0, a2) @ rot_y(math.pi / 2 + t3)
    m3 = translate(0.0, 0.0, a3) @ rot_y(t4)
    m4 = translate(0.0, 0.0, a4) @ rot_z(t5)
    return m1, m2, m3, m4


def fk_full(
    angles: JointAngles, links: LinkLengths = LinkLengths()
) -> tuple[np.ndarray, tuple[ToolPosition, ...]]:
    """Tool transform plus the joint-origin chain base..tool.

    Returns the full tool transform and the five points (base foot, shoulder,
    elbow, wrist, tool) read off the cumulative products; the point chain is
    what the collision checker and the pendant views consume.
    """
    m1, m2, m3, m4 = link_transforms(angles, links)
    c1 = m1
    c2 = c1 @ m2
    c3 = c2 @ m3
    c4 = c3 @ m4
    points = tuple(
        ToolPosition(float(c[0, 3]), float(c[1, 3]), float(c[2, 3]))
        for c in (np.eye(4), c1, c2, c3, c4)
    )
    return c4, points


def fk_position(angles: JointAngles, links: LinkLengths = LinkLengths()) -> ToolPosition:
    """Tool point only; the last column of the tool transform."""
    _, points = fk_full(angles, links)
    return points[-1]


def _checked_acos(cosine: float, context: str) -> float:
    if cosine > 1.0:
        if cosine > 1.0 + _ACOS_SLACK:
            raise Unreachable(context)
        cosine = 1.0
    elif cosine < -1.0:
        if cosine < -1.0 - _ACOS_SLACK:
            raise Unreachable(context)
        cosine = -1.0
    return math.acos(cosine)


def ik_solve(
    target: ToolPosition, theta5: float = 0.0, links: LinkLengths = LinkLengths()
) -> IkSolution:
    """Geometric inverse kinematics, elbow-up branch.

    The hand link a4 is held parallel to the bench, so the wrist point sits
    a4 short of the target in the top view.  Yaw comes from atan2 of the top
    view; the side-view triangle between shoulder and wrist gives the two
    pitch angles via the law of cosines; theta4 cancels the accumulated
    pitch; theta5 is passed through untouched.

    Raises BaseSingular when the target is on the base axis, NegativeReach
    when it is inside the a4 dead-zone cylinder, Unreachable when the wrist
    falls outside the two-link annulus.
    """
    _require_finite("theta5", theta5)
    x, y, z = target.as_tuple()
    a1, a2, a3, a4 = links.as_tuple()

    if x == 0.0 and y == 0.0:
        raise BaseSingular("target on the base axis: yaw is undefined")

    radial = math.hypot(x, y)
    w = radial - a4
    if w < 0.0:
        raise NegativeReach(
            f"horizontal reach {radial:.3f} mm is inside the hand dead zone ({a4:.3f} mm)"
        )

    theta1 = math.atan2(y, x)
    k = math.hypot(w, z - a1)
    if k == 0.0:
        raise Unreachable("wrist coincides with the shoulder")

    ctx = f"wrist distance {k:.3f} mm outside [{abs(a2 - a3):.3f}, {a2 + a3:.3f}] mm"
    gamma = _checked_acos((a2 * a2 + k * k - a3 * a3) / (2.0 * a2 * k), ctx)
    beta = _checked_acos((a2 * a2 + a3 * a3 - k * k) / (2.0 * a2 * a3), ctx)
    alpha = math.atan2(z - a1, w)

    theta2 = math.pi / 2 - alpha - gamma
    theta3 = math.pi / 2 - beta
    theta4 = -theta2 - theta3

    return IkSolution(
        angles=JointAngles(theta1, theta2, theta3, theta4, theta5),
        intermediates=IkIntermediates(w=w, k=k, alpha=alpha, gamma=gamma, beta=beta),
    )


def roundtrip_validate(
    angles: JointAngles, links: LinkLengths = LinkLengths(), tol: float = 1e-6
) -> RoundtripReport:
    """Self-check: run fk, invert the result, run fk again, compare points.

    The recovered joint angles need not match the input (several joint sets
    reach the same point); only the tool position must come back within tol
    millimeters.  Poses whose tool point violates the horizontal-hand
    reachability assumptions are reported as skipped, not failed.
    """
    target = fk_position(angles, links)
    try:
        solution = ik_solve(target, angles.theta5, links)
    except IkError as err:
        return RoundtripReport(
            status="skip",
            error_mm=math.nan,
            reason=type(err).__name__,
            target=target,
            recovered=None,
        )
    recovered = fk_position(solution.angles, links)
    error = target.distance_to(recovered)
    return RoundtripReport(
        status="pass" if error < tol else "fail",
        error_mm=error,
        reason=None,
        target=target,
        recovered=recovered,
    )
