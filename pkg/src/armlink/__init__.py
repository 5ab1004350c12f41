"""armlink: a desk-scale digital twin of a 5-DOF hobby manipulator.

The package bundles the arm's forward/inverse kinematics, a pose validity
gate (joint limits, floor and base-cylinder collision), the master->slave
command protocol used to teleoperate it, and a simulated servo plant with
runnable master/slave/bridge nodes.
"""

from .kinematics import (
    BaseSingular,
    IkError,
    IkIntermediates,
    IkSolution,
    JointAngles,
    LinkLengths,
    NegativeReach,
    RoundtripReport,
    ToolPosition,
    Unreachable,
    compose,
    deg_to_rad,
    fk_full,
    fk_position,
    ik_solve,
    link_transforms,
    rad_to_deg,
    rot_x,
    rot_y,
    rot_z,
    roundtrip_validate,
    translate,
)
from .workspace import (
    JointLimits,
    Scene,
    ValidityReport,
    Violation,
    ViolationKind,
    check_collision,
    check_limits,
    sample_workspace,
    validate_command,
)
from .protocol import (
    AnalogOutOfRange,
    AnalogReadings,
    AngleLine,
    ChangeDetector,
    CoordLine,
    CrcMismatch,
    Frame,
    FrameError,
    MalformedFrame,
    change_filter,
    crc8,
    decode_frame,
    encode_frame,
    format_input_line,
    normalize_input,
    parse_input_line,
)
from .nodes import (
    LoopbackTransport,
    MasterNode,
    ServoModel,
    SlaveNode,
    TcpTransport,
    TelemetryRecord,
    TransportClosed,
    parse_telemetry_line,
    run_loopback,
    servo_step,
)

__version__ = "0.1.0"
