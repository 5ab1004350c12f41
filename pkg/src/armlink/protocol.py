"""Master->slave wire protocol: frame codec, input normalization, debounce.

The command link carries one ASCII line per frame:

    J,<seq>,<t1>,<t2>,<t3>,<t4>,<t5>,<crc>\\n

seq is a 16-bit wrapping counter, the five angles are radians with six
decimals, and crc is two lowercase hex digits of CRC-8 (poly 0x07, init
0x00) over the bytes between the first and last comma, exclusive.  The link
is strictly one-way; there is no slave->master frame type.

Operator input reaches the master three ways and is normalized to radian
joint angles before transmission: angle lines in degrees, coordinate lines
solved through inverse kinematics, or raw 10-bit analog readings mapped
linearly onto each joint's range.  The serial grammars are

    A <d1> <d2> <d3> <d4> <d5>     joint angles, degrees
    C <x> <y> <z> <g>              target mm + gripper degrees
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .kinematics import LinkLengths, ToolPosition, deg_to_rad, ik_solve
from .workspace import JointLimits

__all__ = [
    "Frame",
    "AngleLine",
    "CoordLine",
    "AnalogReadings",
    "MasterInput",
    "ChangeDetector",
    "FrameError",
    "MalformedFrame",
    "CrcMismatch",
    "AnalogOutOfRange",
    "crc8",
    "encode_frame",
    "decode_frame",
    "parse_input_line",
    "format_input_line",
    "normalize_input",
    "change_filter",
    "DEFAULT_DELTA_MIN",
]

DEFAULT_DELTA_MIN = math.radians(0.5)
_ANALOG_MAX = 1023

_CRC_POLY = 0x07
_CRC_TABLE = []
for _byte in range(256):
    _crc = _byte
    for _ in range(8):
        _crc = ((_crc << 1) ^ _CRC_POLY) & 0xFF if _crc & 0x80 else (_crc << 1) & 0xFF
    _CRC_TABLE.append(_crc)

_HEX_DIGITS = frozenset("0123456789abcdef")


class FrameError(ValueError):
    """A line that does not decode to a valid frame."""


class MalformedFrame(FrameError):
    """Wrong shape: bad tag, field count, or non-numeric fields."""


class CrcMismatch(FrameError):
    """Structurally fine but the checksum does not match the payload."""


class AnalogOutOfRange(ValueError):
    """An analog reading outside the 10-bit converter range."""


def crc8(data: bytes) -> int:
    """CRC-8, polynomial 0x07, init 0x00, MSB first."""
    crc = 0
    for b in data:
        crc = _CRC_TABLE[crc ^ b]
    return crc


@dataclass(frozen=True)
class Frame:
    """One command on the wire: sequence number plus five radian angles."""

    seq: int
    thetas: tuple[float, float, float, float, float]

    def __post_init__(self) -> None:
        if not (0 <= self.seq <= 0xFFFF):
            raise ValueError(f"seq must fit 16 bits, got {self.seq}")
        if len(self.thetas) != 5:
            raise ValueError(f"expected 5 angles, got {len(self.thetas)}")
        if not all(math.isfinite(t) for t in self.thetas):
            raise ValueError(f"frame angles must be finite, got {self.thetas}")


@dataclass(frozen=True)
class AngleLine:
    """Serial input: five joint angles in degrees."""

    degrees: tuple[float, float, float, float, float]


@dataclass(frozen=True)
class CoordLine:
    """Serial input: target point in mm plus gripper angle in degrees."""

    x: float
    y: float
    z: float
    grip_degrees: float = 0.0


@dataclass(frozen=True)
class AnalogReadings:
    """Console input: five raw 10-bit potentiometer values."""

    values: tuple[int, int, int, int, int]


MasterInput = AngleLine | CoordLine | AnalogReadings


@dataclass(frozen=True)
class ChangeDetector:
    """Debounce state: transmit only when some joint moved at least delta_min."""

    last_sent: tuple[float, float, float, float, float] | None = None
    delta_min: float = DEFAULT_DELTA_MIN

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta_min) and self.delta_min > 0):
            raise ValueError(f"delta_min must be positive, got {self.delta_min!r}")


def encode_frame(frame: Frame) -> str:
    """Render a frame as its wire line, newline included.

    Angles are written with six decimals, so values already quantized to
    1e-6 rad round-trip exactly through decode_frame.
    """
    payload = f"{frame.seq}," + ",".join(f"{t:.6f}" for t in frame.thetas)
    return f"J,{payload},{crc8(payload.encode('ascii')):02x}\n"


def decode_frame(line: str | bytes) -> Frame:
    """Parse and checksum-verify one wire line.

    Raises MalformedFrame for anything structurally off and CrcMismatch when
    the payload bytes do not match the checksum.  The crc field must be the
    canonical two lowercase hex digits, so no corrupted line has a second
    accepted spelling.
    """
    if isinstance(line, bytes):
        try:
            line = line.decode("ascii")
        except UnicodeDecodeError as err:
            raise MalformedFrame(f"non-ascii frame: {err}") from None
    if line.endswith("\n"):
        line = line[:-1]
        if line.endswith("\r"):
            line = line[:-1]
    fields = line.split(",")
    if len(fields) != 8:
        raise MalformedFrame(f"expected 8 comma-separated fields, got {len(fields)}")
    if fields[0] != "J":
        raise MalformedFrame(f"bad frame tag {fields[0]!r}")
    crc_field = fields[7]
    if len(crc_field) != 2 or not set(crc_field) <= _HEX_DIGITS:
        raise MalformedFrame(f"bad crc field {crc_field!r}")
    if not fields[1] or not set(fields[1]) <= set("0123456789"):
        raise MalformedFrame(f"bad seq field {fields[1]!r}")
    seq = int(fields[1])
    if seq > 0xFFFF:
        raise MalformedFrame(f"seq {seq} does not fit 16 bits")
    thetas = []
    for raw in fields[2:7]:
        try:
            value = float(raw)
        except ValueError:
            raise MalformedFrame(f"bad angle field {raw!r}") from None
        if not math.isfinite(value):
            raise MalformedFrame(f"non-finite angle field {raw!r}")
        thetas.append(value)
    payload = ",".join(fields[1:7])
    expected = crc8(payload.encode("ascii"))
    if expected != int(crc_field, 16):
        raise CrcMismatch(f"crc {crc_field} != computed {expected:02x}")
    return Frame(seq=seq, thetas=tuple(thetas))


def parse_input_line(line: str) -> MasterInput:
    """Parse one serial-grammar line (A or C form) into a master input."""
    parts = line.split()
    if not parts:
        raise ValueError("empty input line")
    tag, args = parts[0], parts[1:]
    if tag == "A":
        if len(args) != 5:
            raise ValueError(f"A line needs 5 angles, got {len(args)}")
        return AngleLine(tuple(float(v) for v in args))
    if tag == "C":
        if len(args) not in (3, 4):
            raise ValueError(f"C line needs x y z [grip], got {len(args)} values")
        x, y, z = (float(v) for v in args[:3])
        grip = float(args[3]) if len(args) == 4 else 0.0
        return CoordLine(x, y, z, grip)
    raise ValueError(f"unknown input tag {tag!r}")


def format_input_line(inp: MasterInput) -> str:
    """Inverse of parse_input_line for the two serial forms."""
    if isinstance(inp, AngleLine):
        return "A " + " ".join(f"{d:g}" for d in inp.degrees)
    if isinstance(inp, CoordLine):
        return f"C {inp.x:g} {inp.y:g} {inp.z:g} {inp.grip_degrees:g}"
    raise TypeError(f"no serial form for {type(inp).__name__}")


def normalize_input(
    inp: MasterInput,
    links: LinkLengths = LinkLengths(),
    limits: JointLimits = JointLimits(),
) -> tuple[float, float, float, float, float]:
    """Reduce any input mode to five radian joint angles.

    Angle lines convert degrees to radians; coordinate lines run the inverse
    kinematics (solver errors propagate to the caller); analog readings map
    0..1023 linearly onto each joint's limit range.
    """
    if isinstance(inp, AngleLine):
        if len(inp.degrees) != 5:
            raise ValueError(f"expected 5 angles, got {len(inp.degrees)}")
        return tuple(deg_to_rad(d) for d in inp.degrees)
    if isinstance(inp, CoordLine):
        solution = ik_solve(
            ToolPosition(inp.x, inp.y, inp.z), deg_to_rad(inp.grip_degrees), links
        )
        return solution.angles.as_tuple()
    if isinstance(inp, AnalogReadings):
        if len(inp.values) != 5:
            raise ValueError(f"expected 5 readings, got {len(inp.values)}")
        thetas = []
        for v, (lo, hi) in zip(inp.values, limits.pairs()):
            if v < 0 or v > _ANALOG_MAX:
                raise AnalogOutOfRange(f"reading {v} outside 0..{_ANALOG_MAX}")
            thetas.append(lo + (v / _ANALOG_MAX) * (hi - lo))
        return tuple(thetas)
    raise TypeError(f"unsupported input {type(inp).__name__}")


def change_filter(
    detector: ChangeDetector, thetas: tuple[float, ...]
) -> tuple[ChangeDetector, bool]:
    """Decide whether this angle set is worth a frame.

    Emits on the first call and whenever any joint differs from the last
    transmitted set by at least delta_min; the detector snapshot advances
    only on emission.
    """
    if len(thetas) != 5 or not all(math.isfinite(t) for t in thetas):
        raise ValueError(f"need 5 finite angles, got {thetas!r}")
    if detector.last_sent is not None and all(
        abs(t - last) < detector.delta_min for t, last in zip(thetas, detector.last_sent)
    ):
        return detector, False
    return replace(detector, last_sent=tuple(thetas)), True
