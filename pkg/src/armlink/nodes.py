"""Runnable master and slave nodes, the servo plant, and the sim harness.

The command link is one-way: the master normalizes operator input, debounces
it and writes frames; the slave decodes each frame, runs it through the
validity gate and only then moves the servo setpoints.  Telemetry (current
angles, tool point, last verdict) flows on a separate channel so the command
path stays strictly unidirectional.

Transports carry newline-delimited ASCII lines.  The in-process loopback is
used by the deterministic replay harness and the tests; the TCP transport
backs the live `armlink slave` / `armlink master` runners.  Real serial or
radio links can be added by giving the same send_line/recv_line/close
surface to a device.

Telemetry wire format, one record per line:

    S,<seq>,<t1>,<t2>,<t3>,<t4>,<t5>,<x>,<y>,<z>,<verdict>\\n

The optional WebSocket bridge re-serves both channels to browser clients:
incoming text messages use the serial command grammar, outgoing messages are
telemetry lines verbatim, and operator errors go back as `E,<message>`.
"""

from __future__ import annotations

import logging
import math
import queue
import socket
import threading
import time
from dataclasses import dataclass, replace
from typing import Callable, Iterable

from .kinematics import IkError, JointAngles, LinkLengths, fk_position
from .protocol import (
    DEFAULT_DELTA_MIN,
    AnalogOutOfRange,
    AnalogReadings,
    ChangeDetector,
    Frame,
    FrameError,
    MasterInput,
    change_filter,
    decode_frame,
    encode_frame,
    normalize_input,
    parse_input_line,
)
from .workspace import JointLimits, Scene, validate_command

__all__ = [
    "TransportClosed",
    "LoopbackTransport",
    "TcpTransport",
    "ServoModel",
    "servo_step",
    "TelemetryRecord",
    "parse_telemetry_line",
    "MasterNode",
    "SlaveNode",
    "run_loopback",
    "run_slave",
    "run_master",
    "run_bridge",
    "DEFAULT_MAX_RATE",
    "DEFAULT_DT",
]

logger = logging.getLogger(__name__)

DEFAULT_MAX_RATE = math.radians(300.0)
DEFAULT_DT = 0.01

_ZEROS = (0.0, 0.0, 0.0, 0.0, 0.0)


class TransportClosed(ConnectionError):
    """Send or receive on a transport that has gone away."""


class LoopbackTransport:
    """One endpoint of an in-process ordered line channel."""

    def __init__(self) -> None:
        self._inbox: queue.Queue[str] = queue.Queue()
        self._peer: "LoopbackTransport | None" = None
        self._closed = False

    @classmethod
    def pair(cls) -> tuple["LoopbackTransport", "LoopbackTransport"]:
        a, b = cls(), cls()
        a._peer, b._peer = b, a
        return a, b

    def send_line(self, line: str) -> None:
        if self._closed or self._peer is None or self._peer._closed:
            raise TransportClosed("loopback endpoint closed")
        self._peer._inbox.put(line)

    def recv_line(self, timeout: float | None = 0.0) -> str | None:
        """Next pending line, or None when nothing arrives in time."""
        try:
            if timeout == 0.0:
                return self._inbox.get_nowait()
            return self._inbox.get(timeout=timeout)
        except queue.Empty:
            return None

    def close(self) -> None:
        self._closed = True


class TcpTransport:
    """Line transport over a connected TCP socket."""

    def __init__(self, sock: socket.socket) -> None:
        sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        self._sock = sock
        self._rfile = sock.makefile("r", encoding="ascii", newline="\n")
        self._closed = False

    @classmethod
    def connect(cls, host: str, port: int, timeout: float = 5.0) -> "TcpTransport":
        sock = socket.create_connection((host, port), timeout=timeout)
        sock.settimeout(None)
        return cls(sock)

    def send_line(self, line: str) -> None:
        if self._closed:
            raise TransportClosed("transport closed")
        try:
            self._sock.sendall(line.encode("ascii"))
        except OSError as err:
            raise TransportClosed(str(err)) from err

    def recv_line(self, timeout: float | None = None) -> str | None:
        """Next line, or None on end of stream or timeout."""
        if self._closed:
            return None
        self._sock.settimeout(timeout)
        try:
            line = self._rfile.readline()
        except (TimeoutError, OSError):
            return None
        return line if line else None

    def close(self) -> None:
        self._closed = True
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._sock.close()


@dataclass(frozen=True)
class ServoModel:
    """Slew-rate-limited joint plant: current angles chase the setpoint."""

    current: tuple[float, float, float, float, float] = _ZEROS
    setpoint: tuple[float, float, float, float, float] = _ZEROS
    max_rate: float = DEFAULT_MAX_RATE

    def settled(self) -> bool:
        return self.current == self.setpoint


def servo_step(model: ServoModel, dt: float) -> ServoModel:
    """Advance the plant by dt seconds; each joint moves at most max_rate*dt.

    A joint inside one step of its setpoint snaps exactly onto it, so a
    settled plant compares equal and the rate law stays exact elsewhere.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    limit = model.max_rate * dt
    moved = []
    for c, s in zip(model.current, model.setpoint):
        d = s - c
        if abs(d) <= limit:
            moved.append(s)
        else:
            moved.append(c + (limit if d > 0 else -limit))
    return replace(model, current=tuple(moved))


@dataclass(frozen=True)
class TelemetryRecord:
    """One observer sample: plant state, tool point, last command verdict."""

    timestamp: float
    seq: int
    thetas: tuple[float, float, float, float, float]
    x: float
    y: float
    z: float
    verdict: str

    def to_line(self) -> str:
        angles = ",".join(f"{t:.6f}" for t in self.thetas)
        return f"S,{self.seq},{angles},{self.x:.3f},{self.y:.3f},{self.z:.3f},{self.verdict}\n"


def parse_telemetry_line(line: str, timestamp: float = 0.0) -> TelemetryRecord:
    """Parse one telemetry line; the timestamp is assigned by the receiver."""
    fields = line.strip().split(",")
    if len(fields) != 11 or fields[0] != "S":
        raise ValueError(f"bad telemetry line {line!r}")
    return TelemetryRecord(
        timestamp=timestamp,
        seq=int(fields[1]),
        thetas=tuple(float(v) for v in fields[2:7]),
        x=float(fields[7]),
        y=float(fields[8]),
        z=float(fields[9]),
        verdict=fields[10],
    )


class MasterNode:
    """Operator-side pipeline: normalize input, debounce, frame, transmit.

    Solver and range errors never reach the wire; they come back as operator
    messages and nothing is sent.
    """

    def __init__(
        self,
        transport=None,
        *,
        links: LinkLengths | None = None,
        limits: JointLimits | None = None,
        delta_min: float = DEFAULT_DELTA_MIN,
    ) -> None:
        self.transport = transport
        self.links = links if links is not None else LinkLengths()
        self.limits = limits if limits is not None else JointLimits()
        self.detector = ChangeDetector(delta_min=delta_min)
        self.seq = 0

    def tick(self, inp: MasterInput) -> tuple[Frame | None, str | None]:
        """Process one operator input; returns (sent frame, operator message)."""
        try:
            thetas = normalize_input(inp, self.links, self.limits)
        except (IkError, AnalogOutOfRange) as err:
            return None, type(err).__name__
        self.detector, emit = change_filter(self.detector, thetas)
        if not emit:
            return None, None
        self.seq = (self.seq + 1) & 0xFFFF
        frame = Frame(seq=self.seq, thetas=tuple(thetas))
        if self.transport is not None:
            self.transport.send_line(encode_frame(frame))
        return frame, None


class SlaveNode:
    """Actuator-side state machine: decode, gate, drive the servo plant.

    Invalid or corrupt lines are counted and never touch the setpoint, so
    the plant only ever chases angles that passed the validity gate.
    """

    def __init__(
        self,
        *,
        links: LinkLengths | None = None,
        limits: JointLimits | None = None,
        scene: Scene | None = None,
        max_rate: float = DEFAULT_MAX_RATE,
        initial: tuple[float, ...] = _ZEROS,
    ) -> None:
        self.links = links if links is not None else LinkLengths()
        self.limits = limits if limits is not None else JointLimits()
        self.scene = scene if scene is not None else Scene()
        self.servo = ServoModel(
            current=tuple(initial), setpoint=tuple(initial), max_rate=max_rate
        )
        self.last_valid_seq = 0
        self.reject_count = 0
        self.last_verdict = "none"

    def tick(self, line: str, now: float) -> TelemetryRecord:
        """Process one received line; always returns a telemetry record."""
        try:
            frame = decode_frame(line)
        except FrameError as err:
            self.reject_count += 1
            self.last_verdict = f"rejected:{type(err).__name__}"
        else:
            report = validate_command(
                JointAngles(*frame.thetas), self.links, self.limits, self.scene
            )
            if report.valid:
                self.servo = replace(self.servo, setpoint=frame.thetas)
                self.last_valid_seq = frame.seq
                self.last_verdict = "accepted"
            else:
                self.reject_count += 1
                self.last_verdict = f"rejected:{report.first_kind().value}"
        return self.telemetry(now)

    def step(self, dt: float, *, check_path: bool = False) -> None:
        self.servo = servo_step(self.servo, dt)
        if check_path and not self.servo.settled():
            # The gate validates commanded poses, not the rate-limited path
            # between them; flag (but allow) transiently invalid poses.
            report = validate_command(
                JointAngles(*self.servo.current), self.links, self.limits, self.scene
            )
            if not report.valid:
                logger.warning("transient pose violates gate: %s", report.violations[0].detail)

    def telemetry(self, now: float) -> TelemetryRecord:
        pos = fk_position(JointAngles(*self.servo.current), self.links)
        return TelemetryRecord(
            timestamp=now,
            seq=self.last_valid_seq,
            thetas=self.servo.current,
            x=pos.x,
            y=pos.y,
            z=pos.z,
            verdict=self.last_verdict,
        )


def run_loopback(
    scenario: Iterable[MasterInput],
    dt: float = DEFAULT_DT,
    *,
    links: LinkLengths | None = None,
    limits: JointLimits | None = None,
    scene: Scene | None = None,
    delta_min: float = DEFAULT_DELTA_MIN,
    max_rate: float = DEFAULT_MAX_RATE,
    settle: bool = True,
    max_settle_steps: int = 100_000,
) -> list[TelemetryRecord]:
    """Deterministic replay: scenario -> master -> loopback -> slave -> servo.

    Simulated time advances by dt per delivered line and per servo step;
    after the scenario the plant is stepped until it settles.  The returned
    trace starts with the initial state record.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    master_end, slave_end = LoopbackTransport.pair()
    master = MasterNode(master_end, links=links, limits=limits, delta_min=delta_min)
    slave = SlaveNode(links=links, limits=limits, scene=scene, max_rate=max_rate)
    t = 0.0
    trace = [slave.telemetry(t)]
    for inp in scenario:
        master.tick(inp)
        while (line := slave_end.recv_line()) is not None:
            t += dt
            trace.append(slave.tick(line, t))
    if settle:
        steps = 0
        while not slave.servo.settled() and steps < max_settle_steps:
            t += dt
            slave.step(dt)
            trace.append(slave.telemetry(t))
            steps += 1
    return trace


class _TelemetryHub:
    """Fan-out of telemetry lines to any number of TCP observers."""

    def __init__(self) -> None:
        self._clients: list[socket.socket] = []
        self._lock = threading.Lock()
        self._last_line: str | None = None

    def attach(self, sock: socket.socket) -> None:
        with self._lock:
            if self._last_line is not None:
                try:
                    sock.sendall(self._last_line.encode("ascii"))
                except OSError:
                    sock.close()
                    return
            self._clients.append(sock)

    def broadcast(self, line: str) -> None:
        with self._lock:
            self._last_line = line
            alive = []
            for sock in self._clients:
                try:
                    sock.sendall(line.encode("ascii"))
                    alive.append(sock)
                except OSError:
                    sock.close()
            self._clients = alive

    def close(self) -> None:
        with self._lock:
            for sock in self._clients:
                sock.close()
            self._clients = []


def _acceptor(server: socket.socket, stop: threading.Event, on_conn) -> None:
    server.settimeout(0.2)
    while not stop.is_set():
        try:
            conn, _ = server.accept()
        except TimeoutError:
            continue
        except OSError:
            break
        on_conn(conn)


def run_slave(
    *,
    host: str = "127.0.0.1",
    command_port: int = 0,
    telemetry_port: int = 0,
    links: LinkLengths | None = None,
    limits: JointLimits | None = None,
    scene: Scene | None = None,
    max_rate: float = DEFAULT_MAX_RATE,
    dt: float = DEFAULT_DT,
    stop: threading.Event | None = None,
    ready: Callable[[int, int], None] | None = None,
) -> SlaveNode:
    """Serve the slave node over TCP until the stop event is set.

    Listens for command connections on command_port and publishes telemetry
    on telemetry_port (port 0 picks free ports; `ready` receives the bound
    pair).  Wall-clock paced at dt per servo step.
    """
    stop = stop if stop is not None else threading.Event()
    node = SlaveNode(links=links, limits=limits, scene=scene, max_rate=max_rate)
    lines: queue.Queue[str] = queue.Queue()

    cmd_server = socket.create_server((host, command_port))
    tel_server = socket.create_server((host, telemetry_port))
    hub = _TelemetryHub()

    def reader(conn: socket.socket) -> None:
        with conn, conn.makefile("r", encoding="ascii", newline="\n") as rfile:
            for line in rfile:
                lines.put(line)
                if stop.is_set():
                    break

    def on_command_conn(conn: socket.socket) -> None:
        threading.Thread(target=reader, args=(conn,), daemon=True).start()

    threads = [
        threading.Thread(target=_acceptor, args=(cmd_server, stop, on_command_conn), daemon=True),
        threading.Thread(target=_acceptor, args=(tel_server, stop, hub.attach), daemon=True),
    ]
    for thread in threads:
        thread.start()

    if ready is not None:
        ready(cmd_server.getsockname()[1], tel_server.getsockname()[1])

    t0 = time.monotonic()
    hub.broadcast(node.telemetry(0.0).to_line())
    try:
        while not stop.is_set():
            while True:
                try:
                    line = lines.get_nowait()
                except queue.Empty:
                    break
                hub.broadcast(node.tick(line, time.monotonic() - t0).to_line())
            if not node.servo.settled():
                node.step(dt, check_path=True)
                hub.broadcast(node.telemetry(time.monotonic() - t0).to_line())
            time.sleep(dt)
    finally:
        stop.set()
        cmd_server.close()
        tel_server.close()
        hub.close()
    return node


def parse_analog_line(line: str) -> AnalogReadings:
    """Console mode input: five whitespace-separated raw readings."""
    parts = line.split()
    if len(parts) != 5:
        raise ValueError(f"analog line needs 5 readings, got {len(parts)}")
    return AnalogReadings(tuple(int(v) for v in parts))


def run_master(
    source_lines: Iterable[str],
    *,
    mode: str = "serial",
    host: str = "127.0.0.1",
    port: int,
    links: LinkLengths | None = None,
    limits: JointLimits | None = None,
    delta_min: float = DEFAULT_DELTA_MIN,
    out: Callable[[str], None] | None = None,
) -> int:
    """Feed operator input lines to a slave's command port; returns frames sent.

    serial and script modes read the A/C grammar; analog mode reads five raw
    readings per line.  Blank lines and '#' comments are skipped; operator
    messages (solver errors, parse errors) go to `out`.
    """
    if mode not in ("serial", "script", "analog"):
        raise ValueError(f"unknown master mode {mode!r}")
    transport = TcpTransport.connect(host, port)
    master = MasterNode(transport, links=links, limits=limits, delta_min=delta_min)
    sent = 0
    try:
        for raw in source_lines:
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            try:
                inp = parse_analog_line(raw) if mode == "analog" else parse_input_line(raw)
            except ValueError as err:
                if out is not None:
                    out(f"error: {err}")
                continue
            frame, message = master.tick(inp)
            if message is not None and out is not None:
                out(message)
            if frame is not None:
                sent += 1
    finally:
        transport.close()
    return sent


async def _bridge_serve(
    *,
    host: str,
    bridge_port: int,
    slave_host: str,
    command_port: int,
    telemetry_port: int,
    links: LinkLengths | None,
    limits: JointLimits | None,
    delta_min: float,
    stop: threading.Event | None,
    ready: Callable[[int], None] | None,
) -> None:
    import asyncio

    from websockets.asyncio.server import broadcast, serve

    _, cmd_writer = await asyncio.open_connection(slave_host, command_port)
    tel_reader, _ = await asyncio.open_connection(slave_host, telemetry_port)

    master = MasterNode(None, links=links, limits=limits, delta_min=delta_min)
    clients: set = set()

    async def handle(ws) -> None:
        clients.add(ws)
        try:
            async for message in ws:
                line = message.strip()
                if not line:
                    continue
                try:
                    inp = parse_input_line(line)
                except ValueError as err:
                    await ws.send(f"E,{err}")
                    continue
                frame, operator_message = master.tick(inp)
                if operator_message is not None:
                    await ws.send(f"E,{operator_message}")
                if frame is not None:
                    cmd_writer.write(encode_frame(frame).encode("ascii"))
                    await cmd_writer.drain()
        finally:
            clients.discard(ws)

    async def pump_telemetry() -> None:
        while True:
            raw = await tel_reader.readline()
            if not raw:
                return
            broadcast(clients, raw.decode("ascii").rstrip("\n"))

    async def wait_stop() -> None:
        while stop is None or not stop.is_set():
            await asyncio.sleep(0.05)

    async with serve(handle, host, bridge_port) as server:
        if ready is not None:
            ready(server.sockets[0].getsockname()[1])
        pump = asyncio.create_task(pump_telemetry())
        stopper = asyncio.create_task(wait_stop())
        done, pending = await asyncio.wait(
            {pump, stopper}, return_when=asyncio.FIRST_COMPLETED
        )
        for task in pending:
            task.cancel()
    cmd_writer.close()


def run_bridge(
    *,
    host: str = "127.0.0.1",
    bridge_port: int = 0,
    slave_host: str = "127.0.0.1",
    command_port: int,
    telemetry_port: int,
    links: LinkLengths | None = None,
    limits: JointLimits | None = None,
    delta_min: float = DEFAULT_DELTA_MIN,
    stop: threading.Event | None = None,
    ready: Callable[[int], None] | None = None,
) -> None:
    """WebSocket bridge: command grammar in, telemetry lines out.

    Browser clients send A/C text messages (routed through the shared master
    pipeline to the slave) and receive every telemetry line as text; solver
    and parse errors come back as `E,<message>`.  Raises ConnectionError
    when the slave is not reachable.
    """
    import asyncio

    asyncio.run(
        _bridge_serve(
            host=host,
            bridge_port=bridge_port,
            slave_host=slave_host,
            command_port=command_port,
            telemetry_port=telemetry_port,
            links=links,
            limits=limits,
            delta_min=delta_min,
            stop=stop,
            ready=ready,
        )
    )
