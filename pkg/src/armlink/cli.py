"""Operator command line: one-shot solves, validation sweeps, node runners.

Degrees and millimeters at this boundary, radians inside.  Exit codes:
0 success, 1 usage, 2 domain error (solver or validation), 3 I/O.

Configuration is a flat key = value file; unknown keys are rejected.  All
keys are optional and default to the built-in arm:

    links.a1 = 63            links.a2 = 145        # mm
    links.a3 = 170           links.a4 = 110
    limits.theta1.min = -90  limits.theta1.max = 90   # degrees, joints 1..5
    scene.floor_z = 0        scene.base_radius = 40   # mm
    scene.base_height = 63
    protocol.delta_min = 0.5     # degrees, debounce threshold
    servo.max_rate = 300         # degrees per second
    sim.dt = 0.01                # seconds per tick
    net.host = 127.0.0.1
    net.command_port = 7781
    net.telemetry_port = 7782
    net.bridge_port = 7783
"""

from __future__ import annotations

import argparse
import math
import sys
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .kinematics import (
    IkError,
    JointAngles,
    LinkLengths,
    fk_position,
    ik_solve,
    rad_to_deg,
    roundtrip_validate,
    ToolPosition,
)
from .nodes import (
    DEFAULT_DT,
    DEFAULT_MAX_RATE,
    run_bridge,
    run_master,
    run_slave,
)
from .protocol import DEFAULT_DELTA_MIN
from .workspace import JointLimits, Scene, sample_workspace

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage failures exit 1, not argparse's 2
        raise UsageError(message)


@dataclass
class Config:
    links: LinkLengths = field(default_factory=LinkLengths)
    limits: JointLimits = field(default_factory=JointLimits)
    scene: Scene = field(default_factory=Scene)
    delta_min: float = DEFAULT_DELTA_MIN
    max_rate: float = DEFAULT_MAX_RATE
    dt: float = DEFAULT_DT
    host: str = "127.0.0.1"
    command_port: int = 7781
    telemetry_port: int = 7782
    bridge_port: int = 7783


def _parse_kv_file(path: Path) -> dict[str, str]:
    pairs = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise UsageError(f"{path}:{lineno}: empty key or value")
        if key in pairs:
            raise UsageError(f"{path}:{lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def load_config(path: str | Path | None) -> Config:
    """Build a Config from a flat key = value file; missing keys keep defaults."""
    config = Config()
    if path is None:
        return config
    pairs = _parse_kv_file(Path(path))

    def take_float(key: str, default: float) -> float:
        raw = pairs.pop(key, None)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise UsageError(f"config key {key}: not a number: {raw!r}") from None

    def take_int(key: str, default: int) -> int:
        raw = pairs.pop(key, None)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"config key {key}: not an integer: {raw!r}") from None

    defaults = LinkLengths()
    try:
        config.links = LinkLengths(
            a1=take_float("links.a1", defaults.a1),
            a2=take_float("links.a2", defaults.a2),
            a3=take_float("links.a3", defaults.a3),
            a4=take_float("links.a4", defaults.a4),
        )
        limit_pairs = []
        for i, (lo, hi) in enumerate(JointLimits().pairs(), start=1):
            limit_pairs.append(
                (
                    take_float(f"limits.theta{i}.min", math.degrees(lo)),
                    take_float(f"limits.theta{i}.max", math.degrees(hi)),
                )
            )
        config.limits = JointLimits.from_degrees(*limit_pairs)
        scene_defaults = Scene()
        config.scene = Scene(
            floor_z=take_float("scene.floor_z", scene_defaults.floor_z),
            base_radius=take_float("scene.base_radius", scene_defaults.base_radius),
            base_height=take_float("scene.base_height", scene_defaults.base_height),
        )
    except ValueError as err:
        raise UsageError(f"config: {err}") from None
    config.delta_min = math.radians(take_float("protocol.delta_min", 0.5))
    config.max_rate = math.radians(take_float("servo.max_rate", 300.0))
    config.dt = take_float("sim.dt", DEFAULT_DT)
    config.host = pairs.pop("net.host", config.host)
    config.command_port = take_int("net.command_port", config.command_port)
    config.telemetry_port = take_int("net.telemetry_port", config.telemetry_port)
    config.bridge_port = take_int("net.bridge_port", config.bridge_port)
    if pairs:
        raise UsageError(f"config: unknown keys {sorted(pairs)}")
    if config.delta_min <= 0 or config.max_rate <= 0 or config.dt <= 0:
        raise UsageError("config: delta_min, max_rate and dt must be positive")
    return config


def _fmt3(value: float) -> str:
    return f"{round(value, 3) + 0.0:.3f}"  # + 0.0 folds -0.000 into 0.000


def cmd_fk(config: Config, args) -> int:
    angles = JointAngles.from_degrees(*args.angles)
    p = fk_position(angles, config.links)
    print(" ".join(_fmt3(c) for c in p.as_tuple()))
    return EXIT_OK


def cmd_ik(config: Config, args) -> int:
    try:
        solution = ik_solve(
            ToolPosition(args.x, args.y, args.z), math.radians(args.grip), config.links
        )
    except IkError as err:
        print(type(err).__name__, file=sys.stderr)
        return EXIT_DOMAIN
    print(" ".join(_fmt3(rad_to_deg(t)) for t in solution.angles))
    return EXIT_OK


def cmd_roundtrip(config: Config, args) -> int:
    if args.n <= 0:
        raise UsageError("roundtrip: -n must be positive")
    rng = np.random.default_rng(args.seed)
    lo = np.array([p[0] for p in config.limits.pairs()])
    hi = np.array([p[1] for p in config.limits.pairs()])
    passed = skipped = failed = 0
    max_error = 0.0
    for _ in range(args.n):
        angles = JointAngles.from_iterable(rng.uniform(lo, hi))
        report = roundtrip_validate(angles, config.links, tol=args.tol)
        if report.status == "skip":
            skipped += 1
        elif report.status == "pass":
            passed += 1
            max_error = max(max_error, report.error_mm)
        else:
            failed += 1
            max_error = max(max_error, report.error_mm)
    print(f"pass={passed} skip={skipped} fail={failed} maxerr={max_error:.3g}")
    return EXIT_OK if failed == 0 else EXIT_DOMAIN


def _render_atlas_figures(records, csv_path: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = np.array([p.as_tuple() for _, p, _ in records])
    ok = np.array([valid for _, _, valid in records], dtype=bool)
    radial = np.hypot(xs[:, 0], xs[:, 1])
    written = []
    views = (
        ("top", xs[:, 0], xs[:, 1], "x [mm]", "y [mm]"),
        ("side", radial, xs[:, 2], "radial reach [mm]", "z [mm]"),
    )
    for name, u, v, xlabel, ylabel in views:
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.scatter(u[~ok], v[~ok], s=4, c="#d62728", alpha=0.4, label="rejected")
        ax.scatter(u[ok], v[ok], s=4, c="#2ca02c", alpha=0.5, label="valid")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(f"workspace atlas, {name} view")
        ax.set_aspect("equal")
        ax.legend(loc="upper right", fontsize=8)
        out = csv_path.with_name(f"{csv_path.stem}_{name}.png")
        fig.savefig(out, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(out)
    return written


def cmd_atlas(config: Config, args) -> int:
    if args.n <= 0:
        raise UsageError("atlas: -n must be positive")
    records = sample_workspace(config.links, config.limits, config.scene, args.n, args.seed)
    csv_path = Path(args.output)
    header = ",".join(
        [f"theta{i}_deg" for i in range(1, 6)] + ["x_mm", "y_mm", "z_mm", "valid"]
    )
    rows = [header]
    for angles, position, valid in records:
        cells = [f"{rad_to_deg(t):.6f}" for t in angles]
        cells += [f"{c:.6f}" for c in position.as_tuple()]
        cells.append("1" if valid else "0")
        rows.append(",".join(cells))
    csv_path.write_text("\n".join(rows) + "\n")
    written = [csv_path]
    if not args.no_figures:
        written += _render_atlas_figures(records, csv_path)
    for path in written:
        print(path)
    return EXIT_OK


def cmd_slave(config: Config, args) -> int:
    stop = threading.Event()

    def ready(command_port: int, telemetry_port: int) -> None:
        print(
            f"slave listening: commands {config.host}:{command_port}, "
            f"telemetry {config.host}:{telemetry_port}",
            file=sys.stderr,
        )

    try:
        run_slave(
            host=config.host,
            command_port=config.command_port,
            telemetry_port=config.telemetry_port,
            links=config.links,
            limits=config.limits,
            scene=config.scene,
            max_rate=config.max_rate,
            dt=config.dt,
            stop=stop,
            ready=ready,
        )
    except KeyboardInterrupt:
        stop.set()
    return EXIT_OK


def cmd_master(config: Config, args) -> int:
    if args.mode == "script":
        if args.script is None:
            raise UsageError("master: script mode needs --script FILE")
        try:
            source = Path(args.script).read_text().splitlines()
        except OSError as err:
            print(f"cannot read script: {err}", file=sys.stderr)
            return EXIT_IO
    else:
        if args.script is not None:
            raise UsageError("master: --script only applies to script mode")
        source = sys.stdin
    run_master(
        source,
        mode=args.mode,
        host=config.host,
        port=config.command_port,
        links=config.links,
        limits=config.limits,
        delta_min=config.delta_min,
        out=print,
    )
    return EXIT_OK


def cmd_bridge(config: Config, args) -> int:
    def ready(port: int) -> None:
        print(f"bridge listening: ws://{config.host}:{port}", file=sys.stderr)

    try:
        run_bridge(
            host=config.host,
            bridge_port=config.bridge_port,
            slave_host=config.host,
            command_port=config.command_port,
            telemetry_port=config.telemetry_port,
            links=config.links,
            limits=config.limits,
            delta_min=config.delta_min,
            ready=ready,
        )
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="armlink", description=__doc__.splitlines()[0])
    parser.add_argument("--config", metavar="PATH", help="flat key = value config file")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampling commands")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fk", help="joint angles (degrees) -> tool x y z (mm)")
    p.add_argument("angles", type=float, nargs=5, metavar="DEG")
    p.set_defaults(fn=cmd_fk)

    p = sub.add_parser("ik", help="target x y z (mm) -> joint angles (degrees)")
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.add_argument("z", type=float)
    p.add_argument("grip", type=float, nargs="?", default=0.0, help="gripper angle, degrees")
    p.set_defaults(fn=cmd_ik)

    p = sub.add_parser("roundtrip", help="random fk->ik->fk self-check sweep")
    p.add_argument("-n", type=int, default=1000, help="number of random poses")
    p.add_argument("--tol", type=float, default=1e-6, help="pass tolerance, mm")
    p.set_defaults(fn=cmd_roundtrip)

    p = sub.add_parser("atlas", help="sample the joint box to CSV plus view figures")
    p.add_argument("-n", type=int, default=2000, help="number of samples")
    p.add_argument("-o", "--output", default="atlas.csv", help="CSV output path")
    p.add_argument("--no-figures", action="store_true", help="skip the PNG views")
    p.set_defaults(fn=cmd_atlas)

    p = sub.add_parser("slave", help="run the actuator node over TCP")
    p.set_defaults(fn=cmd_slave)

    p = sub.add_parser("master", help="run the operator node against a slave")
    p.add_argument("--mode", choices=("serial", "analog", "script"), default="serial")
    p.add_argument("--script", metavar="FILE", help="scenario file for script mode")
    p.set_defaults(fn=cmd_master)

    p = sub.add_parser("bridge", help="re-serve a slave's channels over WebSocket")
    p.set_defaults(fn=cmd_bridge)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_config(args.config)
        return args.fn(config, args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConnectionError as err:
        print(f"connection error: {err}", file=sys.stderr)
        return EXIT_IO
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
