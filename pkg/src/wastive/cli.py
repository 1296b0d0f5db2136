"""Command line entry points.

    wastive run        live control loop (camera frames from --frames PGM dir)
    wastive simulate   scripted scenario through the loopback device
    wastive replay     re-send a recorded trace's angles over the transport
    wastive calibrate  step one servo's pulse interactively, print calibration
    wastive crc        CRC-8 of hex bytes (wire debugging)
    wastive serve      run + telemetry WebSocket + static console
"""

from __future__ import annotations

import argparse
import os
import queue
import sys
import threading
from pathlib import Path

from . import protocol
from .actuation import angle_to_pulse
from .config import RuntimeConfig, config_to_dict, load_config
from .errors import ConfigError, TransportError
from .runtime import (
    MODE_LIVE,
    MODE_VIRTUAL,
    RealClock,
    SimulatedClock,
    control_loop,
)
from .simulator import export_trace, load_scenario, parse_trace, run_scenario
from .transport import open_transport
from .vision import read_pgm

CONFIG_ENV = "WASTIVE_CONFIG"


def _load_config_arg(path: str | None) -> RuntimeConfig:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return load_config("")
    return load_config(Path(path).read_text())


class PgmDirectorySource:
    """Plays a directory of .pgm frames in name order, once."""

    def __init__(self, directory: str):
        self._paths = sorted(Path(directory).glob("*.pgm"))
        if not self._paths:
            raise ConfigError(f"no .pgm frames in {directory}")
        self._i = 0

    def take(self, now_ms: float):
        if self._i >= len(self._paths):
            return None
        frame = read_pgm(self._paths[self._i], timestamp=now_ms)
        self._i += 1
        return frame


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wastive",
        description="Presence-driven kinetic wave installation: host pipeline and tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument(
            "--config", "-c", default=None,
            help=f"config JSON path (default: ${CONFIG_ENV} or built-in defaults)",
        )

    p_run = sub.add_parser("run", help="run the live control loop")
    add_config(p_run)
    p_run.add_argument("--frames", help="directory of .pgm frames as the camera source")
    p_run.add_argument("--virtual", action="store_true", help="start in virtual-visitor mode")
    p_run.add_argument("--ticks", type=int, default=None, help="stop after N ticks")
    p_run.add_argument(
        "--sim-clock", action="store_true",
        help="use a simulated clock (no sleeping; for smoke tests)",
    )

    p_sim = sub.add_parser("simulate", help="run a scenario file through the simulator")
    add_config(p_sim)
    p_sim.add_argument("scenario", help="scenario JSON path")
    p_sim.add_argument("--trace", help="write the trace CSV here")

    p_rep = sub.add_parser("replay", help="re-send a trace's angles over the transport")
    add_config(p_rep)
    p_rep.add_argument("trace", help="trace CSV path")
    p_rep.add_argument(
        "--fast", action="store_true", help="do not pace to the tick rate"
    )

    p_cal = sub.add_parser("calibrate", help="interactively find a servo's pulse range")
    add_config(p_cal)
    p_cal.add_argument("servo_index", type=int)

    p_crc = sub.add_parser("crc", help="CRC-8 of hex bytes, e.g. 010104DC05DC05")
    p_crc.add_argument("hex")

    p_srv = sub.add_parser("serve", help="run the loop and serve telemetry + console")
    add_config(p_srv)
    p_srv.add_argument("--frames", help="directory of .pgm frames as the camera source")
    p_srv.add_argument("--virtual", action="store_true", help="start in virtual-visitor mode")
    p_srv.add_argument("--host", default=None, help="override telemetry bind host")
    p_srv.add_argument("--port", type=int, default=None, help="override telemetry bind port")

    return parser


def _cmd_run(args) -> int:
    config = _load_config_arg(args.config)
    source = PgmDirectorySource(args.frames) if args.frames else None
    transport = open_transport(config)
    clock = SimulatedClock() if args.sim_clock else RealClock()
    mode = MODE_VIRTUAL if args.virtual else MODE_LIVE
    try:
        ticks = control_loop(
            config, source, transport, clock=clock, max_ticks=args.ticks, mode=mode
        )
    except KeyboardInterrupt:
        ticks = -1
    finally:
        transport.close()
    print(f"loop finished after {ticks} ticks")
    return 0


def _cmd_simulate(args) -> int:
    config = _load_config_arg(args.config)
    scenario = load_scenario(Path(args.scenario).read_text())
    rows = run_scenario(scenario, config)
    if args.trace:
        Path(args.trace).write_text(export_trace(rows))
        print(f"wrote {len(rows)} rows to {args.trace}")
    else:
        peaks = [max(r.base[i] for r in rows) for i in range(len(rows[0].base))]
        print(f"{len(rows)} ticks over {scenario.duration_s} s")
        print("peak base heights: " + " ".join(f"{p:.3f}" for p in peaks))
    return 0


def _cmd_replay(args) -> int:
    config = _load_config_arg(args.config)
    rows = parse_trace(Path(args.trace).read_text())
    transport = open_transport(config)
    clock = RealClock()
    period_ms = 1000.0 / config.tick_hz
    start = clock.now_ms()
    try:
        for i, row in enumerate(rows):
            pulses = [
                angle_to_pulse(a, c) for a, c in zip(row.angles, config.servos)
            ]
            data = protocol.encode(
                protocol.MSG_SET_TARGETS, i & 0xFF, protocol.pack_pulses(pulses)
            )
            now = start + i * period_ms
            transport.write(data, now)
            transport.poll(now)
            if not args.fast:
                clock.sleep_until(start + (i + 1) * period_ms)
    finally:
        transport.close()
    print(f"replayed {len(rows)} ticks")
    return 0


CALIBRATE_HELP = """\
commands: u/d pulse +-step | U/D pulse +-10*step | step N set step size
          min / max record current pulse as endpoint | show | save | q
"""


def _cmd_calibrate(args, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    config = _load_config_arg(args.config)
    idx = args.servo_index
    if not 0 <= idx < len(config.servos):
        print(f"servo index {idx} out of range 0..{len(config.servos) - 1}", file=stdout)
        return 1
    transport = open_transport(config)
    pulses = config.rest_pulses()
    pulse = pulses[idx]
    step = 10
    recorded = {"pulse_min": None, "pulse_max": None}
    seq = 0

    def send():
        nonlocal seq
        pulses[idx] = pulse
        data = protocol.encode(
            protocol.MSG_SET_TARGETS, seq & 0xFF, protocol.pack_pulses(pulses)
        )
        seq += 1
        transport.write(data, 0.0)
        transport.poll(0.0)

    print(CALIBRATE_HELP, end="", file=stdout)
    send()
    try:
        for line in stdin:
            cmd = line.strip()
            if cmd == "q":
                break
            elif cmd == "u":
                pulse = min(2500, pulse + step)
                send()
            elif cmd == "d":
                pulse = max(500, pulse - step)
                send()
            elif cmd == "U":
                pulse = min(2500, pulse + 10 * step)
                send()
            elif cmd == "D":
                pulse = max(500, pulse - 10 * step)
                send()
            elif cmd.startswith("step "):
                step = max(1, int(cmd.split()[1]))
            elif cmd == "min":
                recorded["pulse_min"] = pulse
            elif cmd == "max":
                recorded["pulse_max"] = pulse
            elif cmd == "show":
                print(f"pulse={pulse} step={step} recorded={recorded}", file=stdout)
            elif cmd == "save":
                import json

                calib = config_to_dict(config)["servos"][idx]
                calib.update({k: v for k, v in recorded.items() if v is not None})
                print(json.dumps(calib, indent=2), file=stdout)
            elif cmd:
                print(f"unknown command {cmd!r}", file=stdout)
                print(CALIBRATE_HELP, end="", file=stdout)
    finally:
        transport.close()
    return 0


def _cmd_crc(args) -> int:
    try:
        data = bytes.fromhex(args.hex)
    except ValueError:
        print(f"not a hex string: {args.hex!r}", file=sys.stderr)
        return 1
    print(f"{protocol.crc8(data):02X}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .telemetry import SnapshotBus, make_app

    config = _load_config_arg(args.config)
    bus = SnapshotBus()
    control: "queue.Queue[dict]" = queue.Queue()
    transport = open_transport(config)
    source = PgmDirectorySource(args.frames) if args.frames else None
    mode = MODE_VIRTUAL if args.virtual else MODE_LIVE
    stop = threading.Event()

    loop_thread = threading.Thread(
        target=control_loop,
        args=(config, source, transport),
        kwargs={
            "control_channel": control,
            "snapshot_sink": bus.publish,
            "stop": stop,
            "mode": mode,
        },
        daemon=True,
    )
    loop_thread.start()

    static_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    app = make_app(bus, control, static_dir if static_dir.is_dir() else None)
    host = args.host or config.telemetry.host
    port = args.port if args.port is not None else config.telemetry.port
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        stop.set()
        loop_thread.join(timeout=5)
        transport.close()
    return 0


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "run": _cmd_run,
        "simulate": _cmd_simulate,
        "replay": _cmd_replay,
        "calibrate": _cmd_calibrate,
        "crc": _cmd_crc,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, TransportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
