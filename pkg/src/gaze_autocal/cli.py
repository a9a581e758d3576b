"""Command-line entry point.

Commands:
  replay           run the filter + estimator over a t_ms,x,y trace CSV
  session          run one simulated typing session
  experiment       run the full counterbalanced simulated study
  serve            run the line-delimited JSON stream service
  validate-config  check a config file and exit
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

from . import service
from .autocal import Autocalibrator, ReadingContext
from .fixation import FixationFilter
from .keyboard import default_layout, load_layout_file
from .metrics import ABORTED_SPEED_EXCLUDE, ABORTED_SPEED_PARTIAL, aggregate, render_report
from .simulator import (
    SYSTEM_CONTROL,
    SYSTEM_EYEO,
    SessionSpec,
    SimParams,
    experiment_csv_lines,
    load_phrases,
    run_experiment,
    run_session,
    telemetry_csv_line,
    TELEMETRY_CSV_COLUMNS,
)
from .types import AutocalConfig, ConfigError, GazeSample, Offset2D, ScreenConfig, load_config_file, validate_config


def _setup_logging() -> None:
    level = os.environ.get("GAZE_AUTOCAL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _load_config(path: str | None) -> tuple[AutocalConfig, ScreenConfig]:
    if path is None:
        return AutocalConfig(), ScreenConfig()
    return load_config_file(path)


def _parse_offset(text: str) -> Offset2D:
    try:
        dx, dy = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'dx,dy', got {text!r}")
    return Offset2D(dx, dy)


def _read_trace(path: str) -> list[GazeSample]:
    samples: list[GazeSample] = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return samples
    start = 1 if lines[0].strip().lower().replace(" ", "") == "t_ms,x,y" else 0
    prev_t: int | None = None
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            if len(parts) != 3:
                raise ValueError("expected 3 fields")
            t, x, y = int(parts[0]), float(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: malformed trace row {line!r}: {exc}") from exc
        if prev_t is not None and t <= prev_t:
            raise ValueError(f"line {lineno}: non-monotonic timestamp {t} after {prev_t}")
        prev_t = t
        samples.append(GazeSample(t, x, y))
    return samples


def cmd_replay(args: argparse.Namespace) -> int:
    cfg, screen = _load_config(args.config)
    validate_config(cfg, screen)
    samples = _read_trace(args.trace)
    ctx = ReadingContext(
        last_char_center=(args.char_x, args.char_y) if args.nchar > 0 else None,
        n_char=args.nchar,
        text_box_bottom=args.textbox_bottom,
    )
    filt = FixationFilter(cfg, screen.sample_rate_hz)
    autocal = Autocalibrator(cfg)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        print("t_ms,raw_x,raw_y,cal_x,cal_y,eps_x,eps_y,zone_hit,updated", file=out)
        for s in samples:
            event = filt.push(s)
            o = autocal.process(event, ctx)
            print(
                f"{s.t},{s.x:.3f},{s.y:.3f},{o.x:.3f},{o.y:.3f},"
                f"{o.eps.dx:.3f},{o.eps.dy:.3f},{int(o.zone_hit)},{int(o.updated)}",
                file=out,
            )
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _sim_params(args: argparse.Namespace) -> SimParams:
    params = SimParams()
    if getattr(args, "p_read", None) is not None:
        params = replace(params, p_read=args.p_read)
    if getattr(args, "noise_std", None) is not None:
        params = replace(params, noise_std=args.noise_std)
    return params


def cmd_session(args: argparse.Namespace) -> int:
    cfg, screen = _load_config(args.config)
    validate_config(cfg, screen)
    layout = load_layout_file(args.layout) if args.layout else default_layout(screen.width, screen.height)
    phrase = args.phrase or load_phrases(layout=layout)[0]
    spec = SessionSpec(
        phrase=phrase,
        injected_offset=args.offset,
        system=args.system,
        timeout_ms=args.timeout_ms,
        seed=args.seed,
    )
    res = run_session(spec, cfg, layout, screen, _sim_params(args), collect_log=args.out is not None)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(TELEMETRY_CSV_COLUMNS + "\n")
            for row in res.event_log:
                fh.write(telemetry_csv_line(row) + "\n")
    status = "ABORTED" if res.aborted else "completed"
    print(f"{status}: typed {res.typed!r} in {res.duration_ms} ms")
    print(
        f"backspaces={res.backspaces} updates_applied={res.updates_applied} "
        f"eps=({res.final_eps.dx:.2f},{res.final_eps.dy:.2f})"
    )
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    cfg, screen = _load_config(args.config)
    validate_config(cfg, screen)
    layout = load_layout_file(args.layout) if args.layout else default_layout(screen.width, screen.height)
    phrases = load_phrases(args.phrases, layout=layout) if args.phrases else None
    table = run_experiment(
        participants=args.participants,
        seed=args.seed,
        cfg=cfg,
        layout=layout,
        screen=screen,
        params=_sim_params(args),
        phrases=phrases,
    )
    summary = aggregate(table, aborted_speed=args.aborted_speed)
    os.makedirs(args.out, exist_ok=True)
    sessions_path = os.path.join(args.out, "sessions.csv")
    report_path = os.path.join(args.out, "report.txt")
    with open(sessions_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(experiment_csv_lines(table)) + "\n")
    report = render_report(summary)
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(report)
    print(report, end="")
    print(f"wrote {sessions_path} and {report_path}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    layout = load_layout_file(args.layout) if args.layout else None
    telemetry = open(args.log, "a", encoding="utf-8") if args.log else None
    try:
        service.serve(args.host, args.port, layout, telemetry)
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    finally:
        if telemetry is not None:
            telemetry.close()
    return 0


def cmd_validate_config(args: argparse.Namespace) -> int:
    cfg, screen = load_config_file(args.config_file)
    validate_config(cfg, screen)
    print(f"ok: {args.config_file}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaze-autocal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", help="replay a gaze trace through the calibration pipeline")
    p.add_argument("trace", help="CSV trace with header t_ms,x,y")
    p.add_argument("--config", default=None)
    p.add_argument("--char-x", type=float, default=960.0, help="last typed char center x")
    p.add_argument("--char-y", type=float, default=100.0, help="last typed char center y")
    p.add_argument("--textbox-bottom", type=float, default=200.0)
    p.add_argument("--nchar", type=int, default=1)
    p.add_argument("--out", default=None, help="telemetry CSV path (default stdout)")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("session", help="run one simulated typing session")
    p.add_argument("--config", default=None)
    p.add_argument("--layout", default=None)
    p.add_argument("--phrase", default=None)
    p.add_argument("--system", choices=[SYSTEM_EYEO, SYSTEM_CONTROL], default=SYSTEM_EYEO)
    p.add_argument("--offset", type=_parse_offset, default=Offset2D(0.0, 0.0), metavar="DX,DY")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout-ms", type=int, default=120_000)
    p.add_argument("--p-read", type=float, default=None)
    p.add_argument("--noise-std", type=float, default=None)
    p.add_argument("--out", default=None, help="telemetry CSV path")
    p.set_defaults(func=cmd_session)

    p = sub.add_parser("experiment", help="run the counterbalanced simulated study")
    p.add_argument("--config", default=None)
    p.add_argument("--layout", default=None)
    p.add_argument("--participants", type=int, default=19)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--phrases", default=None, help="phrase corpus file (default: bundled)")
    p.add_argument("--p-read", type=float, default=None)
    p.add_argument("--noise-std", type=float, default=None)
    p.add_argument(
        "--aborted-speed",
        choices=[ABORTED_SPEED_PARTIAL, ABORTED_SPEED_EXCLUDE],
        default=ABORTED_SPEED_PARTIAL,
    )
    p.add_argument("--out", default="experiment_out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("serve", help="run the stream service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7460)
    p.add_argument("--layout", default=None)
    p.add_argument("--log", default=None, help="append server telemetry lines to this file")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("validate-config", help="validate a config file")
    p.add_argument("config_file")
    p.set_defaults(func=cmd_validate_config)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
