"""Line-delimited JSON stream service exposing the live typing engine.

One engine per connection; all timestamps are client-supplied so a
recorded transcript replays byte-identically.  See PROTOCOL.md for the
full message schema.
"""
from __future__ import annotations

import json
import logging
import socketserver
import threading

from .engine import GazeTypingEngine
from .keyboard import KeyboardLayout, default_layout
from .types import AutocalConfig, ScreenConfig

log = logging.getLogger(__name__)

FLOAT_DECIMALS = 6  # wire floats are rounded for stable transcripts


def _num(v: float) -> float | int:
    r = round(float(v), FLOAT_DECIMALS)
    return int(r) if r == int(r) else r


def encode_message(msg: dict) -> str:
    """One protocol line: compact JSON, key order as constructed, newline-terminated."""
    return json.dumps(msg, separators=(",", ":")) + "\n"


def _layout_payload(layout: KeyboardLayout) -> dict:
    return {
        "keys": [
            {"label": k.label, "x": _num(k.x), "y": _num(k.y), "w": _num(k.w), "h": _num(k.h)}
            for k in layout.keys
        ],
        "text_box": {
            "x": _num(layout.text_box.x),
            "y": _num(layout.text_box.y),
            "w": _num(layout.text_box.w),
            "h": _num(layout.text_box.h),
        },
        "char_advance": _num(layout.char_advance),
    }


class EngineSession:
    """Protocol state machine for one connection; transport-agnostic."""

    def __init__(self, layout: KeyboardLayout | None = None):
        self._layout = layout
        self.engine: GazeTypingEngine | None = None
        self.offset_dx = 0.0
        self.offset_dy = 0.0

    def handle_line(self, line: str) -> list[str]:
        """Process one client line, return the reply lines in order."""
        try:
            msg = json.loads(line)
        except json.JSONDecodeError:
            return [self._error("malformed message: not valid JSON")]
        if not isinstance(msg, dict) or "kind" not in msg:
            return [self._error("malformed message: missing kind")]
        kind = msg["kind"]
        try:
            if kind == "HELLO":
                return self._hello(msg)
            if self.engine is None:
                return [self._error("not initialized")]
            if kind == "SAMPLE":
                return self._sample(msg)
            if kind == "SET_OFFSET":
                self.offset_dx = float(msg.get("dx", 0.0))
                self.offset_dy = float(msg.get("dy", 0.0))
                return [self._state()]
            if kind == "TOGGLE_AUTOCAL":
                self.engine.set_autocal_enabled(bool(msg.get("enabled", True)))
                return [self._state()]
            if kind == "RESET":
                self.engine.reset_calibration()
                return [self._state()]
            return [self._error(f"unknown kind: {kind}")]
        except (TypeError, ValueError, KeyError) as exc:
            return [self._error(str(exc))]

    def _hello(self, msg: dict) -> list[str]:
        screen_in = msg.get("screen") or {}
        cfg_in = msg.get("config") or {}
        screen = ScreenConfig(
            width=int(screen_in.get("width", 1920)),
            height=int(screen_in.get("height", 1080)),
            sample_rate_hz=float(screen_in.get("sample_rate_hz", 60.0)),
        )
        cfg = AutocalConfig(
            tau=float(cfg_in.get("tau", 150.0)),
            window=int(cfg_in.get("window", 64)),
            bound=float(cfg_in.get("bound", 200.0)),
            fixation_min_duration_ms=float(cfg_in.get("fixation_min_duration_ms", 100.0)),
            saccade_velocity_threshold=float(cfg_in.get("saccade_velocity_threshold", 0.5)),
        )
        layout = self._layout or default_layout(screen.width, screen.height)
        self.engine = GazeTypingEngine(cfg, screen, layout)
        self.offset_dx = 0.0
        self.offset_dy = 0.0
        reply = {
            "kind": "HELLO",
            "layout": _layout_payload(layout),
            "config": {
                "tau": _num(cfg.tau),
                "window": cfg.window,
                "bound": _num(cfg.bound),
                "fixation_min_duration_ms": _num(cfg.fixation_min_duration_ms),
                "saccade_velocity_threshold": _num(cfg.saccade_velocity_threshold),
            },
        }
        return [encode_message(reply)]

    def _sample(self, msg: dict) -> list[str]:
        t = int(msg["t_ms"])
        x = float(msg["x"])
        y = float(msg["y"])
        # the injected miscalibration lives server-side: shift the reported
        # coordinates away from the client's true position
        upd = self.engine.feed(t, x - self.offset_dx, y - self.offset_dy)
        out: list[str] = []
        if upd.activation is not None:
            out.append(encode_message({"kind": "ACTIVATION", "label": upd.activation, "t_ms": t}))
        if upd.zone_hit:
            out.append(
                encode_message(
                    {
                        "kind": "CALIBRATION",
                        "eps_x": _num(upd.eps.dx),
                        "eps_y": _num(upd.eps.dy),
                        "updated": upd.updated,
                    }
                )
            )
        out.append(self._state(upd.cal_x, upd.cal_y, upd.zone_hit))
        return out

    def _state(self, cal_x: float | None = None, cal_y: float | None = None, zone_hit: bool = False) -> str:
        eng = self.engine
        dwell = eng.dwell.state
        eps = eng.autocal.estimate.eps
        return encode_message(
            {
                "kind": "STATE",
                "cal_x": _num(cal_x if cal_x is not None else 0.0),
                "cal_y": _num(cal_y if cal_y is not None else 0.0),
                "eps_x": _num(eps.dx),
                "eps_y": _num(eps.dy),
                "dwell": {
                    "key": dwell.target_key.label if dwell.target_key else None,
                    "progress": _num(dwell.progress),
                },
                "text": eng.buffer.content,
                "zone_hit": zone_hit,
            }
        )

    @staticmethod
    def _error(message: str) -> str:
        return encode_message({"kind": "ERROR", "message": message})


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        session = EngineSession(self.server.layout)  # type: ignore[attr-defined]
        log.info("connection from %s", self.client_address)
        telemetry = self.server.telemetry_file  # type: ignore[attr-defined]
        for raw in self.rfile:
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                self.wfile.write(EngineSession._error("malformed message: not utf-8").encode())
                continue
            if not line.strip():
                continue
            replies = session.handle_line(line)
            for reply in replies:
                self.wfile.write(reply.encode("utf-8"))
                if telemetry is not None:
                    telemetry.write(reply)
            self.wfile.flush()
            if telemetry is not None:
                telemetry.flush()
        log.info("connection closed %s", self.client_address)


class StreamServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str = "127.0.0.1", port: int = 0, layout: KeyboardLayout | None = None,
                 telemetry_file=None):
        self.layout = layout
        self.telemetry_file = telemetry_file
        super().__init__((host, port), _Handler)

    @property
    def port(self) -> int:
        return self.server_address[1]

    def serve_background(self) -> threading.Thread:
        thread = threading.Thread(target=self.serve_forever, daemon=True)
        thread.start()
        return thread


def serve(host: str, port: int, layout: KeyboardLayout | None = None, telemetry_file=None) -> None:
    """Run the server until interrupted (used by the CLI)."""
    with StreamServer(host, port, layout, telemetry_file) as server:
        print(f"listening on {host}:{server.port}", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            log.info("interrupted, shutting down")
        finally:
            if telemetry_file is not None:
                telemetry_file.flush()
