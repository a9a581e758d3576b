"""Shared domain types, units, and configuration.

Units and coordinate conventions used across the whole package:

* Screen coordinates are pixels with the origin at the TOP-LEFT corner and
  y increasing downward.  The text box sits at the top of the screen, so
  "gaze above the keyboard" means small y values.
* Timestamps are integer milliseconds on a monotonic clock.
* Velocities are pixels per millisecond.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields


class ConfigError(ValueError):
    """Raised when a configuration value violates an invariant."""


@dataclass(frozen=True)
class GazeSample:
    """One raw gaze coordinate reported by a tracker."""

    t: int  # milliseconds, strictly increasing within a stream
    x: float  # pixels
    y: float  # pixels

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"gaze sample coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Offset2D:
    """A 2D offset in screen pixels (calibration errors, injected offsets)."""

    dx: float = 0.0
    dy: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dx) and math.isfinite(self.dy)):
            raise ValueError(f"offset components must be finite, got ({self.dx}, {self.dy})")

    def magnitude(self) -> float:
        return math.hypot(self.dx, self.dy)


@dataclass(frozen=True)
class ScreenConfig:
    """Virtual screen geometry and tracker sampling rate."""

    width: int = 1920
    height: int = 1080
    sample_rate_hz: float = 60.0

    @property
    def sample_period_ms(self) -> float:
        return 1000.0 / self.sample_rate_hz


@dataclass(frozen=True)
class AutocalConfig:
    """Parameters of the autocalibration pipeline.

    Defaults: calibration-zone radius tau=150 px, sliding window of 64
    deltas, correction bound b=200 px, 100 ms fixation duration rule, and
    a 0.5 px/ms saccade velocity threshold (at 60 Hz one sample step is
    ~16.7 ms, so a key-to-key jump of ~130 px measures ~8 px/ms while
    fixational drift stays well under 0.2 px/ms).
    """

    tau: float = 150.0  # px, calibration-zone radius
    window: int = 64  # sliding-window capacity (sample count)
    bound: float = 200.0  # px, clip limit for the applied correction
    fixation_min_duration_ms: float = 100.0
    saccade_velocity_threshold: float = 0.5  # px/ms

    def clip(self, value: float) -> float:
        b = self.bound
        return -b if value < -b else b if value > b else value


def validate_config(cfg: AutocalConfig, screen: ScreenConfig) -> AutocalConfig:
    """Check every invariant; return cfg unchanged or raise ConfigError.

    The error message names the first violated invariant.
    """
    if not (math.isfinite(cfg.tau) and cfg.tau > 0):
        raise ConfigError("tau must be positive")
    if cfg.window < 1:
        raise ConfigError("window must be ≥ 1")
    if not (math.isfinite(cfg.bound) and cfg.bound >= 0):
        raise ConfigError("bound must be ≥ 0")
    if not (math.isfinite(cfg.fixation_min_duration_ms) and cfg.fixation_min_duration_ms > 0):
        raise ConfigError("fixation_min_duration_ms must be positive")
    if not (math.isfinite(cfg.saccade_velocity_threshold) and cfg.saccade_velocity_threshold > 0):
        raise ConfigError("saccade_velocity_threshold must be positive")
    if screen.width <= 0:
        raise ConfigError("screen width must be positive")
    if screen.height <= 0:
        raise ConfigError("screen height must be positive")
    if not (math.isfinite(screen.sample_rate_hz) and screen.sample_rate_hz > 0):
        raise ConfigError("sample_rate_hz must be positive")
    return cfg


# Flat "key = value" config file, one field per line, '#' comments.
_AUTOCAL_KEYS = {f.name for f in fields(AutocalConfig)}
_SCREEN_KEYS = {"screen_width": "width", "screen_height": "height", "sample_rate_hz": "sample_rate_hz"}


def format_config_text(cfg: AutocalConfig, screen: ScreenConfig) -> str:
    lines = [
        "# gaze autocalibration engine configuration",
        "# pixels / milliseconds; see types.py for field meanings",
        f"tau = {cfg.tau}",
        f"window = {cfg.window}",
        f"bound = {cfg.bound}",
        f"fixation_min_duration_ms = {cfg.fixation_min_duration_ms}",
        f"saccade_velocity_threshold = {cfg.saccade_velocity_threshold}",
        f"screen_width = {screen.width}",
        f"screen_height = {screen.height}",
        f"sample_rate_hz = {screen.sample_rate_hz}",
    ]
    return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> tuple[AutocalConfig, ScreenConfig]:
    """Parse the flat key/value format; unknown keys are rejected.

    Keys that are absent keep their defaults, so a partial file is valid.
    """
    autocal: dict = {}
    screen: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        try:
            if key == "window":
                autocal[key] = int(value)
            elif key in _AUTOCAL_KEYS:
                autocal[key] = float(value)
            elif key in ("screen_width", "screen_height"):
                screen[_SCREEN_KEYS[key]] = int(value)
            elif key == "sample_rate_hz":
                screen["sample_rate_hz"] = float(value)
            else:
                raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: invalid value for {key}: {value!r}") from exc
    cfg = AutocalConfig(**autocal)
    scr = ScreenConfig(**screen)
    return validate_config(cfg, scr), scr


def load_config_file(path: str) -> tuple[AutocalConfig, ScreenConfig]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def save_config_file(path: str, cfg: AutocalConfig, screen: ScreenConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_config_text(cfg, screen))
