"""Full gaze-typing pipeline: fixation filter -> autocalibrator -> dwell keyboard.

One engine instance owns one gaze stream.  The "eyeo" pipeline runs the
filter and estimator and drives the keyboard with calibrated coordinates;
the "control" pipeline is a plain passthrough (cursor = raw input) with no
estimation at all.
"""
from __future__ import annotations

from dataclasses import dataclass

from .autocal import Autocalibrator, ReadingContext
from .fixation import FixationFilter
from .keyboard import DwellEngine, DwellState, KeyboardLayout, TextBuffer, reading_context
from .types import AutocalConfig, GazeSample, Offset2D, ScreenConfig

PIPELINE_EYEO = "eyeo"
PIPELINE_CONTROL = "control"


@dataclass(frozen=True)
class EngineUpdate:
    """Everything that happened while processing one sample."""

    t: int
    raw_x: float
    raw_y: float
    cal_x: float
    cal_y: float
    eps: Offset2D
    zone_hit: bool
    updated: bool
    dwell: DwellState
    activation: str | None  # key label when a key fired on this sample
    text: str


class GazeTypingEngine:
    def __init__(
        self,
        cfg: AutocalConfig,
        screen: ScreenConfig,
        layout: KeyboardLayout,
        pipeline: str = PIPELINE_EYEO,
    ):
        if pipeline not in (PIPELINE_EYEO, PIPELINE_CONTROL):
            raise ValueError(f"unknown pipeline {pipeline!r}")
        self.cfg = cfg
        self.screen = screen
        self.layout = layout
        self.pipeline = pipeline
        self.filter = FixationFilter(cfg, screen.sample_rate_hz)
        self.autocal = Autocalibrator(cfg)
        self.dwell = DwellEngine(layout)
        self.buffer = TextBuffer()

    @property
    def context(self) -> ReadingContext:
        return reading_context(self.buffer, self.layout)

    def set_autocal_enabled(self, enabled: bool) -> None:
        """Freeze/unfreeze updates; the current correction stays applied."""
        self.autocal.enabled = enabled

    def reset_calibration(self) -> None:
        self.autocal.reset()

    def feed(self, t: int, x: float, y: float) -> EngineUpdate:
        """Process one raw gaze sample; timestamps must strictly increase."""
        if self.pipeline == PIPELINE_CONTROL:
            cal_x, cal_y = x, y
            eps = Offset2D(0.0, 0.0)
            zone_hit = updated = False
        else:
            event = self.filter.push(GazeSample(t, x, y))
            outcome = self.autocal.process(event, self.context)
            cal_x, cal_y = outcome.x, outcome.y
            eps = outcome.eps
            zone_hit, updated = outcome.zone_hit, outcome.updated
        activation = self.dwell.tick((cal_x, cal_y), t)
        label: str | None = None
        if activation is not None:
            label = activation.key.label
            self.buffer.apply_key(label)
        return EngineUpdate(
            t=t,
            raw_x=x,
            raw_y=y,
            cal_x=cal_x,
            cal_y=cal_y,
            eps=eps,
            zone_hit=zone_hit,
            updated=updated,
            dwell=self.dwell.state,
            activation=label,
            text=self.buffer.content,
        )
