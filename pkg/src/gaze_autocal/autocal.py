"""Reading-driven gaze offset estimation.

While the user reads the text they just typed, their gaze is assumed to sit
on the last typed character and is NOT compensated, so the difference
between that character's center and the observed fixation is a direct
measurement of the calibration error.  The estimator keeps a sliding window
of such raw deltas, applies the clipped window mean as the correction, and
leaves the correction untouched for every sample that fails the gate.

Gate (all four must hold, evaluated on RAW coordinates):
  1. raw sample y above the text-box bottom boundary,
  2. at least one character visible in the text box,
  3. the sample belongs to a detected fixation,
  4. fixation centroid within tau of the last typed character's center.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .fixation import GazeEvent
from .types import AutocalConfig, Offset2D


@dataclass(frozen=True)
class ReadingContext:
    """Keyboard-side state the estimator needs: where the text is."""

    last_char_center: tuple[float, float] | None
    n_char: int
    text_box_bottom: float  # y pixel of the text box's lower boundary

    def __post_init__(self) -> None:
        if self.n_char < 0:
            raise ValueError("n_char must be ≥ 0")
        if self.n_char > 0 and self.last_char_center is None:
            raise ValueError("last_char_center required when n_char > 0")


def in_calibration_zone(point: tuple[float, float], ctx: ReadingContext, tau: float) -> bool:
    """True iff point is strictly within tau of the last char and above the text-box bottom."""
    if ctx.n_char <= 0 or ctx.last_char_center is None:
        return False
    if point[1] >= ctx.text_box_bottom:
        return False
    cx, cy = ctx.last_char_center
    return math.hypot(cx - point[0], cy - point[1]) < tau


class CalibrationEstimate:
    """Clipped sliding-window mean over raw calibration deltas.

    The applied correction eps always equals clip(mean(window), -b, +b)
    componentwise right after an update and is held constant between
    updates.  Oldest deltas are evicted once the window is full.
    """

    def __init__(self, window: int, bound: float):
        if window < 1:
            raise ValueError("window must be ≥ 1")
        self.window = window
        self.bound = bound
        self._deltas: deque[tuple[float, float]] = deque(maxlen=window)
        self._sum_dx = 0.0
        self._sum_dy = 0.0
        self.eps = Offset2D(0.0, 0.0)
        self.n_updates = 0

    def reset(self) -> None:
        self._deltas.clear()
        self._sum_dx = 0.0
        self._sum_dy = 0.0
        self.eps = Offset2D(0.0, 0.0)
        self.n_updates = 0

    def push_delta(self, dx: float, dy: float) -> bool:
        """Absorb one raw delta; returns True if eps changed value."""
        if len(self._deltas) == self._deltas.maxlen:
            old_dx, old_dy = self._deltas[0]
            self._sum_dx -= old_dx
            self._sum_dy -= old_dy
        self._deltas.append((dx, dy))
        self._sum_dx += dx
        self._sum_dy += dy
        n = len(self._deltas)
        b = self.bound
        mean_dx = self._sum_dx / n
        mean_dy = self._sum_dy / n
        new_eps = Offset2D(
            -b if mean_dx < -b else b if mean_dx > b else mean_dx,
            -b if mean_dy < -b else b if mean_dy > b else mean_dy,
        )
        changed = new_eps != self.eps
        self.eps = new_eps
        self.n_updates += 1
        return changed

    @property
    def deltas(self) -> list[tuple[float, float]]:
        return list(self._deltas)


@dataclass(frozen=True)
class CalOutcome:
    """Result of processing one sample through the estimator."""

    x: float  # calibrated x = raw x + eps.dx
    y: float  # calibrated y = raw y + eps.dy
    eps: Offset2D
    zone_hit: bool  # the update gate fired (a delta was pushed)
    updated: bool  # eps changed value this sample


class Autocalibrator:
    """Streaming owner of a CalibrationEstimate, gated by ReadingContext."""

    def __init__(self, cfg: AutocalConfig):
        self.cfg = cfg
        self.estimate = CalibrationEstimate(cfg.window, cfg.bound)
        self.enabled = True  # when False the gate never fires; eps stays applied

    def reset(self) -> None:
        self.estimate.reset()

    def process(self, event: GazeEvent, ctx: ReadingContext) -> CalOutcome:
        """Maybe update the estimate from a reading fixation, then calibrate the sample."""
        s = event.sample
        zone_hit = False
        updated = False
        if (
            self.enabled
            and event.kind.is_fixation
            and ctx.n_char > 0
            and s.y < ctx.text_box_bottom
        ):
            px, py = event.centroid if event.centroid is not None else (s.x, s.y)
            cx, cy = ctx.last_char_center
            if math.hypot(cx - px, cy - py) < self.cfg.tau:
                zone_hit = True
                updated = self.estimate.push_delta(cx - px, cy - py)
        eps = self.estimate.eps
        return CalOutcome(s.x + eps.dx, s.y + eps.dy, eps, zone_hit, updated)
