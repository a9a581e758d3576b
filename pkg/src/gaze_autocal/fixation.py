"""Velocity + duration based fixation/saccade classification of a gaze stream.

Classification rules, applied per incoming sample:

* inter-sample velocity v = dist(s, previous) / (s.t - previous.t) in px/ms;
  v > saccade_velocity_threshold makes the sample a saccade and resets the
  current candidate (the saccade sample itself seeds the next candidate at
  its landing position).
* samples at or below the threshold accumulate into a candidate; once the
  candidate has lasted fixation_min_duration_ms the candidate becomes a
  fixation (FIXATION_STARTED, then FIXATION_ONGOING per sample).
* a dropped-frame gap (dt > 3 nominal sample periods) also resets the
  candidate without counting as a saccade.

The reported centroid is always the running arithmetic mean of every sample
absorbed into the current candidate/fixation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .types import AutocalConfig, GazeSample


class EventKind(enum.Enum):
    SACCADE_SAMPLE = "SACCADE_SAMPLE"
    CANDIDATE_SAMPLE = "CANDIDATE_SAMPLE"  # accumulating, duration rule not met yet
    FIXATION_STARTED = "FIXATION_STARTED"
    FIXATION_ONGOING = "FIXATION_ONGOING"
    FIXATION_ENDED = "FIXATION_ENDED"

    @property
    def is_fixation(self) -> bool:
        return self in (EventKind.FIXATION_STARTED, EventKind.FIXATION_ONGOING)


@dataclass(frozen=True)
class GazeEvent:
    kind: EventKind
    sample: GazeSample
    centroid: tuple[float, float] | None = None  # present for fixation/candidate kinds
    velocity: float = 0.0  # px/ms, 0 for the first sample of a stream


class Phase(enum.Enum):
    IDLE = "IDLE"
    CANDIDATE = "CANDIDATE"
    FIXATING = "FIXATING"


@dataclass(frozen=True)
class FixationState:
    """Immutable snapshot of the filter state (for telemetry/tests)."""

    phase: Phase
    anchor: tuple[float, float] | None  # running centroid of the current candidate
    start_t: int | None
    last_sample: GazeSample | None
    n_absorbed: int


class FixationFilter:
    """Single-consumer streaming classifier; one instance per gaze stream."""

    def __init__(self, cfg: AutocalConfig, sample_rate_hz: float = 60.0):
        self.cfg = cfg
        self.gap_ms = 3.0 * (1000.0 / sample_rate_hz)
        self.reset()

    def reset(self) -> None:
        self._phase = Phase.IDLE
        self._sum_x = 0.0
        self._sum_y = 0.0
        self._n = 0
        self._start_t: int | None = None
        self._last: GazeSample | None = None

    @property
    def state(self) -> FixationState:
        anchor = (self._sum_x / self._n, self._sum_y / self._n) if self._n else None
        return FixationState(self._phase, anchor, self._start_t, self._last, self._n)

    def _begin_candidate(self, s: GazeSample) -> None:
        self._phase = Phase.CANDIDATE
        self._sum_x = s.x
        self._sum_y = s.y
        self._n = 1
        self._start_t = s.t

    def _centroid(self) -> tuple[float, float]:
        return (self._sum_x / self._n, self._sum_y / self._n)

    def push(self, s: GazeSample) -> GazeEvent:
        """Classify one sample; timestamps must strictly increase."""
        last = self._last
        if last is None:
            self._begin_candidate(s)
            self._last = s
            return GazeEvent(EventKind.CANDIDATE_SAMPLE, s, self._centroid(), 0.0)

        if s.t <= last.t:
            raise ValueError(f"non-monotonic timestamp: {s.t} after {last.t}")
        dt = s.t - last.t
        v = math.hypot(s.x - last.x, s.y - last.y) / dt
        self._last = s

        if v > self.cfg.saccade_velocity_threshold:
            was_fixating = self._phase is Phase.FIXATING
            ended_centroid = self._centroid() if was_fixating else None
            self._phase = Phase.IDLE
            self._begin_candidate(s)  # the landing sample anchors the next candidate
            if was_fixating:
                return GazeEvent(EventKind.FIXATION_ENDED, s, ended_centroid, v)
            return GazeEvent(EventKind.SACCADE_SAMPLE, s, None, v)

        if dt > self.gap_ms:
            # dropout: don't bridge unrelated fixations across the gap
            was_fixating = self._phase is Phase.FIXATING
            ended_centroid = self._centroid() if was_fixating else None
            self._begin_candidate(s)
            if was_fixating:
                return GazeEvent(EventKind.FIXATION_ENDED, s, ended_centroid, v)
            return GazeEvent(EventKind.CANDIDATE_SAMPLE, s, self._centroid(), v)

        self._sum_x += s.x
        self._sum_y += s.y
        self._n += 1
        elapsed = s.t - self._start_t
        if self._phase is Phase.FIXATING:
            return GazeEvent(EventKind.FIXATION_ONGOING, s, self._centroid(), v)
        if elapsed >= self.cfg.fixation_min_duration_ms:
            self._phase = Phase.FIXATING
            return GazeEvent(EventKind.FIXATION_STARTED, s, self._centroid(), v)
        return GazeEvent(EventKind.CANDIDATE_SAMPLE, s, self._centroid(), v)
