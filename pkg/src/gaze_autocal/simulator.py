"""Deterministic closed-loop typing simulation.

Models the two behaviors the autocalibration method relies on:

* while TYPING the simulated user notices the cursor-vs-gaze discrepancy
  (imperfectly, with observation noise and a reaction lag) and compensates
  by aiming away from the intended key; holding a compensation offset also
  makes the aim noisier (compensation_wobble), which is what slows typing
  under persistent miscalibration;
* while READING the user looks straight at the last typed character with
  no compensation at all, which is the signal the estimator consumes.

Offset convention: the injected offset is the calibration error to be
recovered, i.e. reported gaze = true gaze - offset + noise, so the
estimator's correction converges to +offset.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

from .engine import PIPELINE_CONTROL, PIPELINE_EYEO, GazeTypingEngine
from .keyboard import BACKSPACE, KeyboardLayout, default_layout
from .types import AutocalConfig, Offset2D, ScreenConfig

SYSTEM_EYEO = "eyeo"
SYSTEM_CONTROL = "control"

MODE_TYPING = "TYPING"
MODE_READING = "READING"

# the five uniform-screen miscalibrations used by the counterbalanced protocol
PROTOCOL_OFFSETS: tuple[Offset2D, ...] = (
    Offset2D(0.0, 0.0),
    Offset2D(75.0, 0.0),
    Offset2D(-75.0, 0.0),
    Offset2D(0.0, 75.0),
    Offset2D(0.0, -75.0),
)

SESSIONS_PER_SYSTEM = len(PROTOCOL_OFFSETS)
SEED_PARTICIPANT_STRIDE = 10007  # session seed = base + participant*stride + session index


class _Ar1Noise2D:
    """Gaussian noise with marginal std `std` and lag-1 correlation `corr`.

    Trackers smooth their output, so measurement noise is strongly
    autocorrelated sample-to-sample; corr=0 degenerates to white noise.
    """

    def __init__(self, std: float, corr: float, rng: random.Random):
        if not 0.0 <= corr < 1.0:
            raise ValueError("noise correlation must be in [0, 1)")
        self.std = std
        self.corr = corr
        self._rng = rng
        self._innov = std * math.sqrt(1.0 - corr * corr)
        self._x = rng.gauss(0.0, std) if std > 0 else 0.0
        self._y = rng.gauss(0.0, std) if std > 0 else 0.0

    def sample(self) -> tuple[float, float]:
        if self.std <= 0:
            return (0.0, 0.0)
        g = self._rng.gauss
        self._x = self.corr * self._x + g(0.0, self._innov)
        self._y = self.corr * self._y + g(0.0, self._innov)
        return (self._x, self._y)


class TrackerModel:
    """Miscalibrated 60 Hz tracker: reported = true - offset + noise."""

    def __init__(self, true_offset: Offset2D, noise_std: float, rng: random.Random,
                 noise_corr: float = 0.9):
        self.true_offset = true_offset
        self.noise_std = noise_std
        self._noise = _Ar1Noise2D(noise_std, noise_corr, rng)

    def report(self, true_x: float, true_y: float) -> tuple[float, float]:
        nx, ny = self._noise.sample()
        return (true_x - self.true_offset.dx + nx, true_y - self.true_offset.dy + ny)


@dataclass(frozen=True)
class SimParams:
    """Simulated-user and tracker parameters."""

    noise_std: float = 3.0  # tracker noise, px (marginal std)
    aim_jitter_std: float = 3.0  # fixational aim noise, px (marginal std)
    noise_corr: float = 0.9  # lag-1 autocorrelation of tracker noise and aim jitter
    compensation_gain: float = 0.3  # perceived-error step per observation
    p_read: float = 0.4  # chance of reading after an activation
    reaction_lag_ms: float = 250.0  # time between discrepancy observations
    read_duration_ms: float = 400.0
    observation_noise_std: float = 8.0  # px, noise on each discrepancy observation
    compensation_wobble: float = 0.3  # extra aim std per px of held compensation


@dataclass(frozen=True)
class SessionSpec:
    phrase: str
    injected_offset: Offset2D
    system: str  # SYSTEM_EYEO or SYSTEM_CONTROL
    timeout_ms: int = 120_000
    seed: int = 0


class TelemetryRow(NamedTuple):
    t_ms: int
    raw_x: float
    raw_y: float
    cal_x: float
    cal_y: float
    eps_x: float
    eps_y: float
    zone_hit: bool
    updated: bool
    mode: str
    activation: str
    true_x: float
    true_y: float
    intent_x: float
    intent_y: float


TELEMETRY_CSV_COLUMNS = (
    "t_ms,raw_x,raw_y,cal_x,cal_y,eps_x,eps_y,zone_hit,updated,mode,activation"
)


def telemetry_csv_line(row: TelemetryRow) -> str:
    return (
        f"{row.t_ms},{row.raw_x:.3f},{row.raw_y:.3f},{row.cal_x:.3f},{row.cal_y:.3f},"
        f"{row.eps_x:.3f},{row.eps_y:.3f},{int(row.zone_hit)},{int(row.updated)},"
        f"{row.mode},{row.activation}"
    )


@dataclass
class SessionResult:
    typed: str
    duration_ms: int
    backspaces: int
    aborted: bool
    updates_applied: int
    event_log: list[TelemetryRow] | None
    final_eps: Offset2D
    final_perceived_error: Offset2D


class SimUser:
    """First-order compensating typist with perfect proofreading."""

    def __init__(self, phrase: str, layout: KeyboardLayout, params: SimParams, rng: random.Random):
        self.phrase = phrase
        self.layout = layout
        self.params = params
        self._rng = rng
        self.mode = MODE_TYPING
        self.perceived_dx = 0.0
        self.perceived_dy = 0.0
        self._read_until = -1.0
        self._last_obs_t = -1e18
        self._prev_display: tuple[float, float] | None = None
        self._prev_true: tuple[float, float] | None = None
        self._jitter = _Ar1Noise2D(params.aim_jitter_std, params.noise_corr, rng)

    def _intent(self, typed: str, text_box_center: tuple[float, float] | None) -> tuple[float, float]:
        if self.mode == MODE_READING and text_box_center is not None:
            return text_box_center
        if self.phrase.startswith(typed) and len(typed) < len(self.phrase):
            ch = self.phrase[len(typed)]
            label = "SPACE" if ch == " " else ch
        else:
            label = BACKSPACE
        return self.layout.key_by_label(label).center

    def step(
        self,
        t: int,
        typed: str,
        last_char: tuple[float, float] | None,
        display_cursor: tuple[float, float] | None,
    ) -> tuple[float, float, float, float]:
        """Advance one tick; returns (true_x, true_y, intent_x, intent_y)."""
        p = self.params
        rng = self._rng
        if self.mode == MODE_READING and (t >= self._read_until or last_char is None):
            self.mode = MODE_TYPING

        if self.mode == MODE_TYPING:
            # delayed, noisy observation of how far the cursor sits from the gaze
            if (
                display_cursor is not None
                and self._prev_display is not None
                and t - self._last_obs_t >= p.reaction_lag_ms
            ):
                disc_x = self._prev_display[0] - self._prev_true[0]
                disc_y = self._prev_display[1] - self._prev_true[1]
                if p.observation_noise_std > 0:
                    disc_x += rng.gauss(0.0, p.observation_noise_std)
                    disc_y += rng.gauss(0.0, p.observation_noise_std)
                self.perceived_dx += p.compensation_gain * (disc_x - self.perceived_dx)
                self.perceived_dy += p.compensation_gain * (disc_y - self.perceived_dy)
                self._last_obs_t = t

        ix, iy = self._intent(typed, last_char)
        if self.mode == MODE_READING:
            tx, ty = ix, iy  # no compensation while consuming output
        else:
            tx, ty = ix - self.perceived_dx, iy - self.perceived_dy
            wobble = p.compensation_wobble * math.hypot(self.perceived_dx, self.perceived_dy)
            if wobble > 0:
                tx += rng.gauss(0.0, wobble)
                ty += rng.gauss(0.0, wobble)
        jx, jy = self._jitter.sample()
        tx += jx
        ty += jy
        self._prev_true = (tx, ty)
        return tx, ty, ix, iy

    def after_step(self, display_cursor: tuple[float, float]) -> None:
        self._prev_display = display_cursor

    def notify_activation(self, t: int, n_char: int) -> None:
        if n_char > 0 and self._rng.random() < self.params.p_read:
            self.mode = MODE_READING
            self._read_until = t + self.params.read_duration_ms


def run_session(
    spec: SessionSpec,
    cfg: AutocalConfig | None = None,
    layout: KeyboardLayout | None = None,
    screen: ScreenConfig | None = None,
    params: SimParams | None = None,
    collect_log: bool = True,
) -> SessionResult:
    """Run one phrase-typing session to completion or timeout."""
    if not spec.phrase:
        raise ValueError("phrase must be non-empty")
    cfg = cfg or AutocalConfig()
    screen = screen or ScreenConfig()
    layout = layout or default_layout(screen.width, screen.height)
    params = params or SimParams()
    if spec.system not in (SYSTEM_EYEO, SYSTEM_CONTROL):
        raise ValueError(f"unknown system {spec.system!r}")

    rng = random.Random(spec.seed)
    tracker = TrackerModel(spec.injected_offset, params.noise_std, rng, params.noise_corr)
    pipeline = PIPELINE_EYEO if spec.system == SYSTEM_EYEO else PIPELINE_CONTROL
    engine = GazeTypingEngine(cfg, screen, layout, pipeline)
    user = SimUser(spec.phrase, layout, params, rng)

    from .keyboard import last_char_center

    period = 1000.0 / screen.sample_rate_hz
    log: list[TelemetryRow] | None = [] if collect_log else None
    display: tuple[float, float] | None = None
    i = 0
    duration = spec.timeout_ms
    aborted = True
    while True:
        t = round(i * period)
        if t >= spec.timeout_ms:
            break
        lc = last_char_center(engine.buffer, layout)
        tx, ty, ix, iy = user.step(t, engine.buffer.content, lc, display)
        mode = user.mode  # mode this sample's gaze was generated under
        raw_x, raw_y = tracker.report(tx, ty)
        upd = engine.feed(t, raw_x, raw_y)
        display = (upd.cal_x, upd.cal_y)
        user.after_step(display)
        if upd.activation is not None:
            user.notify_activation(t, engine.buffer.n_char)
        if log is not None:
            log.append(
                TelemetryRow(
                    t, raw_x, raw_y, upd.cal_x, upd.cal_y, upd.eps.dx, upd.eps.dy,
                    upd.zone_hit, upd.updated, mode, upd.activation or "",
                    tx, ty, ix, iy,
                )
            )
        if engine.buffer.content == spec.phrase:
            duration = t
            aborted = False
            break
        i += 1

    return SessionResult(
        typed=engine.buffer.content,
        duration_ms=duration,
        backspaces=engine.buffer.backspace_count,
        aborted=aborted,
        updates_applied=engine.autocal.estimate.n_updates,
        event_log=log,
        final_eps=engine.autocal.estimate.eps,
        final_perceived_error=Offset2D(user.perceived_dx, user.perceived_dy),
    )


def load_phrases(source: str | None = None, layout: KeyboardLayout | None = None) -> list[str]:
    """Load the phrase corpus (one phrase per line) and validate typeability."""
    if source is None:
        text = resources.files("gaze_autocal.data").joinpath("phrases.txt").read_text("utf-8")
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    layout = layout or default_layout()
    typeable = layout.typeable_chars()
    phrases = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        phrase = line.strip()
        if not phrase:
            continue
        for ch in phrase:
            if ch not in typeable:
                raise ValueError(f"phrase {phrase!r} (line {lineno}) has untypeable character {ch!r}")
        phrases.append(phrase)
    return phrases


@dataclass(frozen=True)
class SessionRow:
    participant: int
    system: str
    offset: Offset2D
    phrase: str
    chars_per_min: float
    correct_chars: int
    backspaces: int
    aborted: bool
    duration_ms: int
    updates_applied: int


@dataclass
class ExperimentTable:
    rows: list[SessionRow]
    participants: int
    seed: int


def _matching_prefix_len(typed: str, phrase: str) -> int:
    n = 0
    for a, b in zip(typed, phrase):
        if a != b:
            break
        n += 1
    return n


def session_speed_cpm(correct_chars: int, duration_ms: int) -> float:
    if duration_ms <= 0:
        raise ValueError("duration must be positive")
    return correct_chars / (duration_ms / 60000.0)


def run_experiment(
    participants: int,
    seed: int = 0,
    cfg: AutocalConfig | None = None,
    layout: KeyboardLayout | None = None,
    screen: ScreenConfig | None = None,
    params: SimParams | None = None,
    phrases: list[str] | None = None,
    timeout_ms: int = 120_000,
) -> ExperimentTable:
    """Counterbalanced within-subjects protocol: every participant runs both
    systems over the five protocol offsets, phrases unique across the whole
    experiment, offset order rotated per participant (Latin square)."""
    if participants < 2:
        raise ValueError("≥ 2 participants required for statistics")
    layout = layout or default_layout((screen or ScreenConfig()).width, (screen or ScreenConfig()).height)
    corpus = phrases if phrases is not None else load_phrases(layout=layout)
    needed = participants * 2 * SESSIONS_PER_SYSTEM
    if len(corpus) < needed:
        raise ValueError(f"corpus exhausted: need {needed} unique phrases, have {len(corpus)}")
    order = list(range(len(corpus)))
    random.Random(seed).shuffle(order)

    rows: list[SessionRow] = []
    systems = (SYSTEM_EYEO, SYSTEM_CONTROL)
    for p in range(participants):
        rotation = p % SESSIONS_PER_SYSTEM
        offsets = PROTOCOL_OFFSETS[rotation:] + PROTOCOL_OFFSETS[:rotation]
        # execution order of the two systems alternates per participant, but
        # seeds and phrases are keyed by (system, slot) so order cannot matter
        exec_order = systems if p % 2 == 0 else systems[::-1]
        for system in exec_order:
            sys_id = systems.index(system)
            for slot, offset in enumerate(offsets):
                session_index = sys_id * SESSIONS_PER_SYSTEM + slot
                phrase = corpus[order[p * 2 * SESSIONS_PER_SYSTEM + session_index]]
                spec = SessionSpec(
                    phrase=phrase,
                    injected_offset=offset,
                    system=system,
                    timeout_ms=timeout_ms,
                    seed=seed + p * SEED_PARTICIPANT_STRIDE + session_index,
                )
                res = run_session(spec, cfg, layout, screen, params, collect_log=False)
                correct = len(phrase) if not res.aborted else _matching_prefix_len(res.typed, phrase)
                rows.append(
                    SessionRow(
                        participant=p,
                        system=system,
                        offset=offset,
                        phrase=phrase,
                        chars_per_min=session_speed_cpm(correct, res.duration_ms),
                        correct_chars=correct,
                        backspaces=res.backspaces,
                        aborted=res.aborted,
                        duration_ms=res.duration_ms,
                        updates_applied=res.updates_applied,
                    )
                )
    rows.sort(key=lambda r: (r.participant, r.system, r.offset.dx, r.offset.dy))
    return ExperimentTable(rows=rows, participants=participants, seed=seed)


EXPERIMENT_CSV_HEADER = (
    "participant,system,offset_dx,offset_dy,phrase,chars_per_min,backspaces,"
    "aborted,duration_ms,updates_applied"
)


def experiment_csv_lines(table: ExperimentTable) -> list[str]:
    lines = [EXPERIMENT_CSV_HEADER]
    for r in table.rows:
        lines.append(
            f"{r.participant},{r.system},{r.offset.dx:g},{r.offset.dy:g},{r.phrase},"
            f"{r.chars_per_min:.6f},{r.backspaces},{int(r.aborted)},{r.duration_ms},"
            f"{r.updates_applied}"
        )
    return lines
