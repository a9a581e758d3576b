"""Per-session efficiency metrics and the per-system comparison report.

Sessions reduce to participant-level means (speed, backspaces, abort
fraction), and the two systems are compared across participants with a
two-sided Welch t-test per metric.
"""
from __future__ import annotations

from dataclasses import dataclass

from .simulator import SYSTEM_CONTROL, SYSTEM_EYEO, ExperimentTable, SessionResult, _matching_prefix_len
from .stats import TTestResult, mean, significance_stars, standard_error, welch_t_test

ABORTED_SPEED_PARTIAL = "partial"  # aborted sessions contribute their partial speed
ABORTED_SPEED_EXCLUDE = "exclude"  # aborted sessions are dropped from the speed metric

METRIC_SPEED = "typing_speed_cpm"
METRIC_BACKSPACES = "backspaces"
METRIC_ABORT = "abort_freq"


@dataclass(frozen=True)
class SessionMetrics:
    chars_per_min: float
    backspaces: int
    aborted: bool


def typing_speed(result: SessionResult, phrase: str) -> float:
    """Characters per minute; aborted sessions count correctly-typed chars
    over the full timeout window."""
    if result.duration_ms <= 0:
        raise ValueError("duration must be positive")
    chars = len(phrase) if not result.aborted else _matching_prefix_len(result.typed, phrase)
    return chars / (result.duration_ms / 60000.0)


def session_metrics(result: SessionResult, phrase: str) -> SessionMetrics:
    return SessionMetrics(typing_speed(result, phrase), result.backspaces, result.aborted)


@dataclass(frozen=True)
class MetricSummary:
    metric: str
    mean_eyeo: float
    se_eyeo: float
    mean_control: float
    se_control: float
    test: TTestResult


@dataclass(frozen=True)
class ExperimentSummary:
    participants: int
    metrics: tuple[MetricSummary, ...]

    def metric(self, name: str) -> MetricSummary:
        for m in self.metrics:
            if m.metric == name:
                return m
        raise KeyError(name)


def _participant_values(table: ExperimentTable, system: str, aborted_speed: str) -> dict[str, list[float]]:
    speeds: list[float] = []
    backspaces: list[float] = []
    aborts: list[float] = []
    for p in range(table.participants):
        rows = [r for r in table.rows if r.participant == p and r.system == system]
        if not rows:
            continue
        speed_rows = rows if aborted_speed == ABORTED_SPEED_PARTIAL else [r for r in rows if not r.aborted]
        if speed_rows:
            speeds.append(mean([r.chars_per_min for r in speed_rows]))
        backspaces.append(mean([float(r.backspaces) for r in rows]))
        aborts.append(mean([1.0 if r.aborted else 0.0 for r in rows]))
    return {METRIC_SPEED: speeds, METRIC_BACKSPACES: backspaces, METRIC_ABORT: aborts}


def aggregate(table: ExperimentTable, aborted_speed: str = ABORTED_SPEED_PARTIAL) -> ExperimentSummary:
    """Participant-level means per system plus a Welch test per metric."""
    if aborted_speed not in (ABORTED_SPEED_PARTIAL, ABORTED_SPEED_EXCLUDE):
        raise ValueError(f"unknown aborted-speed policy {aborted_speed!r}")
    if table.participants < 2:
        raise ValueError("≥ 2 participants per system required")
    eyeo = _participant_values(table, SYSTEM_EYEO, aborted_speed)
    control = _participant_values(table, SYSTEM_CONTROL, aborted_speed)
    summaries = []
    for name in (METRIC_SPEED, METRIC_BACKSPACES, METRIC_ABORT):
        a, b = eyeo[name], control[name]
        try:
            test = welch_t_test(a, b)
        except ValueError:
            # degenerate but legitimate outcome (e.g. zero aborts everywhere)
            identical = mean(a) == mean(b) if a and b else True
            test = TTestResult(
                t_stat=0.0,
                dof=float(len(a) + len(b) - 2),
                p_value=1.0 if identical else float("nan"),
                mean_a=mean(a) if a else float("nan"),
                mean_b=mean(b) if b else float("nan"),
                se_a=standard_error(a) if len(a) > 1 else 0.0,
                se_b=standard_error(b) if len(b) > 1 else 0.0,
            )
        summaries.append(
            MetricSummary(
                metric=name,
                mean_eyeo=test.mean_a,
                se_eyeo=test.se_a,
                mean_control=test.mean_b,
                se_control=test.se_b,
                test=test,
            )
        )
    return ExperimentSummary(participants=table.participants, metrics=tuple(summaries))


def render_report(summary: ExperimentSummary) -> str:
    lines = [
        f"gaze typing experiment: {summary.participants} simulated participants, "
        "both systems x 5 offsets each",
        "",
        f"{'metric':<18} {'eyeo mean (se)':>20} {'control mean (se)':>20} "
        f"{'t':>8} {'dof':>7} {'p':>10} sig",
    ]
    for m in summary.metrics:
        t = m.test
        lines.append(
            f"{m.metric:<18} {m.mean_eyeo:>12.3f} ({m.se_eyeo:.3f}) "
            f"{m.mean_control:>12.3f} ({m.se_control:.3f}) "
            f"{t.t_stat:>8.3f} {t.dof:>7.2f} {t.p_value:>10.4g} {significance_stars(t.p_value)}"
        )
    lines.append("")
    lines.append("significance codes: * < .05, ** < .01, *** < .001")
    return "\n".join(lines) + "\n"


def report_csv_lines(summary: ExperimentSummary) -> list[str]:
    lines = ["metric,mean_eyeo,se_eyeo,mean_control,se_control,t,dof,p,sig"]
    for m in summary.metrics:
        t = m.test
        lines.append(
            f"{m.metric},{m.mean_eyeo:.6f},{m.se_eyeo:.6f},{m.mean_control:.6f},"
            f"{m.se_control:.6f},{t.t_stat:.6f},{t.dof:.6f},{t.p_value:.6g},"
            f"{significance_stars(t.p_value)}"
        )
    return lines
