import pytest

from gaze_autocal.metrics import (
    ABORTED_SPEED_EXCLUDE,
    METRIC_ABORT,
    METRIC_BACKSPACES,
    METRIC_SPEED,
    aggregate,
    render_report,
    typing_speed,
)
from gaze_autocal.simulator import (
    ExperimentTable,
    SessionResult,
    SessionRow,
    SYSTEM_CONTROL,
    SYSTEM_EYEO,
)
from gaze_autocal.types import Offset2D


def result(typed, duration, aborted=False, backspaces=0):
    return SessionResult(
        typed=typed,
        duration_ms=duration,
        backspaces=backspaces,
        aborted=aborted,
        updates_applied=0,
        event_log=None,
        final_eps=Offset2D(),
        final_perceived_error=Offset2D(),
    )


def test_typing_speed_unit_arithmetic():
    r = result("a" * 20, 60_000)
    assert typing_speed(r, "a" * 20) == 20.0


def test_typing_speed_hello_world():
    r = result("hello world", 30_000)
    assert typing_speed(r, "hello world") == 22.0


def test_typing_speed_aborted_counts_correct_prefix():
    r = result("hellx", 120_000, aborted=True)
    # 4 correct chars over the 2-minute timeout window
    assert typing_speed(r, "hello world") == 2.0


def test_typing_speed_requires_positive_duration():
    with pytest.raises(ValueError):
        typing_speed(result("x", 0), "x")


def row(participant, system, cpm, backspaces=0, aborted=False):
    return SessionRow(
        participant=participant,
        system=system,
        offset=Offset2D(),
        phrase="p",
        chars_per_min=cpm,
        correct_chars=10,
        backspaces=backspaces,
        aborted=aborted,
        duration_ms=10_000,
        updates_applied=0,
    )


def hand_table():
    rows = [
        row(0, SYSTEM_EYEO, 30.0, backspaces=1),
        row(0, SYSTEM_CONTROL, 20.0, backspaces=3),
        row(1, SYSTEM_EYEO, 34.0, backspaces=2),
        row(1, SYSTEM_CONTROL, 24.0, backspaces=2, aborted=True),
    ]
    return ExperimentTable(rows=rows, participants=2, seed=0)


def test_aggregate_matches_hand_computation():
    s = aggregate(hand_table())
    speed = s.metric(METRIC_SPEED)
    assert speed.mean_eyeo == 32.0
    assert speed.mean_control == 22.0
    # SE of [30, 34] = std 2*sqrt(2)... sample std = 2.828..., /sqrt(2) = 2.0
    assert abs(speed.se_eyeo - 2.0) < 1e-12
    back = s.metric(METRIC_BACKSPACES)
    assert back.mean_eyeo == 1.5
    assert back.mean_control == 2.5
    ab = s.metric(METRIC_ABORT)
    assert ab.mean_eyeo == 0.0
    assert ab.mean_control == 0.5


def test_aggregate_identical_systems_p_one():
    rows = []
    for p, cpm in ((0, 30.0), (1, 35.0), (2, 32.0)):
        rows.append(row(p, SYSTEM_EYEO, cpm))
        rows.append(row(p, SYSTEM_CONTROL, cpm))
    table = ExperimentTable(rows=rows, participants=3, seed=0)
    s = aggregate(table)
    for m in s.metrics:
        assert m.test.p_value == 1.0


def test_aggregate_excluding_aborted_speed():
    s = aggregate(hand_table(), aborted_speed=ABORTED_SPEED_EXCLUDE)
    speed = s.metric(METRIC_SPEED)
    assert speed.mean_control == 20.0  # participant 1's aborted session dropped


def test_aggregate_requires_two_participants():
    t = ExperimentTable(rows=[row(0, SYSTEM_EYEO, 30.0), row(0, SYSTEM_CONTROL, 20.0)], participants=1, seed=0)
    with pytest.raises(ValueError):
        aggregate(t)


def test_render_report_shape():
    text = render_report(aggregate(hand_table()))
    assert "typing_speed_cpm" in text
    assert "abort_freq" in text
    assert "significance codes" in text
