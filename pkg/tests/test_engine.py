import pytest

from gaze_autocal.engine import PIPELINE_CONTROL, GazeTypingEngine
from gaze_autocal.keyboard import default_layout
from gaze_autocal.types import AutocalConfig, ScreenConfig

CFG = AutocalConfig()
SCREEN = ScreenConfig()
LAYOUT = default_layout()


def test_unknown_pipeline_rejected():
    with pytest.raises(ValueError, match="pipeline"):
        GazeTypingEngine(CFG, SCREEN, LAYOUT, pipeline="quantum")


def test_control_pipeline_is_identity_and_types():
    eng = GazeTypingEngine(CFG, SCREEN, LAYOUT, pipeline=PIPELINE_CONTROL)
    h = LAYOUT.key_by_label("h")
    activations = []
    for i in range(31):
        t = round(i * 1000 / 60)
        upd = eng.feed(t, h.center[0], h.center[1])
        assert (upd.cal_x, upd.cal_y) == (h.center[0], h.center[1])
        assert not upd.zone_hit and not upd.updated
        if upd.activation:
            activations.append((t, upd.activation))
    assert activations == [(450, "h")]
    assert eng.buffer.content == "h"


def test_eyeo_pipeline_rejects_non_monotonic_time():
    eng = GazeTypingEngine(CFG, SCREEN, LAYOUT)
    eng.feed(0, 100.0, 300.0)
    with pytest.raises(ValueError, match="non-monotonic"):
        eng.feed(0, 101.0, 300.0)


def test_typing_then_reading_calibrates_through_engine():
    eng = GazeTypingEngine(CFG, SCREEN, LAYOUT)
    h = LAYOUT.key_by_label("h")
    offset = (75.0, 0.0)
    t = 0
    # miscalibrated typing: raw sits 75 left of where the user looks
    for i in range(31):
        t = round(i * 1000 / 60)
        eng.feed(t, h.center[0], h.center[1])
    assert eng.buffer.content == "h"
    # reading the typed char: raw = char center - offset
    ctx = eng.context
    cx, cy = ctx.last_char_center
    updates = 0
    for _ in range(30):
        t += 17
        upd = eng.feed(t, cx - offset[0], cy - offset[1])
        updates += upd.zone_hit
    assert updates > 0
    eps = eng.autocal.estimate.eps
    assert abs(eps.dx - offset[0]) < 1e-6
    assert abs(eps.dy - offset[1]) < 1e-6
    # frozen after toggle-off
    eng.set_autocal_enabled(False)
    before = eng.autocal.estimate.n_updates
    for _ in range(10):
        t += 17
        eng.feed(t, cx - offset[0], cy - offset[1])
    assert eng.autocal.estimate.n_updates == before
    # reset clears
    eng.reset_calibration()
    assert eng.autocal.estimate.eps.dx == 0.0
