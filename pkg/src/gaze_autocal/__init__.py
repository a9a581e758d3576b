"""Seamless gaze autocalibration engine and typing simulator."""

from .autocal import Autocalibrator, CalibrationEstimate, CalOutcome, ReadingContext, in_calibration_zone
from .engine import EngineUpdate, GazeTypingEngine, PIPELINE_CONTROL, PIPELINE_EYEO
from .fixation import EventKind, FixationFilter, FixationState, GazeEvent, Phase
from .keyboard import (
    BACKSPACE,
    DwellEngine,
    DwellPhase,
    DwellState,
    KeyActivation,
    KeyboardLayout,
    KeyRegion,
    SPACE,
    TextBuffer,
    apply_activation,
    default_layout,
    hit_test,
    last_char_center,
    load_layout_file,
    parse_layout_text,
    reading_context,
)
from .metrics import ExperimentSummary, SessionMetrics, aggregate, render_report, typing_speed
from .simulator import (
    PROTOCOL_OFFSETS,
    SYSTEM_CONTROL,
    SYSTEM_EYEO,
    ExperimentTable,
    SessionResult,
    SessionSpec,
    SimParams,
    SimUser,
    TrackerModel,
    load_phrases,
    run_experiment,
    run_session,
)
from .stats import TTestResult, paired_t_test, regularized_incomplete_beta, student_t_cdf, welch_t_test
from .types import (
    AutocalConfig,
    ConfigError,
    GazeSample,
    Offset2D,
    ScreenConfig,
    load_config_file,
    save_config_file,
    validate_config,
)

__version__ = "0.1.0"
