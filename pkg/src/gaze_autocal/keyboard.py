"""Dwell-based visual keyboard: geometry, activation state machine, text buffer.

Activation timing: gaze must stay on a key for ARM_MS (50 ms) to start the
dwell timer, then a further DWELL_MS (400 ms) to activate, so one
activation needs 450 ms of continuous on-key gaze.  After activation the
key flashes for FLASH_MS (200 ms) during which dwell input is ignored;
holding past the flash re-arms, which is how double letters are typed.

Key rectangles use half-open containment [x, x+w) × [y, y+h) so every
pixel belongs to at most one key.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

ARM_MS = 50.0
DWELL_MS = 400.0
FLASH_MS = 200.0

SPACE = "SPACE"
BACKSPACE = "BACKSPACE"


@dataclass(frozen=True)
class KeyRegion:
    label: str  # single letter, SPACE, or BACKSPACE
    x: float
    y: float
    w: float
    h: float

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def contains(self, px: float, py: float) -> bool:
        return self.x <= px < self.x + self.w and self.y <= py < self.y + self.h


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float


@dataclass(frozen=True)
class KeyboardLayout:
    keys: tuple[KeyRegion, ...]
    text_box: Rect
    char_advance: float  # x pixels per typed character in the text box

    def __post_init__(self) -> None:
        if self.char_advance <= 0:
            raise ValueError("char_advance must be positive")
        bottom = self.text_box_bottom
        for k in self.keys:
            if k.y < bottom:
                raise ValueError(f"key {k.label!r} overlaps the text box region")
        ks = self.keys
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                a, b = ks[i], ks[j]
                if a.x < b.x + b.w and b.x < a.x + a.w and a.y < b.y + b.h and b.y < a.y + a.h:
                    raise ValueError(f"keys {a.label!r} and {b.label!r} overlap")

    @property
    def text_box_bottom(self) -> float:
        return self.text_box.y + self.text_box.h

    def key_by_label(self, label: str) -> KeyRegion:
        for k in self.keys:
            if k.label == label:
                return k
        raise KeyError(label)

    def typeable_chars(self) -> set[str]:
        chars = {k.label for k in self.keys if len(k.label) == 1}
        if any(k.label == SPACE for k in self.keys):
            chars.add(" ")
        return chars


def hit_test(layout: KeyboardLayout, point: tuple[float, float]) -> KeyRegion | None:
    px, py = point
    for k in layout.keys:
        if k.contains(px, py):
            return k
    return None


def default_layout(screen_width: int = 1920, screen_height: int = 1080) -> KeyboardLayout:
    """QWERTY grid: 3 letter rows + space/backspace row, 120x120 px keys,
    10 px gutters, text box across the top 200 px of the screen."""
    key, gutter = 120.0, 10.0
    pitch = key + gutter
    rows = ["qwertyuiop", "asdfghjkl", "zxcvbnm"]
    text_box_h = 200.0
    row_y0 = 280.0
    keys: list[KeyRegion] = []
    for r, letters in enumerate(rows):
        row_w = len(letters) * key + (len(letters) - 1) * gutter
        x0 = (screen_width - row_w) / 2.0
        for i, ch in enumerate(letters):
            keys.append(KeyRegion(ch, x0 + i * pitch, row_y0 + r * pitch, key, key))
    bottom_y = row_y0 + 3 * pitch
    keys.append(KeyRegion(SPACE, 660.0, bottom_y, 600.0, key))
    keys.append(KeyRegion(BACKSPACE, 660.0 + 600.0 + gutter, bottom_y, 240.0, key))
    return KeyboardLayout(
        keys=tuple(keys),
        text_box=Rect(0.0, 0.0, float(screen_width), text_box_h),
        char_advance=24.0,
    )


# Layout file: flat text, one item per line.
#   textbox <x> <y> <w> <h>
#   char_advance <px>
#   key <label> <x> <y> <w> <h>
def format_layout_text(layout: KeyboardLayout) -> str:
    lines = ["# gaze keyboard layout: pixel rects, origin top-left, y down"]
    tb = layout.text_box
    lines.append(f"textbox {tb.x:g} {tb.y:g} {tb.w:g} {tb.h:g}")
    lines.append(f"char_advance {layout.char_advance:g}")
    for k in layout.keys:
        lines.append(f"key {k.label} {k.x:g} {k.y:g} {k.w:g} {k.h:g}")
    return "\n".join(lines) + "\n"


def parse_layout_text(text: str) -> KeyboardLayout:
    keys: list[KeyRegion] = []
    text_box: Rect | None = None
    char_advance: float | None = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "textbox" and len(parts) == 5:
                text_box = Rect(*(float(p) for p in parts[1:]))
            elif parts[0] == "char_advance" and len(parts) == 2:
                char_advance = float(parts[1])
            elif parts[0] == "key" and len(parts) == 6:
                keys.append(KeyRegion(parts[1], *(float(p) for p in parts[2:])))
            else:
                raise ValueError("unrecognized layout directive")
        except ValueError as exc:
            raise ValueError(f"layout line {lineno}: {raw_line!r}: {exc}") from exc
    if text_box is None or char_advance is None or not keys:
        raise ValueError("layout file must define textbox, char_advance, and at least one key")
    return KeyboardLayout(tuple(keys), text_box, char_advance)


def load_layout_file(path: str) -> KeyboardLayout:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_layout_text(fh.read())


class TextBuffer:
    """Typed text plus backspace accounting."""

    def __init__(self) -> None:
        self.content = ""
        self.backspace_count = 0

    @property
    def n_char(self) -> int:
        return len(self.content)

    def apply_key(self, label: str) -> None:
        if label == BACKSPACE:
            self.content = self.content[:-1]  # no-op on empty, still counted
            self.backspace_count += 1
        elif label == SPACE:
            self.content += " "
        elif len(label) == 1:
            self.content += label
        else:
            raise ValueError(f"unknown key label {label!r}")


def apply_activation(buf: TextBuffer, key: KeyRegion) -> TextBuffer:
    buf.apply_key(key.label)
    return buf


def last_char_center(buf: TextBuffer, layout: KeyboardLayout) -> tuple[float, float] | None:
    """Center of the last typed character in the text box, None when empty."""
    if buf.n_char == 0:
        return None
    tb = layout.text_box
    x = tb.x + (buf.n_char - 0.5) * layout.char_advance
    return (x, tb.y + tb.h / 2.0)


def reading_context(buf: TextBuffer, layout: KeyboardLayout):
    from .autocal import ReadingContext

    return ReadingContext(last_char_center(buf, layout), buf.n_char, layout.text_box_bottom)


class DwellPhase(enum.Enum):
    IDLE = "IDLE"
    ARMING = "ARMING"
    DWELLING = "DWELLING"
    ACTIVATED_FLASH = "ACTIVATED_FLASH"


@dataclass(frozen=True)
class DwellState:
    phase: DwellPhase
    target_key: KeyRegion | None
    phase_start_t: float | None
    progress: float  # dwell completion in [0, 1]


@dataclass(frozen=True)
class KeyActivation:
    key: KeyRegion
    t: int


@dataclass
class DwellEngine:
    """Advances the per-key dwell state machine from gaze ticks."""

    layout: KeyboardLayout
    arm_ms: float = ARM_MS
    dwell_ms: float = DWELL_MS
    flash_ms: float = FLASH_MS
    _phase: DwellPhase = DwellPhase.IDLE
    _key: KeyRegion | None = None
    _on_key_since: float | None = None  # t when gaze landed on the current key
    _flash_until: float | None = None
    _last_t: float | None = field(default=None, repr=False)

    @property
    def state(self) -> DwellState:
        if self._phase is DwellPhase.IDLE or self._last_t is None:
            return DwellState(DwellPhase.IDLE, None, None, 0.0)
        if self._phase is DwellPhase.ACTIVATED_FLASH:
            return DwellState(self._phase, self._key, self._flash_until - self.flash_ms, 1.0)
        elapsed = self._last_t - self._on_key_since
        progress = min(1.0, max(0.0, (elapsed - self.arm_ms) / self.dwell_ms))
        start = self._on_key_since if self._phase is DwellPhase.ARMING else self._on_key_since + self.arm_ms
        return DwellState(self._phase, self._key, start, progress)

    def reset(self) -> None:
        self._phase = DwellPhase.IDLE
        self._key = None
        self._on_key_since = None
        self._flash_until = None

    def tick(self, point: tuple[float, float], t: float) -> KeyActivation | None:
        """Advance with the displayed (calibrated) cursor position at time t."""
        if self._last_t is not None and t <= self._last_t:
            raise ValueError(f"non-monotonic dwell tick: {t} after {self._last_t}")
        self._last_t = t

        if self._phase is DwellPhase.ACTIVATED_FLASH:
            if t < self._flash_until:
                return None  # refractory: ignore input during the flash
            self._phase = DwellPhase.IDLE
            self._key = None
            self._flash_until = None

        key = hit_test(self.layout, point)
        if key is None:
            self._phase = DwellPhase.IDLE
            self._key = None
            self._on_key_since = None
            return None
        if key != self._key:
            # entering a key (or switching keys) restarts the arm timer
            self._phase = DwellPhase.ARMING
            self._key = key
            self._on_key_since = t
            return None

        elapsed = t - self._on_key_since
        if elapsed >= self.arm_ms + self.dwell_ms:
            self._phase = DwellPhase.ACTIVATED_FLASH
            self._flash_until = t + self.flash_ms
            self._on_key_since = None
            return KeyActivation(key, int(t))
        if elapsed >= self.arm_ms:
            self._phase = DwellPhase.DWELLING
        return None
