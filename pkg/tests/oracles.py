"""Independent brute-force reference implementations used as test oracles.

These deliberately re-derive behavior from the documented rules in a
different style (whole-trace passes over plain lists) so they can catch
bookkeeping bugs in the streaming implementations.
"""
from __future__ import annotations

import math


def classify_trace(
    samples: list[tuple[int, float, float]],
    velocity_threshold: float,
    min_duration_ms: float,
    sample_rate_hz: float = 60.0,
) -> list[tuple[str, tuple[float, float] | None]]:
    """Label every sample of a (t, x, y) trace; returns (kind, centroid) pairs.

    Rules: velocity above threshold => saccade (ends a fixation if one is
    running, and the sample seeds the next candidate); a gap longer than
    3 nominal sample periods resets the candidate without being a saccade;
    a candidate becomes a fixation once it has lasted min_duration_ms.
    Centroid is the arithmetic mean of the current candidate's samples.
    """
    gap_ms = 3.0 * (1000.0 / sample_rate_hz)
    out: list[tuple[str, tuple[float, float] | None]] = []
    run: list[tuple[int, float, float]] = []  # current candidate samples
    fixating = False
    for i, (t, x, y) in enumerate(samples):
        if i == 0:
            run = [(t, x, y)]
            fixating = False
            xs = [p[1] for p in run]
            ys = [p[2] for p in run]
            out.append(("CANDIDATE_SAMPLE", (sum(xs) / len(xs), sum(ys) / len(ys))))
            continue
        pt, px, py = samples[i - 1]
        dt = t - pt
        v = math.hypot(x - px, y - py) / dt
        if v > velocity_threshold:
            kind = "FIXATION_ENDED" if fixating else "SACCADE_SAMPLE"
            centroid = None
            if fixating:
                xs = [p[1] for p in run]
                ys = [p[2] for p in run]
                centroid = (sum(xs) / len(xs), sum(ys) / len(ys))
            out.append((kind, centroid))
            run = [(t, x, y)]
            fixating = False
            continue
        if dt > gap_ms:
            if fixating:
                xs = [p[1] for p in run]
                ys = [p[2] for p in run]
                out.append(("FIXATION_ENDED", (sum(xs) / len(xs), sum(ys) / len(ys))))
            else:
                out.append(("CANDIDATE_SAMPLE", (x, y)))
            run = [(t, x, y)]
            fixating = False
            continue
        run.append((t, x, y))
        xs = [p[1] for p in run]
        ys = [p[2] for p in run]
        centroid = (sum(xs) / len(xs), sum(ys) / len(ys))
        elapsed = t - run[0][0]
        if fixating:
            out.append(("FIXATION_ONGOING", centroid))
        elif elapsed >= min_duration_ms:
            fixating = True
            out.append(("FIXATION_STARTED", centroid))
        else:
            out.append(("CANDIDATE_SAMPLE", centroid))
    return out


def windowed_clip_means(
    deltas: list[tuple[float, float]], window: int, bound: float
) -> list[tuple[float, float]]:
    """Expected eps after each update: clip(mean of the last `window` deltas)."""
    out = []
    for k in range(1, len(deltas) + 1):
        tail = deltas[max(0, k - window) : k]
        mx = sum(d[0] for d in tail) / len(tail)
        my = sum(d[1] for d in tail) / len(tail)
        clip = lambda v: max(-bound, min(bound, v))
        out.append((clip(mx), clip(my)))
    return out


def two_pass_se(xs: list[float]) -> float:
    """Standard error by the textbook two-pass formula."""
    n = len(xs)
    m = sum(xs) / n
    var = sum((x - m) ** 2 for x in xs) / (n - 1)
    return math.sqrt(var) / math.sqrt(n)
