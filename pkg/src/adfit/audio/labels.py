"""Energy-heuristic audio labeling.

Fallback for projects that arrive without classifier output: intervals
covered by transcript words become speech, low-RMS regions silence, and
everything else ambient. A proper music/speech classifier upstream will
always beat this; it only exists so a bare WAV + transcript is usable.
"""
from __future__ import annotations

import numpy as np

from ..model import AMBIENT, SILENCE, SPEECH, AudioLabelSegment
from ..timebase import sec, snap
from .clips import AudioClip

FRAME_S = 0.05
SILENCE_DBFS = -45.0


def label_segments_by_energy(clip: AudioClip, transcript=()) -> list:
    y = clip.mono()
    frame = max(1, int(FRAME_S * clip.sample_rate))
    n = max(1, len(y) // frame)
    rms = np.sqrt(
        np.add.reduceat(y[: n * frame] ** 2, np.arange(0, n * frame, frame)) / frame
    )
    threshold = 10 ** (SILENCE_DBFS / 20.0)
    kinds = np.where(rms < threshold, 0, 1)  # 0 silence, 1 ambient

    duration = snap(clip.duration)
    edges = []
    for i in range(1, n):
        if kinds[i] != kinds[i - 1]:
            edges.append(snap(i * FRAME_S))
    bounds = [0.0] + edges + [duration]
    segments = []
    for a, b in zip(bounds, bounds[1:]):
        if b <= a:
            continue
        k = kinds[min(int(a / FRAME_S), n - 1)]
        segments.append(AudioLabelSegment(a, b, SILENCE if k == 0 else AMBIENT))

    word_spans = [
        (w.start, w.end) for w in transcript if w.start is not None and w.end is not None
    ]
    if not word_spans:
        return segments
    # overlay word-covered regions as speech, re-tiling the timeline
    cuts = sorted({0.0, duration, *[s.start for s in segments], *[s.end for s in segments],
                   *[a for a, _ in word_spans], *[b for _, b in word_spans]})
    out = []
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        mid = (a + b) / 2
        if any(s <= mid < e for s, e in word_spans):
            label = SPEECH
        else:
            label = next(
                (s.label for s in segments if s.start <= mid < s.end), AMBIENT
            )
        if out and out[-1].label == label:
            out[-1] = AudioLabelSegment(out[-1].start, sec(int(round(b * 1000))), label)
        else:
            out.append(AudioLabelSegment(a, b, label))
    return out
