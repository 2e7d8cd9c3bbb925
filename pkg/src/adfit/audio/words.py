"""Word-boundary narration editing.

Realizes a shortened candidate from its recording by concatenating the
sample spans of the kept words. Every cut boundary gets a 5 ms
equal-power ramp; where two kept runs join, the ramps overlap as a true
crossfade, which shortens the output by the fade length per junction.
"""
from __future__ import annotations

import numpy as np

from .clips import AudioClip

FADE_S = 0.005


def _fade_curves(n: int):
    t = (np.arange(n, dtype=np.float32) + 0.5) / n
    return np.cos(t * np.pi / 2), np.sin(t * np.pi / 2)


def kept_runs(kept_indices):
    """Maximal runs of consecutive kept word indices."""
    runs = []
    for i in sorted(kept_indices):
        if runs and i == runs[-1][1]:
            runs[-1][1] = i + 1
        else:
            runs.append([i, i + 1])
    return [(a, b) for a, b in runs]


def cut_words(recording: AudioClip, alignment, kept_indices) -> AudioClip:
    """Cut a recording down to the kept words.

    ``alignment[i]`` is the (start, end) span of word i in seconds.
    Output duration = sum of kept spans - (junction count x 5 ms),
    exact to one sample.
    """
    n_words = len(alignment)
    for i in kept_indices:
        if not (0 <= i < n_words):
            raise IndexError(f"kept index {i} outside alignment of {n_words} words")
    runs = kept_runs(kept_indices)
    if not runs:
        return AudioClip(np.zeros((0, recording.channels), dtype=np.float32), recording.sample_rate)

    rate = recording.sample_rate
    fade = int(round(FADE_S * rate))
    fade_out, fade_in = _fade_curves(fade)
    segments = []
    for a, b in runs:
        s0 = recording.seconds_to_frames(alignment[a][0])
        s1 = recording.seconds_to_frames(alignment[b - 1][1])
        segments.append(recording.samples[s0:s1].copy())

    head_cut = runs[0][0] > 0
    tail_cut = runs[-1][1] < n_words
    if head_cut and len(segments[0]) >= fade:
        segments[0][:fade] *= fade_in[:, np.newaxis]
    if tail_cut and len(segments[-1]) >= fade:
        segments[-1][-fade:] *= fade_out[:, np.newaxis]

    out = segments[0]
    for seg in segments[1:]:
        k = min(fade, len(out), len(seg))
        if k > 0:
            mixed = out[-k:] * fade_out[-k:, np.newaxis] + seg[:k] * fade_in[:k, np.newaxis]
            out = np.concatenate([out[:-k], mixed, seg[k:]], axis=0)
        else:
            out = np.concatenate([out, seg], axis=0)
    return AudioClip(out, rate)


def cut_duration_frames(recording: AudioClip, alignment, kept_indices) -> int:
    """Expected cut_words output length in frames."""
    runs = kept_runs(kept_indices)
    rate = recording.sample_rate
    fade = int(round(FADE_S * rate))
    total = 0
    for a, b in runs:
        s0 = recording.seconds_to_frames(alignment[a][0])
        s1 = recording.seconds_to_frames(alignment[b - 1][1])
        total += s1 - s0
    return total - fade * max(0, len(runs) - 1)
