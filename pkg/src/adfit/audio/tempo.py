"""Beat-rate estimation from an onset-strength envelope.

Half-wave-rectified spectral flux over 50%-overlapped short-time
frames, autocorrelated across the 30-240 bpm lag range. The tempo is
the smallest lag among near-maximal autocorrelation peaks (dropping
harmonic multiples of the beat period), refined parabolically.
Aperiodic signals fall below the prominence threshold and return None.
"""
from __future__ import annotations

import numpy as np

from ..model import Diagnostic
from .clips import AudioClip

MIN_CLIP_S = 5.0
MIN_BPM = 30.0
MAX_BPM = 240.0
PROMINENCE_THRESHOLD = 0.25
HARMONIC_TOLERANCE = 0.85


def onset_envelope(clip: AudioClip, frame: int = 512):
    """Spectral-flux onset strengths and their frame rate."""
    y = clip.mono()
    hop = frame // 2
    if len(y) < 2 * frame:
        return np.zeros(0), clip.sample_rate / hop
    n_frames = 1 + (len(y) - frame) // hop
    window = np.hanning(frame).astype(np.float32)
    idx = np.arange(frame)[np.newaxis, :] + hop * np.arange(n_frames)[:, np.newaxis]
    spectra = np.abs(np.fft.rfft(y[idx] * window, axis=1))
    flux = np.maximum(spectra[1:] - spectra[:-1], 0.0).sum(axis=1)
    return flux, clip.sample_rate / hop


def estimate_tempo(clip: AudioClip, diagnostics=None):
    """Tempo in bpm, or None for clips too short or without a clear beat."""
    if clip.duration < MIN_CLIP_S:
        if diagnostics is not None:
            diagnostics.append(
                Diagnostic("tempo-short", f"clip of {clip.duration:.2f}s is below {MIN_CLIP_S}s")
            )
        return None
    env, frame_rate = onset_envelope(clip)
    if len(env) == 0 or float(env.max()) <= 0.0:
        return None
    env = env - env.mean()
    if not np.any(env != 0.0):
        return None
    # light smoothing to soften frame-grid aliasing of sharp onsets
    env = np.convolve(env, np.ones(3) / 3.0, mode="same")

    ac = np.correlate(env, env, mode="full")[len(env) - 1 :]
    if ac[0] <= 0:
        return None
    lag_min = max(2, int(np.floor(frame_rate * 60.0 / MAX_BPM)))
    lag_max = min(len(ac) - 2, int(np.ceil(frame_rate * 60.0 / MIN_BPM)))
    if lag_max <= lag_min:
        return None

    window = ac[lag_min : lag_max + 1]
    peak_val = float(window.max())
    if peak_val / float(ac[0]) < PROMINENCE_THRESHOLD:
        return None
    # local maxima close to the global peak; the smallest such lag is the
    # beat period, larger ones its harmonics
    candidates = []
    for k in range(lag_min, lag_max + 1):
        if ac[k] >= HARMONIC_TOLERANCE * peak_val and ac[k] >= ac[k - 1] and ac[k] >= ac[k + 1]:
            candidates.append(k)
    if not candidates:
        candidates = [int(np.argmax(window)) + lag_min]
    best = candidates[0]

    y0, y1, y2 = ac[best - 1], ac[best], ac[best + 1]
    denom = y0 - 2 * y1 + y2
    shift = 0.0 if denom == 0 else 0.5 * float(y0 - y2) / float(denom)
    shift = float(np.clip(shift, -0.5, 0.5))
    return 60.0 * frame_rate / (best + shift)
