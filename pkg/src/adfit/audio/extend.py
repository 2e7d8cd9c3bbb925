"""Gap lengthening: music looping and ambient stretching.

Music extension finds the most self-similar frame pair at least 2 s
apart (RMS + spectral centroid features) and loops that region with
50 ms crossfades. Ambient/silence extension repeatedly appends randomly
sampled 0.2-1.0 s segments with a random 0.0-0.2 s crossfaded overlap.
Both produce exactly the requested length and are deterministic for a
given seed; neither extends past twice the original length.
"""
from __future__ import annotations

import numpy as np

from ..model import Diagnostic
from .clips import AudioClip

LOOP_FADE_S = 0.05
FEATURE_FRAME_S = 0.05
MIN_LOOP_SPAN_S = 2.0
# a usable loop point must be much more self-similar than typical pairs
LOOP_ABSOLUTE_THRESHOLD = 0.05
LOOP_RELATIVE_THRESHOLD = 0.15
AMBIENT_SEGMENT_RANGE_S = (0.2, 1.0)
AMBIENT_OVERLAP_RANGE_S = (0.0, 0.2)
MAX_EXTENSION_FACTOR = 2.0


def _check_target(clip: AudioClip, target_len: float) -> int:
    target = int(round(target_len * clip.sample_rate))
    if target < clip.n_frames:
        raise ValueError("target length is shorter than the clip")
    if target > int(round(MAX_EXTENSION_FACTOR * clip.n_frames)):
        raise ValueError(
            f"target {target_len:.3f}s exceeds {MAX_EXTENSION_FACTOR}x the clip length"
        )
    return target


def _frame_features(clip: AudioClip):
    y = clip.mono()
    frame = max(1, int(FEATURE_FRAME_S * clip.sample_rate))
    n = len(y) // frame
    if n == 0:
        return np.zeros((0, 2)), frame
    seg = y[: n * frame].reshape(n, frame)
    rms = np.sqrt((seg**2).mean(axis=1))
    spectra = np.abs(np.fft.rfft(seg, axis=1))
    freqs = np.arange(spectra.shape[1])
    denom = spectra.sum(axis=1)
    centroid = np.where(denom > 0, (spectra * freqs).sum(axis=1) / np.maximum(denom, 1e-12), 0.0)
    feats = np.stack([rms, centroid], axis=1)
    std = feats.std(axis=0)
    # an essentially constant feature must not be inflated into noise
    meaningful = std > 1e-4 * (np.abs(feats.mean(axis=0)) + 1.0)
    feats = np.where(meaningful, (feats - feats.mean(axis=0)) / np.where(std > 0, std, 1.0), 0.0)
    return feats, frame


def find_loop_points(clip: AudioClip):
    """Best (start_frame, end_frame) sample pair to loop, or None when no
    pair is similar enough."""
    feats, frame = _frame_features(clip)
    min_span = int(np.ceil(MIN_LOOP_SPAN_S * clip.sample_rate / frame))
    n = len(feats)
    if n <= min_span:
        return None
    dists = np.linalg.norm(feats[:, np.newaxis, :] - feats[np.newaxis, :, :], axis=2)
    ii, jj = np.triu_indices(n, k=min_span)
    if len(ii) == 0:
        return None
    pair_dists = dists[ii, jj]
    k = int(np.argmin(pair_dists))
    best = float(pair_dists[k])
    if best > LOOP_ABSOLUTE_THRESHOLD and best > LOOP_RELATIVE_THRESHOLD * float(
        np.median(pair_dists)
    ):
        return None
    return int(ii[k]) * frame, int(jj[k]) * frame


def _crossfaded_append(out: np.ndarray, seg: np.ndarray, overlap: int) -> np.ndarray:
    k = min(overlap, len(out), len(seg))
    if k <= 0:
        return np.concatenate([out, seg], axis=0)
    t = (np.arange(k, dtype=np.float32) + 0.5) / k
    fade_out = np.cos(t * np.pi / 2)[:, np.newaxis]
    fade_in = np.sin(t * np.pi / 2)[:, np.newaxis]
    mixed = out[-k:] * fade_out + seg[:k] * fade_in
    return np.concatenate([out[:-k], mixed, seg[k:]], axis=0)


def extend_music(clip: AudioClip, target_len: float, seed: int = 0, diagnostics=None) -> AudioClip:
    """Lengthen music by looping its most self-similar region."""
    target = _check_target(clip, target_len)
    if target == clip.n_frames:
        return clip
    points = find_loop_points(clip)
    if points is None:
        if diagnostics is not None:
            diagnostics.append(
                Diagnostic(
                    "no-loop-point",
                    "no loop pair under the similarity threshold; "
                    "falling back to ambient-style extension",
                )
            )
        return extend_ambient(clip, target_len, seed)
    a, b = points
    fade = int(round(LOOP_FADE_S * clip.sample_rate))
    out = clip.samples[:b]
    loop = clip.samples[a:b]
    tail = clip.samples[a:]
    while len(out) + len(tail) - fade < target:
        out = _crossfaded_append(out, loop, fade)
    out = _crossfaded_append(out, tail, fade)
    return AudioClip(out[:target], clip.sample_rate)


def extend_ambient(clip: AudioClip, target_len: float, seed: int = 0) -> AudioClip:
    """Lengthen ambient sound or silence by appending random snippets."""
    target = _check_target(clip, target_len)
    if target == clip.n_frames:
        return clip
    rng = np.random.default_rng(seed)
    rate = clip.sample_rate
    out = clip.samples
    n = clip.n_frames
    while len(out) < target:
        seg_len = int(round(rng.uniform(*AMBIENT_SEGMENT_RANGE_S) * rate))
        seg_len = min(seg_len, n)
        start = int(rng.integers(0, max(1, n - seg_len + 1)))
        overlap = int(round(rng.uniform(*AMBIENT_OVERLAP_RANGE_S) * rate))
        out = _crossfaded_append(out, clip.samples[start : start + seg_len], overlap)
    return AudioClip(out[:target], clip.sample_rate)
