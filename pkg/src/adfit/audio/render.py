"""Composition rendering.

A render first builds a manifest (an ordered, sample-accurate edit
decision list), then executes it. Each decision appends a contiguous
region of output audio:

    copy        copy source [a, b)
    mix         copy source [a, b) ducked, narration mixed on top
    pause       source paused; narration inserted
    extend_gap  gap [a, b) lengthened to target_frames (music loop or
                ambient stretch), narrations mixed at offsets inside

Replaying a manifest against the same inputs and seed regenerates the
output bit for bit; narration clips are rebuilt deterministically from
the kept word indices recorded in each decision.
"""
from __future__ import annotations

import numpy as np

from ..model import MUSIC, Project, compute_gaps
from ..optimizer.config import EXTENDED, INLINE
from .clips import AudioClip, concat, load_wav, tone
from .extend import extend_ambient, extend_music
from .words import cut_words

DUCK_RAMP_S = 0.05
PLACEHOLDER_WORD_S = 0.3
LIMITER_CEILING = 0.999


class RenderError(RuntimeError):
    pass


def narration_clip(description, kept_indices, rate: int, audio_dir=None) -> AudioClip:
    """Narration audio for one placed candidate: the recording cut to
    the kept words, or per-word placeholder tones when unrecorded."""
    if description.recording is not None and description.recording.alignment:
        path = description.recording.path
        if audio_dir is not None:
            from pathlib import Path

            path = Path(audio_dir) / path
        rec = load_wav(path, target_rate=rate)
        return cut_words(rec, description.recording.alignment, kept_indices)
    parts = []
    for i in kept_indices:
        w = description.words[i]
        if w.is_punct:
            continue
        pitch = 261.63 * 2 ** ((i % 12) / 12)
        parts.append(tone(pitch, PLACEHOLDER_WORD_S, rate))
    if not parts:
        return AudioClip(np.zeros((0, 1), dtype=np.float32), rate)
    return concat(parts)


def build_manifest(
    project: Project, plan, mode: str, seed: int, source: AudioClip, duck_db: float = -9.0
) -> dict:
    if mode != plan.mode:
        raise RenderError(f"plan was optimized for mode {plan.mode!r}, not {mode!r}")
    rate = source.sample_rate
    frames = source.n_frames

    def f(t: float) -> int:
        return int(round(t * rate))

    decisions = []

    def narration_entry(p):
        return {
            "description": p.description_id,
            "kept_indices": list(p.candidate.kept_indices),
        }

    if mode == EXTENDED:
        cursor = 0
        for p in plan.placed:
            a = f(p.start)
            if a < cursor:
                raise RenderError(f"placement {p.description_id!r} out of order")
            if a > cursor:
                decisions.append({"type": "copy", "src": [cursor, a]})
            decisions.append({"type": "pause", **narration_entry(p)})
            cursor = a
        if cursor < frames:
            decisions.append({"type": "copy", "src": [cursor, frames]})
    elif mode == INLINE:
        cursor = 0
        for p in plan.placed:
            a, b = f(p.start), f(p.start) + f(p.duration)
            if a < cursor or b > frames:
                raise RenderError(
                    f"placement {p.description_id!r} does not fit its slot "
                    f"[{p.start:.3f}, {p.start + p.duration:.3f}]"
                )
            if a > cursor:
                decisions.append({"type": "copy", "src": [cursor, a]})
            decisions.append({"type": "mix", "src": [a, b], **narration_entry(p)})
            cursor = b
        if cursor < frames:
            decisions.append({"type": "copy", "src": [cursor, frames]})
    else:  # extended_inline
        gaps = compute_gaps(project.labels, project.transcript)
        by_gap = {}
        for p in plan.placed:
            k = _gap_index(gaps, p.start)
            if k is None:
                raise RenderError(
                    f"placement {p.description_id!r} at {p.start:.3f}s is outside every gap"
                )
            by_gap.setdefault(k, []).append(p)
        cursor = 0
        for k, gp in enumerate(gaps):
            placements = by_gap.get(k, [])
            if not placements:
                continue
            g0, g1 = f(gp.start), f(gp.end)
            ext_frames = sum(f(p.extension) for p in placements)
            if g0 > cursor:
                decisions.append({"type": "copy", "src": [cursor, g0]})
                cursor = g0
            elif g0 < cursor:
                raise RenderError("placements overlap a previous region")
            if ext_frames > 0:
                decisions.append(
                    {
                        "type": "extend_gap",
                        "src": [g0, g1],
                        "target_frames": (g1 - g0) + ext_frames,
                        "method": "music_loop" if gp.label == MUSIC else "ambient",
                        "seed": seed + k,
                        "placements": [
                            {"offset": f(p.start) - g0, **narration_entry(p)}
                            for p in placements
                        ],
                    }
                )
                cursor = g1
            else:
                for p in placements:
                    a, b = f(p.start), f(p.start) + f(p.duration)
                    if a < cursor or b > g1:
                        raise RenderError(
                            f"placement {p.description_id!r} does not fit gap "
                            f"[{gp.start:.3f}, {gp.end:.3f}]"
                        )
                    if a > cursor:
                        decisions.append({"type": "copy", "src": [cursor, a]})
                    decisions.append({"type": "mix", "src": [a, b], **narration_entry(p)})
                    cursor = b
        if cursor < frames:
            decisions.append({"type": "copy", "src": [cursor, frames]})

    output_frames = 0
    for d in decisions:
        if d["type"] == "copy":
            output_frames += d["src"][1] - d["src"][0]
        elif d["type"] == "mix":
            output_frames += d["src"][1] - d["src"][0]
        elif d["type"] == "extend_gap":
            output_frames += d["target_frames"]
    # pause decisions add narration length, resolved at execution time
    manifest = {
        "mode": mode,
        "seed": seed,
        "sample_rate": rate,
        "source_frames": frames,
        "duck_db": duck_db,
        "decisions": decisions,
        "output_frames": output_frames,  # finalized by execute for extended mode
    }
    return manifest


def _gap_index(gaps, t: float):
    for k, gp in enumerate(gaps):
        if gp.start <= t < gp.end:
            return k
    return None


def _duck_envelope(n: int, rate: int, gain: float) -> np.ndarray:
    env = np.full(n, gain, dtype=np.float32)
    ramp = min(int(DUCK_RAMP_S * rate), n // 2)
    if ramp > 0:
        down = np.linspace(1.0, gain, ramp, dtype=np.float32)
        env[:ramp] = down
        env[-ramp:] = down[::-1]
    return env


def _match_channels(samples: np.ndarray, channels: int) -> np.ndarray:
    if samples.shape[1] == channels:
        return samples
    if samples.shape[1] < channels:
        return np.repeat(samples, channels, axis=1)
    return samples.mean(axis=1, keepdims=True)


def _mix_narration(region: np.ndarray, narration: AudioClip, offset: int, rate: int,
                   gain: float, placement: str, stats: dict) -> np.ndarray:
    n = narration.n_frames
    if offset < 0 or offset + n > len(region) + 1:
        raise RenderError(
            f"narration for {placement!r} ({n} frames at offset {offset}) "
            f"is longer than its slot of {len(region)} frames"
        )
    n = min(n, len(region) - offset)
    out = region.copy()
    span = out[offset : offset + n]
    span *= _duck_envelope(n, rate, gain)[:, np.newaxis]
    span += _match_channels(narration.samples[:n], out.shape[1])
    peak = float(np.max(np.abs(span))) if n else 0.0
    if peak > 1.0:
        span *= LIMITER_CEILING / peak
        stats["limiter_engaged"].append(placement)
    out[offset : offset + n] = span
    return out


def execute_manifest(project: Project, manifest: dict, source: AudioClip, audio_dir=None):
    """Run an edit decision list; deterministic given identical inputs."""
    rate = manifest["sample_rate"]
    gain = 10.0 ** (manifest["duck_db"] / 20.0)
    stats = {"limiter_engaged": []}
    pieces = []

    def narration_for(d) -> AudioClip:
        desc = project.description(d["description"])
        return narration_clip(desc, d["kept_indices"], rate, audio_dir)

    for d in manifest["decisions"]:
        kind = d["type"]
        if kind == "copy":
            a, b = d["src"]
            pieces.append(source.samples[a:b])
        elif kind == "mix":
            a, b = d["src"]
            nar = narration_for(d)
            pieces.append(
                _mix_narration(source.samples[a:b], nar, 0, rate, gain, d["description"], stats)
            )
        elif kind == "pause":
            nar = narration_for(d)
            pieces.append(_match_channels(nar.samples, source.channels))
        elif kind == "extend_gap":
            a, b = d["src"]
            clip = AudioClip(source.samples[a:b], rate)
            target_s = d["target_frames"] / rate
            if d["method"] == "music_loop":
                extended = extend_music(clip, target_s, seed=d["seed"])
            else:
                extended = extend_ambient(clip, target_s, seed=d["seed"])
            region = extended.samples
            for pl in d["placements"]:
                nar = narration_for(pl)
                region = _mix_narration(
                    region, nar, pl["offset"], rate, gain, pl["description"], stats
                )
            pieces.append(region)
        else:
            raise RenderError(f"unknown manifest decision type {kind!r}")

    if pieces:
        out = np.concatenate(pieces, axis=0)
    else:
        out = np.zeros((0, source.channels), dtype=np.float32)
    manifest["output_frames"] = int(len(out))
    return AudioClip(out, rate), stats


def render(
    project: Project,
    plan,
    mode: str,
    seed: int,
    source: AudioClip = None,
    audio_dir=None,
    duck_db: float = -9.0,
):
    """Produce the final audio track and its manifest for a plan."""
    if source is None:
        if not project.source_audio:
            raise RenderError("project has no source audio reference")
        from pathlib import Path

        path = project.source_audio
        if audio_dir is not None:
            path = Path(audio_dir) / path
        source = load_wav(path)
    manifest = build_manifest(project, plan, mode, seed, source, duck_db=duck_db)
    clip, stats = execute_manifest(project, manifest, source, audio_dir)
    return clip, manifest, stats
