"""PCM audio clips: WAV I/O, resampling and synthesis helpers.

Clips are float32 arrays of shape (frames, channels) in [-1, 1]. WAV
files may be 16-bit integer or 32-bit float, mono or stereo, any sample
rate; inputs are resampled to the project rate on load.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile
from scipy.signal import resample_poly


@dataclass(frozen=True)
class AudioClip:
    samples: np.ndarray  # float32, shape (frames, channels)
    sample_rate: int

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float32)
        if s.ndim == 1:
            s = s[:, np.newaxis]
        if s.ndim != 2 or s.shape[1] not in (1, 2):
            raise ValueError(f"expected mono or stereo samples, got shape {s.shape}")
        object.__setattr__(self, "samples", s)

    @property
    def n_frames(self) -> int:
        return self.samples.shape[0]

    @property
    def channels(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.n_frames / self.sample_rate

    def mono(self) -> np.ndarray:
        return self.samples.mean(axis=1)

    def slice_frames(self, a: int, b: int) -> "AudioClip":
        return AudioClip(self.samples[a:b], self.sample_rate)

    def seconds_to_frames(self, t: float) -> int:
        return int(round(t * self.sample_rate))


def load_wav(path, target_rate=None) -> AudioClip:
    rate, data = wavfile.read(path)
    if data.dtype == np.int16:
        samples = data.astype(np.float32) / 32768.0
    elif data.dtype == np.int32:
        samples = data.astype(np.float32) / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float32)
    else:
        raise ValueError(f"unsupported WAV sample format {data.dtype} in {path}")
    clip = AudioClip(samples, rate)
    if target_rate is not None and target_rate != rate:
        clip = resample(clip, target_rate)
    return clip


def save_wav(path, clip: AudioClip) -> None:
    wavfile.write(path, clip.sample_rate, clip.samples)


def resample(clip: AudioClip, target_rate: int) -> AudioClip:
    from math import gcd

    g = gcd(clip.sample_rate, target_rate)
    up, down = target_rate // g, clip.sample_rate // g
    out = resample_poly(clip.samples, up, down, axis=0).astype(np.float32)
    return AudioClip(out, target_rate)


def silence(duration: float, rate: int, channels: int = 1) -> AudioClip:
    n = int(round(duration * rate))
    return AudioClip(np.zeros((n, channels), dtype=np.float32), rate)


def tone(freq: float, duration: float, rate: int, amplitude: float = 0.5) -> AudioClip:
    n = int(round(duration * rate))
    t = np.arange(n, dtype=np.float32) / rate
    y = amplitude * np.sin(2 * np.pi * freq * t, dtype=np.float32)
    # 5 ms edge ramps to avoid clicks
    edge = min(int(0.005 * rate), n // 2)
    if edge > 0:
        ramp = np.linspace(0.0, 1.0, edge, dtype=np.float32)
        y[:edge] *= ramp
        y[-edge:] *= ramp[::-1]
    return AudioClip(y, rate)


def click_track(bpm: float, duration: float, rate: int, click_hz: float = 1500.0) -> AudioClip:
    """Synthetic metronome used by the tempo tests."""
    n = int(round(duration * rate))
    y = np.zeros(n, dtype=np.float32)
    period = 60.0 / bpm
    click = tone(click_hz, 0.02, rate, amplitude=0.9).samples[:, 0]
    t = 0.0
    while t < duration:
        a = int(round(t * rate))
        b = min(a + len(click), n)
        y[a:b] += click[: b - a]
        t += period
    return AudioClip(y, rate)


def white_noise(duration: float, rate: int, seed: int = 0, amplitude: float = 0.3) -> AudioClip:
    rng = np.random.default_rng(seed)
    n = int(round(duration * rate))
    return AudioClip(amplitude * rng.standard_normal(n).astype(np.float32), rate)


def concat(clips) -> AudioClip:
    clips = list(clips)
    rate = clips[0].sample_rate
    ch = max(c.channels for c in clips)
    parts = []
    for c in clips:
        if c.sample_rate != rate:
            raise ValueError("cannot concatenate clips with different sample rates")
        s = c.samples
        if s.shape[1] < ch:
            s = np.repeat(s, ch, axis=1)
        parts.append(s)
    return AudioClip(np.concatenate(parts, axis=0), rate)
