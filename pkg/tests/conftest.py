"""Shared fixtures: a small richly-featured project with hand-annotated
descriptions, plus synthesized source audio matching its label timeline."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from adfit.audio import AudioClip, click_track, save_wav, silence, tone, white_noise
from adfit.model import (
    AMBIENT,
    MUSIC,
    SILENCE,
    SPEECH,
    AudioLabelSegment,
    DraftDescription,
    Project,
    TimedWord,
)
from adfit.project_io import project_to_dict

RATE = 8000


def w(text, pos=None, head=None, label=None, start=None, end=None):
    return TimedWord(text=text, pos=pos, dep_head=head, dep_label=label, start=start, end=end)


def beach_description(did="d1", anchor=8.0, **locks) -> DraftDescription:
    """'People walking along a beach with an overcast sky above and
    white sand below turquoise water .' with a prep-headed parse."""
    words = (
        w("People", "NOUN", 0, "ROOT"),
        w("walking", "VERB", 0, "acl"),
        w("along", "ADP", 1, "prep"),
        w("a", "DET", 4, "det"),
        w("beach", "NOUN", 2, "pobj"),
        w("with", "ADP", 1, "prep"),
        w("an", "DET", 8, "det"),
        w("overcast", "ADJ", 8, "amod"),
        w("sky", "NOUN", 5, "pobj"),
        w("above", "ADP", 8, "prep"),
        w("and", "CCONJ", 8, "cc"),
        w("white", "ADJ", 12, "amod"),
        w("sand", "NOUN", 8, "conj"),
        w("below", "ADP", 12, "prep"),
        w("turquoise", "ADJ", 15, "amod"),
        w("water", "NOUN", 13, "pobj"),
        w(".", "PUNCT", 0, "punct"),
    )
    return DraftDescription(id=did, anchor_time=anchor, words=words, **locks)


def bench_description(did="d2", anchor=33.0, recording=None, **locks) -> DraftDescription:
    """'A long bench with blue birds' (the edit-cost micro-example)."""
    words = (
        w("A", "DET", 2, "det"),
        w("long", "ADJ", 2, "amod"),
        w("bench", "NOUN", 2, "ROOT"),
        w("with", "ADP", 2, "prep"),
        w("blue", "ADJ", 5, "amod"),
        w("birds", "NOUN", 3, "pobj"),
    )
    return DraftDescription(
        id=did, anchor_time=anchor, words=words, recording=recording, **locks
    )


def food_description(did="d3", anchor=45.0, **locks) -> DraftDescription:
    """'Close up of bar food including bibimbap and tater tots .'"""
    words = (
        w("Close", "NOUN", 0, "ROOT"),
        w("up", "ADP", 0, "prt"),
        w("of", "ADP", 0, "prep"),
        w("bar", "NOUN", 4, "compound"),
        w("food", "NOUN", 2, "pobj"),
        w("including", "ADP", 4, "prep"),
        w("bibimbap", "NOUN", 5, "pobj"),
        w("and", "CCONJ", 6, "cc"),
        w("tater", "NOUN", 9, "compound"),
        w("tots", "NOUN", 6, "conj"),
        w(".", "PUNCT", 0, "punct"),
    )
    return DraftDescription(id=did, anchor_time=anchor, words=words, **locks)


def onscreen_description(did="d4", anchor=54.0, **locks) -> DraftDescription:
    """'Text on screen : " Welcome back "'"""
    words = (
        w("Text", "NOUN", 0, "ROOT"),
        w("on", "ADP", 0, "prep"),
        w("screen", "NOUN", 1, "pobj"),
        w(":", "PUNCT", 0, "punct"),
        w('"', "PUNCT", 5, "punct"),
        w("Welcome", "PROPN", 0, "appos"),
        w("back", "ADV", 5, "advmod"),
        w('"', "PUNCT", 5, "punct"),
    )
    return DraftDescription(id=did, anchor_time=anchor, words=words, **locks)


def zoom_description(did="d5", anchor=20.0, **locks) -> DraftDescription:
    """'They zoom in on the dog .' (film-phrase protection)."""
    words = (
        w("They", "PRON", 1, "nsubj"),
        w("zoom", "VERB", 1, "ROOT"),
        w("in", "ADP", 1, "prep"),
        w("on", "ADP", 1, "prep"),
        w("the", "DET", 5, "det"),
        w("dog", "NOUN", 3, "pobj"),
        w(".", "PUNCT", 1, "punct"),
    )
    return DraftDescription(id=did, anchor_time=anchor, words=words, **locks)


def _spread_words(tokens, start, end):
    """Evenly timed transcript words over [start, end]."""
    n = len(tokens)
    step = (end - start) / n
    out = []
    for i, (text, pos) in enumerate(tokens):
        a = start + i * step
        out.append(w(text, pos=pos, start=round(a, 3), end=round(a + step * 0.8, 3)))
    return out


def fixture_transcript():
    words = []
    words += _spread_words(
        [("we", "PRON"), ("walked", "VERB"), ("along", "ADP"), ("the", "DET"),
         ("beach", "NOUN"), (".", "PUNCT")],
        0.5, 5.5,
    )
    words += _spread_words(
        [("the", "DET"), ("bibimbap", "NOUN"), ("was", "AUX"), ("amazing", "ADJ"),
         ("near", "ADP"), ("the", "DET"), ("water", "NOUN"), (".", "PUNCT")],
        26.2, 30.8,
    )
    words += _spread_words(
        [("i", "PRON"), ("loved", "VERB"), ("the", "DET"), ("bibimbap", "NOUN"),
         (".", "PUNCT")],
        41.2, 43.8,
    )
    words += _spread_words(
        [("an", "DET"), ("overcast", "ADJ"), ("sky", "NOUN"), (".", "PUNCT")],
        50.2, 51.8,
    )
    return tuple(words)


def fixture_labels():
    return tuple(
        AudioLabelSegment(a, b, label)
        for a, b, label in [
            (0, 6, SPEECH),
            (6, 26, MUSIC),
            (26, 31, SPEECH),
            (31, 41, SILENCE),
            (41, 44, SPEECH),
            (44, 50, AMBIENT),
            (50, 52, SPEECH),
            (52, 60, MUSIC),
        ]
    )


def fixture_project(**overrides) -> Project:
    fields = dict(
        source_duration=60.0,
        transcript=fixture_transcript(),
        labels=fixture_labels(),
        shots=(15.0, 29.0, 47.0),
        descriptions=(
            beach_description(),
            zoom_description(),
            bench_description(),
            food_description(),
            onscreen_description(),
        ),
        source_audio="source.wav",
    )
    fields.update(overrides)
    return Project(**fields)


def synthesize_source(project: Project, rate: int = RATE) -> AudioClip:
    """Audio matching the label timeline: tone bursts for speech, chords
    plus clicks for music, noise for ambient, zeros for silence."""
    parts = []
    for seg in project.labels:
        dur = seg.end - seg.start
        if seg.label == SPEECH:
            burst = tone(220.0, 0.18, rate, amplitude=0.4).samples[:, 0]
            n = int(round(dur * rate))
            buf = np.zeros(n, dtype=np.float32)
            pos = 0
            while pos + len(burst) < n:
                buf[pos : pos + len(burst)] += burst
                pos += int(0.3 * rate)
            parts.append(AudioClip(buf, rate))
        elif seg.label == MUSIC:
            chord = (
                tone(330.0, dur, rate, amplitude=0.2).samples
                + tone(415.0, dur, rate, amplitude=0.15).samples
                + tone(494.0, dur, rate, amplitude=0.1).samples
            )
            clicks = click_track(100.0, dur, rate).samples
            n = min(len(chord), len(clicks))
            parts.append(AudioClip(chord[:n] + 0.3 * clicks[:n], rate))
        elif seg.label == AMBIENT:
            parts.append(white_noise(dur, rate, seed=7, amplitude=0.05))
        else:
            parts.append(silence(dur, rate))
    samples = np.concatenate([p.samples for p in parts], axis=0)
    want = int(round(project.source_duration * rate))
    if len(samples) < want:
        samples = np.pad(samples, ((0, want - len(samples)), (0, 0)))
    return AudioClip(samples[:want], rate)


def write_fixture_dir(project: Project, path: Path) -> Path:
    """Write project.json + source.wav to a directory; returns the
    project file path."""
    path.mkdir(parents=True, exist_ok=True)
    save_wav(path / "source.wav", synthesize_source(project))
    doc = project_to_dict(project)
    (path / "project.json").write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return path / "project.json"


@pytest.fixture()
def project() -> Project:
    return fixture_project()


@pytest.fixture()
def project_file(tmp_path) -> Path:
    return write_fixture_dir(fixture_project(), tmp_path / "proj")


@pytest.fixture(scope="session")
def session_project_file(tmp_path_factory) -> Path:
    return write_fixture_dir(
        fixture_project(), tmp_path_factory.mktemp("fixture-proj")
    )
