"""Project file loading and saving.

A project is a single JSON document (see docs/project_format.md). Audio
is referenced by relative path to PCM WAV files, resolved against the
project file's directory.
"""
from __future__ import annotations

import json
from pathlib import Path

from .model import (
    AudioLabelSegment,
    DraftDescription,
    Project,
    Recording,
    TimedWord,
)


def word_from_dict(obj: dict) -> TimedWord:
    return TimedWord(
        text=obj["text"],
        start=obj.get("start"),
        end=obj.get("end"),
        pos=obj.get("pos"),
        dep_head=obj.get("dep_head"),
        dep_label=obj.get("dep_label"),
    )


def word_to_dict(w: TimedWord) -> dict:
    out = {"text": w.text}
    for key in ("start", "end", "pos", "dep_head", "dep_label"):
        value = getattr(w, key)
        if value is not None:
            out[key] = value
    return out


def description_from_dict(obj: dict) -> DraftDescription:
    rec = None
    if obj.get("recording"):
        r = obj["recording"]
        rec = Recording(
            path=r["path"],
            alignment=tuple((span[0], span[1]) for span in r.get("alignment", [])),
        )
    return DraftDescription(
        id=obj["id"],
        anchor_time=obj["anchor_time"],
        words=tuple(word_from_dict(w) for w in obj["words"]),
        lock_text=bool(obj.get("lock_text", False)),
        lock_time=bool(obj.get("lock_time", False)),
        lock_presence=bool(obj.get("lock_presence", False)),
        recording=rec,
    )


def description_to_dict(d: DraftDescription) -> dict:
    out = {
        "id": d.id,
        "anchor_time": d.anchor_time,
        "words": [word_to_dict(w) for w in d.words],
        "lock_text": d.lock_text,
        "lock_time": d.lock_time,
        "lock_presence": d.lock_presence,
    }
    if d.recording is not None:
        out["recording"] = {
            "path": d.recording.path,
            "alignment": [[a, b] for a, b in d.recording.alignment],
        }
    return out


def project_from_dict(obj: dict) -> Project:
    return Project(
        source_duration=obj["source_duration"],
        transcript=tuple(word_from_dict(w) for w in obj.get("transcript", [])),
        labels=tuple(
            AudioLabelSegment(s["start"], s["end"], s["label"])
            for s in obj.get("labels", [])
        ),
        shots=tuple(obj.get("shots", [])),
        descriptions=tuple(
            description_from_dict(d) for d in obj.get("descriptions", [])
        ),
        source_audio=obj.get("source_audio", ""),
        optimizer_overrides=dict(obj.get("optimizer", {})),
        coherence_overrides={
            did: dict(scores)
            for did, scores in obj.get("coherence_overrides", {}).items()
        },
    )


def project_to_dict(p: Project) -> dict:
    out = {
        "source_duration": p.source_duration,
        "source_audio": p.source_audio,
        "transcript": [word_to_dict(w) for w in p.transcript],
        "labels": [
            {"start": s.start, "end": s.end, "label": s.label} for s in p.labels
        ],
        "shots": list(p.shots),
        "descriptions": [description_to_dict(d) for d in p.descriptions],
    }
    if p.optimizer_overrides:
        out["optimizer"] = dict(p.optimizer_overrides)
    if p.coherence_overrides:
        out["coherence_overrides"] = {
            did: dict(scores) for did, scores in p.coherence_overrides.items()
        }
    return out


def load_project(path) -> Project:
    with open(path, "r", encoding="utf-8") as fh:
        return project_from_dict(json.load(fh))


def save_project(p: Project, path) -> None:
    Path(path).write_text(
        json.dumps(project_to_dict(p), indent=2, sort_keys=True), encoding="utf-8"
    )
