"""Project data model: transcript, audio labels, gaps, shots and draft
descriptions, plus the gap geometry every other stage works from.

Times are seconds snapped to a 1 ms grid (see timebase). All types are
immutable value objects; edits produce new Project revisions.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .timebase import ms, sec, snap

SPEECH = "speech"
MUSIC = "music"
SILENCE = "silence"
AMBIENT = "ambient"

LABELS = (SPEECH, MUSIC, SILENCE, AMBIENT)
GAP_LABELS = (MUSIC, SILENCE, AMBIENT)

WORDS_PER_SECOND_ESTIMATE = 0.3  # seconds of narration per word


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    location: str = ""

    def __str__(self) -> str:
        where = f" [{self.location}]" if self.location else ""
        return f"{self.code}: {self.message}{where}"


@dataclass(frozen=True)
class TimedWord:
    """A word with optional timing and syntactic annotations.

    ``dep_head`` is the index of the word's syntactic head within its own
    sentence (self-index for the root). Annotations are required for
    description words, optional for transcript words.
    """

    text: str
    start: Optional[float] = None
    end: Optional[float] = None
    pos: Optional[str] = None
    dep_head: Optional[int] = None
    dep_label: Optional[str] = None

    def __post_init__(self):
        if self.start is not None:
            object.__setattr__(self, "start", snap(self.start))
        if self.end is not None:
            object.__setattr__(self, "end", snap(self.end))

    @property
    def is_punct(self) -> bool:
        return self.pos == "PUNCT" or not any(ch.isalnum() for ch in self.text)


@dataclass(frozen=True)
class AudioLabelSegment:
    start: float
    end: float
    label: str

    def __post_init__(self):
        object.__setattr__(self, "start", snap(self.start))
        object.__setattr__(self, "end", snap(self.end))


@dataclass(frozen=True)
class GapSegment:
    """A maximal non-speech interval of the source track."""

    start: float
    end: float
    label: str
    extendable: bool = False
    max_extension: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "start", snap(self.start))
        object.__setattr__(self, "end", snap(self.end))
        object.__setattr__(self, "max_extension", snap(self.max_extension))

    @property
    def duration(self) -> float:
        return sec(ms(self.end) - ms(self.start))


@dataclass(frozen=True)
class Recording:
    """Reference to a recorded narration take with word-level alignment.

    ``alignment[i]`` gives the (start, end) sample span of word i within
    the recording, in seconds; it must cover every word exactly once, in
    order.
    """

    path: str
    alignment: tuple = ()  # tuple of (start, end) seconds per word


@dataclass(frozen=True)
class DraftDescription:
    id: str
    anchor_time: float
    words: tuple  # tuple of TimedWord
    lock_text: bool = False
    lock_time: bool = False
    lock_presence: bool = False
    recording: Optional[Recording] = None

    def __post_init__(self):
        object.__setattr__(self, "anchor_time", snap(self.anchor_time))
        object.__setattr__(self, "words", tuple(self.words))

    @property
    def text(self) -> str:
        return " ".join(w.text for w in self.words)


@dataclass(frozen=True)
class Project:
    source_duration: float
    transcript: tuple = ()
    labels: tuple = ()
    shots: tuple = ()  # shot boundary times, seconds
    descriptions: tuple = ()
    source_audio: str = ""
    optimizer_overrides: dict = field(default_factory=dict)
    coherence_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "source_duration", snap(self.source_duration))
        object.__setattr__(self, "transcript", tuple(self.transcript))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "shots", tuple(snap(t) for t in self.shots))
        object.__setattr__(self, "descriptions", tuple(self.descriptions))

    def description(self, did: str) -> DraftDescription:
        for d in self.descriptions:
            if d.id == did:
                return d
        raise KeyError(did)

    def with_description(self, new: DraftDescription) -> "Project":
        """Return a revision with one description replaced, kept sorted."""
        rest = [d for d in self.descriptions if d.id != new.id]
        rest.append(new)
        rest.sort(key=lambda d: (ms(d.anchor_time), d.id))
        return replace(self, descriptions=tuple(rest))


def estimate_description_duration(text: str) -> float:
    """Narration length estimate for unrecorded text: 0.3 s per word.

    Tokens without any alphanumeric character (bare punctuation) take no
    speaking time and are not counted.
    """
    words = [t for t in text.split() if any(ch.isalnum() for ch in t)]
    return WORDS_PER_SECOND_ESTIMATE * len(words)


def word_spans_ms(transcript) -> list:
    spans = []
    for w in transcript:
        if w.start is not None and w.end is not None:
            spans.append((ms(w.start), ms(w.end)))
    return spans


def speech_intervals_ms(labels, transcript) -> list:
    """Merged intervals treated as speech: speech-labeled segments plus
    any interval covered by a transcript word (even if mislabeled)."""
    spans = [(ms(s.start), ms(s.end)) for s in labels if s.label == SPEECH]
    spans += word_spans_ms(transcript)
    spans.sort()
    merged = []
    for a, b in spans:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def compute_gaps(labels, transcript) -> list:
    """Derive the maximal non-speech intervals of the timeline.

    Each gap carries the dominant non-speech label of the region it
    covers. Intervals covered by transcript words count as speech even
    when the labels say otherwise. The ``extendable`` flag is left unset;
    the optimizer fills it in from gap length and tempo.
    """
    _check_label_overlap(labels)
    if not labels:
        return []
    duration = max(ms(s.end) for s in labels)
    speech = speech_intervals_ms(labels, transcript)

    gaps = []
    cursor = 0
    for a, b in speech + [(duration, duration)]:
        if a > cursor:
            gaps.append((cursor, min(a, duration)))
        cursor = max(cursor, b)
    out = []
    for a, b in gaps:
        if b <= a:
            continue
        out.append(
            GapSegment(start=sec(a), end=sec(b), label=_dominant_label(labels, a, b))
        )
    return out


def _dominant_label(labels, a: int, b: int) -> str:
    coverage = {}
    first_at = {}
    for s in labels:
        if s.label == SPEECH:
            continue
        lo, hi = max(a, ms(s.start)), min(b, ms(s.end))
        if hi > lo:
            coverage[s.label] = coverage.get(s.label, 0) + (hi - lo)
            first_at.setdefault(s.label, lo)
    if not coverage:
        return SILENCE  # region carved out of speech labels by timing slack
    best = max(coverage.items(), key=lambda kv: (kv[1], -first_at[kv[0]]))
    return best[0]


def _check_label_overlap(labels) -> None:
    ordered = sorted(labels, key=lambda s: (ms(s.start), ms(s.end)))
    for prev, cur in zip(ordered, ordered[1:]):
        if ms(cur.start) < ms(prev.end):
            raise ValueError(
                f"overlapping label segments: {prev.label} "
                f"[{prev.start}, {prev.end}) and {cur.label} "
                f"[{cur.start}, {cur.end})"
            )


def validate_project(p: Project) -> list:
    """Check every model invariant; returns one Diagnostic per violation."""
    diags = []
    dur = ms(p.source_duration)

    def bad(code, message, location=""):
        diags.append(Diagnostic(code, message, location))

    if dur <= 0:
        bad("duration", f"source_duration must be positive, got {p.source_duration}")

    prev_end = None
    for i, w in enumerate(p.transcript):
        loc = f"transcript[{i}]"
        if (w.start is None) != (w.end is None):
            bad("word-timing", "word has only one of start/end", loc)
        if w.start is not None and w.end is not None:
            if ms(w.start) >= ms(w.end):
                bad("word-timing", f"start {w.start} not before end {w.end}", loc)
            if ms(w.start) < 0 or ms(w.end) > dur:
                bad("word-range", "word timing outside [0, duration]", loc)
            if prev_end is not None and ms(w.start) < prev_end:
                bad("word-order", "transcript words overlap or are unsorted", loc)
            prev_end = ms(w.end)

    ordered = sorted(p.labels, key=lambda s: (ms(s.start), ms(s.end)))
    for i, s in enumerate(p.labels):
        loc = f"labels[{i}]"
        if s.label not in LABELS:
            bad("label-kind", f"unknown label {s.label!r}", loc)
        if ms(s.start) >= ms(s.end):
            bad("label-timing", f"start {s.start} not before end {s.end}", loc)
    if ordered:
        if ms(ordered[0].start) != 0:
            bad("label-tiling", "label segments do not start at 0", "labels")
        for a, b in zip(ordered, ordered[1:]):
            if ms(a.end) != ms(b.start):
                bad(
                    "label-tiling",
                    f"gap or overlap between label segments at {a.end} / {b.start}",
                    "labels",
                )
        if ms(ordered[-1].end) != dur:
            bad("label-tiling", "label segments do not end at source_duration", "labels")

    prev = None
    for i, t in enumerate(p.shots):
        loc = f"shots[{i}]"
        if ms(t) < 0 or ms(t) > dur:
            bad("shot-range", f"shot boundary {t} outside [0, duration]", loc)
        if prev is not None and ms(t) <= prev:
            bad("shot-order", "shot boundaries not strictly increasing", loc)
        prev = ms(t)

    seen = set()
    prev_anchor = None
    for d in p.descriptions:
        loc = f"description {d.id!r}"
        if d.id in seen:
            bad("dup-id", "duplicate description id", loc)
        seen.add(d.id)
        if ms(d.anchor_time) < 0 or ms(d.anchor_time) > dur:
            bad("anchor-range", f"anchor_time {d.anchor_time} outside [0, duration]", loc)
        if prev_anchor is not None and ms(d.anchor_time) < prev_anchor:
            bad("anchor-order", "descriptions not sorted by anchor_time", loc)
        prev_anchor = ms(d.anchor_time)
        if not d.words:
            bad("empty-text", "description has no words", loc)
        if d.recording is not None:
            if len(d.recording.alignment) != len(d.words):
                bad(
                    "alignment-cover",
                    f"alignment covers {len(d.recording.alignment)} words, "
                    f"description has {len(d.words)}",
                    loc,
                )
            prev_t = 0.0
            for j, (a, b) in enumerate(d.recording.alignment):
                if a < prev_t or b <= a:
                    bad(
                        "alignment-order",
                        f"alignment span {j} not in order ({a}, {b})",
                        loc,
                    )
                    break
                prev_t = b
    return diags
