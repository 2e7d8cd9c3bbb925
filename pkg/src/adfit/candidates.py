"""Shortened-candidate generation by parse-tree deletion.

Candidates keep a subsequence of the draft's words (never reordered or
paraphrased) obtained by dropping adjectives, prepositional phrases and
coordinated conjuncts, while never splitting protected phrases.

Dependency annotations follow the convention documented in
docs/project_format.md: UD part-of-speech tags, prep-headed dependency
labels (``prep``/``pobj``/``conj``/``cc``/...).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .model import (
    WORDS_PER_SECOND_ESTIMATE,
    Diagnostic,
    DraftDescription,
    Project,
)
from .timebase import snap

ADJECTIVE = "adjective"
PREP_PHRASE = "prepositional_phrase"
COMPOUND = "compound"

QUOTE_TOKENS = {'"', "“", "”", "``", "''"}
ONSCREEN_TRIGGERS = ("text", "title", "credit")
SENTENCE_FINAL = {".", "!", "?"}

DEFAULT_CANDIDATE_CAP = 256
# beyond this many drop units, subset enumeration is truncated (largest
# drop sets first) instead of exhaustive
FULL_ENUMERATION_UNIT_LIMIT = 16


class AnnotationError(ValueError):
    """A description is missing the POS/dependency annotations that
    candidate generation requires."""


@dataclass(frozen=True)
class DropUnit:
    start: int  # first word index of the span
    end: int  # one past the last word index
    kind: str

    @property
    def indices(self) -> range:
        return range(self.start, self.end)


@dataclass
class ProtectedPhraseSet:
    film_phrases: set = field(default_factory=set)
    video_phrases: set = field(default_factory=set)
    quoted_spans: list = field(default_factory=list)
    onscreen_spans: list = field(default_factory=list)
    film_spans: list = field(default_factory=list)
    video_spans: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    @property
    def spans(self) -> list:
        return self.film_spans + self.video_spans + self.quoted_spans + self.onscreen_spans


@dataclass(frozen=True)
class Candidate:
    description_id: str
    kept_indices: tuple
    text: str
    duration: float
    cut_count: int
    drops_last_word: bool

    def __post_init__(self):
        object.__setattr__(self, "duration", snap(self.duration))
        object.__setattr__(self, "kept_indices", tuple(self.kept_indices))


def load_term_file(path) -> list:
    terms = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip().lower()
            if line and not line.startswith("#"):
                terms.append(line)
    return terms


def _lower_tokens(words) -> list:
    return [w.text.lower() for w in words]


def _corpus_tokens(project: Project) -> list:
    """One flat token stream per source: transcript plus each description."""
    streams = [[w.text.lower() for w in project.transcript]]
    for d in project.descriptions:
        streams.append([w.text.lower() for w in d.words])
    return streams


def collect_protected_phrases(
    d: DraftDescription,
    project: Project,
    glossary,
    stopwords=(),
) -> ProtectedPhraseSet:
    """Find the spans of d's words that candidates must keep or drop whole.

    Film phrases are glossary n-grams extended over any trailing run of
    prepositions. Video phrases are stopword-free 2..4-grams containing a
    noun or verb that recur at least 3 times across the transcript and
    all descriptions. Quoted spans pair quotation-mark tokens; on-screen
    spans run from a "text"/"title"/"credit" trigger to the sentence end.
    """
    out = ProtectedPhraseSet()
    toks = _lower_tokens(d.words)
    n = len(toks)
    glossary_grams = {tuple(term.split()) for term in glossary}
    stop = {s.lower() for s in stopwords}

    max_glossary_len = max((len(g) for g in glossary_grams), default=0)
    for i in range(n):
        for size in range(max_glossary_len, 0, -1):
            gram = tuple(toks[i : i + size])
            if len(gram) == size and gram in glossary_grams:
                j = i + size
                while j < n and d.words[j].pos == "ADP":
                    j += 1
                out.film_phrases.add(tuple(toks[i:j]))
                out.film_spans.append((i, j))
                break

    streams = _corpus_tokens(project)
    noun_verb = {"NOUN", "PROPN", "VERB"}
    for size in (2, 3, 4):
        for i in range(n - size + 1):
            gram = tuple(toks[i : i + size])
            if any(t in stop for t in gram):
                continue
            if not any(d.words[i + k].pos in noun_verb for k in range(size)):
                continue
            count = 0
            for stream in streams:
                for j in range(len(stream) - size + 1):
                    if tuple(stream[j : j + size]) == gram:
                        count += 1
            if count >= 3:
                out.video_phrases.add(gram)
                out.video_spans.append((i, i + size))

    opens = [i for i, t in enumerate(toks) if d.words[i].text in QUOTE_TOKENS]
    for a, b in zip(opens[0::2], opens[1::2]):
        out.quoted_spans.append((a, b + 1))
    if len(opens) % 2 == 1:
        out.diagnostics.append(
            Diagnostic(
                "unbalanced-quotes",
                "unmatched quotation mark; trailing region treated as unquoted",
                f"description {d.id!r} word {opens[-1]}",
            )
        )

    for i, t in enumerate(toks):
        if any(trigger in t for trigger in ONSCREEN_TRIGGERS):
            j = i + 1
            while j < n and d.words[j].text not in SENTENCE_FINAL:
                j += 1
            if j < n:
                j += 1  # include the sentence-final mark
            if j > i + 1:
                out.onscreen_spans.append((i + 1, j))
    return out


def _subtree_hull(words, root: int) -> tuple:
    """Contiguous hull (min, max+1) of a token's dependency subtree."""
    members = {root}
    changed = True
    while changed:
        changed = False
        for i, w in enumerate(words):
            if i not in members and w.dep_head in members and w.dep_head != i:
                members.add(i)
                changed = True
    return (min(members), max(members) + 1)


def droppable_units(d: DraftDescription, protected: ProtectedPhraseSet) -> list:
    """Enumerate the deletable spans of a description.

    One unit per adjective token, one per prepositional-phrase subtree,
    and units for coordinated conjuncts: a non-initial conjunct together
    with its coordinator, and the initial conjunct together with the
    coordinator that follows it. Units touching a protected span are
    excluded; nested units are allowed.
    """
    words = d.words
    for i, w in enumerate(words):
        if w.pos is None or w.dep_head is None:
            raise AnnotationError(
                f"description {d.id!r} word {i} ({w.text!r}) lacks POS/dependency annotations"
            )

    units = []
    for i, w in enumerate(words):
        if w.pos == "ADJ":
            units.append(DropUnit(i, i + 1, ADJECTIVE))
        if w.dep_label == "prep":
            units.append(DropUnit(*_subtree_hull(words, i), PREP_PHRASE))

    conj_heads = {}
    for i, w in enumerate(words):
        if w.dep_label == "conj":
            conj_heads.setdefault(w.dep_head, []).append(i)
    cc_of = {}
    for i, w in enumerate(words):
        if w.dep_label == "cc":
            cc_of.setdefault(w.dep_head, []).append(i)

    for head, conjs in conj_heads.items():
        ccs = sorted(cc_of.get(head, []))
        conj_los = []
        for c in sorted(conjs):
            lo, hi = _subtree_hull(words, c)
            cc_before = [j for j in ccs if j < lo]
            start = max(cc_before) if cc_before else lo
            units.append(DropUnit(start, hi, COMPOUND))
            conj_los.append(lo)
        # coordinators are separable, so dropping "first conjunct + and"
        # composes from the two smaller units while spans stay nested
        for j in ccs:
            units.append(DropUnit(j, j + 1, COMPOUND))
        first_cut = min(conj_los + ccs)
        head_lo, _ = _subtree_hull(words, head)
        if head_lo < first_cut:
            units.append(DropUnit(head_lo, first_cut, COMPOUND))

    spans = protected.spans
    units = [
        u
        for u in units
        if not any(u.start < pe and ps < u.end for ps, pe in spans)
    ]

    # enforce the nested-or-disjoint invariant; wider spans win
    units.sort(key=lambda u: (u.start, -(u.end - u.start), u.kind))
    kept = []
    for u in units:
        ok = True
        for v in kept:
            disjoint = u.end <= v.start or v.end <= u.start
            nested = (v.start <= u.start and u.end <= v.end) or (
                u.start <= v.start and v.end <= u.end
            )
            if not disjoint and not nested:
                ok = False
                break
        if ok and (u.start, u.end) not in {(v.start, v.end) for v in kept}:
            kept.append(u)
    return kept


def _recorded_duration(d: DraftDescription, kept) -> float:
    spans = d.recording.alignment
    return sum(spans[i][1] - spans[i][0] for i in kept)


def _candidate_duration(d: DraftDescription, kept) -> float:
    if d.recording is not None and len(d.recording.alignment) == len(d.words):
        return _recorded_duration(d, kept)
    spoken = sum(1 for i in kept if not d.words[i].is_punct)
    return WORDS_PER_SECOND_ESTIMATE * spoken


def cut_count_of(kept, n: int) -> int:
    """Number of splice boundaries: adjacent original positions whose
    kept/dropped status differs."""
    mask = [False] * n
    for i in kept:
        mask[i] = True
    return sum(1 for i in range(n - 1) if mask[i] != mask[i + 1])


def _last_spoken_index(words) -> int:
    for i in range(len(words) - 1, -1, -1):
        if not words[i].is_punct:
            return i
    return -1


def make_candidate(d: DraftDescription, kept) -> Candidate:
    kept = tuple(sorted(kept))
    n = len(d.words)
    last = _last_spoken_index(d.words)
    return Candidate(
        description_id=d.id,
        kept_indices=kept,
        text=" ".join(d.words[i].text for i in kept),
        duration=_candidate_duration(d, kept),
        cut_count=cut_count_of(kept, n),
        drops_last_word=(last >= 0 and last not in kept),
    )


def generate_candidates(
    d: DraftDescription, units, cap: int = DEFAULT_CANDIDATE_CAP
) -> list:
    """All distinct keep-sets reachable by dropping unit subsets.

    The full original is always a member. When the distinct count
    exceeds ``cap``, the cap shortest-by-duration candidates are kept
    plus the original. Text locks restrict the set to the original.
    Candidates whose text is identical are deduplicated in favor of the
    lower cut count.
    """
    n = len(d.words)
    full = tuple(range(n))
    if d.lock_text or not units:
        return [make_candidate(d, full)]

    kept_sets = {full}
    if len(units) <= FULL_ENUMERATION_UNIT_LIMIT:
        subsets = itertools.chain.from_iterable(
            itertools.combinations(units, r) for r in range(1, len(units) + 1)
        )
        budget = float("inf")
    else:
        # too many units to enumerate fully: visit the largest drop sets
        # first so the shortest candidates are found before the cutoff
        subsets = itertools.chain.from_iterable(
            itertools.combinations(units, r) for r in range(len(units), 0, -1)
        )
        budget = max(8 * cap, 4096)
    for subset in subsets:
        dropped = set()
        for u in subset:
            dropped.update(u.indices)
        kept = tuple(i for i in range(n) if i not in dropped)
        if not any(not d.words[i].is_punct for i in kept):
            continue
        kept_sets.add(kept)
        if len(kept_sets) >= budget:
            break

    candidates = [make_candidate(d, kept) for kept in sorted(kept_sets)]

    by_text = {}
    for c in candidates:
        cur = by_text.get(c.text)
        if cur is None or (c.cut_count, c.kept_indices) < (cur.cut_count, cur.kept_indices):
            by_text[c.text] = c
    candidates = list(by_text.values())

    candidates.sort(key=lambda c: (round(c.duration * 1000), len(c.kept_indices), c.kept_indices))
    if len(candidates) > cap:
        trimmed = candidates[:cap]
        if full not in {c.kept_indices for c in trimmed}:
            trimmed.append(make_candidate(d, full))
        candidates = trimmed
    return candidates
