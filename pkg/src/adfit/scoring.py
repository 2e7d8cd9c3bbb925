"""Candidate cost model: coherence, informativeness and edit quality.

The weighted candidate cost is

    cost = w_coh * coherence + w_info * informativeness + w_edit * edit

with default weights (1, 500, 10). Coherence comes from a pluggable
language-model scorer; the shipped fallback is an interpolated word
bigram model with add-k smoothing trained on the project transcript,
the draft descriptions and a small bundled general corpus, reporting
average per-token negative log2 probability (lower = more fluent).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

from .candidates import Candidate
from .model import Project

LAST_WORD_PENALTY = 20
SENTENCE_START = "<s>"
SENTENCE_END = "</s>"
UNKNOWN = "<unk>"

NOUNISH_TAGS = {"NOUN", "PROPN", "PRON"}


class LanguageModelScorer(Protocol):
    def score(self, tokens) -> float:
        """Average negative log-likelihood of the token sequence."""
        ...


def tokenize(text: str) -> list:
    """LM tokenization: lowercase; punctuation arrives as its own tokens
    because candidate text keeps punctuation words separate."""
    return [t.lower() for t in text.split()]


class BigramModel:
    """Interpolated bigram/unigram model with add-k smoothing.

    Trained once over a list of token sequences; immutable afterwards.
    Scores are average per-token -log2 P(w_i | w_{i-1}) with a sentence
    start marker as the first context; the end marker participates in
    training only.
    """

    def __init__(self, sentences, k: float = 0.1, bigram_weight: float = 0.7):
        self.k = k
        self.bigram_weight = bigram_weight
        self.bigram_counts = {}
        self.context_counts = {}
        self.outcome_counts = {}
        total = 0
        for sent in sentences:
            toks = [SENTENCE_START] + [t.lower() for t in sent] + [SENTENCE_END]
            for prev, cur in zip(toks, toks[1:]):
                self.bigram_counts[(prev, cur)] = self.bigram_counts.get((prev, cur), 0) + 1
                self.context_counts[prev] = self.context_counts.get(prev, 0) + 1
                self.outcome_counts[cur] = self.outcome_counts.get(cur, 0) + 1
                total += 1
        self.total_outcomes = total
        self.vocab = set(self.outcome_counts) | {UNKNOWN}

    def _prob(self, prev: str, cur: str) -> float:
        if cur not in self.vocab:
            cur = UNKNOWN
        if prev not in self.context_counts and prev not in self.vocab:
            prev = UNKNOWN
        v = len(self.vocab)
        k = self.k
        p_bi = (self.bigram_counts.get((prev, cur), 0) + k) / (
            self.context_counts.get(prev, 0) + k * v
        )
        p_uni = (self.outcome_counts.get(cur, 0) + k) / (self.total_outcomes + k * v)
        return self.bigram_weight * p_bi + (1.0 - self.bigram_weight) * p_uni

    def score(self, tokens) -> float:
        if not tokens:
            raise ValueError("cannot score an empty token sequence")
        toks = [t.lower() for t in tokens]
        nll = 0.0
        prev = SENTENCE_START
        for cur in toks:
            nll += -math.log2(self._prob(prev, cur))
            prev = cur
        return nll / len(toks)


class OverrideScorer:
    """Wraps a scorer with precomputed per-candidate coherence values
    (e.g., scores from an external large language model shipped in the
    project file), keyed by candidate text."""

    def __init__(self, base: LanguageModelScorer, overrides: dict):
        self.base = base
        self.overrides = dict(overrides)

    def score_text(self, text: str) -> float:
        if text in self.overrides:
            return float(self.overrides[text])
        return self.base.score(tokenize(text))


@dataclass(frozen=True)
class CorpusFrequencyTable:
    """Word -> log probability in a general corpus (natural log, <= 0)."""

    log_probs: dict
    oov_log_prob: float

    def __post_init__(self):
        bad = {w: p for w, p in self.log_probs.items() if p > 0}
        if bad:
            raise ValueError(f"log probabilities must be <= 0, got {bad}")
        if self.log_probs and self.oov_log_prob > min(self.log_probs.values()):
            raise ValueError("OOV log probability must not exceed the rarest stored word")

    def surprisal(self, word: str) -> float:
        return -self.log_probs.get(word.lower(), self.oov_log_prob)


def load_frequency_table(path) -> CorpusFrequencyTable:
    probs = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            word, logp = line.split("\t")
            probs[word.lower()] = float(logp)
    oov = min(probs.values()) - 1.0 if probs else -20.0
    return CorpusFrequencyTable(log_probs=probs, oov_log_prob=oov)


@dataclass(frozen=True)
class CostBreakdown:
    coherence: float
    informativeness: float
    edit: float
    weighted_total: float


def coherence_cost(c: Candidate, lm) -> float:
    if not c.text.strip():
        raise ValueError(
            f"candidate of description {c.description_id!r} is empty; "
            "empty candidates are modeled as skips, not scored"
        )
    if hasattr(lm, "score_text"):
        return lm.score_text(c.text)
    return lm.score(tokenize(c.text))


def _occurrence_counts(project: Project) -> dict:
    counts = {}
    for w in project.transcript:
        t = w.text.lower()
        counts[t] = counts.get(t, 0) + 1
    for d in project.descriptions:
        for w in d.words:
            t = w.text.lower()
            counts[t] = counts.get(t, 0) + 1
    return counts


def informativeness_cost(
    c: Candidate,
    project: Project,
    freq: CorpusFrequencyTable,
    glossary=(),
    description=None,
    ceiling: float = 2.0,
    occurrence_counts=None,
) -> float:
    """Reciprocal of the importance of the candidate's kept nouns.

    Importance of a kept noun/pronoun = (occurrences across transcript +
    all draft descriptions) * corpus surprisal, summed and divided by the
    number of kept spoken words; single-word film terms are ignored.
    Candidates with no scoring nouns get the configured ceiling.
    """
    if description is None:
        description = project.description(c.description_id)
    counts = occurrence_counts if occurrence_counts is not None else _occurrence_counts(project)
    film_single = {g.lower() for g in glossary if " " not in g.strip()}

    total = 0.0
    kept_words = 0
    for i in c.kept_indices:
        w = description.words[i]
        if w.is_punct:
            continue
        kept_words += 1
        t = w.text.lower()
        if w.pos in NOUNISH_TAGS and t not in film_single:
            total += counts.get(t, 0) * freq.surprisal(t)
    if kept_words == 0 or total <= 0.0:
        return ceiling
    score = total / kept_words
    return min(1.0 / score, ceiling)


def edit_cost(c: Candidate) -> float:
    """Splice-count penalty plus the last-word surcharge."""
    return float(c.cut_count + (LAST_WORD_PENALTY if c.drops_last_word else 0))


def candidate_cost(
    c: Candidate,
    config,
    lm,
    freq: CorpusFrequencyTable,
    project: Project,
    glossary=(),
    description=None,
    occurrence_counts=None,
) -> CostBreakdown:
    coh = coherence_cost(c, lm)
    info = informativeness_cost(
        c,
        project,
        freq,
        glossary=glossary,
        description=description,
        ceiling=config.info_cost_ceiling,
        occurrence_counts=occurrence_counts,
    )
    edit = edit_cost(c)
    total = config.w_coh * coh + config.w_info * info + config.w_edit * edit
    return CostBreakdown(coherence=coh, informativeness=info, edit=edit, weighted_total=total)


def sentences_from_words(words) -> list:
    """Split a token stream into sentences on sentence-final punctuation."""
    sentences = []
    cur = []
    for w in words:
        cur.append(w.text)
        if w.text in {".", "!", "?"}:
            sentences.append(cur)
            cur = []
    if cur:
        sentences.append(cur)
    return sentences


def build_fallback_model(project: Project, general_corpus_sentences) -> BigramModel:
    """Train the shipped bigram scorer on transcript + drafts + the
    bundled general corpus."""
    sentences = []
    sentences += sentences_from_words(project.transcript)
    for d in project.descriptions:
        sentences += sentences_from_words(d.words)
    sentences += [list(s) for s in general_corpus_sentences]
    return BigramModel(sentences)
