"""Loaders for the bundled data files (glossary, stop words, general
corpus, corpus frequency table)."""
from __future__ import annotations

from pathlib import Path

from .candidates import load_term_file
from .scoring import CorpusFrequencyTable, load_frequency_table

DATA_DIR = Path(__file__).parent / "data"


def default_glossary() -> list:
    return load_term_file(DATA_DIR / "film_glossary.txt")


def default_stopwords() -> list:
    return load_term_file(DATA_DIR / "stopwords.txt")


def general_corpus_sentences(path=None) -> list:
    path = Path(path) if path else DATA_DIR / "general_corpus.txt"
    sentences = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            sentences.append(line.split())
    return sentences


def default_frequency_table() -> CorpusFrequencyTable:
    return load_frequency_table(DATA_DIR / "word_logprob.tsv")
