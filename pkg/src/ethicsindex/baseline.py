"""Keyword-matching ethics classifier (the prior index's method).

A document is flagged as ethics-related iff any list unigram matches a
token exactly, or the one list bigram matches two consecutive tokens.
Token-exact matching is deliberate: "lawn" must not hit "law".
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .base import Estimator
from .corpus import LabelValue
from .text import Lemmatizer, lemmatize, tokenize

RAW_KEYWORD_TERMS: tuple[str, ...] = (
    "accountability",
    "accountable",
    "employment",
    "ethic",
    "ethical",
    "ethics",
    "fool",
    "fooled",
    "fooling",
    "humane",
    "humanity",
    "law",
    "machine bias",
    "moral",
    "morality",
    "privacy",
    "racism",
    "racist",
    "responsibility",
    "rights",
    "secure",
    "security",
    "sentience",
    "sentient",
    "society",
    "sustainability",
    "unemployment",
    "workforce",
)

LEMMA_KEYWORD_TERMS: tuple[str, ...] = (
    "accountability",
    "accountable",
    "employment",
    "ethic",
    "ethical",
    "fool",
    "humane",
    "humanity",
    "law",
    "machine bias",
    "moral",
    "morality",
    "privacy",
    "racism",
    "racist",
    "responsibility",
    "right",
    "secure",
    "security",
    "sentience",
    "sentient",
    "society",
    "sustainability",
    "unemployment",
    "workforce",
)


@dataclass(frozen=True)
class KeywordList:
    unigrams: frozenset[str]
    bigrams: frozenset[tuple[str, str]]
    mode: str  # "raw" or "lemmatized"

    @classmethod
    def from_terms(cls, terms: Iterable[str], mode: str) -> "KeywordList":
        if mode not in ("raw", "lemmatized"):
            raise ValueError(f"unknown keyword mode {mode!r}")
        unigrams = set()
        bigrams = set()
        for term in terms:
            parts = term.lower().split()
            if len(parts) == 1:
                unigrams.add(parts[0])
            elif len(parts) == 2:
                bigrams.add((parts[0], parts[1]))
            else:
                raise ValueError(f"keyword {term!r} has more than two words")
        return cls(frozenset(unigrams), frozenset(bigrams), mode)


def raw_keyword_list() -> KeywordList:
    return KeywordList.from_terms(RAW_KEYWORD_TERMS, "raw")


def lemma_keyword_list() -> KeywordList:
    return KeywordList.from_terms(LEMMA_KEYWORD_TERMS, "lemmatized")


def load_keyword_list(path: str | Path, mode: str) -> KeywordList:
    """One term per line; a bigram is written with an internal space."""
    terms = [
        line.strip()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    return KeywordList.from_terms(terms, mode)


def keyword_classify(
    text: str, keywords: KeywordList, lemmatizer: Lemmatizer | None = None
) -> LabelValue:
    """Ethics iff a unigram matches a token or a bigram matches adjacent tokens."""
    tokens = tokenize(text)
    if keywords.mode == "lemmatized":
        lem = lemmatizer or lemmatize
        tokens = [lem(t) for t in tokens]
    if any(t in keywords.unigrams for t in tokens):
        return LabelValue.ETHICS
    if keywords.bigrams:
        for first, second in zip(tokens, tokens[1:]):
            if (first, second) in keywords.bigrams:
                return LabelValue.ETHICS
    return LabelValue.NOT_ETHICS


class KeywordClassifier(Estimator):
    """Estimator wrapper so the baseline scores through the same CV machinery.

    predict_proba emits {0.0, 1.0}: the method is a hard decision rule,
    and ROC-AUC over those values is exactly what the comparison needs.
    """

    def __init__(self, mode: str = "raw", terms: tuple[str, ...] | None = None):
        self.mode = mode
        self.terms = terms
        self.keywords_: KeywordList | None = None

    def _keywords(self) -> KeywordList:
        if self.keywords_ is None:
            if self.terms is not None:
                self.keywords_ = KeywordList.from_terms(self.terms, self.mode)
            elif self.mode == "lemmatized":
                self.keywords_ = lemma_keyword_list()
            else:
                self.keywords_ = raw_keyword_list()
        return self.keywords_

    def fit(self, X: object = None, y: object = None) -> "KeywordClassifier":
        self._keywords()
        return self

    def predict(self, texts: Sequence[str]) -> np.ndarray:
        kws = self._keywords()
        return np.array(
            [keyword_classify(t, kws).to_int() for t in texts], dtype=int
        )

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        return self.predict(texts).astype(float)
