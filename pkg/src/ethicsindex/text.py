"""Tokenization, rule-based lemmatization, and L1-normalized TF-IDF.

Documents become sparse vectors in three steps: lowercase alphanumeric
tokens of length >= 2, lemmas via a small exception dictionary plus
ordered suffix rules, then term counts scaled by smoothed IDF and
L1-normalized so every nonempty vector sums to one in absolute value.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .base import Estimator, check_fitted

SparseVector = dict[int, float]

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Irregular forms plus words the suffix rules would mangle (final "s"
# that is not a plural, lemmas the corpus needs kept intact).
_LEMMA_EXCEPTIONS: dict[str, str] = {
    "data": "datum",
    "media": "medium",
    "ethics": "ethic",
    "fooled": "fool",
    "fooling": "fool",
    "morality": "morality",
    "rights": "right",
    "using": "use",
    "uses": "use",
    "used": "use",
    "bias": "bias",
    "biases": "bias",
    "analysis": "analysis",
    "analyses": "analysis",
    "basis": "basis",
    "thesis": "thesis",
    "this": "this",
    "these": "these",
    "thus": "thus",
    "is": "is",
    "its": "its",
    "was": "was",
    "has": "has",
    "does": "does",
    "as": "as",
    "us": "us",
    "his": "his",
    "news": "news",
    "series": "series",
    "species": "species",
}

_VOWELS = set("aeiou")


def tokenize(text: str) -> list[str]:
    """Lowercased maximal alphanumeric runs of length >= 2, in order."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2]


def _undouble(stem: str) -> str:
    # stopped -> stop, running -> run; keep inherent doubles (fall, press, buzz)
    if (
        len(stem) >= 2
        and stem[-1] == stem[-2]
        and stem[-1] not in _VOWELS
        and stem[-1] not in "lsz"
    ):
        return stem[:-1]
    return stem


class Lemmatizer:
    """Exception dictionary first, then suffix rules, iterated to a fixpoint.

    Iterating until no rule applies makes the map idempotent by
    construction: the output is always a fixpoint, so feeding a lemma
    back in returns it unchanged.
    """

    def __init__(self, extra_exceptions: Mapping[str, str] | None = None):
        self.extra_exceptions = dict(extra_exceptions) if extra_exceptions else None
        self._exceptions = dict(_LEMMA_EXCEPTIONS)
        if extra_exceptions:
            self._exceptions.update(extra_exceptions)

    def _step(self, form: str) -> str:
        exc = self._exceptions.get(form)
        if exc is not None:
            return exc
        if form.endswith("ies") and len(form) > 4:
            return form[:-3] + "y"
        if form.endswith("ing") and len(form) >= 5:
            return _undouble(form[:-3])
        if form.endswith("ed") and len(form) >= 4 and not form.endswith("eed"):
            return _undouble(form[:-2])
        if form.endswith("s") and not form.endswith("ss") and len(form) >= 3:
            return form[:-1]
        return form

    def __call__(self, token: str) -> str:
        form = token
        while True:
            nxt = self._step(form)
            if nxt == form:
                return form
            form = nxt


DEFAULT_LEMMATIZER = Lemmatizer()


def lemmatize(token: str) -> str:
    """Lemmatize one lowercase token with the default rule set."""
    return DEFAULT_LEMMATIZER(token)


def lemmas_of(
    text: str,
    lemmatizer: Lemmatizer | None = None,
    stopwords: frozenset[str] | None = None,
) -> list[str]:
    lem = lemmatizer or DEFAULT_LEMMATIZER
    tokens = tokenize(text)
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    return [lem(t) for t in tokens]


@dataclass(frozen=True)
class Vocabulary:
    """Fitted term->column mapping with document frequencies and IDF weights."""

    term_index: dict[str, int]
    df: np.ndarray
    idf: np.ndarray
    n_docs: int

    def __len__(self) -> int:
        return len(self.term_index)

    def terms(self) -> list[str]:
        out = [""] * len(self.term_index)
        for term, idx in self.term_index.items():
            out[idx] = term
        return out


def _smoothed_idf(n_docs: int, df: np.ndarray) -> np.ndarray:
    return np.log((1.0 + n_docs) / (1.0 + df)) + 1.0


def fit_vocabulary(
    corpus: Sequence[str],
    min_df: int = 1,
    lemmatizer: Lemmatizer | None = None,
    stopwords: frozenset[str] | None = None,
) -> Vocabulary:
    """Build a vocabulary over lemmas with document frequency >= min_df.

    Column order is first-occurrence order over the corpus scan, which
    keeps fitting deterministic for a fixed input sequence.
    """
    if not corpus:
        raise ValueError("cannot fit a vocabulary on an empty corpus")
    order: dict[str, int] = {}
    df_count: Counter[str] = Counter()
    for text in corpus:
        doc_lemmas = lemmas_of(text, lemmatizer, stopwords)
        for lemma in doc_lemmas:
            if lemma not in order:
                order[lemma] = len(order)
        df_count.update(set(doc_lemmas))
    kept = [t for t in order if df_count[t] >= min_df]
    term_index = {t: i for i, t in enumerate(kept)}
    df = np.array([df_count[t] for t in kept], dtype=int)
    return Vocabulary(
        term_index=term_index,
        df=df,
        idf=_smoothed_idf(len(corpus), df),
        n_docs=len(corpus),
    )


def vectorize(
    text: str,
    vocab: Vocabulary,
    lemmatizer: Lemmatizer | None = None,
    stopwords: frozenset[str] | None = None,
) -> SparseVector:
    """Counts of in-vocabulary lemmas, scaled by IDF, then L1-normalized."""
    counts = Counter(lemmas_of(text, lemmatizer, stopwords))
    entries = {
        vocab.term_index[t]: c * float(vocab.idf[vocab.term_index[t]])
        for t, c in counts.items()
        if t in vocab.term_index
    }
    # accumulate in column order so reordered input text yields identical floats
    total = sum(abs(entries[i]) for i in sorted(entries))
    if total > 0:
        return {i: entries[i] / total for i in sorted(entries)}
    return {}


class TfidfVectorizer(Estimator):
    """Sparse TF-IDF transformer over lemmatized bag-of-words.

    No stopword removal happens unless a stopword set is passed
    explicitly; ubiquitous terms are kept and merely down-weighted by the
    smoothed IDF, which is strictly positive.
    """

    def __init__(
        self,
        min_df: int = 1,
        stopwords: frozenset[str] | None = None,
        lemmatizer: Lemmatizer | None = None,
    ):
        self.min_df = min_df
        self.stopwords = stopwords
        self.lemmatizer = lemmatizer
        self.vocabulary_: Vocabulary | None = None

    def fit(self, texts: Sequence[str], y: object = None) -> "TfidfVectorizer":
        self.vocabulary_ = fit_vocabulary(
            texts, self.min_df, self.lemmatizer, self.stopwords
        )
        return self

    def transform(self, texts: Iterable[str]) -> list[SparseVector]:
        check_fitted(self, "vocabulary_")
        return [
            vectorize(t, self.vocabulary_, self.lemmatizer, self.stopwords)
            for t in texts
        ]

    def fit_transform(self, texts: Sequence[str], y: object = None) -> list[SparseVector]:
        return self.fit(texts).transform(texts)

    def transform_one(self, text: str) -> SparseVector:
        check_fitted(self, "vocabulary_")
        return vectorize(text, self.vocabulary_, self.lemmatizer, self.stopwords)


def save_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    """Write term/index/df/idf columns as tab-separated text, by column order."""
    lines = [f"# n_docs {vocab.n_docs}", "term\tindex\tdf\tidf"]
    terms = vocab.terms()
    for idx, term in enumerate(terms):
        lines.append(f"{term}\t{idx}\t{int(vocab.df[idx])}\t{float(vocab.idf[idx])!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_vocabulary(path: str | Path) -> Vocabulary:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# n_docs "):
        raise ValueError(f"{path}: not a vocabulary file")
    n_docs = int(lines[0].split()[-1])
    term_index: dict[str, int] = {}
    df: list[int] = []
    idf: list[float] = []
    for line in lines[2:]:
        if not line:
            continue
        term, idx, d, w = line.split("\t")
        term_index[term] = int(idx)
        df.append(int(d))
        idf.append(float(w))
    return Vocabulary(
        term_index=term_index,
        df=np.array(df, dtype=int),
        idf=np.array(idf, dtype=float),
        n_docs=n_docs,
    )
