"""End-to-end text classifier: TF-IDF vectorizer feeding a seeded model.

A fitted pipeline persists as a small directory — vocabulary, model
coefficients/trees, and a manifest naming the model kind — so a trained
classifier can be reloaded for scoring, uncertainty selection, and index
reports without retraining.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .base import Estimator, check_fitted, clone
from .forest import RandomForest, load_forest, save_forest
from .linear import LogisticRegressionL1, load_logistic, save_logistic
from .text import TfidfVectorizer, load_vocabulary, save_vocabulary

_MANIFEST = "manifest.json"
_VOCAB_FILE = "vocabulary.tsv"
_MODEL_FILES = {"forest": "forest.txt", "logistic": "logistic.tsv"}


class TextClassifier(Estimator):
    """Vectorize texts and classify them with one estimator.

    fit() clones both parts, so the constructor arguments are reusable
    specs rather than mutable state.
    """

    def __init__(self, vectorizer=None, classifier=None):
        self.vectorizer = vectorizer
        self.classifier = classifier
        self.vectorizer_: TfidfVectorizer | None = None
        self.classifier_ = None

    def fit(self, texts: Sequence[str], y) -> "TextClassifier":
        self.vectorizer_ = clone(self.vectorizer or TfidfVectorizer())
        self.vectorizer_.fit(texts)
        X = self.vectorizer_.transform(texts)
        self.classifier_ = clone(self.classifier or RandomForest())
        self.classifier_.fit(X, y, n_features=len(self.vectorizer_.vocabulary_))
        return self

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        check_fitted(self, "vectorizer_", "classifier_")
        X = self.vectorizer_.transform(texts)
        return self.classifier_.predict_proba(X)

    def predict(self, texts: Sequence[str], threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(texts) >= threshold).astype(int)


def make_classifier(kind: str, seed: int = 0, **overrides) -> TextClassifier:
    """Pipeline with the stock configuration for "forest" or "logistic"."""
    if kind == "forest":
        params = {"n_estimators": 512, "max_depth": 8, "seed": seed}
        params.update(overrides)
        return TextClassifier(TfidfVectorizer(), RandomForest(**params))
    if kind == "logistic":
        params = {"alpha": 0.01, "seed": seed}
        params.update(overrides)
        return TextClassifier(TfidfVectorizer(), LogisticRegressionL1(**params))
    raise ValueError(f"unknown model kind {kind!r} (expected forest or logistic)")


def model_kind(pipe: TextClassifier) -> str:
    classifier = pipe.classifier_ if pipe.classifier_ is not None else pipe.classifier
    if isinstance(classifier, RandomForest):
        return "forest"
    if isinstance(classifier, LogisticRegressionL1):
        return "logistic"
    raise ValueError(f"unsupported classifier {type(classifier).__name__}")


def save_pipeline(pipe: TextClassifier, directory: str | Path) -> None:
    check_fitted(pipe, "vectorizer_", "classifier_")
    kind = model_kind(pipe)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / _MANIFEST).write_text(
        json.dumps({"kind": kind, "format": 1}, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    save_vocabulary(pipe.vectorizer_.vocabulary_, directory / _VOCAB_FILE)
    if kind == "forest":
        save_forest(pipe.classifier_, directory / _MODEL_FILES[kind])
    else:
        save_logistic(
            pipe.classifier_, pipe.vectorizer_.vocabulary_, directory / _MODEL_FILES[kind]
        )


def load_pipeline(directory: str | Path) -> TextClassifier:
    directory = Path(directory)
    manifest = json.loads((directory / _MANIFEST).read_text(encoding="utf-8"))
    kind = manifest["kind"]
    vocab = load_vocabulary(directory / _VOCAB_FILE)
    vectorizer = TfidfVectorizer()
    vectorizer.vocabulary_ = vocab
    if kind == "forest":
        classifier = load_forest(directory / _MODEL_FILES[kind])
    elif kind == "logistic":
        classifier = load_logistic(directory / _MODEL_FILES[kind], vocab)
    else:
        raise ValueError(f"{directory}: unknown model kind {kind!r}")
    pipe = TextClassifier()
    pipe.vectorizer_ = vectorizer
    pipe.classifier_ = classifier
    return pipe
