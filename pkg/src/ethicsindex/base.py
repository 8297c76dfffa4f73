"""Estimator plumbing shared by the vectorizer and the classifiers.

Mirrors the scikit-learn conventions just enough for the pieces here to
compose with each other (and with generic tooling): constructor arguments
are hyperparameters, ``get_params``/``set_params`` expose them, fitted
state lives in trailing-underscore attributes, and ``clone`` produces an
unfitted copy.
"""

from __future__ import annotations

import inspect
from typing import Any, Mapping, Sequence

import numpy as np


class NotFittedError(RuntimeError):
    """Raised when transform/predict is called before fit."""


class Estimator:
    """Base class for the fit/transform/predict objects in this package."""

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [
            p.name
            for p in sig.parameters.values()
            if p.name != "self"
            and p.kind in (p.POSITIONAL_OR_KEYWORD, p.KEYWORD_ONLY)
        ]

    def get_params(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params: Any) -> "Estimator":
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(
                    f"unknown parameter {key!r} for {type(self).__name__}"
                )
            setattr(self, key, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def clone(estimator: Estimator) -> Estimator:
    """Return an unfitted copy with the same hyperparameters."""
    return type(estimator)(**estimator.get_params())


def check_fitted(estimator: Estimator, *attributes: str) -> None:
    for attr in attributes:
        if getattr(estimator, attr, None) is None:
            raise NotFittedError(
                f"{type(estimator).__name__} is not fitted; call fit() first"
                f" (missing {attr})"
            )


def as_dense(X: Any, n_features: int | None = None) -> np.ndarray:
    """Coerce a feature batch to a 2-D float array.

    Accepts an ndarray, a sequence of rows, or a sequence of sparse
    index->value mappings. Sparse rows require ``n_features`` so that
    absent trailing columns are not silently dropped.
    """
    if isinstance(X, np.ndarray):
        arr = np.asarray(X, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        return arr
    rows = list(X)
    if rows and isinstance(rows[0], Mapping):
        if n_features is None:
            n_features = 1 + max(
                (max(r.keys(), default=-1) for r in rows), default=-1
            )
        out = np.zeros((len(rows), n_features), dtype=float)
        for i, row in enumerate(rows):
            for j, value in row.items():
                if not 0 <= j < n_features:
                    raise ValueError(
                        f"feature index {j} out of range for {n_features} features"
                    )
                out[i, j] = value
        return out
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(len(rows), -1) if len(rows) else arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"expected row-shaped input, got shape {arr.shape}")
    return arr


def check_binary_labels(y: Sequence[int] | np.ndarray) -> np.ndarray:
    """Validate a 0/1 label vector and return it as an int array."""
    arr = np.asarray(y, dtype=int)
    if arr.ndim != 1:
        raise ValueError("labels must be a 1-D sequence")
    bad = set(np.unique(arr)) - {0, 1}
    if bad:
        raise ValueError(f"labels must be 0/1, found {sorted(bad)}")
    return arr


def check_X_y(
    X: Any,
    y: Sequence[int] | np.ndarray,
    *,
    n_features: int | None = None,
    require_both_classes: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    Xd = as_dense(X, n_features=n_features)
    ya = check_binary_labels(y)
    if Xd.shape[0] != ya.shape[0]:
        raise ValueError(
            f"X has {Xd.shape[0]} rows but y has {ya.shape[0]} labels"
        )
    if require_both_classes and len(np.unique(ya)) < 2:
        raise ValueError("training data must contain both classes")
    return Xd, ya
