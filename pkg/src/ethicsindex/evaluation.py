"""Stratified k-fold splitting, random oversampling, and ranking metrics.

The cross-validation loop oversamples only the training portion of each
fold: duplicating minority rows before splitting would leak copies of
validation examples into training and inflate every score.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .base import check_binary_labels, clone

SeedLike = int | Sequence[int]


def stratified_kfold(
    labels: Sequence[int] | np.ndarray, k: int, seed: SeedLike
) -> np.ndarray:
    """Per-example fold indices; class members are shuffled then dealt round-robin.

    Within every class the per-fold counts differ by at most one, so class
    proportions are preserved as far as integer arithmetic allows.
    """
    y = check_binary_labels(labels)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(len(y), dtype=int)
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        if len(idx) < k:
            raise ValueError(
                f"class {cls} has {len(idx)} members, fewer than k={k}"
            )
        perm = rng.permutation(idx)
        fold_of[perm] = np.arange(len(perm)) % k
    return fold_of


def random_oversample(
    X: Sequence | np.ndarray, y: Sequence[int] | np.ndarray, seed: SeedLike
) -> tuple[list | np.ndarray, np.ndarray]:
    """Duplicate minority rows (uniform, with replacement) until classes balance.

    Every original row is retained and every appended row is an exact
    copy of an original; no synthetic feature values are created.
    """
    ya = check_binary_labels(y)
    n_pos = int(ya.sum())
    n_neg = len(ya) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("oversampling requires both classes")
    if n_pos == n_neg:
        return (X.copy() if isinstance(X, np.ndarray) else list(X)), ya.copy()
    minority = 1 if n_pos < n_neg else 0
    need = abs(n_neg - n_pos)
    rng = np.random.default_rng(seed)
    pool = np.flatnonzero(ya == minority)
    extra = rng.choice(pool, size=need, replace=True)
    y_out = np.concatenate([ya, np.full(need, minority, dtype=int)])
    if isinstance(X, np.ndarray):
        return np.concatenate([X, X[extra]]), y_out
    X_list = list(X)
    return X_list + [X_list[i] for i in extra], y_out


def roc_auc(
    scores: Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray
) -> float:
    """P(score+ > score-) + 0.5 * P(score+ = score-) over positive-negative pairs.

    Computed from tie-averaged ranks, which is exact: every quantity is a
    half-integer until the final division.
    """
    s = np.asarray(scores, dtype=float)
    y = check_binary_labels(labels)
    if len(s) != len(y):
        raise ValueError("scores and labels must have equal length")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC-AUC requires both classes")
    order = np.argsort(s, kind="mergesort")
    sorted_scores = s[order]
    ranks = np.empty(len(s), dtype=float)
    i = 0
    while i < len(s):
        j = i
        while j < len(s) and sorted_scores[j] == sorted_scores[i]:
            j += 1
        ranks[order[i:j]] = (i + 1 + j) / 2.0
        i = j
    rank_sum = float(ranks[y == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def precision_recall(
    predictions: Sequence[int] | np.ndarray, labels: Sequence[int] | np.ndarray
) -> tuple[float | None, float | None]:
    """(precision, recall); a metric is None when its denominator is empty."""
    pred = check_binary_labels(predictions)
    y = check_binary_labels(labels)
    if len(pred) != len(y):
        raise ValueError("predictions and labels must have equal length")
    tp = int(np.sum((pred == 1) & (y == 1)))
    fp = int(np.sum((pred == 1) & (y == 0)))
    fn = int(np.sum((pred == 0) & (y == 1)))
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    return precision, recall


@dataclass(frozen=True)
class FoldMetrics:
    fold: int
    roc_auc: float
    precision: float | None
    recall: float | None


@dataclass(frozen=True)
class MetricsReport:
    roc_auc: float
    precision: float | None
    recall: float | None
    threshold: float = 0.5
    per_fold: tuple[FoldMetrics, ...] = field(default_factory=tuple)


def _mean_or_none(values: list[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def cross_validate(
    X: Sequence | np.ndarray,
    y: Sequence[int] | np.ndarray,
    estimator,
    k: int = 4,
    seed: int = 0,
    threshold: float = 0.5,
    oversample: bool = True,
) -> MetricsReport:
    """Stratified k-fold CV; training folds are oversampled, validation never is.

    The estimator is cloned per fold, so the argument stays unfitted. The
    per-fold oversampling seed derives from (seed, fold), keeping parallel
    and sequential evaluation identical.
    """
    ya = check_binary_labels(y)
    fold_of = stratified_kfold(ya, k, seed)
    is_array = isinstance(X, np.ndarray)
    folds = []
    for fold in range(k):
        val_idx = np.flatnonzero(fold_of == fold)
        tr_idx = np.flatnonzero(fold_of != fold)
        if is_array:
            X_tr, X_val = X[tr_idx], X[val_idx]
        else:
            X_tr = [X[i] for i in tr_idx]
            X_val = [X[i] for i in val_idx]
        y_tr, y_val = ya[tr_idx], ya[val_idx]
        if oversample:
            X_tr, y_tr = random_oversample(X_tr, y_tr, seed=[seed, fold])
        model = clone(estimator).fit(X_tr, y_tr)
        probs = np.asarray(model.predict_proba(X_val), dtype=float)
        auc = roc_auc(probs, y_val)
        precision, recall = precision_recall((probs >= threshold).astype(int), y_val)
        folds.append(FoldMetrics(fold, auc, precision, recall))
    return MetricsReport(
        roc_auc=float(np.mean([f.roc_auc for f in folds])),
        precision=_mean_or_none([f.precision for f in folds]),
        recall=_mean_or_none([f.recall for f in folds]),
        threshold=threshold,
        per_fold=tuple(folds),
    )


def resubstitution_report(
    estimator, X, y, threshold: float = 0.5
) -> MetricsReport:
    """Metrics of a fitted estimator on its own training data (optimistic)."""
    ya = check_binary_labels(y)
    probs = np.asarray(estimator.predict_proba(X), dtype=float)
    precision, recall = precision_recall((probs >= threshold).astype(int), ya)
    return MetricsReport(
        roc_auc=roc_auc(probs, ya),
        precision=precision,
        recall=recall,
        threshold=threshold,
    )


def select_l1_strength(
    X,
    y,
    build: Callable[[float], object],
    grid: Sequence[float] = (0.001, 0.01, 0.1, 1.0),
    k: int = 4,
    seed: int = 0,
) -> float:
    """Pick the L1 strength with the best mean CV ROC-AUC (first wins ties)."""
    best_alpha: float | None = None
    best_auc = -np.inf
    for alpha in grid:
        report = cross_validate(X, y, build(alpha), k=k, seed=seed)
        if report.roc_auc > best_auc:
            best_alpha, best_auc = alpha, report.roc_auc
    assert best_alpha is not None
    return best_alpha


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.6f}"


def render_metrics_report(report: MetricsReport) -> str:
    """Columnar text: one row per fold plus a mean row."""
    lines = ["fold\troc_auc\tprecision\trecall"]
    for f in report.per_fold:
        lines.append(
            f"{f.fold}\t{f.roc_auc:.6f}\t{_fmt(f.precision)}\t{_fmt(f.recall)}"
        )
    lines.append(
        f"mean\t{report.roc_auc:.6f}\t{_fmt(report.precision)}\t{_fmt(report.recall)}"
    )
    return "\n".join(lines) + "\n"
