"""L1-penalized logistic regression trained by proximal gradient descent.

Minimizes mean logistic loss plus an L1 penalty on the weights (the
intercept is never penalized) with full-batch ISTA steps and a
backtracking line search, so the penalized objective is nonincreasing
across accepted iterations and training is deterministic for a fixed
input.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .base import Estimator, as_dense, check_fitted, check_X_y
from .text import Vocabulary

_STEP_GROWTH = 2.0
_MIN_STEP = 1e-18


def soft_threshold(x: float | np.ndarray, t: float) -> float | np.ndarray:
    """Proximal operator of t*|.|: sign(x) * max(|x| - t, 0)."""
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss_grad(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray
) -> tuple[float, np.ndarray, float]:
    """Mean logistic loss and its gradient in (w, b) — the smooth part only."""
    z = X @ w + b
    # log(1 + e^z) - y*z, evaluated stably
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    residual = _sigmoid(z) - y
    grad_w = X.T @ residual / X.shape[0]
    grad_b = float(np.mean(residual))
    return loss, grad_w, grad_b


class LogisticRegressionL1(Estimator):
    """Binary logistic regression with an L1 penalty on the weights.

    Parameters
    ----------
    alpha : nonnegative L1 strength (the lambda of the penalized objective).
    max_iters : iteration cap for the proximal gradient loop.
    tol : stop when the max absolute parameter change falls below this.
    seed : accepted for interface parity; training is full-batch and
        deterministic, so the seed is never consumed.
    """

    def __init__(
        self,
        alpha: float = 0.01,
        max_iters: int = 5000,
        tol: float = 1e-6,
        seed: int = 0,
    ):
        self.alpha = alpha
        self.max_iters = max_iters
        self.tol = tol
        self.seed = seed
        self.weights_: np.ndarray | None = None
        self.intercept_: float | None = None
        self.n_features_: int | None = None
        self.n_iter_: int | None = None
        self.converged_: bool | None = None
        self.objective_history_: list[float] | None = None

    def _objective(self, loss: float, w: np.ndarray) -> float:
        return loss + self.alpha * float(np.sum(np.abs(w)))

    def fit(
        self,
        X: Sequence[dict[int, float]] | np.ndarray,
        y: Sequence[int] | np.ndarray,
        n_features: int | None = None,
    ) -> "LogisticRegressionL1":
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        Xd, ya = check_X_y(X, y, n_features=n_features, require_both_classes=True)
        if Xd.shape[0] < 2:
            raise ValueError("need at least two training rows")
        n, d = Xd.shape
        yf = ya.astype(float)

        w = np.zeros(d)
        b = 0.0
        loss, gw, gb = logistic_loss_grad(w, b, Xd, yf)
        history = [self._objective(loss, w)]
        step = 1.0
        converged = False
        it = 0
        for it in range(1, self.max_iters + 1):
            step = min(step * _STEP_GROWTH, 1e8)
            while True:
                w_new = soft_threshold(w - step * gw, step * self.alpha)
                b_new = b - step * gb
                dw = w_new - w
                db = b_new - b
                quad = float(dw @ dw + db * db)
                loss_new = logistic_loss_grad(w_new, b_new, Xd, yf)[0]
                bound = loss + float(gw @ dw) + gb * db + quad / (2.0 * step)
                if loss_new <= bound or step <= _MIN_STEP:
                    break
                step *= 0.5
            delta = max(
                float(np.max(np.abs(dw))) if d else 0.0, abs(db)
            )
            w, b = w_new, b_new
            loss, gw, gb = logistic_loss_grad(w, b, Xd, yf)
            history.append(self._objective(loss, w))
            if delta < self.tol:
                converged = True
                break

        self.weights_ = w
        self.intercept_ = float(b)
        self.n_features_ = d
        self.n_iter_ = it
        self.converged_ = converged
        self.objective_history_ = history
        return self

    def decision_function(
        self, X: Sequence[dict[int, float]] | np.ndarray
    ) -> np.ndarray:
        check_fitted(self, "weights_", "intercept_")
        Xd = as_dense(X, n_features=self.n_features_)
        return Xd @ self.weights_ + self.intercept_

    def predict_proba(
        self, X: Sequence[dict[int, float]] | np.ndarray
    ) -> np.ndarray:
        return _sigmoid(self.decision_function(X))

    def predict(self, X, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(int)


def predict_proba_one(model: LogisticRegressionL1, x: dict[int, float]) -> float:
    """Probability for a single sparse row."""
    return float(model.predict_proba([x])[0])


def extract_signed_keywords(
    model: LogisticRegressionL1, vocab: Vocabulary
) -> tuple[list[str], list[str]]:
    """Vocabulary terms split by weight sign, strongest first; zeros omitted."""
    check_fitted(model, "weights_")
    if len(vocab) != len(model.weights_):
        raise ValueError(
            f"model has {len(model.weights_)} weights but vocabulary has {len(vocab)} terms"
        )
    terms = vocab.terms()
    w = model.weights_
    positives = sorted(
        (t for t, wt in zip(terms, w) if wt > 0),
        key=lambda t: (-w[vocab.term_index[t]], t),
    )
    negatives = sorted(
        (t for t, wt in zip(terms, w) if wt < 0),
        key=lambda t: (w[vocab.term_index[t]], t),
    )
    return positives, negatives


def save_logistic(
    model: LogisticRegressionL1, vocab: Vocabulary, path: str | Path
) -> None:
    """Write lambda, intercept, and the nonzero (term, weight) pairs."""
    check_fitted(model, "weights_", "intercept_")
    if len(vocab) != len(model.weights_):
        raise ValueError("model/vocabulary dimension mismatch")
    lines = [
        "logistic-model v1",
        f"lambda\t{model.alpha!r}",
        f"intercept\t{model.intercept_!r}",
    ]
    terms = vocab.terms()
    for idx, weight in enumerate(model.weights_):
        if weight != 0.0:
            lines.append(f"{terms[idx]}\t{float(weight)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_logistic(path: str | Path, vocab: Vocabulary) -> LogisticRegressionL1:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "logistic-model v1":
        raise ValueError(f"{path}: not a logistic model file")
    alpha = float(lines[1].split("\t")[1])
    intercept = float(lines[2].split("\t")[1])
    weights = np.zeros(len(vocab))
    for line in lines[3:]:
        if not line:
            continue
        term, weight = line.split("\t")
        if term not in vocab.term_index:
            raise ValueError(f"{path}: term {term!r} not in vocabulary")
        weights[vocab.term_index[term]] = float(weight)
    model = LogisticRegressionL1(alpha=alpha)
    model.weights_ = weights
    model.intercept_ = intercept
    model.n_features_ = len(vocab)
    return model
