"""Seeded random forest: bootstrap resampling, random feature subsets, Gini splits.

Tree i draws everything from its own generator seeded with ``seed + i``,
so a forest is bit-for-bit reproducible and parallel training yields the
same model as sequential training. Probabilities are the arithmetic mean
of per-tree leaf class fractions, which gives the fine granularity the
active-learning band needs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, Union

import numpy as np

from .base import Estimator, as_dense, check_fitted, check_X_y


@dataclass(frozen=True)
class Leaf:
    positive_fraction: float
    n_samples: int


@dataclass(frozen=True)
class Internal:
    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Internal]


def gini(counts: Sequence[int] | np.ndarray) -> float:
    """Gini impurity 1 - sum((c_i/n)^2) of per-class counts."""
    arr = np.asarray(counts, dtype=float)
    n = arr.sum()
    if n <= 0:
        raise ValueError("gini requires at least one sample")
    p = arr / n
    return float(1.0 - np.sum(p * p))


def _binary_gini(pos: np.ndarray, n: np.ndarray) -> np.ndarray:
    p = pos / n
    q = 1.0 - p
    return 1.0 - p * p - q * q


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    rows: np.ndarray,
    features: Sequence[int],
) -> tuple[int, float, float] | None:
    """Exhaustive search over candidate features and value midpoints.

    Returns (feature, threshold, impurity_decrease) for the split that
    maximizes the Gini decrease, or None when nothing improves. Ties go
    to the lowest feature index, then the lowest threshold, which the
    ascending scan order delivers with strict improvement comparisons.
    """
    y_node = y[rows]
    n = len(rows)
    pos_total = int(y_node.sum())
    if pos_total == 0 or pos_total == n:
        return None
    parent = _binary_gini(np.array([pos_total], float), np.array([n], float))[0]
    best: tuple[int, float, float] | None = None
    for f in features:
        v = X[rows, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        ys = y_node[order]
        boundary = np.nonzero(vs[:-1] < vs[1:])[0]
        if boundary.size == 0:
            continue
        n_left = (boundary + 1).astype(float)
        n_right = n - n_left
        pos_left = np.cumsum(ys)[boundary].astype(float)
        pos_right = pos_total - pos_left
        weighted = (
            n_left * _binary_gini(pos_left, n_left)
            + n_right * _binary_gini(pos_right, n_right)
        ) / n
        decrease = parent - weighted
        j = int(np.argmax(decrease))
        if decrease[j] > 0.0 and (best is None or decrease[j] > best[2]):
            lo, hi = vs[boundary[j]], vs[boundary[j] + 1]
            threshold = (lo + hi) / 2.0
            if threshold >= hi:  # ulp-close values: midpoint rounded onto hi
                threshold = lo
            best = (int(f), float(threshold), float(decrease[j]))
    return best


def _n_candidate_features(rule: str | int, d: int) -> int:
    if rule == "sqrt":
        return min(d, math.isqrt(d) + (0 if math.isqrt(d) ** 2 == d else 1))
    if rule == "all":
        return d
    if isinstance(rule, int) and rule >= 1:
        return min(d, rule)
    raise ValueError(f"invalid features_per_split rule: {rule!r}")


class RandomForest(Estimator):
    """Random forest classifier for binary labels over sparse or dense rows.

    Missing sparse entries compare as 0.0; rows with value <= threshold go
    left. ``max_depth=None`` removes the depth bound (useful for sanity
    checks); the production default matches 512 trees of depth 8.
    """

    def __init__(
        self,
        n_estimators: int = 512,
        max_depth: int | None = 8,
        features_per_split: str | int = "sqrt",
        min_samples_split: int = 2,
        bootstrap: bool = True,
        seed: int = 0,
        n_jobs: int = 1,
    ):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.features_per_split = features_per_split
        self.min_samples_split = min_samples_split
        self.bootstrap = bootstrap
        self.seed = seed
        self.n_jobs = n_jobs
        self.trees_: list[TreeNode] | None = None
        self.n_features_: int | None = None

    def _validate_params(self) -> None:
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be >= 1 or None")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")

    def _grow(
        self,
        X: np.ndarray,
        y: np.ndarray,
        rows: np.ndarray,
        depth: int,
        rng: np.random.Generator,
        m_features: int,
    ) -> TreeNode:
        n = len(rows)
        pos = int(y[rows].sum())
        if (
            n < self.min_samples_split
            or pos == 0
            or pos == n
            or (self.max_depth is not None and depth >= self.max_depth)
        ):
            return Leaf(pos / n, n)
        d = X.shape[1]
        candidates = np.sort(rng.choice(d, size=m_features, replace=False))
        split = best_split(X, y, rows, candidates)
        if split is None:
            return Leaf(pos / n, n)
        feature, threshold, _ = split
        mask = X[rows, feature] <= threshold
        left_rows = rows[mask]
        right_rows = rows[~mask]
        if left_rows.size == 0 or right_rows.size == 0:
            return Leaf(pos / n, n)
        # children grown left-first so the generator is consumed in preorder
        left = self._grow(X, y, left_rows, depth + 1, rng, m_features)
        right = self._grow(X, y, right_rows, depth + 1, rng, m_features)
        return Internal(feature, threshold, left, right)

    def _grow_tree(self, X: np.ndarray, y: np.ndarray, index: int) -> TreeNode:
        rng = np.random.default_rng(self.seed + index)
        n = X.shape[0]
        if self.bootstrap:
            rows = rng.integers(0, n, size=n)
        else:
            rows = np.arange(n)
        m = _n_candidate_features(self.features_per_split, X.shape[1])
        return self._grow(X, y, rows, 0, rng, m)

    def fit(
        self,
        X: Sequence[Mapping[int, float]] | np.ndarray,
        y: Sequence[int] | np.ndarray,
        n_features: int | None = None,
    ) -> "RandomForest":
        self._validate_params()
        Xd, ya = check_X_y(X, y, n_features=n_features, require_both_classes=True)
        if Xd.shape[0] < 2:
            raise ValueError("need at least two training rows")
        if self.n_jobs > 1:
            with ThreadPoolExecutor(max_workers=self.n_jobs) as pool:
                trees = list(
                    pool.map(
                        lambda i: self._grow_tree(Xd, ya, i),
                        range(self.n_estimators),
                    )
                )
        else:
            trees = [self._grow_tree(Xd, ya, i) for i in range(self.n_estimators)]
        self.trees_ = trees
        self.n_features_ = Xd.shape[1]
        return self

    def predict_proba(
        self, X: Sequence[Mapping[int, float]] | np.ndarray
    ) -> np.ndarray:
        check_fitted(self, "trees_")
        Xd = as_dense(X, n_features=self.n_features_)
        out = np.zeros(Xd.shape[0])
        all_rows = np.arange(Xd.shape[0])
        for tree in self.trees_:
            stack: list[tuple[TreeNode, np.ndarray]] = [(tree, all_rows)]
            while stack:
                node, rows = stack.pop()
                if rows.size == 0:
                    continue
                if isinstance(node, Leaf):
                    out[rows] += node.positive_fraction
                else:
                    mask = Xd[rows, node.feature] <= node.threshold
                    stack.append((node.left, rows[mask]))
                    stack.append((node.right, rows[~mask]))
        return out / len(self.trees_)

    def predict_proba_one(self, x: Mapping[int, float]) -> float:
        """Walk each tree for one sparse row; absent features read as 0.0."""
        check_fitted(self, "trees_")
        total = 0.0
        for tree in self.trees_:
            node = tree
            while isinstance(node, Internal):
                value = x.get(node.feature, 0.0)
                node = node.left if value <= node.threshold else node.right
            total += node.positive_fraction
        return total / len(self.trees_)

    def predict(self, X, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(int)


def tree_depth(node: TreeNode) -> int:
    """Longest root-to-leaf path, counted in edges."""
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def _write_preorder(node: TreeNode, lines: list[str]) -> None:
    if isinstance(node, Leaf):
        lines.append(f"L {node.positive_fraction!r} {node.n_samples}")
    else:
        lines.append(f"I {node.feature} {node.threshold!r}")
        _write_preorder(node.left, lines)
        _write_preorder(node.right, lines)


def save_forest(model: RandomForest, path: str | Path) -> None:
    """Config header plus one preorder node list per tree."""
    check_fitted(model, "trees_")
    lines = [
        "forest-model v1",
        f"n_estimators {model.n_estimators}",
        f"max_depth {'none' if model.max_depth is None else model.max_depth}",
        f"features_per_split {model.features_per_split}",
        f"min_samples_split {model.min_samples_split}",
        f"bootstrap {'true' if model.bootstrap else 'false'}",
        f"seed {model.seed}",
        f"n_features {model.n_features_}",
    ]
    for i, tree in enumerate(model.trees_):
        lines.append(f"tree {i}")
        _write_preorder(tree, lines)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_preorder(lines: list[str], pos: int) -> tuple[TreeNode, int]:
    parts = lines[pos].split()
    if parts[0] == "L":
        return Leaf(float(parts[1]), int(parts[2])), pos + 1
    feature, threshold = int(parts[1]), float(parts[2])
    left, pos = _read_preorder(lines, pos + 1)
    right, pos = _read_preorder(lines, pos)
    return Internal(feature, threshold, left, right), pos


def load_forest(path: str | Path) -> RandomForest:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "forest-model v1":
        raise ValueError(f"{path}: not a forest model file")
    header: dict[str, str] = {}
    pos = 1
    while pos < len(lines) and not lines[pos].startswith("tree "):
        key, value = lines[pos].split(" ", 1)
        header[key] = value
        pos += 1
    fps: str | int = header["features_per_split"]
    if fps not in ("sqrt", "all"):
        fps = int(fps)
    model = RandomForest(
        n_estimators=int(header["n_estimators"]),
        max_depth=None if header["max_depth"] == "none" else int(header["max_depth"]),
        features_per_split=fps,
        min_samples_split=int(header["min_samples_split"]),
        bootstrap=header["bootstrap"] == "true",
        seed=int(header["seed"]),
    )
    trees: list[TreeNode] = []
    while pos < len(lines):
        if not lines[pos].strip():
            pos += 1
            continue
        if not lines[pos].startswith("tree "):
            raise ValueError(f"{path}: expected a tree header at line {pos + 1}")
        tree, pos = _read_preorder(lines, pos + 1)
        trees.append(tree)
    model.trees_ = trees
    model.n_features_ = int(header["n_features"])
    return model
