"""Random forest of Gini decision trees, ROC AUC and grouped stratified CV.

Missing feature values (NaN) are routed at each split to a learned default
side: whichever child receives more of the non-missing training rows.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.stats import rankdata

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_depth: int | None = None
    features_per_split: int | None = None  # None -> ceil(sqrt(F))
    min_samples_split: int = 2
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be positive")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be at least 2")


@dataclass
class Tree:
    """Flat array representation; leaves have ``feature == -1``."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    missing_left: np.ndarray
    value: np.ndarray
    importances: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            idx = np.nonzero(active)[0]
            cur = node[idx]
            f = self.feature[cur]
            x = X[idx, f]
            go_left = np.where(np.isnan(x), self.missing_left[cur], x <= self.threshold[cur])
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] >= 0
        return self.value[node]

    def to_dict(self) -> dict[str, list]:
        return {
            "feature": self.feature.tolist(),
            "threshold": [None if math.isnan(t) else float(t) for t in self.threshold],
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "missing_left": [bool(b) for b in self.missing_left],
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, list], n_features: int) -> "Tree":
        return cls(
            feature=np.asarray(d["feature"], dtype=np.int64),
            threshold=np.asarray([math.nan if t is None else t for t in d["threshold"]], dtype=float),
            left=np.asarray(d["left"], dtype=np.int64),
            right=np.asarray(d["right"], dtype=np.int64),
            missing_left=np.asarray(d["missing_left"], dtype=bool),
            value=np.asarray(d["value"], dtype=float),
            importances=np.zeros(n_features),
        )


def _gini(pos: np.ndarray, n: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore", divide="ignore"):
        p = np.where(n > 0, pos / np.maximum(n, 1), 0.0)
    return 2.0 * p * (1.0 - p)


def _best_split(X: np.ndarray, y: np.ndarray):
    """Best threshold over the columns of ``X``.

    Returns ``(weighted child impurity, column, threshold, missing_left)`` or
    None when no column has two distinct non-missing values. Ties go to the
    earlier column, then the lower threshold.
    """
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if n < 2:
        return None
    order = np.argsort(X, axis=0, kind="mergesort")  # NaN sorts last
    xs = np.take_along_axis(X, order, axis=0)
    ys = y[order]
    n_present = (~np.isnan(X)).sum(axis=0)
    cum_pos = np.cumsum(ys, axis=0)
    idx = np.arange(n - 1)[:, None]
    with np.errstate(invalid="ignore"):
        valid = (idx + 1 < n_present) & (xs[1:] > xs[:-1])
    if not valid.any():
        return None
    pos_total = y.sum()
    pos_present = np.where(n_present > 0, cum_pos[np.maximum(n_present - 1, 0), np.arange(k)], 0.0)
    n_missing = n - n_present
    pos_missing = pos_total - pos_present
    left_n = np.broadcast_to(idx + 1.0, (n - 1, k))
    left_pos = cum_pos[:-1]
    right_n = n_present - left_n
    right_pos = pos_present - left_pos
    miss_left = left_n >= right_n
    left_n = left_n + np.where(miss_left, n_missing, 0)
    left_pos = left_pos + np.where(miss_left, pos_missing, 0)
    right_n = right_n + np.where(miss_left, 0, n_missing)
    right_pos = right_pos + np.where(miss_left, 0, pos_missing)
    impurity = (left_n * _gini(left_pos, left_n) + right_n * _gini(right_pos, right_n)) / n
    impurity = np.where(valid, impurity, np.inf)
    flat = int(np.argmin(impurity.T))  # column-major: earlier column wins ties
    col, c = divmod(flat, n - 1)
    lo, hi = xs[c, col], xs[c + 1, col]
    threshold = 0.5 * (lo + hi)
    if not threshold < hi:  # guard against float midpoint collapse
        threshold = lo
    return float(impurity[c, col]), col, float(threshold), bool(miss_left[c, col])


def build_tree(
    X: np.ndarray,
    y: np.ndarray,
    params: ForestParams,
    rng: np.random.Generator,
) -> Tree:
    """Grow one CART classification tree on ``(X, y)``."""
    n_samples, n_features = X.shape
    k = params.features_per_split or max(1, math.ceil(math.sqrt(n_features)))
    k = min(k, n_features)
    feature, threshold, left, right, missing_left, value = [], [], [], [], [], []
    importances = np.zeros(n_features)

    def new_node(rows: np.ndarray) -> int:
        feature.append(-1)
        threshold.append(math.nan)
        left.append(-1)
        right.append(-1)
        missing_left.append(False)
        value.append(float(y[rows].mean()))
        return len(feature) - 1

    root = new_node(np.arange(n_samples))
    stack = [(root, np.arange(n_samples), 0)]
    while stack:
        node, rows, depth = stack.pop()
        ys = y[rows]
        n = rows.size
        pos = ys.sum()
        if pos == 0 or pos == n or n < params.min_samples_split:
            continue
        if params.max_depth is not None and depth >= params.max_depth:
            continue
        parent_impurity = 2.0 * (pos / n) * (1.0 - pos / n)
        order = rng.permutation(n_features)
        best = None
        # try a random subset first; keep drawing features until a valid split exists
        for start in range(0, n_features, k):
            feats = order[start:start + k]
            best = _best_split(X[np.ix_(rows, feats)], ys)
            if best is not None:
                break
        if best is None:
            continue
        impurity, col, thr, miss_left = best
        f = int(feats[col])
        x = X[rows, f]
        go_left = np.where(np.isnan(x), miss_left, x <= thr)
        left_rows, right_rows = rows[go_left], rows[~go_left]
        if left_rows.size == 0 or right_rows.size == 0:
            continue
        importances[f] += (n / n_samples) * (parent_impurity - impurity)
        feature[node] = f
        threshold[node] = thr
        missing_left[node] = miss_left
        left[node] = new_node(left_rows)
        right[node] = new_node(right_rows)
        stack.append((right[node], right_rows, depth + 1))
        stack.append((left[node], left_rows, depth + 1))

    total = importances.sum()
    if total > 0:
        importances = importances / total
    return Tree(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=float),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        missing_left=np.asarray(missing_left, dtype=bool),
        value=np.asarray(value, dtype=float),
        importances=importances,
    )


def schema_hash(feature_names: Sequence[str]) -> str:
    return hashlib.sha256("\n".join(feature_names).encode("utf-8")).hexdigest()[:16]


@dataclass
class ForestModel:
    trees: list[Tree]
    feature_names: tuple[str, ...]
    params: ForestParams
    seed: int

    @property
    def schema_hash(self) -> str:
        return schema_hash(self.feature_names)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise ValueError("feature matrix does not match the model schema")
        return np.mean([t.predict(X) for t in self.trees], axis=0)

    def feature_importances(self) -> dict[str, float]:
        imp = np.mean([t.importances for t in self.trees], axis=0)
        return {name: float(v) for name, v in zip(self.feature_names, imp)}

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": "sockpuppet-forest",
            "version": MODEL_FORMAT_VERSION,
            "schema_hash": self.schema_hash,
            "feature_names": list(self.feature_names),
            "params": asdict(self.params),
            "seed": self.seed,
            "trees": [t.to_dict() for t in self.trees],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ForestModel":
        if d.get("format") != "sockpuppet-forest" or d.get("version") != MODEL_FORMAT_VERSION:
            raise ValueError("unsupported model file")
        names = tuple(d["feature_names"])
        if schema_hash(names) != d["schema_hash"]:
            raise ValueError("model schema hash does not match its feature names")
        return cls(
            trees=[Tree.from_dict(t, len(names)) for t in d["trees"]],
            feature_names=names,
            params=ForestParams(**d["params"]),
            seed=d["seed"],
        )


def _tree_seeds(seed: int, n: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(n)


def _fit_one(X: np.ndarray, y: np.ndarray, params: ForestParams, seq: np.random.SeedSequence) -> Tree:
    rng = np.random.default_rng(seq)
    if params.bootstrap:
        rows = rng.integers(0, len(y), size=len(y))
        return build_tree(X[rows], y[rows], params, rng)
    return build_tree(X, y, params, rng)


def fit_forest(
    X: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str],
    params: ForestParams = ForestParams(),
    seed: int = 0,
    n_jobs: int = 1,
) -> ForestModel:
    """Fit a forest; each tree draws from its own seeded stream."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(np.unique(y)) < 2:
        raise ValueError("training data has a single class")
    seqs = _tree_seeds(seed, params.n_trees)
    if n_jobs == 1:
        trees = [_fit_one(X, y, params, s) for s in seqs]
    else:
        from joblib import Parallel, delayed

        trees = Parallel(n_jobs=n_jobs)(delayed(_fit_one)(X, y, params, s) for s in seqs)
    return ForestModel(trees, tuple(feature_names), params, seed)


# -- evaluation ---------------------------------------------------------------


def roc_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Mann-Whitney AUC; tied scores count one half."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_auc needs both classes")
    ranks = rankdata(scores)
    return float((ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def stratified_group_folds(
    labels: Sequence[int],
    groups: Sequence[str] | None,
    k: int,
    seed: int,
) -> np.ndarray:
    """Fold index per row; rows sharing a group land in the same fold.

    Groups are visited in a seeded random order (larger groups first) and
    each goes to the fold whose class counts stay closest to an even
    split.
    """
    labels = np.asarray(labels).astype(int)
    n = labels.size
    if groups is None:
        groups = [str(i) for i in range(n)]
    members: dict[str, list[int]] = {}
    for i, g in enumerate(groups):
        members.setdefault(g, []).append(i)
    names = sorted(members)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(names))
    ordered = sorted((names[i] for i in perm), key=lambda g: -len(members[g]))
    target = np.array([np.sum(labels == 0), np.sum(labels == 1)], dtype=float) / k
    counts = np.zeros((k, 2))
    folds = np.empty(n, dtype=np.int64)
    for g in ordered:
        rows = members[g]
        add = np.array([np.sum(labels[rows] == 0), np.sum(labels[rows] == 1)], dtype=float)
        cost = np.abs(counts + add - target).sum(axis=1) - np.abs(counts - target).sum(axis=1)
        fold = int(np.lexsort((np.arange(k), counts.sum(axis=1), cost))[0])
        counts[fold] += add
        folds[rows] = fold
    return folds


@dataclass
class EvalReport:
    fold_aucs: list[float]
    mean_auc: float
    feature_importances: dict[str, float]
    params: dict[str, Any]
    seed: int
    k: int
    n_rows: int
    feature_names: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "fold_aucs": self.fold_aucs,
            "mean_auc": self.mean_auc,
            "feature_importances": self.feature_importances,
            "params": self.params,
            "seed": self.seed,
            "folds": self.k,
            "rows": self.n_rows,
            "features": self.feature_names,
        }


def cross_validate_arrays(
    X: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str],
    groups: Sequence[str] | None = None,
    k: int = 10,
    params: ForestParams = ForestParams(),
    seed: int = 0,
    n_jobs: int = 1,
) -> EvalReport:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(int)
    for cls in (0, 1):
        if np.sum(y == cls) < k:
            raise ValueError(f"need at least {k} rows of class {cls}")
    folds = stratified_group_folds(y, groups, k, seed)
    aucs = []
    importances = np.zeros(X.shape[1])
    fold_seeds = np.random.SeedSequence(seed).generate_state(k)
    for fold in range(k):
        test = folds == fold
        model = fit_forest(X[~test], y[~test], feature_names, params, int(fold_seeds[fold]), n_jobs)
        aucs.append(roc_auc(model.predict_proba(X[test]), y[test]))
        importances += np.array(list(model.feature_importances().values()))
    importances /= k
    return EvalReport(
        fold_aucs=[float(a) for a in aucs],
        mean_auc=float(np.mean(aucs)),
        feature_importances={n: float(v) for n, v in zip(feature_names, importances)},
        params=asdict(params),
        seed=seed,
        k=k,
        n_rows=int(len(y)),
        feature_names=list(feature_names),
    )
