"""Feature vectors, prediction datasets, training and evaluation.

Features come in three sets: ``activity`` (posting behavior and reply
network position), ``community`` (feedback from other users) and ``post``
(language). Pair rows hold absolute differences of the two accounts'
features plus pair-interaction counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .behavior import community_feedback, pair_activity
from .detect import SockGroup, sockpuppet_accounts
from .forest import EvalReport, ForestModel, ForestParams, cross_validate_arrays, fit_forest
from .graph import ReplyNetwork, build_reply_network, ego_network, local_clustering, reciprocity
from .ingest import Corpus
from .taxonomy import MatchPair
from .text import Lexicon, profile_feature_names, tokenize, user_profile

FEATURE_SETS = ("activity", "community", "post")
SCHEMA_VERSION = 1

PAIR_INTERACTION_FEATURES = {
    "common_subdiscussions": "activity",
    "co_posts_within_window": "activity",
    "cross_votes": "activity",
}


@dataclass(frozen=True)
class FeatureVector:
    names: tuple[str, ...]
    values: tuple[float | None, ...]
    sets: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("feature names must be unique")
        if not len(self.names) == len(self.values) == len(self.sets):
            raise ValueError("names, values and sets differ in length")

    def as_dict(self) -> dict[str, float | None]:
        return dict(zip(self.names, self.values))

    def __getitem__(self, name: str) -> float | None:
        return self.values[self.names.index(name)]

    def array(self) -> np.ndarray:
        return np.array([math.nan if v is None else v for v in self.values], dtype=float)


def _vector(items: list[tuple[str, str, float | None]]) -> FeatureVector:
    names, sets, values = zip(*items)
    return FeatureVector(tuple(names), tuple(None if v is None else float(v) for v in values), tuple(sets))


def account_features(
    corpus: Corpus,
    account: str,
    lexicon: Lexicon,
    network: ReplyNetwork | None = None,
) -> FeatureVector:
    """Activity, community and post features of one account."""
    posts = corpus.posts_of(account)
    if not posts:
        raise ValueError(f"account {account!r} has no posts")
    if network is None:
        network = build_reply_network(corpus)
    times = [p.timestamp for p in posts]
    gaps = np.diff(times)
    ego = ego_network(network, account)
    items: list[tuple[str, str, float | None]] = [
        ("n_posts", "activity", len(posts)),
        ("reply_fraction", "activity", sum(p.is_reply for p in posts) / len(posts)),
        ("mean_interpost_seconds", "activity", float(gaps.mean()) if gaps.size else None),
        ("tenure_days", "activity", (times[-1] - times[0]) / 86400.0),
        ("ego_clustering", "activity", local_clustering(network, account)),
        ("ego_reciprocity", "activity", reciprocity(ego) if ego.edges else None),
    ]
    fb = community_feedback(corpus, account)
    items += [
        ("blocked", "community", float(fb.blocked)),
        ("upvote_fraction", "community", fb.upvote_fraction),
        ("reported_fraction", "community", fb.reported_fraction),
        ("deleted_fraction", "community", fb.deleted_fraction),
    ]
    items += [(name, "post", value) for name, value in _post_features(corpus, account, lexicon)]
    return _vector(items)


def _post_features(corpus: Corpus, account: str, lexicon: Lexicon) -> list[tuple[str, float | None]]:
    posts = corpus.posts_of(account)
    tokens = [tokenize(p.text) for p in posts]
    n = len(posts)
    items: list[tuple[str, float | None]] = [
        ("chars_per_post", sum(t.char_counts.total for t in tokens) / n),
        ("syllables_per_post", sum(sum(t.syllable_counts) for t in tokens) / n),
        ("words_per_post", sum(t.n_words for t in tokens) / n),
        ("sentences_per_post", sum(t.n_sentences for t in tokens) / n),
    ]
    try:
        profile = user_profile(corpus, account, lexicon).features
    except ValueError:  # only empty posts
        profile = {}
    items += [(name, profile.get(name)) for name in profile_feature_names(lexicon)]
    return items


def pair_features(fv_a: FeatureVector, fv_b: FeatureVector, stats: Any) -> FeatureVector:
    """Absolute per-feature differences plus pair-interaction counts."""
    if fv_a.names != fv_b.names:
        raise ValueError("feature vectors have different schemas")
    items: list[tuple[str, str, float | None]] = []
    for name, s, a, b in zip(fv_a.names, fv_a.sets, fv_a.values, fv_b.values):
        items.append((f"diff_{name}", s, None if a is None or b is None else abs(a - b)))
    interaction = {
        "common_subdiscussions": stats.common_subdiscussions,
        "co_posts_within_window": stats.co_posts_within_window,
        "cross_votes": stats.votes_a_on_b + stats.votes_b_on_a,
    }
    for name, s in PAIR_INTERACTION_FEATURES.items():
        items.append((name, s, interaction[name]))
    return _vector(items)


@dataclass
class Dataset:
    rows: list[FeatureVector]
    labels: list[int]
    unit_ids: list[str]
    groups: list[str]
    note: str = ""

    def __post_init__(self):
        if len(set(self.unit_ids)) != len(self.unit_ids):
            raise ValueError("unit ids must be unique")
        if self.rows and any(r.names != self.rows[0].names for r in self.rows):
            raise ValueError("rows do not share a schema")

    @property
    def feature_names(self) -> tuple[str, ...]:
        return self.rows[0].names if self.rows else ()

    @property
    def feature_sets(self) -> tuple[str, ...]:
        return self.rows[0].sets if self.rows else ()

    def matrix(self) -> np.ndarray:
        return np.vstack([r.array() for r in self.rows])

    def y(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=int)

    def select(self, sets: Iterable[str]) -> tuple[np.ndarray, list[str]]:
        sets = set(sets)
        unknown = sets - set(FEATURE_SETS)
        if unknown:
            raise ValueError(f"unknown feature sets: {sorted(unknown)}")
        cols = [i for i, s in enumerate(self.feature_sets) if s in sets]
        return self.matrix()[:, cols], [self.feature_names[i] for i in cols]

    def permuted(self, seed: int) -> "Dataset":
        labels = list(np.random.default_rng(seed).permutation(self.labels))
        return Dataset(self.rows, [int(v) for v in labels], self.unit_ids, self.groups, self.note + " (labels permuted)")

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "features": list(self.feature_names),
            "feature_sets": list(self.feature_sets),
            "note": self.note,
            "rows": [
                {"unit_id": u, "group": g, "label": l, "values": list(r.values)}
                for r, l, u, g in zip(self.rows, self.labels, self.unit_ids, self.groups)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Dataset":
        names = tuple(d["features"])
        sets = tuple(d["feature_sets"])
        rows = [FeatureVector(names, tuple(r["values"]), sets) for r in d["rows"]]
        return cls(
            rows,
            [r["label"] for r in d["rows"]],
            [r["unit_id"] for r in d["rows"]],
            [r["group"] for r in d["rows"]],
            d.get("note", ""),
        )


class FeatureCache:
    """Account feature vectors computed once per corpus."""

    def __init__(self, corpus: Corpus, lexicon: Lexicon):
        self.corpus = corpus
        self.lexicon = lexicon
        self.network = build_reply_network(corpus)
        self._cache: dict[str, FeatureVector] = {}

    def __call__(self, account: str) -> FeatureVector:
        if account not in self._cache:
            self._cache[account] = account_features(self.corpus, account, self.lexicon, self.network)
        return self._cache[account]


def _matched(matches: Iterable[MatchPair]) -> dict[str, str]:
    return {m.sockpuppet: m.ordinary for m in matches if m.matched}


def build_task1_dataset(
    corpus: Corpus,
    groups: Sequence[SockGroup],
    matches: Iterable[MatchPair],
    lexicon: Lexicon,
    features: FeatureCache | None = None,
) -> Dataset:
    """Sockpuppet (1) vs matched ordinary account (0), one row each."""
    features = features or FeatureCache(corpus, lexicon)
    socks = sockpuppet_accounts(groups)
    pairs = [(s, o) for s, o in sorted(_matched(matches).items()) if s in socks]
    if not pairs:
        raise ValueError("no matched sockpuppets")
    rows, labels, units = [], [], []
    for sock, ordinary in pairs:
        for acct, label in ((sock, 1), (ordinary, 0)):
            rows.append(features(acct))
            labels.append(label)
            units.append(acct)
    return Dataset(rows, labels, units, list(units), "task 1: sockpuppet vs matched ordinary account")


def build_task2_dataset(
    corpus: Corpus,
    groups: Sequence[SockGroup],
    matches: Iterable[MatchPair],
    lexicon: Lexicon,
    features: FeatureCache | None = None,
    window_minutes: float = 15.0,
) -> Dataset:
    """(primary, secondary) sockpuppet pairs (1) vs (primary, matched ordinary) (0).

    Rows are grouped by the primary account so cross-validation keeps each
    primary within one fold.
    """
    features = features or FeatureCache(corpus, lexicon)
    matched = _matched(matches)
    rows, labels, units, grp = [], [], [], []
    for group in groups:
        s1 = group.primary
        if s1 is None or s1 not in matched:
            continue
        o = matched[s1]
        for s2 in group.secondaries:
            for other, label in ((s2, 1), (o, 0)):
                stats = pair_activity(corpus, (s1, other), window_minutes)
                rows.append(pair_features(features(s1), features(other), stats))
                labels.append(label)
                units.append(f"{s1}|{other}|{s2}")
                grp.append(s1)
    if not rows:
        raise ValueError("no matched sockpuppet pairs")
    return Dataset(rows, labels, units, grp, "task 2: sockpuppet pair vs sockpuppet-ordinary pair")


def train_forest(dataset: Dataset, params: ForestParams = ForestParams(), seed: int = 0, n_jobs: int = 1) -> ForestModel:
    return fit_forest(dataset.matrix(), dataset.y(), dataset.feature_names, params, seed, n_jobs)


def score_dataset(model: ForestModel, dataset: Dataset) -> np.ndarray:
    if model.feature_names != dataset.feature_names:
        raise ValueError("dataset schema hash does not match the model")
    return model.predict_proba(dataset.matrix())


def cross_validate(
    dataset: Dataset,
    k: int = 10,
    params: ForestParams = ForestParams(),
    seed: int = 0,
    sets: Iterable[str] = FEATURE_SETS,
    n_jobs: int = 1,
) -> EvalReport:
    X, names = dataset.select(sets)
    return cross_validate_arrays(X, dataset.y(), names, dataset.groups, k, params, seed, n_jobs)


@dataclass
class AblationReport:
    per_set: dict[str, EvalReport]
    forward_order: list[str]
    forward_auc: list[float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "per_set": {k: v.to_dict() for k, v in self.per_set.items()},
            "forward_selection": [
                {"added": s, "mean_auc": a} for s, a in zip(self.forward_order, self.forward_auc)
            ],
        }


def feature_set_ablation(
    dataset: Dataset,
    sets: Sequence[str] = FEATURE_SETS,
    k: int = 10,
    params: ForestParams = ForestParams(),
    seed: int = 0,
    n_jobs: int = 1,
) -> AblationReport:
    """CV per feature set, on the union, and greedy forward selection over sets."""
    sets = list(sets)
    unknown = set(sets) - set(FEATURE_SETS)
    if unknown:
        raise ValueError(f"unknown feature sets: {sorted(unknown)}")
    results: dict[tuple[str, ...], EvalReport] = {}

    def run(combo: Iterable[str]) -> EvalReport:
        key = tuple(sorted(combo))
        if key not in results:
            results[key] = cross_validate(dataset, k, params, seed, key, n_jobs)
        return results[key]

    per_set = {s: run([s]) for s in sets}
    per_set["all"] = run(sets)
    chosen: list[str] = []
    aucs: list[float] = []
    remaining = list(sets)
    while remaining:
        best = max(remaining, key=lambda s: (run(chosen + [s]).mean_auc, -sets.index(s)))
        chosen.append(best)
        aucs.append(run(chosen).mean_auc)
        remaining.remove(best)
    return AblationReport(per_set, chosen, aucs)
