"""Sockpuppet identification from shared IPs and co-posting.

Two accounts form a pair when they post from the same IP, in the same
discussion, within ``window_minutes`` of each other, in at least
``min_discussions`` different discussions. Heavily shared IPs and accounts
that roam across many IPs are trimmed beforehand.
"""

from __future__ import annotations

import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Any, Iterable, Sequence

import numpy as np

from .ingest import Corpus, Post


@dataclass(frozen=True)
class DetectionParams:
    window_minutes: float = 15.0
    min_discussions: int = 3
    ip_trim_fraction: float = 0.05
    account_trim_fraction: float = 0.05

    def __post_init__(self):
        if not self.window_minutes > 0:
            raise ValueError("window_minutes must be positive")
        if self.min_discussions < 1:
            raise ValueError("min_discussions must be at least 1")
        for name in ("ip_trim_fraction", "account_trim_fraction"):
            value = getattr(self, name)
            if not 0 <= value < 0.5:
                raise ValueError(f"{name} must lie in [0, 0.5)")

    @property
    def window_seconds(self) -> float:
        return self.window_minutes * 60.0


@dataclass(frozen=True)
class Exclusions:
    ips: frozenset[str] = frozenset()
    accounts: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Evidence:
    discussion_id: str
    post_a: str
    post_b: str
    ip: str
    delta_seconds: int


@dataclass(frozen=True)
class SockPair:
    account_a: str
    account_b: str
    evidence: tuple[Evidence, ...]

    @property
    def accounts(self) -> tuple[str, str]:
        return (self.account_a, self.account_b)

    @property
    def discussions(self) -> tuple[str, ...]:
        return tuple(sorted({e.discussion_id for e in self.evidence}))

    @property
    def distinct_evidence_discussions(self) -> int:
        return len(self.discussions)


@dataclass(frozen=True)
class SockGroup:
    members: frozenset[str]
    pairs: tuple[SockPair, ...]
    primary: str | None = None

    @property
    def secondaries(self) -> tuple[str, ...]:
        return tuple(sorted(self.members - {self.primary}))

    def to_dict(self) -> dict[str, Any]:
        return {
            "members": sorted(self.members),
            "primary": self.primary,
            "pairs": [
                {
                    "a": p.account_a,
                    "b": p.account_b,
                    "discussions": list(p.discussions),
                    "evidence_count": len(p.evidence),
                }
                for p in self.pairs
            ],
        }


def _top_fraction(counts: dict[str, int], fraction: float) -> set[str]:
    """Keys in the top ``fraction`` by count.

    Items tied with the last one inside the cut are excluded too. When that
    tie extends down to the minimum count, the tie carries no ranking
    information and the cut falls back to exactly ``n_cut`` items by id.
    """
    if not counts or fraction <= 0:
        return set()
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    n_cut = math.ceil(fraction * len(ranked) - 1e-9)
    if n_cut == 0:
        return set()
    boundary = ranked[n_cut - 1][1]
    if boundary == ranked[-1][1]:
        return {k for k, _ in ranked[:n_cut]}
    return {k for k, c in ranked if c >= boundary}


def filter_noisy(corpus: Corpus, params: DetectionParams = DetectionParams()) -> Exclusions:
    """Heavily shared IPs and IP-roaming accounts to drop before detection."""
    accounts_per_ip: dict[str, set[str]] = defaultdict(set)
    ips_per_account: dict[str, set[str]] = defaultdict(set)
    for post in corpus.posts:
        accounts_per_ip[post.ip].add(post.author_id)
        ips_per_account[post.author_id].add(post.ip)
    ips = _top_fraction({ip: len(a) for ip, a in accounts_per_ip.items()}, params.ip_trim_fraction)
    accounts = _top_fraction({a: len(i) for a, i in ips_per_account.items()}, params.account_trim_fraction)
    return Exclusions(frozenset(ips), frozenset(accounts))


def _discussion_evidence(posts: Sequence[Post], window: float, exclusions: Exclusions):
    """Yield ((a, b), Evidence) for qualifying post pairs of one discussion."""
    by_ip: dict[str, list[Post]] = defaultdict(list)
    for post in posts:
        if post.ip in exclusions.ips or post.author_id in exclusions.accounts:
            continue
        by_ip[post.ip].append(post)
    for ip in sorted(by_ip):
        bucket = by_ip[ip]  # already in (timestamp, post_id) order
        if len({p.author_id for p in bucket}) < 2:
            continue
        lo = 0
        for hi, later in enumerate(bucket):
            while later.timestamp - bucket[lo].timestamp > window:
                lo += 1
            for earlier in bucket[lo:hi]:
                if earlier.author_id == later.author_id:
                    continue
                if earlier.author_id < later.author_id:
                    pa, pb = earlier, later
                else:
                    pa, pb = later, earlier
                yield (pa.author_id, pb.author_id), Evidence(
                    discussion_id=later.discussion_id,
                    post_a=pa.post_id,
                    post_b=pb.post_id,
                    ip=ip,
                    delta_seconds=later.timestamp - earlier.timestamp,
                )


def find_sockpuppet_pairs(
    corpus: Corpus,
    params: DetectionParams = DetectionParams(),
    exclusions: Exclusions | None = None,
) -> list[SockPair]:
    """All account pairs satisfying the co-posting rule, sorted by ids."""
    if exclusions is None:
        exclusions = filter_noisy(corpus, params)
    evidence: dict[tuple[str, str], list[Evidence]] = defaultdict(list)
    for discussion_id in sorted(corpus.discussion_index):
        posts = corpus.discussion_index[discussion_id]
        for key, item in _discussion_evidence(posts, params.window_seconds, exclusions):
            evidence[key].append(item)
    pairs = []
    for (a, b), items in sorted(evidence.items()):
        if len({e.discussion_id for e in items}) >= params.min_discussions:
            items.sort(key=lambda e: (e.discussion_id, e.post_a, e.post_b))
            pairs.append(SockPair(a, b, tuple(items)))
    return pairs


def group_pairs(pairs: Iterable[SockPair]) -> list[SockGroup]:
    """Connected components of the pair graph, sorted by smallest member."""
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pairs = list(pairs)
    for pair in pairs:
        for acct in pair.accounts:
            parent.setdefault(acct, acct)
        ra, rb = find(pair.account_a), find(pair.account_b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    members: dict[str, set[str]] = defaultdict(set)
    for acct in parent:
        members[find(acct)].add(acct)
    grouped: dict[str, list[SockPair]] = defaultdict(list)
    for pair in pairs:
        grouped[find(pair.account_a)].append(pair)
    groups = [
        SockGroup(frozenset(members[root]), tuple(sorted(grouped[root], key=lambda p: p.accounts)))
        for root in members
    ]
    return sorted(groups, key=lambda g: min(g.members))


def designate_primary(group: SockGroup, corpus: Corpus) -> SockGroup:
    """Primary = most posts, then earliest first post, then smallest id."""

    def key(acct: str):
        posts = corpus.posts_of(acct)
        first = posts[0].timestamp if posts else math.inf
        return (-len(posts), first, acct)

    return replace(group, primary=min(group.members, key=key))


def detect_groups(corpus: Corpus, params: DetectionParams = DetectionParams()) -> list[SockGroup]:
    """Full detection: trim, pair rule, grouping, primary designation."""
    exclusions = filter_noisy(corpus, params)
    pairs = find_sockpuppet_pairs(corpus, params, exclusions)
    return [designate_primary(g, corpus) for g in group_pairs(pairs)]


def sockpuppet_accounts(groups: Iterable[SockGroup]) -> set[str]:
    return {m for g in groups for m in g.members}


# -- K_min calibration --------------------------------------------------------


def pair_time_gap(corpus: Corpus, a: str, b: str) -> float:
    """Median, over a's posts, of the gap to b's nearest post.

    Only discussions both accounts posted in are used when there are any;
    otherwise all posts are compared.
    """
    posts_a, posts_b = corpus.posts_of(a), corpus.posts_of(b)
    if not posts_a or not posts_b:
        return math.nan
    shared = {p.discussion_id for p in posts_a} & {p.discussion_id for p in posts_b}
    if shared:
        gaps = []
        times_b: dict[str, list[int]] = defaultdict(list)
        for p in posts_b:
            if p.discussion_id in shared:
                times_b[p.discussion_id].append(p.timestamp)
        for p in posts_a:
            if p.discussion_id in shared:
                gaps.append(min(abs(p.timestamp - t) for t in times_b[p.discussion_id]))
        return float(statistics.median(gaps))
    tb = np.array([p.timestamp for p in posts_b], dtype=float)
    return float(np.median([np.min(np.abs(tb - p.timestamp)) for p in posts_a]))


def mean_post_length(corpus: Corpus, account: str) -> float:
    posts = corpus.posts_of(account)
    if not posts:
        return math.nan
    return sum(len(p.text.split()) for p in posts) / len(posts)


def pair_length_difference(corpus: Corpus, a: str, b: str) -> float:
    return abs(mean_post_length(corpus, a) - mean_post_length(corpus, b))


def _median_or_none(values: list[float]) -> float | None:
    values = [v for v in values if not math.isnan(v)]
    return float(statistics.median(values)) if values else None


@dataclass
class CalibrationPoint:
    min_discussions: int
    n_pairs: int
    pair_median_gap: float | None
    pair_median_length_diff: float | None
    n_random: int
    random_median_gap: float | None
    random_median_length_diff: float | None

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


def calibration_curves(
    corpus: Corpus,
    params: DetectionParams,
    k_range: Iterable[int],
    seed: int = 0,
    n_random_default: int = 100,
) -> list[CalibrationPoint]:
    """Gap and length-difference medians of detected vs random pairs per K.

    Random pairs are drawn uniformly among ordinary accounts (those not in
    any detected pair for that K), as many as there are detected pairs, or
    ``n_random_default`` when nothing is detected.
    """
    ks = sorted(set(k_range))
    if not ks:
        raise ValueError("k_range is empty")
    exclusions = filter_noisy(corpus, params)
    rng = np.random.default_rng(seed)
    points = []
    active = sorted(a for a in corpus.accounts if corpus.posts_of(a))
    for k in ks:
        kparams = replace(params, min_discussions=k)
        pairs = find_sockpuppet_pairs(corpus, kparams, exclusions)
        socks = {a for p in pairs for a in p.accounts}
        ordinary = [a for a in active if a not in socks]
        n_random = len(pairs) if pairs else n_random_default
        random_pairs = []
        if len(ordinary) >= 2:
            for _ in range(n_random):
                i, j = rng.choice(len(ordinary), size=2, replace=False)
                random_pairs.append((ordinary[i], ordinary[j]))
        points.append(
            CalibrationPoint(
                min_discussions=k,
                n_pairs=len(pairs),
                pair_median_gap=_median_or_none([pair_time_gap(corpus, *p.accounts) for p in pairs]),
                pair_median_length_diff=_median_or_none(
                    [pair_length_difference(corpus, *p.accounts) for p in pairs]
                ),
                n_random=len(random_pairs),
                random_median_gap=_median_or_none([pair_time_gap(corpus, a, b) for a, b in random_pairs]),
                random_median_length_diff=_median_or_none(
                    [pair_length_difference(corpus, a, b) for a, b in random_pairs]
                ),
            )
        )
    return points
