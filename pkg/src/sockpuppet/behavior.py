"""Activity measures for accounts and sockpuppet pairs.

Entropies use the natural logarithm.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Sequence

from .detect import SockGroup
from .ingest import Corpus

DEFAULT_WINDOW_MINUTES = 15.0


def run_lengths(authors: Sequence[str]) -> dict[str, list[int]]:
    """Maximal consecutive-run lengths per author, in sequence order."""
    runs: dict[str, list[int]] = defaultdict(list)
    for author, block in groupby(authors):
        runs[author].append(sum(1 for _ in block))
    return dict(runs)


def run_entropy(runs: Sequence[int]) -> float:
    """Entropy of the run-length distribution ``r_i / sum(r)``."""
    total = sum(runs)
    if total <= 0:
        raise ValueError("no runs")
    h = 0.0
    for r in runs:
        p = r / total
        h -= p * math.log(p)
    return max(h, 0.0)


@dataclass
class SwitchEntropy:
    entropy: dict[str, float | None]
    run_counts: dict[str, list[int]]


def switch_entropy_of_sequence(authors: Sequence[str], members: Iterable[str] | None = None) -> SwitchEntropy:
    runs = run_lengths(authors)
    members = sorted(set(members) if members is not None else runs)
    return SwitchEntropy(
        entropy={m: run_entropy(runs[m]) if m in runs else None for m in members},
        run_counts={m: runs.get(m, []) for m in members},
    )


def _members(group: SockGroup | Iterable[str]) -> list[str]:
    return sorted(group.members if isinstance(group, SockGroup) else set(group))


def switch_entropy(corpus: Corpus, group: SockGroup | Iterable[str]) -> SwitchEntropy:
    """Switching entropy of each member over the group's interleaved posts.

    All posts by group members in the community are merged in time order
    and split into runs by author. Members without posts get ``None``.
    """
    members = _members(group)
    merged = sorted(
        (p for m in members for p in corpus.posts_of(m)),
        key=lambda p: (p.timestamp, p.post_id),
    )
    return switch_entropy_of_sequence([p.author_id for p in merged], members)


@dataclass
class PairActivityStats:
    common_subdiscussions: int
    co_posts_within_window: int
    votes_a_on_b: int
    votes_b_on_a: int
    positive_vote_fraction: float | None
    posts_before_second_fraction: float | None

    @property
    def cross_votes(self) -> int:
        return self.votes_a_on_b + self.votes_b_on_a


def _check_account(corpus: Corpus, account: str) -> None:
    if account not in corpus.accounts:
        raise KeyError(f"unknown account {account!r}")


def count_co_posts(corpus: Corpus, a: str, b: str, window_minutes: float) -> int:
    """Unordered (a-post, b-post) pairs in one discussion at most ``window`` apart."""
    window = window_minutes * 60.0
    times_b: dict[str, list[int]] = defaultdict(list)
    for p in corpus.posts_of(b):
        times_b[p.discussion_id].append(p.timestamp)
    total = 0
    for p in corpus.posts_of(a):
        for t in times_b.get(p.discussion_id, ()):
            if abs(p.timestamp - t) <= window:
                total += 1
    return total


def votes_on(corpus: Corpus, voter: str, author: str) -> list[int]:
    return list(corpus.vote_signs(voter, author))


def pair_activity(
    corpus: Corpus,
    pair: tuple[str, str],
    window_minutes: float = DEFAULT_WINDOW_MINUTES,
) -> PairActivityStats:
    a, b = pair
    _check_account(corpus, a)
    _check_account(corpus, b)
    a_on_b = votes_on(corpus, a, b)
    b_on_a = votes_on(corpus, b, a)
    cross = a_on_b + b_on_a
    try:
        before = creation_timing(corpus, (a, b))
    except ValueError:
        before = None
    return PairActivityStats(
        common_subdiscussions=len(corpus.subdiscussions_of(a) & corpus.subdiscussions_of(b)),
        co_posts_within_window=count_co_posts(corpus, a, b, window_minutes),
        votes_a_on_b=len(a_on_b),
        votes_b_on_a=len(b_on_a),
        positive_vote_fraction=(sum(1 for s in cross if s > 0) / len(cross)) if cross else None,
        posts_before_second_fraction=before,
    )


def creation_timing(corpus: Corpus, group: SockGroup | Iterable[str]) -> float:
    """Share of the first member's posts made before the second member's first post.

    Members are ordered by first post (timestamp, then post id). Posts at
    the same second as the second member's debut do not count as before.
    """
    members = [m for m in _members(group) if corpus.posts_of(m)]
    if len(members) < 2:
        raise ValueError("need at least two members with posts")
    members.sort(key=lambda m: (corpus.posts_of(m)[0].timestamp, corpus.posts_of(m)[0].post_id))
    first_posts = corpus.posts_of(members[0])
    debut = corpus.posts_of(members[1])[0].timestamp
    return sum(1 for p in first_posts if p.timestamp < debut) / len(first_posts)


@dataclass
class CommunityFeedback:
    downvote_fraction: float | None
    reported_fraction: float
    deleted_fraction: float
    blocked: bool

    @property
    def upvote_fraction(self) -> float | None:
        return None if self.downvote_fraction is None else 1.0 - self.downvote_fraction


def community_feedback(corpus: Corpus, account: str) -> CommunityFeedback:
    posts = corpus.posts_of(account)
    if not posts:
        raise ValueError(f"account {account!r} has no posts")
    up = sum(p.upvotes for p in posts)
    down = sum(p.downvotes for p in posts)
    return CommunityFeedback(
        downvote_fraction=down / (up + down) if up + down else None,
        reported_fraction=sum(p.reported for p in posts) / len(posts),
        deleted_fraction=sum(p.deleted for p in posts) / len(posts),
        blocked=corpus.accounts[account].blocked,
    )


def topic_histogram(topics: dict[str, str], discussions: Iterable[str]) -> dict[str, int] | None:
    """Counts of discussion topics, or None when no topic labels are known."""
    if not topics:
        return None
    hist: dict[str, int] = defaultdict(int)
    for d in discussions:
        if d in topics:
            hist[topics[d]] += 1
    return dict(sorted(hist.items()))
