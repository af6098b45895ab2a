"""Slow, obviously-correct reference implementations used by the tests."""

from __future__ import annotations

import itertools
import math
from functools import lru_cache


def brute_force_pairs(corpus, window_seconds, min_discussions, excluded_ips=frozenset(), excluded_accounts=frozenset()):
    """Exhaustive check of the co-posting rule over every post pair.

    Returns {(a, b): set of (discussion, post_a, post_b)} for qualifying pairs.
    """
    posts = [
        p for p in corpus.posts
        if p.ip not in excluded_ips and p.author_id not in excluded_accounts
    ]
    evidence = {}
    for p, q in itertools.combinations(posts, 2):
        if p.author_id == q.author_id or p.discussion_id != q.discussion_id or p.ip != q.ip:
            continue
        if abs(p.timestamp - q.timestamp) > window_seconds:
            continue
        if p.author_id > q.author_id:
            p, q = q, p
        evidence.setdefault((p.author_id, q.author_id), set()).add((p.discussion_id, p.post_id, q.post_id))
    return {
        k: v for k, v in evidence.items()
        if len({d for d, _, _ in v}) >= min_discussions
    }


def recursive_levenshtein(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def dense_pagerank(nodes, edges, damping=0.85, iterations=2000):
    """Power iteration on the explicit Google matrix."""
    import numpy as np

    n = len(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    M = np.zeros((n, n))
    out = {v: [] for v in nodes}
    for u, v in edges:
        out[u].append(v)
    for u in nodes:
        if out[u]:
            for v in out[u]:
                M[idx[v], idx[u]] += 1.0 / len(out[u])
        else:
            M[:, idx[u]] = 1.0 / n
    G = damping * M + (1 - damping) / n
    r = np.full(n, 1.0 / n)
    for _ in range(iterations):
        r = G @ r
    return {v: float(r[idx[v]]) for v in nodes}


def naive_clustering(nodes, edges, node):
    """Undirected local clustering: closed neighbor pairs over all neighbor pairs."""
    und = {frozenset(e) for e in edges if e[0] != e[1]}
    nbrs = sorted({x for e in und if node in e for x in e if x != node})
    k = len(nbrs)
    if k < 2:
        return 0.0
    links = sum(1 for a, b in itertools.combinations(nbrs, 2) if frozenset((a, b)) in und)
    return links / (k * (k - 1) / 2)


def naive_reciprocity(nodes, edges, node):
    """Share of directed edges inside the ego network whose reverse also exists."""
    edge_set = set(edges)
    members = {node} | {v for u, v in edge_set if u == node} | {u for u, v in edge_set if v == node}
    inside = [(u, v) for u, v in edge_set if u in members and v in members]
    if not inside:
        return math.nan
    return sum(1 for u, v in inside if (v, u) in edge_set) / len(inside)


def concordance_auc(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            total += 1.0 if p > q else 0.5 if p == q else 0.0
    return total / (len(pos) * len(neg))


def entropy_of_runs(runs):
    """-sum p ln p with p = run length / total posts, accumulated with fsum."""
    total = sum(runs)
    return -math.fsum((r / total) * math.log(r / total) for r in runs)
