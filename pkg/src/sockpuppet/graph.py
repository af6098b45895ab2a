"""Reply network construction and node-level network metrics."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .ingest import Corpus


@dataclass(frozen=True)
class ReplyNetwork:
    nodes: tuple[str, ...]
    weights: Mapping[tuple[str, str], int]

    def __post_init__(self):
        succ: dict[str, set[str]] = {n: set() for n in self.nodes}
        pred: dict[str, set[str]] = {n: set() for n in self.nodes}
        for u, v in self.weights:
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            succ[u].add(v)
            pred[v].add(u)
        object.__setattr__(self, "_succ", {n: frozenset(s) for n, s in succ.items()})
        object.__setattr__(self, "_pred", {n: frozenset(s) for n, s in pred.items()})

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], nodes: Iterable[str] = ()) -> "ReplyNetwork":
        weights: dict[tuple[str, str], int] = defaultdict(int)
        node_set = set(nodes)
        for u, v in edges:
            node_set.update((u, v))
            if u != v:
                weights[(u, v)] += 1
        return cls(tuple(sorted(node_set)), dict(sorted(weights.items())))

    @property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return tuple(self.weights)

    def successors(self, node: str) -> frozenset[str]:
        return self._succ[node]

    def predecessors(self, node: str) -> frozenset[str]:
        return self._pred[node]

    def neighbors(self, node: str) -> frozenset[str]:
        """Undirected neighborhood."""
        return self._succ[node] | self._pred[node]

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.weights

    def _check(self, node: str) -> None:
        if node not in self._succ:
            raise KeyError(f"unknown node {node!r}")

    def to_tsv(self) -> str:
        return "".join(f"{u}\t{v}\t{w}\n" for (u, v), w in self.weights.items())


def build_reply_network(corpus: Corpus) -> ReplyNetwork:
    """Edge A->B weighted by how many times A replied to B's posts.

    Every account is a node, including ones that never reply.
    """
    edges = []
    for post in corpus.posts:
        if post.parent_id is None:
            continue
        target = corpus.author_of(post.parent_id)
        if target != post.author_id:
            edges.append((post.author_id, target))
    return ReplyNetwork.from_edges(edges, nodes=corpus.accounts)


def pagerank(
    network: ReplyNetwork,
    damping: float = 0.85,
    tolerance: float = 1e-8,
    max_iter: int = 200,
) -> dict[str, float]:
    """Power-iteration pagerank on the unweighted graph.

    Teleportation is uniform and the mass of dangling nodes is spread
    uniformly. Stops once the L1 change drops below ``tolerance``.
    """
    if not network.nodes:
        raise ValueError("empty network")
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    nodes = network.nodes
    n = len(nodes)
    index = {node: i for i, node in enumerate(nodes)}
    src = np.array([index[u] for u, _ in network.edges], dtype=np.int64)
    dst = np.array([index[v] for _, v in network.edges], dtype=np.int64)
    out_deg = np.bincount(src, minlength=n).astype(float)
    dangling = out_deg == 0
    share = np.zeros(n)
    share[~dangling] = 1.0 / out_deg[~dangling]
    rank = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        base = (1.0 - damping) / n + damping * rank[dangling].sum() / n
        new = base + damping * np.bincount(dst, weights=rank[src] * share[src], minlength=n)
        delta = np.abs(new - rank).sum()
        rank = new
        if delta < tolerance:
            break
    rank = rank.tolist()
    return dict(zip(nodes, rank))


@dataclass(frozen=True)
class EgoNetwork:
    ego: str
    members: frozenset[str]
    edges: frozenset[tuple[str, str]]

    @property
    def density(self) -> float:
        """Directed density edges / (n (n - 1)); 0 for a lone ego."""
        n = len(self.members)
        return len(self.edges) / (n * (n - 1)) if n > 1 else 0.0


def ego_network(network: ReplyNetwork, node: str) -> EgoNetwork:
    network._check(node)
    members = frozenset({node} | network.neighbors(node))
    edges = frozenset(
        (u, v) for u in members for v in network.successors(u) if v in members
    )
    return EgoNetwork(node, members, edges)


def local_clustering(network: ReplyNetwork, node: str) -> float:
    """Clustering coefficient on the undirected projection."""
    network._check(node)
    nbrs = sorted(network.neighbors(node))
    k = len(nbrs)
    if k < 2:
        return 0.0
    links = 0
    for i, u in enumerate(nbrs):
        adj = network.neighbors(u)
        links += sum(1 for v in nbrs[i + 1:] if v in adj)
    return 2.0 * links / (k * (k - 1))


def reciprocity(ego: EgoNetwork) -> float:
    """Fraction of directed edges whose reverse edge is also present."""
    if not ego.edges:
        raise ValueError("ego network has no edges")
    mutual = sum(1 for u, v in ego.edges if (v, u) in ego.edges)
    return mutual / len(ego.edges)


def initiation_ratio(network: ReplyNetwork, node: str) -> float:
    """Out-degree share of the node's total (distinct-neighbor) degree."""
    network._check(node)
    out_d = len(network.successors(node))
    in_d = len(network.predecessors(node))
    if out_d + in_d == 0:
        raise ValueError(f"node {node!r} is isolated")
    return out_d / (out_d + in_d)


METRICS = ("pagerank", "clustering", "reciprocity", "initiation", "density")


def node_metrics(network: ReplyNetwork, metrics: Iterable[str] = METRICS) -> dict[str, dict[str, float | None]]:
    """Per-node metric table; undefined values (e.g. isolated nodes) are None."""
    metrics = list(metrics)
    unknown = set(metrics) - set(METRICS)
    if unknown:
        raise ValueError(f"unknown metrics: {sorted(unknown)}")
    pr = pagerank(network) if "pagerank" in metrics and network.nodes else {}
    out: dict[str, dict[str, float | None]] = {}
    for node in network.nodes:
        row: dict[str, float | None] = {}
        ego = ego_network(network, node) if {"reciprocity", "density"} & set(metrics) else None
        for m in metrics:
            if m == "pagerank":
                row[m] = pr[node]
            elif m == "clustering":
                row[m] = local_clustering(network, node)
            elif m == "reciprocity":
                row[m] = reciprocity(ego) if ego.edges else None
            elif m == "initiation":
                row[m] = initiation_ratio(network, node) if network.neighbors(node) else None
            elif m == "density":
                row[m] = ego.density
        out[node] = row
    return out
