"""Sockpuppet types: deceptiveness, supportiveness, and ordinary-user matching."""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .detect import SockGroup, sockpuppet_accounts
from .ingest import Account, Corpus
from .text import Lexicon, text_agreement

DEFAULT_NAME_THRESHOLD = 5


def levenshtein(a: str, b: str, casefold: bool = False) -> int:
    """Unit-cost edit distance over NFC-normalized code points."""
    a = unicodedata.normalize("NFC", a)
    b = unicodedata.normalize("NFC", b)
    if casefold:
        a, b = a.casefold(), b.casefold()
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


class Deceptiveness(str, Enum):
    PRETENDER = "pretender"
    NON_PRETENDER = "non-pretender"


class Supportiveness(str, Enum):
    SUPPORTER = "supporter"
    NON_SUPPORTER = "non-supporter"
    DISSENTER = "dissenter"


@dataclass(frozen=True)
class DeceptivenessLabel:
    name_distance: int
    email_distance: int
    label: Deceptiveness


def classify_deceptiveness(
    pair: tuple[str, str],
    accounts: Mapping[str, Account],
    threshold: int = DEFAULT_NAME_THRESHOLD,
    casefold: bool = False,
) -> DeceptivenessLabel:
    """Pretender iff the display names are at least ``threshold`` edits apart."""
    a, b = (accounts[x] for x in pair)
    if a.display_name is None or b.display_name is None:
        raise ValueError("missing display name")
    name_distance = levenshtein(a.display_name, b.display_name, casefold)
    email_distance = levenshtein(a.email_local_part, b.email_local_part, casefold)
    label = Deceptiveness.NON_PRETENDER if name_distance < threshold else Deceptiveness.PRETENDER
    return DeceptivenessLabel(name_distance, email_distance, label)


def name_distance_histogram(distances: Iterable[int]) -> dict[int, int]:
    return dict(sorted(Counter(distances).items()))


@dataclass(frozen=True)
class Interaction:
    replying: str
    target: str
    post_id: str
    via: str | None
    adjusted_agreement: float

    @property
    def via_intermediary(self) -> bool:
        return self.via is not None


@dataclass
class SupportivenessLabel:
    interactions: list[Interaction] = field(default_factory=list)

    @property
    def score(self) -> float | None:
        if not self.interactions:
            return None
        return sum(i.adjusted_agreement for i in self.interactions) / len(self.interactions)

    @property
    def label(self) -> Supportiveness | None:
        """None means the pair never interacted."""
        score = self.score
        if score is None:
            return None
        if score > 0:
            return Supportiveness.SUPPORTER
        if score < 0:
            return Supportiveness.DISSENTER
        return Supportiveness.NON_SUPPORTER


def classify_supportiveness(corpus: Corpus, pair: tuple[str, str], lexicon: Lexicon) -> SupportivenessLabel:
    """Agreement of the replying account ``pair[1]`` toward ``pair[0]``.

    Direct replies count with their own agreement score. A reply to a third
    user's post that itself replied to ``pair[0]`` counts with the sign
    flipped when that intermediate post disagreed. Longer chains are
    ignored.
    """
    s1, s2 = pair
    result = SupportivenessLabel()
    for post in corpus.posts_of(s2):
        if post.parent_id is None:
            continue
        parent = corpus.post_by_id[post.parent_id]
        if parent.author_id == s1:
            score = text_agreement(post.text, lexicon)
            result.interactions.append(Interaction(s2, s1, post.post_id, None, score))
            continue
        if parent.author_id == s2 or parent.parent_id is None:
            continue
        grandparent = corpus.post_by_id[parent.parent_id]
        if grandparent.author_id != s1:
            continue
        score = text_agreement(post.text, lexicon)
        if text_agreement(parent.text, lexicon) < 0:
            score = -score
        result.interactions.append(Interaction(s2, s1, post.post_id, parent.author_id, score))
    return result


# -- matching -----------------------------------------------------------------


@dataclass(frozen=True)
class MatchPair:
    sockpuppet: str
    ordinary: str | None
    post_count_ratio: float | None = None
    discussion_jaccard: float | None = None
    score: float | None = None

    @property
    def matched(self) -> bool:
        return self.ordinary is not None


def _jaccard(a: set[str], b: set[str]) -> float:
    union = a | b
    return len(a & b) / len(union) if union else 0.0


def match_score(sock_posts: int, sock_discussions: set[str], cand_posts: int, cand_discussions: set[str]) -> tuple[float, float, float]:
    """Return ``(score, post_count_ratio, jaccard)`` for a candidate."""
    ratio = cand_posts / sock_posts
    jac = _jaccard(sock_discussions, cand_discussions)
    return abs(math.log(ratio)) - jac, ratio, jac


def _within_caliper(ratio: float, jaccard: float) -> bool:
    return not (max(ratio, 1.0 / ratio) > 2.0 and jaccard == 0.0)


def _activity_table(corpus: Corpus) -> dict[str, tuple[int, set[str]]]:
    return {
        acct: (len(corpus.posts_of(acct)), corpus.discussions_of(acct))
        for acct in corpus.accounts
        if corpus.posts_of(acct)
    }


def match_ordinary(
    corpus: Corpus,
    sockpuppet: str,
    groups: Iterable[SockGroup],
    exclude: Iterable[str] = (),
    _table: Mapping[str, tuple[int, set[str]]] | None = None,
) -> MatchPair:
    """Closest ordinary account by post count and discussion overlap.

    Score is ``|ln(posts_o / posts_s)| - jaccard(discussions)``, lower is
    better, ties broken by account id. Candidates whose post counts differ
    by more than a factor two while sharing no discussion are rejected.
    """
    socks = sockpuppet_accounts(groups) | {sockpuppet}
    taken = set(exclude)
    table = _table if _table is not None else _activity_table(corpus)
    if sockpuppet not in table:
        raise ValueError(f"sockpuppet {sockpuppet!r} has no posts")
    sock_posts, sock_disc = table[sockpuppet]
    best = None
    for acct, (n, discussions) in table.items():
        if acct in socks or acct in taken:
            continue
        score, ratio, jac = match_score(sock_posts, sock_disc, n, discussions)
        if not _within_caliper(ratio, jac):
            continue
        key = (score, acct)
        if best is None or key < best[0]:
            best = (key, ratio, jac)
    if best is None:
        return MatchPair(sockpuppet, None)
    (score, acct), ratio, jac = best
    return MatchPair(sockpuppet, acct, ratio, jac, score)


def match_batch(corpus: Corpus, sockpuppets: Sequence[str], groups: Sequence[SockGroup]) -> list[MatchPair]:
    """Greedy matching without replacement, sockpuppets taken in id order."""
    groups = list(groups)
    table = _activity_table(corpus)
    used: set[str] = set()
    out = []
    for sock in sorted(sockpuppets):
        match = match_ordinary(corpus, sock, groups, exclude=used, _table=table)
        if match.matched:
            used.add(match.ordinary)
        out.append(match)
    return out


# -- joint table --------------------------------------------------------------


def joint_table(
    labels: Iterable[tuple[Deceptiveness, Supportiveness]],
) -> dict[str, dict[str, float | None]]:
    """Row-normalized pretender shares within each supportiveness class.

    Rows with no pairs have ``None`` entries.
    """
    labels = [(Deceptiveness(d), Supportiveness(s)) for d, s in labels]
    if not labels:
        raise ValueError("no labeled pairs")
    counts = Counter(labels)
    table: dict[str, dict[str, float | None]] = {}
    for sup in Supportiveness:
        total = sum(counts[(d, sup)] for d in Deceptiveness)
        table[sup.value] = {
            d.value: (counts[(d, sup)] / total if total else None) for d in Deceptiveness
        }
        table[sup.value]["n"] = total
    return table


@dataclass
class PairTaxonomy:
    primary: str
    secondary: str
    deceptiveness: DeceptivenessLabel
    supportiveness: SupportivenessLabel

    def to_dict(self) -> dict:
        sup = self.supportiveness
        return {
            "primary": self.primary,
            "secondary": self.secondary,
            "name_distance": self.deceptiveness.name_distance,
            "email_distance": self.deceptiveness.email_distance,
            "deceptiveness": self.deceptiveness.label.value,
            "supportiveness": sup.label.value if sup.label else "no interaction",
            "agreement": sup.score,
            "interactions": len(sup.interactions),
        }


def classify_groups(
    corpus: Corpus,
    groups: Iterable[SockGroup],
    lexicon: Lexicon,
    threshold: int = DEFAULT_NAME_THRESHOLD,
    casefold: bool = False,
) -> list[PairTaxonomy]:
    """Label every (primary, secondary) pair of every group."""
    out = []
    for group in groups:
        if group.primary is None:
            raise ValueError("group has no primary; run designate_primary first")
        for sec in group.secondaries:
            pair = (group.primary, sec)
            out.append(PairTaxonomy(
                group.primary,
                sec,
                classify_deceptiveness(pair, corpus.accounts, threshold, casefold),
                classify_supportiveness(corpus, pair, lexicon),
            ))
    return out


def taxonomy_report(pairs: Sequence[PairTaxonomy]) -> dict:
    labeled = [
        (p.deceptiveness.label, p.supportiveness.label)
        for p in pairs
        if p.supportiveness.label is not None
    ]
    return {
        "pairs": [p.to_dict() for p in pairs],
        "name_distance_histogram": {
            str(k): v for k, v in name_distance_histogram(p.deceptiveness.name_distance for p in pairs).items()
        },
        "joint_table": joint_table(labeled) if labeled else None,
    }
