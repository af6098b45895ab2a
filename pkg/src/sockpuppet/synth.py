"""Synthetic discussion communities with planted sockpuppet groups.

The generator plants groups that satisfy the co-posting rule, gives every
pair a deceptiveness and supportiveness label that the taxonomy module can
recover, and audits the result before returning it:

* accounts tagged "ordinary" post from their own home IP only;
* a "shared-ip" population posts through public IPs (NAT/proxy-like
  addresses), enough of them that IP trimming removes exactly those;
* a handful of "roamer" accounts use many IPs so that account trimming
  removes exactly them;
* no non-sockpuppet account may end up in a detected pair.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Union

import numpy as np

from .detect import DetectionParams, detect_groups, filter_noisy
from .ingest import Account, Corpus, Post, VoteRecord, build_corpus, write_corpus
from .taxonomy import Deceptiveness, Supportiveness, levenshtein
from .text import ASSENT, DISSENT, NEGATION, default_lexicon

TRUTH_FILE = "truth.json"

ORDINARY_VOCABULARY = {
    "the": 8.0, "a": 4.0, "of": 5.0, "to": 4.0, "in": 4.0, "and": 4.0, "this": 2.0, "that": 2.0,
    "is": 3.0, "was": 2.0, "they": 1.5, "their": 1.5, "he": 1.0, "she": 1.0, "it": 2.0, "for": 2.0,
    "policy": 1.0, "government": 1.0, "economy": 1.0, "market": 1.0, "report": 1.0, "article": 1.0,
    "team": 1.0, "season": 1.0, "players": 1.0, "council": 1.0, "budget": 1.0, "election": 1.0,
    "evidence": 1.0, "analysis": 1.0, "research": 1.0, "public": 1.0, "history": 1.0, "several": 1.0,
    "important": 1.0, "interesting": 1.0, "different": 1.0, "however": 1.0, "because": 1.0,
    "although": 0.8, "community": 1.0, "development": 0.8, "information": 0.8, "question": 1.0,
    "situation": 0.8, "experience": 0.8, "considering": 0.6, "particular": 0.6, "numbers": 0.8,
    "results": 0.8, "writer": 0.6, "coverage": 0.6, "years": 1.0, "local": 1.0, "national": 0.8,
}

SOCK_VOCABULARY = {
    "i": 6.0, "me": 3.0, "my": 3.0, "you": 4.0, "your": 2.0, "just": 2.0, "really": 2.0, "damn": 1.0,
    "hell": 1.0, "crap": 1.0, "lol": 1.5, "guys": 1.0, "stupid": 1.0, "idiot": 1.0, "people": 1.5,
    "think": 1.5, "know": 1.5, "want": 1.0, "get": 1.0, "got": 1.0, "gonna": 1.0, "what": 1.0,
    "this": 1.0, "it": 1.5, "is": 1.5, "so": 1.0, "they": 1.0, "all": 1.0, "again": 0.8, "hate": 0.8,
    "love": 0.8, "bad": 0.8, "worst": 0.6, "care": 0.6, "say": 0.8, "dude": 0.6, "man": 0.6,
}

SUPPORT_PHRASES = ("I agree", "so true", "exactly", "yes", "absolutely", "totally agree")
DISSENT_PHRASES = ("no", "wrong", "nonsense", "I disagree", "ridiculous")

_NAME_PARTS = (
    "Patriot", "Truth", "Eagle", "River", "Stone", "Wolf", "Liberty", "Maple", "Falcon", "Shadow",
    "Sunny", "Prairie", "Harbor", "Cedar", "Comet", "Tiger", "Quiet", "Rusty", "Silver", "Nova",
    "Echo", "Frost", "Lucky", "Major", "Pixel", "Rider", "Ranger", "Viking", "Willow", "Zephyr",
)
_NAME_TAILS = ("Guy", "Fan", "Seeker", "Dog", "Man", "Lady", "Kid", "Pro", "Talk", "Watch", "")


@dataclass(frozen=True)
class PopulationStyle:
    """Behavioral signature of a population of accounts."""

    vocabulary: dict[str, float]
    posts_mean: float = 15.0
    posts_sigma: float = 0.8
    sentence_words: float = 12.0
    sentences_per_post: float = 2.0
    reply_probability: float = 0.4
    exclaim_probability: float = 0.05
    votes_per_post: float = 4.0
    downvote_share: float = 0.4
    report_probability: float = 0.03
    delete_probability: float = 0.03
    blocked_probability: float = 0.02


def ordinary_style() -> PopulationStyle:
    return PopulationStyle(vocabulary=dict(ORDINARY_VOCABULARY))


def sock_style() -> PopulationStyle:
    return PopulationStyle(
        vocabulary=dict(SOCK_VOCABULARY),
        posts_mean=25.0,
        posts_sigma=0.5,
        sentence_words=7.0,
        sentences_per_post=1.6,
        reply_probability=0.7,
        exclaim_probability=0.3,
        votes_per_post=4.0,
        downvote_share=0.52,
        report_probability=0.1,
        delete_probability=0.08,
        blocked_probability=0.1,
    )


@dataclass(frozen=True)
class GeneratorConfig:
    n_ordinary: int = 200
    n_groups: int = 20
    group_size_distribution: tuple[float, float, float] = (1.0, 0.0, 0.0)  # sizes 2, 3, 4
    n_discussions: int = 60
    span_days: float = 60.0
    discussion_hours: float = 48.0
    co_post_discussions: int = 4
    co_post_rate: float = 1.5
    co_post_gap_minutes: float = 2.0
    shared_ip_probability: float = 1.0
    pretender_fraction: float = 0.5
    pretender_fraction_by_support: dict[str, float] | None = None
    support_mix: tuple[float, float, float] = (0.3, 0.6, 0.1)  # supporter, non-supporter, dissenter
    planted_replies: int = 2
    vote_ring_rate: float = 4.0
    ordinary_votes_per_account: float = 3.0
    ordinary: PopulationStyle = field(default_factory=ordinary_style)
    sockpuppet: PopulationStyle = field(default_factory=sock_style)
    group_vocabulary_concentration: float = 0.0
    detection: DetectionParams = DetectionParams()
    seed: int = 0

    def __post_init__(self):
        for name in ("n_ordinary", "n_groups", "n_discussions", "co_post_discussions", "planted_replies"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("shared_ip_probability", "pretender_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        for name in ("group_size_distribution", "support_mix"):
            probs = getattr(self, name)
            if len(probs) != 3 or any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
                raise ValueError(f"{name} must be three probabilities summing to 1")
        for key, value in (self.pretender_fraction_by_support or {}).items():
            Supportiveness(key)
            if not 0.0 <= value <= 1.0:
                raise ValueError("pretender fractions must lie in [0, 1]")
        if self.n_discussions < max(self.co_post_discussions, 1):
            raise ValueError("need at least co_post_discussions discussions")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GeneratorConfig":
        d = dict(d)
        for key in ("ordinary", "sockpuppet"):
            if key in d and isinstance(d[key], dict):
                base = ordinary_style() if key == "ordinary" else sock_style()
                d[key] = replace(base, **d[key])
        if isinstance(d.get("detection"), dict):
            d["detection"] = DetectionParams(**d["detection"])
        for key in ("group_size_distribution", "support_mix"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)


@dataclass
class PlantedPair:
    primary: str
    secondary: str
    deceptiveness: Deceptiveness
    supportiveness: Supportiveness


@dataclass
class GroundTruth:
    groups: list[dict[str, Any]]
    pairs: list[PlantedPair]
    populations: dict[str, str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "groups": self.groups,
            "pairs": [
                {
                    "primary": p.primary,
                    "secondary": p.secondary,
                    "deceptiveness": p.deceptiveness.value,
                    "supportiveness": p.supportiveness.value,
                }
                for p in self.pairs
            ],
            "populations": dict(sorted(self.populations.items())),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GroundTruth":
        return cls(
            groups=d["groups"],
            pairs=[
                PlantedPair(p["primary"], p["secondary"], Deceptiveness(p["deceptiveness"]), Supportiveness(p["supportiveness"]))
                for p in d["pairs"]
            ],
            populations=d["populations"],
        )

    def group_sets(self) -> set[frozenset[str]]:
        return {frozenset(g["members"]) for g in self.groups}


def _clean_vocabulary(vocab: dict[str, float]) -> tuple[list[str], np.ndarray]:
    """Drop words that would carry agreement signal; return words and probabilities."""
    lex = default_lexicon()
    words = sorted(
        w for w in vocab
        if not any(lex.matches(c, w) for c in (ASSENT, NEGATION, DISSENT))
    )
    if not words:
        raise ValueError("vocabulary is empty after removing agreement words")
    weights = np.array([vocab[w] for w in words], dtype=float)
    return words, weights / weights.sum()


class _Writer:
    """Random post text for one vocabulary distribution."""

    def __init__(self, words: list[str], probs: np.ndarray, style: PopulationStyle):
        self.words = words
        self.probs = probs
        self.style = style

    def text(self, rng: np.random.Generator, lead: str | None = None) -> str:
        n_sent = 1 + rng.poisson(max(self.style.sentences_per_post - 1.0, 0.0))
        sentences = []
        for i in range(n_sent):
            n_words = max(2, int(rng.poisson(self.style.sentence_words)))
            ws = list(rng.choice(self.words, size=n_words, p=self.probs))
            if i == 0 and lead:
                ws = lead.split() + ws
            sentence = " ".join(ws)
            end = "!" if rng.random() < self.style.exclaim_probability else "."
            sentences.append(sentence[0].upper() + sentence[1:] + end)
        return " ".join(sentences)


def _random_name(rng: np.random.Generator) -> str:
    head = _NAME_PARTS[rng.integers(len(_NAME_PARTS))]
    tail = _NAME_TAILS[rng.integers(len(_NAME_TAILS))]
    return f"{head}{tail}{rng.integers(10, 1000)}"


def _variant_name(base: str, rng: np.random.Generator) -> str:
    """A name fewer than 5 edits away: one or two appended or changed characters."""
    suffix = str(rng.integers(1, 100))
    return base + suffix


def _distinct_name(base: str, rng: np.random.Generator, min_distance: int) -> str:
    while True:
        name = _random_name(rng)
        if levenshtein(name, base) >= min_distance:
            return name


@dataclass
class _Intent:
    author: str
    discussion: int
    t: int
    ip: str
    style: str
    reply: bool
    lead: str | None = None
    parent_of: int | None = None  # index of the intent this one replies to
    order: int = 0


class _IPPlan:
    """Sizes the shared-IP and roamer pools so trimming removes exactly them.

    Trimming drops the top share of IPs by distinct accounts. Without
    decoys those would be the planted group IPs, so a small "shared-ip"
    population posts through public IPs that each carry more accounts than
    any planted group. Likewise a few roamers carry more IPs than anyone
    else and absorb the account trim.
    """

    publics_per_user = 3

    def __init__(self, config: GeneratorConfig, max_group: int, n_sock_accounts: int):
        det = config.detection
        n_ord = config.n_ordinary
        self.per_public = max_group + 3
        n_accounts = n_ord + n_sock_accounts
        self.n_roamers = 0
        if det.account_trim_fraction > 0:
            self.n_roamers = math.ceil(det.account_trim_fraction * n_accounts - 1e-9) + 1
        self.roamer_extra = self.publics_per_user + 4
        base_ips = n_ord + self.n_roamers * self.roamer_extra + config.n_groups + n_sock_accounts
        n_public = 0
        if det.ip_trim_fraction > 0:
            while n_public < math.ceil(det.ip_trim_fraction * (base_ips + n_public) - 1e-9):
                n_public += 1
        n_shared = 0
        if n_public:
            n_shared = max(self.per_public, math.ceil(n_public * self.per_public / self.publics_per_user))
        if self.n_roamers + n_shared > n_ord:
            raise ValueError(
                f"infeasible config: need {self.n_roamers + n_shared} ordinary accounts for the "
                f"roamer and shared-IP pools, have {n_ord}"
            )
        self.n_public = n_public
        self.n_shared = n_shared


def generate_community(config: GeneratorConfig) -> tuple[Corpus, GroundTruth]:
    """Generate a corpus and its ground truth; deterministic for a given config."""
    rng = np.random.default_rng(config.seed)
    sizes = rng.choice([2, 3, 4], size=config.n_groups, p=config.group_size_distribution)
    n_sock = int(sizes.sum())
    n_total = config.n_ordinary + n_sock
    plan = _IPPlan(config, int(sizes.max()) if n_sock else 2, n_sock)

    width = max(5, len(str(n_total)))
    ids = [f"u{i:0{width}d}" for i in rng.permutation(n_total)]
    ordinary_ids = sorted(ids[: config.n_ordinary])
    sock_ids = ids[config.n_ordinary:]
    roamers = set(ordinary_ids[: plan.n_roamers]) if plan.n_roamers else set()

    span = config.span_days * 86400.0
    disc_len = config.discussion_hours * 3600.0
    disc_start = np.sort(rng.uniform(0, max(span - disc_len, 1.0), size=config.n_discussions)).astype(np.int64)
    disc_popularity = rng.dirichlet(np.ones(config.n_discussions) * 2.0)
    disc_ids = [f"d{i:05d}" for i in range(config.n_discussions)]

    ord_words, ord_probs = _clean_vocabulary(config.ordinary.vocabulary)
    sock_words, sock_probs = _clean_vocabulary(config.sockpuppet.vocabulary)
    writers = {"ordinary": _Writer(ord_words, ord_probs, config.ordinary)}
    styles = {"ordinary": config.ordinary}

    intents: list[_Intent] = []
    accounts: dict[str, Account] = {}
    populations: dict[str, str] = {}

    def draw_count(style: PopulationStyle) -> int:
        mu = math.log(max(style.posts_mean, 1.0)) - style.posts_sigma ** 2 / 2
        return max(1, int(round(rng.lognormal(mu, style.posts_sigma))))

    def random_time(d: int) -> int:
        return int(disc_start[d] + rng.uniform(0, disc_len))

    # -- ordinary accounts ----------------------------------------------------
    shared = [a for a in ordinary_ids if a not in roamers][: plan.n_shared]
    public_users: dict[str, list[str]] = {a: [] for a in shared}
    for j in range(plan.n_public):
        for k in range(plan.per_public):
            public_users[shared[(j * plan.per_public + k) % len(shared)]].append(f"ip-pub-{j:04d}")

    for acct in ordinary_ids:
        style = config.ordinary
        home = f"ip-home-{acct}"
        extra = [f"ip-roam-{acct}-{k}" for k in range(plan.roamer_extra)] if acct in roamers else []
        publics = public_users.get(acct, [])
        n_posts = max(draw_count(style), 2 + len(extra) + len(publics))
        forced_ips = ([home] if extra else []) + extra + publics
        for k in range(n_posts):
            d = int(rng.choice(config.n_discussions, p=disc_popularity))
            if k < len(forced_ips):
                ip = forced_ips[k]
            elif publics and rng.random() < 0.2:
                ip = publics[int(rng.integers(len(publics)))]
            elif extra and rng.random() < 0.5:
                ip = extra[int(rng.integers(len(extra)))]
            else:
                ip = home
            intents.append(_Intent(acct, d, random_time(d), ip, "ordinary", rng.random() < style.reply_probability))
        name = _random_name(rng)
        accounts[acct] = Account(acct, name, name.lower(), bool(rng.random() < style.blocked_probability))
        populations[acct] = "roamer" if acct in roamers else "shared-ip" if acct in public_users else "ordinary"

    # -- planted groups -------------------------------------------------------
    truth_groups = []
    planted_pairs: list[PlantedPair] = []
    support_kinds = list(Supportiveness)
    pos = 0
    gap_cap = max(config.detection.window_minutes * 60.0 - 60.0, 0.0)
    for g, size in enumerate(sizes):
        members = sock_ids[pos: pos + size]
        pos += size
        writer = _Writer(sock_words, sock_probs, config.sockpuppet)
        if config.group_vocabulary_concentration > 0:
            probs = rng.dirichlet(sock_probs * config.group_vocabulary_concentration * len(sock_probs))
            probs = np.maximum(probs, 1e-12)
            writer = _Writer(sock_words, probs / probs.sum(), config.sockpuppet)
        style_key = f"group{g}"
        writers[style_key] = writer
        styles[style_key] = config.sockpuppet
        group_ip = f"ip-group-{g:05d}"

        counts = sorted((draw_count(config.sockpuppet) for _ in members), reverse=True)
        primary = members[0]
        counts[0] = max(counts[0], counts[1] + 3 if len(counts) > 1 else counts[0])
        home_disc = list(rng.choice(config.n_discussions, size=min(8, config.n_discussions), replace=False, p=disc_popularity))
        for idx, acct in enumerate(members):
            n_posts = counts[idx]
            for _ in range(n_posts):
                d = int(home_disc[rng.integers(len(home_disc))]) if rng.random() < 0.6 else int(
                    rng.choice(config.n_discussions, p=disc_popularity)
                )
                t = random_time(d)
                ip = group_ip if rng.random() < config.shared_ip_probability else f"ip-home-{acct}"
                intents.append(_Intent(acct, d, t, ip, style_key, rng.random() < config.sockpuppet.reply_probability))

        event_discs = rng.choice(config.n_discussions, size=config.co_post_discussions, replace=False)
        planted_targets: list[tuple[int, int]] = []  # (primary intent idx, secondary intent idx)
        for d in event_discs:
            n_events = max(1, int(rng.poisson(config.co_post_rate)))
            for _ in range(n_events):
                t = random_time(int(d))
                offsets = np.cumsum(rng.exponential(config.co_post_gap_minutes * 60.0, size=len(members) - 1))
                offsets = np.minimum(offsets, gap_cap)
                times = [t] + [t + int(o) + 1 for o in offsets]
                first = len(intents)
                for acct, tt in zip(members, times):
                    ip = group_ip if rng.random() < config.shared_ip_probability else f"ip-home-{acct}"
                    intents.append(_Intent(acct, int(d), int(tt), ip, style_key, False))
                for k in range(1, len(members)):
                    planted_targets.append((first, first + k))

        pairs_for_group = []
        primary_name = _random_name(rng)
        accounts[primary] = Account(primary, primary_name, primary_name.lower(), bool(rng.random() < config.sockpuppet.blocked_probability))
        for sec in members[1:]:
            support = support_kinds[int(rng.choice(3, p=config.support_mix))]
            frac = (config.pretender_fraction_by_support or {}).get(support.value, config.pretender_fraction)
            pretender = rng.random() < frac
            if pretender:
                name = _distinct_name(primary_name, rng, 5)
                email = _distinct_name(primary_name.lower(), rng, 5).lower()
            else:
                name = _variant_name(primary_name, rng)
                email = _variant_name(primary_name.lower(), rng)
            accounts[sec] = Account(sec, name, email, bool(rng.random() < config.sockpuppet.blocked_probability))
            label = Deceptiveness.PRETENDER if pretender else Deceptiveness.NON_PRETENDER
            planted_pairs.append(PlantedPair(primary, sec, label, support))
            pairs_for_group.append(support)

            # planted direct replies from this secondary to the primary
            mine = [(p, s) for p, s in planted_targets if intents[s].author == sec]
            n_replies = max(1, config.planted_replies)
            for p_idx, s_idx in mine[:n_replies]:
                lead = None
                if support is Supportiveness.SUPPORTER:
                    lead = SUPPORT_PHRASES[int(rng.integers(len(SUPPORT_PHRASES)))]
                elif support is Supportiveness.DISSENTER:
                    lead = DISSENT_PHRASES[int(rng.integers(len(DISSENT_PHRASES)))]
                intents[s_idx].reply = True
                intents[s_idx].parent_of = p_idx
                intents[s_idx].lead = lead
        for acct in members:
            populations[acct] = "sockpuppet"
        truth_groups.append({"members": sorted(members), "primary": primary})

    # -- assemble posts -------------------------------------------------------
    for i, it in enumerate(intents):
        it.order = i
    ordered = sorted(range(len(intents)), key=lambda i: (intents[i].t, i))
    post_ids: dict[int, str] = {}
    pwidth = max(6, len(str(len(intents))))
    by_discussion: dict[int, list[str]] = {}
    posts: list[Post] = []
    for rank, i in enumerate(ordered):
        it = intents[i]
        pid = f"p{rank:0{pwidth}d}"
        post_ids[i] = pid
        earlier = by_discussion.setdefault(it.discussion, [])
        parent = None
        if it.parent_of is not None:
            parent = post_ids[it.parent_of]
        elif it.reply and earlier:
            parent = earlier[int(rng.integers(len(earlier)))]
        earlier.append(pid)
        style = styles[it.style]
        text = writers[it.style].text(rng, it.lead)
        n_votes = int(rng.poisson(style.votes_per_post))
        down = int(rng.binomial(n_votes, style.downvote_share))
        posts.append(Post(
            post_id=pid,
            author_id=it.author,
            discussion_id=disc_ids[it.discussion],
            parent_id=parent,
            ip=it.ip,
            timestamp=int(it.t),
            text=text,
            upvotes=n_votes - down,
            downvotes=down,
            reported=bool(rng.random() < style.report_probability),
            deleted=bool(rng.random() < style.delete_probability),
        ))

    # -- votes ------------------------------------------------------------------
    votes: dict[tuple[str, str], int] = {}
    posts_by_author: dict[str, list[int]] = {}
    for idx, p in enumerate(posts):
        posts_by_author.setdefault(p.author_id, []).append(idx)
    for pair in planted_pairs:
        targets = posts_by_author.get(pair.primary, [])
        n = min(int(rng.poisson(config.vote_ring_rate)), len(targets))
        for idx in rng.choice(len(targets), size=n, replace=False) if n else []:
            sign = 1 if rng.random() < 0.98 else -1
            votes[(pair.secondary, posts[targets[int(idx)]].post_id)] = sign
    for acct in ordinary_ids:
        n = int(rng.poisson(config.ordinary_votes_per_account))
        for _ in range(n):
            p = posts[int(rng.integers(len(posts)))]
            if p.author_id == acct:
                continue
            votes[(acct, p.post_id)] = 1 if rng.random() < 0.9 else -1
    vote_records = [VoteRecord(v, p, s) for (v, p), s in sorted(votes.items())]
    # fold cast votes into the per-post counters
    extra_up: dict[str, int] = {}
    extra_down: dict[str, int] = {}
    for rec in vote_records:
        bucket = extra_up if rec.sign > 0 else extra_down
        bucket[rec.post_id] = bucket.get(rec.post_id, 0) + 1
    posts = [
        replace(p, upvotes=p.upvotes + extra_up.get(p.post_id, 0), downvotes=p.downvotes + extra_down.get(p.post_id, 0))
        for p in posts
    ]

    corpus = build_corpus(accounts.values(), posts, vote_records)
    truth = GroundTruth(sorted(truth_groups, key=lambda g: g["members"][0]), planted_pairs, populations)
    audit_community(corpus, truth, config)
    return corpus, truth


def audit_community(corpus: Corpus, truth: GroundTruth, config: GeneratorConfig) -> None:
    """Reject generated corpora that break the planted-signal guarantees."""
    params = config.detection
    owners: dict[str, set[str]] = {}
    for post in corpus.posts:
        owners.setdefault(post.ip, set()).add(post.author_id)
    for ip, accts in owners.items():
        if len(accts) > 1 and any(truth.populations[a] == "ordinary" for a in accts):
            raise ValueError(f"audit failed: ordinary account shares IP {ip}")
    exclusions = filter_noisy(corpus, params)
    socks = {a for a, pop in truth.populations.items() if pop == "sockpuppet"}
    trimmed_socks = exclusions.accounts & socks
    if trimmed_socks and config.shared_ip_probability > 0:
        raise ValueError(f"audit failed: sockpuppets trimmed as IP roamers: {sorted(trimmed_socks)[:5]}")
    detected = detect_groups(corpus, params)
    contaminated = sorted({m for g in detected for m in g.members} - socks)
    if contaminated:
        raise ValueError(f"audit failed: non-sockpuppet accounts satisfy the detection rule: {contaminated[:5]}")
    guaranteed = (
        config.shared_ip_probability == 1.0
        and config.co_post_discussions >= params.min_discussions
        and params.window_minutes >= 1.0
    )
    if guaranteed:
        found = {frozenset(g.members) for g in detected}
        missing = truth.group_sets() - found
        if missing:
            raise ValueError(f"audit failed: {len(missing)} planted groups not detectable")


def emit_logs(corpus: Corpus, truth: GroundTruth, directory: Union[str, Path]) -> dict[str, Path]:
    """Write the three logs plus ``truth.json`` into ``directory``."""
    directory = Path(directory)
    paths = write_corpus(corpus, directory)
    truth_path = directory / TRUTH_FILE
    truth_path.write_text(json.dumps(truth.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    paths[TRUTH_FILE] = truth_path
    return paths


def load_truth(path: Union[str, Path]) -> GroundTruth:
    return GroundTruth.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
