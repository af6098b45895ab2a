"""Parsing, validation and indexing of community activity logs.

Logs are newline-delimited JSON, one file per record type (posts, accounts,
votes). :func:`build_corpus` assembles parsed records into an immutable
:class:`Corpus` with discussion and sub-discussion indexes.
"""

from __future__ import annotations

import io
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import IO, Any, Iterable, Iterator, Mapping, Sequence, Union

logger = logging.getLogger(__name__)

POSTS_FILE = "posts.jsonl"
ACCOUNTS_FILE = "accounts.jsonl"
VOTES_FILE = "votes.jsonl"


class CorpusError(ValueError):
    """Raised when records cannot be assembled into a consistent corpus."""

    def __init__(self, message: str, offending: Sequence[str] = ()):
        self.offending = tuple(offending)
        if offending:
            message = f"{message}: {', '.join(self.offending)}"
        super().__init__(message)


@dataclass(frozen=True)
class Account:
    account_id: str
    display_name: str = ""
    email_local_part: str = ""
    blocked: bool = False


@dataclass(frozen=True)
class Post:
    post_id: str
    author_id: str
    discussion_id: str
    parent_id: str | None
    ip: str
    timestamp: int
    text: str = ""
    upvotes: int = 0
    downvotes: int = 0
    reported: bool = False
    deleted: bool = False

    @property
    def is_reply(self) -> bool:
        return self.parent_id is not None


@dataclass(frozen=True)
class VoteRecord:
    voter_id: str
    post_id: str
    sign: int


# (key, accepted types, nullable)
_SCHEMAS: dict[str, tuple[tuple[str, tuple[type, ...], bool], ...]] = {
    "posts": (
        ("post_id", (str,), False),
        ("author_id", (str,), False),
        ("discussion_id", (str,), False),
        ("parent_id", (str,), True),
        ("ip", (str,), False),
        ("timestamp", (int,), False),
        ("text", (str,), False),
        ("upvotes", (int,), False),
        ("downvotes", (int,), False),
        ("reported", (bool,), False),
        ("deleted", (bool,), False),
    ),
    "accounts": (
        ("account_id", (str,), False),
        ("display_name", (str,), False),
        ("email_local_part", (str,), False),
        ("blocked", (bool,), False),
    ),
    "votes": (
        ("voter_id", (str,), False),
        ("post_id", (str,), False),
        ("sign", (int,), False),
    ),
}

_RECORD_TYPES = {"posts": Post, "accounts": Account, "votes": VoteRecord}


@dataclass
class ParseResult:
    """Records parsed from one log, in input order, plus rejected lines."""

    records: list = field(default_factory=list)
    rejects: list[tuple[int, str]] = field(default_factory=list)


def _check_value(key: str, value: Any, types: tuple[type, ...], nullable: bool) -> str | None:
    if value is None:
        return None if nullable else f"null {key}"
    # bool is a subclass of int; counts and timestamps must not accept it
    if int in types and bool not in types and isinstance(value, bool):
        return f"invalid {key}"
    if not isinstance(value, types):
        return f"invalid {key}"
    return None


def _validate(obj: Any, fmt: str) -> str | None:
    if not isinstance(obj, dict):
        return "not an object"
    for key, types, nullable in _SCHEMAS[fmt]:
        if key not in obj:
            if nullable:
                continue
            return f"missing {key}"
        problem = _check_value(key, obj[key], types, nullable)
        if problem:
            return problem
    if fmt == "posts":
        for key in ("timestamp", "upvotes", "downvotes"):
            if obj[key] < 0:
                return f"negative {key}"
    if fmt == "votes" and obj["sign"] not in (1, -1):
        return "invalid sign"
    return None


def _iter_lines(stream: Union[IO[bytes], Iterable[bytes]]) -> Iterator[bytes]:
    try:
        yield from stream
    except (OSError, ValueError) as exc:
        raise OSError(f"unreadable stream: {exc}") from exc


def parse_activity_log(stream: Union[IO[bytes], Iterable[bytes]], fmt: str) -> ParseResult:
    """Parse a newline-delimited JSON log.

    Args:
        stream: Binary stream (or iterable of byte lines).
        fmt: One of ``"posts"``, ``"accounts"``, ``"votes"``.

    Returns:
        A :class:`ParseResult`. Lines that fail schema validation end up in
        ``rejects`` as ``(line_no, reason)`` with 1-based line numbers.
        Blank lines are skipped.
    """
    if fmt not in _SCHEMAS:
        raise ValueError(f"unknown log format {fmt!r}")
    known = {key for key, _, _ in _SCHEMAS[fmt]}
    record_type = _RECORD_TYPES[fmt]
    result = ParseResult()
    warned: set[str] = set()
    for line_no, raw in enumerate(_iter_lines(stream), start=1):
        if isinstance(raw, str):
            raw = raw.encode("utf-8")
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw.decode("utf-8"))
        except UnicodeDecodeError:
            result.rejects.append((line_no, "invalid utf-8"))
            continue
        except json.JSONDecodeError:
            result.rejects.append((line_no, "invalid json"))
            continue
        reason = _validate(obj, fmt)
        if reason:
            result.rejects.append((line_no, reason))
            continue
        unknown = set(obj) - known - warned
        if unknown:
            logger.warning("%s log: ignoring unknown keys %s", fmt, sorted(unknown))
            warned |= unknown
        result.records.append(record_type(**{k: obj.get(k) for k in known}))
    return result


def read_log(path: Union[str, Path], fmt: str) -> ParseResult:
    with open(path, "rb") as fh:
        return parse_activity_log(fh, fmt)


def _post_key(post: Post) -> tuple[int, str]:
    return (post.timestamp, post.post_id)


@dataclass(frozen=True)
class Corpus:
    """Immutable, indexed collection of accounts, posts and votes.

    Use :func:`build_corpus` to construct one; it checks the structural
    invariants and fills the indexes.
    """

    accounts: Mapping[str, Account]
    posts: tuple[Post, ...]
    votes: tuple[VoteRecord, ...]
    discussion_index: Mapping[str, tuple[Post, ...]]
    subdiscussion_index: Mapping[str, tuple[Post, ...]]
    post_by_id: Mapping[str, Post]
    root_of: Mapping[str, str]
    posts_by_author: Mapping[str, tuple[Post, ...]]

    def author_of(self, post_id: str) -> str:
        return self.post_by_id[post_id].author_id

    def posts_of(self, account_id: str) -> tuple[Post, ...]:
        return self.posts_by_author.get(account_id, ())

    def subdiscussions_of(self, account_id: str) -> set[str]:
        return {self.root_of[p.post_id] for p in self.posts_of(account_id)}

    def discussions_of(self, account_id: str) -> set[str]:
        return {p.discussion_id for p in self.posts_of(account_id)}

    def vote_signs(self, voter_id: str, author_id: str) -> tuple[int, ...]:
        """Signs of votes cast by ``voter_id`` on posts by ``author_id``."""
        index = self.__dict__.get("_vote_index")
        if index is None:
            index = defaultdict(list)
            for vote in self.votes:
                post = self.post_by_id.get(vote.post_id)
                if post is not None:
                    index[(vote.voter_id, post.author_id)].append(vote.sign)
            index = {k: tuple(v) for k, v in index.items()}
            object.__setattr__(self, "_vote_index", index)
        return index.get((voter_id, author_id), ())


def build_corpus(
    accounts: Iterable[Account],
    posts: Iterable[Post],
    votes: Iterable[VoteRecord] = (),
) -> Corpus:
    """Assemble records into a :class:`Corpus`.

    Raises:
        CorpusError: duplicate ids, posts by unknown authors, parents that
            are unknown or sit in another discussion, or reply cycles.
    """
    account_map: dict[str, Account] = {}
    dupes = []
    for acct in accounts:
        if acct.account_id in account_map:
            dupes.append(acct.account_id)
        account_map[acct.account_id] = acct
    if dupes:
        raise CorpusError("duplicate account ids", sorted(set(dupes)))

    post_list = sorted(posts, key=_post_key)
    by_id: dict[str, Post] = {}
    dupes = []
    for post in post_list:
        if post.post_id in by_id:
            dupes.append(post.post_id)
        by_id[post.post_id] = post
    if dupes:
        raise CorpusError("duplicate post ids", sorted(set(dupes)))

    unknown_author = [p.post_id for p in post_list if p.author_id not in account_map]
    if unknown_author:
        raise CorpusError("posts reference unknown authors", unknown_author)
    missing_parent = [p.post_id for p in post_list if p.parent_id is not None and p.parent_id not in by_id]
    if missing_parent:
        raise CorpusError("posts reference unknown parents", missing_parent)
    cross = [
        p.post_id
        for p in post_list
        if p.parent_id is not None and by_id[p.parent_id].discussion_id != p.discussion_id
    ]
    if cross:
        raise CorpusError("parent post in a different discussion", cross)

    root_of: dict[str, str] = {}
    cyclic: set[str] = set()
    for post in post_list:
        path: list[str] = []
        on_path: set[str] = set()
        current = post.post_id
        while current not in root_of and current not in cyclic:
            if current in on_path:
                break
            on_path.add(current)
            path.append(current)
            parent = by_id[current].parent_id
            if parent is None:
                root_of[current] = current
                break
            current = parent
        if current in root_of:
            for pid in path:
                root_of[pid] = root_of[current]
        else:
            cyclic.update(path)
    if cyclic:
        raise CorpusError("reply cycle detected", sorted(cyclic))

    discussions: dict[str, list[Post]] = defaultdict(list)
    subdiscussions: dict[str, list[Post]] = defaultdict(list)
    by_author: dict[str, list[Post]] = defaultdict(list)
    for post in post_list:
        discussions[post.discussion_id].append(post)
        subdiscussions[root_of[post.post_id]].append(post)
        by_author[post.author_id].append(post)

    def freeze(d: dict[str, list[Post]]) -> Mapping[str, tuple[Post, ...]]:
        return MappingProxyType({k: tuple(v) for k, v in sorted(d.items())})

    vote_list = sorted(votes, key=lambda v: (v.post_id, v.voter_id, v.sign))
    return Corpus(
        accounts=MappingProxyType(dict(sorted(account_map.items()))),
        posts=tuple(post_list),
        votes=tuple(vote_list),
        discussion_index=freeze(discussions),
        subdiscussion_index=freeze(subdiscussions),
        post_by_id=MappingProxyType(by_id),
        root_of=MappingProxyType(root_of),
        posts_by_author=freeze(by_author),
    )


@dataclass
class ValidationReport:
    n_posts: int
    n_accounts: int
    n_discussions: int
    n_votes: int
    n_ips: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def counts(self) -> tuple[int, int, int]:
        return (self.n_posts, self.n_accounts, self.n_discussions)

    def to_dict(self) -> dict[str, Any]:
        return {
            "posts": self.n_posts,
            "accounts": self.n_accounts,
            "discussions": self.n_discussions,
            "votes": self.n_votes,
            "distinct_ips": self.n_ips,
            "violations": list(self.violations),
        }


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Count records and list invariant violations (never raises)."""
    violations = []
    seen_votes: set[tuple[str, str]] = set()
    for vote in corpus.votes:
        if vote.post_id not in corpus.post_by_id:
            violations.append(f"vote references missing post {vote.post_id}")
        if vote.voter_id not in corpus.accounts:
            violations.append(f"vote references missing voter {vote.voter_id}")
        if vote.sign not in (1, -1):
            violations.append(f"vote has invalid sign on post {vote.post_id}")
        key = (vote.voter_id, vote.post_id)
        if key in seen_votes:
            violations.append(f"duplicate vote by {vote.voter_id} on {vote.post_id}")
        seen_votes.add(key)
    for prev, post in zip(corpus.posts, corpus.posts[1:]):
        if _post_key(prev) > _post_key(post):
            violations.append(f"posts out of order at {post.post_id}")
    covered = sum(len(v) for v in corpus.subdiscussion_index.values())
    if covered != len(corpus.posts):
        violations.append("sub-discussions do not partition the posts")
    return ValidationReport(
        n_posts=len(corpus.posts),
        n_accounts=len(corpus.accounts),
        n_discussions=len(corpus.discussion_index),
        n_votes=len(corpus.votes),
        n_ips=len({p.ip for p in corpus.posts}),
        violations=violations,
    )


# -- serialization -----------------------------------------------------------


def record_to_dict(record: Union[Post, Account, VoteRecord]) -> dict[str, Any]:
    if isinstance(record, Post):
        keys = [k for k, _, _ in _SCHEMAS["posts"]]
    elif isinstance(record, Account):
        keys = [k for k, _, _ in _SCHEMAS["accounts"]]
    else:
        keys = [k for k, _, _ in _SCHEMAS["votes"]]
    return {k: getattr(record, k) for k in keys}


def dump_records(records: Iterable[Union[Post, Account, VoteRecord]], fh: IO[str]) -> int:
    n = 0
    for rec in records:
        fh.write(json.dumps(record_to_dict(rec), ensure_ascii=False, sort_keys=True))
        fh.write("\n")
        n += 1
    return n


def corpus_to_jsonl(corpus: Corpus) -> dict[str, bytes]:
    """Serialize a corpus to the three log formats, keyed by file name."""
    out = {}
    for name, records in (
        (POSTS_FILE, corpus.posts),
        (ACCOUNTS_FILE, corpus.accounts.values()),
        (VOTES_FILE, corpus.votes),
    ):
        buf = io.StringIO()
        dump_records(records, buf)
        out[name] = buf.getvalue().encode("utf-8")
    return out


def write_corpus(corpus: Corpus, directory: Union[str, Path]) -> dict[str, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, payload in corpus_to_jsonl(corpus).items():
        path = directory / name
        path.write_bytes(payload)
        paths[name] = path
    return paths


def load_corpus(
    posts: Union[str, Path],
    accounts: Union[str, Path],
    votes: Union[str, Path, None] = None,
    strict: bool = True,
) -> Corpus:
    """Read the three logs from disk and build a corpus.

    With ``strict`` any rejected line raises :class:`CorpusError`; otherwise
    rejects are logged and skipped.
    """
    parsed = {"posts": read_log(posts, "posts"), "accounts": read_log(accounts, "accounts")}
    parsed["votes"] = read_log(votes, "votes") if votes is not None else ParseResult()
    problems = [f"{fmt}:{line}: {reason}" for fmt, res in parsed.items() for line, reason in res.rejects]
    if problems:
        if strict:
            raise CorpusError("rejected log lines", problems)
        for p in problems:
            logger.warning("rejected %s", p)
    return build_corpus(parsed["accounts"].records, parsed["posts"].records, parsed["votes"].records)


def load_corpus_dir(directory: Union[str, Path], strict: bool = True) -> Corpus:
    directory = Path(directory)
    votes = directory / VOTES_FILE
    return load_corpus(
        directory / POSTS_FILE,
        directory / ACCOUNTS_FILE,
        votes if votes.exists() else None,
        strict=strict,
    )
