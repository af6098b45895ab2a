from __future__ import annotations

import random

import pytest

from sockpuppet.ingest import Account, Post, VoteRecord, build_corpus
from sockpuppet.text import default_lexicon


def make_post(pid, author, disc="d1", t=0, ip="ip1", parent=None, text="", **kw):
    return Post(pid, author, disc, parent, ip, t, text, **kw)


def make_corpus(posts, accounts=None, votes=()):
    if accounts is None:
        accounts = sorted({p.author_id for p in posts} | {v.voter_id for v in votes})
    accts = [a if isinstance(a, Account) else Account(a, a, a.lower()) for a in accounts]
    return build_corpus(accts, posts, votes)


def random_corpus(rng: random.Random, n_accounts=20, n_posts=200, n_ips=8, n_disc=6, span=4 * 3600):
    accounts = [f"a{i:02d}" for i in range(n_accounts)]
    posts = []
    for i in range(n_posts):
        posts.append(make_post(
            f"p{i:04d}",
            rng.choice(accounts),
            disc=f"d{rng.randrange(n_disc)}",
            t=rng.randrange(span),
            ip=f"ip{rng.randrange(n_ips)}",
        ))
    return make_corpus(posts, accounts)


_ACCEPTANCE: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None and (report.when == "call" or (report.when == "setup" and report.failed)):
        number, title = marker.args
        outcome = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE.append((number, title, outcome))
        print(f"\n{outcome} criterion {number}: {title}")
    return report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{outcome} criterion {number}: {title}")


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


__all__ = ["make_post", "make_corpus", "random_corpus", "Account", "Post", "VoteRecord"]
