import random
import string

import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_corpus, make_post
from oracles import recursive_levenshtein
from sockpuppet.detect import SockGroup
from sockpuppet.ingest import Account
from sockpuppet.taxonomy import (
    Deceptiveness,
    Supportiveness,
    classify_deceptiveness,
    classify_groups,
    classify_supportiveness,
    joint_table,
    levenshtein,
    match_batch,
    match_ordinary,
    match_score,
    taxonomy_report,
)

short = st.text(alphabet="abcABé", max_size=12)


def test_levenshtein_examples():
    assert levenshtein("alice", "alice") == 0
    assert levenshtein("kitten", "sitting") == 3
    assert levenshtein("", "abc") == 3


def test_levenshtein_nfc_and_case():
    assert levenshtein("é", "é") == 0
    assert levenshtein("Bob", "bob") == 1
    assert levenshtein("Bob", "bob", casefold=True) == 0


def test_levenshtein_random_oracle():
    rng = random.Random(0)
    for _ in range(300):
        a = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 12)))
        assert levenshtein(a, b) == recursive_levenshtein(a, b)


@settings(max_examples=150, deadline=None)
@given(short, short, short)
def test_levenshtein_metric_axioms(a, b, c):
    ab = levenshtein(a, b)
    assert ab == levenshtein(b, a)
    assert (ab == 0) == (a == b)
    assert levenshtein(a, c) <= ab + levenshtein(b, c)


def _accounts(*names):
    return {f"u{i}": Account(f"u{i}", n, n.lower()) for i, n in enumerate(names)}


def test_deceptiveness_examples():
    accts = _accounts("JDog", "JDog2", "PatriotGuy", "TruthSeeker88")
    lab = classify_deceptiveness(("u0", "u1"), accts)
    assert lab.name_distance == 1 and lab.label is Deceptiveness.NON_PRETENDER
    lab = classify_deceptiveness(("u2", "u3"), accts)
    assert lab.name_distance == recursive_levenshtein("PatriotGuy", "TruthSeeker88") >= 5
    assert lab.label is Deceptiveness.PRETENDER
    assert classify_deceptiveness(("u0", "u0"), accts).label is Deceptiveness.NON_PRETENDER


@pytest.mark.parametrize("threshold", [1, 3, 5, 8])
def test_deceptiveness_is_pure_threshold(threshold):
    rng = random.Random(threshold)
    for _ in range(50):
        a = "".join(rng.choice(string.ascii_letters) for _ in range(rng.randint(1, 10)))
        b = "".join(rng.choice(string.ascii_letters) for _ in range(rng.randint(1, 10)))
        lab = classify_deceptiveness(("x", "y"), {"x": Account("x", a), "y": Account("y", b)}, threshold)
        assert (lab.label is Deceptiveness.PRETENDER) == (levenshtein(a, b) >= threshold)


def _support_corpus(s2_text, via=None):
    posts = [make_post("s1", "S1", t=0, text="Here is my opinion.")]
    if via is None:
        posts.append(make_post("s2", "S2", t=1, parent="s1", text=s2_text))
    else:
        posts.append(make_post("o", "O", t=1, parent="s1", text=via))
        posts.append(make_post("s2", "S2", t=2, parent="o", text=s2_text))
    return make_corpus(posts)


def test_direct_supporter(lexicon):
    lab = classify_supportiveness(_support_corpus("I agree so true"), ("S1", "S2"), lexicon)
    assert lab.score == 0.5 and lab.label is Supportiveness.SUPPORTER
    assert not lab.interactions[0].via_intermediary


def test_sign_flip_through_intermediary(lexicon):
    lab = classify_supportiveness(_support_corpus("no wrong", via="no that is wrong"), ("S1", "S2"), lexicon)
    assert lab.score == 1.0 and lab.label is Supportiveness.SUPPORTER
    assert lab.interactions[0].via == "O"


def test_neutral_reply_is_non_supporter(lexicon):
    lab = classify_supportiveness(_support_corpus("the weather report"), ("S1", "S2"), lexicon)
    assert lab.score == 0.0 and lab.label is Supportiveness.NON_SUPPORTER


def test_no_interaction(lexicon):
    c = make_corpus([make_post("a", "S1"), make_post("b", "S2", t=1)])
    lab = classify_supportiveness(c, ("S1", "S2"), lexicon)
    assert lab.label is None and lab.score is None


@pytest.mark.parametrize("s2_text", ["yes exactly", "no wrong", "wrong yes yes", "plain words"])
def test_flipping_intermediary_sign_flips_contribution(lexicon, s2_text):
    agree = classify_supportiveness(_support_corpus(s2_text, via="yes true"), ("S1", "S2"), lexicon).score
    disagree = classify_supportiveness(_support_corpus(s2_text, via="no nonsense"), ("S1", "S2"), lexicon).score
    assert disagree == pytest.approx(-agree)


def test_longer_chains_ignored(lexicon):
    posts = [
        make_post("s1", "S1", t=0), make_post("o1", "O1", t=1, parent="s1", text="no"),
        make_post("o2", "O2", t=2, parent="o1", text="yes"), make_post("s2", "S2", t=3, parent="o2", text="yes"),
    ]
    assert classify_supportiveness(make_corpus(posts), ("S1", "S2"), lexicon).label is None


def _match_corpus(layout):
    """layout: account -> list of discussions (one post each)."""
    posts = []
    for acct, discs in layout.items():
        for i, d in enumerate(discs):
            posts.append(make_post(f"{acct}-{i}", acct, disc=d, t=i))
    return make_corpus(posts)


def test_perfect_match():
    c = _match_corpus({"S": ["d1", "d2"], "T": ["d1", "d2", "d9"], "O": ["d1", "d2"], "P": ["d5"] * 6})
    groups = [SockGroup(frozenset({"S", "T"}), (), "T")]
    m = match_ordinary(c, "S", groups)
    assert m.ordinary == "O" and m.discussion_jaccard == 1.0 and m.post_count_ratio == 1.0


def test_score_formula_decides_between_candidates():
    # twice the posts in the same discussions scores ln 2 - 1 < 0, which beats
    # equal posts in disjoint discussions (score 0)
    c = _match_corpus({"S": ["d1", "d2"], "T": ["d1"] * 3, "A": ["d1", "d1", "d2", "d2"], "B": ["d7", "d8"]})
    groups = [SockGroup(frozenset({"S", "T"}), (), "T")]
    sa, _, _ = match_score(2, {"d1", "d2"}, 4, {"d1", "d2"})
    sb, _, _ = match_score(2, {"d1", "d2"}, 2, {"d7", "d8"})
    assert sa < sb
    assert match_ordinary(c, "S", groups).ordinary == "A"


def test_caliper_and_unmatched():
    c = _match_corpus({"S": ["d1"], "T": ["d1"], "Big": ["d9"] * 5})
    groups = [SockGroup(frozenset({"S", "T"}), (), "T")]
    assert not match_ordinary(c, "S", groups).matched
    c = _match_corpus({"S": ["d1"], "T": ["d1"]})
    assert not match_ordinary(c, "S", groups).matched


def test_batch_matching_injective_and_excludes_socks():
    rng = random.Random(3)
    layout = {f"a{i:02d}": [f"d{rng.randrange(6)}" for _ in range(rng.randint(1, 6))] for i in range(30)}
    c = _match_corpus(layout)
    groups = [SockGroup(frozenset({"a00", "a01"}), (), "a00"), SockGroup(frozenset({"a02", "a03", "a04"}), (), "a02")]
    socks = {"a00", "a01", "a02", "a03", "a04"}
    matches = match_batch(c, sorted(socks), groups)
    chosen = [m.ordinary for m in matches if m.matched]
    assert len(chosen) == len(set(chosen))
    assert not set(chosen) & socks


def test_joint_table():
    labels = [(Deceptiveness.PRETENDER, Supportiveness.SUPPORTER)] * 3 + [
        (Deceptiveness.NON_PRETENDER, Supportiveness.DISSENTER),
        (Deceptiveness.PRETENDER, Supportiveness.DISSENTER),
    ]
    table = joint_table(labels)
    assert table["supporter"]["pretender"] == 1.0 and table["supporter"]["non-pretender"] == 0.0
    assert table["dissenter"]["pretender"] + table["dissenter"]["non-pretender"] == pytest.approx(1.0)
    assert table["non-supporter"]["pretender"] is None and table["non-supporter"]["n"] == 0
    with pytest.raises(ValueError):
        joint_table([])


def test_classify_groups_and_report(lexicon):
    posts = [
        make_post("a", "S1", t=0), make_post("b", "S2", t=1, parent="a", text="yes indeed"),
        make_post("c", "S3", t=2),
    ]
    accounts = [Account("S1", "JDog"), Account("S2", "JDog2"), Account("S3", "Zebra Lover")]
    from sockpuppet.ingest import build_corpus

    c = build_corpus(accounts, posts)
    group = SockGroup(frozenset({"S1", "S2", "S3"}), (), "S1")
    labels = classify_groups(c, [group], lexicon)
    assert [(l.secondary, l.deceptiveness.label.value) for l in labels] == [("S2", "non-pretender"), ("S3", "pretender")]
    report = taxonomy_report(labels)
    assert report["joint_table"]["supporter"]["non-pretender"] == 1.0
    assert report["pairs"][1]["supportiveness"] == "no interaction"
    assert sum(report["name_distance_histogram"].values()) == 2
    with pytest.raises(ValueError):
        classify_groups(c, [SockGroup(frozenset({"S1", "S2"}), ())], lexicon)
