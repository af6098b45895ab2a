"""Acceptance criteria, one test each.

Every test is tagged with its criterion number; the conftest hook prints
one PASS/FAIL line per criterion and repeats them in the terminal summary.
Runtime limits are asserted inside each test.
"""

import json
import math
import random
import shutil
import time
from dataclasses import replace

import pytest

from conftest import random_corpus
from oracles import (
    brute_force_pairs,
    concordance_auc,
    dense_pagerank,
    naive_clustering,
    naive_reciprocity,
    recursive_levenshtein,
)
from sockpuppet.behavior import switch_entropy_of_sequence
from sockpuppet.cli import RUN_OUTPUTS, main
from sockpuppet.detect import DetectionParams, detect_groups, filter_noisy, find_sockpuppet_pairs, sockpuppet_accounts
from sockpuppet.forest import ForestParams, roc_auc
from sockpuppet.graph import ReplyNetwork, ego_network, local_clustering, pagerank, reciprocity
from sockpuppet.ingest import load_corpus_dir
from sockpuppet.model import FeatureCache, build_task1_dataset, build_task2_dataset, cross_validate
from sockpuppet.synth import (
    SOCK_VOCABULARY,
    TRUTH_FILE,
    GeneratorConfig,
    emit_logs,
    generate_community,
    load_truth,
    ordinary_style,
    sock_style,
)
from sockpuppet.taxonomy import classify_groups, levenshtein, match_batch, taxonomy_report
from sockpuppet.text import compare_triple, user_profile


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


@pytest.mark.criterion(1, "entropy worked example within 1e-9 of closed form, < 1 s")
def test_entropy_worked_example():
    with Stopwatch() as clock:
        result = switch_entropy_of_sequence(["S1"] * 5 + ["S2"] + ["S1"] * 4 + ["S2"])
    s1 = -(5 / 9) * math.log(5 / 9) - (4 / 9) * math.log(4 / 9)
    assert abs(result.entropy["S1"] - s1) < 1e-9
    assert abs(result.entropy["S2"] - math.log(2)) < 1e-9
    assert round(result.entropy["S1"], 4) == 0.6870
    assert round(result.entropy["S2"], 4) == 0.6931
    assert clock.seconds < 1.0


@pytest.mark.criterion(2, "detection equals brute force on 100 corpora, monotone in K and T, < 30 s")
def test_detection_oracle_equivalence():
    found = 0
    with Stopwatch() as clock:
        for seed in range(100):
            rng = random.Random(seed)
            corpus = random_corpus(
                rng,
                n_accounts=rng.randint(5, 50),
                n_posts=rng.randint(50, 500),
                n_ips=rng.randint(2, 12),
                n_disc=rng.randint(2, 10),
                span=rng.choice([3600, 4 * 3600, 24 * 3600]),
            )
            window = rng.choice([1.0, 5.0, 15.0, 60.0])
            k = rng.randint(1, 4)
            params = DetectionParams(window_minutes=window, min_discussions=k)
            ex = filter_noisy(corpus, params)
            got = {
                p.accounts: {(e.discussion_id, e.post_a, e.post_b) for e in p.evidence}
                for p in find_sockpuppet_pairs(corpus, params, ex)
            }
            assert got == brute_force_pairs(corpus, params.window_seconds, k, ex.ips, ex.accounts)
            found += len(got)

            pairs = set(got)
            stricter = find_sockpuppet_pairs(corpus, replace(params, min_discussions=k + 1), ex)
            wider = find_sockpuppet_pairs(corpus, replace(params, window_minutes=window * 2), ex)
            assert {p.accounts for p in stricter} <= pairs
            assert pairs <= {p.accounts for p in wider}
    assert found > 0  # the corpora are not vacuous
    assert clock.seconds < 30.0


@pytest.mark.criterion(3, "20 planted pairs recovered with precision = recall = 1.0, < 10 s")
def test_planted_group_recovery(tmp_path):
    with Stopwatch() as clock:
        config = GeneratorConfig(
            n_groups=20,
            shared_ip_probability=1.0,
            co_post_discussions=3,
            co_post_gap_minutes=5.0,
            seed=11,
        )
        corpus, truth = generate_community(config)
        emit_logs(corpus, truth, tmp_path)
        found = {frozenset(g.members) for g in detect_groups(load_corpus_dir(tmp_path))}
        planted = load_truth(tmp_path / TRUTH_FILE).group_sets()
    assert len(planted) == 20
    assert all(len(g) == 2 for g in planted)
    true_positive = len(found & planted)
    assert true_positive / len(found) == 1.0
    assert true_positive / len(planted) == 1.0
    assert clock.seconds < 10.0


@pytest.mark.criterion(4, "task-2 AUC >= 0.95, task-1 >= 0.80, permuted in [0.4, 0.6], < 2 min")
def test_end_to_end_classification(lexicon):
    with Stopwatch() as clock:
        corpus, _ = generate_community(GeneratorConfig(n_ordinary=600, n_groups=200, seed=1))
        groups = detect_groups(corpus)
        matches = match_batch(corpus, sorted(sockpuppet_accounts(groups)), groups)
        cache = FeatureCache(corpus, lexicon)
        task1 = build_task1_dataset(corpus, groups, matches, lexicon, cache)
        task2 = build_task2_dataset(corpus, groups, matches, lexicon, cache)
        params = ForestParams(n_trees=50)
        auc = {}
        for name, ds in (("task1", task1), ("task2", task2)):
            auc[name] = cross_validate(ds, 10, params, seed=0).mean_auc
            auc[name + "_permuted"] = cross_validate(ds.permuted(0), 10, params, seed=0).mean_auc
    print(json.dumps(auc, sort_keys=True))
    assert auc["task2"] >= 0.95
    assert auc["task1"] >= 0.80
    assert 0.4 <= auc["task1_permuted"] <= 0.6
    assert 0.4 <= auc["task2_permuted"] <= 0.6
    assert clock.seconds < 120.0


def _random_graph(rng):
    n = rng.randint(1, 12)
    nodes = [f"n{i:02d}" for i in range(n)]
    p = rng.random()
    return nodes, [(u, v) for u in nodes for v in nodes if u != v and rng.random() < p]


@pytest.mark.criterion(5, "Levenshtein, pagerank, clustering, reciprocity and AUC match oracles, < 30 s")
def test_metric_oracles():
    rng = random.Random(5)
    alphabet = "abcAB "
    with Stopwatch() as clock:
        for _ in range(1000):
            a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
            b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
            assert levenshtein(a, b) == recursive_levenshtein(a, b)

        for _ in range(200):
            nodes, edges = _random_graph(rng)
            net = ReplyNetwork.from_edges(edges, nodes)
            pr = pagerank(net)
            oracle = dense_pagerank(net.nodes, net.edges)
            assert max(abs(pr[v] - oracle[v]) for v in nodes) < 1e-8
            assert abs(sum(pr.values()) - 1.0) < 1e-6
            for v in nodes:
                assert local_clustering(net, v) == pytest.approx(naive_clustering(nodes, edges, v), abs=1e-12)
                expected = naive_reciprocity(nodes, edges, v)
                ego = ego_network(net, v)
                if math.isnan(expected):
                    assert not ego.edges
                else:
                    assert reciprocity(ego) == pytest.approx(expected, abs=1e-12)

        checked = 0
        while checked < 1000:
            n = rng.randint(2, 30)
            scores = [rng.choice([rng.random(), round(rng.random(), 1)]) for _ in range(n)]
            labels = [rng.randint(0, 1) for _ in range(n)]
            if len(set(labels)) < 2:
                continue
            assert roc_auc(scores, labels) == pytest.approx(concordance_auc(scores, labels), abs=1e-12)
            checked += 1
    assert clock.seconds < 30.0


@pytest.mark.criterion(6, "supporter row (0.74, 0.26) +/- 0.05 over >= 2000 pairs, < 30 s")
def test_taxonomy_calibration(lexicon):
    with Stopwatch() as clock:
        config = GeneratorConfig(
            n_ordinary=100,
            n_groups=2000,
            n_discussions=400,
            pretender_fraction=0.74,
            ordinary=replace(ordinary_style(), posts_mean=3.0),
            sockpuppet=replace(sock_style(), posts_mean=3.0),
            vote_ring_rate=0.0,
            ordinary_votes_per_account=0.0,
            detection=DetectionParams(ip_trim_fraction=0.0, account_trim_fraction=0.0),
            seed=7,
        )
        corpus, _ = generate_community(config)
        groups = detect_groups(corpus, config.detection)
        table = taxonomy_report(classify_groups(corpus, groups, lexicon))["joint_table"]
    row = table["supporter"]
    n_pairs = sum(r["n"] for r in table.values())
    print(json.dumps({"supporter": row, "pairs": n_pairs}, sort_keys=True))
    assert n_pairs >= 2000
    assert abs(row["pretender"] - 0.74) <= 0.05
    assert abs(row["non-pretender"] - 0.26) <= 0.05
    assert clock.seconds < 30.0


@pytest.mark.criterion(7, "pair profiles most similar in >= 95% of 200 trials, < 1 min")
def test_double_life(lexicon):
    # sockpuppets write like everyone else except for their shared vocabulary
    style = replace(ordinary_style(), vocabulary=dict(SOCK_VOCABULARY))
    wins = trials = 0
    with Stopwatch() as clock:
        for seed in range(10):
            corpus, _ = generate_community(GeneratorConfig(n_groups=20, sockpuppet=style, seed=seed))
            groups = detect_groups(corpus)
            matches = match_batch(corpus, [g.primary for g in groups], groups)
            ordinary = {m.sockpuppet: m.ordinary for m in matches}
            for g in groups:
                s1, s2 = g.primary, g.secondaries[0]
                o = ordinary[s1]
                assert o is not None
                result = compare_triple(
                    user_profile(corpus, s1, lexicon),
                    user_profile(corpus, s2, lexicon),
                    user_profile(corpus, o, lexicon),
                )
                wins += result.pair_most_similar
                trials += 1
    print(f"{wins}/{trials} trials")
    assert trials == 200
    assert wins / trials >= 0.95
    assert clock.seconds < 60.0


@pytest.mark.criterion(8, "full pipeline twice with the same config and seed gives byte-identical reports")
def test_pipeline_determinism(tmp_path):
    corpus_dir = tmp_path / "corpus"
    corpus, truth = generate_community(GeneratorConfig(n_ordinary=200, n_groups=30, seed=8))
    emit_logs(corpus, truth, corpus_dir)
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "corpus": "corpus",
        "seed": 42,
        "model": {"n_trees": 20, "folds": 5},
        "out": "report",
    }))
    outputs = []
    for _ in range(2):
        if (tmp_path / "report").exists():
            shutil.rmtree(tmp_path / "report")
        assert main(["run", "--config", str(config), "--threads", "2"]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted((tmp_path / "report").iterdir())})
    assert set(outputs[0]) == set(RUN_OUTPUTS)
    assert outputs[0] == outputs[1]
