import json
import shutil
import subprocess
import sys

import pytest

from sockpuppet import __version__
from sockpuppet.cli import RUN_OUTPUTS, main
from sockpuppet.synth import TRUTH_FILE, load_truth


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    cfg = root / "synth.json"
    cfg.write_text(json.dumps({"synth": {"n_ordinary": 150, "n_groups": 20}}))
    out = root / "corpus"
    assert main(["synth", "--config", str(cfg), "--seed", "4", "--out", str(out)]) == 0
    return out


def _run_config(tmp_path, corpus_dir, **extra):
    cfg = {"corpus": str(corpus_dir), "seed": 1, "model": {"n_trees": 10, "folds": 3}, "out": "report", **extra}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def _error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error"]


def test_synth_writes_logs(corpus_dir):
    names = {p.name for p in corpus_dir.iterdir()}
    assert {"posts.jsonl", "accounts.jsonl", "votes.jsonl", TRUTH_FILE} <= names
    assert len(load_truth(corpus_dir / TRUTH_FILE).groups) == 20


def test_ingest(corpus_dir, tmp_path):
    out = tmp_path / "ingest.json"
    assert main(["ingest", "--corpus", str(corpus_dir), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["tool"] == "sockpuppet"
    assert d["version"] == __version__
    assert d["validation"]["posts"] > 0
    assert d["validation"]["violations"] == []


def test_detect_matches_truth(corpus_dir, tmp_path):
    out = tmp_path / "groups.json"
    assert main(["detect", "--corpus", str(corpus_dir), "--out", str(out)]) == 0
    groups = json.loads(out.read_text())["groups"]
    truth = load_truth(corpus_dir / TRUTH_FILE)
    assert {frozenset(g["members"]) for g in groups} == truth.group_sets()


def test_detect_flags_override(corpus_dir, tmp_path):
    out = tmp_path / "groups.json"
    assert main(["detect", "--corpus", str(corpus_dir), "--k-min", "50", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["groups"] == []
    assert d["detection"]["min_discussions"] == 50


@pytest.fixture(scope="module")
def stage_files(corpus_dir, tmp_path_factory):
    root = tmp_path_factory.mktemp("stages")
    groups = root / "groups.json"
    features = root / "features.json"
    assert main(["detect", "--corpus", str(corpus_dir), "--out", str(groups)]) == 0
    assert main(["features", "--corpus", str(corpus_dir), "--groups", str(groups), "--out", str(features)]) == 0
    return root, groups, features


def test_taxonomy_and_behavior(corpus_dir, stage_files, tmp_path):
    _, groups, _ = stage_files
    tax = tmp_path / "tax.json"
    beh = tmp_path / "beh.json"
    assert main(["taxonomy", "--corpus", str(corpus_dir), "--groups", str(groups), "--out", str(tax)]) == 0
    assert main(["behavior", "--corpus", str(corpus_dir), "--groups", str(groups), "--out", str(beh)]) == 0
    tax_d = json.loads(tax.read_text())
    truth = load_truth(corpus_dir / TRUTH_FILE)
    assert len(tax_d["pairs"]) == len(truth.pairs)
    assert len(json.loads(beh.read_text())["groups"]) == 20


def test_graph(corpus_dir, tmp_path):
    out = tmp_path / "graph.json"
    edges = tmp_path / "edges.tsv"
    assert main(["graph", "--corpus", str(corpus_dir), "--metrics", "pagerank", "--edges", str(edges), "--out", str(out)]) == 0
    metrics = json.loads(out.read_text())["metrics"]
    assert metrics
    assert edges.read_text().strip()


def test_graph_unknown_metric(corpus_dir, capsys):
    assert main(["graph", "--corpus", str(corpus_dir), "--metrics", "bogus"]) == 2
    assert _error(capsys)["stage"] == "graph"


def test_features_profiles(corpus_dir, tmp_path):
    out = tmp_path / "profiles.json"
    assert main(["features", "--corpus", str(corpus_dir), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["profiles"]


def test_train_evaluate_ablate(stage_files, tmp_path):
    _, _, features = stage_files
    model = tmp_path / "model.json"
    common = ["--features", str(features), "--task", "account", "--trees", "8", "--folds", "3", "--seed", "2"]
    assert main(["train", *common, "--out", str(model)]) == 0
    assert json.loads(model.read_text())["task"] == "account"

    scored = tmp_path / "scored.json"
    assert main(["evaluate", *common, "--model", str(model), "--out", str(scored)]) == 0
    assert json.loads(scored.read_text())["account"]["auc"] >= 0.9

    cv = tmp_path / "cv.json"
    assert main(["evaluate", *common, "--out", str(cv)]) == 0
    report = json.loads(cv.read_text())["account"]
    assert len(report["fold_aucs"]) == 3

    abl = tmp_path / "ablate.json"
    assert main(["ablate", *common, "--out", str(abl)]) == 0
    assert set(json.loads(abl.read_text())["account"]["per_set"]) == {"activity", "community", "post", "all"}


def test_evaluate_wrong_task_model(stage_files, tmp_path, capsys):
    _, _, features = stage_files
    model = tmp_path / "model.json"
    assert main(["train", "--features", str(features), "--task", "account", "--trees", "4", "--seed", "0", "--out", str(model)]) == 0
    assert main(["evaluate", "--features", str(features), "--task", "pair", "--model", str(model)]) == 2
    assert _error(capsys)["path"] == str(model)


def test_train_requires_seed(stage_files, capsys):
    _, _, features = stage_files
    assert main(["train", "--features", str(features)]) == 2
    assert "seed" in _error(capsys)["message"]


def test_run_outputs_and_determinism(corpus_dir, tmp_path):
    cfg = _run_config(tmp_path, corpus_dir)
    assert main(["run", "--config", str(cfg)]) == 0
    first = {name: (tmp_path / "report" / name).read_bytes() for name in RUN_OUTPUTS}
    shutil.rmtree(tmp_path / "report")
    assert main(["run", "--config", str(cfg)]) == 0
    second = {name: (tmp_path / "report" / name).read_bytes() for name in RUN_OUTPUTS}
    assert first == second
    groups = json.loads(first["groups.json"])
    assert len(groups["groups"]) == 20
    assert len(groups["config_hash"]) == 64
    assert groups["version"] == __version__


def test_run_hash_ignores_output_dir(corpus_dir, tmp_path):
    cfg = _run_config(tmp_path, corpus_dir)
    assert main(["run", "--config", str(cfg)]) == 0
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "elsewhere")]) == 0
    a = (tmp_path / "report" / "groups.json").read_bytes()
    b = (tmp_path / "elsewhere" / "groups.json").read_bytes()
    assert a == b


def test_stage_commands_agree_with_run(corpus_dir, stage_files, tmp_path):
    _, groups, _ = stage_files
    cfg = _run_config(tmp_path, corpus_dir)
    assert main(["run", "--config", str(cfg)]) == 0
    run_groups = json.loads((tmp_path / "report" / "groups.json").read_text())["groups"]
    assert run_groups == json.loads(groups.read_text())["groups"]


def test_missing_lexicon_names_path(corpus_dir, tmp_path, capsys):
    missing = tmp_path / "nope.tsv"
    cfg = _run_config(tmp_path, corpus_dir, lexicon=str(missing))
    assert main(["run", "--config", str(cfg)]) == 2
    err = _error(capsys)
    assert err["stage"] == "lexicon"
    assert err["path"] == str(missing)
    failed = json.loads((tmp_path / "report" / "FAILED.json").read_text())
    assert failed["error"]["path"] == str(missing)
    assert failed["partial_outputs"] == []


def test_run_requires_seed(corpus_dir, tmp_path, capsys):
    cfg = _run_config(tmp_path, corpus_dir, seed=None)
    assert main(["run", "--config", str(cfg)]) == 2
    assert _error(capsys)["stage"] == "run"


def test_bad_corpus_line(tmp_path, capsys):
    (tmp_path / "posts.jsonl").write_text('{"post_id": 1}\n')
    (tmp_path / "accounts.jsonl").write_text("")
    assert main(["ingest", "--corpus", str(tmp_path)]) == 2
    assert _error(capsys)["stage"] == "ingest"


def test_invalid_synth_config(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"shared_ip_probability": 2}))
    assert main(["synth", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 2
    assert _error(capsys)["stage"] == "synth"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sockpuppet.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert __version__ in proc.stdout
