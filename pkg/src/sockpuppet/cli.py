"""Command-line frontend.

Every stage is a subcommand; ``run`` chains them from one JSON config. All
reports are JSON with sorted keys and carry the tool version, a hash of the
effective configuration, and the seeds used, so two runs with the same
config and seed produce byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .behavior import community_feedback, creation_timing, pair_activity, switch_entropy
from .detect import DetectionParams, SockGroup, detect_groups, sockpuppet_accounts
from .forest import ForestModel, ForestParams, roc_auc
from .graph import METRICS, build_reply_network, node_metrics
from .ingest import Corpus, load_corpus, load_corpus_dir, validate_corpus
from .model import (
    Dataset,
    FeatureCache,
    build_task1_dataset,
    build_task2_dataset,
    cross_validate,
    feature_set_ablation,
    score_dataset,
    train_forest,
)
from .synth import GeneratorConfig, emit_logs, generate_community
from .taxonomy import DEFAULT_NAME_THRESHOLD, classify_groups, match_batch, taxonomy_report
from .text import Lexicon, load_lexicon, user_profile

logger = logging.getLogger("sockpuppet")

TASKS = {"account": "task1", "pair": "task2"}
RUN_OUTPUTS = ("groups.json", "taxonomy.json", "features.json", "eval.json", "summary.txt")


class StageError(Exception):
    """A pipeline stage failed; carries the stage name and offending path."""

    def __init__(self, stage: str, message: str, path: str | None = None):
        super().__init__(message)
        self.stage = stage
        self.message = message
        self.path = path

    def to_dict(self) -> dict[str, Any]:
        return {"error": {"stage": self.stage, "message": self.message, "path": self.path}}


# -- config -------------------------------------------------------------------

DEFAULT_CONFIG: dict[str, Any] = {
    "corpus": None,
    "posts": None,
    "accounts": None,
    "votes": None,
    "lexicon": None,
    "valence": None,
    "detection": asdict(DetectionParams()),
    "taxonomy": {"name_threshold": DEFAULT_NAME_THRESHOLD, "casefold": False},
    "model": {**asdict(ForestParams()), "folds": 10},
    "seed": None,
    "out": None,
}
_PATH_KEYS = ("corpus", "posts", "accounts", "votes", "lexicon", "valence", "out")


def load_config(path: str | None) -> dict[str, Any]:
    """Merge a JSON config over the defaults; relative paths resolve against the file."""
    config = json.loads(json.dumps(DEFAULT_CONFIG))
    if path is None:
        return config
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StageError("config", f"cannot read config: {exc.strerror}", path) from exc
    except json.JSONDecodeError as exc:
        raise StageError("config", f"invalid JSON: {exc}", path) from exc
    base = Path(path).resolve().parent
    for key, value in raw.items():
        if key in ("detection", "taxonomy", "model") and isinstance(value, dict):
            config[key].update(value)
        else:
            config[key] = value
    for key in _PATH_KEYS:
        if config.get(key) is not None and key != "out":
            p = Path(config[key])
            config[key] = str(p if p.is_absolute() else base / p)
    if config.get("out") is not None and not Path(config["out"]).is_absolute():
        config["out"] = str(base / config["out"])
    return config


def config_hash(config: dict[str, Any]) -> str:
    payload = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _portable(config: dict[str, Any]) -> dict[str, Any]:
    """Config with input paths reduced to file names and the output dropped.

    The hash then describes what was computed, not where files live.
    """
    out = {k: v for k, v in config.items() if k != "out"}
    for key in _PATH_KEYS[:-1]:
        if out.get(key) is not None:
            out[key] = Path(out[key]).name
    return out


def envelope(config: dict[str, Any], seeds: dict[str, int], body: dict[str, Any]) -> dict[str, Any]:
    return {
        "tool": "sockpuppet",
        "version": __version__,
        "config_hash": config_hash(_portable(config)),
        "seeds": seeds,
        **body,
    }


def write_json(path: str | Path | None, payload: Any) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def read_json(path: str, stage: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StageError(stage, f"cannot read file: {exc.strerror}", path) from exc
    except json.JSONDecodeError as exc:
        raise StageError(stage, f"invalid JSON: {exc}", path) from exc


# -- stage helpers ------------------------------------------------------------


def _require_file(stage: str, path: str | None, what: str) -> str:
    if path is None:
        raise StageError(stage, f"no {what} given")
    if not Path(path).exists():
        raise StageError(stage, f"{what} not found", path)
    return path


def stage_load_corpus(config: dict[str, Any]) -> Corpus:
    try:
        if config.get("corpus"):
            directory = _require_file("ingest", config["corpus"], "corpus directory")
            for name in ("posts.jsonl", "accounts.jsonl"):
                _require_file("ingest", str(Path(directory) / name), name)
            return load_corpus_dir(directory)
        posts = _require_file("ingest", config.get("posts"), "posts log")
        accounts = _require_file("ingest", config.get("accounts"), "accounts log")
        votes = config.get("votes")
        if votes is not None:
            _require_file("ingest", votes, "votes log")
        return load_corpus(posts, accounts, votes)
    except StageError:
        raise
    except ValueError as exc:
        offending = getattr(exc, "offending", None)
        detail = f"{exc}" + (f": {offending[:5]}" if offending else "")
        raise StageError("ingest", detail, config.get("corpus") or config.get("posts")) from exc


def stage_lexicon(config: dict[str, Any]) -> Lexicon:
    for key in ("lexicon", "valence"):
        if config.get(key) is not None:
            _require_file("lexicon", config[key], f"{key} file")
    try:
        return load_lexicon(config.get("lexicon"), config.get("valence"))
    except ValueError as exc:
        raise StageError("lexicon", str(exc), config.get("lexicon")) from exc


def detection_params(config: dict[str, Any]) -> DetectionParams:
    try:
        return DetectionParams(**config["detection"])
    except (TypeError, ValueError) as exc:
        raise StageError("detect", f"invalid detection parameters: {exc}") from exc


def forest_params(config: dict[str, Any]) -> tuple[ForestParams, int]:
    model = dict(config["model"])
    folds = int(model.pop("folds", 10))
    try:
        return ForestParams(**model), folds
    except (TypeError, ValueError) as exc:
        raise StageError("train", f"invalid model parameters: {exc}") from exc


def require_seed(config: dict[str, Any], stage: str) -> int:
    if config.get("seed") is None:
        raise StageError(stage, "a seed is required (--seed or \"seed\" in the config)")
    return int(config["seed"])


def groups_from_json(payload: Any) -> list[SockGroup]:
    items = payload["groups"] if isinstance(payload, dict) else payload
    return [SockGroup(frozenset(g["members"]), (), g["primary"]) for g in items]


def groups_body(groups: list[SockGroup], params: DetectionParams) -> dict[str, Any]:
    return {"detection": asdict(params), "groups": [g.to_dict() for g in groups]}


def features_body(corpus: Corpus, groups: list[SockGroup], lexicon: Lexicon, window_minutes: float) -> dict[str, Any]:
    cache = FeatureCache(corpus, lexicon)
    socks = sorted(sockpuppet_accounts(groups))
    matches = match_batch(corpus, socks, groups)
    body: dict[str, Any] = {
        "matches": [
            {"sockpuppet": m.sockpuppet, "ordinary": m.ordinary, "score": m.score} for m in matches
        ],
    }
    for key, build in (("task1", build_task1_dataset), ("task2", build_task2_dataset)):
        try:
            if key == "task2":
                ds = build(corpus, groups, matches, lexicon, cache, window_minutes)
            else:
                ds = build(corpus, groups, matches, lexicon, cache)
            body[key] = ds.to_dict()
        except ValueError as exc:
            logger.warning("%s dataset unavailable: %s", key, exc)
            body[key] = None
    return body


def profiles_body(corpus: Corpus, lexicon: Lexicon) -> dict[str, Any]:
    profiles = {}
    for acct in corpus.accounts:
        if corpus.posts_of(acct):
            p = user_profile(corpus, acct, lexicon)
            profiles[acct] = {"n_posts": p.n_posts, "features": p.features}
    return {"profiles": profiles}


def load_dataset(payload: dict[str, Any], task: str, path: str) -> Dataset:
    key = TASKS[task]
    if payload.get(key) is None:
        raise StageError("features", f"features file has no {key} dataset", path)
    return Dataset.from_dict(payload[key])


def evaluate_body(
    datasets: dict[str, Dataset], params: ForestParams, folds: int, seed: int, n_jobs: int
) -> dict[str, Any]:
    body = {}
    for task, ds in datasets.items():
        try:
            body[task] = cross_validate(ds, folds, params, seed, n_jobs=n_jobs).to_dict()
        except ValueError as exc:
            raise StageError("evaluate", f"{task}: {exc}") from exc
    return body


def behavior_body(corpus: Corpus, groups: list[SockGroup], window_minutes: float) -> dict[str, Any]:
    out = []
    for g in groups:
        ent = switch_entropy(corpus, g)
        try:
            timing = creation_timing(corpus, g)
        except ValueError:
            timing = None
        pairs = []
        for sec in g.secondaries:
            stats = pair_activity(corpus, (g.primary, sec), window_minutes)
            pairs.append({"primary": g.primary, "secondary": sec, **asdict(stats)})
        feedback = {}
        for m in sorted(g.members):
            fb = community_feedback(corpus, m)
            feedback[m] = {**asdict(fb), "upvote_fraction": fb.upvote_fraction}
        out.append({
            "members": sorted(g.members),
            "primary": g.primary,
            "switch_entropy": ent.entropy,
            "run_counts": ent.run_counts,
            "creation_timing": timing,
            "pairs": pairs,
            "community_feedback": feedback,
        })
    return {"groups": out}


def summary_text(report: dict[str, Any]) -> str:
    lines = [
        f"sockpuppet {__version__}",
        f"config hash: {report['config_hash']}",
        f"seed: {report['seed']}",
        f"posts: {report['posts']}  accounts: {report['accounts']}  discussions: {report['discussions']}",
        f"sockpuppet groups: {report['groups']}  accounts in groups: {report['sock_accounts']}",
    ]
    joint = report.get("joint_table")
    if joint:
        lines.append("pretender share by supportiveness:")
        for row, vals in joint.items():
            share = vals["pretender"]
            lines.append(f"  {row:<14} n={vals['n']:<5} pretender={'n/a' if share is None else f'{share:.3f}'}")
    for task, auc in report["auc"].items():
        lines.append(f"{task} mean AUC: {'n/a' if auc is None else f'{auc:.4f}'}")
    return "\n".join(lines) + "\n"


# -- subcommands --------------------------------------------------------------


def _merge_args(config: dict[str, Any], args: argparse.Namespace) -> dict[str, Any]:
    """Command-line flags override config values."""
    for key in ("corpus", "posts", "accounts", "votes", "lexicon", "valence"):
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    det = config["detection"]
    for flag, key in (("window_min", "window_minutes"), ("k_min", "min_discussions"),
                      ("ip_trim", "ip_trim_fraction"), ("acct_trim", "account_trim_fraction")):
        value = getattr(args, flag, None)
        if value is not None:
            det[key] = value
    if getattr(args, "name_threshold", None) is not None:
        config["taxonomy"]["name_threshold"] = args.name_threshold
    if getattr(args, "casefold", False):
        config["taxonomy"]["casefold"] = True
    if getattr(args, "folds", None) is not None:
        config["model"]["folds"] = args.folds
    if getattr(args, "trees", None) is not None:
        config["model"]["n_trees"] = args.trees
    if args.seed is not None:
        config["seed"] = args.seed
    return config


def cmd_ingest(config: dict[str, Any], args: argparse.Namespace) -> int:
    corpus = stage_load_corpus(config)
    report = validate_corpus(corpus)
    write_json(args.out, envelope(config, {}, {"validation": report.to_dict()}))
    return 0 if report.ok else 1


def cmd_detect(config: dict[str, Any], args: argparse.Namespace) -> int:
    corpus = stage_load_corpus(config)
    params = detection_params(config)
    groups = detect_groups(corpus, params)
    logger.info("detected %d groups", len(groups))
    write_json(args.out, envelope(config, {}, groups_body(groups, params)))
    return 0


def cmd_taxonomy(config: dict[str, Any], args: argparse.Namespace) -> int:
    corpus = stage_load_corpus(config)
    lexicon = stage_lexicon(config)
    groups = groups_from_json(read_json(_require_file("taxonomy", args.groups, "groups file"), "taxonomy"))
    tax = config["taxonomy"]
    labels = classify_groups(corpus, groups, lexicon, tax["name_threshold"], tax["casefold"])
    write_json(args.out, envelope(config, {}, taxonomy_report(labels)))
    return 0


def cmd_behavior(config: dict[str, Any], args: argparse.Namespace) -> int:
    corpus = stage_load_corpus(config)
    groups = groups_from_json(read_json(_require_file("behavior", args.groups, "groups file"), "behavior"))
    body = behavior_body(corpus, groups, config["detection"]["window_minutes"])
    write_json(args.out, envelope(config, {}, body))
    return 0


def cmd_graph(config: dict[str, Any], args: argparse.Namespace) -> int:
    corpus = stage_load_corpus(config)
    metrics = [m for m in args.metrics.split(",") if m]
    unknown = set(metrics) - set(METRICS)
    if unknown:
        raise StageError("graph", f"unknown metrics: {sorted(unknown)}")
    network = build_reply_network(corpus)
    if args.edges:
        Path(args.edges).write_text(network.to_tsv(), encoding="utf-8")
    write_json(args.out, envelope(config, {}, {"metrics": node_metrics(network, metrics)}))
    return 0


def cmd_features(config: dict[str, Any], args: argparse.Namespace) -> int:
    corpus = stage_load_corpus(config)
    lexicon = stage_lexicon(config)
    if args.groups:
        groups = groups_from_json(read_json(_require_file("features", args.groups, "groups file"), "features"))
        body = features_body(corpus, groups, lexicon, config["detection"]["window_minutes"])
    else:
        body = profiles_body(corpus, lexicon)
    write_json(args.out, envelope(config, {}, body))
    return 0


def cmd_train(config: dict[str, Any], args: argparse.Namespace) -> int:
    seed = require_seed(config, "train")
    params, _ = forest_params(config)
    path = _require_file("train", args.features, "features file")
    ds = load_dataset(read_json(path, "train"), args.task, path)
    model = train_forest(ds, params, seed, n_jobs=args.threads)
    payload = model.to_dict()
    payload["task"] = args.task
    write_json(args.out, payload)
    return 0


def cmd_evaluate(config: dict[str, Any], args: argparse.Namespace) -> int:
    path = _require_file("evaluate", args.features, "features file")
    ds = load_dataset(read_json(path, "evaluate"), args.task, path)
    if args.model:
        raw = read_json(_require_file("evaluate", args.model, "model file"), "evaluate")
        try:
            model = ForestModel.from_dict(raw)
            scores = score_dataset(model, ds)
        except ValueError as exc:
            raise StageError("evaluate", str(exc), args.model) from exc
        body = {args.task: {"auc": roc_auc(scores, ds.labels), "rows": len(ds.labels)}}
        write_json(args.out, envelope(config, {"model": model.seed}, body))
        return 0
    seed = require_seed(config, "evaluate")
    params, folds = forest_params(config)
    body = evaluate_body({args.task: ds}, params, folds, seed, args.threads)
    write_json(args.out, envelope(config, {"cv": seed}, body))
    return 0


def cmd_ablate(config: dict[str, Any], args: argparse.Namespace) -> int:
    seed = require_seed(config, "ablate")
    params, folds = forest_params(config)
    path = _require_file("ablate", args.features, "features file")
    ds = load_dataset(read_json(path, "ablate"), args.task, path)
    try:
        report = feature_set_ablation(ds, k=folds, params=params, seed=seed, n_jobs=args.threads)
    except ValueError as exc:
        raise StageError("ablate", str(exc), path) from exc
    write_json(args.out, envelope(config, {"cv": seed}, {args.task: report.to_dict()}))
    return 0


def cmd_synth(config: dict[str, Any], args: argparse.Namespace) -> int:
    raw = read_json(_require_file("synth", args.config, "config file"), "synth") if args.config else {}
    raw = raw.get("synth", raw)
    if args.seed is not None:
        raw["seed"] = args.seed
    try:
        gen_config = GeneratorConfig.from_dict(raw)
        corpus, truth = generate_community(gen_config)
    except (TypeError, ValueError) as exc:
        raise StageError("synth", str(exc), args.config) from exc
    if not args.out:
        raise StageError("synth", "no output directory given")
    try:
        emit_logs(corpus, truth, args.out)
    except OSError as exc:
        raise StageError("synth", f"cannot write logs: {exc.strerror}", args.out) from exc
    logger.info("wrote %d posts, %d accounts to %s", len(corpus.posts), len(corpus.accounts), args.out)
    return 0


def run_pipeline(config: dict[str, Any], n_jobs: int = 1) -> dict[str, Path]:
    """Execute every stage and write the report bundle into ``config['out']``."""
    seed = require_seed(config, "run")
    if not config.get("out"):
        raise StageError("run", "no output directory given")
    out = Path(config["out"])
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    failed_marker = out / "FAILED.json"
    if failed_marker.exists():
        failed_marker.unlink()

    def emit(name: str, payload: Any) -> None:
        path = out / name
        if isinstance(payload, str):
            path.write_text(payload, encoding="utf-8")
        else:
            write_json(path, payload)
        written[name] = path

    stage = "ingest"
    try:
        corpus = stage_load_corpus(config)
        lexicon = stage_lexicon(config)
        stage = "detect"
        params = detection_params(config)
        forest, folds = forest_params(config)
        groups = detect_groups(corpus, params)
        logger.info("detected %d groups", len(groups))
        emit("groups.json", envelope(config, {}, groups_body(groups, params)))

        stage = "taxonomy"
        tax = config["taxonomy"]
        labels = classify_groups(corpus, groups, lexicon, tax["name_threshold"], tax["casefold"])
        tax_report = taxonomy_report(labels)
        emit("taxonomy.json", envelope(config, {}, tax_report))

        stage = "features"
        feats = features_body(corpus, groups, lexicon, params.window_minutes)
        emit("features.json", envelope(config, {}, feats))

        stage = "evaluate"
        datasets = {
            task: Dataset.from_dict(feats[key]) for task, key in TASKS.items() if feats[key] is not None
        }
        evaluation = evaluate_body(datasets, forest, folds, seed, n_jobs)
        emit("eval.json", envelope(config, {"cv": seed}, evaluation))

        stage = "summary"
        stats = validate_corpus(corpus)
        summary = {
            "config_hash": config_hash(_portable(config)),
            "seed": seed,
            "posts": stats.n_posts,
            "accounts": stats.n_accounts,
            "discussions": stats.n_discussions,
            "groups": len(groups),
            "sock_accounts": len(sockpuppet_accounts(groups)),
            "joint_table": tax_report["joint_table"],
            "auc": {task: evaluation.get(task, {}).get("mean_auc") for task in TASKS},
        }
        emit("summary.txt", summary_text(summary))
    except StageError as exc:
        write_json(failed_marker, {**exc.to_dict(), "partial_outputs": sorted(written)})
        raise
    except (ValueError, KeyError, OSError) as exc:
        err = StageError(stage, str(exc))
        write_json(failed_marker, {**err.to_dict(), "partial_outputs": sorted(written)})
        raise err from exc
    return written


def cmd_run(config: dict[str, Any], args: argparse.Namespace) -> int:
    if args.out:
        config["out"] = args.out
    written = run_pipeline(config, args.threads)
    for name in sorted(written):
        logger.info("wrote %s", written[name])
    return 0


# -- parser -------------------------------------------------------------------


def _corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", help="directory holding posts.jsonl, accounts.jsonl, votes.jsonl")
    p.add_argument("--posts")
    p.add_argument("--accounts")
    p.add_argument("--votes")


def _detect_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--window-min", type=float, dest="window_min")
    p.add_argument("--k-min", type=int, dest="k_min")
    p.add_argument("--ip-trim", type=float, dest="ip_trim")
    p.add_argument("--acct-trim", type=float, dest="acct_trim")


def _lexicon_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lexicon", help="category TSV (category<TAB>pattern)")
    p.add_argument("--valence", help="valence TSV (word<TAB>score)")


def _model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--features", required=True, help="features.json written by the features stage")
    p.add_argument("--task", choices=sorted(TASKS), default="pair")
    p.add_argument("--folds", type=int)
    p.add_argument("--trees", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output path ('-' or omitted: standard output)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="sockpuppet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sockpuppet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="validate logs and print record counts")
    _corpus_args(p)
    p = sub.add_parser("detect", parents=[common], help="find sockpuppet groups")
    _corpus_args(p)
    _detect_args(p)
    p = sub.add_parser("taxonomy", parents=[common], help="label deceptiveness and supportiveness")
    _corpus_args(p)
    _lexicon_args(p)
    p.add_argument("--groups", required=True)
    p.add_argument("--name-threshold", type=int, dest="name_threshold")
    p.add_argument("--casefold", action="store_true")
    p = sub.add_parser("behavior", parents=[common], help="per-group activity statistics")
    _corpus_args(p)
    _detect_args(p)
    p.add_argument("--groups", required=True)
    p = sub.add_parser("graph", parents=[common], help="reply-network metrics")
    _corpus_args(p)
    p.add_argument("--metrics", default=",".join(METRICS))
    p.add_argument("--edges", help="also write the edge list as TSV")
    p = sub.add_parser("features", parents=[common], help="language profiles, or task datasets with --groups")
    _corpus_args(p)
    _lexicon_args(p)
    _detect_args(p)
    p.add_argument("--groups")
    p = sub.add_parser("train", parents=[common], help="fit a forest on one task")
    _model_args(p)
    p = sub.add_parser("evaluate", parents=[common], help="cross-validate, or score with --model")
    _model_args(p)
    p.add_argument("--model")
    p = sub.add_parser("ablate", parents=[common], help="per-feature-set CV and forward selection")
    _model_args(p)
    p = sub.add_parser("synth", parents=[common], help="generate a synthetic community")
    p = sub.add_parser("run", parents=[common], help="full pipeline from a config file")
    _corpus_args(p)
    _lexicon_args(p)
    return parser


COMMANDS: dict[str, Callable[[dict[str, Any], argparse.Namespace], int]] = {
    "ingest": cmd_ingest,
    "detect": cmd_detect,
    "taxonomy": cmd_taxonomy,
    "behavior": cmd_behavior,
    "graph": cmd_graph,
    "features": cmd_features,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
    "synth": cmd_synth,
    "run": cmd_run,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = {} if args.command == "synth" else _merge_args(load_config(args.config), args)
        return COMMANDS[args.command](config, args)
    except StageError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
