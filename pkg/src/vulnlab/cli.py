"""Pipeline command line: one subcommand per stage, one config file.

Exit codes: 0 success, 1 domain error (the error class name goes to
stderr), 2 usage or configuration error.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import evaluation, mining, pytok, snippets
from .classifier.data import Hyperparameters, split_dataset, vectorize_dataset
from .classifier.training import load_model, save_model, train
from .config import PipelineConfig, load_config, require_path
from .embeddings import (
    FastTextProvider,
    Word2VecProvider,
    load_vectors,
    save_vectors,
    train_fasttext,
    train_word2vec,
)
from .errors import ConfigError, VulnlabError

log = logging.getLogger(__name__)


def _build_source(config):
    if config.source_mode == "fixture":
        fixture_dir = require_path(config.fixture_dir, "fixture_dir")
        return mining.FixtureSource(fixture_dir)
    return mining.LiveSource(api_base=config.api_base, workers=config.live_workers)


def _keyword_table(config):
    if config.keyword_table_path:
        return mining.load_keyword_table(require_path(config.keyword_table_path, "keyword_table_path"))
    return mining.DEFAULT_KEYWORD_TABLE


def _ensure_parent(path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return path


def _corpus_token_lists(config):
    corpus_file = require_path(config.corpus_path, "corpus_path")
    return pytok.read_corpus_token_lists(corpus_file)


def _build_provider(config):
    """Provider per configured kind.

    word2vec and fastText are trained in-process from the token corpus
    (deterministic for the configured seed); the external kind loads the
    configured vector file.
    """
    if config.provider == "external":
        if not config.vector_file_path:
            raise ConfigError("provider kind external requires vector_file_path")
        return load_vectors(require_path(config.vector_file_path, "vector_file_path"))
    corpus = _corpus_token_lists(config)
    if config.provider == "word2vec":
        matrix, vocab = train_word2vec(corpus, config.train_config)
        return Word2VecProvider(matrix, vocab)
    model = train_fasttext(corpus, config.train_config, config.ngram_config, config.combine)
    return FastTextProvider(model)


def cmd_mine(config, args):
    source = _build_source(config)
    table = _keyword_table(config)
    limit = args.limit if args.limit is not None else config.limit
    records = list(mining.search_candidate_commits(source, table, limit))
    out = args.out or config.commits_path
    mining.write_commit_records(records, _ensure_parent(out))
    print(f"mine: {len(records)} commit(s) -> {out}")
    return 0


def cmd_label(config, args):
    source = _build_source(config)
    records = mining.read_commit_records(require_path(config.commits_path, "commits_path"))
    labeled = []
    for record in records:
        diff_text = mining.fetch_commit_diff(record.repo, record.sha, source)
        if not diff_text:
            continue
        files = mining.fetch_commit_files(record.repo, record.sha, source)
        labeled.extend(
            snippets.label_commit(record, diff_text, files, config.context_radius)
        )
    deduped = snippets.dedupe_snippets(labeled)
    out = args.out or config.dataset_path
    snippets.write_snippets(deduped, _ensure_parent(out))
    print(f"label: {len(deduped)} snippet(s) ({len(labeled)} before dedup) -> {out}")
    return 0


def cmd_tokenize(config, args):
    if config.corpus_source_dir:
        root = require_path(config.corpus_source_dir, "corpus_source_dir")
        paths = sorted(root.rglob("*.py"))
        sources = [p.read_text(encoding="utf-8", errors="replace") for p in paths]
        ids = [str(p.relative_to(root)) for p in paths]
    else:
        dataset = snippets.read_snippets(require_path(config.dataset_path, "dataset_path"))
        sources = [s.code for s in dataset]
        ids = [s.id for s in dataset]
    streams = pytok.build_corpus(sources, source_ids=ids)
    out = args.out or config.corpus_path
    pytok.write_corpus(streams, _ensure_parent(out))
    print(f"tokenize: {len(streams)} stream(s) -> {out}")
    return 0


def cmd_train_embedding(config, args):
    kind = args.provider or config.provider
    if kind == "external":
        raise ConfigError("provider kind external is pre-trained; nothing to train")
    corpus = _corpus_token_lists(config)
    if kind == "word2vec":
        matrix, vocab = train_word2vec(corpus, config.train_config)
        provider = Word2VecProvider(matrix, vocab)
    elif kind == "fasttext":
        model = train_fasttext(corpus, config.train_config, config.ngram_config, config.combine)
        provider = FastTextProvider(model)
    else:
        raise ConfigError(f"unknown provider kind {kind!r}")
    out = args.out or config.vector_file_path or "vectors.txt"
    save_vectors(provider, _ensure_parent(out))
    print(f"train-embedding: {kind} dim {provider.dim} -> {out}")
    return 0


def cmd_train(config, args):
    provider = _build_provider(config)
    dataset = snippets.read_snippets(require_path(config.dataset_path, "dataset_path"))
    hyper = config.hyperparameters
    samples = vectorize_dataset(dataset, provider, hyper.max_seq_len)
    train_set, val_set, _ = split_dataset(samples, seed=config.seed)
    model = train(train_set, val_set, hyper, provider_id=provider.provider_id)
    out = args.out or config.model_path
    save_model(model, _ensure_parent(out))
    last = model.history[-1] if model.history else (float("nan"), None, None)
    print(f"train: {hyper.epochs} epoch(s), final train loss {last[0]:.4f} -> {out}")
    return 0


def cmd_evaluate(config, args):
    provider = _build_provider(config)
    dataset = snippets.read_snippets(require_path(config.dataset_path, "dataset_path"))
    hyper = config.hyperparameters
    samples = vectorize_dataset(dataset, provider, hyper.max_seq_len)
    fmt = args.format or config.report_format
    if args.protocol == "kfold":
        rows, mean_row = evaluation.kfold(
            samples, k=config.kfold_k, seed=config.seed, hyper=hyper, provider=provider
        )
        rows = rows + [mean_row]
    else:
        model = load_model(require_path(config.model_path, "model_path"), provider)
        _, _, test_set = split_dataset(samples, seed=config.seed)
        rows = evaluation.per_category_report(model, test_set)
    out = args.out or config.report_path
    evaluation.emit_report(rows, fmt, _ensure_parent(out))
    print(f"evaluate: {len(rows)} row(s) -> {out}")
    return 0


def cmd_sweep(config, args):
    dataset = snippets.read_snippets(require_path(config.dataset_path, "dataset_path"))
    providers = []
    for kind in config.sweep_providers:
        providers.append(_build_provider(replace(config, provider=kind)))
    rows = evaluation.sweep(
        config.sweep_grid, providers, dataset, config.seed, config.hyperparameters
    )
    fmt = args.format or config.report_format
    out = args.out or config.report_path
    evaluation.emit_report(rows, fmt, _ensure_parent(out))
    print(f"sweep: {len(rows)} row(s) -> {out}")
    return 0


def cmd_report(config, args):
    src = Path(args.input or config.report_path)
    if not src.exists():
        raise ConfigError(f"report input {src} does not exist")
    with open(src, "r", encoding="utf-8") as fh:
        records = json.load(fh)
    rows = []
    for rec in records:
        hyper = None
        if rec.get("neurons") is not None:
            hyper = Hyperparameters(
                neurons=rec["neurons"],
                epochs=rec["epochs"],
                batch_size=rec["batch_size"],
                dropout=rec["dropout"],
            )
        rows.append(
            evaluation.MetricsRow(
                accuracy=rec["accuracy"] if rec["accuracy"] is not None else float("nan"),
                precision=rec["precision"] if rec["precision"] is not None else float("nan"),
                recall=rec["recall"] if rec["recall"] is not None else float("nan"),
                f1=rec["f1"] if rec["f1"] is not None else float("nan"),
                scope=rec["scope"],
                provider_id=rec["provider"],
                hyper=hyper,
            )
        )
    fmt = args.format or "csv"
    out = args.out or config.report_path
    evaluation.emit_report(rows, fmt, _ensure_parent(out))
    print(f"report: {len(rows)} row(s) -> {out}")
    return 0


_COMMANDS = {
    "mine": cmd_mine,
    "label": cmd_label,
    "tokenize": cmd_tokenize,
    "train-embedding": cmd_train_embedding,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vulnlab",
        description="Vulnerability-prediction pipeline over mined commit data.",
    )
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=name != "report", help="pipeline config JSON")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--out", default=None, help="output path override")
        if name == "mine":
            p.add_argument("--limit", type=int, default=None)
        if name == "train-embedding":
            p.add_argument("--provider", choices=("word2vec", "fasttext"), default=None)
        if name in ("train", "evaluate"):
            p.add_argument(
                "--provider", choices=("word2vec", "fasttext", "external"), default=None
            )
        if name in ("evaluate", "sweep", "report"):
            p.add_argument("--format", choices=("csv", "json"), default=None)
        if name == "evaluate":
            p.add_argument("--protocol", choices=("split", "kfold"), default="split")
        if name == "report":
            p.add_argument("--in", dest="input", default=None, help="existing JSON report")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level)
    try:
        if args.command == "report" and not args.config:
            if args.input is None:
                raise ConfigError("report needs --in or --config")
            config = PipelineConfig()
        else:
            config = load_config(args.config)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if args.command in ("train", "evaluate") and args.provider is not None:
            config = replace(config, provider=args.provider)
        config = config.seeded()
        return _COMMANDS[args.command](config, args)
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return 2
    except VulnlabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
