"""Single-file pipeline configuration with flag overrides."""

import hashlib
import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .classifier.data import Hyperparameters
from .embeddings.sgns import TrainConfig
from .embeddings.subword import NGramConfig
from .errors import ConfigError

PROVIDER_KINDS = ("word2vec", "fasttext", "external")


def derive_seed(master_seed, module_name):
    """Stable per-module seed: hash of the master seed and the module name."""
    digest = hashlib.sha256(f"{master_seed}:{module_name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (2 ** 31)


@dataclass
class PipelineConfig:
    seed: int = 1
    keyword_table_path: str = None
    source_mode: str = "fixture"  # "fixture" | "live"
    fixture_dir: str = None
    api_base: str = "https://api.github.com"
    live_workers: int = 1
    limit: int = None
    commits_path: str = "commits.jsonl"
    dataset_path: str = "dataset.jsonl"
    corpus_path: str = "corpus.txt"
    corpus_source_dir: str = None
    context_radius: int = 5
    provider: str = "word2vec"
    vector_file_path: str = None
    combine: str = "mean"  # fastText constituent combination: "mean" | "sum"
    train_config: TrainConfig = field(default_factory=TrainConfig)
    ngram_config: NGramConfig = field(default_factory=NGramConfig)
    hyperparameters: Hyperparameters = field(default_factory=Hyperparameters)
    model_path: str = "model.json"
    report_path: str = "report.csv"
    report_format: str = "csv"
    kfold_k: int = 10
    sweep_providers: tuple = ("word2vec",)
    sweep_grid: dict = field(
        default_factory=lambda: {
            "epochs": [25, 50, 100],
            "dropout": [0.0, 0.1, 0.2, 0.3, 0.5],
            "neurons": [16, 32],
            "batch_size": [32, 128],
        }
    )
    # Set by load_config when the config file pins a module seed itself;
    # an explicitly configured seed wins over master-seed derivation.
    explicit_train_seed: bool = False
    explicit_hyper_seed: bool = False

    def __post_init__(self):
        if self.source_mode not in ("fixture", "live"):
            raise ConfigError(f"source_mode must be fixture or live, got {self.source_mode!r}")
        if self.provider not in PROVIDER_KINDS:
            raise ConfigError(f"provider must be one of {PROVIDER_KINDS}, got {self.provider!r}")
        if self.report_format not in ("csv", "json"):
            raise ConfigError(f"report_format must be csv or json, got {self.report_format!r}")

    def seeded(self):
        """Fill unpinned module seeds, derived from the master seed."""
        out = self
        if not self.explicit_train_seed:
            out = replace(
                out,
                train_config=replace(out.train_config, seed=derive_seed(self.seed, "embeddings")),
            )
        if not self.explicit_hyper_seed:
            out = replace(
                out,
                hyperparameters=replace(out.hyperparameters, seed=derive_seed(self.seed, "classifier")),
            )
        return out


def _build_nested(cls, raw, what):
    valid = {f.name for f in fields(cls)}
    unknown = set(raw) - valid
    if unknown:
        raise ConfigError(f"unknown {what} field(s): {sorted(unknown)}")
    try:
        return cls(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {what}: {exc}") from exc


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    nested = {
        "train_config": TrainConfig,
        "ngram_config": NGramConfig,
        "hyperparameters": Hyperparameters,
    }
    kwargs = {}
    valid = {f.name for f in fields(PipelineConfig)}
    for key, value in raw.items():
        if key not in valid:
            raise ConfigError(f"unknown config field {key!r}")
        if key in nested:
            kwargs[key] = _build_nested(nested[key], value, key)
        elif key == "sweep_providers":
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    if "train_config" in raw and "seed" in raw["train_config"]:
        kwargs["explicit_train_seed"] = True
    if "hyperparameters" in raw and "seed" in raw["hyperparameters"]:
        kwargs["explicit_hyper_seed"] = True
    try:
        return PipelineConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def require_path(value, what):
    if value is None:
        raise ConfigError(f"{what} is not configured")
    if not Path(value).exists():
        raise ConfigError(f"{what} {value!r} does not exist")
    return Path(value)
