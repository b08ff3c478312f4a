"""Classification metrics, cross-validation and hyper-parameter sweeps."""

import hashlib
import itertools
import json
import logging
from dataclasses import dataclass, replace

import numpy as np

from .classifier.data import Hyperparameters, split_dataset, vectorize_dataset
from .classifier.training import predict_batch, train
from .errors import (
    EmptyEvaluation,
    InsufficientData,
    IoError,
    LengthMismatch,
    VulnlabError,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn


@dataclass
class MetricsRow:
    accuracy: float
    precision: float
    recall: float
    f1: float
    scope: str = "overall"  # "overall" or a VulnCategory name
    provider_id: str = ""
    hyper: Hyperparameters = None
    error: str = None  # set when a sweep cell failed; metrics are then NaN


def confusion(predictions, truths):
    """Count the four confusion cells; positive class is vulnerable (1)."""
    if len(predictions) != len(truths):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(truths)} truths")
    tp = fp = tn = fn = 0
    for (_, pred), truth in zip(predictions, truths):
        if pred == 1 and truth == 1:
            tp += 1
        elif pred == 1 and truth == 0:
            fp += 1
        elif pred == 0 and truth == 0:
            tn += 1
        else:
            fn += 1
    return ConfusionCounts(tp, fp, tn, fn)


def metrics(counts, scope="overall", provider_id="", hyper=None):
    """Accuracy, precision, recall and F1 from confusion counts.

    Precision and recall are 0 when their denominator is 0, and F1 is
    2PR/(P+R) when P+R > 0, else 0.
    """
    if counts.total == 0:
        raise EmptyEvaluation("no samples evaluated")
    accuracy = (counts.tp + counts.tn) / counts.total
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return MetricsRow(accuracy, precision, recall, f1, scope, provider_id, hyper)


def _provider_id(provider):
    if isinstance(provider, str):
        return provider
    return provider.provider_id


def kfold(samples, k=10, seed=0, hyper=Hyperparameters(), provider=""):
    """k-fold cross-validation; returns (per-fold rows, mean row).

    Samples are shuffled once by seed and cut into k near-equal folds
    (sizes differ by at most one). Each fold serves once as the test set,
    the remainder as training data; fold metrics are averaged
    arithmetically into the mean row.
    """
    n = len(samples)
    if n < k:
        raise InsufficientData(f"{n} samples cannot fill {k} folds")
    pid = _provider_id(provider)
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, k)
    rows = []
    for fold_idx in folds:
        test_set = [samples[i] for i in fold_idx]
        train_idx = sorted(set(range(n)) - set(int(i) for i in fold_idx))
        train_set = [samples[i] for i in train_idx]
        model = train(train_set, [], hyper, provider_id=pid)
        preds = predict_batch(model, test_set)
        truths = [s.label for s in test_set]
        rows.append(metrics(confusion(preds, truths), "overall", pid, hyper))
    mean_row = MetricsRow(
        accuracy=float(np.mean([r.accuracy for r in rows])),
        precision=float(np.mean([r.precision for r in rows])),
        recall=float(np.mean([r.recall for r in rows])),
        f1=float(np.mean([r.f1 for r in rows])),
        scope="overall",
        provider_id=pid,
        hyper=hyper,
    )
    return rows, mean_row


def per_category_report(model, test_samples):
    """Metrics per vulnerability category present in the test set, plus overall.

    Categories with no test samples are omitted (with a warning).
    """
    if not test_samples:
        raise EmptyEvaluation("empty test set")
    preds = predict_batch(model, test_samples)
    truths = [s.label for s in test_samples]
    rows = [
        metrics(confusion(preds, truths), "overall", model.provider_id, model.hyper)
    ]
    categories = []
    for s in test_samples:
        if s.category is not None and s.category not in categories:
            categories.append(s.category)
    from .mining import VulnCategory

    for cat in VulnCategory:
        if cat not in categories:
            log.warning("per_category_report: no test samples for %s", cat.value)
    for cat in sorted(categories, key=lambda c: c.value):
        sel = [i for i, s in enumerate(test_samples) if s.category == cat]
        rows.append(
            metrics(
                confusion([preds[i] for i in sel], [truths[i] for i in sel]),
                cat.value,
                model.provider_id,
                model.hyper,
            )
        )
    return rows


def derive_cell_seed(master_seed, provider_id, hyper):
    """Deterministic per-cell training seed from the master seed and cell values.

    Depends on values, not grid position, so identical cells train
    identically wherever they appear.
    """
    key = f"{master_seed}|{provider_id}|{hyper.epochs}|{hyper.dropout}|{hyper.neurons}|{hyper.batch_size}"
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (2 ** 31)


_FAILED = float("nan")


def sweep(grid, providers, snippets, seed=0, base_hyper=Hyperparameters()):
    """Cartesian-product sweep over hyper-parameters and providers.

    Every cell sees the identical train/val/test index partition (the
    split uses the master seed for every provider), so providers are
    compared on the same data. A failing cell yields a row with NaN
    metrics and an error message instead of aborting the sweep.
    """
    epochs_values = list(grid["epochs"])
    dropout_values = list(grid["dropout"])
    neuron_values = list(grid["neurons"])
    batch_values = list(grid["batch_size"])
    if not (epochs_values and dropout_values and neuron_values and batch_values):
        raise ValueError("sweep grid must be non-empty on every axis")
    rows = []
    for provider in providers:
        pid = _provider_id(provider)
        samples = vectorize_dataset(snippets, provider, base_hyper.max_seq_len)
        train_set, val_set, test_set = split_dataset(samples, seed=seed)
        truths = [s.label for s in test_set]
        for epochs, dropout, neurons, batch_size in itertools.product(
            epochs_values, dropout_values, neuron_values, batch_values
        ):
            hyper = replace(
                base_hyper,
                epochs=epochs,
                dropout=dropout,
                neurons=neurons,
                batch_size=batch_size,
            )
            hyper = replace(hyper, seed=derive_cell_seed(seed, pid, hyper))
            try:
                model = train(train_set, val_set, hyper, provider_id=pid)
                preds = predict_batch(model, test_set)
                rows.append(metrics(confusion(preds, truths), "overall", pid, hyper))
            except VulnlabError as exc:
                log.warning("sweep cell failed (%s, %s): %s", pid, hyper, exc)
                rows.append(
                    MetricsRow(_FAILED, _FAILED, _FAILED, _FAILED,
                               "overall", pid, hyper, error=str(exc))
                )
    rows.sort(key=_row_sort_key)
    return rows


def _row_sort_key(row):
    h = row.hyper or Hyperparameters()
    return (row.provider_id, h.neurons, h.epochs, h.batch_size, h.dropout, row.scope)


CSV_COLUMNS = (
    "provider,scope,neurons,epochs,batch_size,dropout,accuracy,precision,recall,f1"
)


def _metric_str(value):
    if value is None or value != value:  # NaN marks a failed cell
        return ""
    return f"{value:.6f}"


def _row_record(row):
    h = row.hyper
    return {
        "provider": row.provider_id,
        "scope": row.scope,
        "neurons": h.neurons if h else None,
        "epochs": h.epochs if h else None,
        "batch_size": h.batch_size if h else None,
        "dropout": h.dropout if h else None,
        "accuracy": None if row.accuracy != row.accuracy else row.accuracy,
        "precision": None if row.precision != row.precision else row.precision,
        "recall": None if row.recall != row.recall else row.recall,
        "f1": None if row.f1 != row.f1 else row.f1,
    }


def emit_report(rows, fmt="csv", path=None):
    """Serialize metric rows to CSV or JSON; byte-deterministic.

    CSV columns are exactly provider,scope,neurons,epochs,batch_size,
    dropout,accuracy,precision,recall,f1 with 6-decimal metrics; failed
    cells leave their metric cells empty (null in JSON).
    """
    if not rows:
        raise EmptyEvaluation("no rows to report")
    if fmt == "csv":
        lines = [CSV_COLUMNS]
        for row in rows:
            h = row.hyper
            lines.append(
                ",".join(
                    [
                        row.provider_id,
                        row.scope,
                        str(h.neurons) if h else "",
                        str(h.epochs) if h else "",
                        str(h.batch_size) if h else "",
                        f"{h.dropout:g}" if h else "",
                        _metric_str(row.accuracy),
                        _metric_str(row.precision),
                        _metric_str(row.recall),
                        _metric_str(row.f1),
                    ]
                )
            )
        payload = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = json.dumps([_row_record(r) for r in rows], indent=2) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(payload)
        except OSError as exc:
            raise IoError(str(exc)) from exc
    return payload
