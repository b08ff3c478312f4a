"""Minibatch training loop: Adam over BPTT gradients, seeded end to end."""

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import DivergenceError, ModelFileError
from .data import Hyperparameters
from .lstm import (
    LstmParameters,
    bce_loss,
    forward_batch,
    init_parameters,
    loss_and_gradients,
    make_dropout_mask,
)

MODEL_FORMAT_VERSION = 1

_ADAM_BETA1 = 0.9
_ADAM_BETA2 = 0.999
_ADAM_EPS = 1e-8


@dataclass
class TrainedModel:
    params: LstmParameters
    provider_id: str
    hyper: Hyperparameters
    # One (train_loss, val_loss, val_f1) triple per epoch actually run;
    # val entries are None when no validation set was supplied.
    history: list = field(default_factory=list)


class _Adam:
    def __init__(self, shapes):
        self.m = {k: np.zeros(s) for k, s in shapes.items()}
        self.v = {k: np.zeros(s) for k, s in shapes.items()}
        self.t = 0

    def update(self, values, grads, lr):
        self.t += 1
        bc1 = 1.0 - _ADAM_BETA1 ** self.t
        bc2 = 1.0 - _ADAM_BETA2 ** self.t
        for key, grad in grads.items():
            self.m[key] = _ADAM_BETA1 * self.m[key] + (1 - _ADAM_BETA1) * grad
            self.v[key] = _ADAM_BETA2 * self.v[key] + (1 - _ADAM_BETA2) * np.square(grad)
            step = lr * (self.m[key] / bc1) / (np.sqrt(self.v[key] / bc2) + _ADAM_EPS)
            values[key] = values[key] - step
        return values


def _stack(samples):
    x = np.stack([s.matrix for s in samples])
    y = np.array([s.label for s in samples], dtype=float)
    return x, y


def _binary_f1(y_true, y_pred):
    tp = int(np.sum((y_pred == 1) & (y_true == 1)))
    fp = int(np.sum((y_pred == 1) & (y_true == 0)))
    fn = int(np.sum((y_pred == 0) & (y_true == 1)))
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def train(train_set, val_set, hyper, provider_id=""):
    """Train the LSTM classifier. Bit-reproducible for fixed inputs.

    Parameters start uniform in [-0.05, 0.05); samples are reshuffled each
    epoch; a fresh inverted-dropout mask is drawn per sample per step.
    Raises DivergenceError when the training loss stops being finite.
    """
    if not train_set:
        raise ValueError("train_set must be non-empty")
    x_train, y_train = _stack(train_set)
    dim = x_train.shape[2]
    rng = np.random.default_rng(hyper.seed)
    params = init_parameters(dim, hyper.neurons, hyper.seed)
    values = {
        "wx": params.wx,
        "wh": params.wh,
        "b": params.b,
        "dense_w": params.dense_w,
        "dense_b": np.float64(params.dense_b),
    }
    adam = _Adam({k: np.shape(v) for k, v in values.items()})
    history = []
    n = len(train_set)
    for _ in range(hyper.epochs):
        perm = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, hyper.batch_size):
            batch_idx = perm[start : start + hyper.batch_size]
            xb = x_train[batch_idx]
            if hyper.dropout > 0.0:
                xb = xb * make_dropout_mask(rng, xb.shape, hyper.dropout)
            current = LstmParameters(
                values["wx"], values["wh"], values["b"],
                values["dense_w"], float(values["dense_b"]),
            )
            loss, grads, _ = loss_and_gradients(current, xb, y_train[batch_idx])
            if not np.isfinite(loss):
                raise DivergenceError(f"training loss became {loss}")
            epoch_loss += loss * len(batch_idx)
            values = adam.update(values, grads, hyper.learning_rate)
        train_loss = epoch_loss / n
        if val_set:
            current = LstmParameters(
                values["wx"], values["wh"], values["b"],
                values["dense_w"], float(values["dense_b"]),
            )
            x_val, y_val = _stack(val_set)
            probs, _, _ = forward_batch(current, x_val)
            val_loss = float(np.mean([bce_loss(p, y) for p, y in zip(probs, y_val)]))
            val_f1 = _binary_f1(y_val.astype(int), (probs >= 0.5).astype(int))
            history.append((train_loss, val_loss, val_f1))
        else:
            history.append((train_loss, None, None))
    final = LstmParameters(
        values["wx"], values["wh"], values["b"],
        values["dense_w"], float(values["dense_b"]),
    )
    return TrainedModel(final, provider_id, hyper, history)


def predict(model, sample):
    """(probability, predicted label); ties at exactly 0.5 predict 1."""
    matrix = sample.matrix if hasattr(sample, "matrix") else np.asarray(sample)
    probs, _, _ = forward_batch(model.params, matrix[None, :, :])
    p = float(probs[0])
    return p, int(p >= 0.5)


def predict_batch(model, samples):
    x = np.stack([s.matrix for s in samples])
    probs, _, _ = forward_batch(model.params, x)
    return [(float(p), int(p >= 0.5)) for p in probs]


# --- model file (versioned JSON container) ---

def _gate_blocks(arr, neurons):
    names = ("input", "forget", "cell", "output")
    return {
        name: arr[i * neurons : (i + 1) * neurons].tolist()
        for i, name in enumerate(names)
    }


def save_model(model, path):
    p = model.params
    n = p.neurons
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "provider_id": model.provider_id,
        "dim": p.dim,
        "neurons": n,
        "hyper": asdict(model.hyper),
        "history": [list(h) for h in model.history],
        "params": {
            "w": _gate_blocks(p.wx, n),
            "u": _gate_blocks(p.wh, n),
            "b": _gate_blocks(p.b, n),
            "dense_w": p.dense_w.tolist(),
            "dense_b": p.dense_b,
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path, provider=None):
    """Load a model file; reject dimension mismatches with the provider."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFileError(f"{path}: {exc}") from exc
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ModelFileError(
            f"unsupported model format version {doc.get('format_version')!r}"
        )
    dim = doc["dim"]
    if provider is not None and provider.dim != dim:
        raise ModelFileError(
            f"model expects dim {dim} but provider {provider.provider_id!r} "
            f"serves dim {provider.dim}"
        )
    raw = doc["params"]
    order = ("input", "forget", "cell", "output")
    try:
        wx = np.concatenate([np.array(raw["w"][g], dtype=float) for g in order])
        wh = np.concatenate([np.array(raw["u"][g], dtype=float) for g in order])
        b = np.concatenate([np.array(raw["b"][g], dtype=float) for g in order])
        params = LstmParameters(wx, wh, b, raw["dense_w"], raw["dense_b"])
    except (KeyError, ValueError) as exc:
        raise ModelFileError(f"malformed parameter block: {exc}") from exc
    if params.dim != dim or params.neurons != doc["neurons"]:
        raise ModelFileError("declared dims disagree with parameter shapes")
    hyper = Hyperparameters(**doc["hyper"])
    history = [tuple(h) for h in doc["history"]]
    return TrainedModel(params, doc["provider_id"], hyper, history)
