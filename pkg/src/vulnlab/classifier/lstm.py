"""LSTM forward pass and backpropagation through time, from scratch.

Gate layout: the input-weight matrix ``wx`` stacks the input, forget,
cell and output gates row-wise, so row blocks [0:N], [N:2N], [2N:3N] and
[3N:4N] belong to i, f, g and o respectively; ``wh`` and ``b`` follow the
same layout. The readout is a one-unit sigmoid dense layer over the final
hidden state. Padded (all-zero) timesteps still run through the
recurrence, matching the zero-padding contract of the dataset.
"""

import numpy as np

from ..errors import ShapeMismatch

BCE_EPS = 1e-7


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


class LstmParameters:
    """Gate weights plus the one-neuron dense head."""

    def __init__(self, wx, wh, b, dense_w, dense_b):
        wx = np.asarray(wx, dtype=float)
        wh = np.asarray(wh, dtype=float)
        b = np.asarray(b, dtype=float)
        dense_w = np.asarray(dense_w, dtype=float)
        neurons = wh.shape[1]
        if wx.shape[0] != 4 * neurons or wh.shape != (4 * neurons, neurons):
            raise ShapeMismatch(f"inconsistent gate shapes {wx.shape} / {wh.shape}")
        if b.shape != (4 * neurons,) or dense_w.shape != (neurons,):
            raise ShapeMismatch(f"inconsistent bias/dense shapes {b.shape} / {dense_w.shape}")
        self.wx = wx
        self.wh = wh
        self.b = b
        self.dense_w = dense_w
        self.dense_b = float(dense_b)

    @property
    def neurons(self):
        return self.wh.shape[1]

    @property
    def dim(self):
        return self.wx.shape[1]

    def copy(self):
        return LstmParameters(
            self.wx.copy(), self.wh.copy(), self.b.copy(),
            self.dense_w.copy(), self.dense_b,
        )

    def gate(self, which, kind="wx"):
        """View of one gate's block; which is 'input'|'forget'|'cell'|'output'."""
        order = {"input": 0, "forget": 1, "cell": 2, "output": 3}
        n = self.neurons
        i = order[which]
        return getattr(self, kind)[i * n : (i + 1) * n]


def init_parameters(dim, neurons, seed, scale=0.05):
    """All parameters uniform in [-scale, scale), seeded."""
    rng = np.random.default_rng(seed)
    return LstmParameters(
        wx=(rng.random((4 * neurons, dim)) * 2 - 1) * scale,
        wh=(rng.random((4 * neurons, neurons)) * 2 - 1) * scale,
        b=(rng.random(4 * neurons) * 2 - 1) * scale,
        dense_w=(rng.random(neurons) * 2 - 1) * scale,
        dense_b=float((rng.random() * 2 - 1) * scale),
    )


def zero_parameters(dim, neurons):
    return LstmParameters(
        wx=np.zeros((4 * neurons, dim)),
        wh=np.zeros((4 * neurons, neurons)),
        b=np.zeros(4 * neurons),
        dense_w=np.zeros(neurons),
        dense_b=0.0,
    )


def forward_batch(params, x):
    """Run the recurrence over a (batch, time, dim) input.

    Returns (probabilities (B,), hidden_states (B,T,N), cache) where the
    cache holds per-step activations for backward_batch.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 3 or x.shape[2] != params.dim:
        raise ShapeMismatch(
            f"expected input (batch, time, {params.dim}), got {x.shape}"
        )
    bsz, steps, _ = x.shape
    n = params.neurons
    h = np.zeros((bsz, n))
    c = np.zeros((bsz, n))
    hidden = np.empty((bsz, steps, n))
    cache = []
    for t in range(steps):
        z = x[:, t] @ params.wx.T + h @ params.wh.T + params.b
        i = _sigmoid(z[:, :n])
        f = _sigmoid(z[:, n : 2 * n])
        g = np.tanh(z[:, 2 * n : 3 * n])
        o = _sigmoid(z[:, 3 * n :])
        c_prev = c
        c = f * c_prev + i * g
        tc = np.tanh(c)
        h_prev = h
        h = o * tc
        hidden[:, t] = h
        cache.append((i, f, g, o, c_prev, tc, h_prev))
    logits = hidden[:, -1] @ params.dense_w + params.dense_b if steps else np.full(bsz, params.dense_b)
    probs = _sigmoid(np.atleast_1d(np.asarray(logits, dtype=float)))
    return probs, hidden, cache


def lstm_forward(params, sample_matrix, dropout_mask=None):
    """Single-sample forward pass.

    ``dropout_mask`` (training only) is multiplied into the input rows;
    build it with make_dropout_mask so survivors are pre-scaled by
    1/(1-rate). Returns (hidden_states (T,N), probability).
    """
    x = np.asarray(sample_matrix, dtype=float)
    if x.ndim != 2:
        raise ShapeMismatch(f"sample matrix must be 2-d, got {x.shape}")
    if dropout_mask is not None:
        x = x * dropout_mask
    probs, hidden, _ = forward_batch(params, x[None, :, :])
    return hidden[0], float(probs[0])


def make_dropout_mask(rng, shape, rate):
    """Inverted dropout mask: zeros with probability rate, else 1/(1-rate)."""
    if rate == 0.0:
        return np.ones(shape)
    return (rng.random(shape) >= rate) / (1.0 - rate)


def bce_loss(probability, label):
    """Binary cross-entropy with probability clamped to [eps, 1-eps]."""
    p = min(max(float(probability), BCE_EPS), 1.0 - BCE_EPS)
    y = float(label)
    return -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))


def loss_and_gradients(params, x, y):
    """Mean batch BCE and its exact gradients w.r.t. every parameter.

    ``x`` is (batch, time, dim) with any dropout already applied; ``y`` is
    the (batch,) label vector. Returns (loss, grads dict, probabilities).
    """
    y = np.asarray(y, dtype=float)
    probs, hidden, cache = forward_batch(params, x)
    if probs.shape != y.shape:
        raise ShapeMismatch(f"labels {y.shape} vs probabilities {probs.shape}")
    bsz, steps, _ = x.shape
    n = params.neurons
    clamped = np.clip(probs, BCE_EPS, 1.0 - BCE_EPS)
    loss = float(np.mean(-(y * np.log(clamped) + (1 - y) * np.log(1 - clamped))))

    dz = (probs - y) / bsz  # d loss / d dense logit
    g_dense_w = hidden[:, -1].T @ dz if steps else np.zeros(n)
    g_dense_b = float(dz.sum())
    g_wx = np.zeros_like(params.wx)
    g_wh = np.zeros_like(params.wh)
    g_b = np.zeros_like(params.b)
    dh = np.outer(dz, params.dense_w)
    dc = np.zeros((bsz, n))
    for t in range(steps - 1, -1, -1):
        i, f, g, o, c_prev, tc, h_prev = cache[t]
        do = dh * tc
        dc = dc + dh * o * (1.0 - tc * tc)
        di = dc * g
        df = dc * c_prev
        dg = dc * i
        d_z = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g * g),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        g_wx += d_z.T @ x[:, t]
        g_wh += d_z.T @ h_prev
        g_b += d_z.sum(axis=0)
        dh = d_z @ params.wh
        dc = dc * f
    grads = {
        "wx": g_wx,
        "wh": g_wh,
        "b": g_b,
        "dense_w": g_dense_w,
        "dense_b": g_dense_b,
    }
    return loss, grads, probs


def backward(params, batch):
    """Gradients of the mean batch BCE for a (inputs, labels) batch."""
    x, y = batch
    _, grads, _ = loss_and_gradients(params, np.asarray(x, dtype=float), y)
    return grads
