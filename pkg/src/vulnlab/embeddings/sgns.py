"""Skip-gram with negative sampling, trained by plain SGD.

The objective for one (center, context) pair with negatives n_1..n_k is

    -log sigmoid(u_o . v_c) - sum_i log sigmoid(-u_{n_i} . v_c)

where v are input (center) vectors and u are output (context) vectors.
Negatives are drawn from the unigram distribution raised to 3/4. Training
is single-threaded and fully deterministic for a given seed.
"""

from dataclasses import dataclass

import numpy as np

from .vocab import Vocabulary, build_vocabulary, _stream_texts


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_count: int = 3
    seed: int = 1

    def __post_init__(self):
        if self.dim < 1 or self.window < 1 or self.negatives < 0:
            raise ValueError("dim and window must be >= 1, negatives >= 0")
        if self.epochs < 0 or self.learning_rate <= 0 or self.min_count < 1:
            raise ValueError("epochs >= 0, learning_rate > 0, min_count >= 1")


@dataclass
class EmbeddingMatrix:
    dim: int
    input_vectors: np.ndarray   # V x dim, the embeddings served after training
    output_vectors: np.ndarray  # V x dim, context-side vectors used in training


def generate_skipgram_pairs(stream, window, vocab):
    """(center_index, context_index) pairs within one stream.

    Out-of-vocabulary positions are skipped (they can be neither center
    nor context) but still occupy their position, so the window is counted
    over original token positions. Pairs never cross stream boundaries.
    """
    texts = _stream_texts(stream)
    idx = [vocab.token_to_index.get(t, -1) for t in texts]
    n = len(idx)
    pairs = []
    for t in range(n):
        if idx[t] < 0:
            continue
        for k in range(1, window + 1):
            if t - k >= 0 and idx[t - k] >= 0:
                pairs.append((idx[t], idx[t - k]))
            if t + k < n and idx[t + k] >= 0:
                pairs.append((idx[t], idx[t + k]))
    return pairs


def sgns_loss(center_vec, target_vecs, labels):
    """Stable SGNS loss for one center against stacked targets.

    ``labels`` is 1 for the true context row and 0 for negatives.
    """
    scores = target_vecs @ center_vec
    signs = 1.0 - 2.0 * np.asarray(labels, dtype=float)
    return float(np.sum(np.logaddexp(0.0, signs * scores)))


def sgns_gradients(center_vec, target_vecs, labels):
    """Analytic gradients of sgns_loss w.r.t. the center and target rows."""
    scores = target_vecs @ center_vec
    sig = 1.0 / (1.0 + np.exp(-scores))
    err = sig - np.asarray(labels, dtype=float)  # d loss / d score
    grad_center = err @ target_vecs
    grad_targets = np.outer(err, center_vec)
    return grad_center, grad_targets


def unigram_noise_cdf(vocab, power=0.75):
    weights = np.array(
        [vocab.counts[t] for t in vocab.index_to_token], dtype=float
    ) ** power
    return np.cumsum(weights)


def _draw_negatives(rng, cdf, shape):
    u = rng.random(shape) * cdf[-1]
    return np.searchsorted(cdf, u, side="right")


def train_word2vec(corpus, config=TrainConfig()):
    """Train skip-gram negative-sampling embeddings on a token corpus.

    Returns (EmbeddingMatrix, Vocabulary). Input vectors start uniform in
    [-0.5/dim, 0.5/dim); output vectors start at zero. The learning rate
    decays linearly to 10% of its initial value over all updates. With
    epochs=0 the seeded initialization is returned unchanged.
    """
    vocab = build_vocabulary(corpus, config.min_count)
    dim = config.dim
    rng = np.random.default_rng(config.seed)
    vec_in = (rng.random((len(vocab), dim)) - 0.5) / dim
    vec_out = np.zeros((len(vocab), dim))
    if config.epochs == 0:
        return EmbeddingMatrix(dim, vec_in, vec_out), vocab

    stream_pairs = [
        np.array(generate_skipgram_pairs(s, config.window, vocab), dtype=np.int64).reshape(-1, 2)
        for s in corpus
    ]
    per_epoch = sum(len(p) for p in stream_pairs)
    total = max(1, per_epoch * config.epochs)
    cdf = unigram_noise_cdf(vocab)
    lr0 = config.learning_rate
    k = config.negatives
    step = 0
    for _ in range(config.epochs):
        for pairs in stream_pairs:
            if len(pairs) == 0:
                continue
            negs = _draw_negatives(rng, cdf, (len(pairs), k)) if k else None
            for row in range(len(pairs)):
                center, context = pairs[row]
                lr = lr0 * (1.0 - 0.9 * step / total)
                step += 1
                if k:
                    cand = negs[row]
                    targets = np.concatenate(([context], cand[cand != context]))
                else:
                    targets = np.array([context])
                v = vec_in[center]
                rows = vec_out[targets]
                scores = rows @ v
                sig = 1.0 / (1.0 + np.exp(-scores))
                err = sig.copy()
                err[0] -= 1.0
                grad_v = err @ rows
                # Buffered fancy-index update: a negative drawn twice in one
                # step counts once, i.e. negatives act as a distinct set.
                vec_out[targets] -= lr * np.outer(err, v)
                vec_in[center] -= lr * grad_v
    return EmbeddingMatrix(dim, vec_in, vec_out), vocab
