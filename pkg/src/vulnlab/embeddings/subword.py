"""Subword n-gram embeddings (fastText-style).

A token is represented by the mean of its whole-word vector (when in
vocabulary) and the vectors of its boundary-wrapped character n-grams,
which live in a fixed number of hash buckets (FNV-1a 32-bit). During
training the gradient w.r.t. the combined vector is applied to every
constituent, scaled by 1/m to stay consistent with the mean.
"""

from dataclasses import dataclass

import numpy as np

from .sgns import TrainConfig, _draw_negatives, unigram_noise_cdf
from .vocab import build_vocabulary


@dataclass(frozen=True)
class NGramConfig:
    n_min: int = 3
    n_max: int = 6
    bucket_count: int = 2 ** 20

    def __post_init__(self):
        if not (1 <= self.n_min <= self.n_max):
            raise ValueError("need 1 <= n_min <= n_max")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be >= 1")


def word_ngrams(token, cfg=NGramConfig()):
    """Character n-grams of the boundary-wrapped token, in position order.

    The full wrapped word itself is excluded: it is represented by the
    whole-word vector, not an n-gram bucket.
    """
    wrapped = f"<{token}>"
    grams = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        for i in range(len(wrapped) - n + 1):
            gram = wrapped[i : i + n]
            if gram != wrapped:
                grams.append(gram)
    return grams


def fnv1a_32(data):
    """FNV-1a 32-bit hash of a string's UTF-8 bytes."""
    h = 0x811C9DC5
    for byte in data.encode("utf-8"):
        h ^= byte
        h = (h * 0x01000193) & 0xFFFFFFFF
    return h


def ngram_bucket(gram, bucket_count):
    return fnv1a_32(gram) % bucket_count


def fasttext_vector(token, vocab, word_vectors, ngram_vectors, cfg, combine="mean"):
    """Combined vector for a token: whole-word row plus n-gram bucket rows.

    Out-of-vocabulary tokens fall back to their n-gram vectors alone; a
    token with no n-grams and no vocabulary entry maps to the zero vector.
    """
    rows = []
    if vocab is not None and token in vocab.token_to_index:
        rows.append(word_vectors[vocab.token_to_index[token]])
    for gram in word_ngrams(token, cfg):
        rows.append(ngram_vectors[ngram_bucket(gram, cfg.bucket_count)])
    if not rows:
        return np.zeros(word_vectors.shape[1])
    stacked = np.stack(rows)
    if combine == "sum":
        return stacked.sum(axis=0)
    return stacked.mean(axis=0)


class FastTextModel:
    def __init__(self, vocab, word_vectors, ngram_vectors, output_vectors, cfg,
                 combine="mean"):
        self.vocab = vocab
        self.word_vectors = word_vectors
        self.ngram_vectors = ngram_vectors
        self.output_vectors = output_vectors
        self.cfg = cfg
        self.combine = combine
        self.dim = word_vectors.shape[1]

    def token_vector(self, token):
        return fasttext_vector(
            token, self.vocab, self.word_vectors, self.ngram_vectors, self.cfg,
            self.combine,
        )


def _constituents(token, vocab, cfg):
    """(word_index or -1, bucket indices) for a vocabulary token."""
    word_idx = vocab.token_to_index.get(token, -1)
    buckets = [ngram_bucket(g, cfg.bucket_count) for g in word_ngrams(token, cfg)]
    return word_idx, np.array(buckets, dtype=np.int64)


def train_fasttext(corpus, config=TrainConfig(), cfg=NGramConfig(), combine="mean"):
    """Train subword SGNS embeddings. Deterministic for a given seed.

    Word vectors start uniform in [-0.5/dim, 0.5/dim); n-gram buckets and
    output vectors start at zero and only move when trained.
    """
    from .sgns import generate_skipgram_pairs

    vocab = build_vocabulary(corpus, config.min_count)
    dim = config.dim
    rng = np.random.default_rng(config.seed)
    word_vecs = (rng.random((len(vocab), dim)) - 0.5) / dim
    ngram_vecs = np.zeros((cfg.bucket_count, dim))
    out_vecs = np.zeros((len(vocab), dim))
    model = FastTextModel(vocab, word_vecs, ngram_vecs, out_vecs, cfg, combine)
    if config.epochs == 0:
        return model

    consts = [
        _constituents(t, vocab, cfg) for t in vocab.index_to_token
    ]
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
                word_idx, buckets = consts[center]
                m = (1 if word_idx >= 0 else 0) + len(buckets)
                if m == 0:
                    continue
                if word_idx >= 0:
                    h = word_vecs[word_idx] + ngram_vecs[buckets].sum(axis=0)
                else:
                    h = ngram_vecs[buckets].sum(axis=0)
                if combine == "mean":
                    h = h / m
                if k:
                    cand = negs[row]
                    targets = np.concatenate(([context], cand[cand != context]))
                else:
                    targets = np.array([context])
                rows = out_vecs[targets]
                scores = rows @ h
                sig = 1.0 / (1.0 + np.exp(-scores))
                err = sig.copy()
                err[0] -= 1.0
                grad_h = err @ rows
                out_vecs[targets] -= lr * np.outer(err, h)
                share = grad_h / m if combine == "mean" else grad_h
                if word_idx >= 0:
                    word_vecs[word_idx] -= lr * share
                np.subtract.at(ngram_vecs, buckets, lr * share)
    return model
