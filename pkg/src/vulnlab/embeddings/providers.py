"""Embedding providers: a total token -> vector interface.

Every provider embeds any string without failing; out-of-vocabulary
policy differs per kind: word2vec falls back to the zero vector, fastText
to the mean of the token's n-gram bucket vectors, an external lookup
table to the zero vector.
"""

import numpy as np

from ..errors import DimensionMismatch


class Word2VecProvider:
    kind = "word2vec"

    def __init__(self, matrix, vocab, provider_id="word2vec"):
        self.matrix = matrix
        self.vocab = vocab
        self.dim = matrix.dim
        self.provider_id = provider_id

    def embed(self, token):
        idx = self.vocab.token_to_index.get(token)
        if idx is None:
            return np.zeros(self.dim)
        return self.matrix.input_vectors[idx]


class FastTextProvider:
    kind = "fasttext"

    def __init__(self, model, provider_id="fasttext"):
        self.model = model
        self.dim = model.dim
        self.provider_id = provider_id

    def embed(self, token):
        return self.model.token_vector(token)


class ExternalProvider:
    kind = "external"

    def __init__(self, table, dim, provider_id="external"):
        self.table = table
        self.dim = dim
        self.provider_id = provider_id

    def embed(self, token):
        vec = self.table.get(token)
        if vec is None:
            return np.zeros(self.dim)
        return vec


def embed_sequence(provider, tokens):
    """Vector per token, length-preserving. OOV policy is the provider's."""
    return [provider.embed(t) for t in tokens]


def cosine_similarity(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))
