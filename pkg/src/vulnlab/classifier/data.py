"""Dataset vectorization, padding and splitting."""

import math
from dataclasses import dataclass

import numpy as np

from ..embeddings.providers import embed_sequence
from ..errors import InsufficientData
from ..pytok import normalize_source, tokenize


@dataclass(frozen=True)
class Hyperparameters:
    neurons: int = 32
    epochs: int = 100
    batch_size: int = 32
    dropout: float = 0.0
    learning_rate: float = 1e-3
    max_seq_len: int = 500
    seed: int = 1

    def __post_init__(self):
        if self.neurons < 1 or self.batch_size < 1 or self.max_seq_len < 1:
            raise ValueError("neurons, batch_size and max_seq_len must be >= 1")
        if not (0.0 <= self.dropout < 1.0):
            raise ValueError("dropout must lie in [0, 1)")
        if self.learning_rate <= 0 or self.epochs < 0:
            raise ValueError("learning_rate must be positive, epochs >= 0")


@dataclass
class Sample:
    matrix: np.ndarray  # max_seq_len x dim, rows beyond the true length are zero
    label: int
    category: object  # VulnCategory or None for synthetic data
    id: str


def vectorize_snippet(code, provider, max_seq_len, strict=False):
    """Tokenize one code string and embed it into a padded matrix."""
    stream = tokenize(normalize_source(code), strict=strict)
    texts = stream.texts()[:max_seq_len]
    matrix = np.zeros((max_seq_len, provider.dim))
    if texts:
        matrix[: len(texts)] = np.stack(embed_sequence(provider, texts))
    return matrix


def vectorize_dataset(snippets, provider, max_seq_len=500, strict=False):
    """Labeled snippets -> padded Samples, order preserved.

    Sequences longer than max_seq_len are truncated; shorter ones are
    zero-padded. Labels and categories carry through.
    """
    samples = []
    for s in snippets:
        samples.append(
            Sample(
                matrix=vectorize_snippet(s.code, provider, max_seq_len, strict),
                label=s.label,
                category=s.category,
                id=s.id,
            )
        )
    return samples


def split_dataset(samples, ratios=(0.8, 0.1, 0.1), seed=0):
    """Deterministic shuffled split into (train, val, test).

    Sizes are floor(r*n) for all parts but the last, which takes the
    remainder. Raises InsufficientData when any part would be empty.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    n = len(samples)
    sizes = [math.floor(r * n) for r in ratios[:-1]]
    sizes.append(n - sum(sizes))
    if any(s == 0 for s in sizes):
        raise InsufficientData(f"cannot split {n} samples into parts of sizes {sizes}")
    perm = np.random.default_rng(seed).permutation(n)
    parts = []
    offset = 0
    for size in sizes:
        parts.append([samples[i] for i in perm[offset : offset + size]])
        offset += size
    return tuple(parts)
