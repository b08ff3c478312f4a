#!/usr/bin/env python3
"""Compare embedding providers on identical data splits.

The sweep trains one classifier per (provider, hyper-parameter) cell; all
cells observe the same train/val/test partition, so differences in the
report trace back to the embeddings, not to data luck. An external
provider loaded from a vector file takes part exactly like the locally
trained ones.
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from synthdata import make_synthetic_snippets

from vulnlab.embeddings import (
    FastTextProvider,
    NGramConfig,
    TrainConfig,
    Word2VecProvider,
    load_vectors,
    save_vectors,
    train_fasttext,
    train_word2vec,
)
from vulnlab.classifier import Hyperparameters
from vulnlab.evaluation import emit_report, sweep
from vulnlab.pytok import build_corpus

snippets = make_synthetic_snippets(240, seed=8)
streams = build_corpus([s.code for s in snippets])
config = TrainConfig(dim=16, window=3, negatives=4, epochs=2, min_count=1, seed=21)

matrix, vocab = train_word2vec(streams, config)
w2v = Word2VecProvider(matrix, vocab)
ft = FastTextProvider(train_fasttext(streams, config, NGramConfig(3, 5, 2048)))

# round-trip word2vec through the interchange format to get an "external" provider
with tempfile.TemporaryDirectory() as tmp:
    vec_path = Path(tmp) / "w2v.vec"
    save_vectors(w2v, vec_path)
    external = load_vectors(vec_path)

grid = {"epochs": [10, 20], "dropout": [0.0, 0.2], "neurons": [8], "batch_size": [16]}
base = Hyperparameters(max_seq_len=48, learning_rate=3e-3)
rows = sweep(grid, [w2v, ft, external], snippets, seed=4, base_hyper=base)

print(emit_report(rows, "csv"))
best = max(rows, key=lambda r: r.f1)
print(
    f"best cell: {best.provider_id} epochs={best.hyper.epochs} "
    f"dropout={best.hyper.dropout} -> F1 {best.f1:.3f}"
)
