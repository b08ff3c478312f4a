#!/usr/bin/env python3
"""Train the LSTM on a small synthetic vulnerability dataset end to end.

Vulnerable snippets concatenate user input into an SQL string; fixed ones
use a parameterized query. The classifier sees only embedded token
sequences and has to pick up the construction pattern.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from synthdata import make_synthetic_snippets

from vulnlab.classifier import (
    Hyperparameters,
    predict,
    split_dataset,
    train,
    vectorize_dataset,
)
from vulnlab.embeddings import TrainConfig, Word2VecProvider, train_word2vec
from vulnlab.evaluation import confusion, metrics
from vulnlab.pytok import build_corpus

snippets = make_synthetic_snippets(400, seed=3)
print(f"{len(snippets)} snippets, example (vulnerable):\n")
print(next(s.code for s in snippets if s.label == 1))

streams = build_corpus([s.code for s in snippets])
matrix, vocab = train_word2vec(
    streams, TrainConfig(dim=24, window=3, negatives=4, epochs=2, min_count=1, seed=1)
)
provider = Word2VecProvider(matrix, vocab)

samples = vectorize_dataset(snippets, provider, max_seq_len=48)
train_set, val_set, test_set = split_dataset(samples, seed=5)
print(f"split: {len(train_set)} train / {len(val_set)} val / {len(test_set)} test")

hyper = Hyperparameters(
    neurons=16, epochs=20, batch_size=16, dropout=0.1,
    learning_rate=3e-3, max_seq_len=48, seed=9,
)
model = train(train_set, val_set, hyper, provider_id=provider.provider_id)
print("\nepoch  train_loss  val_loss  val_f1")
for i, (tl, vl, f1) in enumerate(model.history, 1):
    print(f"{i:5d}  {tl:10.4f}  {vl:8.4f}  {f1:6.3f}")

preds = [predict(model, s) for s in test_set]
row = metrics(confusion(preds, [s.label for s in test_set]))
print(
    f"\ntest: accuracy {row.accuracy:.3f}  precision {row.precision:.3f}"
    f"  recall {row.recall:.3f}  F1 {row.f1:.3f}"
)
