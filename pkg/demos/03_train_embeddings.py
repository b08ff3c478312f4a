#!/usr/bin/env python3
"""Train the two local embedding models on a toy corpus and poke at them.

word2vec learns one vector per whole token and zeroes everything out of
vocabulary; the subword variant composes vectors from character n-gram
buckets, so it can embed tokens it never saw.
"""

import numpy as np

from vulnlab.embeddings import (
    FastTextProvider,
    NGramConfig,
    TrainConfig,
    Word2VecProvider,
    cosine_similarity,
    train_fasttext,
    train_word2vec,
    word_ngrams,
)
from vulnlab.pytok import build_corpus

SOURCES = [
    "def fetch_user(db, uid):\n    return db.get(uid)\n",
    "def fetch_order(db, oid):\n    return db.get(oid)\n",
    "def fetch_item(db, iid):\n    return db.get(iid)\n",
    "def render_page(tpl, ctx):\n    return tpl.render(ctx)\n",
    "def render_form(tpl, ctx):\n    return tpl.render(ctx)\n",
] * 10

streams = build_corpus(SOURCES)
config = TrainConfig(dim=24, window=3, negatives=4, epochs=8, min_count=2, seed=7)

print("== word2vec ==")
matrix, vocab = train_word2vec(streams, config)
w2v = Word2VecProvider(matrix, vocab)
print(f"vocabulary size {len(vocab)}, dim {w2v.dim}")
pairs = [("fetch_user", "fetch_order"), ("fetch_user", "render_page"), ("db", "tpl")]
for a, b in pairs:
    sim = cosine_similarity(w2v.embed(a), w2v.embed(b))
    print(f"  cos({a!r}, {b!r}) = {sim:+.3f}")
print(f"  OOV token embeds to zero: {not w2v.embed('never_seen').any()}")

print("\n== subword n-grams ==")
cfg = NGramConfig(3, 5, 4096)
print(f"n-grams of 'fetch_user': {word_ngrams('fetch_user', cfg)[:8]} ...")
ft_model = train_fasttext(streams, config, cfg)
ft = FastTextProvider(ft_model)
# an unseen identifier built from seen pieces still gets a useful vector
sim = cosine_similarity(ft.embed("fetch_users"), ft.embed("fetch_user"))
print(f"  cos('fetch_users' [OOV], 'fetch_user') = {sim:+.3f}")
assert np.all(np.isfinite(ft.embed("totally@novel!token")))
print("  any string embeds to a finite vector")
