"""vulnlab: vulnerability prediction over mined commit data.

Pipeline stages: mine vulnerability-fixing commits, label pre/post-fix
code snippets from their diffs, lex Python into token streams, train
token embeddings (skip-gram negative sampling, with or without subword
n-grams) or load external ones, train an LSTM classifier from scratch,
and compare providers with a metrics harness.
"""

__version__ = "0.1.0"

from . import classifier, diffs, embeddings, errors, evaluation, mining, pytok, snippets

__all__ = [
    "classifier",
    "diffs",
    "embeddings",
    "errors",
    "evaluation",
    "mining",
    "pytok",
    "snippets",
    "__version__",
]
