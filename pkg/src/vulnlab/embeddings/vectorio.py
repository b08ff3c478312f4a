"""Vector file interchange format.

Text format: a header line "V dim", then V lines of
"token v1 ... v_dim" with 6-decimal fixed-point coordinates. This is the
contract shared with external embedding exporters; loading always yields
an ExternalProvider (a plain lookup table with zero-vector OOV policy).
"""

import logging

import numpy as np

from ..errors import VectorFileError
from .providers import ExternalProvider, FastTextProvider, Word2VecProvider

log = logging.getLogger(__name__)


def _served_vectors(model):
    """(token, vector) pairs in vocabulary index order for a trained model."""
    if isinstance(model, Word2VecProvider):
        vocab, lookup = model.vocab, model.embed
    elif isinstance(model, FastTextProvider):
        vocab, lookup = model.model.vocab, model.embed
    elif hasattr(model, "vocab") and hasattr(model, "token_vector"):
        vocab, lookup = model.vocab, model.token_vector
    elif hasattr(model, "table"):  # ExternalProvider round-trips too
        for token in model.table:
            yield token, model.table[token]
        return
    else:
        raise TypeError(f"cannot serialize vectors from {type(model).__name__}")
    for token in vocab.index_to_token:
        yield token, lookup(token)


def save_vectors(model, path):
    """Write a trained model's in-vocabulary vectors to a vector file.

    Tokens containing whitespace cannot be represented in the
    space-separated format and are skipped with a warning.
    """
    rows = []
    skipped = 0
    dim = model.dim
    for token, vec in _served_vectors(model):
        if token != "".join(token.split()):
            skipped += 1
            continue
        rows.append((token, vec))
    if skipped:
        log.warning("save_vectors: skipped %d whitespace-bearing token(s)", skipped)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(rows)} {dim}\n")
        for token, vec in rows:
            coords = " ".join(f"{x:.6f}" for x in vec)
            fh.write(f"{token} {coords}\n")


def load_vectors(path):
    """Parse a vector file into an ExternalProvider.

    Raises VectorFileError with the offending 1-based line number on a bad
    header, a wrong field count, or a non-numeric coordinate.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if not lines or not lines[0].strip():
        raise VectorFileError("missing header", 1)
    header = lines[0].split()
    if len(header) != 2:
        raise VectorFileError(f"header must be 'V dim', got {lines[0]!r}", 1)
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError:
        raise VectorFileError(f"non-integer header field in {lines[0]!r}", 1) from None
    if count < 0 or dim < 1:
        raise VectorFileError("header counts out of range", 1)
    table = {}
    for i in range(1, count + 1):
        if i >= len(lines):
            raise VectorFileError(f"expected {count} vector lines, file ends early", i + 1)
        fields = lines[i].split()
        if len(fields) != dim + 1:
            raise VectorFileError(
                f"expected {dim + 1} fields, got {len(fields)}", i + 1
            )
        try:
            vec = np.array([float(x) for x in fields[1:]], dtype=float)
        except ValueError:
            raise VectorFileError("non-numeric coordinate", i + 1) from None
        if not np.all(np.isfinite(vec)):
            raise VectorFileError("non-finite coordinate", i + 1)
        table[fields[0]] = vec
    for j in range(count + 1, len(lines)):
        if lines[j].strip():
            raise VectorFileError("unexpected content after vector lines", j + 1)
    return ExternalProvider(table, dim)
