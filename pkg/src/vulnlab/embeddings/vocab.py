"""Token vocabulary with deterministic indexing."""

from collections import Counter
from dataclasses import dataclass, field

from ..errors import EmptyVocabulary


def _stream_texts(stream):
    if hasattr(stream, "texts"):
        return stream.texts()
    return list(stream)


@dataclass
class Vocabulary:
    token_to_index: dict
    counts: dict
    min_count: int
    index_to_token: list = field(default_factory=list)

    def __post_init__(self):
        if not self.index_to_token:
            self.index_to_token = [None] * len(self.token_to_index)
            for tok, idx in self.token_to_index.items():
                self.index_to_token[idx] = tok

    def __len__(self):
        return len(self.token_to_index)

    def __contains__(self, token):
        return token in self.token_to_index


def build_vocabulary(corpus, min_count=3):
    """Index all tokens with count >= min_count.

    Index order is descending count with lexicographic tie-breaking, so
    the mapping is deterministic for a given corpus.
    """
    counts = Counter()
    for stream in corpus:
        counts.update(_stream_texts(stream))
    kept = {t: c for t, c in counts.items() if c >= min_count}
    if not kept:
        raise EmptyVocabulary(
            f"no token reached min_count={min_count} "
            f"({len(counts)} distinct tokens seen)"
        )
    ordered = sorted(kept, key=lambda t: (-kept[t], t))
    return Vocabulary(
        token_to_index={t: i for i, t in enumerate(ordered)},
        counts=kept,
        min_count=min_count,
        index_to_token=ordered,
    )
