from .providers import (
    ExternalProvider,
    FastTextProvider,
    Word2VecProvider,
    cosine_similarity,
    embed_sequence,
)
from .sgns import (
    EmbeddingMatrix,
    TrainConfig,
    generate_skipgram_pairs,
    sgns_gradients,
    sgns_loss,
    train_word2vec,
)
from .subword import (
    FastTextModel,
    NGramConfig,
    fasttext_vector,
    fnv1a_32,
    ngram_bucket,
    train_fasttext,
    word_ngrams,
)
from .vectorio import load_vectors, save_vectors
from .vocab import Vocabulary, build_vocabulary

__all__ = [
    "EmbeddingMatrix",
    "ExternalProvider",
    "FastTextModel",
    "FastTextProvider",
    "NGramConfig",
    "TrainConfig",
    "Vocabulary",
    "Word2VecProvider",
    "build_vocabulary",
    "cosine_similarity",
    "embed_sequence",
    "fasttext_vector",
    "fnv1a_32",
    "generate_skipgram_pairs",
    "load_vectors",
    "ngram_bucket",
    "save_vectors",
    "sgns_gradients",
    "sgns_loss",
    "train_fasttext",
    "train_word2vec",
    "word_ngrams",
]
