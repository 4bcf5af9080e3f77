"""Term vector training: skip-gram with negative sampling and GloVe."""

from .base import (
    CooccurrenceTable,
    EmbeddingMatrix,
    TrainConfig,
    build_cooccurrence,
    subsample_probability,
)
from .estimators import GloveEmbedding, SkipgramEmbedding
from .glove import (
    glove_initial_matrix,
    glove_total_loss,
    glove_weight,
    train_glove,
)
from .gradcheck import GradientCheckReport, gradient_check
from .model_io import (
    load_binary,
    load_sidecar,
    load_text,
    open_mapped,
    read_term_vector,
    save_binary,
    save_text,
    sidecar_path,
)
from .skipgram import (
    TrainStats,
    skipgram_initial_matrix,
    skipgram_step,
    train_skipgram,
)

__all__ = [
    "CooccurrenceTable",
    "EmbeddingMatrix",
    "GloveEmbedding",
    "GradientCheckReport",
    "SkipgramEmbedding",
    "TrainConfig",
    "TrainStats",
    "build_cooccurrence",
    "glove_initial_matrix",
    "glove_total_loss",
    "glove_weight",
    "gradient_check",
    "load_binary",
    "load_sidecar",
    "load_text",
    "open_mapped",
    "read_term_vector",
    "save_binary",
    "save_text",
    "sidecar_path",
    "skipgram_initial_matrix",
    "skipgram_step",
    "subsample_probability",
    "train_glove",
    "train_skipgram",
]
