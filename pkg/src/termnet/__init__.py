"""termnet: build a semantic network of technical terms from raw text and
query it on demand.

The pipeline runs corpus normalization, multi-word phrase detection,
denoising, and term-vector training; the resulting store answers pairwise
relevance, nearest-neighbor, text-to-subgraph, and tree-expansion queries,
locally or over the bundled REST service.
"""

from .corpus import (
    DocumentKind,
    DocumentRecord,
    TextNormalizer,
    ingest,
    normalize,
    read_line_sentences,
    split_sentences,
    tokenize,
    write_line_sentences,
)
from .denoise import (
    CorpusCleaner,
    Lemmatizer,
    StopList,
    denoise_corpus,
    filter_numeric_and_rare,
    lemmatize_corpus,
    load_bundled_stoplists,
    load_stoplist,
    remove_stopwords,
)
from .embedding import (
    CooccurrenceTable,
    EmbeddingMatrix,
    GloveEmbedding,
    SkipgramEmbedding,
    TrainConfig,
    build_cooccurrence,
    gradient_check,
    subsample_probability,
    train_glove,
    train_skipgram,
)
from .errors import (
    DegenerateVectorError,
    InsufficientOverlapError,
    TermnetError,
    UndefinedCorrelationError,
    UnknownTermError,
)
from .evaluation import (
    BenchmarkResult,
    CategorizedDictionary,
    RatedPair,
    RatedPairSet,
    benchmark_correlation,
    cronbach_alpha,
    spearman,
    term_coverage,
)
from .phrasing import (
    CorpusCounts,
    PhraseDetector,
    PhrasingConfig,
    apply_phrase_set,
    count_corpus,
    phrase_two_pass,
    rake_phrases,
    score_bigram,
    textrank_phrases,
)
from .semnet import (
    ConceptNode,
    ConceptTree,
    EmbeddingStore,
    RelevanceDistribution,
    adjacency_from_csv,
    adjacency_to_csv,
    canonical_term,
)
from .service import ServiceConfig, create_app
from .vocab import VocabEntry, Vocabulary

__version__ = "0.1.0"
