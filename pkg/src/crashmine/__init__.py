"""Text mining for crash narratives: cleaning, RAKE keywords, co-occurrence
networks, and LDA topic models with coherence-based topic-count selection."""
from .corpus import (
    CleanConfig,
    Corpus,
    DocFrequencies,
    FrequencyTable,
    IngestReport,
    NarrativeCleaner,
    RawRecord,
    StopwordList,
    Token,
    TokenizedDocument,
    clean,
    doc_frequencies,
    ingest,
    load_stopwords,
    term_frequencies,
)
from .rake import (
    CandidatePhrase,
    RakeKeywordExtractor,
    ScoredPhrase,
    WordScoreTable,
    extract_candidates,
    score_phrases,
    score_words,
    top_keywords,
)
from .topic_model import (
    GibbsLDA,
    LdaConfig,
    LdaModel,
    TopicCountSelector,
    doc_topics,
    fit_lda,
    sweep_k,
    top_words,
    umass_coherence,
)
from .wcn import (
    CooccurrenceGraph,
    CooccurrenceNetwork,
    WcnConfig,
    build_wcn,
    export_graph,
    node_strength,
    top_edges,
)

__version__ = "0.1.0"
