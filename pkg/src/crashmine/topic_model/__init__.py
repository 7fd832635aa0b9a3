from ._rng import derive_seed
from .coherence import (
    CoherenceReport,
    SweepEntry,
    SweepResult,
    TopicCountSelector,
    select_best_k,
    sweep_k,
    umass_coherence,
)
from .lda import (
    DEFAULT_SEED,
    GibbsLDA,
    InvariantViolation,
    LdaConfig,
    LdaModel,
    doc_topics,
    fit_lda,
    fold_in,
    top_words,
)

__all__ = [
    "CoherenceReport",
    "DEFAULT_SEED",
    "GibbsLDA",
    "InvariantViolation",
    "LdaConfig",
    "LdaModel",
    "SweepEntry",
    "SweepResult",
    "TopicCountSelector",
    "derive_seed",
    "doc_topics",
    "fit_lda",
    "fold_in",
    "select_best_k",
    "sweep_k",
    "top_words",
    "umass_coherence",
]
