"""Small input-validation helpers used by the estimators and the op-level API."""
from numbers import Integral, Real

from .exceptions import ConfigError


def check_int(value, name, min_value=None):
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if min_value is not None and value < min_value:
        raise ConfigError(f"{name} must be >= {min_value}, got {value}")
    return value


def check_positive_real(value, name):
    if isinstance(value, bool) or not isinstance(value, Real):
        raise ConfigError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not value > 0.0:
        raise ConfigError(f"{name} must be > 0, got {value}")
    return value


def check_seed(seed):
    seed = check_int(seed, "seed", min_value=0)
    if seed >= 2**64:
        raise ConfigError(f"seed must fit in 64 bits, got {seed}")
    return seed


def check_corpus(X, allow_empty=False):
    """Coerce ``X`` into a :class:`~crashmine.corpus.Corpus`.

    Accepts a ``Corpus`` or a sequence of ``TokenizedDocument``; anything
    else (raw strings in particular) is rejected with a hint to clean first.
    """
    from .corpus import Corpus, TokenizedDocument

    if isinstance(X, Corpus):
        corpus = X
    else:
        try:
            docs = list(X)
        except TypeError:
            raise TypeError(f"expected a Corpus, got {type(X).__name__}") from None
        if not all(isinstance(d, TokenizedDocument) for d in docs):
            raise TypeError(
                "expected a Corpus or TokenizedDocument sequence; "
                "run raw text through NarrativeCleaner first"
            )
        corpus = Corpus.from_documents(docs)
    if not allow_empty and len(corpus) == 0:
        raise ValueError("corpus has no documents")
    return corpus
