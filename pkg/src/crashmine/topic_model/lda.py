"""Latent Dirichlet allocation fitted by collapsed Gibbs sampling.

Each token's topic is resampled with probability proportional to

    (n_dt + alpha) * (n_tw + beta) / (n_t + V * beta)

where the counts exclude the token itself.  ``phi`` and ``theta`` are the
smoothed count estimates averaged over every sweep after burn-in.
"""
import json
import warnings
from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .._validation import check_corpus, check_int, check_positive_real, check_seed
from ..exceptions import ConfigError, EmptyCorpusError
from . import _gibbs
from ._rng import derive_seed, seed_state

DEFAULT_SEED = 20240917

# When true every sweep re-derives the count tables from the assignments
# and every post-burn-in estimate is checked for normalization.
CHECK_INVARIANTS = False


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class LdaConfig:
    k: int
    alpha: float = None  # None -> 50 / k
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 800
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        check_int(self.k, "k", min_value=1)
        if self.alpha is not None:
            check_positive_real(self.alpha, "alpha")
        check_positive_real(self.beta, "beta")
        check_int(self.iterations, "iterations", min_value=1)
        check_int(self.burn_in, "burn_in", min_value=1)
        if self.burn_in >= self.iterations:
            raise ConfigError(
                f"burn_in ({self.burn_in}) must be smaller than iterations ({self.iterations})"
            )
        check_seed(self.seed)

    @property
    def alpha_value(self):
        return 50.0 / self.k if self.alpha is None else float(self.alpha)

    def with_k(self, k, seed=None):
        return replace(self, k=k, seed=self.seed if seed is None else seed)

    def to_dict(self):
        return {
            "k": self.k,
            "alpha": self.alpha_value,
            "beta": float(self.beta),
            "iterations": self.iterations,
            "burn_in": self.burn_in,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class LdaModel:
    phi: np.ndarray          # k x V
    theta: np.ndarray        # D x k
    assignments: tuple       # per document, int64 topic labels from the last sweep
    config: LdaConfig
    vocabulary: tuple
    doc_ids: tuple
    corpus_digest: str

    @property
    def k(self):
        return self.config.k

    def top_words(self, topic, n=10):
        return top_words(self, topic, n)

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "corpus_digest": self.corpus_digest,
            "vocabulary": list(self.vocabulary),
            "doc_ids": list(self.doc_ids),
            "phi": _round_sig(self.phi),
            "theta": _round_sig(self.theta),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), ensure_ascii=False, separators=(",", ":"))


def _round_sig(matrix, digits=6):
    return [[float(f"{x:.{digits}g}") for x in row] for row in np.asarray(matrix)]


def _flatten(corpus):
    encoded = corpus.encoded
    lengths = np.array([len(ids) for ids in encoded], dtype=np.int64)
    words = np.concatenate(encoded) if encoded else np.zeros(0, dtype=np.int64)
    doc_of = np.repeat(np.arange(len(encoded), dtype=np.int64), lengths)
    return words.astype(np.int64), doc_of, lengths


def _check_counts(words, doc_of, z, ndk, nkw, nk, lengths):
    K, V = nkw.shape
    D = ndk.shape[0]
    if not np.array_equal(ndk.sum(axis=1), lengths):
        raise InvariantViolation("document-topic counts do not sum to document lengths")
    if not np.array_equal(nkw.sum(axis=1), nk):
        raise InvariantViolation("topic-word counts do not sum to topic totals")
    if not np.array_equal(np.bincount(doc_of * K + z, minlength=D * K).reshape(D, K), ndk):
        raise InvariantViolation("document-topic counts disagree with assignments")
    if not np.array_equal(np.bincount(z * V + words, minlength=K * V).reshape(K, V), nkw):
        raise InvariantViolation("topic-word counts disagree with assignments")


def _check_rows(matrix, name):
    if matrix.size and not np.allclose(matrix.sum(axis=1), 1.0, rtol=0.0, atol=1e-9):
        raise InvariantViolation(f"{name} rows do not sum to 1")
    if not np.all(matrix > 0):
        raise InvariantViolation(f"{name} has non-positive entries")


def fit_lda(corpus, cfg, check_invariants=None):
    """Fit LDA on the content tokens of ``corpus``.

    Deterministic for a given (corpus, cfg): the sampler draws from a
    xoshiro256** stream seeded by ``cfg.seed``.
    """
    if check_invariants is None:
        check_invariants = CHECK_INVARIANTS
    words, doc_of, lengths = _flatten(corpus)
    N = len(words)
    if N == 0:
        raise EmptyCorpusError("corpus has no content tokens to model")
    K = cfg.k
    if K > N:
        warnings.warn(f"k={K} exceeds the number of content tokens ({N})", RuntimeWarning)
    V = corpus.vocabulary_size
    D = len(corpus)
    alpha = cfg.alpha_value
    beta = float(cfg.beta)
    vbeta = V * beta

    state = seed_state(cfg.seed)
    z = np.zeros(N, dtype=np.int64)
    ndk = np.zeros((D, K), dtype=np.int64)
    nkw = np.zeros((K, V), dtype=np.int64)
    nk = np.zeros(K, dtype=np.int64)
    p = np.zeros(K, dtype=np.float64)
    _gibbs.init_assignments(words, doc_of, z, ndk, nkw, nk, state)

    phi_sum = np.zeros((K, V))
    theta_sum = np.zeros((D, K))
    n_samples = 0
    doc_norm = (lengths + K * alpha)[:, None]
    for sweep in range(1, cfg.iterations + 1):
        _gibbs.gibbs_sweep(words, doc_of, z, ndk, nkw, nk, alpha, beta, vbeta, state, p)
        if sweep <= cfg.burn_in:
            continue
        phi_s = (nkw + beta) / (nk + vbeta)[:, None]
        theta_s = (ndk + alpha) / doc_norm
        if check_invariants:
            _check_counts(words, doc_of, z, ndk, nkw, nk, lengths)
            _check_rows(phi_s, "phi")
            _check_rows(theta_s, "theta")
        phi_sum += phi_s
        theta_sum += theta_s
        n_samples += 1

    phi = phi_sum / n_samples
    theta = theta_sum / n_samples
    if check_invariants:
        _check_rows(phi, "phi")
        _check_rows(theta, "theta")
    bounds = np.concatenate([[0], np.cumsum(lengths)])
    assignments = tuple(z[bounds[d]:bounds[d + 1]].copy() for d in range(D))
    return LdaModel(
        phi=phi,
        theta=theta,
        assignments=assignments,
        config=cfg,
        vocabulary=corpus.vocabulary,
        doc_ids=tuple(doc.id for doc in corpus.documents),
        corpus_digest=corpus.digest,
    )


def top_words(model, topic, n=10):
    """The ``n`` most probable words of ``topic`` (ties: word ascending)."""
    if not 0 <= topic < model.k:
        raise IndexError(f"topic {topic} out of range for k={model.k}")
    n = check_int(n, "n", min_value=1)
    row = model.phi[topic]
    ranked = sorted(range(len(row)), key=lambda i: (-row[i], model.vocabulary[i]))
    return [(model.vocabulary[i], float(row[i])) for i in ranked[:n]]


def doc_topics(model, doc):
    if not 0 <= doc < model.theta.shape[0]:
        raise IndexError(f"document index {doc} out of range")
    return model.theta[doc].copy()


def fold_in(model, corpus, iterations=100, seed=None):
    """Infer theta for (possibly unseen) documents with ``phi`` held fixed.

    Words outside the model vocabulary are ignored.  The estimate averages
    the second half of the sweeps.
    """
    iterations = check_int(iterations, "iterations", min_value=2)
    seed = derive_seed(model.config.seed, 0x5EED) if seed is None else check_seed(seed)
    index = {w: i for i, w in enumerate(model.vocabulary)}
    docs = [[index[w] for w in doc.content_tokens() if w in index] for doc in corpus.documents]
    lengths = np.array([len(d) for d in docs], dtype=np.int64)
    words = np.array([w for d in docs for w in d], dtype=np.int64)
    doc_of = np.repeat(np.arange(len(docs), dtype=np.int64), lengths)
    K = model.k
    alpha = model.config.alpha_value
    state = seed_state(seed)
    z = np.zeros(len(words), dtype=np.int64)
    ndk = np.zeros((len(docs), K), dtype=np.int64)
    p = np.zeros(K)
    phi = np.ascontiguousarray(model.phi)
    _gibbs.init_foldin(words, doc_of, z, ndk, state)
    theta_sum = np.zeros((len(docs), K))
    burn = iterations // 2
    for sweep in range(1, iterations + 1):
        _gibbs.foldin_sweep(words, doc_of, z, ndk, phi, alpha, state, p)
        if sweep > burn:
            theta_sum += (ndk + alpha) / (lengths + K * alpha)[:, None]
    return theta_sum / (iterations - burn)


class GibbsLDA(TransformerMixin, BaseEstimator):
    """LDA topic model with a collapsed Gibbs sampler.

    Parameters
    ----------
    k : int, default=10
        Number of topics.
    alpha : float or None, default=None
        Symmetric document-topic prior; ``None`` means ``50 / k``.
    beta : float, default=0.01
        Symmetric topic-word prior.
    iterations : int, default=1000
    burn_in : int, default=800
    seed : int, default=DEFAULT_SEED
    transform_iterations : int, default=100
        Fold-in sweeps used by :meth:`transform`.

    Attributes
    ----------
    model_ : LdaModel
    components_ : ndarray of shape (k, n_words)
        Topic-word distributions (``phi``).
    vocabulary_ : tuple of str
    """

    def __init__(self, k=10, alpha=None, beta=0.01, iterations=1000, burn_in=800,
                 seed=DEFAULT_SEED, transform_iterations=100):
        self.k = k
        self.alpha = alpha
        self.beta = beta
        self.iterations = iterations
        self.burn_in = burn_in
        self.seed = seed
        self.transform_iterations = transform_iterations

    def _config(self):
        return LdaConfig(self.k, self.alpha, self.beta, self.iterations, self.burn_in, self.seed)

    def _set_model(self, model):
        self.model_ = model
        self.components_ = model.phi
        self.vocabulary_ = model.vocabulary
        self.n_features_in_ = len(model.vocabulary)
        return self

    def fit(self, X, y=None):
        corpus = check_corpus(X)
        return self._set_model(fit_lda(corpus, self._config()))

    def fit_transform(self, X, y=None):
        """Fit and return the training-document topic mixtures (``theta``)."""
        return self.fit(X).model_.theta.copy()

    def transform(self, X):
        check_is_fitted(self, "model_")
        return fold_in(self.model_, check_corpus(X), self.transform_iterations)

    def top_words(self, topic, n=10):
        check_is_fitted(self, "model_")
        return top_words(self.model_, topic, n)
