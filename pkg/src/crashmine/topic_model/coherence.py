"""UMass topic coherence and the coherence-driven sweep over topic counts."""
import csv
import io
import math
from dataclasses import dataclass

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .._validation import check_corpus, check_int
from ..exceptions import CrashMineError
from ._rng import derive_seed
from .lda import DEFAULT_SEED, GibbsLDA, LdaConfig, fit_lda, top_words


@dataclass(frozen=True)
class CoherenceReport:
    per_topic: tuple
    mean: float
    top_m: int


def umass_pair_terms(words, docfreq):
    """Yield ln((D(w_m, w_l) + 1) / D(w_l)) for every ordered pair l < m."""
    for m in range(1, len(words)):
        for l in range(m):
            yield math.log((docfreq.pair(words[m], words[l]) + 1) / docfreq.df(words[l]))


def topic_umass(words, docfreq):
    return math.fsum(umass_pair_terms(words, docfreq))


def umass_coherence(model, docfreq, top_m=10):
    """UMass coherence of every topic in ``model`` from training document frequencies."""
    top_m = check_int(top_m, "top_m", min_value=1)
    per_topic = []
    for t in range(model.k):
        words = [w for w, _ in top_words(model, t, top_m)]
        missing = [w for w in words if w not in docfreq]
        if missing:
            raise CrashMineError(
                f"top words {missing} missing from the document-frequency table; "
                f"the model (corpus digest {model.corpus_digest[:12]}) was fit on another corpus"
            )
        per_topic.append(topic_umass(words, docfreq))
    return CoherenceReport(tuple(per_topic), sum(per_topic) / len(per_topic), top_m)


@dataclass(frozen=True)
class SweepEntry:
    k: int
    mean_coherence: float
    seed: int


@dataclass(frozen=True, eq=False)
class SweepResult:
    entries: tuple
    best_k: int
    models: tuple = ()
    reports: tuple = ()

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "mean_coherence", "seed"])
        for e in self.entries:
            writer.writerow([e.k, repr(e.mean_coherence), e.seed])
        return buf.getvalue()

    def model_for(self, k):
        for e, m in zip(self.entries, self.models):
            if e.k == k:
                return m
        raise KeyError(k)


def select_best_k(entries):
    """Largest mean coherence; ties go to the smallest k."""
    best = None
    for e in sorted(entries, key=lambda e: e.k):
        if best is None or e.mean_coherence > best.mean_coherence:
            best = e
    return best.k


def _fit_one(corpus, cfg, top_m):
    model = fit_lda(corpus, cfg)
    return model, umass_coherence(model, corpus.doc_frequencies, top_m)


def sweep_k(corpus, k_min, k_max, base_cfg=None, top_m=10, n_jobs=1):
    """Fit one model per k in [k_min, k_max] and pick the most coherent.

    The seed for each k is ``derive_seed(base_cfg.seed, k)``, so the sweep
    is reproducible from the base seed alone and independent of ``n_jobs``.
    """
    k_min = check_int(k_min, "k_min", min_value=1)
    k_max = check_int(k_max, "k_max", min_value=k_min)
    if base_cfg is None:
        base_cfg = LdaConfig(k=k_min)
    cfgs = [base_cfg.with_k(k, derive_seed(base_cfg.seed, k)) for k in range(k_min, k_max + 1)]
    if n_jobs == 1:
        results = [_fit_one(corpus, cfg, top_m) for cfg in cfgs]
    else:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=n_jobs)(delayed(_fit_one)(corpus, cfg, top_m) for cfg in cfgs)
    entries = tuple(SweepEntry(cfg.k, rep.mean, cfg.seed) for cfg, (_, rep) in zip(cfgs, results))
    return SweepResult(
        entries=entries,
        best_k=select_best_k(entries),
        models=tuple(m for m, _ in results),
        reports=tuple(r for _, r in results),
    )


class TopicCountSelector(TransformerMixin, BaseEstimator):
    """Choose the number of topics by mean UMass coherence.

    Fits :class:`GibbsLDA` for every k in ``[k_min, k_max]``;
    ``best_estimator_`` is the model at ``best_k_`` and serves
    :meth:`transform`.
    """

    def __init__(self, k_min=2, k_max=10, top_m=10, alpha=None, beta=0.01,
                 iterations=1000, burn_in=800, seed=DEFAULT_SEED, n_jobs=1):
        self.k_min = k_min
        self.k_max = k_max
        self.top_m = top_m
        self.alpha = alpha
        self.beta = beta
        self.iterations = iterations
        self.burn_in = burn_in
        self.seed = seed
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        corpus = check_corpus(X)
        base = LdaConfig(self.k_min, self.alpha, self.beta, self.iterations,
                         self.burn_in, self.seed)
        self.sweep_ = sweep_k(corpus, self.k_min, self.k_max, base, self.top_m, self.n_jobs)
        self.best_k_ = self.sweep_.best_k
        best = self.sweep_.model_for(self.best_k_)
        est = GibbsLDA(k=best.k, alpha=self.alpha, beta=self.beta, iterations=self.iterations,
                       burn_in=self.burn_in, seed=best.config.seed)
        self.best_estimator_ = est._set_model(best)
        return self

    def transform(self, X):
        check_is_fitted(self, "best_estimator_")
        return self.best_estimator_.transform(X)
