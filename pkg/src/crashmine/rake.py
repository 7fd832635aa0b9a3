"""Rapid Automatic Keyword Extraction over cleaned narratives.

Candidates are maximal runs of content tokens inside a segment.  Word
scores are deg/freq, phrase scores the sum of member word scores.  Scores
are carried as exact fractions so rankings never depend on float rounding.
"""
import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_corpus, check_int
from .exceptions import CrashMineError

DEFAULT_MAX_PHRASE_LEN = 4


@dataclass(frozen=True)
class CandidatePhrase:
    words: tuple
    doc_id: str
    occurrence_index: int

    @property
    def text(self):
        return " ".join(self.words)

    def __len__(self):
        return len(self.words)


@dataclass(frozen=True)
class WordScore:
    freq: int
    deg: int

    @property
    def exact(self):
        return Fraction(self.deg, self.freq)

    @property
    def score(self):
        return self.deg / self.freq


class WordScoreTable(Mapping):
    """Read-only mapping word -> :class:`WordScore`."""

    def __init__(self, scores):
        self._scores = dict(scores)

    def __getitem__(self, word):
        return self._scores[word]

    def __iter__(self):
        return iter(self._scores)

    def __len__(self):
        return len(self._scores)

    def __repr__(self):
        return f"WordScoreTable({len(self)} words)"


@dataclass(frozen=True)
class ScoredPhrase:
    phrase: str
    score: float
    support: int
    exact_score: Fraction = field(default=None, repr=False, compare=False)

    def as_dict(self):
        return {"phrase": self.phrase, "score": round(self.score, 4), "support": self.support}


def extract_candidates(doc, max_phrase_len=DEFAULT_MAX_PHRASE_LEN):
    """Candidate phrases of one document, in reading order.

    A run ends at a stopword, at a segment boundary, or where the cleaner
    discarded a token.  Runs longer than ``max_phrase_len`` are dropped
    whole rather than truncated.
    """
    max_phrase_len = check_int(max_phrase_len, "max_phrase_len", min_value=1)
    out = []

    def flush(run):
        if run and len(run) <= max_phrase_len:
            out.append(CandidatePhrase(tuple(run), doc.id, len(out)))

    for seg in doc.segments:
        run = []
        for tok in seg:
            if tok.is_stopword or tok.gap_before:
                flush(run)
                run = []
            if not tok.is_stopword:
                run.append(tok.text)
        flush(run)
    return out


def score_words(candidates):
    freq = Counter()
    deg = Counter()
    for cand in candidates:
        n = len(cand.words)
        for w in cand.words:
            freq[w] += 1
            deg[w] += n
    return WordScoreTable({w: WordScore(freq[w], deg[w]) for w in freq})


def _rank_key(p):
    return (-p.exact_score, p.phrase)


def score_phrases(candidates, table):
    """Merge identical candidates and score them from ``table``.

    Sorted by score descending, then phrase ascending.
    """
    support = Counter()
    words_of = {}
    for cand in candidates:
        support[cand.text] += 1
        words_of.setdefault(cand.text, cand.words)
    phrases = []
    for text, words in words_of.items():
        try:
            exact = sum((table[w].exact for w in words), Fraction(0))
        except KeyError as exc:
            raise CrashMineError(
                f"candidate {text!r} has word {exc.args[0]!r} missing from the score table"
            ) from None
        phrases.append(ScoredPhrase(text, float(exact), support[text], exact))
    phrases.sort(key=_rank_key)
    return phrases


def pooled_candidates(corpus, max_phrase_len=DEFAULT_MAX_PHRASE_LEN):
    cands = []
    for doc in corpus.documents:
        cands.extend(extract_candidates(doc, max_phrase_len))
    return cands


def top_keywords(corpus, top_n=20, max_phrase_len=DEFAULT_MAX_PHRASE_LEN):
    """Corpus-level RAKE: candidates pooled over documents, word scores corpus-wide."""
    top_n = check_int(top_n, "top_n", min_value=1)
    cands = pooled_candidates(corpus, max_phrase_len)
    return score_phrases(cands, score_words(cands))[:top_n]


def phrases_to_csv(phrases):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["phrase", "score", "support"])
    for p in phrases:
        writer.writerow([p.phrase, f"{p.score:.4f}", p.support])
    return buf.getvalue()


def phrases_to_json(phrases):
    return json.dumps([p.as_dict() for p in phrases], ensure_ascii=False)


class RakeKeywordExtractor(BaseEstimator):
    """Corpus-level RAKE keyword extractor.

    ``fit`` pools candidates across the corpus and ranks every distinct
    phrase; ``keywords_`` keeps the first ``top_n``.  ``transform`` returns,
    per document, its candidates scored with the fitted word table
    (candidates containing unseen words are skipped).
    """

    def __init__(self, top_n=20, max_phrase_len=DEFAULT_MAX_PHRASE_LEN):
        self.top_n = top_n
        self.max_phrase_len = max_phrase_len

    def fit(self, X, y=None):
        corpus = check_corpus(X, allow_empty=True)
        top_n = check_int(self.top_n, "top_n", min_value=1)
        self.candidates_ = pooled_candidates(corpus, self.max_phrase_len)
        self.word_scores_ = score_words(self.candidates_)
        self.phrases_ = score_phrases(self.candidates_, self.word_scores_)
        self.keywords_ = self.phrases_[:top_n]
        return self

    def transform(self, X):
        check_is_fitted(self, "word_scores_")
        corpus = check_corpus(X, allow_empty=True)
        out = []
        for doc in corpus.documents:
            cands = [c for c in extract_candidates(doc, self.max_phrase_len)
                     if all(w in self.word_scores_ for w in c.words)]
            out.append(score_phrases(cands, self.word_scores_))
        return out

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)
