"""Narrative ingestion, cleaning, and corpus statistics.

Cleaning keeps stopwords in the token stream with a flag instead of
deleting them.  Frequency counts, the co-occurrence network and LDA look
only at content tokens; RAKE needs the stopword positions as phrase
boundaries.
"""
import csv
import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_int
from .exceptions import (
    ConfigError,
    EmptyCorpusError,
    IngestError,
    StopwordError,
    VocabularyError,
)

BUILTIN = "builtin"
DEFAULT_DELIMITERS = frozenset(".!?;:,")

_LETTERS = r"[^\W\d_]"
_ALNUM = r"[^\W_]"
_WORD_RE = re.compile(rf"{_LETTERS}+(?:-{_LETTERS}+)*")
_ALNUM_WORD_RE = re.compile(rf"{_ALNUM}+(?:-{_ALNUM}+)*")
_LETTER_OR_NUMBER_RE = re.compile(rf"{_LETTERS}+(?:-{_LETTERS}+)*|(?:(?!{_LETTERS}){_ALNUM})+")


def _is_wordlike(word, cfg):
    # \w letters include a few non-alphabetic symbols such as superscripts
    if cfg.drop_numeric:
        return all(c.isalpha() or c == "-" for c in word)
    return True


# ---------------------------------------------------------------------------
# Records and stopwords
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RawRecord:
    id: str
    narrative: str
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("record id must be a non-empty string")


@dataclass(frozen=True)
class StopwordList:
    words: frozenset
    source: str = BUILTIN

    def __contains__(self, word):
        return word.lower() in self.words

    def __len__(self):
        return len(self.words)


def _normalize_stopwords(lines, source):
    words = set()
    for lineno, raw in enumerate(lines, start=1):
        token = raw.strip()
        if not token:
            continue
        if any(ch.isspace() for ch in token):
            raise StopwordError(f"{source}:{lineno}: stopword {token!r} contains whitespace")
        words.add(token.lower())
    return frozenset(words)


def load_stopwords(source=BUILTIN):
    """Load a stopword list.

    ``source`` is either the label ``"builtin"`` (the bundled English list)
    or a path to a UTF-8 file holding one token per line.  Blank lines are
    ignored; a line with interior whitespace is an error.
    """
    if isinstance(source, StopwordList):
        return source
    if source == BUILTIN:
        text = resources.files("crashmine.data").joinpath("stopwords_en.txt").read_text("utf-8")
        return StopwordList(_normalize_stopwords(text.splitlines(), BUILTIN), BUILTIN)
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise StopwordError(f"cannot read stopword file {path}: {exc}") from exc
    return StopwordList(_normalize_stopwords(text.splitlines(), str(path)), str(path))


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

@dataclass
class IngestReport:
    rows_read: int = 0
    rows_dropped_empty: int = 0
    rows_failed: int = 0

    def to_dict(self):
        return {
            "rows_read": self.rows_read,
            "rows_dropped_empty": self.rows_dropped_empty,
            "rows_failed": self.rows_failed,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


class RecordList(list):
    """A plain list of :class:`RawRecord` carrying its :class:`IngestReport`."""

    def __init__(self, records=(), report=None):
        super().__init__(records)
        self.report = report if report is not None else IngestReport()


def _iter_csv(fh, path):
    reader = csv.DictReader(fh, strict=True)
    try:
        fieldnames = reader.fieldnames
    except csv.Error as exc:
        raise IngestError(f"{path}: malformed CSV header: {exc}", line=1) from exc
    if fieldnames is None:
        return
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            yield reader.line_num, None, f"malformed CSV: {exc}"
            continue
        if None in row or any(v is None for v in row.values()):
            yield reader.line_num, None, (
                f"expected {len(fieldnames)} fields, row has a different count"
            )
            continue
        yield reader.line_num, row, None


def _iter_jsonl(fh, path):
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield lineno, None, f"malformed JSON: {exc.msg}"
            continue
        if not isinstance(obj, dict):
            yield lineno, None, "JSON line is not an object"
            continue
        yield lineno, obj, None


def _as_str(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True)


def ingest(path, format="csv", narrative_field="narrative", id_field=None,
           keep_empty=False, on_error="raise"):
    """Read narrative records from a CSV or JSONL file.

    Rows whose narrative is blank are dropped and counted unless
    ``keep_empty``.  Without ``id_field`` ids are the zero-based row
    ordinals.  With ``on_error="skip"`` malformed rows are counted in
    ``report.rows_failed`` instead of raising.

    Returns a :class:`RecordList` (a list with a ``report`` attribute).
    """
    if format not in ("csv", "jsonl"):
        raise ConfigError(f"unsupported input format {format!r}; use csv or jsonl")
    if on_error not in ("raise", "skip"):
        raise ConfigError("on_error must be 'raise' or 'skip'")
    path = Path(path)
    report = IngestReport()
    records = []
    seen_ids = set()

    def fail(lineno, msg):
        if on_error == "raise":
            raise IngestError(f"{path}: {msg}", line=lineno)
        report.rows_failed += 1

    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise IngestError(f"cannot open {path}: {exc.strerror or exc}") from exc
    with fh:
        rows = _iter_csv(fh, path) if format == "csv" else _iter_jsonl(fh, path)
        ordinal = 0
        try:
            for lineno, row, problem in rows:
                report.rows_read += 1
                row_ordinal = ordinal
                ordinal += 1
                if problem is not None:
                    fail(lineno, problem)
                    continue
                if narrative_field not in row:
                    fail(lineno, f"missing narrative field {narrative_field!r}")
                    continue
                if id_field is not None:
                    rec_id = _as_str(row.get(id_field)).strip()
                    if not rec_id:
                        fail(lineno, f"missing id field {id_field!r}")
                        continue
                    if rec_id in seen_ids:
                        fail(lineno, f"duplicate id {rec_id!r}")
                        continue
                else:
                    rec_id = str(row_ordinal)
                narrative = _as_str(row[narrative_field])
                if not narrative.strip() and not keep_empty:
                    report.rows_dropped_empty += 1
                    continue
                seen_ids.add(rec_id)
                meta = {k: _as_str(v) for k, v in row.items()
                        if k not in (narrative_field, id_field)}
                records.append(RawRecord(rec_id, narrative, meta))
        except UnicodeDecodeError as exc:
            raise IngestError(f"{path}: input is not valid UTF-8 ({exc.reason})") from exc
    return RecordList(records, report)


# ---------------------------------------------------------------------------
# Cleaning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CleanConfig:
    min_token_len: int = 2
    drop_numeric: bool = True
    sentence_delimiters: frozenset = DEFAULT_DELIMITERS
    keep_empty: bool = False

    def __post_init__(self):
        check_int(self.min_token_len, "min_token_len", min_value=1)
        delims = frozenset(self.sentence_delimiters)
        if not delims:
            raise ConfigError("sentence_delimiters must be non-empty")
        if any(len(d) != 1 for d in delims):
            raise ConfigError("sentence_delimiters must be single characters")
        object.__setattr__(self, "sentence_delimiters", delims)


@dataclass(frozen=True)
class Token:
    text: str
    is_stopword: bool
    # a discarded token (too short / numeric) sat right before this one
    gap_before: bool = False


@dataclass(frozen=True)
class TokenizedDocument:
    id: str
    segments: tuple = ()

    def tokens(self):
        for seg in self.segments:
            yield from seg

    def content_tokens(self):
        return [t.text for t in self.tokens() if not t.is_stopword]

    def __len__(self):
        return sum(len(s) for s in self.segments)

    def to_text(self):
        """Render back to text; cleaning the result reproduces the token stream."""
        return ". ".join(" ".join(t.text for t in seg) for seg in self.segments)


def _segment_splitter(delimiters):
    return re.compile("[" + "".join(re.escape(d) for d in sorted(delimiters)) + "]")


def tokenize(text, cfg, stopwords, splitter=None):
    """Split one narrative into segments of flagged tokens."""
    if splitter is None:
        splitter = _segment_splitter(cfg.sentence_delimiters)
    segments = []
    for piece in splitter.split(text.lower()):
        seg = []
        gap = False
        for m in _ALNUM_WORD_RE.finditer(piece):
            raw = m.group()
            # with drop_numeric, digit runs inside a token are discarded pieces
            parts = _LETTER_OR_NUMBER_RE.finditer(raw) if cfg.drop_numeric else [m]
            for part in parts:
                word = part.group()
                if len(word) < cfg.min_token_len or not _is_wordlike(word, cfg):
                    gap = bool(seg)
                    continue
                seg.append(Token(word, word in stopwords.words, gap))
                gap = False
        if seg:
            segments.append(tuple(seg))
    return tuple(segments)


class Corpus:
    """Cleaned documents plus a dense vocabulary over their content tokens.

    Vocabulary ids follow first appearance.  Instances are treated as
    immutable; derived statistics are cached lazily.
    """

    def __init__(self, documents, stopwords=None, config=None):
        self.documents = tuple(documents)
        self.stopwords = stopwords
        self.config = config
        vocab = {}
        for doc in self.documents:
            for word in doc.content_tokens():
                if word not in vocab:
                    vocab[word] = len(vocab)
        self.word_to_id = vocab
        self.vocabulary = tuple(vocab)

    @classmethod
    def from_documents(cls, documents):
        return cls(documents)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, index):
        return self.documents[index]

    def __repr__(self):
        return f"Corpus(n_documents={len(self)}, vocabulary_size={self.vocabulary_size})"

    @property
    def vocabulary_size(self):
        return len(self.vocabulary)

    def id_of(self, word):
        try:
            return self.word_to_id[word]
        except KeyError:
            raise VocabularyError(f"word {word!r} is not in the vocabulary") from None

    def word_of(self, index):
        if not 0 <= index < len(self.vocabulary):
            raise VocabularyError(f"vocabulary id {index} out of range")
        return self.vocabulary[index]

    @cached_property
    def encoded(self):
        """Per-document int64 arrays of content-token vocabulary ids."""
        w2i = self.word_to_id
        return tuple(
            np.array([w2i[w] for w in doc.content_tokens()], dtype=np.int64)
            for doc in self.documents
        )

    @property
    def n_content_tokens(self):
        return int(sum(len(ids) for ids in self.encoded))

    @cached_property
    def digest(self):
        """sha256 over the vocabulary and the encoded documents."""
        h = hashlib.sha256()
        h.update("\x1f".join(self.vocabulary).encode("utf-8"))
        for doc, ids in zip(self.documents, self.encoded):
            h.update(b"\x1e")
            h.update(doc.id.encode("utf-8"))
            h.update(b"\x1d")
            h.update(ids.astype("<i8").tobytes())
        return h.hexdigest()

    @cached_property
    def term_counts(self):
        counts = Counter()
        for doc in self.documents:
            counts.update(doc.content_tokens())
        return counts

    @cached_property
    def doc_frequencies(self):
        return DocFrequencies(self)


def clean(records, cfg=None, stopwords=None):
    """Run the cleaning pipeline over ``records`` and build a :class:`Corpus`.

    ``records`` may hold :class:`RawRecord` objects or plain strings (ids are
    then the positional ordinals).
    """
    cfg = cfg if cfg is not None else CleanConfig()
    stopwords = load_stopwords(stopwords if stopwords is not None else BUILTIN)
    records = [
        r if isinstance(r, RawRecord) else RawRecord(str(i), r)
        for i, r in enumerate(records)
    ]
    if not records:
        raise EmptyCorpusError("no records to clean")
    splitter = _segment_splitter(cfg.sentence_delimiters)
    docs = [TokenizedDocument(r.id, tokenize(r.narrative, cfg, stopwords, splitter))
            for r in records]
    if all(len(d) == 0 for d in docs):
        raise EmptyCorpusError("every document is empty after cleaning")
    return Corpus(docs, stopwords=stopwords, config=cfg)


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyTable:
    entries: tuple
    total_tokens: int

    def to_csv(self):
        lines = ["word,count"]
        lines += [f"{_csv_field(w)},{c}" for w, c in self.entries]
        return "\n".join(lines) + "\n"

    def to_list(self):
        return [{"word": w, "count": c} for w, c in self.entries]

    def to_json(self):
        return json.dumps(self.to_list(), ensure_ascii=False)


def _csv_field(value):
    if any(ch in value for ch in ',"\n\r'):
        return '"' + value.replace('"', '""') + '"'
    return value


def term_frequencies(corpus, top_n=50):
    """Content-token counts, most frequent first (ties: word ascending)."""
    top_n = check_int(top_n, "top_n", min_value=1)
    counts = corpus.term_counts
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return FrequencyTable(tuple(ranked[:top_n]), sum(counts.values()))


class DocFrequencies:
    """Document-frequency lookups over content tokens.

    ``df(w)`` is the number of documents containing ``w``; ``pair(a, b)``
    the number containing both.
    """

    def __init__(self, corpus):
        postings = {}
        for d, doc in enumerate(corpus.documents):
            for word in set(doc.content_tokens()):
                postings.setdefault(word, set()).add(d)
        self._postings = {w: frozenset(s) for w, s in postings.items()}
        self.n_documents = len(corpus)

    def _get(self, word):
        try:
            return self._postings[word]
        except KeyError:
            raise VocabularyError(f"word {word!r} has no document frequency") from None

    def __contains__(self, word):
        return word in self._postings

    def __len__(self):
        return len(self._postings)

    def df(self, word):
        return len(self._get(word))

    def pair(self, w1, w2):
        a, b = self._get(w1), self._get(w2)
        if len(b) < len(a):
            a, b = b, a
        return len(a & b)

    def as_dict(self):
        return {w: len(s) for w, s in self._postings.items()}


def doc_frequencies(corpus):
    if len(corpus) == 0:
        raise EmptyCorpusError("doc_frequencies needs a non-empty corpus")
    return corpus.doc_frequencies


# ---------------------------------------------------------------------------
# Estimator
# ---------------------------------------------------------------------------

class NarrativeCleaner(TransformerMixin, BaseEstimator):
    """Turn raw narratives into a :class:`Corpus`.

    Parameters
    ----------
    stopwords : str or path, default="builtin"
        Stopword source passed to :func:`load_stopwords`.
    min_token_len : int, default=2
    drop_numeric : bool, default=True
    sentence_delimiters : str, default=".!?;:,"
        Characters that close a segment.

    Attributes
    ----------
    stopwords_ : StopwordList
    config_ : CleanConfig
    vocabulary_ : tuple of str
        Vocabulary of the corpus seen in :meth:`fit`.
    """

    def __init__(self, stopwords=BUILTIN, min_token_len=2, drop_numeric=True,
                 sentence_delimiters=".!?;:,"):
        self.stopwords = stopwords
        self.min_token_len = min_token_len
        self.drop_numeric = drop_numeric
        self.sentence_delimiters = sentence_delimiters

    def fit(self, X, y=None):
        self.fit_transform(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        return clean(X, self.config_, self.stopwords_)

    def fit_transform(self, X, y=None):
        self.stopwords_ = load_stopwords(self.stopwords)
        self.config_ = CleanConfig(
            min_token_len=self.min_token_len,
            drop_numeric=self.drop_numeric,
            sentence_delimiters=frozenset(self.sentence_delimiters),
        )
        corpus = clean(X, self.config_, self.stopwords_)
        self.vocabulary_ = corpus.vocabulary
        return corpus

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vocabulary_")
        return np.asarray(self.vocabulary_, dtype=object)
