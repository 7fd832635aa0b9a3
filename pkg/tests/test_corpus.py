import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crashmine.corpus import (
    CleanConfig,
    Corpus,
    NarrativeCleaner,
    RawRecord,
    StopwordList,
    clean,
    doc_frequencies,
    ingest,
    load_stopwords,
    term_frequencies,
)
from crashmine.exceptions import (
    ConfigError,
    EmptyCorpusError,
    IngestError,
    StopwordError,
    VocabularyError,
)

from helpers import make_corpus
from oracles import docfreq_oracle


def stream(doc):
    return [(t.text, t.is_stopword) for t in doc.tokens()]


# -- stopwords --------------------------------------------------------------

def test_builtin_stopwords_contain_common_words():
    sw = load_stopwords("builtin")
    assert {"the", "of", "and"} <= sw.words
    assert 150 <= len(sw) <= 200
    assert all(w == w.lower() and not any(c.isspace() for c in w) for w in sw.words)


def test_stopword_file_is_lowercased(tmp_path):
    path = tmp_path / "sw.txt"
    path.write_text("The\nof\n", encoding="utf-8")
    sw = load_stopwords(path)
    assert sw.words == {"the", "of"}
    assert "THE" in sw


def test_stopword_line_with_whitespace_is_rejected(tmp_path):
    path = tmp_path / "sw.txt"
    path.write_text("of the\n", encoding="utf-8")
    with pytest.raises(StopwordError):
        load_stopwords(path)


def test_unreadable_stopword_file(tmp_path):
    with pytest.raises(StopwordError):
        load_stopwords(tmp_path / "missing.txt")


# -- ingest -----------------------------------------------------------------

def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_ingest_csv_rows(tmp_path):
    p = write(tmp_path, "a.csv", 'narrative,route\n"Car hit pole, badly",30\nTire explosion,35\n')
    recs = ingest(p, "csv", "narrative")
    assert [r.id for r in recs] == ["0", "1"]
    assert recs[0].narrative == "Car hit pole, badly"
    assert recs[0].meta == {"route": "30"}
    assert recs.report.to_dict() == {"rows_read": 2, "rows_dropped_empty": 0, "rows_failed": 0}


def test_ingest_drops_empty_narratives(tmp_path):
    p = write(tmp_path, "a.csv", "narrative\nCar hit pole\n\"\"\nDog on road\n")
    recs = ingest(p, "csv", "narrative")
    assert len(recs) == 2
    assert recs.report.rows_dropped_empty == 1
    # ordinals are row positions, so the gap stays visible
    assert [r.id for r in recs] == ["0", "2"]


def test_ingest_keep_empty(tmp_path):
    p = write(tmp_path, "a.csv", "narrative\n\"  \"\n")
    recs = ingest(p, "csv", "narrative", keep_empty=True)
    assert len(recs) == 1 and recs.report.rows_dropped_empty == 0


def test_ingest_jsonl_missing_field_names_line(tmp_path):
    p = write(tmp_path, "a.jsonl", '{"narrative": "ok"}\n{"text": "x"}\n')
    with pytest.raises(IngestError) as exc:
        ingest(p, "jsonl", "narrative")
    assert exc.value.line == 2
    assert "line 2" in str(exc.value)


def test_ingest_malformed_jsonl(tmp_path):
    p = write(tmp_path, "a.jsonl", '{"narrative": "ok"}\n{"narrative": \n')
    with pytest.raises(IngestError, match="line 2"):
        ingest(p, "jsonl", "narrative")


def test_ingest_skip_mode_counts_failures(tmp_path):
    p = write(tmp_path, "a.jsonl", '{"narrative": "ok"}\nnot json\n{"narrative": "fine"}\n')
    recs = ingest(p, "jsonl", "narrative", on_error="skip")
    assert len(recs) == 2
    assert recs.report.to_dict() == {"rows_read": 3, "rows_dropped_empty": 0, "rows_failed": 1}


def test_ingest_malformed_csv_row(tmp_path):
    p = write(tmp_path, "a.csv", "narrative,id\nfine,1\ntoo,many,fields\n")
    with pytest.raises(IngestError, match="line 3"):
        ingest(p, "csv", "narrative", "id")


def test_ingest_missing_narrative_column(tmp_path):
    p = write(tmp_path, "a.csv", "text\nhello\n")
    with pytest.raises(IngestError, match="narrative"):
        ingest(p, "csv", "narrative")


def test_ingest_duplicate_ids(tmp_path):
    p = write(tmp_path, "a.csv", "id,narrative\nA,one\nA,two\n")
    with pytest.raises(IngestError, match="duplicate"):
        ingest(p, "csv", "narrative", id_field="id")


def test_ingest_explicit_ids_and_jsonl_meta(tmp_path):
    p = write(tmp_path, "a.jsonl", '{"rid": "x1", "narrative": "a b", "year": 2019}\n')
    recs = ingest(p, "jsonl", "narrative", id_field="rid")
    assert recs[0].id == "x1" and recs[0].meta == {"year": "2019"}


def test_ingest_missing_file_names_path(tmp_path):
    with pytest.raises(IngestError, match="nope.csv"):
        ingest(tmp_path / "nope.csv")


def test_ingest_report_json():
    from crashmine.corpus import IngestReport

    assert json.loads(IngestReport(3, 1, 0).to_json()) == {
        "rows_read": 3, "rows_dropped_empty": 1, "rows_failed": 0}


# -- clean ------------------------------------------------------------------

def test_clean_flags_stopwords():
    corpus = clean(["The Car HIT the pole!!"], stopwords=StopwordList(frozenset({"the"})))
    doc = corpus[0]
    assert len(doc.segments) == 1
    assert stream(doc) == [("the", True), ("car", False), ("hit", False), ("the", True),
                           ("pole", False)]
    assert doc.content_tokens() == ["car", "hit", "pole"]


def test_clean_drops_numbers():
    corpus = clean(["Tire explosion on Route 35."], stopwords=StopwordList(frozenset({"on"})))
    assert stream(corpus[0]) == [("tire", False), ("explosion", False), ("on", True),
                                 ("route", False)]


def test_clean_keeps_numbers_when_asked():
    cfg = CleanConfig(drop_numeric=False)
    corpus = clean(["Route 35 a4"], cfg, StopwordList(frozenset()))
    assert [t.text for t in corpus[0].tokens()] == ["route", "35", "a4"]


def test_clean_segments_and_hyphens(tiny_stopwords):
    corpus = clean(["Left-rear wheel; hit the barrier. Then -- stop!"], stopwords=tiny_stopwords)
    segs = [[t.text for t in s] for s in corpus[0].segments]
    assert segs == [["left-rear", "wheel"], ["hit", "the", "barrier"], ["then", "stop"]]


def test_clean_marks_gaps_left_by_discarded_tokens(tiny_stopwords):
    corpus = clean(["hit a pole on route 35 bridge"], stopwords=tiny_stopwords)
    toks = list(corpus[0].tokens())
    assert [t.text for t in toks] == ["hit", "pole", "on", "route", "bridge"]
    assert [t.gap_before for t in toks] == [False, True, False, False, True]


def test_clean_vocabulary_first_appearance(tiny_stopwords):
    corpus = clean(["b a c", "c d b"], CleanConfig(min_token_len=1), tiny_stopwords)
    # "a" is a stopword in tiny_stopwords
    assert corpus.vocabulary == ("b", "c", "d")
    assert [corpus.id_of(w) for w in corpus.vocabulary] == [0, 1, 2]


def test_clean_all_empty_is_error(tiny_stopwords):
    with pytest.raises(EmptyCorpusError):
        clean(["12 34 !!", "?"], stopwords=tiny_stopwords)


def test_clean_empty_record_list():
    with pytest.raises(EmptyCorpusError):
        clean([])


def test_clean_config_validation():
    with pytest.raises(ConfigError):
        CleanConfig(min_token_len=0)
    with pytest.raises(ConfigError):
        CleanConfig(sentence_delimiters=frozenset())


def test_record_ids_must_be_nonempty():
    with pytest.raises(ValueError):
        RawRecord("", "text")


text_st = st.text(
    alphabet=st.sampled_from(list("abcdefgXYZ -.,!?;:'0123456789\n\té²")), max_size=80)


@settings(max_examples=200, deadline=None)
@given(st.lists(text_st, min_size=1, max_size=5))
def test_clean_is_idempotent(texts):
    sw = StopwordList(frozenset({"ab", "de"}))
    try:
        first = clean(texts, stopwords=sw)
    except EmptyCorpusError:
        return
    again = clean([d.to_text() for d in first], stopwords=sw)
    for a, b in zip(first, again):
        assert stream(a) == stream(b)
        assert [len(s) for s in a.segments] == [len(s) for s in b.segments]


@settings(max_examples=200, deadline=None)
@given(st.lists(text_st, min_size=1, max_size=5), st.integers(1, 4))
def test_clean_token_invariants(texts, min_len):
    sw = StopwordList(frozenset({"ab", "de"}))
    try:
        corpus = clean(texts, CleanConfig(min_token_len=min_len), sw)
    except EmptyCorpusError:
        return
    for doc in corpus:
        assert all(seg for seg in doc.segments)
        for tok in doc.tokens():
            assert tok.text == tok.text.lower()
            assert len(tok.text) >= min_len
            assert all(c.isalpha() or c == "-" for c in tok.text)
            assert tok.is_stopword == (tok.text in sw.words)
    for i, w in enumerate(corpus.vocabulary):
        assert corpus.id_of(w) == i and corpus.word_of(i) == w
    assert not set(corpus.vocabulary) & sw.words


def test_vocabulary_lookup_errors():
    corpus = make_corpus([[["a", "b"]]])
    with pytest.raises(VocabularyError):
        corpus.id_of("zzz")
    with pytest.raises(VocabularyError):
        corpus.word_of(5)


# -- frequencies ------------------------------------------------------------

def test_term_frequencies_counts():
    corpus = make_corpus([[["collision", "the*", "collision"]], [["hit"]]])
    table = term_frequencies(corpus, 10)
    assert table.entries == (("collision", 2), ("hit", 1))
    assert table.total_tokens == 3


def test_term_frequencies_tie_is_lexicographic():
    corpus = make_corpus([[["hit", "car"]]])
    assert term_frequencies(corpus, 10).entries == (("car", 1), ("hit", 1))


def test_term_frequencies_truncation_keeps_total():
    corpus = make_corpus([[["collision", "collision", "hit"]]])
    table = term_frequencies(corpus, 1)
    assert table.entries == (("collision", 2),)
    assert table.total_tokens == 3


def test_term_frequencies_empty_corpus():
    table = term_frequencies(Corpus([]), 5)
    assert table.entries == () and table.total_tokens == 0


def test_frequency_table_serialization():
    corpus = make_corpus([[["collision", "collision", "hit"]]])
    table = term_frequencies(corpus, 10)
    assert table.to_csv() == "word,count\ncollision,2\nhit,1\n"
    assert json.loads(table.to_json()) == [{"word": "collision", "count": 2},
                                           {"word": "hit", "count": 1}]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.sampled_from(["a", "b", "c", "d", "the*"]), max_size=12),
                min_size=1, max_size=6))
def test_frequency_total_matches_independent_count(docs):
    corpus = make_corpus([[d] for d in docs])
    expected = sum(1 for d in docs for w in d if not w.endswith("*"))
    assert term_frequencies(corpus, 1).total_tokens == expected


# -- document frequencies ---------------------------------------------------

def test_doc_frequencies_examples():
    df = doc_frequencies(make_corpus([[["a", "b"]], [["a"]]]))
    assert df.df("a") == 2 and df.df("b") == 1
    assert df.pair("a", "b") == 1
    assert df.pair("a", "a") == 2
    assert df.pair("b", "a") == df.pair("a", "b")


def test_doc_frequencies_oov():
    df = doc_frequencies(make_corpus([[["a"]]]))
    with pytest.raises(VocabularyError):
        df.df("zzz")
    with pytest.raises(VocabularyError):
        df.pair("a", "zzz")


def test_doc_frequencies_empty_corpus():
    with pytest.raises(EmptyCorpusError):
        doc_frequencies(Corpus([]))


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(st.sampled_from(list("abcdef")), max_size=8), min_size=1, max_size=8))
def test_doc_frequencies_match_set_oracle(docs):
    corpus = make_corpus([[d] for d in docs])
    df = doc_frequencies(corpus)
    want_df, want_pair = docfreq_oracle(docs)
    assert df.as_dict() == want_df
    for a in want_df:
        assert 1 <= df.df(a) <= len(docs)
        for b in want_df:
            assert df.pair(a, b) == want_pair(a, b)
            assert df.pair(a, b) <= min(df.df(a), df.df(b))


# -- estimator --------------------------------------------------------------

def test_narrative_cleaner_estimator(tiny_stopwords):
    cleaner = NarrativeCleaner(stopwords=tiny_stopwords, min_token_len=2)
    corpus = cleaner.fit_transform(["The car hit the pole.", "Dog on the road"])
    assert isinstance(corpus, Corpus)
    assert list(cleaner.get_feature_names_out()) == ["car", "hit", "pole", "dog", "road"]
    assert cleaner.get_params()["min_token_len"] == 2
    assert cleaner.transform(["pole"])[0].content_tokens() == ["pole"]
