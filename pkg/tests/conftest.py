import random

import pytest

from crashmine import clean
from crashmine.corpus import StopwordList
from crashmine.datasets import make_theme_corpus
from crashmine.topic_model import lda as lda_mod


@pytest.fixture(autouse=True)
def _lda_invariants(monkeypatch):
    # every fit in the suite checks counts and normalization on every kept sweep
    monkeypatch.setattr(lda_mod, "CHECK_INVARIANTS", True)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def theme_records():
    return make_theme_corpus()


@pytest.fixture(scope="session")
def theme_corpus(theme_records):
    return clean(theme_records[0])


@pytest.fixture
def tiny_stopwords():
    return StopwordList(frozenset({"the", "on", "of", "a", "and", "to"}), "test")


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
