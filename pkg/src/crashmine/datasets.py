"""Bundled and generated corpora for tests, demos, and the acceptance suite."""
import csv
from importlib import resources

from .corpus import RawRecord
from .topic_model._rng import Xoshiro256

THEME_VOCABULARIES = (
    ("brake", "tire", "wheel", "axle", "engine", "radiator", "clutch", "bumper", "mirror", "fender"),
    ("sheep", "dog", "camel", "goat", "donkey", "cattle", "horse", "animal", "herd", "stray"),
    ("lane", "signal", "merge", "overtake", "speeding", "priority", "rules", "sign", "junction",
     "barrier"),
)
THEME_CORPUS_SEED = 3


def make_theme_corpus(docs_per_theme=20, doc_len=30, seed=THEME_CORPUS_SEED,
                      vocabularies=THEME_VOCABULARIES):
    """Disjoint-vocabulary corpus: each document draws every token from one theme.

    Returns ``(records, labels)`` where ``labels[i]`` is the theme index of
    record ``i``.  Generation uses the package's portable generator, so the
    corpus is identical everywhere for a given seed.
    """
    rng = Xoshiro256(seed)
    records, labels = [], []
    for theme, vocab in enumerate(vocabularies):
        for _ in range(docs_per_theme):
            words = [vocab[rng.below(len(vocab))] for _ in range(doc_len)]
            records.append(RawRecord(str(len(records)), " ".join(words) + "."))
            labels.append(theme)
    return records, labels


def synthetic_narratives_path():
    return resources.files("crashmine.data").joinpath("synthetic_crash_narratives.csv")


def load_synthetic_narratives():
    """The bundled 100-record synthetic crash-narrative corpus as RawRecords."""
    with synthetic_narratives_path().open(encoding="utf-8", newline="") as fh:
        return [RawRecord(row["id"], row["narrative"], {"route": row["route"]})
                for row in csv.DictReader(fh)]
