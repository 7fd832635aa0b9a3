"""Builders for hand-written and random token-level corpora."""
from crashmine.corpus import Corpus, Token, TokenizedDocument


def make_doc(doc_id, segments):
    """Build a TokenizedDocument from segments of words; a trailing '*' marks a stopword."""
    segs = []
    for seg in segments:
        segs.append(tuple(Token(w.rstrip("*"), w.endswith("*")) for w in seg))
    return TokenizedDocument(doc_id, tuple(s for s in segs if s))


def make_corpus(docs):
    """docs: list of documents, each a list of segments of words."""
    return Corpus([make_doc(str(i), d) for i, d in enumerate(docs)])


def random_flagged_docs(rng, n_docs, max_tokens=40, vocab_size=12, p_stop=0.25, max_segs=4):
    docs = []
    for _ in range(n_docs):
        n_tok = rng.randint(0, max_tokens)
        words = []
        for _ in range(n_tok):
            if rng.random() < p_stop:
                words.append((f"s{rng.randrange(4)}", True))
            else:
                words.append((f"w{rng.randrange(vocab_size)}", False))
        cuts = sorted(rng.sample(range(1, n_tok), min(rng.randint(0, max_segs - 1), max(n_tok - 1, 0)))) if n_tok > 1 else []
        segs, prev = [], 0
        for c in cuts + [n_tok]:
            if c > prev:
                segs.append(words[prev:c])
            prev = c
        docs.append(segs)
    return docs


def flagged_to_corpus(docs):
    return make_corpus([[[w + ("*" if s else "") for w, s in seg] for seg in d] for d in docs])
