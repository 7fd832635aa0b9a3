"""Word co-occurrence network built from sliding windows over segments."""
import csv
import io
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from xml.sax.saxutils import quoteattr

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_corpus, check_int
from .exceptions import ConfigError, VocabularyError

EXPORT_FORMATS = ("dot", "graphml", "edgelist-csv")


@dataclass(frozen=True)
class WcnConfig:
    window_n: int = 2
    min_edge_weight: int = 1
    use_content_tokens_only: bool = True

    def __post_init__(self):
        check_int(self.window_n, "window_n", min_value=2)
        check_int(self.min_edge_weight, "min_edge_weight", min_value=1)


def _edge_key(a, b):
    return (a, b) if a < b else (b, a)


class CooccurrenceGraph:
    """Undirected weighted word graph.

    ``nodes`` maps word -> occurrence count; ``edges`` maps the sorted word
    pair -> weight.  There are no self-loops and every edge endpoint is a
    node.
    """

    def __init__(self, nodes, edges):
        self.nodes = dict(nodes)
        self.edges = {}
        for (a, b), w in edges.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge {a!r}-{b!r} has an endpoint that is not a node")
            self.edges[_edge_key(a, b)] = int(w)

    def __repr__(self):
        return f"CooccurrenceGraph(n_nodes={len(self.nodes)}, n_edges={len(self.edges)})"

    def weight(self, a, b):
        return self.edges.get(_edge_key(a, b), 0)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        for word in sorted(self.nodes):
            g.add_node(word, count=self.nodes[word])
        for (a, b) in sorted(self.edges):
            g.add_edge(a, b, weight=self.edges[(a, b)])
        return g


def iter_windows(tokens, window_n):
    """Windows of ``window_n`` consecutive tokens, step 1.

    A segment shorter than the window (but with at least two tokens) forms
    a single window of its own length.
    """
    if len(tokens) < 2:
        return
    if len(tokens) <= window_n:
        yield tuple(tokens)
        return
    for i in range(len(tokens) - window_n + 1):
        yield tuple(tokens[i:i + window_n])


def _segment_view(seg, content_only):
    return [t.text for t in seg if not (content_only and t.is_stopword)]


def build_wcn(corpus, cfg=None):
    cfg = cfg if cfg is not None else WcnConfig()
    counts = Counter()
    pair_counts = Counter()
    for doc in corpus.documents:
        for seg in doc.segments:
            view = _segment_view(seg, cfg.use_content_tokens_only)
            counts.update(view)
            for window in iter_windows(view, cfg.window_n):
                for a, b in combinations(window, 2):
                    if a != b:
                        pair_counts[_edge_key(a, b)] += 1
    edges = {k: w for k, w in pair_counts.items() if w >= cfg.min_edge_weight}
    linked = {w for pair in edges for w in pair}
    return CooccurrenceGraph({w: counts[w] for w in linked}, edges)


def node_strength(graph, word):
    if word not in graph.nodes:
        raise VocabularyError(f"{word!r} is not a node of the graph")
    return sum(w for (a, b), w in graph.edges.items() if word in (a, b))


def top_edges(graph, m):
    m = check_int(m, "m", min_value=1)
    ranked = sorted(graph.edges.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:m]


def _dot_id(word):
    return '"' + word.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _to_dot(graph):
    lines = ["graph wcn {"]
    for word in sorted(graph.nodes):
        lines.append(f"  {_dot_id(word)} [count={graph.nodes[word]}];")
    for (a, b) in sorted(graph.edges):
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [weight={graph.edges[(a, b)]}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_graphml(graph):
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="count" for="node" attr.name="count" attr.type="int"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>',
        '  <graph id="wcn" edgedefault="undirected">',
    ]
    for word in sorted(graph.nodes):
        lines.append(f"    <node id={quoteattr(word)}>"
                     f'<data key="count">{graph.nodes[word]}</data></node>')
    for (a, b) in sorted(graph.edges):
        lines.append(f"    <edge source={quoteattr(a)} target={quoteattr(b)}>"
                     f'<data key="weight">{graph.edges[(a, b)]}</data></edge>')
    lines += ["  </graph>", "</graphml>"]
    return "\n".join(lines) + "\n"


def _to_edgelist(graph):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    for (a, b) in sorted(graph.edges):
        writer.writerow([a, b, graph.edges[(a, b)]])
    return buf.getvalue()


def export_graph(graph, format="dot"):
    """Serialize ``graph`` to UTF-8 bytes; output is fully deterministic."""
    writers = {"dot": _to_dot, "graphml": _to_graphml, "edgelist-csv": _to_edgelist}
    if format not in writers:
        raise ConfigError(f"unsupported graph format {format!r}; choose from {EXPORT_FORMATS}")
    return writers[format](graph).encode("utf-8")


def graph_summary(graph, top_m=10):
    strengths = Counter()
    for (a, b), w in graph.edges.items():
        strengths[a] += w
        strengths[b] += w
    hubs = sorted(strengths.items(), key=lambda kv: (-kv[1], kv[0]))[:top_m]
    return {
        "n_nodes": len(graph.nodes),
        "n_edges": len(graph.edges),
        "total_weight": sum(graph.edges.values()),
        "top_edges": [{"source": a, "target": b, "weight": w}
                      for (a, b), w in top_edges(graph, top_m)],
        "top_nodes": [{"word": w, "strength": s} for w, s in hubs],
    }


class CooccurrenceNetwork(BaseEstimator):
    """Fit a :class:`CooccurrenceGraph` on a cleaned corpus.

    Attributes
    ----------
    graph_ : CooccurrenceGraph
    """

    def __init__(self, window_n=2, min_edge_weight=1, use_content_tokens_only=True):
        self.window_n = window_n
        self.min_edge_weight = min_edge_weight
        self.use_content_tokens_only = use_content_tokens_only

    def fit(self, X, y=None):
        corpus = check_corpus(X)
        cfg = WcnConfig(self.window_n, self.min_edge_weight, self.use_content_tokens_only)
        self.graph_ = build_wcn(corpus, cfg)
        return self

    def top_edges(self, m=10):
        check_is_fitted(self, "graph_")
        return top_edges(self.graph_, m)

    def export(self, format="dot"):
        check_is_fitted(self, "graph_")
        return export_graph(self.graph_, format)
