"""Command-line front end.

Every subcommand ingests and cleans the input once, runs its analysis and
writes artifacts into the output directory.  Settings come from built-in
defaults, then an optional JSON config file (``--config``), then flags;
later sources win.

Exit status: 0 success, 1 usage/configuration error, 2 data error.
"""
import argparse
import copy
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import rake, wcn
from .exceptions import ConfigError, CrashMineError, DataError
from .topic_model import (
    DEFAULT_SEED,
    LdaConfig,
    fit_lda,
    sweep_k,
    top_words,
    umass_coherence,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

DEFAULTS = {
    "input": {"path": None, "format": "csv", "narrative_field": "narrative",
              "id_field": None, "keep_empty": False},
    "clean": {"min_token_len": 2, "drop_numeric": True, "sentence_delimiters": ".!?;:,",
              "stopwords": "builtin"},
    "freq": {"top_n": 50},
    "rake": {"top_n": 20, "max_phrase_len": 4},
    "wcn": {"window_n": 2, "min_edge_weight": 1, "use_content_tokens_only": True,
            "formats": ["dot", "graphml", "edgelist-csv"], "top_m": 20},
    "lda": {"fixed_k": None, "sweep": {"k_min": 2, "k_max": 10, "top_m": 10},
            "alpha": None, "beta": 0.01, "iterations": 1000, "burn_in": 800,
            "seed": DEFAULT_SEED, "top_words": 10},
    "output_dir": "crashmine-out",
}

GRAPH_FILES = {"dot": "wcn.dot", "graphml": "wcn.graphml", "edgelist-csv": "wcn_edges.csv"}


class UsageError(CrashMineError):
    pass


class StageError(Exception):
    def __init__(self, stage, error):
        self.stage = stage
        self.error = error
        super().__init__(f"{stage}: {error}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def _merge(base, override, path=""):
    for key, value in override.items():
        if key not in base:
            raise UsageError(f"unknown config key {path + key!r}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            _merge(base[key], value, f"{path}{key}.")
        else:
            base[key] = value
    return base


def build_config(args):
    cfg = copy.deepcopy(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror or exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        lda = loaded.get("lda", {})
        if isinstance(lda, dict) and lda.get("fixed_k") is not None and lda.get("sweep") is not None:
            raise UsageError("config sets both lda.fixed_k and lda.sweep; choose one")
        if isinstance(lda, dict) and lda.get("fixed_k") is not None:
            cfg["lda"]["sweep"] = None
        _merge(cfg, loaded)

    flag_map = [
        ("input", ("input", "path")), ("format", ("input", "format")),
        ("narrative_field", ("input", "narrative_field")), ("id_field", ("input", "id_field")),
        ("stopwords", ("clean", "stopwords")), ("out", ("output_dir",)),
        ("seed", ("lda", "seed")), ("iterations", ("lda", "iterations")),
        ("burn_in", ("lda", "burn_in")), ("alpha", ("lda", "alpha")), ("beta", ("lda", "beta")),
        ("top_n", (args.command if args.command in ("freq", "rake") else "rake", "top_n")),
        ("max_phrase_len", ("rake", "max_phrase_len")),
        ("window_n", ("wcn", "window_n")), ("min_edge_weight", ("wcn", "min_edge_weight")),
        ("graph_formats", ("wcn", "formats")),
    ]
    for attr, keys in flag_map:
        value = getattr(args, attr, None)
        if value is None:
            continue
        target = cfg
        for key in keys[:-1]:
            target = target[key]
        target[keys[-1]] = value

    k = getattr(args, "k", None)
    k_min, k_max = getattr(args, "k_min", None), getattr(args, "k_max", None)
    top_m = getattr(args, "top_m", None)
    if k is not None and (k_min is not None or k_max is not None):
        raise UsageError("--k conflicts with --k-min/--k-max")
    if k is not None:
        cfg["lda"]["fixed_k"] = k
        cfg["lda"]["sweep"] = None
    if k_min is not None or k_max is not None:
        sweep = cfg["lda"]["sweep"] or dict(DEFAULTS["lda"]["sweep"])
        if k_min is not None:
            sweep["k_min"] = k_min
        if k_max is not None:
            sweep["k_max"] = k_max
        cfg["lda"]["sweep"] = sweep
        cfg["lda"]["fixed_k"] = None
    if top_m is not None and cfg["lda"]["sweep"] is not None:
        cfg["lda"]["sweep"]["top_m"] = top_m
    if args.overwrite:
        cfg["overwrite"] = True

    if (cfg["lda"]["fixed_k"] is None) == (cfg["lda"]["sweep"] is None):
        raise UsageError("exactly one of lda.fixed_k and lda.sweep must be set")
    if cfg["input"]["path"] is None:
        raise UsageError("no input file: pass --input or set input.path in the config")
    return cfg


# ---------------------------------------------------------------------------
# Pipeline stages
# ---------------------------------------------------------------------------

def _stage(name, fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except DataError as exc:
        raise StageError(name, exc) from exc


def load_corpus(cfg):
    inp, cl = cfg["input"], cfg["clean"]
    records = _stage("ingest", corpus_mod.ingest, inp["path"], inp["format"],
                     inp["narrative_field"], inp["id_field"], inp["keep_empty"])
    stopwords = _stage("stopwords", corpus_mod.load_stopwords, cl["stopwords"])
    clean_cfg = corpus_mod.CleanConfig(cl["min_token_len"], cl["drop_numeric"],
                                       frozenset(cl["sentence_delimiters"]), inp["keep_empty"])
    corpus = _stage("clean", corpus_mod.clean, records, clean_cfg, stopwords)
    return records.report, corpus


def _lda_base(cfg, k):
    lda = cfg["lda"]
    return LdaConfig(k=k, alpha=lda["alpha"], beta=lda["beta"], iterations=lda["iterations"],
                     burn_in=lda["burn_in"], seed=lda["seed"])


def _p(x):
    return float(f"{x:.6g}")


def topics_payload(model, corpus, n_words, top_m):
    report = umass_coherence(model, corpus.doc_frequencies, top_m)
    return [
        {"topic": t,
         "top_words": [{"word": w, "p": _p(p)} for w, p in top_words(model, t, n_words)],
         "coherence": report.per_topic[t]}
        for t in range(model.k)
    ]


def run_topics(cfg, corpus):
    """Fit the fixed-k model or run the sweep; returns (model, sweep_or_None, top_m)."""
    lda = cfg["lda"]
    if lda["fixed_k"] is not None:
        model = _stage("lda", fit_lda, corpus, _lda_base(cfg, lda["fixed_k"]))
        return model, None, lda["sweep"]["top_m"] if lda["sweep"] else 10
    sw = lda["sweep"]
    result = _stage("sweep", sweep_k, corpus, sw["k_min"], sw["k_max"],
                    _lda_base(cfg, sw["k_min"]), sw.get("top_m", 10))
    return result.model_for(result.best_k), result, sw.get("top_m", 10)


def _json(obj):
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def artifacts_for(command, cfg):
    if command == "freq":
        return ["frequencies.csv", "frequencies.json", "ingest.json"]
    if command == "rake":
        return ["keywords.csv", "keywords.json"]
    if command == "wcn":
        return [GRAPH_FILES[f] for f in cfg["wcn"]["formats"]] + ["wcn_summary.json"]
    if command == "lda":
        return ["model.json", "topics.json"]
    if command == "sweep":
        return ["sweep.csv", "topics.json"]
    return ["report.json"]


def compute(command, cfg):
    """Run one subcommand; returns ({filename: text}, summary line)."""
    report, corpus = load_corpus(cfg)
    n_docs, n_tok = len(corpus), corpus.n_content_tokens
    head = f"{command}: {n_docs} documents, {n_tok} content tokens"

    if command == "freq":
        table = corpus_mod.term_frequencies(corpus, cfg["freq"]["top_n"])
        files = {"frequencies.csv": table.to_csv(),
                 "frequencies.json": _json(table.to_list()),
                 "ingest.json": _json(report.to_dict())}
        return files, f"{head}, total_tokens={table.total_tokens}"

    if command == "rake":
        phrases = rake.top_keywords(corpus, cfg["rake"]["top_n"], cfg["rake"]["max_phrase_len"])
        files = {"keywords.csv": rake.phrases_to_csv(phrases),
                 "keywords.json": _json([p.as_dict() for p in phrases])}
        return files, f"{head}, {len(phrases)} keywords"

    if command == "wcn":
        w = cfg["wcn"]
        graph = wcn.build_wcn(corpus, wcn.WcnConfig(w["window_n"], w["min_edge_weight"],
                                                    w["use_content_tokens_only"]))
        files = {GRAPH_FILES[f]: wcn.export_graph(graph, f).decode("utf-8") for f in w["formats"]}
        files["wcn_summary.json"] = _json(wcn.graph_summary(graph, w["top_m"]))
        return files, f"{head}, {len(graph.nodes)} nodes, {len(graph.edges)} edges"

    if command == "lda":
        if cfg["lda"]["fixed_k"] is None:
            raise UsageError("lda needs a topic count: pass --k or set lda.fixed_k")
        model, _, top_m = run_topics(cfg, corpus)
        files = {"model.json": model.to_json() + "\n",
                 "topics.json": _json(topics_payload(model, corpus, cfg["lda"]["top_words"], top_m))}
        return files, f"{head}, k={model.k}"

    if command == "sweep":
        if cfg["lda"]["sweep"] is None:
            raise UsageError("sweep needs a k range: pass --k-min/--k-max or set lda.sweep")
        model, result, top_m = run_topics(cfg, corpus)
        files = {"sweep.csv": result.to_csv(),
                 "topics.json": _json(topics_payload(model, corpus, cfg["lda"]["top_words"], top_m))}
        return files, f"{head}, best_k={result.best_k}"

    # report
    table = corpus_mod.term_frequencies(corpus, cfg["freq"]["top_n"])
    phrases = rake.top_keywords(corpus, cfg["rake"]["top_n"], cfg["rake"]["max_phrase_len"])
    w = cfg["wcn"]
    graph = wcn.build_wcn(corpus, wcn.WcnConfig(w["window_n"], w["min_edge_weight"],
                                                w["use_content_tokens_only"]))
    model, result, top_m = run_topics(cfg, corpus)
    doc = {
        "ingest": report.to_dict(),
        "frequencies": {"total_tokens": table.total_tokens, "entries": table.to_list()},
        "keywords": [p.as_dict() for p in phrases],
        "wcn_summary": wcn.graph_summary(graph, w["top_m"]),
        "topics": {
            "k": model.k,
            "best_k": result.best_k if result is not None else None,
            "seed": model.config.seed,
            "corpus_digest": model.corpus_digest,
            "topics": topics_payload(model, corpus, cfg["lda"]["top_words"], top_m),
        },
        "coherence_sweep": None if result is None else [
            {"k": e.k, "mean_coherence": e.mean_coherence, "seed": e.seed}
            for e in result.entries
        ],
    }
    best = f", best_k={result.best_k}" if result is not None else f", k={model.k}"
    return {"report.json": _json(doc)}, head + best


def write_artifacts(files, out_dir, overwrite):
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {out_dir}: {exc.strerror or exc}")
    paths = []
    for name, text in files.items():
        path = out_dir / name
        try:
            path.write_text(text, encoding="utf-8", newline="")
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror or exc}")
        paths.append(path)
    return paths


def check_targets(command, cfg):
    out_dir = Path(cfg["output_dir"])
    if out_dir.exists() and not out_dir.is_dir():
        raise UsageError(f"output path {out_dir} exists and is not a directory")
    inp = Path(cfg["input"]["path"]).resolve()
    for name in artifacts_for(command, cfg):
        path = out_dir / name
        if path.resolve() == inp:
            raise UsageError(f"artifact {path} would overwrite the input file")
        if path.exists() and not cfg.get("overwrite"):
            raise UsageError(f"{path} exists; pass --overwrite to replace it")


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _common(parser):
    g = parser.add_argument_group("global options")
    g.add_argument("--config", metavar="PATH", help="JSON config file")
    g.add_argument("--input", metavar="PATH", help="CSV or JSONL narrative file")
    g.add_argument("--format", choices=["csv", "jsonl"])
    g.add_argument("--narrative-field", metavar="NAME")
    g.add_argument("--id-field", metavar="NAME")
    g.add_argument("--stopwords", metavar="SRC", help="'builtin' or a stopword file")
    g.add_argument("--out", metavar="DIR", help="output directory")
    g.add_argument("--seed", type=int)
    g.add_argument("--overwrite", action="store_true", help="replace existing artifacts")


def _lda_opts(parser, fixed=True, sweep=True):
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--burn-in", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    if fixed:
        parser.add_argument("--k", type=int, help="fixed number of topics")
    if sweep:
        parser.add_argument("--k-min", type=int)
        parser.add_argument("--k-max", type=int)
        parser.add_argument("--top-m", type=int, help="top words per topic for coherence")


def make_parser():
    parser = _Parser(prog="crashmine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("freq", help="content-word frequency table")
    _common(p)
    p.add_argument("--top-n", type=int)

    p = sub.add_parser("rake", help="RAKE keyword extraction")
    _common(p)
    p.add_argument("--top-n", type=int)
    p.add_argument("--max-phrase-len", type=int)

    p = sub.add_parser("wcn", help="word co-occurrence network")
    _common(p)
    p.add_argument("--window-n", type=int)
    p.add_argument("--min-edge-weight", type=int)
    p.add_argument("--graph-formats", nargs="+", choices=list(GRAPH_FILES))

    p = sub.add_parser("lda", help="fit an LDA model with a fixed number of topics")
    _common(p)
    _lda_opts(p, fixed=True, sweep=False)

    p = sub.add_parser("sweep", help="choose the number of topics by UMass coherence")
    _common(p)
    _lda_opts(p, fixed=False, sweep=True)

    p = sub.add_parser("report", help="run every analysis into one report.json")
    _common(p)
    _lda_opts(p, fixed=True, sweep=True)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        check_targets(args.command, cfg)
        files, summary = compute(args.command, cfg)
        paths = write_artifacts(files, cfg["output_dir"], cfg.get("overwrite", False))
    except StageError as exc:
        print(f"crashmine: error in {exc.stage}: {exc.error}", file=sys.stderr)
        return EXIT_DATA
    except (UsageError, ConfigError) as exc:
        print(f"crashmine: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"crashmine: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(f"{summary} -> {', '.join(str(p) for p in paths)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
