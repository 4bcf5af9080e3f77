"""Command-line pipeline: ingest -> phrase -> denoise -> train, plus the
evaluation, query, sampling, and serving commands.

Stages communicate through files in the formats owned by each module
(line-sentence corpora, phrase lists, vocabulary files, binary models).
Logs go to stderr; data goes to files or stdout.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import denoise as denoise_mod
from . import evaluation as eval_mod
from . import phrasing as phrasing_mod
from .config import PipelineConfig, default_config_yaml, load_pipeline_config
from .embedding import (
    TrainConfig,
    build_cooccurrence,
    save_binary,
    save_text,
    train_glove,
    train_skipgram,
)
from .errors import TermnetError
from .semnet import EmbeddingStore, adjacency_to_csv
from .service import ServiceConfig, create_app
from .vocab import Vocabulary

logger = logging.getLogger("termnet")


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


def _load_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        return load_pipeline_config(path)
    except (OSError, ValueError) as exc:
        raise _fail(f"bad config file: {exc}") from exc


def _pick(flag, config_value):
    return config_value if flag is None else flag


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """Build and query a semantic network of technical terms."""
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command("init-config")
@click.argument("output", type=click.Path(dir_okay=False), required=False)
def init_config(output: str | None) -> None:
    """Write the default pipeline configuration (to stdout by default)."""
    text = default_config_yaml()
    if output is None:
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text, encoding="utf-8")
        logger.info("wrote default config to %s", output)


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_file", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["jsonl", "tsv", "text"]),
              default=None, help="Input record format.")
@click.option("--only-kind", type=click.Choice(["utility", "design", "other"]),
              default=None, help="Keep only records of this kind.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None)
def ingest(input_file: str, output_file: str, fmt: str | None,
           only_kind: str | None, config_path: str | None) -> None:
    """Parse raw records into the normalized line-sentence corpus format."""
    cfg = _load_config(config_path)
    fmt = _pick(fmt, cfg.corpus.format)
    only_kind = _pick(only_kind, cfg.corpus.filter_kind)
    n_bad = 0

    def count_error(err: corpus_mod.RecordError) -> None:
        nonlocal n_bad
        n_bad += 1
        logger.warning("line %d (%s): %s", err.line_no,
                       err.doc_id or "?", err.message)

    with open(input_file, encoding="utf-8") as fh:
        if fmt == "text":
            sentences = [line.rstrip("\n") for line in fh if line.strip()]
        else:
            records = corpus_mod.iter_records(fh, fmt, on_error=count_error)
            sentences = list(corpus_mod.ingest(records, only_kind))
    tokenized = corpus_mod.tokenize(sentences)
    corpus_mod.write_line_sentences(tokenized, output_file)
    if n_bad:
        logger.warning("skipped %d malformed record(s)", n_bad)
    logger.info("wrote %d sentences to %s", len(tokenized), output_file)


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_file", type=click.Path(dir_okay=False))
@click.option("--algo", type=click.Choice(["stat", "textrank", "rake"]),
              default=None, help="Phrase detection strategy.")
@click.option("--t1", type=float, default=None,
              help="First-pass score threshold (stat).")
@click.option("--t2", type=float, default=None,
              help="Second-pass score threshold (stat).")
@click.option("--delta", type=float, default=None,
              help="Bigram count discount (stat).")
@click.option("--max-len", type=int, default=None,
              help="Longest phrase in words.")
@click.option("--cooccur-window", type=int, default=None,
              help="Word-graph link distance (textrank).")
@click.option("--keep-fraction", type=float, default=None,
              help="Fraction of top-ranked words kept (textrank).")
@click.option("--phrases-out", type=click.Path(dir_okay=False), default=None,
              help="Also write the detected phrase list here.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None)
def phrase(input_file: str, output_file: str, algo: str | None,
           t1: float | None, t2: float | None, delta: float | None,
           max_len: int | None, cooccur_window: int | None,
           keep_fraction: float | None, phrases_out: str | None,
           config_path: str | None) -> None:
    """Detect multi-word terms and rewrite the corpus with them."""
    cfg = _load_config(config_path).phrasing
    algo = _pick(algo, cfg.algorithm)
    max_len = _pick(max_len, cfg.max_phrase_len)
    corpus = corpus_mod.read_line_sentences(input_file)
    try:
        if algo == "stat":
            pc = phrasing_mod.PhrasingConfig(
                delta=_pick(delta, cfg.delta),
                threshold_pass1=_pick(t1, cfg.threshold_pass1),
                threshold_pass2=_pick(t2, cfg.threshold_pass2),
                max_phrase_len=max_len,
            )
            rewritten, phrases = phrasing_mod.phrase_two_pass(corpus, pc)
        else:
            if algo == "textrank":
                phrases = phrasing_mod.textrank_phrases(
                    corpus,
                    cooccur_window=_pick(cooccur_window, cfg.cooccur_window),
                    keep_fraction=_pick(keep_fraction, cfg.keep_fraction),
                    max_phrase_len=max_len,
                )
            else:
                stop = denoise_mod.load_bundled_stoplist("english").terms
                phrases = phrasing_mod.rake_phrases(corpus, stop, max_len)
            rewritten = phrasing_mod.apply_phrase_set(corpus, phrases)
    except (TermnetError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    corpus_mod.write_line_sentences(rewritten, output_file)
    if phrases_out:
        phrasing_mod.save_phrase_set(phrases, phrases_out)
    logger.info("detected %d phrases", len(phrases))


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_file", type=click.Path(dir_okay=False))
@click.option("--vocab-out", type=click.Path(dir_okay=False), default=None,
              help="Write the vocabulary file here.")
@click.option("--min-count", type=int, default=None,
              help="Drop terms seen fewer times than this.")
@click.option("--stoplist", "stoplists", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Extra stop-list file (repeatable).")
@click.option("--no-bundled-stoplists", is_flag=True,
              help="Skip the bundled english/uspto/jargon lists.")
@click.option("--lemma-lexicon", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Extra 'form lemma' override file.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None)
def denoise(input_file: str, output_file: str, vocab_out: str | None,
            min_count: int | None, stoplists: tuple[str, ...],
            no_bundled_stoplists: bool, lemma_lexicon: str | None,
            config_path: str | None) -> None:
    """Lemmatize, remove stop-words and noise, and build the vocabulary."""
    cfg = _load_config(config_path).denoise
    min_count = _pick(min_count, cfg.min_count)
    lemma_lexicon = _pick(lemma_lexicon, cfg.lemma_lexicon)
    lists: list[denoise_mod.StopList] = []
    use_bundled = cfg.use_bundled_stoplists and not no_bundled_stoplists
    if use_bundled:
        lists.extend(denoise_mod.load_bundled_stoplists())
    for path in list(stoplists) + list(cfg.stoplists):
        lists.append(denoise_mod.load_stoplist(path))
    extra = denoise_mod.load_lemma_lexicon(lemma_lexicon) if lemma_lexicon else None
    lemmatizer = denoise_mod.Lemmatizer(extra)
    corpus = corpus_mod.read_line_sentences(input_file)
    cleaned, vocab = denoise_mod.denoise_corpus(
        corpus, lists, lemmatizer, min_count)
    corpus_mod.write_line_sentences(cleaned, output_file)
    if vocab_out:
        vocab.save(vocab_out)
    logger.info("kept %d terms over %d sentences", len(vocab), len(cleaned))


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("model_out", type=click.Path(dir_okay=False))
@click.option("--algo", type=click.Choice(["skipgram", "glove"]), default=None)
@click.option("--dim", type=int, default=None)
@click.option("--window", type=int, default=None)
@click.option("--epochs", type=int, default=None)
@click.option("--negatives", type=int, default=None)
@click.option("--lr", type=float, default=None)
@click.option("--downsample", type=float, default=None)
@click.option("--min-count", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--x-max", type=float, default=None)
@click.option("--alpha-weight", type=float, default=None)
@click.option("--weighting", type=click.Choice(["flat", "inverse_distance"]),
              default=None, help="Co-occurrence weighting (glove).")
@click.option("--precision", type=click.Choice(["float32", "float64"]),
              default=None)
@click.option("--workers", type=int, default=None)
@click.option("--deterministic/--no-deterministic", default=None)
@click.option("--text-out", type=click.Path(dir_okay=False), default=None,
              help="Also export the text model format here.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None)
def train(input_file: str, model_out: str, algo, dim, window, epochs,
          negatives, lr, downsample, min_count, seed, x_max, alpha_weight,
          weighting, precision, workers, deterministic, text_out,
          config_path) -> None:
    """Train term vectors and write the binary model plus its index."""
    base = _load_config(config_path).train
    config = TrainConfig(
        algorithm=_pick(algo, base.algorithm),
        dim=_pick(dim, base.dim),
        window=_pick(window, base.window),
        downsample_d=_pick(downsample, base.downsample_d),
        negatives=_pick(negatives, base.negatives),
        epochs=_pick(epochs, base.epochs),
        learning_rate=_pick(lr, base.learning_rate),
        min_count=_pick(min_count, base.min_count),
        seed=_pick(seed, base.seed),
        x_max=_pick(x_max, base.x_max),
        alpha_weight=_pick(alpha_weight, base.alpha_weight),
        cooccur_weighting=_pick(weighting, base.cooccur_weighting),
        deterministic=_pick(deterministic, base.deterministic),
        workers=_pick(workers, base.workers),
        precision=_pick(precision, base.precision),
    )
    corpus = corpus_mod.read_line_sentences(input_file)
    vocab = Vocabulary.from_corpus(corpus, config.min_count)
    if len(vocab) == 0:
        raise _fail("no terms survive min_count; nothing to train on")
    known = [s for s in ([t for t in sent if t in vocab] for sent in corpus)
             if s]
    try:
        if config.algorithm == "skipgram":
            matrix = train_skipgram(known, vocab, config)
            vectors = matrix.term_vectors("input")
        else:
            table = build_cooccurrence(known, vocab, config.window,
                                       config.cooccur_weighting)
            matrix = train_glove(table, vocab, config)
            vectors = matrix.term_vectors("sum")
    except (TermnetError, ValueError, FloatingPointError) as exc:
        raise _fail(str(exc)) from exc
    save_binary(model_out, vocab.id_to_term, vectors,
                metadata=config.to_dict())
    if text_out:
        save_text(text_out, vocab.id_to_term, vectors)
    logger.info("trained %s model: %d terms, dim %d",
                config.algorithm, len(vocab), config.dim)


@main.command()
@click.option("--vocab", "vocab_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--dict", "dict_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Reference dictionary: category<TAB>keyword lines.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
def coverage(vocab_path: str, dict_path: str, as_json: bool) -> None:
    """Measure dictionary keyword coverage of a vocabulary."""
    try:
        vocab = Vocabulary.load(vocab_path)
        dictionary = eval_mod.CategorizedDictionary.load(dict_path)
        report = eval_mod.term_coverage(vocab, dictionary)
    except (TermnetError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    if as_json:
        click.echo(json.dumps({
            "per_category": report.per_category,
            "total": report.total,
            "n_retrieved": report.n_retrieved,
            "n_keywords": report.n_keywords,
        }))
        return
    for category in sorted(report.per_category):
        hits, size = report.per_category_counts[category]
        click.echo(f"{category}\t{report.per_category[category]:.4f}"
                   f"\t({hits}/{size})")
    click.echo(f"total\t{report.total:.4f}"
               f"\t({report.n_retrieved}/{report.n_keywords})")


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--pairs", "pairs_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Rated pairs: term_a<TAB>term_b<TAB>score lines.")
@click.option("--scale", nargs=2, type=float, default=(0.0, 10.0),
              show_default=True, help="Declared human score range.")
def bench(model_path: str, pairs_path: str, scale: tuple[float, float]) -> None:
    """Correlate model relevance with human-rated term pairs."""
    try:
        store = EmbeddingStore.load(model_path, on_demand=True)
        pairs = eval_mod.RatedPairSet.load(pairs_path, (scale[0], scale[1]))
        result = eval_mod.benchmark_correlation(store, pairs)
    except (TermnetError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    click.echo(json.dumps({
        "rho": result.rho,
        "n_scored": result.n_scored,
        "n_missing": result.n_missing,
    }))


@main.command()
@click.option("--ratings", "ratings_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="CSV with one row per rater.")
def alpha(ratings_path: str) -> None:
    """Cronbach's alpha over a raters-by-items ratings matrix."""
    try:
        grid = eval_mod.load_ratings_matrix(ratings_path)
        value = eval_mod.cronbach_alpha(grid)
    except (TermnetError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    click.echo(json.dumps({"alpha": value,
                           "raters": grid.shape[0], "items": grid.shape[1]}))


def _open_store(model_path: str) -> EmbeddingStore:
    try:
        return EmbeddingStore.load(model_path, on_demand=True)
    except (OSError, ValueError) as exc:
        raise _fail(f"cannot open model {model_path}: {exc}") from exc


@main.group()
def query() -> None:
    """One-shot queries against a trained model."""


@query.command("sim")
@click.argument("t1")
@click.argument("t2")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
def query_sim(t1: str, t2: str, model_path: str) -> None:
    store = _open_store(model_path)
    try:
        value = store.relevance(t1, t2)
    except TermnetError as exc:
        raise _fail(str(exc)) from exc
    click.echo(json.dumps({"t1": t1, "t2": t2, "relevance": value}))


@query.command("neighbors")
@click.argument("term")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--k", type=int, default=20, show_default=True)
@click.option("--exclude", multiple=True, help="Term to exclude (repeatable).")
def query_neighbors(term: str, model_path: str, k: int,
                    exclude: tuple[str, ...]) -> None:
    store = _open_store(model_path)
    try:
        result = store.top_k(term, k, exclude=exclude or None)
    except (TermnetError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    click.echo(json.dumps({
        "term": term,
        "neighbors": [{"term": t, "relevance": r} for t, r in result],
    }))


@query.command("adjacency")
@click.argument("text", required=False)
@click.option("--file", "text_file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Read the text from a file instead.")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--csv", "as_csv", is_flag=True, help="Emit CSV instead of JSON.")
def query_adjacency(text: str | None, text_file: str | None,
                    model_path: str, as_csv: bool) -> None:
    if text is None and text_file is None:
        raise _fail("provide TEXT or --file")
    if text is None:
        text = Path(text_file).read_text(encoding="utf-8")
    store = _open_store(model_path)
    terms, matrix = store.subgraph_adjacency(text)
    if as_csv:
        click.echo(adjacency_to_csv(terms, matrix), nl=False)
    else:
        click.echo(json.dumps({"terms": terms,
                               "matrix": [list(map(float, row))
                                          for row in matrix]}))


@query.command("tree")
@click.argument("root")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--breadth", type=int, default=3, show_default=True)
@click.option("--depth", type=int, default=3, show_default=True)
def query_tree(root: str, model_path: str, breadth: int, depth: int) -> None:
    store = _open_store(model_path)
    try:
        tree = store.expand_tree(root, breadth, depth)
    except (TermnetError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    click.echo(json.dumps(tree.to_dict()))


@main.command("sample-dist")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--pairs", "n_pairs", type=int, default=100_000,
              show_default=True, help="Number of random pairs.")
@click.option("--seed", type=int, default=1, show_default=True)
def sample_dist(model_path: str, n_pairs: int, seed: int) -> None:
    """Relevance distribution over random distinct term pairs."""
    store = _open_store(model_path)
    try:
        dist = store.sample_relevance_distribution(n_pairs, seed)
    except ValueError as exc:
        raise _fail(str(exc)) from exc
    click.echo(json.dumps({
        "n_pairs": dist.n_pairs,
        "mean": dist.mean,
        "stddev": dist.stddev,
        "histogram": dist.histogram,
        "bin_edges": dist.bin_edges,
    }))


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--max-k", type=int, default=None)
@click.option("--max-tree-nodes", type=int, default=None)
@click.option("--max-text-bytes", type=int, default=None)
@click.option("--cors-origin", "cors_origins", multiple=True,
              help="Allowed CORS origin (repeatable; default any).")
@click.option("--no-on-demand", is_flag=True,
              help="Load all vectors eagerly instead of memory-mapping.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None)
def serve(model_path: str, host, port, max_k, max_tree_nodes, max_text_bytes,
          cors_origins, no_on_demand, config_path) -> None:
    """Serve the /v1 query API over a trained model.

    TERMNET_BIND=host:port overrides the bind address.
    """
    import uvicorn

    base = _load_config(config_path).service
    host = _pick(host, base.host)
    port = _pick(port, base.port)
    bind = os.environ.get("TERMNET_BIND")
    if bind:
        host, _, port_text = bind.rpartition(":")
        if not host or not port_text.isdigit():
            raise _fail(f"TERMNET_BIND must be host:port, got {bind!r}")
        port = int(port_text)
    config = ServiceConfig(
        store_path=model_path,
        host=host,
        port=port,
        max_k=_pick(max_k, base.max_k),
        max_tree_nodes=_pick(max_tree_nodes, base.max_tree_nodes),
        max_text_bytes=_pick(max_text_bytes, base.max_text_bytes),
        cors_origins=list(cors_origins) or base.cors_origins,
        on_demand=base.on_demand and not no_on_demand,
    )
    store = EmbeddingStore.load(model_path, on_demand=config.on_demand)
    app = create_app(store, config)
    logger.info("serving %d terms on %s:%d", len(store), config.host, config.port)
    uvicorn.run(app, host=config.host, port=config.port, log_config=None)


if __name__ == "__main__":
    main()
