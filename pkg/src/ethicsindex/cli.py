"""Command-line pipeline: ingest, filter, train, evaluate, annotate, report.

Every randomized stage takes an explicit --seed so any run can be
reproduced from its invocation line. Commands never modify their inputs;
results go only to the paths named on the command line.
"""

from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import active, baseline, corpus, evaluation, index
from .corpus import LabelValue, Provenance
from .pipeline import load_pipeline, make_classifier, save_pipeline


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


@click.group()
def main() -> None:
    """Ethics-related paper classification and index reporting."""


@main.command()
@click.option("--metadata", required=True, type=click.Path(exists=True), help="Line-delimited JSON paper metadata.")
@click.option("--out", required=True, type=click.Path(), help="Destination for the normalized corpus.")
def ingest(metadata: str, out: str) -> None:
    """Parse raw metadata into a validated corpus file."""
    issues: list[tuple[int, str]] = []
    try:
        docs = corpus.parse_metadata(Path(metadata), issues=issues)
    except (corpus.ParseError, OSError) as exc:
        raise _fail(str(exc))
    examples = [corpus.LabeledExample(doc=d) for d in docs]
    corpus.save_dataset(examples, out)
    for line_no, message in issues:
        click.echo(f"warning: line {line_no}: {message}", err=True)
    click.echo(f"ingested {len(docs)} records ({len(issues)} lines skipped)")


@main.command("filter")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--ethics-tag", "ethics_tags", multiple=True, help="Override ethics category terms.")
@click.option("--ai-tag", "ai_tags", multiple=True, help="Override AI category terms.")
def filter_cmd(corpus_path: str, out: str, ethics_tags: tuple[str, ...], ai_tags: tuple[str, ...]) -> None:
    """Keep papers tagged with both an ethics and an AI category."""
    examples = _load_dataset(corpus_path)
    f = corpus.CategoryFilter(
        ethics_tags=ethics_tags or corpus.DEFAULT_ETHICS_TAGS,
        ai_tags=ai_tags or corpus.DEFAULT_AI_TAGS,
    )
    kept = [ex for ex in examples if f.matches(ex.doc.categories)]
    corpus.save_dataset(kept, out)
    click.echo(f"kept {len(kept)} of {len(examples)} records")


def _load_dataset(path: str) -> list[corpus.LabeledExample]:
    try:
        return corpus.load_dataset(path)
    except (corpus.ValidationError, OSError) as exc:
        raise _fail(str(exc))


def _labeled_rows(examples, human_only: bool):
    provenances = (
        (Provenance.HUMAN,)
        if human_only
        else (Provenance.HUMAN, Provenance.MACHINE)
    )
    texts, y = active.training_rows(examples, provenances=provenances)
    if not texts:
        raise _fail("dataset has no labeled examples to train on")
    return texts, y


_MODEL_KIND = click.Choice(["forest", "logistic"])


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--model-out", required=True, type=click.Path())
@click.option("--model", "kind", required=True, type=_MODEL_KIND)
@click.option("--seed", required=True, type=int)
@click.option("--human-only", is_flag=True, help="Train on human labels only.")
@click.option("--n-estimators", type=int, default=None)
@click.option("--max-depth", type=int, default=None)
@click.option("--l1", type=float, default=None, help="L1 strength; defaults to CV grid selection.")
def train(dataset, model_out, kind, seed, human_only, n_estimators, max_depth, l1):
    """Fit a classifier on the labeled dataset and save it."""
    examples = _load_dataset(dataset)
    texts, y = _labeled_rows(examples, human_only)
    overrides = {}
    if kind == "forest":
        if n_estimators is not None:
            overrides["n_estimators"] = n_estimators
        if max_depth is not None:
            overrides["max_depth"] = max_depth
    else:
        if l1 is not None:
            overrides["alpha"] = l1
        else:
            overrides["alpha"] = evaluation.select_l1_strength(
                texts, y, lambda a: make_classifier("logistic", seed=seed, alpha=a)
            )
            click.echo(f"selected l1 strength {overrides['alpha']} by 4-fold CV")
    try:
        pipe = make_classifier(kind, seed=seed, **overrides).fit(texts, y)
    except ValueError as exc:
        raise _fail(str(exc))
    save_pipeline(pipe, model_out)
    click.echo(f"trained {kind} model on {len(texts)} rows -> {model_out}")


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--k", default=4, show_default=True, type=int)
@click.option("--model", "kind", required=True, type=_MODEL_KIND)
@click.option("--seed", required=True, type=int)
@click.option("--metrics-out", type=click.Path(), default=None)
@click.option("--human-only", is_flag=True)
@click.option("--n-estimators", type=int, default=None)
@click.option("--max-depth", type=int, default=None)
@click.option("--l1", type=float, default=None)
def cv(dataset, k, kind, seed, metrics_out, human_only, n_estimators, max_depth, l1):
    """Cross-validate with training-fold oversampling and print fold metrics."""
    examples = _load_dataset(dataset)
    texts, y = _labeled_rows(examples, human_only)
    overrides = {}
    if kind == "forest":
        if n_estimators is not None:
            overrides["n_estimators"] = n_estimators
        if max_depth is not None:
            overrides["max_depth"] = max_depth
    elif l1 is not None:
        overrides["alpha"] = l1
    try:
        report = evaluation.cross_validate(
            texts, y, make_classifier(kind, seed=seed, **overrides), k=k, seed=seed
        )
    except ValueError as exc:
        raise _fail(str(exc))
    rendered = evaluation.render_metrics_report(report)
    if metrics_out:
        Path(metrics_out).write_text(rendered, encoding="utf-8")
    click.echo(rendered, nl=False)


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--low", default=active.LOW_DEFAULT, show_default="1/3", type=float)
@click.option("--high", default=active.HIGH_DEFAULT, show_default="2/3", type=float)
@click.option("--out", required=True, type=click.Path())
def select(dataset, model_dir, low, high, out):
    """Write the annotation queue: unsure documents, most uncertain first."""
    examples = _load_dataset(dataset)
    pipe = load_pipeline(model_dir)
    targets = [ex for ex in examples if ex.provenance is not Provenance.HUMAN]
    probs = {}
    if targets:
        scores = pipe.predict_proba([corpus.available_text(ex.doc) for ex in targets])
        probs = {ex.doc.id: float(p) for ex, p in zip(targets, scores)}
    try:
        band = active.UncertaintyBand(low=low, high=high)
    except ValueError as exc:
        raise _fail(str(exc))
    queue = active.select_uncertain(probs, band)
    lines = [f"{doc_id}\t{probs[doc_id]:.6f}" for doc_id in queue]
    Path(out).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    click.echo(f"queued {len(queue)} of {len(targets)} unlabeled documents")


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--batch", required=True, type=click.Path(exists=True), help="CSV of doc_id,annotator_id,label rows.")
@click.option("--out", required=True, type=click.Path())
@click.option("--timestamp", default=None, help="ISO timestamp recorded on the votes (default: now).")
def label(dataset, batch, out, timestamp):
    """Apply an offline annotation batch to the dataset."""
    examples = _load_dataset(dataset)
    stamp = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    annotations = []
    for line_no, line in enumerate(Path(batch).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise _fail(f"{batch}:{line_no}: expected doc_id,annotator_id,label")
        doc_id, annotator_id, value = parts
        try:
            vote = corpus.AnnotationVote(annotator_id, LabelValue(value), stamp)
        except ValueError:
            raise _fail(f"{batch}:{line_no}: invalid label {value!r}")
        annotations.append((doc_id, vote))
    try:
        updated = active.apply_labels(examples, annotations)
    except KeyError as exc:
        raise _fail(str(exc.args[0]))
    corpus.save_dataset(updated, out)
    n_human = sum(1 for ex in updated if ex.provenance is Provenance.HUMAN)
    click.echo(f"applied {len(annotations)} votes; {n_human} human-labeled documents")


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def propagate(dataset, model_dir, out):
    """Machine-label every document that has no human label."""
    examples = _load_dataset(dataset)
    pipe = load_pipeline(model_dir)
    updated = active.machine_label_remainder(examples, pipe)
    corpus.save_dataset(updated, out)
    counts = corpus.provenance_counts(updated)
    click.echo(
        f"dataset now {counts['human']} human / {counts['machine']} machine / "
        f"{counts['unlabeled']} unlabeled"
    )


@main.command("baseline")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--mode", default="raw", show_default=True, type=click.Choice(["raw", "lemmatized"]))
@click.option("--keywords", "keywords_path", type=click.Path(exists=True), default=None, help="Custom keyword list, one term per line.")
@click.option("--out", required=True, type=click.Path())
def baseline_cmd(corpus_path, mode, keywords_path, out):
    """Classify every document with the keyword method."""
    examples = _load_dataset(corpus_path)
    if keywords_path:
        kws = baseline.load_keyword_list(keywords_path, mode)
    elif mode == "lemmatized":
        kws = baseline.lemma_keyword_list()
    else:
        kws = baseline.raw_keyword_list()
    lines = ["id,decision"]
    n_ethics = 0
    for ex in examples:
        decision = baseline.keyword_classify(corpus.available_text(ex.doc), kws)
        n_ethics += decision is LabelValue.ETHICS
        lines.append(f"{ex.doc.id},{decision.value}")
    Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    click.echo(f"{n_ethics} of {len(examples)} documents matched a keyword")


@main.command("index")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--keyword-mode", default="raw", show_default=True, type=click.Choice(["raw", "lemmatized"]))
@click.option("--cells-out", required=True, type=click.Path())
@click.option("--disagreements-out", required=True, type=click.Path())
@click.option("--plot", "plot_dir", type=click.Path(), default=None, help="Also write per-venue SVG charts to this directory.")
def index_cmd(corpus_path, model_dir, keyword_mode, cells_out, disagreements_out, plot_dir):
    """Build the per-venue, per-year ethics index report."""
    examples = _load_dataset(corpus_path)
    pipe = load_pipeline(model_dir)
    kws = (
        baseline.lemma_keyword_list()
        if keyword_mode == "lemmatized"
        else baseline.raw_keyword_list()
    )
    decisions = index.classify_corpus([ex.doc for ex in examples], pipe, kws)
    try:
        report = index.aggregate_index(decisions)
    except ValueError as exc:
        raise _fail(str(exc))
    index.export_report(report, cells_out, disagreements_out)
    click.echo(
        f"{len(report.cells)} venue/year cells, {len(report.disagreements)} disagreements"
    )
    if plot_dir:
        written = index.write_venue_plots(report, plot_dir)
        click.echo(f"wrote {len(written)} venue plots to {plot_dir}")


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--model", "model_dir", type=click.Path(exists=True), default=None, help="Fitted model directory; omit to start without one.")
@click.option("--model-type", default="forest", show_default=True, type=_MODEL_KIND)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--votes-required", default=3, show_default=True, type=int)
@click.option("--low", default=active.LOW_DEFAULT, type=float)
@click.option("--high", default=active.HIGH_DEFAULT, type=float)
def serve(dataset, model_dir, model_type, host, port, votes_required, low, high):
    """Run the annotation HTTP service for the browser UI."""
    import uvicorn

    from .server import AnnotationService, ServerConfig, create_app

    examples = _load_dataset(dataset)
    pipe = load_pipeline(model_dir) if model_dir else None
    config = ServerConfig(
        model_kind=model_type,
        majority_votes_required=votes_required,
        band=active.UncertaintyBand(low=low, high=high),
    )
    service = AnnotationService(examples, config, pipeline=pipe)
    uvicorn.run(create_app(service), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
