"""Command-line pipeline driver: thin wrappers over the pipeline stages.

Stages write deterministic artifacts into the output directory; failures
print a machine-readable error record to stderr and exit nonzero.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from .config import Config, ConfigError, load_config
from . import pipeline
from .pipeline import StageError


def _build_config(ctx_config: Optional[str], **overrides) -> Config:
    config = load_config(ctx_config) if ctx_config else Config()
    for name, value in overrides.items():
        if value is None:
            continue
        if hasattr(config.provider, name):
            setattr(config.provider, name, value)
        elif hasattr(config.metrics, name):
            setattr(config.metrics, name, value)
        else:
            setattr(config, name, value)
    config.metrics.validate()
    return config


def _fail(stage: str, exc: Exception) -> None:
    if isinstance(exc, StageError):
        record = exc.to_record()
    else:
        record = {"stage": stage, "message": str(exc), "offending_id": None}
    click.echo(json.dumps(record, ensure_ascii=False, sort_keys=True), err=True)
    sys.exit(1)


def _run(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:  # surfaced with stage name, per CLI contract
        _fail(stage, exc)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file; flags override its fields.")
@click.option("--taxonomy", type=click.Path(exists=True), default=None)
@click.option("--out", "output_dir", type=click.Path(), default=None)
@click.pass_context
def main(ctx, config_path, taxonomy, output_dir):
    """Stakeholder dialogue corpora -> annotated causal graphs and reports."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["overrides"] = {"taxonomy": taxonomy, "output_dir": output_dir}


def _config(ctx, **extra) -> Config:
    overrides = dict(ctx.obj["overrides"])
    overrides.update(extra)
    try:
        return _build_config(ctx.obj["config_path"], **overrides)
    except ConfigError as exc:
        _fail("config", exc)


@main.command()
@click.option("--templates", type=click.Path(exists=True), default=None)
@click.option("--plan", type=click.Path(exists=True), default=None)
@click.option("--provider", "kind", type=click.Choice(["replay", "http"]), default=None)
@click.option("--replay", "replay_path", type=click.Path(exists=True), default=None)
@click.option("--endpoint", default=None)
@click.option("--model", default=None)
@click.option("--workers", "parallelism", type=int, default=None)
@click.pass_context
def generate(ctx, templates, plan, kind, replay_path, endpoint, model, parallelism):
    """Run the generation plan and write corpus, traces, and log."""
    config = _config(ctx, templates=templates, plan=plan, kind=kind,
                     replay_path=replay_path, endpoint=endpoint, model=model,
                     parallelism=parallelism)
    summary = _run("generate", pipeline.stage_generate, config)
    click.echo(json.dumps(summary, ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--corpus", type=click.Path(exists=True), default=None)
@click.pass_context
def annotate(ctx, corpus):
    """Annotate the corpus with taxonomy variables."""
    config = _config(ctx, corpus=corpus)
    summary = _run("annotate", pipeline.stage_annotate, config)
    click.echo(json.dumps(summary, ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--corpus", type=click.Path(exists=True), default=None)
@click.pass_context
def extract(ctx, corpus):
    """Extract relation triples from the annotated corpus."""
    config = _config(ctx, corpus=corpus)
    summary = _run("extract", pipeline.stage_extract, config)
    click.echo(json.dumps(summary, ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--corpus", type=click.Path(exists=True), default=None)
@click.pass_context
def stats(ctx, corpus):
    """Per-role corpus statistics (dialogues, paragraphs, tokens, top terms)."""
    config = _config(ctx, corpus=corpus)
    summary = _run("stats", pipeline.stage_stats, config)
    click.echo(json.dumps(summary, ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--triples", type=click.Path(exists=True), default=None)
@click.option("--corpus", type=click.Path(exists=True), default=None)
@click.pass_context
def graph(ctx, triples, corpus):
    """Build the stakeholder graph plus metrics and cycle reports."""
    config = _config(ctx, corpus=corpus)
    summary = _run("graph", pipeline.stage_graph, config, triples_path=triples)
    click.echo(json.dumps(summary, ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--n", "baseline_n", type=int, default=None)
@click.option("--p", "baseline_p", type=float, default=None)
@click.option("--seeds", "baseline_seeds", type=int, default=None)
@click.option("--seed-base", "baseline_seed_base", type=int, default=None)
@click.option("--gold", type=click.Path(exists=True), default=None)
@click.pass_context
def baseline(ctx, baseline_n, baseline_p, baseline_seeds, baseline_seed_base, gold):
    """Compare the structured gold graph against seeded random baselines."""
    config = _config(ctx, baseline_n=baseline_n, baseline_p=baseline_p,
                     baseline_seeds=baseline_seeds, baseline_seed_base=baseline_seed_base)
    report = _run("baseline", pipeline.stage_baseline, config, gold_path=gold)
    click.echo(json.dumps(report["deltas"], ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--corpus", type=click.Path(exists=True), default=None)
@click.option("--templates", type=click.Path(exists=True), default=None)
@click.option("--retest-corpus", type=click.Path(exists=True), default=None)
@click.option("--retest-annotations", type=click.Path(exists=True), default=None)
@click.option("--embedding", type=click.Choice(["hashed", "none"]), default="hashed")
@click.option("--threshold", "cosine_threshold", type=float, default=None)
@click.option("--ngram", "ngram_order", type=int, default=None)
@click.pass_context
def quality(ctx, corpus, templates, retest_corpus, retest_annotations, embedding,
            cosine_threshold, ngram_order):
    """Compute the full quality report."""
    config = _config(ctx, corpus=corpus, templates=templates,
                     cosine_threshold=cosine_threshold, ngram_order=ngram_order)
    report = _run(
        "quality", pipeline.stage_quality, config,
        retest_corpus=retest_corpus, retest_annotations=retest_annotations,
        embedding=embedding,
    )
    click.echo(json.dumps({"written": "quality.json",
                           "traceability": report["traceability"].get("complete_chain_fraction")},
                          ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), default=None)
@click.option("--source", required=True)
@click.option("--value", type=float, required=True)
@click.option("--hops", type=int, default=None)
@click.option("--lambda", "attenuation", type=float, default=None)
@click.pass_context
def simulate(ctx, graph_path, source, value, hops, attenuation):
    """Inject an activation at a variable and propagate it over the graph."""
    config = _config(ctx)
    result = _run("simulate", pipeline.stage_simulate, config, source=source,
                  value=value, hops=hops, attenuation=attenuation, graph_path=graph_path)
    click.echo(json.dumps(result["activations"], ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), default=None)
@click.pass_context
def export(ctx, graph_path):
    """Write the graph document the explorer UI consumes."""
    config = _config(ctx)
    summary = _run("export", pipeline.stage_export, config, graph_path=graph_path)
    click.echo(json.dumps(summary, ensure_ascii=False, sort_keys=True))


@main.command()
@click.option("--artifacts", type=click.Path(exists=True), default=None,
              help="Directory of pipeline artifacts (defaults to --out).")
@click.option("--ui", "ui_dir", type=click.Path(exists=True), default=None,
              help="Built UI bundle to host statically.")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@click.pass_context
def serve(ctx, artifacts, ui_dir, host, port):
    """Serve the HTTP API (and optionally the UI) over built artifacts."""
    from .server import serve as run_server

    config = _config(ctx)
    directory = Path(artifacts) if artifacts else Path(config.output_dir)
    if not directory.exists():
        _fail("serve", ConfigError(f"artifacts directory not found: {directory}"))
    run_server(directory, ui_dir=Path(ui_dir) if ui_dir else None, host=host, port=port)


if __name__ == "__main__":
    main()
