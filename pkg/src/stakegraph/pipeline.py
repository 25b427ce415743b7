"""Pipeline stages shared by the CLI and the test harness.

Every stage reads validated inputs, computes, and writes canonical JSON
artifacts into the configured output directory; given identical inputs,
config, and seed the whole output tree is byte-identical across runs.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional, Sequence

from . import annotator as annotate_mod
from . import corpus as corpus_mod
from . import generation as generation_mod
from . import graph as graph_mod
from . import quality as quality_mod
from . import relations as relations_mod
from .config import Config, ConfigError
from .taxonomy import Taxonomy, load_bundled_taxonomy, load_taxonomy


class StageError(Exception):
    def __init__(self, stage: str, message: str, offending_id: Optional[str] = None):
        super().__init__(message)
        self.stage = stage
        self.offending_id = offending_id

    def to_record(self) -> dict:
        return {
            "stage": self.stage,
            "message": str(self),
            "offending_id": self.offending_id,
        }


def _write_json(path: Path, payload) -> None:
    path.write_text(
        json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def resolve_taxonomy(config: Config) -> Taxonomy:
    if config.taxonomy:
        return load_taxonomy(config.taxonomy)
    return load_bundled_taxonomy()


def _provider(config: Config):
    settings = config.provider
    if settings.kind == "replay":
        if not settings.replay_path:
            raise ConfigError("replay provider needs provider.replay_path")
        return generation_mod.ReplayProvider(settings.replay_path)
    if settings.kind == "http":
        if not settings.endpoint:
            raise ConfigError("http provider needs provider.endpoint")
        return generation_mod.HttpChatProvider(
            endpoint=settings.endpoint,
            model=settings.model,
            api_key_env=settings.api_key_env,
        )
    raise ConfigError(f"unknown provider kind {settings.kind!r}")


def stage_generate(config: Config) -> dict:
    config.validate_paths("templates", "plan")
    templates = generation_mod.load_templates(config.templates)
    plan = generation_mod.load_plan(config.plan)
    provider = _provider(config)
    corpus, traces, log = generation_mod.run_generation(
        plan, templates, provider, max_workers=max(1, config.parallelism)
    )
    _write_text(config.out_path("corpus.jsonl"), corpus_mod.serialize_corpus(corpus))
    _write_text(config.out_path("traces.json"), corpus_mod.serialize_traces(traces))
    generation_mod.append_log(config.out_path("generation_log.jsonl"), log)
    ok = sum(1 for e in log if e.status == "ok")
    return {"dialogues": len(corpus.dialogues), "traces": len(traces), "log_entries": len(log), "ok": ok}


def _corpus_path(config: Config) -> Path:
    if config.corpus:
        return Path(config.corpus)
    return Path(config.output_dir) / "corpus.jsonl"


def stage_annotate(config: Config) -> dict:
    corpus_path = _corpus_path(config)
    if not corpus_path.exists():
        raise ConfigError(f"corpus not found: {corpus_path}")
    corpus = corpus_mod.ingest_corpus(corpus_path)
    taxonomy = resolve_taxonomy(config)
    annotations = annotate_mod.annotate(corpus, taxonomy)
    _write_text(config.out_path("annotations.jsonl"), annotate_mod.serialize_annotations(annotations))
    return {"annotations": len(annotations), "utterances": sum(1 for _ in corpus.utterances())}


def stage_extract(config: Config) -> dict:
    corpus = corpus_mod.ingest_corpus(_corpus_path(config))
    taxonomy = resolve_taxonomy(config)
    annotations = annotate_mod.load_annotations(Path(config.output_dir) / "annotations.jsonl")
    triples = relations_mod.extract_triples(corpus, annotations, taxonomy)
    _write_text(config.out_path("triples.jsonl"), relations_mod.serialize_triples(triples))
    stats = relations_mod.triple_stats(triples)
    _write_json(config.out_path("triple_stats.json"), stats.to_dict())
    return {"triples": len(triples)}


def stage_stats(config: Config) -> dict:
    corpus = corpus_mod.ingest_corpus(_corpus_path(config))
    stats = corpus_mod.corpus_stats(corpus, top_k=config.metrics.top_k)
    _write_json(config.out_path("corpus_stats.json"), stats)
    return stats["overall"]


def stage_graph(config: Config, triples_path: Optional[str] = None) -> dict:
    path = Path(triples_path) if triples_path else Path(config.output_dir) / "triples.jsonl"
    if not path.exists():
        raise ConfigError(f"triples not found: {path}")
    triples = relations_mod.load_triples(path)
    taxonomy = resolve_taxonomy(config)
    corpus = None
    corpus_path = _corpus_path(config)
    if corpus_path.exists():
        corpus = corpus_mod.ingest_corpus(corpus_path)
    graph = graph_mod.build_graph(triples, corpus=corpus, taxonomy=taxonomy)
    graph_mod.save_graph_document(graph, config.out_path("graph.json"))
    metrics = graph_mod.graph_metrics(graph) if graph.nodes else None
    _write_json(config.out_path("metrics.json"), metrics.to_dict() if metrics else {"note": "empty graph"})
    cycles = graph_mod.find_cycles(graph)
    _write_json(config.out_path("cycles.json"), {"cycles": cycles})
    return {
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "cycles": len(cycles),
    }


def baseline_node_set(structured: graph_mod.StakeholderGraph, taxonomy: Taxonomy, n: int) -> list[str]:
    """The structured graph's nodes, padded from the taxonomy (then synthetic
    ids) or truncated, to exactly n names."""
    nodes = structured.node_ids()
    if len(nodes) >= n:
        return nodes[:n]
    for var_id in taxonomy.variable_ids():
        if len(nodes) == n:
            break
        if var_id not in structured.nodes:
            nodes.append(var_id)
    index = 0
    while len(nodes) < n:
        candidate = f"padding_{index:03d}"
        if candidate not in nodes:
            nodes.append(candidate)
        index += 1
    return sorted(nodes)


def stage_baseline(config: Config, gold_path: Optional[str] = None) -> dict:
    """Compare the structured gold graph against seeded random baselines."""
    path = Path(gold_path or config.gold_triples or "")
    if not path.exists():
        raise ConfigError(f"gold triples not found: {path}")
    gold = relations_mod.load_triples(path)
    taxonomy = resolve_taxonomy(config)
    structured = graph_mod.build_graph(gold, taxonomy=taxonomy)
    params = config.metrics
    nodes = baseline_node_set(structured, taxonomy, params.baseline_n)

    component_counts = []
    edge_counts = []
    match_rates = []
    path_lengths = []
    for seed in range(params.baseline_seed_base, params.baseline_seed_base + params.baseline_seeds):
        sample = graph_mod.random_baseline(nodes, params.baseline_p, seed)
        metrics = graph_mod.graph_metrics(sample)
        component_counts.append(metrics.weakly_connected_components)
        edge_counts.append(metrics.edge_count)
        if metrics.average_shortest_path is not None:
            path_lengths.append(metrics.average_shortest_path)
        match_rates.append(graph_mod.semantic_match_rate(sample, gold))

    structured_metrics = graph_mod.graph_metrics(structured)
    count = len(component_counts)
    report = {
        "parameters": {
            "n": params.baseline_n,
            "p": params.baseline_p,
            "seeds": params.baseline_seeds,
            "seed_base": params.baseline_seed_base,
        },
        "structured": {
            "nodes": structured_metrics.node_count,
            "edges": structured_metrics.edge_count,
            "weakly_connected_components": structured_metrics.weakly_connected_components,
            "largest_component_coverage": structured_metrics.largest_component_coverage,
            "average_shortest_path": structured_metrics.average_shortest_path,
            "edge_to_node_ratio": structured_metrics.edge_to_node_ratio,
            "semantic_match_rate": graph_mod.semantic_match_rate(structured, gold),
        },
        "baseline_mean": {
            "weakly_connected_components": round(sum(component_counts) / count, 6),
            "edge_count": round(sum(edge_counts) / count, 6),
            "average_shortest_path": (
                round(sum(path_lengths) / len(path_lengths), 6) if path_lengths else None
            ),
            "semantic_match_rate": round(sum(match_rates) / count, 6),
        },
        "deltas": {
            "components_structured_minus_baseline": round(
                structured_metrics.weakly_connected_components - sum(component_counts) / count, 6
            ),
            "match_rate_structured_minus_baseline": round(
                graph_mod.semantic_match_rate(structured, gold) - sum(match_rates) / count, 6
            ),
        },
    }
    _write_json(config.out_path("baseline_report.json"), report)
    return report


def _corpus_digest(corpus_path: Path) -> str:
    return hashlib.sha256(corpus_path.read_bytes()).hexdigest()


def stage_quality(
    config: Config,
    retest_corpus: Optional[str] = None,
    retest_annotations: Optional[str] = None,
    embedding: str = "hashed",
) -> dict:
    corpus_path = _corpus_path(config)
    corpus = corpus_mod.ingest_corpus(corpus_path)
    taxonomy = resolve_taxonomy(config)
    out = Path(config.output_dir)

    annotations_path = out / "annotations.jsonl"
    annotations = (
        annotate_mod.load_annotations(annotations_path) if annotations_path.exists() else []
    )

    # consistency: per-role style scores, plus cross-run agreement when a
    # retest run is supplied
    style_scores = {}
    for role in corpus.roles():
        try:
            style_scores[role] = round(
                quality_mod.style_consistency(corpus, role, n=config.metrics.ngram_order), 6
            )
        except quality_mod.QualityError:
            style_scores[role] = None
    scored = [v for v in style_scores.values() if v is not None]
    consistency: dict = {
        "style_scores": style_scores,
        "style_mean": round(sum(scored) / len(scored), 6) if scored else None,
        "alpha": None,
        "cooccurrence_jaccard": None,
    }

    diversity = None
    if annotations:
        from collections import Counter

        distribution = Counter(a.variable_id for a in annotations)
        diversity = {
            "normalized_entropy": round(quality_mod.diversity_entropy(distribution), 6),
            "categories": len(distribution),
        }

    semantic = None
    if embedding != "none":
        provider = quality_mod.HashedNgramEmbedding()
        semantic = quality_mod.semantic_validity(
            taxonomy, corpus, provider, threshold=config.metrics.cosine_threshold
        )

    traceability = None
    traces_path = out / "traces.json"
    log_path = out / "generation_log.jsonl"
    if traces_path.exists() and log_path.exists() and config.templates:
        traces = corpus_mod.load_traces(traces_path)
        log = generation_mod.load_log(log_path)
        templates = generation_mod.load_templates(config.templates)
        traceability = quality_mod.traceability_audit(corpus, traces, log, templates)

    stability = None
    if retest_corpus and retest_annotations:
        retest_ann = annotate_mod.load_annotations(retest_annotations)
        retest_c = corpus_mod.ingest_corpus(retest_corpus)
        triples_a = relations_mod.extract_triples(corpus, annotations, taxonomy)
        triples_b = relations_mod.extract_triples(retest_c, retest_ann, taxonomy)
        stability = quality_mod.stability_test(
            annotations,
            retest_ann,
            (t.key for t in triples_a),
            (t.key for t in triples_b),
        )
        units = {(u.dialogue_id, u.turn_index) for u in corpus.utterances()}
        alpha = quality_mod.annotation_alpha(
            {"run_a": annotations, "run_b": retest_ann}, units
        )
        consistency["alpha"] = None if alpha is None else round(alpha, 6)
        matrix_a = relations_mod.cooccurrence(corpus, annotations)
        matrix_b = relations_mod.cooccurrence(retest_c, retest_ann)
        consistency["cooccurrence_jaccard"] = round(
            quality_mod.cooccurrence_jaccard(matrix_a, matrix_b), 6
        )

    report = quality_mod.nist_report(
        consistency=consistency,
        diversity=diversity,
        semantic=semantic,
        traceability=traceability,
        stability=stability,
        taxonomy_version=taxonomy.version,
        corpus_digest=_corpus_digest(corpus_path),
        config_digest=config.digest(),
    )
    _write_text(config.out_path("quality.json"), quality_mod.render_report(report))
    return report


def stage_simulate(
    config: Config,
    source: str,
    value: float,
    hops: Optional[int] = None,
    attenuation: Optional[float] = None,
    graph_path: Optional[str] = None,
) -> dict:
    path = Path(graph_path) if graph_path else Path(config.output_dir) / "graph.json"
    if not path.exists():
        raise ConfigError(f"graph not found: {path}")
    graph = graph_mod.load_graph_document(path)
    result = graph_mod.simulate_intervention(
        graph,
        source=source,
        injected=value,
        hops=config.metrics.hops if hops is None else hops,
        attenuation=config.metrics.propagation_lambda if attenuation is None else attenuation,
    )
    payload = result.to_dict()
    _write_json(config.out_path("simulation.json"), payload)
    return payload


def stage_export(config: Config, graph_path: Optional[str] = None) -> dict:
    path = Path(graph_path) if graph_path else Path(config.output_dir) / "graph.json"
    if not path.exists():
        raise ConfigError(f"graph not found: {path}")
    graph = graph_mod.load_graph_document(path)
    graph_mod.save_graph_document(graph, config.out_path("ui_graph.json"))
    return {"nodes": len(graph.nodes), "edges": len(graph.edges)}
