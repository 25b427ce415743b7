"""Stakeholder dialogue corpora -> annotated, traceable causal graphs.

Pipeline: generate (or ingest) a role-tagged dialogue corpus, annotate it
against the structural variable taxonomy, extract typed relation triples,
build the stakeholder graph, score corpus and graph quality, and simulate
what-if interventions over the graph.
"""

from .taxonomy import (
    Dimension,
    Measurement,
    RelationCue,
    RelationType,
    Taxonomy,
    TaxonomyError,
    VariableDef,
    load_bundled_taxonomy,
    load_taxonomy,
    serialize_taxonomy,
    validate_taxonomy,
)
from .corpus import (
    Corpus,
    CorpusError,
    Dialogue,
    TraceRecord,
    Utterance,
    corpus_stats,
    ingest_corpus,
    serialize_corpus,
    tokenize,
)
from .annotator import (
    AgreementError,
    AgreementScore,
    Annotation,
    ExtractionEval,
    RoleProfiles,
    annotate,
    classify_role,
    cohen_kappa,
    eval_extraction,
    krippendorff_alpha,
)
from .relations import (
    CooccurrenceMatrix,
    Evidence,
    Triple,
    TripleStats,
    cooccurrence,
    extract_triples,
    triple_stats,
)
from .graph import (
    GraphEdge,
    GraphError,
    GraphMetrics,
    GraphNode,
    InterventionResult,
    StakeholderGraph,
    build_graph,
    find_cycles,
    graph_jaccard,
    graph_metrics,
    random_baseline,
    semantic_match_rate,
    simulate_intervention,
)
from .generation import (
    CoverageMatrix,
    GenerationError,
    GenerationPlan,
    GenerationTask,
    HttpChatProvider,
    LogEntry,
    PromptTemplate,
    ReplayProvider,
    build_coverage_matrix,
    plan_from_matrix,
    render_prompt,
    run_generation,
)
from .quality import (
    HashedNgramEmbedding,
    QualityError,
    cosine_similarity,
    diversity_entropy,
    jensen_shannon_divergence,
    nist_report,
    pearson_r,
    semantic_validity,
    stability_test,
    style_consistency,
    traceability_audit,
)

__version__ = "0.1.0"
