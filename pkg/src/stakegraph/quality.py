"""Quality dimensions for synthetic corpora: consistency, diversity, semantic
validity, traceability, and test-retest stability, assembled into one report.

The embedding provider is pluggable; a deterministic hashed character-n-gram
provider ships so semantic validity is testable without any network.
"""
from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Protocol, Sequence, Union

import httpx

from .annotator import Annotation, krippendorff_alpha, AgreementError
from .corpus import Corpus, TraceRecord, tokenize
from .generation import LogEntry, PromptTemplate, output_digest
from .relations import CooccurrenceMatrix, Triple
from .taxonomy import Taxonomy, nfc


class QualityError(Exception):
    """Raised on inputs a quality metric is undefined for."""


# ---------------------------------------------------------------------------
# numeric helpers


def shannon_entropy(probabilities: Sequence[float]) -> float:
    return -sum(p * math.log2(p) for p in probabilities if p > 0.0)


def jensen_shannon_divergence(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    """Base-2 JSD between two distributions given as value -> probability."""
    support = set(p) | set(q)
    mixed = {key: 0.5 * (p.get(key, 0.0) + q.get(key, 0.0)) for key in support}
    h_mixed = shannon_entropy(list(mixed.values()))
    h_p = shannon_entropy(list(p.values()))
    h_q = shannon_entropy(list(q.values()))
    return h_mixed - 0.5 * (h_p + h_q)


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise QualityError("vectors differ in length")
    n = len(xs)
    if n < 2:
        raise QualityError("Pearson correlation needs at least 2 observations")
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    dev_x = [x - mean_x for x in xs]
    dev_y = [y - mean_y for y in ys]
    var_x = sum(d * d for d in dev_x)
    var_y = sum(d * d for d in dev_y)
    if var_x == 0.0 or var_y == 0.0:
        raise QualityError("zero-variance vector: correlation undefined")
    return sum(a * b for a, b in zip(dev_x, dev_y)) / math.sqrt(var_x * var_y)


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine of two vectors; 0.0 when either is a zero vector."""
    if len(a) != len(b):
        raise QualityError("vectors differ in length")
    dot = sum(x * y for x, y in zip(a, b))
    norm_a = sum(x * x for x in a)
    norm_b = sum(y * y for y in b)
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / math.sqrt(norm_a * norm_b)


# ---------------------------------------------------------------------------
# consistency and diversity


def _ngram_distribution(texts: Sequence[str], n: int) -> dict[str, float]:
    counter: Counter = Counter()
    for text in texts:
        tokens = tokenize(text)
        for i in range(len(tokens) - n + 1):
            counter["␟".join(tokens[i : i + n])] += 1
    total = sum(counter.values())
    if total == 0:
        return {}
    return {gram: count / total for gram, count in counter.items()}


def style_consistency(corpus: Corpus, role: str, n: int = 1) -> float:
    """1 minus the mean pairwise n-gram JSD between a role's dialogues."""
    distributions = []
    for dialogue in corpus.dialogues.values():
        texts = [u.text for u in dialogue.utterances if u.role == role]
        if texts:
            distributions.append(_ngram_distribution(texts, n))
    if len(distributions) < 2:
        raise QualityError(f"role {role!r} needs at least 2 dialogues for style consistency")
    divergences = []
    for i in range(len(distributions)):
        for j in range(i + 1, len(distributions)):
            divergences.append(jensen_shannon_divergence(distributions[i], distributions[j]))
    return 1.0 - sum(divergences) / len(divergences)


def diversity_entropy(distribution: Mapping[str, float]) -> float:
    """Shannon entropy normalized by log2 of the observed category count."""
    positive = [count for count in distribution.values() if count > 0]
    if not positive:
        raise QualityError("diversity entropy needs at least one positive count")
    if len(positive) == 1:
        return 0.0
    total = sum(positive)
    return shannon_entropy([c / total for c in positive]) / math.log2(len(positive))


# ---------------------------------------------------------------------------
# semantic validity


class EmbeddingProvider(Protocol):
    provider_id: str
    dimension: int

    def embed(self, text: str) -> list[float]: ...


class HashedNgramEmbedding:
    """Deterministic offline embedding: hashed character-trigram bag vectors.

    The same text always maps to the same vector (SHA-256 bucketing, no
    process-salt hashing), so identical texts have cosine exactly 1.
    """

    def __init__(self, dimension: int = 256, n: int = 3):
        self.dimension = dimension
        self.n = n
        self.provider_id = f"hashed-ngram-{n}-{dimension}"

    def embed(self, text: str) -> list[float]:
        normalized = nfc(text).casefold()
        vector = [0.0] * self.dimension
        if len(normalized) < self.n:
            grams = [normalized] if normalized else []
        else:
            grams = [normalized[i : i + self.n] for i in range(len(normalized) - self.n + 1)]
        for gram in grams:
            bucket = int.from_bytes(hashlib.sha256(gram.encode("utf-8")).digest()[:8], "big")
            vector[bucket % self.dimension] += 1.0
        return vector


class HttpEmbeddingProvider:
    """Client for an embedding endpoint: POST {texts: [..]} -> {vectors: [[..]]}."""

    def __init__(self, endpoint: str, dimension: int, timeout: float = 30.0,
                 transport: Optional[httpx.BaseTransport] = None):
        self.endpoint = endpoint
        self.dimension = dimension
        self.provider_id = f"http:{endpoint}"
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def embed(self, text: str) -> list[float]:
        response = self._client.post(self.endpoint, json={"texts": [text]})
        response.raise_for_status()
        vector = response.json()["vectors"][0]
        if len(vector) != self.dimension:
            raise QualityError(
                f"provider returned vector of length {len(vector)}, expected {self.dimension}"
            )
        return [float(x) for x in vector]


class _EmbeddingCache:
    """Per-run cache keyed by (provider_id, text digest)."""

    def __init__(self, provider: EmbeddingProvider):
        self.provider = provider
        self._cache: dict[tuple[str, str], list[float]] = {}

    def embed(self, text: str) -> list[float]:
        key = (self.provider.provider_id, hashlib.sha256(text.encode("utf-8")).hexdigest())
        if key not in self._cache:
            self._cache[key] = self.provider.embed(text)
        return self._cache[key]


def semantic_validity(
    taxonomy: Taxonomy,
    corpus: Corpus,
    provider: EmbeddingProvider,
    threshold: float = 0.78,
) -> dict:
    """Best-match cosine between each variable's name+description and the corpus.

    Returns mean cosine, the fraction of variables whose best match clears the
    threshold, and the per-variable best matching utterance. Provider failures
    degrade to per-variable error markers instead of aborting.
    """
    cache = _EmbeddingCache(provider)
    utterances = list(corpus.utterances())
    if not utterances:
        raise QualityError("semantic validity needs a non-empty corpus")

    utterance_vectors = []
    for utterance in utterances:
        utterance_vectors.append(cache.embed(utterance.text))

    per_variable = {}
    cosines = []
    matched = 0
    scored = 0
    for var_id in taxonomy.variable_ids():
        var = taxonomy.variables[var_id]
        query = f"{var.name}. {var.description}".strip()
        try:
            query_vector = cache.embed(query)
        except Exception as exc:
            per_variable[var_id] = {"error": str(exc)}
            continue
        best_cosine = -1.0
        best_ref = None
        for utterance, vector in zip(utterances, utterance_vectors):
            value = cosine_similarity(query_vector, vector)
            if value > best_cosine:
                best_cosine = value
                best_ref = (utterance.dialogue_id, utterance.turn_index)
        scored += 1
        cosines.append(best_cosine)
        if best_cosine >= threshold:
            matched += 1
        per_variable[var_id] = {
            "best_cosine": round(best_cosine, 6),
            "best_match": list(best_ref) if best_ref else None,
            "matched": best_cosine >= threshold,
        }
    return {
        "provider_id": provider.provider_id,
        "threshold": threshold,
        "mean_cosine": round(sum(cosines) / scored, 6) if scored else None,
        "matched_fraction": round(matched / scored, 6) if scored else None,
        "per_variable": per_variable,
    }


# ---------------------------------------------------------------------------
# traceability


@dataclass(frozen=True)
class ChainViolation:
    stage: str  # prompt-id | trace-record | template | log-entry | digest
    dialogue_id: str
    turn_index: int
    detail: str

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "dialogue_id": self.dialogue_id,
            "turn_index": self.turn_index,
            "detail": self.detail,
        }


def traceability_audit(
    corpus: Corpus,
    traces: Sequence[TraceRecord],
    log: Sequence[LogEntry],
    templates: Mapping[str, PromptTemplate],
) -> dict:
    """Verify the prompt -> template -> variable -> statement chain per utterance.

    Every utterance must carry a prompt id that resolves to a trace record,
    whose template exists, with a successful log entry whose output digest
    matches the stored dialogue content.
    """
    traces_by_id = {t.prompt_id: t for t in traces}
    log_by_id: dict[str, LogEntry] = {}
    for entry in log:
        log_by_id[entry.prompt_id] = entry

    digests: dict[str, str] = {}
    for dialogue in corpus.dialogues.values():
        digests[dialogue.id] = output_digest(
            [{"role": u.role, "text": u.text} for u in dialogue.utterances]
        )

    violations: list[ChainViolation] = []
    total = 0
    complete = 0
    for utterance in corpus.utterances():
        total += 1
        problem = _chain_problem(utterance, traces_by_id, log_by_id, templates, digests)
        if problem is None:
            complete += 1
        else:
            violations.append(problem)
    fraction = complete / total if total else 1.0
    return {
        "complete_chain_fraction": round(fraction, 6),
        "utterances_checked": total,
        "violations": [v.to_dict() for v in violations],
    }


def _chain_problem(utterance, traces_by_id, log_by_id, templates, digests) -> Optional[ChainViolation]:
    where = (utterance.dialogue_id, utterance.turn_index)
    if not utterance.prompt_id:
        return ChainViolation("prompt-id", *where, detail="utterance carries no prompt_id")
    trace = traces_by_id.get(utterance.prompt_id)
    if trace is None:
        return ChainViolation("trace-record", *where, detail=f"no trace record for {utterance.prompt_id[:12]}")
    if trace.template_id not in templates:
        return ChainViolation("template", *where, detail=f"dangling template {trace.template_id!r}")
    entry = log_by_id.get(utterance.prompt_id)
    if entry is None:
        return ChainViolation("log-entry", *where, detail=f"no log entry for {utterance.prompt_id[:12]}")
    if entry.status != "ok":
        return ChainViolation("log-entry", *where, detail=f"log status {entry.status!r}")
    if entry.output_digest != digests.get(utterance.dialogue_id):
        return ChainViolation("digest", *where, detail="stored content does not match logged digest")
    return None


# ---------------------------------------------------------------------------
# stability


def stability_test(
    annotations_a: Sequence[Annotation],
    annotations_b: Sequence[Annotation],
    edges_a: Iterable[tuple[str, str, str]],
    edges_b: Iterable[tuple[str, str, str]],
) -> dict:
    """Test-retest agreement between two pipeline runs.

    Pearson correlation of variable frequency vectors over the variable
    union (absent = 0) plus the fraction of run A's edges present in run B.
    """
    freq_a = Counter(a.variable_id for a in annotations_a)
    freq_b = Counter(a.variable_id for a in annotations_b)
    variables = sorted(set(freq_a) | set(freq_b))
    pearson: Optional[float] = None
    pearson_note = None
    if variables:
        xs = [float(freq_a.get(v, 0)) for v in variables]
        ys = [float(freq_b.get(v, 0)) for v in variables]
        try:
            pearson = pearson_r(xs, ys)
        except QualityError as exc:
            pearson_note = str(exc)
    set_a = set(edges_a)
    set_b = set(edges_b)
    edge_stability = len(set_a & set_b) / len(set_a) if set_a else None
    return {
        "frequency_pearson_r": None if pearson is None else round(pearson, 6),
        "frequency_pearson_note": pearson_note,
        "edge_stability": None if edge_stability is None else round(edge_stability, 6),
        "variables_compared": len(variables),
    }


# ---------------------------------------------------------------------------
# unit labels for annotation-agreement over two runs


def annotation_unit_labels(annotations: Sequence[Annotation]) -> dict[tuple[str, int], str]:
    """Collapse each utterance's annotations into one nominal label.

    The label is the sorted variable-id set, so two annotators agree on a
    unit exactly when they mark the same variables.
    """
    by_unit: dict[tuple[str, int], set[str]] = {}
    for annotation in annotations:
        by_unit.setdefault((annotation.dialogue_id, annotation.turn_index), set()).add(
            annotation.variable_id
        )
    return {unit: "|".join(sorted(vars_)) for unit, vars_ in by_unit.items()}


def annotation_alpha(
    runs: Mapping[str, Sequence[Annotation]], units: Iterable[tuple[str, int]]
) -> Optional[float]:
    """Krippendorff alpha over per-utterance variable-set labels; None if undefined."""
    table: dict[tuple[str, int], dict[str, str]] = {unit: {} for unit in units}
    for annotator, annotations in runs.items():
        labels = annotation_unit_labels(annotations)
        for unit in table:
            table[unit][annotator] = labels.get(unit, "")
    try:
        return krippendorff_alpha(table).alpha
    except AgreementError:
        return None


# ---------------------------------------------------------------------------
# report assembly


def cooccurrence_jaccard(a: CooccurrenceMatrix, b: CooccurrenceMatrix) -> float:
    edges_a = a.edge_set()
    edges_b = b.edge_set()
    union = edges_a | edges_b
    if not union:
        return 1.0
    return len(edges_a & edges_b) / len(union)


_ABSENT = {"status": "absent"}


def nist_report(
    consistency: Optional[dict] = None,
    diversity: Optional[dict] = None,
    semantic: Optional[dict] = None,
    traceability: Optional[dict] = None,
    stability: Optional[dict] = None,
    realism: Optional[dict] = None,
    taxonomy_version: str = "0",
    corpus_digest: str = "",
    config_digest: str = "",
) -> dict:
    """Assemble computed blocks into the quality report document.

    Blocks that were not computed are marked absent rather than omitted, and
    the report stamps the taxonomy version plus corpus/config digests so a
    report is attributable to exact inputs.
    """
    blocks = {
        "consistency": consistency,
        "diversity": diversity,
        "semantic_validity": semantic,
        "traceability": traceability,
        "stability": stability,
        "realism": realism,
    }
    if all(value is None for value in blocks.values()):
        raise QualityError("report needs at least one computed block")
    report = {name: (value if value is not None else dict(_ABSENT)) for name, value in blocks.items()}
    report["provenance"] = {
        "taxonomy_version": taxonomy_version,
        "corpus_digest": corpus_digest,
        "config_digest": config_digest,
    }
    return report


def render_report(report: dict) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
