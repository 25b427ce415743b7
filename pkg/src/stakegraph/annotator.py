"""Lexicon-driven variable annotation plus agreement and extraction metrics.

All operations here are pure: annotation output is fully determined by the
corpus and taxonomy, so parallel per-dialogue runs merge deterministically.
"""
from __future__ import annotations

import json
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Union

from ._io import read_text_source
from .corpus import Corpus, CANONICAL_ROLES
from .taxonomy import Taxonomy, nfc


class AgreementError(Exception):
    """Raised on inputs an agreement metric is undefined for."""


POLARITIES = ("positive", "negative", "neutral")

#: Characters of context on each side of a matched span searched for
#: polarity cues (keeps one negation word from flipping a whole utterance).
POLARITY_WINDOW = 12


@dataclass(frozen=True)
class Annotation:
    dialogue_id: str
    turn_index: int
    variable_id: str
    span: tuple[int, int]
    polarity: str = "neutral"
    annotator_id: str = "lexicon"

    @property
    def key(self) -> tuple[str, int, str]:
        return (self.dialogue_id, self.turn_index, self.variable_id)

    def to_record(self) -> dict:
        return {
            "dialogue_id": self.dialogue_id,
            "turn_index": self.turn_index,
            "variable_id": self.variable_id,
            "span": list(self.span),
            "polarity": self.polarity,
            "annotator_id": self.annotator_id,
        }

    @classmethod
    def from_record(cls, raw: dict) -> "Annotation":
        return cls(
            dialogue_id=raw["dialogue_id"],
            turn_index=int(raw["turn_index"]),
            variable_id=raw["variable_id"],
            span=(int(raw["span"][0]), int(raw["span"][1])),
            polarity=raw.get("polarity", "neutral"),
            annotator_id=raw.get("annotator_id", "unknown"),
        )


def load_annotations(source: Union[str, Path]) -> list[Annotation]:
    text = read_text_source(source)
    annotations = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            annotations.append(Annotation.from_record(json.loads(line)))
    return annotations


def serialize_annotations(annotations: Iterable[Annotation]) -> str:
    lines = [json.dumps(a.to_record(), ensure_ascii=False, sort_keys=True) for a in annotations]
    return "\n".join(lines) + ("\n" if lines else "")


def _pattern_regex(pattern: str) -> re.Pattern:
    """Compile a lexicon pattern; '*' is a lazy any-run wildcard."""
    parts = [re.escape(chunk) for chunk in pattern.split("*")]
    return re.compile(".*?".join(parts), re.IGNORECASE)


def load_polarity_cues(path: Optional[Union[str, Path]] = None) -> dict[str, list[str]]:
    if path is None:
        path = Path(str(resources.files("stakegraph").joinpath("data/polarity_cues.json")))
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return {"negative": [nfc(c) for c in raw.get("negative", [])],
            "positive": [nfc(c) for c in raw.get("positive", [])]}


def _assign_polarity(text: str, span: tuple[int, int], cues: dict[str, list[str]]) -> str:
    lo = max(0, span[0] - POLARITY_WINDOW)
    hi = min(len(text), span[1] + POLARITY_WINDOW)
    window = text[lo:hi].lower()
    for cue in cues["negative"]:
        if cue.lower() in window:
            return "negative"
    for cue in cues["positive"]:
        if cue.lower() in window:
            return "positive"
    return "neutral"


def annotate(
    corpus: Corpus,
    taxonomy: Taxonomy,
    annotator_id: str = "lexicon",
    polarity_cues: Optional[dict[str, list[str]]] = None,
) -> list[Annotation]:
    """Annotate every utterance with each taxonomy variable whose lexicon matches.

    Matching is case-insensitive over NFC text. Each variable contributes at
    most one annotation per utterance, at the leftmost match span across its
    lexicon patterns. Output is sorted by (dialogue_id, turn_index, span start).
    """
    if polarity_cues is None:
        polarity_cues = load_polarity_cues()
    compiled = {
        var.id: [_pattern_regex(p) for p in var.lexicon]
        for var in taxonomy.variables.values()
        if var.lexicon
    }
    annotations: list[Annotation] = []
    for utterance in corpus.utterances():
        text = utterance.text
        for var_id in sorted(compiled):
            best: Optional[tuple[int, int]] = None
            for regex in compiled[var_id]:
                match = regex.search(text)
                if match and (best is None or match.start() < best[0]):
                    best = (match.start(), match.end())
            if best is None:
                continue
            annotations.append(
                Annotation(
                    dialogue_id=utterance.dialogue_id,
                    turn_index=utterance.turn_index,
                    variable_id=var_id,
                    span=best,
                    polarity=_assign_polarity(text, best, polarity_cues),
                    annotator_id=annotator_id,
                )
            )
    annotations.sort(key=lambda a: (a.dialogue_id, a.turn_index, a.span[0], a.variable_id))
    return annotations


@dataclass(frozen=True)
class AgreementScore:
    observed_agreement: Optional[float] = None
    expected_agreement: Optional[float] = None
    kappa: Optional[float] = None
    alpha: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "observed_agreement": self.observed_agreement,
            "expected_agreement": self.expected_agreement,
            "kappa": self.kappa,
            "alpha": self.alpha,
        }


def cohen_kappa(labels_a: Sequence[Hashable], labels_b: Sequence[Hashable]) -> AgreementScore:
    """Two-annotator chance-corrected agreement over paired label sequences."""
    if len(labels_a) != len(labels_b):
        raise AgreementError(f"label sequences differ in length ({len(labels_a)} vs {len(labels_b)})")
    n = len(labels_a)
    if n == 0:
        raise AgreementError("cannot score empty label sequences")
    observed = sum(1 for a, b in zip(labels_a, labels_b) if a == b) / n
    marginal_a = Counter(labels_a)
    marginal_b = Counter(labels_b)
    expected = sum(marginal_a[label] * marginal_b.get(label, 0) for label in marginal_a) / (n * n)
    if expected == 1.0:
        if observed == 1.0:
            return AgreementScore(observed_agreement=1.0, expected_agreement=1.0, kappa=1.0)
        raise AgreementError("expected agreement is 1 with imperfect observed agreement")
    kappa = (observed - expected) / (1.0 - expected)
    return AgreementScore(observed_agreement=observed, expected_agreement=expected, kappa=kappa)


def krippendorff_alpha(units: Mapping[Hashable, Mapping[Hashable, Hashable]]) -> AgreementScore:
    """Nominal-level alpha over a units -> (annotator -> label) map.

    Uses the coincidence-matrix formulation; units with fewer than two labels
    are excluded, and missing labels are simply absent from a unit's map.
    """
    pairable = {u: list(labels.values()) for u, labels in units.items() if len(labels) >= 2}
    if len(pairable) < 2:
        raise AgreementError("need at least 2 units with 2+ labels for pairable variance")
    coincidence: dict[tuple[Hashable, Hashable], float] = defaultdict(float)
    totals: Counter = Counter()
    n = 0.0
    for labels in pairable.values():
        m = len(labels)
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                if i != j:
                    coincidence[(a, b)] += 1.0 / (m - 1)
        for label in labels:
            totals[label] += 1
        n += m
    observed_disagreement = sum(v for (a, b), v in coincidence.items() if a != b) / n
    expected_disagreement = sum(
        totals[a] * totals[b] for a in totals for b in totals if a != b
    ) / (n * (n - 1.0))
    if expected_disagreement == 0.0:
        # Every pairable value is the same category: perfect agreement.
        if observed_disagreement == 0.0:
            return AgreementScore(alpha=1.0)
        raise AgreementError("no expected disagreement despite observed disagreement")
    alpha = 1.0 - observed_disagreement / expected_disagreement
    return AgreementScore(alpha=alpha)


def _f1(precision: Optional[float], recall: Optional[float]) -> Optional[float]:
    if precision is None or recall is None:
        return None
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _span_overlap(a: tuple[int, int], b: tuple[int, int]) -> float:
    """Overlap length relative to the shorter span (identical spans give 1)."""
    shorter = min(a[1] - a[0], b[1] - b[0])
    if shorter <= 0:
        return 0.0
    intersection = min(a[1], b[1]) - max(a[0], b[0])
    return max(0, intersection) / shorter


@dataclass(frozen=True)
class ExtractionEval:
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]
    fuzzy_match_rate: Optional[float]
    polarity_agreement: Optional[float]
    vfn_weighted_f1: Optional[float]
    per_variable: dict

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "fuzzy_match_rate": self.fuzzy_match_rate,
            "polarity_agreement": self.polarity_agreement,
            "vfn_weighted_f1": self.vfn_weighted_f1,
            "per_variable": self.per_variable,
        }


FUZZY_OVERLAP_THRESHOLD = 0.5


def eval_extraction(
    predicted: Sequence[Annotation],
    gold: Sequence[Annotation],
    taxonomy: Optional[Taxonomy] = None,
) -> ExtractionEval:
    """Score predicted annotations against a gold set.

    An exact match shares (dialogue, turn, variable). A gold item counts as
    fuzzy-matched when an exact match also overlaps at least half of the
    shorter span, so the fuzzy rate scores localization on top of recall.
    VFN weights per-variable F1 by 1/ln(2 + gold frequency), lifting
    low-frequency variables out of the high-frequency shadow.
    """
    predicted_by_key = {a.key: a for a in predicted}
    gold_by_key = {a.key: a for a in gold}
    matches = set(predicted_by_key) & set(gold_by_key)

    precision = len(matches) / len(predicted_by_key) if predicted_by_key else None
    recall = len(matches) / len(gold_by_key) if gold_by_key else None

    fuzzy = sum(
        1
        for key in gold_by_key
        if key in predicted_by_key
        and _span_overlap(predicted_by_key[key].span, gold_by_key[key].span) >= FUZZY_OVERLAP_THRESHOLD
    )
    fuzzy_rate = fuzzy / len(gold_by_key) if gold_by_key else None

    polarity_hits = sum(1 for key in matches if predicted_by_key[key].polarity == gold_by_key[key].polarity)
    polarity_agreement = polarity_hits / len(matches) if matches else None

    variables = sorted({key[2] for key in predicted_by_key} | {key[2] for key in gold_by_key})
    gold_freq = Counter(key[2] for key in gold_by_key)
    per_variable = {}
    weighted_sum = 0.0
    weight_total = 0.0
    for var in variables:
        p_keys = {k for k in predicted_by_key if k[2] == var}
        g_keys = {k for k in gold_by_key if k[2] == var}
        hits = len(p_keys & g_keys)
        var_precision = hits / len(p_keys) if p_keys else None
        var_recall = hits / len(g_keys) if g_keys else None
        var_f1 = _f1(var_precision, var_recall)
        per_variable[var] = {
            "precision": var_precision,
            "recall": var_recall,
            "f1": var_f1,
            "gold_count": gold_freq[var],
            "predicted_count": len(p_keys),
        }
        if var_f1 is not None:
            weight = 1.0 / math.log(2.0 + gold_freq[var])
            weighted_sum += weight * var_f1
            weight_total += weight
    vfn = weighted_sum / weight_total if weight_total else None

    return ExtractionEval(
        precision=precision,
        recall=recall,
        f1=_f1(precision, recall),
        fuzzy_match_rate=fuzzy_rate,
        polarity_agreement=polarity_agreement,
        vfn_weighted_f1=vfn,
        per_variable=per_variable,
    )


@dataclass(frozen=True)
class RoleProfiles:
    """Per-role add-one-smoothed variable frequency distributions."""

    roles: tuple[str, ...]
    vocabulary: tuple[str, ...]
    log_probs: Mapping[str, Mapping[str, float]]

    @classmethod
    def fit(
        cls,
        corpus: Corpus,
        annotations: Sequence[Annotation],
        taxonomy: Taxonomy,
        roles: Sequence[str] = CANONICAL_ROLES,
    ) -> "RoleProfiles":
        if not roles:
            raise AgreementError("cannot fit role profiles without roles")
        vocabulary = tuple(taxonomy.variable_ids())
        role_of = {
            (u.dialogue_id, u.turn_index): u.role for u in corpus.utterances()
        }
        counts: dict[str, Counter] = {role: Counter() for role in roles}
        for annotation in annotations:
            role = role_of.get((annotation.dialogue_id, annotation.turn_index))
            if role in counts:
                counts[role][annotation.variable_id] += 1
        log_probs = {}
        for role in roles:
            total = sum(counts[role].values()) + len(vocabulary)
            log_probs[role] = {
                var: math.log((counts[role][var] + 1) / total) for var in vocabulary
            }
        return cls(roles=tuple(roles), vocabulary=vocabulary, log_probs=log_probs)


def classify_role(
    dialogue_annotations: Sequence[Annotation], profiles: RoleProfiles
) -> tuple[str, dict[str, float]]:
    """Multinomial log-likelihood role classification with enumeration-order ties."""
    if not profiles.roles:
        raise AgreementError("empty role profiles")
    counts = Counter(a.variable_id for a in dialogue_annotations)
    scores = {}
    for role in profiles.roles:
        scores[role] = sum(
            count * profiles.log_probs[role].get(var, 0.0) for var, count in counts.items()
        )
    best = max(profiles.roles, key=lambda role: scores[role])
    # max() already keeps the first maximum, which is the enumeration order tie-break
    return best, scores
