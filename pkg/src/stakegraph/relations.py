"""Typed relation-triple extraction and co-occurrence statistics.

Triples are extracted utterance-locally: a relation cue pairs the nearest
variable annotation on each side. Identical (subject, relation, object)
triples merge, with weight equal to the number of distinct evidence items.
"""
from __future__ import annotations

import json
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from ._io import read_text_source
from .annotator import Annotation
from .corpus import Corpus
from .taxonomy import RELATION_ORDER, RelationType, Taxonomy


class ExtractionError(Exception):
    """Raised on malformed triple documents or unknown window policies."""


@dataclass(frozen=True)
class Evidence:
    dialogue_id: str
    turn_index: int
    cue: str

    def to_dict(self) -> dict:
        return {"dialogue_id": self.dialogue_id, "turn_index": self.turn_index, "cue": self.cue}


@dataclass(frozen=True)
class Triple:
    subject: str
    relation: RelationType
    object: str
    weight: float = 1.0
    evidence: tuple[Evidence, ...] = ()

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.relation.value, self.object)

    def to_record(self) -> dict:
        return {
            "subject": self.subject,
            "relation": self.relation.value,
            "object": self.object,
            "weight": self.weight,
            "evidence": [e.to_dict() for e in self.evidence],
        }

    @classmethod
    def from_record(cls, raw: dict) -> "Triple":
        try:
            relation = RelationType(raw["relation"])
        except ValueError as exc:
            raise ExtractionError(f"unknown relation {raw.get('relation')!r}") from exc
        evidence = tuple(
            Evidence(e["dialogue_id"], int(e["turn_index"]), e.get("cue", ""))
            for e in raw.get("evidence", [])
        )
        triple = cls(
            subject=raw["subject"],
            relation=relation,
            object=raw["object"],
            weight=float(raw.get("weight", max(len(evidence), 1))),
            evidence=evidence,
        )
        if triple.subject == triple.object:
            raise ExtractionError(f"self-relation on {triple.subject!r}")
        return triple


def load_triples(source: Union[str, Path]) -> list[Triple]:
    text = read_text_source(source)
    triples = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            triples.append(Triple.from_record(json.loads(line)))
    return triples


def serialize_triples(triples: Iterable[Triple]) -> str:
    lines = [json.dumps(t.to_record(), ensure_ascii=False, sort_keys=True) for t in triples]
    return "\n".join(lines) + ("\n" if lines else "")


def _cue_occurrences(text: str, pattern: str) -> list[tuple[int, int]]:
    return [m.span() for m in re.finditer(re.escape(pattern), text, re.IGNORECASE)]


def extract_triples(
    corpus: Corpus, annotations: Sequence[Annotation], taxonomy: Taxonomy
) -> list[Triple]:
    """Extract merged, sorted relation triples from an annotated corpus.

    For each cue occurrence inside an utterance the nearest variable
    annotation ending at or before the cue becomes the subject and the
    nearest one starting at or after it the object (swapped for cues declared
    object-first). Cues without variables on both sides yield nothing.
    """
    by_utterance: dict[tuple[str, int], list[Annotation]] = defaultdict(list)
    for annotation in annotations:
        by_utterance[(annotation.dialogue_id, annotation.turn_index)].append(annotation)

    merged: dict[tuple[str, RelationType, str], set[Evidence]] = defaultdict(set)
    for utterance in corpus.utterances():
        anns = sorted(
            by_utterance.get((utterance.dialogue_id, utterance.turn_index), []),
            key=lambda a: a.span,
        )
        if len(anns) < 2:
            continue
        for cue in taxonomy.cues:
            for cue_start, cue_end in _cue_occurrences(utterance.text, cue.pattern):
                left = None
                for ann in anns:
                    if ann.span[1] <= cue_start and (left is None or ann.span[1] > left.span[1]):
                        left = ann
                right = None
                for ann in anns:
                    if ann.span[0] >= cue_end and (right is None or ann.span[0] < right.span[0]):
                        right = ann
                if left is None or right is None:
                    continue
                subject, obj = left.variable_id, right.variable_id
                if cue.directionality == "object-first":
                    subject, obj = obj, subject
                if subject == obj:
                    continue
                merged[(subject, cue.relation, obj)].add(
                    Evidence(utterance.dialogue_id, utterance.turn_index, cue.pattern)
                )

    triples = []
    for (subject, relation, obj), evidence in merged.items():
        ordered = tuple(sorted(evidence, key=lambda e: (e.dialogue_id, e.turn_index, e.cue)))
        triples.append(
            Triple(subject=subject, relation=relation, object=obj, weight=float(len(ordered)), evidence=ordered)
        )
    triples.sort(key=lambda t: t.key)
    return triples


def merge_triples(triples: Iterable[Triple]) -> list[Triple]:
    """Merge duplicate (s, r, o) triples: evidence union, weight = evidence count."""
    merged: dict[tuple[str, RelationType, str], set[Evidence]] = defaultdict(set)
    external_weights: dict[tuple[str, RelationType, str], float] = defaultdict(float)
    for triple in triples:
        key = (triple.subject, triple.relation, triple.object)
        if triple.evidence:
            merged[key].update(triple.evidence)
        else:
            external_weights[key] += triple.weight
            merged[key]  # touch so the key exists
    out = []
    for key, evidence in merged.items():
        ordered = tuple(sorted(evidence, key=lambda e: (e.dialogue_id, e.turn_index, e.cue)))
        weight = float(len(ordered)) if ordered else external_weights[key]
        out.append(Triple(subject=key[0], relation=key[1], object=key[2], weight=weight, evidence=ordered))
    out.sort(key=lambda t: t.key)
    return out


@dataclass(frozen=True)
class TripleStats:
    total: int
    relation_counts: dict
    relation_fractions: dict
    out_degree: dict
    in_degree: dict

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "relation_counts": self.relation_counts,
            "relation_fractions": self.relation_fractions,
            "out_degree": self.out_degree,
            "in_degree": self.in_degree,
        }


def triple_stats(triples: Sequence[Triple]) -> TripleStats:
    """Exact counts and fractions per relation type plus per-variable degrees."""
    relation_counts = Counter(t.relation for t in triples)
    total = len(triples)
    counts = {r.value: relation_counts.get(r, 0) for r in RELATION_ORDER if relation_counts.get(r, 0)}
    fractions = {name: count / total for name, count in counts.items()} if total else {}
    out_degree: Counter = Counter(t.subject for t in triples)
    in_degree: Counter = Counter(t.object for t in triples)
    return TripleStats(
        total=total,
        relation_counts=counts,
        relation_fractions=fractions,
        out_degree=dict(sorted(out_degree.items())),
        in_degree=dict(sorted(in_degree.items())),
    )


WINDOW_POLICIES = ("same-utterance", "adjacent-utterances")


@dataclass
class CooccurrenceMatrix:
    """Symmetric zero-diagonal variable co-occurrence counts."""

    policy: str
    counts: dict[tuple[str, str], int] = field(default_factory=dict)

    def count(self, a: str, b: str) -> int:
        if a == b:
            return 0
        return self.counts.get((min(a, b), max(a, b)), 0)

    def variables(self) -> list[str]:
        seen = set()
        for a, b in self.counts:
            seen.add(a)
            seen.add(b)
        return sorted(seen)

    def edge_set(self) -> set[tuple[str, str]]:
        return {pair for pair, count in self.counts.items() if count > 0}

    def to_dict(self) -> dict:
        return {
            "policy": self.policy,
            "pairs": [
                {"a": a, "b": b, "count": count}
                for (a, b), count in sorted(self.counts.items())
            ],
        }


def cooccurrence(
    corpus: Corpus, annotations: Sequence[Annotation], policy: str = "same-utterance"
) -> CooccurrenceMatrix:
    """Count unordered variable pairs co-annotated within the policy window.

    same-utterance: one window per utterance. adjacent-utterances: one window
    per consecutive utterance pair (a single-utterance dialogue is its own
    window), variables pooled across the pair.
    """
    if policy not in WINDOW_POLICIES:
        raise ExtractionError(f"unknown co-occurrence policy {policy!r}")
    vars_at: dict[tuple[str, int], set[str]] = defaultdict(set)
    for annotation in annotations:
        vars_at[(annotation.dialogue_id, annotation.turn_index)].add(annotation.variable_id)

    matrix = CooccurrenceMatrix(policy=policy)

    def bump(window_vars: set[str]) -> None:
        ordered = sorted(window_vars)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                matrix.counts[(a, b)] = matrix.counts.get((a, b), 0) + 1

    for dialogue in corpus.dialogues.values():
        turns = [u.turn_index for u in dialogue.utterances]
        if policy == "same-utterance":
            for turn in turns:
                bump(vars_at.get((dialogue.id, turn), set()))
        else:
            if len(turns) == 1:
                bump(vars_at.get((dialogue.id, turns[0]), set()))
            for first, second in zip(turns, turns[1:]):
                window = vars_at.get((dialogue.id, first), set()) | vars_at.get((dialogue.id, second), set())
                bump(window)
    return matrix
