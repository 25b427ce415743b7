"""Role-tagged dialogue corpus: data model, ingestion, tokenizer, statistics.

The corpus file format is JSON Lines with one utterance record per line.
Everything is immutable after ingest; the statistics are pure functions.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

from ._io import read_text_source
from .taxonomy import nfc


class CorpusError(Exception):
    """Raised on malformed corpus or trace documents."""


CANONICAL_ROLES = ("Student", "Enterprise", "University")

_ROLE_ALIASES = {
    "student": "Student",
    "enterprise": "Enterprise",
    "university": "University",
}


def normalize_role(role: str) -> str:
    """Map a role string to its canonical spelling.

    The three canonical roles are always recognized (case-insensitively);
    any other non-empty string is accepted verbatim as an extension role.
    """
    if not role:
        raise CorpusError("empty role string")
    return _ROLE_ALIASES.get(role.strip().lower(), role.strip())


# One token per maximal Latin letter/digit run, one per CJK character;
# every other character separates tokens.
_TOKEN_RE = re.compile(r"[A-Za-z0-9]+|[㐀-䶿一-鿿豈-﫿]")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


@dataclass(frozen=True)
class Utterance:
    dialogue_id: str
    turn_index: int
    role: str
    text: str
    prompt_id: Optional[str] = None
    theme: Optional[str] = None
    scenario: Optional[str] = None

    def to_record(self) -> dict:
        return {
            "dialogue_id": self.dialogue_id,
            "turn_index": self.turn_index,
            "role": self.role,
            "text": self.text,
            "prompt_id": self.prompt_id,
            "theme": self.theme,
            "scenario": self.scenario,
        }


@dataclass
class Dialogue:
    id: str
    utterances: list[Utterance] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def role_set(self) -> set[str]:
        return {u.role for u in self.utterances}


@dataclass
class Corpus:
    dialogues: dict[str, Dialogue] = field(default_factory=dict)
    provenance: str = "ingested"

    def __len__(self) -> int:
        return len(self.dialogues)

    def utterances(self) -> Iterable[Utterance]:
        for dialogue in self.dialogues.values():
            yield from dialogue.utterances

    def get_utterance(self, dialogue_id: str, turn_index: int) -> Utterance:
        dialogue = self.dialogues.get(dialogue_id)
        if dialogue is None:
            raise CorpusError(f"unknown dialogue {dialogue_id!r}")
        for utterance in dialogue.utterances:
            if utterance.turn_index == turn_index:
                return utterance
        raise CorpusError(f"dialogue {dialogue_id!r} has no turn {turn_index}")

    def roles(self) -> list[str]:
        return sorted({u.role for u in self.utterances()})


@dataclass(frozen=True)
class TraceRecord:
    prompt_id: str
    template_id: str
    role: str
    theme: str
    scenario: str
    seed: int
    variable_targets: tuple[str, ...] = ()
    statement_refs: tuple[tuple[str, int], ...] = ()

    def to_dict(self) -> dict:
        return {
            "prompt_id": self.prompt_id,
            "template_id": self.template_id,
            "role": self.role,
            "theme": self.theme,
            "scenario": self.scenario,
            "seed": self.seed,
            "variable_targets": list(self.variable_targets),
            "statement_refs": [list(ref) for ref in self.statement_refs],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TraceRecord":
        return cls(
            prompt_id=raw["prompt_id"],
            template_id=raw["template_id"],
            role=raw["role"],
            theme=raw["theme"],
            scenario=raw["scenario"],
            seed=int(raw["seed"]),
            variable_targets=tuple(raw.get("variable_targets", [])),
            statement_refs=tuple((ref[0], int(ref[1])) for ref in raw.get("statement_refs", [])),
        )


def _utterance_from_record(raw: dict) -> Utterance:
    try:
        dialogue_id = raw["dialogue_id"]
        turn_index = int(raw["turn_index"])
        role = normalize_role(raw["role"])
        text = nfc(raw["text"])
    except KeyError as exc:
        raise CorpusError(f"utterance record missing field {exc}") from exc
    if turn_index < 0:
        raise CorpusError(f"negative turn_index in dialogue {dialogue_id!r}")
    if not text:
        raise CorpusError(f"empty text at ({dialogue_id!r}, {turn_index})")
    return Utterance(
        dialogue_id=dialogue_id,
        turn_index=turn_index,
        role=role,
        text=text,
        prompt_id=raw.get("prompt_id"),
        theme=raw.get("theme"),
        scenario=raw.get("scenario"),
    )


def ingest_corpus(source: Union[str, Path], provenance: str = "ingested") -> Corpus:
    """Ingest a JSON Lines corpus file (or raw JSONL string).

    Input order is preserved. Raises CorpusError on parse failures, duplicate
    (dialogue_id, turn_index) pairs, or records with empty text/role.
    """
    text = read_text_source(source)
    corpus = Corpus(provenance=provenance)
    seen: set[tuple[str, int]] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"corpus parse failure on line {lineno}: {exc}") from exc
        utterance = _utterance_from_record(raw)
        key = (utterance.dialogue_id, utterance.turn_index)
        if key in seen:
            raise CorpusError(f"duplicate (dialogue_id, turn_index) {key}")
        seen.add(key)
        corpus.dialogues.setdefault(utterance.dialogue_id, Dialogue(id=utterance.dialogue_id)).utterances.append(utterance)
    for dialogue in corpus.dialogues.values():
        dialogue.utterances.sort(key=lambda u: u.turn_index)
        for position, utterance in enumerate(dialogue.utterances):
            if utterance.turn_index != position:
                raise CorpusError(
                    f"dialogue {dialogue.id!r} has a turn_index gap at {utterance.turn_index}"
                )
    return corpus


def serialize_corpus(corpus: Corpus) -> str:
    """One utterance record per line, dialogues in insertion order."""
    lines = []
    for dialogue in corpus.dialogues.values():
        for utterance in dialogue.utterances:
            lines.append(json.dumps(utterance.to_record(), ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def load_traces(source: Union[str, Path]) -> list[TraceRecord]:
    try:
        raw = json.loads(read_text_source(source))
    except json.JSONDecodeError as exc:
        raise CorpusError(f"trace file parse failure: {exc}") from exc
    records = [TraceRecord.from_dict(item) for item in raw]
    seen = set()
    for record in records:
        if record.prompt_id in seen:
            raise CorpusError(f"duplicate prompt_id {record.prompt_id!r} in trace file")
        seen.add(record.prompt_id)
    return records


def serialize_traces(traces: Iterable[TraceRecord]) -> str:
    return json.dumps([t.to_dict() for t in traces], ensure_ascii=False, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class RoleStats:
    role: str
    dialogue_count: int
    paragraph_count: int
    token_total: int
    mean_paragraph_length: float
    top_tokens: tuple[tuple[str, int], ...]

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "dialogue_count": self.dialogue_count,
            "paragraph_count": self.paragraph_count,
            "token_total": self.token_total,
            "mean_paragraph_length": round(self.mean_paragraph_length, 6),
            "top_tokens": [list(pair) for pair in self.top_tokens],
        }


def corpus_stats(corpus: Corpus, top_k: int = 10, stopwords: Iterable[str] = ()) -> dict:
    """Per-role descriptive statistics plus an overall block.

    A "paragraph" is one utterance. Mean paragraph length is token total over
    paragraph count. Top tokens are sorted by count descending, ties broken
    lexicographically, after removing the configured stopwords.
    """
    stopset = set(stopwords)
    per_role: dict[str, dict] = {}
    for utterance in corpus.utterances():
        bucket = per_role.setdefault(
            utterance.role,
            {"dialogues": set(), "paragraphs": 0, "tokens": 0, "counter": Counter()},
        )
        tokens = tokenize(utterance.text)
        bucket["dialogues"].add(utterance.dialogue_id)
        bucket["paragraphs"] += 1
        bucket["tokens"] += len(tokens)
        bucket["counter"].update(t for t in tokens if t not in stopset)

    def top_tokens(counter: Counter) -> tuple[tuple[str, int], ...]:
        ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
        return tuple(ranked[:top_k])

    roles = {}
    total_tokens = 0
    total_paragraphs = 0
    overall_counter: Counter = Counter()
    for role in sorted(per_role):
        bucket = per_role[role]
        mean = bucket["tokens"] / bucket["paragraphs"] if bucket["paragraphs"] else 0.0
        roles[role] = RoleStats(
            role=role,
            dialogue_count=len(bucket["dialogues"]),
            paragraph_count=bucket["paragraphs"],
            token_total=bucket["tokens"],
            mean_paragraph_length=mean,
            top_tokens=top_tokens(bucket["counter"]),
        ).to_dict()
        total_tokens += bucket["tokens"]
        total_paragraphs += bucket["paragraphs"]
        overall_counter.update(bucket["counter"])

    overall_mean = total_tokens / total_paragraphs if total_paragraphs else 0.0
    return {
        "roles": roles,
        "overall": {
            "dialogue_count": len(corpus.dialogues),
            "paragraph_count": total_paragraphs,
            "token_total": total_tokens,
            "mean_paragraph_length": round(overall_mean, 6),
            "top_tokens": [list(pair) for pair in top_tokens(overall_counter)],
        },
    }
