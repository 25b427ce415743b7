"""Synthetic dialogue generation: coverage matrix, templates, providers, logs.

Generation is planned as tasks bound to (theme, scenario) cells of a coverage
matrix. Every rendered prompt gets a deterministic prompt id that roots the
prompt -> template -> variable -> statement trace chain, and every provider
attempt lands in an append-only structured log.
"""
from __future__ import annotations

import hashlib
import json
import os
import string
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Optional, Protocol, Sequence, Union

import httpx

from ._io import read_text_source
from .corpus import Corpus, Dialogue, TraceRecord, Utterance, normalize_role
from .taxonomy import nfc


class GenerationError(Exception):
    """Raised on invalid plans, templates, or matrix definitions."""


DEFAULT_THEMES = ("institutional barriers", "skill matching", "emotional fluctuations")

DEFAULT_SCENARIOS = (
    "pilot cooperation",
    "enterprise training",
    "policy matching",
    "curriculum co-design",
    "internship placement",
    "credit recognition",
    "mentor guidance",
    "skills certification",
    "campus recruitment",
)

PLACEHOLDERS = ("theme", "scenario", "variable_targets", "persona")

#: Log timestamps are derived from this base plus the task index so that a
#: rerun with the same plan produces byte-identical logs.
LOG_EPOCH = datetime(2025, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    role: str
    body: str
    persona: str = ""

    def validate(self) -> None:
        fields = [name for _, name, _, _ in string.Formatter().parse(self.body) if name]
        for placeholder in PLACEHOLDERS:
            count = fields.count(placeholder)
            if count != 1:
                raise GenerationError(
                    f"template {self.template_id!r} must contain {{{placeholder}}} exactly once (found {count})"
                )
        unknown = set(fields) - set(PLACEHOLDERS)
        if unknown:
            raise GenerationError(f"template {self.template_id!r} has unknown placeholders {sorted(unknown)}")

    def to_dict(self) -> dict:
        return {
            "template_id": self.template_id,
            "role": self.role,
            "persona": self.persona,
            "body": self.body,
        }


def load_templates(source: Union[str, Path]) -> dict[str, PromptTemplate]:
    raw = json.loads(read_text_source(source))
    templates: dict[str, PromptTemplate] = {}
    for item in raw:
        template = PromptTemplate(
            template_id=item["template_id"],
            role=normalize_role(item["role"]),
            body=item["body"],
            persona=item.get("persona", ""),
        )
        template.validate()
        if template.template_id in templates:
            raise GenerationError(f"duplicate template_id {template.template_id!r}")
        templates[template.template_id] = template
    return templates


@dataclass(frozen=True)
class MatrixCell:
    theme: str
    scenario: str
    fill: int = 0


@dataclass(frozen=True)
class CoverageMatrix:
    themes: tuple[str, ...]
    scenarios: tuple[str, ...]
    cells: tuple[MatrixCell, ...]

    def cell_keys(self) -> set[tuple[str, str]]:
        return {(c.theme, c.scenario) for c in self.cells}


def build_coverage_matrix(
    themes: Sequence[str] = DEFAULT_THEMES,
    scenarios: Sequence[str] = DEFAULT_SCENARIOS,
    per_cell: int = 1,
) -> CoverageMatrix:
    """Full theme x scenario cross product with a fill count per cell."""
    if not themes or not scenarios:
        raise GenerationError("themes and scenarios must be non-empty")
    if len(set(themes)) != len(themes):
        raise GenerationError("duplicate theme names")
    if len(set(scenarios)) != len(scenarios):
        raise GenerationError("duplicate scenario names")
    if per_cell < 0:
        raise GenerationError("per-cell count must be >= 0")
    cells = tuple(
        MatrixCell(theme=t, scenario=s, fill=per_cell) for t in themes for s in scenarios
    )
    return CoverageMatrix(themes=tuple(themes), scenarios=tuple(scenarios), cells=cells)


@dataclass(frozen=True)
class GenerationTask:
    template_id: str
    role: str
    theme: str
    scenario: str
    variable_targets: tuple[str, ...] = ()
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "template_id": self.template_id,
            "role": self.role,
            "theme": self.theme,
            "scenario": self.scenario,
            "variable_targets": list(self.variable_targets),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "GenerationTask":
        return cls(
            template_id=raw["template_id"],
            role=normalize_role(raw["role"]),
            theme=raw["theme"],
            scenario=raw["scenario"],
            variable_targets=tuple(raw.get("variable_targets", [])),
            seed=int(raw.get("seed", 0)),
        )


@dataclass
class GenerationPlan:
    tasks: list[GenerationTask] = field(default_factory=list)

    def validate(self, matrix: Optional[CoverageMatrix] = None) -> None:
        seeds = [t.seed for t in self.tasks]
        if len(set(seeds)) != len(seeds):
            raise GenerationError("plan seeds must be distinct per task")
        if matrix is not None:
            keys = matrix.cell_keys()
            for task in self.tasks:
                if (task.theme, task.scenario) not in keys:
                    raise GenerationError(
                        f"task ({task.theme!r}, {task.scenario!r}) is not a matrix cell"
                    )


def load_plan(source: Union[str, Path]) -> GenerationPlan:
    text = read_text_source(source)
    plan = GenerationPlan(tasks=[GenerationTask.from_dict(item) for item in json.loads(text)])
    plan.validate()
    return plan


def serialize_plan(plan: GenerationPlan) -> str:
    return json.dumps([t.to_dict() for t in plan.tasks], ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def plan_from_matrix(
    matrix: CoverageMatrix,
    templates: dict[str, PromptTemplate],
    variable_targets: Sequence[str] = (),
    seed_base: int = 0,
) -> GenerationPlan:
    """One task per cell fill per template, with sequentially distinct seeds."""
    tasks = []
    seed = seed_base
    for template_id in sorted(templates):
        template = templates[template_id]
        for cell in matrix.cells:
            for _ in range(cell.fill):
                tasks.append(
                    GenerationTask(
                        template_id=template.template_id,
                        role=template.role,
                        theme=cell.theme,
                        scenario=cell.scenario,
                        variable_targets=tuple(variable_targets),
                        seed=seed,
                    )
                )
                seed += 1
    return GenerationPlan(tasks=tasks)


def prompt_id_for(task: GenerationTask) -> str:
    """Deterministic SHA-256 digest of the task's canonical serialization."""
    canonical = json.dumps(
        {
            "template_id": task.template_id,
            "role": task.role,
            "theme": task.theme,
            "scenario": task.scenario,
            "variable_targets": sorted(task.variable_targets),
            "seed": task.seed,
        },
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def render_prompt(template: PromptTemplate, task: GenerationTask) -> tuple[str, str]:
    """Fill the template's placeholders and mint the prompt id."""
    if task.template_id != template.template_id:
        raise GenerationError(
            f"task references template {task.template_id!r}, got {template.template_id!r}"
        )
    try:
        prompt_text = template.body.format(
            theme=task.theme,
            scenario=task.scenario,
            variable_targets=", ".join(task.variable_targets) or "any",
            persona=template.persona,
        )
    except KeyError as exc:
        raise GenerationError(f"missing placeholder value {exc}") from exc
    return prompt_text, prompt_id_for(task)


def output_digest(utterances: Sequence[dict]) -> str:
    """Content hash over the provider's (role, text) records."""
    canonical = json.dumps(
        [{"role": u["role"], "text": u["text"]} for u in utterances],
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ProviderError(Exception):
    """Transport-level provider failure; the task is logged and skipped."""


class Provider(Protocol):
    provider_id: str

    def generate(self, prompt: str, task: GenerationTask) -> list[dict]:
        """Return utterance records [{"role": ..., "text": ...}, ...]."""


def parse_role_lines(raw_text: str) -> list[dict]:
    """Fallback parser for providers that answer with plain "Role: text" lines."""
    utterances = []
    for line in raw_text.splitlines():
        line = line.strip()
        if not line or ":" not in line:
            continue
        role, text = line.split(":", 1)
        if role.strip() and text.strip():
            utterances.append({"role": role.strip(), "text": text.strip()})
    return utterances


class ReplayProvider:
    """Serves canned dialogue bodies; the hermetic provider used by tests.

    The replay file is JSON: either a mapping from prompt_id to a response
    object or an array consumed in call order (the latter only makes sense
    with sequential execution). A response object is
    {"utterances": [{"role", "text"}, ...]}.
    """

    provider_id = "replay"

    def __init__(self, source: Union[str, Path, dict, list]):
        if isinstance(source, (str, Path)):
            raw = json.loads(read_text_source(source))
        else:
            raw = source
        if isinstance(raw, dict) and "responses" in raw:
            raw = raw["responses"]
        self._by_prompt: dict[str, dict] = {}
        self._queue: list[dict] = []
        if isinstance(raw, dict):
            self._by_prompt = dict(raw)
        else:
            self._queue = list(raw)
        self._cursor = 0
        self._lock = threading.Lock()

    def generate(self, prompt: str, task: GenerationTask) -> list[dict]:
        prompt_id = prompt_id_for(task)
        if self._by_prompt:
            response = self._by_prompt.get(prompt_id)
            if response is None:
                raise ProviderError(f"no canned response for prompt {prompt_id[:12]}")
        else:
            with self._lock:
                if self._cursor >= len(self._queue):
                    raise ProviderError("replay provider exhausted")
                response = self._queue[self._cursor]
                self._cursor += 1
        if isinstance(response, str):
            return parse_role_lines(response)
        return [dict(u) for u in response.get("utterances", [])]


class HttpChatProvider:
    """Chat-completion client for a structured-dialogue endpoint.

    POSTs {prompt, max_tokens, temperature, seed} and expects
    {"utterances": [{"role", "text"}, ...]} back; a plain-text "content"
    field is run through the role-line fallback parser. Credentials come
    from the environment, never from config files.
    """

    def __init__(
        self,
        endpoint: str,
        model: str = "",
        api_key_env: str = "STAKEGRAPH_API_KEY",
        max_tokens: int = 1024,
        temperature: float = 0.7,
        timeout: float = 30.0,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = os.environ.get(api_key_env, "")
        self.max_tokens = max_tokens
        self.temperature = temperature
        self.provider_id = f"http:{endpoint}"
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def generate(self, prompt: str, task: GenerationTask) -> list[dict]:
        payload = {
            "prompt": prompt,
            "max_tokens": self.max_tokens,
            "temperature": self.temperature,
            "seed": task.seed,
        }
        if self.model:
            payload["model"] = self.model
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            response = self._client.post(self.endpoint, json=payload, headers=headers)
            response.raise_for_status()
            body = response.json()
        except (httpx.HTTPError, json.JSONDecodeError) as exc:
            raise ProviderError(f"provider transport failure: {exc}") from exc
        if "utterances" in body:
            return [dict(u) for u in body["utterances"]]
        if "content" in body:
            return parse_role_lines(str(body["content"]))
        raise ProviderError("provider response carries neither utterances nor content")


@dataclass(frozen=True)
class LogEntry:
    prompt_id: str
    rendered_prompt: str
    task: GenerationTask
    provider_id: str
    timestamp: str
    output_digest: str
    status: str  # ok | transport_error | schema_error

    def to_dict(self) -> dict:
        return {
            "prompt_id": self.prompt_id,
            "rendered_prompt": self.rendered_prompt,
            "task": self.task.to_dict(),
            "provider_id": self.provider_id,
            "timestamp": self.timestamp,
            "output_digest": self.output_digest,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "LogEntry":
        return cls(
            prompt_id=raw["prompt_id"],
            rendered_prompt=raw["rendered_prompt"],
            task=GenerationTask.from_dict(raw["task"]),
            provider_id=raw["provider_id"],
            timestamp=raw["timestamp"],
            output_digest=raw["output_digest"],
            status=raw["status"],
        )


def load_log(source: Union[str, Path]) -> list[LogEntry]:
    text = read_text_source(source)
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            entries.append(LogEntry.from_dict(json.loads(line)))
    return entries


def serialize_log(entries: Iterable[LogEntry]) -> str:
    lines = [json.dumps(e.to_dict(), ensure_ascii=False, sort_keys=True) for e in entries]
    return "\n".join(lines) + ("\n" if lines else "")


def _validate_output(utterances: list[dict]) -> list[tuple[str, str]]:
    if not utterances:
        raise ValueError("provider returned no utterances")
    cleaned = []
    for raw in utterances:
        if not isinstance(raw, dict) or "role" not in raw or "text" not in raw:
            raise ValueError("utterance record must carry role and text")
        role = normalize_role(str(raw["role"]))
        text = nfc(str(raw["text"]).strip())
        if not text:
            raise ValueError("utterance with empty text")
        cleaned.append((role, text))
    return cleaned


def run_generation(
    plan: GenerationPlan,
    templates: dict[str, PromptTemplate],
    provider: Provider,
    max_workers: int = 1,
) -> tuple[Corpus, list[TraceRecord], list[LogEntry]]:
    """Execute a plan: one dialogue, trace record, and log entry per task.

    Tasks run with bounded parallelism but corpus assembly, trace order, and
    the log follow plan order, so output is deterministic. Transport and
    schema failures are logged and skipped without aborting the run.
    """
    for task in plan.tasks:
        if task.template_id not in templates:
            raise GenerationError(f"plan references unknown template {task.template_id!r}")

    rendered = [render_prompt(templates[t.template_id], t) for t in plan.tasks]

    def attempt(index: int) -> tuple[str, Optional[list[dict]]]:
        prompt_text, _ = rendered[index]
        try:
            return ("ok", provider.generate(prompt_text, plan.tasks[index]))
        except ProviderError:
            return ("transport_error", None)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(attempt, range(len(plan.tasks))))
    else:
        outcomes = [attempt(i) for i in range(len(plan.tasks))]

    corpus = Corpus(provenance="generated")
    traces: list[TraceRecord] = []
    log: list[LogEntry] = []
    for index, task in enumerate(plan.tasks):
        prompt_text, prompt_id = rendered[index]
        timestamp = (LOG_EPOCH + timedelta(seconds=index)).strftime("%Y-%m-%dT%H:%M:%SZ")
        status, payload = outcomes[index]
        digest = ""
        if status == "ok":
            try:
                cleaned = _validate_output(payload)  # type: ignore[arg-type]
            except Exception:
                status = "schema_error"
            else:
                digest = output_digest([{"role": r, "text": t} for r, t in cleaned])
                dialogue_id = f"d-{prompt_id[:12]}"
                dialogue = Dialogue(id=dialogue_id, metadata={"template_id": task.template_id, "seed": task.seed})
                for turn, (role, text) in enumerate(cleaned):
                    dialogue.utterances.append(
                        Utterance(
                            dialogue_id=dialogue_id,
                            turn_index=turn,
                            role=role,
                            text=text,
                            prompt_id=prompt_id,
                            theme=task.theme,
                            scenario=task.scenario,
                        )
                    )
                corpus.dialogues[dialogue_id] = dialogue
                traces.append(
                    TraceRecord(
                        prompt_id=prompt_id,
                        template_id=task.template_id,
                        role=task.role,
                        theme=task.theme,
                        scenario=task.scenario,
                        seed=task.seed,
                        variable_targets=task.variable_targets,
                        statement_refs=tuple((dialogue_id, u.turn_index) for u in dialogue.utterances),
                    )
                )
        log.append(
            LogEntry(
                prompt_id=prompt_id,
                rendered_prompt=prompt_text,
                task=task,
                provider_id=provider.provider_id,
                timestamp=timestamp,
                output_digest=digest,
                status=status,
            )
        )
    return corpus, traces, log


def append_log(path: Union[str, Path], entries: Sequence[LogEntry]) -> None:
    """Append entries to a JSONL log file without touching prior lines."""
    path = Path(path)
    with path.open("a", encoding="utf-8") as handle:
        for entry in entries:
            handle.write(json.dumps(entry.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
