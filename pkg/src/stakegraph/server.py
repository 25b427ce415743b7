"""HTTP service over built artifacts for the explorer UI and scripts.

All endpoints are read-only over an immutable artifact snapshot except
/api/simulate, which is a pure computation: identical requests always get
identical bodies. Reload swaps the whole snapshot atomically.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import graph as graph_mod
from .corpus import Corpus, TraceRecord, ingest_corpus, load_traces


class ArtifactStore:
    """Immutable snapshot of the pipeline artifacts a server instance serves."""

    def __init__(
        self,
        graph: Optional[graph_mod.StakeholderGraph] = None,
        corpus: Optional[Corpus] = None,
        quality: Optional[dict] = None,
        cycles: Optional[dict] = None,
        traces: Optional[list[TraceRecord]] = None,
    ):
        self.graph = graph
        self.corpus = corpus
        self.quality = quality
        self.cycles = cycles
        self.traces_by_id = {t.prompt_id: t for t in (traces or [])}

    @classmethod
    def from_directory(cls, artifacts_dir: Path) -> "ArtifactStore":
        def maybe_json(name: str) -> Optional[dict]:
            path = artifacts_dir / name
            return json.loads(path.read_text(encoding="utf-8")) if path.exists() else None

        graph = None
        graph_doc = maybe_json("graph.json") or maybe_json("ui_graph.json")
        if graph_doc is not None:
            graph = graph_mod.StakeholderGraph.from_document(graph_doc)
        corpus = None
        corpus_path = artifacts_dir / "corpus.jsonl"
        if corpus_path.exists():
            corpus = ingest_corpus(corpus_path)
        traces = None
        traces_path = artifacts_dir / "traces.json"
        if traces_path.exists():
            traces = load_traces(traces_path)
        return cls(
            graph=graph,
            corpus=corpus,
            quality=maybe_json("quality.json"),
            cycles=maybe_json("cycles.json"),
            traces=traces,
        )


class SimulateRequest(BaseModel):
    source: str
    value: float = Field(ge=-1.0, le=1.0)
    hops: int = Field(default=3, ge=0)
    attenuation: float = Field(default=0.8, gt=0.0, le=1.0, alias="lambda")

    model_config = {"populate_by_name": True}


class SimulateResponse(BaseModel):
    source: str
    injected: float
    hops: int
    attenuation: float
    activations: dict[str, float]
    levels: dict[str, int]
    trace: list[dict]


class UtteranceModel(BaseModel):
    dialogue_id: str
    turn_index: int
    role: str
    text: str
    prompt_id: Optional[str] = None
    theme: Optional[str] = None
    scenario: Optional[str] = None


class DialogueResponse(BaseModel):
    id: str
    roles: list[str]
    utterances: list[UtteranceModel]


class EvidenceItem(BaseModel):
    dialogue_id: str
    turn_index: int
    cue: str
    role: Optional[str] = None
    text: Optional[str] = None
    prompt_id: Optional[str] = None
    trace: Optional[dict] = None


class EvidenceResponse(BaseModel):
    subject: str
    relation: str
    object: str
    weight: float
    evidence: list[EvidenceItem]


class ErrorRecord(BaseModel):
    stage: str
    message: str
    offending_id: Optional[str] = None


def create_app(artifacts_dir: Optional[Path] = None, ui_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="stakegraph", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = ArtifactStore.from_directory(artifacts_dir) if artifacts_dir else ArtifactStore()
    app.state.store = store

    def current() -> ArtifactStore:
        return app.state.store

    def require_graph() -> graph_mod.StakeholderGraph:
        graph = current().graph
        if graph is None:
            raise HTTPException(status_code=409, detail="graph artifact not loaded")
        return graph

    @app.get("/api/graph")
    def get_graph() -> dict:
        return require_graph().to_document()

    @app.get("/api/corpus/{dialogue_id}", response_model=DialogueResponse)
    def get_dialogue(dialogue_id: str):
        corpus = current().corpus
        if corpus is None:
            raise HTTPException(status_code=409, detail="corpus artifact not loaded")
        dialogue = corpus.dialogues.get(dialogue_id)
        if dialogue is None:
            raise HTTPException(status_code=404, detail=f"unknown dialogue {dialogue_id!r}")
        return DialogueResponse(
            id=dialogue.id,
            roles=sorted(dialogue.role_set),
            utterances=[UtteranceModel(**u.to_record()) for u in dialogue.utterances],
        )

    @app.get("/api/quality")
    def get_quality() -> dict:
        quality = current().quality
        if quality is None:
            raise HTTPException(status_code=409, detail="quality artifact not loaded")
        return quality

    @app.get("/api/cycles")
    def get_cycles() -> dict:
        cycles = current().cycles
        if cycles is None:
            raise HTTPException(status_code=409, detail="cycles artifact not loaded")
        return cycles

    @app.post("/api/simulate", response_model=SimulateResponse)
    def simulate(request: SimulateRequest):
        graph = require_graph()
        try:
            result = graph_mod.simulate_intervention(
                graph,
                source=request.source,
                injected=request.value,
                hops=request.hops,
                attenuation=request.attenuation,
            )
        except graph_mod.GraphError as exc:
            raise HTTPException(
                status_code=422,
                detail=ErrorRecord(
                    stage="simulate", message=str(exc), offending_id=request.source
                ).model_dump(),
            )
        return SimulateResponse(**result.to_dict())

    @app.get("/api/evidence", response_model=EvidenceResponse)
    def get_evidence(subject: str, relation: str, object: str):  # noqa: A002 - mirrors the wire field
        graph = require_graph()
        store_now = current()
        for edge in graph.edges:
            if edge.key == (subject, relation, object):
                items = []
                for item in edge.evidence:
                    record = EvidenceItem(
                        dialogue_id=item.dialogue_id,
                        turn_index=item.turn_index,
                        cue=item.cue,
                    )
                    if store_now.corpus is not None:
                        try:
                            utterance = store_now.corpus.get_utterance(
                                item.dialogue_id, item.turn_index
                            )
                        except Exception:
                            utterance = None
                        if utterance is not None:
                            record.role = utterance.role
                            record.text = utterance.text
                            record.prompt_id = utterance.prompt_id
                            if utterance.prompt_id in store_now.traces_by_id:
                                record.trace = store_now.traces_by_id[
                                    utterance.prompt_id
                                ].to_dict()
                    items.append(record)
                return EvidenceResponse(
                    subject=subject,
                    relation=relation,
                    object=object,
                    weight=edge.weight,
                    evidence=items,
                )
        raise HTTPException(
            status_code=404, detail=f"no edge ({subject!r}, {relation!r}, {object!r})"
        )

    if ui_dir is not None and Path(ui_dir).exists():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(artifacts_dir: Path, ui_dir: Optional[Path] = None, host: str = "127.0.0.1", port: int = 8000):
    """Blocking entry point used by the CLI `serve` subcommand."""
    import uvicorn

    app = create_app(artifacts_dir=artifacts_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)
