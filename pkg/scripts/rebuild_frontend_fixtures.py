#!/usr/bin/env python3
"""Record real server responses as frontend test fixtures.

Runs the bundled pipeline into a temp directory, starts the service in-process,
and freezes /api/graph, one /api/simulate body (byte-exact), and the
/api/evidence responses for every edge into frontend/tests/fixtures/.
"""
from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from stakegraph.config import Config, ProviderSettings  # noqa: E402
from stakegraph import pipeline  # noqa: E402
from stakegraph.server import create_app  # noqa: E402

DATA = ROOT / "src" / "stakegraph" / "data"
FIXTURES = ROOT / "frontend" / "tests" / "fixtures"

SIMULATE_REQUEST = {"source": "policy_gaps", "value": 1.0, "hops": 2, "lambda": 1.0}


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        config = Config(
            taxonomy=str(DATA / "taxonomy.json"),
            templates=str(DATA / "templates.json"),
            plan=str(DATA / "plan.json"),
            output_dir=tmp,
            provider=ProviderSettings(kind="replay", replay_path=str(DATA / "replay_responses.json")),
        )
        pipeline.stage_generate(config)
        pipeline.stage_annotate(config)
        pipeline.stage_extract(config)
        pipeline.stage_graph(config)
        client = TestClient(create_app(artifacts_dir=Path(tmp)))

        graph = client.get("/api/graph")
        (FIXTURES / "graph.json").write_bytes(graph.content)

        simulate = client.post("/api/simulate", json=SIMULATE_REQUEST)
        assert simulate.status_code == 200, simulate.text
        (FIXTURES / "simulate_response.json").write_bytes(simulate.content)
        (FIXTURES / "simulate_request.json").write_text(
            json.dumps(SIMULATE_REQUEST, indent=2) + "\n", encoding="utf-8"
        )

        evidence = {}
        for edge in graph.json()["edges"]:
            response = client.get("/api/evidence", params={
                "subject": edge["subject"], "relation": edge["relation"], "object": edge["object"],
            })
            assert response.status_code == 200, response.text
            key = f"{edge['subject']}|{edge['relation']}|{edge['object']}"
            evidence[key] = response.json()
        (FIXTURES / "evidence_responses.json").write_text(
            json.dumps(evidence, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    print(f"frontend fixtures written to {FIXTURES}")
    print(f"  graph edges: {len(graph.json()['edges'])}, evidence entries: {len(evidence)}")


if __name__ == "__main__":
    main()
