"""Layered stakeholder graph: construction, metrics, baselines, simulation.

The graph is a directed multigraph over variables with at most one edge per
(subject, relation, object). Components are weakly connected (direction
ignored) and the average shortest path is taken over ordered reachable pairs
only, with the unreachable-pair count reported separately.
"""
from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import networkx as nx

from .annotator import Annotation
from .corpus import Corpus
from .relations import Evidence, Triple, merge_triples
from .taxonomy import RELATION_ORDER, RelationType, Taxonomy


class GraphError(Exception):
    """Raised on invalid graph inputs or simulation parameters."""


@dataclass(frozen=True)
class GraphNode:
    id: str
    dimension: Optional[str] = None
    role_sources: tuple[str, ...] = ()
    evidence_count: int = 0

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "dimension": self.dimension,
            "roles": list(self.role_sources),
            "evidence_count": self.evidence_count,
        }


@dataclass(frozen=True)
class GraphEdge:
    subject: str
    relation: RelationType
    object: str
    weight: float = 1.0
    evidence: tuple[Evidence, ...] = ()

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.relation.value, self.object)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "relation": self.relation.value,
            "object": self.object,
            "weight": self.weight,
            "evidence": [e.to_dict() for e in self.evidence],
        }


@dataclass
class StakeholderGraph:
    nodes: dict[str, GraphNode] = field(default_factory=dict)
    edges: list[GraphEdge] = field(default_factory=list)
    #: role of the utterance behind each evidence ref, for the UI role filter
    utterance_roles: dict[tuple[str, int], str] = field(default_factory=dict)

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)

    def edge_keys(self) -> set[tuple[str, str, str]]:
        return {e.key for e in self.edges}

    def out_edges(self, node: str) -> list[GraphEdge]:
        return [e for e in self.edges if e.subject == node]

    def _evidence_dict(self, item: Evidence) -> dict:
        record = item.to_dict()
        record["role"] = self.utterance_roles.get((item.dialogue_id, item.turn_index))
        return record

    def to_document(self) -> dict:
        """The JSON document served to the explorer UI."""
        edges = []
        for edge in sorted(self.edges, key=lambda e: e.key):
            record = edge.to_dict()
            record["evidence"] = [self._evidence_dict(item) for item in edge.evidence]
            edges.append(record)
        return {
            "nodes": [self.nodes[k].to_dict() for k in sorted(self.nodes)],
            "edges": edges,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "StakeholderGraph":
        graph = cls()
        for raw in doc.get("nodes", []):
            graph.nodes[raw["id"]] = GraphNode(
                id=raw["id"],
                dimension=raw.get("dimension"),
                role_sources=tuple(raw.get("roles", [])),
                evidence_count=int(raw.get("evidence_count", 0)),
            )
        for raw in doc.get("edges", []):
            evidence = tuple(
                Evidence(e["dialogue_id"], int(e["turn_index"]), e.get("cue", ""))
                for e in raw.get("evidence", [])
            )
            for e in raw.get("evidence", []):
                if e.get("role"):
                    graph.utterance_roles[(e["dialogue_id"], int(e["turn_index"]))] = e["role"]
            graph.edges.append(
                GraphEdge(
                    subject=raw["subject"],
                    relation=RelationType(raw["relation"]),
                    object=raw["object"],
                    weight=float(raw.get("weight", 1.0)),
                    evidence=evidence,
                )
            )
        return graph


def build_graph(
    triples: Sequence[Triple],
    corpus: Optional[Corpus] = None,
    annotations: Optional[Sequence[Annotation]] = None,
    taxonomy: Optional[Taxonomy] = None,
    include_annotated: bool = False,
) -> StakeholderGraph:
    """Assemble the stakeholder graph from (merged) triples.

    Nodes are the variables appearing in triples, plus every annotated
    variable when include_annotated is set. Role sources come from the roles
    of the evidence utterances; the per-node evidence count sums the evidence
    items on incident edges.
    """
    if taxonomy is not None:
        for triple in triples:
            for var in (triple.subject, triple.object):
                if var not in taxonomy:
                    raise GraphError(f"triple references unknown variable {var!r}")

    merged = merge_triples(triples)
    node_ids = {t.subject for t in merged} | {t.object for t in merged}
    if include_annotated and annotations is not None:
        node_ids |= {a.variable_id for a in annotations}

    role_of = {}
    if corpus is not None:
        role_of = {(u.dialogue_id, u.turn_index): u.role for u in corpus.utterances()}

    role_sources: dict[str, set[str]] = defaultdict(set)
    evidence_count: dict[str, int] = defaultdict(int)
    for triple in merged:
        for item in triple.evidence:
            role = role_of.get((item.dialogue_id, item.turn_index))
            for var in (triple.subject, triple.object):
                evidence_count[var] += 1
                if role is not None:
                    role_sources[var].add(role)

    graph = StakeholderGraph()
    for node_id in sorted(node_ids):
        dimension = None
        if taxonomy is not None and node_id in taxonomy:
            dimension = taxonomy.variables[node_id].dimension.value
        graph.nodes[node_id] = GraphNode(
            id=node_id,
            dimension=dimension,
            role_sources=tuple(sorted(role_sources.get(node_id, ()))),
            evidence_count=evidence_count.get(node_id, 0),
        )
    graph.edges = [
        GraphEdge(t.subject, t.relation, t.object, t.weight, t.evidence) for t in merged
    ]
    for triple in merged:
        for item in triple.evidence:
            key = (item.dialogue_id, item.turn_index)
            if key in role_of:
                graph.utterance_roles[key] = role_of[key]
    return graph


def _digraph(graph: StakeholderGraph, relations: Optional[set[RelationType]] = None) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    for edge in graph.edges:
        if relations is None or edge.relation in relations:
            g.add_edge(edge.subject, edge.object)
    return g


@dataclass(frozen=True)
class GraphMetrics:
    node_count: int
    edge_count: int
    weakly_connected_components: int
    largest_component_coverage: float
    average_shortest_path: Optional[float]
    reachable_pairs: int
    unreachable_pairs: int
    edge_to_node_ratio: float
    average_total_degree: float

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "weakly_connected_components": self.weakly_connected_components,
            "largest_component_coverage": round(self.largest_component_coverage, 6),
            "average_shortest_path": (
                None if self.average_shortest_path is None else round(self.average_shortest_path, 6)
            ),
            "reachable_pairs": self.reachable_pairs,
            "unreachable_pairs": self.unreachable_pairs,
            "edge_to_node_ratio": round(self.edge_to_node_ratio, 6),
            "average_total_degree": round(self.average_total_degree, 6),
        }


def graph_metrics(graph: StakeholderGraph) -> GraphMetrics:
    """Structural metrics: components, path lengths, compactness ratios."""
    if not graph.nodes:
        raise GraphError("metrics undefined on an empty graph")
    n = len(graph.nodes)
    m = len(graph.edges)
    directed = _digraph(graph)
    components = list(nx.weakly_connected_components(directed))
    largest = max(len(c) for c in components)

    total_length = 0
    reachable = 0
    for source, lengths in nx.all_pairs_shortest_path_length(directed):
        for target, distance in lengths.items():
            if target != source:
                total_length += distance
                reachable += 1
    ordered_pairs = n * (n - 1)
    return GraphMetrics(
        node_count=n,
        edge_count=m,
        weakly_connected_components=len(components),
        largest_component_coverage=largest / n,
        average_shortest_path=(total_length / reachable) if reachable else None,
        reachable_pairs=reachable,
        unreachable_pairs=ordered_pairs - reachable,
        edge_to_node_ratio=m / n,
        average_total_degree=2.0 * m / n,
    )


def random_baseline(
    node_ids: Sequence[str], p: float, seed: int, taxonomy: Optional[Taxonomy] = None
) -> StakeholderGraph:
    """Seeded directed Erdos-Renyi baseline over the given node set.

    Every ordered pair (u, v), u != v, receives an edge independently with
    probability p, relation drawn uniformly from the five types, weight 1.
    Identical seeds give byte-identical graphs on any platform.
    """
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability {p} outside [0, 1]")
    rng = random.Random(seed)
    ordered = sorted(node_ids)
    graph = StakeholderGraph()
    for node_id in ordered:
        dimension = None
        if taxonomy is not None and node_id in taxonomy:
            dimension = taxonomy.variables[node_id].dimension.value
        graph.nodes[node_id] = GraphNode(id=node_id, dimension=dimension)
    for u in ordered:
        for v in ordered:
            if u == v:
                continue
            if rng.random() < p:
                relation = RELATION_ORDER[rng.randrange(len(RELATION_ORDER))]
                graph.edges.append(GraphEdge(subject=u, relation=relation, object=v, weight=1.0))
    return graph


def graph_jaccard(a: StakeholderGraph, b: StakeholderGraph) -> float:
    """Edge-set Jaccard over (s, r, o) identity; 1.0 when both are empty."""
    edges_a = a.edge_keys()
    edges_b = b.edge_keys()
    union = edges_a | edges_b
    if not union:
        return 1.0
    return len(edges_a & edges_b) / len(union)


def find_cycles(
    graph: StakeholderGraph, relations: Optional[Iterable[RelationType]] = None
) -> list[list[str]]:
    """All simple directed cycles over edges passing the relation filter.

    Each cycle is rotated to start at its lexicographically smallest node and
    the list is sorted by length, then lexicographically.
    """
    relation_set = set(relations) if relations is not None else None
    directed = _digraph(graph, relation_set)
    cycles = []
    for cycle in nx.simple_cycles(directed):
        pivot = min(range(len(cycle)), key=lambda i: cycle[i])
        cycles.append(cycle[pivot:] + cycle[:pivot])
    cycles.sort(key=lambda c: (len(c), c))
    return cycles


def semantic_match_rate(
    graph: StakeholderGraph, gold: Sequence[Triple], relation_sensitive: bool = True
) -> float:
    """Fraction of the graph's edges found in the gold triple set."""
    if not gold:
        raise GraphError("semantic match rate needs a non-empty gold set")
    if not graph.edges:
        return 0.0
    if relation_sensitive:
        gold_keys = {(t.subject, t.relation.value, t.object) for t in gold}
        hits = sum(1 for e in graph.edges if e.key in gold_keys)
    else:
        gold_pairs = {(t.subject, t.object) for t in gold}
        hits = sum(1 for e in graph.edges if (e.subject, e.object) in gold_pairs)
    return hits / len(graph.edges)


@dataclass(frozen=True)
class TraceStep:
    hop: int
    kind: str  # "propagate" or "modulate"
    subject: str
    relation: str
    object: str
    value: float

    def to_dict(self) -> dict:
        return {
            "hop": self.hop,
            "kind": self.kind,
            "subject": self.subject,
            "relation": self.relation,
            "object": self.object,
            "value": self.value,
        }


@dataclass
class InterventionResult:
    source: str
    injected: float
    hops: int
    attenuation: float
    activations: dict[str, float]
    levels: dict[str, int]
    trace: list[TraceStep]

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "injected": self.injected,
            "hops": self.hops,
            "attenuation": self.attenuation,
            "activations": {k: self.activations[k] for k in sorted(self.activations)},
            "levels": {k: self.levels[k] for k in sorted(self.levels)},
            "trace": [step.to_dict() for step in self.trace],
        }


def _clip(value: float) -> float:
    return max(-1.0, min(1.0, value))


def simulate_intervention(
    graph: StakeholderGraph,
    source: str,
    injected: float,
    hops: int,
    attenuation: float,
) -> InterventionResult:
    """Propagate a signed activation from the source variable breadth-first.

    Non-Modulation edges carry sign(relation) * normalized weight *
    attenuation * activation(u) from nodes updated at the previous hop into
    nodes not yet reached; contributions into a node sum and are clipped to
    [-1, 1]. A Modulation edge carries no activation; instead, at the hop
    after its origin is updated, it multiplies the effective weight of the
    target's outgoing edges by (1 + activation(origin)). Weights are
    normalized by the maximum edge weight of the original graph.
    """
    if source not in graph.nodes:
        raise GraphError(f"unknown intervention source {source!r}")
    if not -1.0 <= injected <= 1.0:
        raise GraphError(f"injected value {injected} outside [-1, 1]")
    if hops < 0:
        raise GraphError("hop horizon must be non-negative")
    if not 0.0 < attenuation <= 1.0:
        raise GraphError(f"attenuation {attenuation} outside (0, 1]")

    max_weight = max((e.weight for e in graph.edges), default=1.0)
    if max_weight <= 0:
        max_weight = 1.0
    effective = {id(e): e.weight for e in graph.edges}
    out_edges: dict[str, list[GraphEdge]] = defaultdict(list)
    for edge in graph.edges:
        out_edges[edge.subject].append(edge)

    activations = {source: _clip(injected)}
    levels = {source: 0}
    trace: list[TraceStep] = []
    frontier = [source]

    for hop in range(1, hops + 1):
        if not frontier:
            break
        # Modulation from the previous frontier rescales its targets'
        # outgoing edges before this hop's activation transfer.
        for u in frontier:
            for edge in out_edges[u]:
                if edge.relation is RelationType.MODULATION:
                    factor = 1.0 + activations[u]
                    for downstream in out_edges[edge.object]:
                        effective[id(downstream)] *= factor
                    trace.append(
                        TraceStep(hop, "modulate", u, edge.relation.value, edge.object, factor)
                    )
        incoming: dict[str, float] = defaultdict(float)
        for u in frontier:
            for edge in out_edges[u]:
                if edge.relation is RelationType.MODULATION:
                    continue
                if edge.object in levels:
                    continue
                contribution = (
                    edge.relation.sign
                    * (effective[id(edge)] / max_weight)
                    * attenuation
                    * activations[u]
                )
                incoming[edge.object] += contribution
                trace.append(
                    TraceStep(hop, "propagate", u, edge.relation.value, edge.object, contribution)
                )
        frontier = []
        for node in sorted(incoming):
            activations[node] = _clip(incoming[node])
            levels[node] = hop
            frontier.append(node)

    full_activations = {node: activations.get(node, 0.0) for node in graph.nodes}
    return InterventionResult(
        source=source,
        injected=injected,
        hops=hops,
        attenuation=attenuation,
        activations=full_activations,
        levels=levels,
        trace=trace,
    )


def save_graph_document(graph: StakeholderGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(
        json.dumps(graph.to_document(), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def load_graph_document(path: Union[str, Path]) -> StakeholderGraph:
    return StakeholderGraph.from_document(json.loads(Path(path).read_text(encoding="utf-8")))
