"""Typed directed graph of taxonomies and dark patterns.

Two node roles (taxonomy, pattern) and two edge kinds:

* ``belongs_to`` — taxonomy -> pattern it declares
* ``employs``   — pattern -> pattern it implements/utilizes

All values are immutable snapshots; every mutating operation returns a
new graph and never touches its input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .errors import (
    AlreadyStripped,
    DuplicateEdge,
    DuplicateId,
    DuplicateName,
    EmptyGraph,
    PolicyViolation,
    UnknownNode,
)

BELONGS_TO = "belongs_to"
EMPLOYS = "employs"
EDGE_KINDS = (BELONGS_TO, EMPLOYS)


def slugify(name: str) -> str:
    """Stable slug used as a node id at creation time."""
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    if not slug:
        raise ValueError(f"cannot slugify {name!r}")
    return slug


@dataclass(frozen=True)
class Attribution:
    """Where a pattern name came from: one source taxonomy's naming of it."""

    source_taxonomy: str
    original_name: str
    citation_key: str


@dataclass(frozen=True)
class PatternNode:
    id: str
    canonical_name: str
    aliases: tuple[Attribution, ...]
    definition: str = ""
    tags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.canonical_name:
            raise ValueError("canonical_name must be non-empty")
        if not self.aliases:
            raise ValueError(f"pattern {self.id!r} needs at least one alias")


@dataclass(frozen=True)
class TaxonomyNode:
    id: str
    label: str
    citation_key: str
    domain: str = ""

    def __post_init__(self):
        if not self.label:
            raise ValueError("label must be non-empty")


@dataclass(frozen=True)
class Edge:
    kind: str
    src: str
    dst: str
    rationale: str = ""

    @property
    def id(self) -> str:
        return f"{self.kind}:{self.src}->{self.dst}"

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.kind, self.src, self.dst)


@dataclass(frozen=True)
class TaxonomyGraph:
    patterns: dict = field(default_factory=dict)      # id -> PatternNode
    taxonomies: dict = field(default_factory=dict)    # id -> TaxonomyNode
    edges: tuple = ()                                 # tuple[Edge, ...]
    version: tuple = (1, 0)                           # (major, minor)
    lineage: tuple = ()                               # tuple[str, ...]

    # -- lookups ------------------------------------------------------

    def node(self, node_id: str):
        found = self.patterns.get(node_id) or self.taxonomies.get(node_id)
        if found is None:
            raise UnknownNode(f"unknown node {node_id!r}")
        return found

    def has_node(self, node_id: str) -> bool:
        return node_id in self.patterns or node_id in self.taxonomies

    def node_ids(self) -> list[str]:
        return sorted([*self.patterns, *self.taxonomies])

    def pattern_by_name(self, name: str) -> PatternNode | None:
        wanted = name.casefold()
        for p in self.patterns.values():
            if p.canonical_name.casefold() == wanted:
                return p
        return None

    def employs_neighbors(self, node_id: str) -> frozenset:
        """Undirected neighbor set over employs edges only."""
        out = set()
        for e in self.edges:
            if e.kind != EMPLOYS:
                continue
            if e.src == node_id:
                out.add(e.dst)
            elif e.dst == node_id:
                out.add(e.src)
        return frozenset(out)

    def with_lineage(self, entry: str) -> "TaxonomyGraph":
        return replace(self, lineage=self.lineage + (entry,))


# -- operations ------------------------------------------------------


def add_node(graph: TaxonomyGraph, node) -> TaxonomyGraph:
    if graph.has_node(node.id):
        raise DuplicateId(f"node id {node.id!r} already present")
    if isinstance(node, PatternNode):
        if graph.pattern_by_name(node.canonical_name) is not None:
            raise DuplicateName(
                f"pattern name {node.canonical_name!r} already present"
            )
        patterns = dict(graph.patterns)
        patterns[node.id] = node
        return replace(graph, patterns=patterns)
    if isinstance(node, TaxonomyNode):
        if any(t.label == node.label for t in graph.taxonomies.values()):
            raise DuplicateName(f"taxonomy label {node.label!r} already present")
        taxonomies = dict(graph.taxonomies)
        taxonomies[node.id] = node
        return replace(graph, taxonomies=taxonomies)
    raise TypeError(f"not a node: {node!r}")


def add_edge(
    graph: TaxonomyGraph, kind: str, src: str, dst: str, rationale: str = ""
) -> TaxonomyGraph:
    if kind not in EDGE_KINDS:
        raise PolicyViolation(f"unknown edge kind {kind!r}")
    for endpoint in (src, dst):
        if not graph.has_node(endpoint):
            raise UnknownNode(f"unknown node {endpoint!r}")
    if kind == BELONGS_TO:
        if src not in graph.taxonomies or dst not in graph.patterns:
            raise PolicyViolation(
                f"belongs_to requires taxonomy -> pattern, got {src!r} -> {dst!r}"
            )
    else:
        if src not in graph.patterns or dst not in graph.patterns:
            raise PolicyViolation(
                f"employs requires pattern -> pattern, got {src!r} -> {dst!r}"
            )
        if src == dst:
            raise PolicyViolation(f"employs self-loop on {src!r}")
    edge = Edge(kind=kind, src=src, dst=dst, rationale=rationale)
    if any(e.triple == edge.triple for e in graph.edges):
        raise DuplicateEdge(f"duplicate edge {edge.id}")
    return replace(graph, edges=graph.edges + (edge,))


def in_degree(graph: TaxonomyGraph, node_id: str) -> int:
    if not graph.has_node(node_id):
        raise UnknownNode(f"unknown node {node_id!r}")
    return sum(1 for e in graph.edges if e.dst == node_id)


def prominence_ranking(graph: TaxonomyGraph) -> list[tuple[str, int]]:
    """Pattern nodes by in-degree, descending; ties by name ascending."""
    if not graph.patterns and not graph.taxonomies:
        raise EmptyGraph("cannot rank an empty graph")
    counts = {pid: 0 for pid in graph.patterns}
    for e in graph.edges:
        if e.dst in counts:
            counts[e.dst] += 1
    ranked = sorted(
        counts.items(),
        key=lambda item: (-item[1], graph.patterns[item[0]].canonical_name),
    )
    return ranked


def strip_taxonomy_nodes(graph: TaxonomyGraph) -> TaxonomyGraph:
    """Drop all taxonomy nodes and belongs_to edges; promote to major 3."""
    if graph.version[0] >= 3:
        raise AlreadyStripped(f"graph already at major version {graph.version[0]}")
    edges = tuple(e for e in graph.edges if e.kind == EMPLOYS)
    removed = len(graph.edges) - len(edges)
    stripped = replace(
        graph,
        taxonomies={},
        edges=edges,
        version=(3, 0),
        lineage=graph.lineage
        + (
            f"v3.0: stripped {len(graph.taxonomies)} taxonomy nodes "
            f"and {removed} belongs_to edges",
        ),
    )
    return stripped


def remove_pattern(
    graph: TaxonomyGraph, node_id: str, reason: str = ""
) -> TaxonomyGraph:
    """Remove a pattern node and every edge touching it."""
    if node_id not in graph.patterns:
        raise UnknownNode(f"unknown pattern {node_id!r}")
    patterns = dict(graph.patterns)
    del patterns[node_id]
    edges = tuple(e for e in graph.edges if node_id not in (e.src, e.dst))
    entry = f"removed pattern {node_id!r}" + (f": {reason}" if reason else "")
    return replace(
        graph, patterns=patterns, edges=edges, lineage=graph.lineage + (entry,)
    )


def bump_minor(graph: TaxonomyGraph, entry: str) -> TaxonomyGraph:
    major, minor = graph.version
    return replace(
        graph, version=(major, minor + 1), lineage=graph.lineage + (entry,)
    )


def validate(graph: TaxonomyGraph) -> list[str]:
    """Return a list of invariant violations; empty iff the graph is sound."""
    violations: list[str] = []
    major, _minor = graph.version
    if major < 0 or graph.version[1] < 0:
        violations.append(f"version components negative: {graph.version}")
    if major >= 3:
        if graph.taxonomies:
            violations.append(
                f"major-{major} graph still holds {len(graph.taxonomies)} taxonomy nodes"
            )
        belongs = [e.id for e in graph.edges if e.kind == BELONGS_TO]
        if belongs:
            violations.append(f"major-{major} graph holds belongs_to edges: {belongs}")

    shared = set(graph.patterns) & set(graph.taxonomies)
    for nid in sorted(shared):
        violations.append(f"id {nid!r} used by both a pattern and a taxonomy")

    names = {}
    for p in graph.patterns.values():
        key = p.canonical_name.casefold()
        if key in names:
            violations.append(
                f"pattern name clash: {p.id!r} vs {names[key]!r} on {key!r}"
            )
        names[key] = p.id
        if not p.aliases:
            violations.append(f"pattern {p.id!r} has no aliases")
    labels = {}
    for t in graph.taxonomies.values():
        if t.label in labels:
            violations.append(f"taxonomy label clash: {t.id!r} vs {labels[t.label]!r}")
        labels[t.label] = t.id

    seen_triples = set()
    for e in graph.edges:
        if e.kind not in EDGE_KINDS:
            violations.append(f"edge {e.id} has unknown kind")
            continue
        for endpoint in (e.src, e.dst):
            if not graph.has_node(endpoint):
                violations.append(f"edge {e.id} has dangling endpoint {endpoint!r}")
        if e.triple in seen_triples:
            violations.append(f"duplicate edge {e.id}")
        seen_triples.add(e.triple)
        if e.kind == BELONGS_TO:
            if e.src in graph.patterns or e.dst in graph.taxonomies:
                violations.append(f"edge {e.id} violates belongs_to role policy")
        elif e.kind == EMPLOYS:
            if e.src in graph.taxonomies or e.dst in graph.taxonomies:
                violations.append(f"edge {e.id} violates employs role policy")
            if e.src == e.dst:
                violations.append(f"edge {e.id} is an employs self-loop")
    return violations
