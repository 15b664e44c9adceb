"""Change candidates: proposal scoring, review state machine, enactment.

Candidates are merges of two similar patterns or new employs edges.
Scoring combines token-Jaccard name/definition similarity with
employs-neighborhood overlap: total = 0.4*name + 0.3*def + 0.3*neighbor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from itertools import combinations

from . import graph as g
from .community import Partition
from .errors import (
    EmptyRationale,
    InvalidTransition,
    PartitionMismatch,
    StaleCandidate,
)

PROPOSED = "proposed"
APPROVED = "approved"
REJECTED = "rejected"
ENACTED = "enacted"

MERGE = "merge"
NEW_EDGE = "new_edge"

DEFAULT_THRESHOLD = 0.45
WEIGHTS = (0.4, 0.3, 0.3)  # name, definition, neighborhood


@dataclass(frozen=True)
class Scores:
    name_sim: float
    def_sim: float
    neighbor_sim: float
    same_community: bool

    @property
    def total(self) -> float:
        w_name, w_def, w_nbr = WEIGHTS
        return w_name * self.name_sim + w_def * self.def_sim + w_nbr * self.neighbor_sim


@dataclass(frozen=True)
class ChangeCandidate:
    id: str
    kind: str                  # merge | new_edge
    a: str                     # merge: smaller node id; new_edge: src
    b: str                     # merge: larger node id;  new_edge: dst
    scores: Scores
    status: str = PROPOSED
    rationale: str = ""
    origin: str = "auto"       # auto | human

    @property
    def pair(self) -> tuple[str, str]:
        return (self.a, self.b)


@dataclass(frozen=True)
class MergeRecord:
    ordinal: int
    version_after: tuple
    candidate_id: str
    kind: str
    survivor: str
    absorbed: str | None
    edge_delta: tuple          # (added, removed)
    rationale: str
    citation_keys: tuple = ()


def tokenize(text: str) -> frozenset:
    """Lowercase, split on non-alphanumerics, drop single-char tokens."""
    return frozenset(
        tok for tok in re.split(r"[^a-z0-9]+", text.lower()) if len(tok) > 1
    )


def jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def score_pair(graph: g.TaxonomyGraph, a: str, b: str, same_community: bool) -> Scores:
    pa, pb = graph.patterns[a], graph.patterns[b]
    return Scores(
        name_sim=jaccard(tokenize(pa.canonical_name), tokenize(pb.canonical_name)),
        def_sim=jaccard(tokenize(pa.definition), tokenize(pb.definition)),
        neighbor_sim=jaccard(graph.employs_neighbors(a), graph.employs_neighbors(b)),
        same_community=same_community,
    )


def _merge_candidate_id(a: str, b: str) -> str:
    return f"merge:{a}+{b}"


def propose_candidates(
    graph: g.TaxonomyGraph,
    partition: Partition,
    threshold: float = DEFAULT_THRESHOLD,
    rejected_pairs: frozenset = frozenset(),
) -> list[ChangeCandidate]:
    """Merge candidates for same-community pattern pairs scoring >= threshold."""
    pattern_ids = set(graph.patterns)
    if not pattern_ids <= set(partition.assignment):
        raise PartitionMismatch("partition does not cover the graph's patterns")
    out = []
    for a, b in combinations(sorted(pattern_ids), 2):
        if partition.assignment[a] != partition.assignment[b]:
            continue
        if (a, b) in rejected_pairs:
            continue
        scores = score_pair(graph, a, b, same_community=True)
        if scores.total >= threshold:
            out.append(
                ChangeCandidate(
                    id=_merge_candidate_id(a, b),
                    kind=MERGE,
                    a=a,
                    b=b,
                    scores=scores,
                )
            )
    out.sort(key=lambda c: (-c.scores.total, c.id))
    return out


def propose_new_edge(
    graph: g.TaxonomyGraph, src: str, dst: str, rationale: str = "", origin: str = "human"
) -> ChangeCandidate:
    for endpoint in (src, dst):
        graph.node(endpoint)
    scores = score_pair(graph, src, dst, same_community=False)
    return ChangeCandidate(
        id=f"edge:{src}->{dst}",
        kind=NEW_EDGE,
        a=src,
        b=dst,
        scores=scores,
        rationale=rationale,
        origin=origin,
    )


def review(candidate: ChangeCandidate, verdict: str, rationale: str) -> ChangeCandidate:
    if candidate.status != PROPOSED:
        raise InvalidTransition(
            f"candidate {candidate.id} is {candidate.status}, not proposed"
        )
    if not rationale.strip():
        raise EmptyRationale("review requires a non-empty rationale")
    if verdict not in ("approve", "reject"):
        raise ValueError(f"unknown verdict {verdict!r}")
    status = APPROVED if verdict == "approve" else REJECTED
    return replace(candidate, status=status, rationale=rationale)


def _citation_keys(graph: g.TaxonomyGraph, *node_ids: str) -> tuple:
    keys = []
    for nid in node_ids:
        node = graph.patterns.get(nid)
        if node is not None:
            for alias in node.aliases:
                if alias.citation_key not in keys:
                    keys.append(alias.citation_key)
    return tuple(keys)


def apply_merge(
    graph: g.TaxonomyGraph, survivor_id: str, absorbed_id: str
) -> tuple[g.TaxonomyGraph, int]:
    """Rewire the absorbed node's edges onto the survivor and drop it.

    Returns the new graph and the number of edges removed (duplicates
    and would-be self-loops).
    """
    survivor = graph.patterns[survivor_id]
    absorbed = graph.patterns[absorbed_id]
    merged = replace(
        survivor,
        aliases=survivor.aliases + absorbed.aliases,
        tags=survivor.tags | absorbed.tags,
        definition=survivor.definition or absorbed.definition,
    )
    patterns = dict(graph.patterns)
    patterns[survivor_id] = merged
    del patterns[absorbed_id]

    new_edges = []
    seen = set()
    removed = 0
    for e in graph.edges:
        src = survivor_id if e.src == absorbed_id else e.src
        dst = survivor_id if e.dst == absorbed_id else e.dst
        if e.kind == g.EMPLOYS and src == dst:
            removed += 1
            continue
        triple = (e.kind, src, dst)
        if triple in seen:
            removed += 1
            continue
        seen.add(triple)
        new_edges.append(replace(e, src=src, dst=dst))
    merged_graph = replace(graph, patterns=patterns, edges=tuple(new_edges))
    return merged_graph, removed


def choose_survivor(graph: g.TaxonomyGraph, a: str, b: str) -> tuple[str, str]:
    """Survivor has the higher in-degree; ties go to the smaller name."""
    deg_a, deg_b = g.in_degree(graph, a), g.in_degree(graph, b)
    if deg_a != deg_b:
        return (a, b) if deg_a > deg_b else (b, a)
    name_a = graph.patterns[a].canonical_name
    name_b = graph.patterns[b].canonical_name
    return (a, b) if name_a <= name_b else (b, a)


def enact(
    graph: g.TaxonomyGraph, candidate: ChangeCandidate, ordinal: int
) -> tuple[g.TaxonomyGraph, MergeRecord, ChangeCandidate]:
    if candidate.status != APPROVED:
        raise InvalidTransition(
            f"candidate {candidate.id} is {candidate.status}, not approved"
        )
    if not graph.has_node(candidate.a) or not graph.has_node(candidate.b):
        raise StaleCandidate(
            f"candidate {candidate.id} references a vanished node"
        )
    citations = _citation_keys(graph, candidate.a, candidate.b)
    if candidate.kind == MERGE:
        survivor, absorbed = choose_survivor(graph, candidate.a, candidate.b)
        before = len(graph.edges)
        new_graph, removed = apply_merge(graph, survivor, absorbed)
        new_graph = g.bump_minor(
            new_graph, f"merge {absorbed!r} into {survivor!r}: {candidate.rationale}"
        )
        record = MergeRecord(
            ordinal=ordinal,
            version_after=new_graph.version,
            candidate_id=candidate.id,
            kind=MERGE,
            survivor=survivor,
            absorbed=absorbed,
            edge_delta=(0, removed),
            rationale=candidate.rationale,
            citation_keys=citations,
        )
        assert len(new_graph.edges) == before - removed
    else:
        new_graph = g.add_edge(
            graph, g.EMPLOYS, candidate.a, candidate.b, candidate.rationale
        )
        new_graph = g.bump_minor(
            new_graph,
            f"new employs edge {candidate.a!r} -> {candidate.b!r}: {candidate.rationale}",
        )
        record = MergeRecord(
            ordinal=ordinal,
            version_after=new_graph.version,
            candidate_id=candidate.id,
            kind=NEW_EDGE,
            survivor=candidate.a,
            absorbed=candidate.b,
            edge_delta=(1, 0),
            rationale=candidate.rationale,
            citation_keys=citations,
        )
    return new_graph, record, replace(candidate, status=ENACTED)


def is_saturated(
    graph: g.TaxonomyGraph,
    partition: Partition | None,
    threshold: float = DEFAULT_THRESHOLD,
    pending_approved: int = 0,
    rejected_pairs: frozenset = frozenset(),
) -> bool:
    if pending_approved:
        return False
    if partition is None or not graph.patterns:
        return True
    return not propose_candidates(graph, partition, threshold, rejected_pairs)


def changelog(records) -> str:
    """Human-readable, ordinal-ordered listing of enacted changes."""
    lines = ["# Curation changelog", ""]
    for rec in sorted(records, key=lambda r: r.ordinal):
        major, minor = rec.version_after
        if rec.kind == MERGE:
            head = (
                f"{rec.ordinal}. v{major}.{minor} merge: "
                f"{rec.absorbed} -> {rec.survivor}"
            )
        else:
            head = (
                f"{rec.ordinal}. v{major}.{minor} new edge: "
                f"{rec.survivor} employs {rec.absorbed}"
            )
        lines.append(head)
        if rec.citation_keys:
            lines.append(f"   sources: {', '.join(rec.citation_keys)}")
        lines.append(f"   rationale: {rec.rationale}")
    return "\n".join(lines) + "\n"
