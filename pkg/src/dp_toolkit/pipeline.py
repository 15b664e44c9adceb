"""Iterative construction/reduction loop over detection, review, enactment."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import community as comm
from . import graph as g
from . import merge as m
from .errors import MissingDecision, UnknownNode


@dataclass(frozen=True)
class IterationReport:
    consensus: comm.DetectionConsensus
    candidates: tuple          # all candidates proposed this iteration
    enacted: tuple             # MergeRecords enacted this iteration
    saturated: bool
    graph: g.TaxonomyGraph


@dataclass
class Decision:
    """Singleton-community resolution: integrate, merge_with, or remove."""

    action: str                          # integrate | merge_with | remove
    target: str | None = None            # community index or node id
    rationale: str = ""


ReviewFn = Callable[[m.ChangeCandidate], tuple[str, str] | None]


def run_iteration(
    graph: g.TaxonomyGraph,
    resolution: float,
    seeds: Iterable[int],
    threshold: float,
    review_fn: ReviewFn,
    rejected_pairs: frozenset = frozenset(),
    next_ordinal: int = 1,
    on_event: Callable[[str, object], None] | None = None,
) -> IterationReport:
    """One loop turn: detect -> propose -> review -> enact approved.

    ``review_fn`` supplies the human verdict per candidate as
    (verdict, rationale), or None to leave it pending. ``on_event``
    receives ("propose"|"review"|"enact", payload) for journaling.
    """
    violations = g.validate(graph)
    if violations:
        raise ValueError(f"graph fails validation: {violations}")

    def emit(kind, payload):
        if on_event is not None:
            on_event(kind, payload)

    consensus = comm.consensus_detect(graph, resolution, seeds)
    partition = consensus.selected_partition
    candidates = m.propose_candidates(graph, partition, threshold, rejected_pairs)
    for cand in candidates:
        emit("propose", cand)

    reviewed = []
    for cand in candidates:
        verdict = review_fn(cand)
        if verdict is None:
            reviewed.append(cand)
            continue
        decision, rationale = verdict
        cand = m.review(cand, decision, rationale)
        emit("review", cand)
        reviewed.append(cand)

    enacted = []
    current = graph
    ordinal = next_ordinal
    final = []
    for cand in reviewed:
        if cand.status != m.APPROVED:
            final.append(cand)
            continue
        if not current.has_node(cand.a) or not current.has_node(cand.b):
            final.append(cand)  # stale: endpoint absorbed earlier this batch
            continue
        current, record, cand = m.enact(current, cand, ordinal)
        emit("enact", record)
        enacted.append(record)
        final.append(cand)
        ordinal += 1

    rejected_now = frozenset(
        c.pair for c in final if c.status == m.REJECTED and c.kind == m.MERGE
    )
    saturated = m.is_saturated(
        current,
        partition if set(current.patterns) <= set(partition.assignment) else None,
        threshold,
        pending_approved=sum(1 for c in final if c.status == m.APPROVED),
        rejected_pairs=rejected_pairs | rejected_now,
    )
    return IterationReport(
        consensus=consensus,
        candidates=tuple(final),
        enacted=tuple(enacted),
        saturated=saturated,
        graph=current,
    )


def singleton_nodes(partition: comm.Partition) -> list[str]:
    sizes: dict[int, int] = {}
    for node, c in partition.assignment.items():
        sizes[c] = sizes.get(c, 0) + 1
    return sorted(
        node for node, c in partition.assignment.items() if sizes[c] == 1
    )


def community_main_pattern(graph: g.TaxonomyGraph, partition: comm.Partition, index: int) -> str:
    """The community's max-in-degree pattern; ties to the smaller name."""
    members = [
        nid
        for nid, c in partition.assignment.items()
        if c == index and nid in graph.patterns
    ]
    if not members:
        raise UnknownNode(f"community {index} has no pattern members")
    return min(
        members,
        key=lambda nid: (-g.in_degree(graph, nid), graph.patterns[nid].canonical_name),
    )


def eliminate_single_node_communities(
    graph: g.TaxonomyGraph,
    partition: comm.Partition,
    decisions: dict,
    next_ordinal: int = 1,
    on_event: Callable[[str, object], None] | None = None,
) -> g.TaxonomyGraph:
    """Resolve every singleton community per its decision.

    ``decisions`` maps node id -> Decision. integrate: human-origin
    employs edge toward the target community's main pattern; merge_with:
    standard merge semantics; remove: drop the node (journaled).
    """
    singles = [n for n in singleton_nodes(partition) if n in graph.patterns]
    missing = [n for n in singles if n not in decisions]
    if missing:
        raise MissingDecision(f"no decision for singleton nodes: {missing}")

    def emit(kind, payload):
        if on_event is not None:
            on_event(kind, payload)

    current = graph
    ordinal = next_ordinal
    for node in singles:
        decision = decisions[node]
        if not current.has_node(node):
            continue  # already absorbed by an earlier decision
        if decision.action == "remove":
            current = g.remove_pattern(current, node, decision.rationale)
            current = g.bump_minor(current, f"removed {node!r}")
            emit(
                "remove",
                {
                    "type": "remove",
                    "node": node,
                    "rationale": decision.rationale,
                    "version_after": list(current.version),
                },
            )
        elif decision.action == "merge_with":
            if decision.target is None or not current.has_node(decision.target):
                raise UnknownNode(
                    f"merge target {decision.target!r} for {node!r} not found"
                )
            cand = m.ChangeCandidate(
                id=f"merge:{min(node, decision.target)}+{max(node, decision.target)}",
                kind=m.MERGE,
                a=min(node, decision.target),
                b=max(node, decision.target),
                scores=m.score_pair(current, node, decision.target, False),
                status=m.APPROVED,
                rationale=decision.rationale or "singleton elimination",
                origin="human",
            )
            current, record, _ = m.enact(current, cand, ordinal)
            emit("enact", record)
            ordinal += 1
        elif decision.action == "integrate":
            main = community_main_pattern(current, partition, int(decision.target))
            cand = m.propose_new_edge(
                current,
                node,
                main,
                rationale=decision.rationale or "singleton integration",
            )
            cand = m.review(cand, "approve", cand.rationale)
            current, record, _ = m.enact(current, cand, ordinal)
            emit("enact", record)
            ordinal += 1
        else:
            raise ValueError(f"unknown decision action {decision.action!r}")
    return current
