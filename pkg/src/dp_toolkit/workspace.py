"""Journaled curation workspace: one graph, one journal, one writer.

Reads are served from the latest immutable snapshot; every mutation is
appended to the journal before it is acknowledged, so recovery is
always corpus ingestion + full replay.
"""

from __future__ import annotations

import threading
from pathlib import Path

from . import community as comm
from . import graph as g
from . import heuristics as h
from . import journal as j
from . import merge as m
from .corpus import parse_corpus
from .errors import InvalidTransition, UnknownNode


class Workspace:
    def __init__(
        self,
        base_graph: g.TaxonomyGraph,
        journal: j.Journal,
        state: j.ReplayState,
        rules=None,
    ):
        self._lock = threading.Lock()
        self.base_graph = base_graph
        self.journal = journal
        self.graph = state.graph
        self.candidates = dict(state.candidates)
        self.records = list(state.records)
        self.rejected_pairs = set(state.rejected_pairs)
        self.last_consensus: comm.DetectionConsensus | None = None
        self.rules = rules if rules is not None else h.load_default_rules()

    # -- construction --------------------------------------------------

    @classmethod
    def open(cls, corpus_path: str | Path, journal_path: str | Path, rules=None):
        """Recover state from the corpus plus full journal replay."""
        text = Path(corpus_path).read_text("utf-8")
        base = parse_corpus(text)
        journal = j.Journal(journal_path)
        state = j.replay(base, journal.entries())
        return cls(base, journal, state, rules=rules)

    # -- mutations (single writer) --------------------------------------

    def detect_and_propose(
        self,
        resolution: float = 1.0,
        seed: int = 0,
        threshold: float = m.DEFAULT_THRESHOLD,
    ) -> comm.DetectionConsensus:
        with self._lock:
            consensus = comm.consensus_detect(
                self.graph, resolution, comm.seed_stream(seed)
            )
            self.last_consensus = consensus
            fresh = m.propose_candidates(
                self.graph,
                consensus.selected_partition,
                threshold,
                frozenset(self.rejected_pairs),
            )
            for cand in fresh:
                if cand.id in self.candidates:
                    continue
                self.journal.append(
                    {"type": "propose", "candidate": j.candidate_to_dict(cand)}
                )
                self.candidates[cand.id] = cand
            return consensus

    def verdict(self, candidate_id: str, verdict: str, rationale: str):
        with self._lock:
            cand = self.candidates.get(candidate_id)
            if cand is None:
                raise UnknownNode(f"unknown candidate {candidate_id!r}")
            reviewed = m.review(cand, verdict, rationale)
            self.journal.append(
                {
                    "type": "review",
                    "candidate_id": candidate_id,
                    "verdict": verdict,
                    "rationale": rationale,
                }
            )
            self.candidates[candidate_id] = reviewed
            if reviewed.status == m.REJECTED and reviewed.kind == m.MERGE:
                self.rejected_pairs.add(reviewed.pair)
            return reviewed

    def enact(self, candidate_id: str):
        with self._lock:
            cand = self.candidates.get(candidate_id)
            if cand is None:
                raise UnknownNode(f"unknown candidate {candidate_id!r}")
            new_graph, record, enacted = m.enact(
                self.graph, cand, len(self.records) + 1
            )
            self.journal.append(j.record_to_entry(record))
            self.graph = new_graph
            self.records.append(record)
            self.candidates[candidate_id] = enacted
            return record

    def strip(self):
        with self._lock:
            new_graph = g.strip_taxonomy_nodes(self.graph)
            self.journal.append(
                {"type": "strip", "version_after": list(new_graph.version)}
            )
            self.graph = new_graph
            self.last_consensus = None
            return new_graph

    def remove(self, node_id: str, rationale: str = ""):
        with self._lock:
            new_graph = g.remove_pattern(self.graph, node_id, rationale)
            new_graph = g.bump_minor(new_graph, f"removed {node_id!r}")
            self.journal.append(
                {
                    "type": "remove",
                    "node": node_id,
                    "rationale": rationale,
                    "version_after": list(new_graph.version),
                }
            )
            self.graph = new_graph
            return new_graph

    def propose_human_edge(self, src: str, dst: str, rationale: str):
        with self._lock:
            cand = m.propose_new_edge(self.graph, src, dst, rationale)
            if cand.id in self.candidates and self.candidates[
                cand.id
            ].status != m.REJECTED:
                raise InvalidTransition(f"candidate {cand.id} already open")
            self.journal.append(
                {"type": "propose", "candidate": j.candidate_to_dict(cand)}
            )
            self.candidates[cand.id] = cand
            return cand

    # -- reads -----------------------------------------------------------

    def snapshot(self) -> g.TaxonomyGraph:
        return self.graph

    def pending_candidates(self) -> list[m.ChangeCandidate]:
        return sorted(
            (c for c in self.candidates.values() if c.status == m.PROPOSED),
            key=lambda c: (-c.scores.total, c.id),
        )

    def changelog_text(self) -> str:
        return m.changelog(self.records)

    def audit(self, detected, subject: str = "") -> tuple:
        report = h.evaluate_audit(
            self.rules, detected, subject=subject, graph=self.graph
        )
        manifest = h.emit_glyph_manifest(report, self.rules)
        return report, manifest


def persist_and_recover(
    journal_path: str | Path, corpus_path: str | Path
) -> Workspace:
    """Spec-named entry point: reconstruct a workspace from disk."""
    return Workspace.open(corpus_path, journal_path)


# -- snapshot serialization (shared by service and CLI) -----------------


def graph_to_dict(graph: g.TaxonomyGraph) -> dict:
    return {
        "version": {"major": graph.version[0], "minor": graph.version[1]},
        "lineage": list(graph.lineage),
        "taxonomies": [
            {
                "id": t.id,
                "label": t.label,
                "citation_key": t.citation_key,
                "domain": t.domain,
            }
            for t in sorted(graph.taxonomies.values(), key=lambda t: t.id)
        ],
        "patterns": [
            {
                "id": p.id,
                "name": p.canonical_name,
                "definition": p.definition,
                "tags": sorted(p.tags),
                "in_degree": g.in_degree(graph, p.id),
                "aliases": [
                    {
                        "source_taxonomy": a.source_taxonomy,
                        "original_name": a.original_name,
                        "citation_key": a.citation_key,
                    }
                    for a in p.aliases
                ],
            }
            for p in sorted(graph.patterns.values(), key=lambda p: p.id)
        ],
        "edges": [
            {"kind": e.kind, "src": e.src, "dst": e.dst, "rationale": e.rationale}
            for e in sorted(graph.edges, key=lambda e: e.triple)
        ],
    }


def candidate_view(graph: g.TaxonomyGraph, cand: m.ChangeCandidate) -> dict:
    def node_view(nid):
        p = graph.patterns.get(nid)
        if p is None:
            return {"id": nid, "name": nid, "definition": "", "aliases": []}
        return {
            "id": p.id,
            "name": p.canonical_name,
            "definition": p.definition,
            "aliases": [
                f"{a.original_name} ({a.citation_key})" for a in p.aliases
            ],
        }

    return {
        "id": cand.id,
        "kind": cand.kind,
        "status": cand.status,
        "origin": cand.origin,
        "rationale": cand.rationale,
        "a": node_view(cand.a),
        "b": node_view(cand.b),
        "scores": {
            "name_sim": cand.scores.name_sim,
            "def_sim": cand.scores.def_sim,
            "neighbor_sim": cand.scores.neighbor_sim,
            "same_community": cand.scores.same_community,
            "total": cand.scores.total,
        },
    }


def consensus_view(consensus: comm.DetectionConsensus) -> dict:
    partition = consensus.selected_partition
    return {
        "histogram": {str(k): v for k, v in consensus.histogram.items()},
        "extensions": consensus.extensions,
        "selected_run": consensus.selected,
        "runs": [
            {
                "seed": seed,
                "community_count": p.community_count,
                "modularity": p.modularity,
            }
            for seed, p in consensus.runs
        ],
        "partition": {
            "resolution": partition.resolution,
            "seed": partition.seed,
            "modularity": partition.modularity,
            "community_count": partition.community_count,
            "assignment": dict(sorted(partition.assignment.items())),
        },
    }
