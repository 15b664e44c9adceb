"""Append-only JSON Lines curation journal with full-replay recovery.

One record per line. Appends flush and fsync before returning, so an
acknowledged mutation survives a crash. Recovery = corpus ingestion +
replay of every journal line; a truncated trailing line is discarded
with a warning, a malformed line anywhere else is corruption.

Entry types:

* ``propose``  — a candidate entered review (payload: full candidate)
* ``review``   — verdict on a candidate
* ``merge``    — enacted merge (survivor/absorbed/rationale/version)
* ``new_edge`` — enacted employs edge (src/dst/rationale/version)
* ``strip``    — taxonomy nodes removed, major version 3
* ``remove``   — pattern removed (singleton-community elimination)
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import graph as g
from . import merge as m
from .errors import CorruptJournal


def candidate_to_dict(candidate: m.ChangeCandidate) -> dict:
    return {
        "id": candidate.id,
        "kind": candidate.kind,
        "a": candidate.a,
        "b": candidate.b,
        "scores": {
            "name_sim": candidate.scores.name_sim,
            "def_sim": candidate.scores.def_sim,
            "neighbor_sim": candidate.scores.neighbor_sim,
            "same_community": candidate.scores.same_community,
            "total": candidate.scores.total,
        },
        "status": candidate.status,
        "rationale": candidate.rationale,
        "origin": candidate.origin,
    }


def candidate_from_dict(raw: dict) -> m.ChangeCandidate:
    scores = raw["scores"]
    return m.ChangeCandidate(
        id=raw["id"],
        kind=raw["kind"],
        a=raw["a"],
        b=raw["b"],
        scores=m.Scores(
            name_sim=scores["name_sim"],
            def_sim=scores["def_sim"],
            neighbor_sim=scores["neighbor_sim"],
            same_community=scores["same_community"],
        ),
        status=raw["status"],
        rationale=raw["rationale"],
        origin=raw["origin"],
    )


def record_to_entry(record: m.MergeRecord) -> dict:
    return {
        "type": record.kind,
        "ordinal": record.ordinal,
        "candidate_id": record.candidate_id,
        "survivor": record.survivor,
        "absorbed": record.absorbed,
        "edge_delta": list(record.edge_delta),
        "rationale": record.rationale,
        "version_after": list(record.version_after),
        "citation_keys": list(record.citation_keys),
    }


def record_from_entry(entry: dict) -> m.MergeRecord:
    return m.MergeRecord(
        ordinal=entry["ordinal"],
        version_after=tuple(entry["version_after"]),
        candidate_id=entry["candidate_id"],
        kind=entry["type"],
        survivor=entry["survivor"],
        absorbed=entry["absorbed"],
        edge_delta=tuple(entry["edge_delta"]),
        rationale=entry["rationale"],
        citation_keys=tuple(entry.get("citation_keys", [])),
    )


class Journal:
    """Single-writer append-only journal file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        if not self.path.exists():
            self.path.touch()

    def append(self, entry: dict) -> None:
        line = json.dumps(entry, sort_keys=True, separators=(",", ":"))
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def entries(self) -> list[dict]:
        return read_entries(self.path)


def read_entries(path: str | Path) -> list[dict]:
    """Parse a journal file; prefix-valid files tolerate one truncated tail."""
    raw_lines = Path(path).read_text("utf-8").splitlines()
    entries = []
    for lineno, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        try:
            entries.append(json.loads(line))
        except json.JSONDecodeError as exc:
            if lineno == len(raw_lines):
                warnings.warn(
                    f"discarding truncated trailing journal line {lineno}",
                    stacklevel=2,
                )
                break
            raise CorruptJournal(
                f"malformed journal line {lineno}: {exc.msg}"
            ) from exc
    return entries


@dataclass
class ReplayState:
    """Graph plus candidate bookkeeping reconstructed from a journal."""

    graph: g.TaxonomyGraph
    candidates: dict = field(default_factory=dict)   # id -> ChangeCandidate
    records: list = field(default_factory=list)      # enacted MergeRecords
    rejected_pairs: set = field(default_factory=set)


def replay(base_graph: g.TaxonomyGraph, entries: list[dict]) -> ReplayState:
    """Re-apply journal entries over the ingested corpus graph."""
    state = ReplayState(graph=base_graph)
    for i, entry in enumerate(entries):
        kind = entry.get("type")
        try:
            if kind == "propose":
                cand = candidate_from_dict(entry["candidate"])
                state.candidates[cand.id] = cand
            elif kind == "review":
                cand = state.candidates[entry["candidate_id"]]
                cand = replace(
                    cand,
                    status=(
                        m.APPROVED
                        if entry["verdict"] == "approve"
                        else m.REJECTED
                    ),
                    rationale=entry["rationale"],
                )
                state.candidates[cand.id] = cand
                if cand.status == m.REJECTED and cand.kind == m.MERGE:
                    state.rejected_pairs.add(cand.pair)
            elif kind in (m.MERGE, m.NEW_EDGE):
                record = record_from_entry(entry)
                if kind == m.MERGE:
                    new_graph, _removed = m.apply_merge(
                        state.graph, record.survivor, record.absorbed
                    )
                    state.graph = g.bump_minor(
                        new_graph,
                        f"merge {record.absorbed!r} into {record.survivor!r}: "
                        f"{record.rationale}",
                    )
                else:
                    new_graph = g.add_edge(
                        state.graph,
                        g.EMPLOYS,
                        record.survivor,
                        record.absorbed,
                        record.rationale,
                    )
                    state.graph = g.bump_minor(
                        new_graph,
                        f"new employs edge {record.survivor!r} -> "
                        f"{record.absorbed!r}: {record.rationale}",
                    )
                state.records.append(record)
                cand = state.candidates.get(record.candidate_id)
                if cand is not None:
                    state.candidates[cand.id] = replace(cand, status=m.ENACTED)
            elif kind == "strip":
                state.graph = g.strip_taxonomy_nodes(state.graph)
            elif kind == "remove":
                state.graph = g.remove_pattern(
                    state.graph, entry["node"], entry.get("rationale", "")
                )
                state.graph = g.bump_minor(
                    state.graph, f"removed {entry['node']!r}"
                )
            else:
                raise CorruptJournal(f"journal entry {i + 1}: unknown type {kind!r}")
        except KeyError as exc:
            raise CorruptJournal(
                f"journal entry {i + 1}: missing field {exc}"
            ) from exc
    return state
