"""Acceptance suite.

Each test covers one acceptance criterion and prints exactly one
``[PASS]``/``[FAIL]`` line (visible even under output capture).
"""

import json
import random
import time
from contextlib import contextmanager
from importlib import resources

import pytest

from dp_toolkit import community as comm
from dp_toolkit import corpus as cio
from dp_toolkit import graph as g
from dp_toolkit import heuristics as h
from dp_toolkit import journal as j
from dp_toolkit import merge as m
from dp_toolkit.workspace import Workspace, persist_and_recover

from conftest import (
    PATH_6,
    SINGLE_K4,
    TWO_K4_BRIDGE,
    TWO_TRIANGLES,
    brute_force_optimum,
    numbered_graph,
    oracle_modularity,
    random_pattern_graph,
)


@contextmanager
def criterion(capsys, label):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"[FAIL] {label}")
        raise
    with capsys.disabled():
        print(f"[PASS] {label}")


def seed_corpus_text() -> str:
    return (
        resources.files("dp_toolkit") / "data" / "seed.dpcorpus.json"
    ).read_text("utf-8")


def test_p1_modularity_zero_law(capsys):
    with criterion(capsys, "P1 modularity zero-law (25 random graphs, <1s)"):
        start = time.perf_counter()
        for trial in range(25):
            rng = random.Random(trial * 7919 + 13)
            grph = random_pattern_graph(rng, n_min=2, n_max=30)
            ids = sorted(grph.patterns)
            single = {nid: 0 for nid in ids}
            assert comm.modularity(grph, single) == pytest.approx(0.0, abs=1e-12)
            singleton = {nid: i for i, nid in enumerate(ids)}
            assert comm.modularity(grph, singleton) < 0
        assert time.perf_counter() - start < 1.0


def test_p2_two_triangle_fixture(capsys):
    with criterion(capsys, "P2 two-triangle fixture (Q=0.3571428571±1e-9, <1s)"):
        start = time.perf_counter()
        n, edges = TWO_TRIANGLES
        grph = numbered_graph(n, edges)
        clique = {f"n{i:02d}": (0 if i < 3 else 1) for i in range(n)}
        assert comm.modularity(grph, clique, 1.0) == pytest.approx(
            0.3571428571, abs=1e-9
        )
        part = comm.detect(grph, 1.0, seed=0)
        groups = {frozenset(ms) for ms in part.members().values()}
        assert groups == {
            frozenset({"n00", "n01", "n02"}),
            frozenset({"n03", "n04", "n05"}),
        }
        assert time.perf_counter() - start < 1.0


def test_p3_brute_force_equivalence(capsys):
    with criterion(capsys, "P3 brute-force optimum equivalence (<30s)"):
        start = time.perf_counter()
        # path-of-6 has local optima; seed 1 is a pinned seed whose
        # local-move order reaches the global optimum
        for (n, edges), seed in [
            (TWO_K4_BRIDGE, 0),
            (SINGLE_K4, 0),
            (PATH_6, 1),
            (TWO_TRIANGLES, 0),
        ]:
            optimum, _ = brute_force_optimum(n, edges)
            part = comm.detect(numbered_graph(n, edges), 1.0, seed=seed)
            assert part.modularity == pytest.approx(optimum, abs=1e-12)
        assert time.perf_counter() - start < 30.0


def stub_detect_factory(counts):
    calls = iter(enumerate(counts))

    def stub(graph, resolution, seed):
        i, k = next(calls)
        return comm.Partition(resolution, seed, {}, float(i), k)

    return stub


def test_p4_determinism_and_consensus(capsys):
    with criterion(capsys, "P4 determinism + modal consensus selection"):
        grph = numbered_graph(*TWO_K4_BRIDGE)
        assert comm.detect(grph, 1.0, 42) == comm.detect(grph, 1.0, 42)
        assert comm.consensus_detect(
            grph, 1.0, comm.seed_stream(7)
        ) == comm.consensus_detect(grph, 1.0, comm.seed_stream(7))

        plain = comm.consensus_detect(
            grph, 1.0, comm.seed_stream(0),
            detect_fn=stub_detect_factory([10, 10, 10, 9, 11]),
        )
        assert plain.selected_partition.community_count == 10
        assert plain.extensions == 0

        tied = comm.consensus_detect(
            grph, 1.0, comm.seed_stream(0),
            detect_fn=stub_detect_factory([10, 10, 9, 9, 8, 9]),
        )
        assert tied.extensions == 1
        assert tied.selected_partition.community_count == 9


def test_p5_seed_corpus_prominence(capsys):
    with criterion(capsys, "P5 seed-corpus prominence ranking"):
        text = seed_corpus_text()
        grph = g.strip_taxonomy_nodes(cio.parse_corpus(text))
        ranking = g.prominence_ranking(grph)
        top_id, top_count = ranking[0]
        assert grph.patterns[top_id].canonical_name == "Information Hiding"
        # independent recount straight off the corpus file's edge records
        doc = json.loads(text)
        recount = sum(
            1
            for e in doc["edges"]
            if e["kind"] == "employs" and e["dst"] == "Information Hiding"
        )
        assert top_count == recount
        assert all(count <= top_count for _, count in ranking)


def test_p6_merge_properties_and_replay(capsys, tmp_path):
    with criterion(capsys, "P6 merge laws (200 random merges) + byte-exact replay"):
        for trial in range(200):
            rng = random.Random(trial * 104729 + 7)
            grph = random_pattern_graph(rng, n_min=5, n_max=14)
            a, b = rng.sample(sorted(grph.patterns), 2)
            expected_ext = {
                (nbr, "in" if e.dst in (a, b) else "out")
                for e in grph.edges
                for nbr in [e.src if e.dst in (a, b) else e.dst]
                if (e.src in (a, b)) != (e.dst in (a, b)) and nbr not in (a, b)
            }
            cand = m.ChangeCandidate(
                id=f"merge:{min(a,b)}+{max(a,b)}", kind=m.MERGE,
                a=min(a, b), b=max(a, b),
                scores=m.score_pair(grph, a, b, True),
                status=m.APPROVED, rationale="property trial",
            )
            merged, record, _ = m.enact(grph, cand, 1)
            s = record.survivor
            got_ext = {
                (e.src if e.dst == s else e.dst, "in" if e.dst == s else "out")
                for e in merged.edges
                if s in (e.src, e.dst)
            }
            assert got_ext == expected_ext
            assert all(e.src != e.dst for e in merged.edges)
            assert len({e.triple for e in merged.edges}) == len(merged.edges)
            assert len(merged.patterns) == len(grph.patterns) - 1
            assert g.validate(merged) == []

        # journal replay from the v1.0 corpus reproduces live bytes
        corpus_path = tmp_path / "corpus.dpcorpus.json"
        corpus_path.write_text(seed_corpus_text(), "utf-8")
        ws = Workspace.open(corpus_path, tmp_path / "journal.jsonl")
        assert ws.graph.version == (1, 0)
        ws.strip()
        ws.detect_and_propose(1.0, 0, 0.45)
        for cand in list(ws.pending_candidates()):
            ws.verdict(cand.id, "approve", "acceptance replay trial")
            ws.enact(cand.id)
        recovered = persist_and_recover(tmp_path / "journal.jsonl", corpus_path)
        assert cio.canonical_serialize(recovered.graph) == cio.canonical_serialize(
            ws.graph
        )


def test_p7_gexf_round_trip(capsys):
    with criterion(capsys, "P7 seed corpus GEXF round-trip"):
        grph = cio.parse_corpus(seed_corpus_text())
        back = cio.import_gexf(cio.export_graph(grph, "gexf"))
        names = lambda gr: (
            {p.canonical_name for p in gr.patterns.values()},
            {t.label for t in gr.taxonomies.values()},
        )
        assert names(back) == names(grph)
        assert {e.triple for e in back.edges} == {e.triple for e in grph.edges}
        assert back.version == grph.version


def test_p8_audit_path(capsys):
    with criterion(capsys, "P8 audit path (glyph manifest)"):
        rules = h.load_default_rules()
        report = h.evaluate_audit(rules, {"Intermediate Currency"})
        assert [rid for rid, _ in report.violations] == ["value-communication"]
        manifest = h.emit_glyph_manifest(report, rules)
        assert [code for code, _, _ in manifest.entries] == ["intermediate-currency"]

        empty = h.evaluate_audit(rules, set())
        assert h.emit_glyph_manifest(empty, rules).entries == ()


def test_p9_service_recovery_prefixes(capsys, tmp_path):
    with criterion(capsys, "P9 recovery from every journal prefix"):
        corpus_path = tmp_path / "corpus.dpcorpus.json"
        corpus_path.write_text(seed_corpus_text(), "utf-8")
        journal_path = tmp_path / "journal.jsonl"
        ws = Workspace.open(corpus_path, journal_path)

        # build a 10-entry journal through the live write path
        ws.strip()                                      # 1
        ws.detect_and_propose(1.0, 0, 0.45)             # 2 (one proposal)
        (cand,) = ws.pending_candidates()
        ws.verdict(cand.id, "approve", "same pattern")  # 3
        ws.enact(cand.id)                               # 4

        def free_pair():
            taken = {(e.src, e.dst) for e in ws.graph.edges}
            ids = sorted(ws.graph.patterns)
            for a in ids:
                for b in ids:
                    if a != b and (a, b) not in taken:
                        open_ids = {
                            c.a + c.b for c in ws.candidates.values()
                        }
                        if a + b not in open_ids:
                            return a, b
            raise AssertionError("graph unexpectedly complete")

        a, b = free_pair()
        edge_cand = ws.propose_human_edge(a, b, "curator-added relation")  # 5
        ws.verdict(edge_cand.id, "approve", "supported by both catalogues")  # 6
        ws.enact(edge_cand.id)                          # 7
        a2, b2 = free_pair()
        edge_cand2 = ws.propose_human_edge(a2, b2, "speculative relation")  # 8
        ws.verdict(edge_cand2.id, "reject", "no evidence")  # 9
        ws.remove("cuteness", "out of scope for curation")  # 10

        entries = ws.journal.entries()
        assert len(entries) == 10
        base = cio.parse_corpus(seed_corpus_text())

        for k in range(len(entries) + 1):
            prefix_path = tmp_path / f"prefix_{k:02d}.jsonl"
            with prefix_path.open("w", encoding="utf-8") as fh:
                for entry in entries[:k]:
                    fh.write(json.dumps(entry) + "\n")
            recovered = persist_and_recover(prefix_path, corpus_path)
            assert g.validate(recovered.graph) == []
            expected = j.replay(base, entries[:k])
            assert cio.canonical_serialize(recovered.graph) == (
                cio.canonical_serialize(expected.graph)
            )
            assert recovered.rejected_pairs == expected.rejected_pairs
            assert len(recovered.records) == len(expected.records)
