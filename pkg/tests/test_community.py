import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp_toolkit import community as comm
from dp_toolkit.errors import NoEdges, PartitionMismatch, SeedsExhausted

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


def assignment_from(part_list):
    return {f"n{i:02d}": c for i, c in enumerate(part_list)}


class TestModularity:
    def test_single_community_is_zero(self):
        n, edges = TWO_TRIANGLES
        grph = numbered_graph(n, edges)
        q = comm.modularity(grph, assignment_from([0] * n), 1.0)
        assert q == pytest.approx(0.0, abs=1e-12)

    def test_two_triangles_clique_partition(self):
        n, edges = TWO_TRIANGLES
        grph = numbered_graph(n, edges)
        q = comm.modularity(grph, assignment_from([0, 0, 0, 1, 1, 1]), 1.0)
        assert q == pytest.approx(0.3571428571, abs=1e-9)

    def test_two_triangles_singleton_partition(self):
        n, edges = TWO_TRIANGLES
        grph = numbered_graph(n, edges)
        q = comm.modularity(grph, assignment_from(list(range(n))), 1.0)
        assert q == pytest.approx(-34 / 196, abs=1e-12)

    def test_no_edges_raises(self):
        grph = numbered_graph(3, [])
        with pytest.raises(NoEdges):
            comm.modularity(grph, assignment_from([0, 0, 0]))

    def test_partial_assignment_rejected(self):
        n, edges = SINGLE_K4
        grph = numbered_graph(n, edges)
        with pytest.raises(PartitionMismatch):
            comm.modularity(grph, {"n00": 0}, 1.0)

    def test_opposite_parallel_edges_collapse(self):
        one_way = numbered_graph(2, [(0, 1)])
        both_ways = numbered_graph(2, [(0, 1), (1, 0)])
        a = assignment_from([0, 0])
        assert comm.modularity(one_way, a) == comm.modularity(both_ways, a)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 4))
    def test_matches_oracle_on_random_graphs(self, seed, k):
        rng = random.Random(seed)
        grph = random_pattern_graph(rng)
        n = len(grph.patterns)
        part = [rng.randrange(k) for _ in range(n)]
        # densify labels so both sides see the same grouping
        edges = [
            (int(e.src[1:]), int(e.dst[1:])) for e in grph.edges
        ]
        expected = oracle_modularity(n, edges, part)
        got = comm.modularity(grph, assignment_from(part))
        assert got == pytest.approx(expected, abs=1e-12)


class TestDetect:
    def test_two_cliques_found_exactly(self):
        n, edges = TWO_K4_BRIDGE
        grph = numbered_graph(n, edges)
        part = comm.detect(grph, 1.0, seed=7)
        a = part.assignment
        assert part.community_count == 2
        assert len({a[f"n{i:02d}"] for i in range(4)}) == 1
        assert len({a[f"n{i:02d}"] for i in range(4, 8)}) == 1
        assert a["n00"] != a["n04"]

    def test_single_clique_stays_whole(self):
        n, edges = SINGLE_K4
        grph = numbered_graph(n, edges)
        part = comm.detect(grph, 1.0, seed=3)
        assert part.community_count == 1
        assert part.modularity == pytest.approx(0.0, abs=1e-12)

    def test_deterministic_for_fixed_seed(self):
        n, edges = TWO_TRIANGLES
        grph = numbered_graph(n, edges)
        p1 = comm.detect(grph, 1.0, seed=11)
        p2 = comm.detect(grph, 1.0, seed=11)
        assert p1 == p2

    def test_never_below_singleton_q(self):
        for seed in range(8):
            rng = random.Random(seed * 991)
            grph = random_pattern_graph(rng)
            n = len(grph.patterns)
            singleton_q = comm.modularity(
                grph, assignment_from(list(range(n)))
            )
            part = comm.detect(grph, 1.0, seed=seed)
            assert part.modularity >= singleton_q - 1e-12

    def test_dense_community_indices(self):
        n, edges = TWO_K4_BRIDGE
        part = comm.detect(numbered_graph(n, edges), 1.0, seed=0)
        assert set(part.assignment.values()) == set(range(part.community_count))

    def test_declaration_order_does_not_change_q(self):
        n, edges = TWO_TRIANGLES
        grph1 = numbered_graph(n, edges)
        grph2 = numbered_graph(n, list(reversed(edges)))
        assert (
            comm.detect(grph1, 1.0, 5).modularity
            == comm.detect(grph2, 1.0, 5).modularity
        )

    def test_no_edges_raises(self):
        with pytest.raises(NoEdges):
            comm.detect(numbered_graph(3, []), 1.0, 0)

    @pytest.mark.parametrize(
        "fixture,seed",
        [(TWO_K4_BRIDGE, 0), (SINGLE_K4, 0), (PATH_6, 1), (TWO_TRIANGLES, 0)],
    )
    def test_matches_brute_force_optimum(self, fixture, seed):
        n, edges = fixture
        optimum, _ = brute_force_optimum(n, edges)
        part = comm.detect(numbered_graph(n, edges), 1.0, seed=seed)
        assert part.modularity == pytest.approx(optimum, abs=1e-12)


def stub_detect_factory(counts):
    """detect_fn stand-in emitting fixed community counts in order."""
    calls = iter(enumerate(counts))

    def stub(graph, resolution, seed):
        i, k = next(calls)
        return comm.Partition(
            resolution=resolution,
            seed=seed,
            assignment={},
            modularity=float(i),  # later runs get higher Q
            community_count=k,
        )

    return stub


class TestConsensus:
    def test_modal_selection_without_tie(self):
        grph = numbered_graph(*TWO_TRIANGLES)
        consensus = comm.consensus_detect(
            grph, 1.0, comm.seed_stream(0),
            detect_fn=stub_detect_factory([10, 10, 10, 9, 11]),
        )
        assert consensus.histogram == {10: 3, 9: 1, 11: 1}
        assert consensus.extensions == 0
        assert consensus.selected_partition.community_count == 10

    def test_tie_extends_until_strict_plurality(self):
        grph = numbered_graph(*TWO_TRIANGLES)
        consensus = comm.consensus_detect(
            grph, 1.0, comm.seed_stream(0),
            detect_fn=stub_detect_factory([10, 10, 9, 9, 8, 9]),
        )
        assert consensus.extensions == 1
        assert consensus.histogram == {10: 2, 9: 3, 8: 1}
        assert consensus.selected_partition.community_count == 9

    def test_selects_max_q_among_winning_count(self):
        grph = numbered_graph(*TWO_TRIANGLES)
        consensus = comm.consensus_detect(
            grph, 1.0, comm.seed_stream(0),
            detect_fn=stub_detect_factory([7, 7, 7, 7, 7]),
        )
        # stub assigns increasing Q by run index, so the last run wins
        assert consensus.selected == 4
        assert consensus.extensions == 0

    def test_real_runs_are_deterministic(self):
        grph = numbered_graph(*TWO_K4_BRIDGE)
        c1 = comm.consensus_detect(grph, 1.0, comm.seed_stream(123))
        c2 = comm.consensus_detect(grph, 1.0, comm.seed_stream(123))
        assert c1 == c2

    def test_exhausted_seed_sequence(self):
        grph = numbered_graph(*TWO_TRIANGLES)
        with pytest.raises(SeedsExhausted):
            comm.consensus_detect(grph, 1.0, iter([1, 2, 3]))
