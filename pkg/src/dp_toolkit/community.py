"""Modularity and Fast Unfolding (Louvain) community detection.

Directed edges are symmetrized to a simple undirected graph before any
modularity computation (parallel opposite edges collapse to weight 1).
Randomization enters only through a seeded shuffle of the node-visit
order in the local-move phase, so results are fully reproducible from
(graph, resolution, seed).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .errors import NoEdges, PartitionMismatch, SeedsExhausted
from .graph import TaxonomyGraph


@dataclass(frozen=True)
class Partition:
    resolution: float
    seed: int
    assignment: dict          # node id -> dense community index 0..k-1
    modularity: float
    community_count: int

    def members(self) -> dict:
        out: dict[int, list[str]] = {}
        for node, comm in sorted(self.assignment.items()):
            out.setdefault(comm, []).append(node)
        return out


@dataclass(frozen=True)
class DetectionConsensus:
    runs: tuple            # tuple[(seed, Partition), ...]
    histogram: dict        # community_count -> occurrences
    selected: int          # index into runs
    extensions: int

    @property
    def selected_partition(self) -> Partition:
        return self.runs[self.selected][1]


def symmetrize(graph: TaxonomyGraph) -> tuple[list[str], dict]:
    """All node ids plus an undirected weight-1 adjacency dict."""
    nodes = graph.node_ids()
    adj: dict[str, dict[str, float]] = {n: {} for n in nodes}
    for e in graph.edges:
        if e.src == e.dst:
            continue
        adj[e.src][e.dst] = 1.0
        adj[e.dst][e.src] = 1.0
    return nodes, adj


def _edge_count(adj: dict) -> int:
    return sum(len(nbrs) for nbrs in adj.values()) // 2


def modularity(graph: TaxonomyGraph, assignment: dict, resolution: float = 1.0) -> float:
    """Q = sum over communities of [e_c/m - resolution*(d_c/(2m))^2]."""
    nodes, adj = symmetrize(graph)
    if set(assignment) != set(nodes):
        missing = set(nodes) - set(assignment)
        extra = set(assignment) - set(nodes)
        raise PartitionMismatch(
            f"assignment not total: missing={sorted(missing)} extra={sorted(extra)}"
        )
    m = _edge_count(adj)
    if m == 0:
        raise NoEdges("modularity undefined: graph has no edges")
    intra: dict[int, float] = {}
    degree: dict[int, float] = {}
    for u in nodes:
        c = assignment[u]
        degree[c] = degree.get(c, 0.0) + len(adj[u])
        for v, w in adj[u].items():
            if assignment[v] == c and u < v:
                intra[c] = intra.get(c, 0.0) + w
    q = 0.0
    for c in degree:
        q += intra.get(c, 0.0) / m - resolution * (degree[c] / (2 * m)) ** 2
    return q


# -- Louvain internals ------------------------------------------------


class _Level:
    """Weighted undirected graph with self-loops, over dense int nodes."""

    def __init__(self, adj: dict, loops: dict):
        self.adj = adj                      # node -> {neighbor: weight}
        self.loops = loops                  # node -> self-loop weight
        self.m = sum(
            w for u, nbrs in adj.items() for v, w in nbrs.items() if u < v
        ) + sum(loops.values())
        self.degree = {
            u: sum(adj[u].values()) + 2 * loops.get(u, 0.0) for u in adj
        }


def _one_level(level: _Level, resolution: float, rng: random.Random):
    """Local-move phase. Returns (node -> community label, moved_any)."""
    comm = {u: u for u in level.adj}
    ctot = dict(level.degree)
    m = level.m
    order = sorted(level.adj)
    rng.shuffle(order)
    moved_any = False
    while True:
        moves = 0
        for u in order:
            current = comm[u]
            k_u = level.degree[u]
            links: dict[int, float] = {}
            for v, w in level.adj[u].items():
                links[comm[v]] = links.get(comm[v], 0.0) + w
            ctot[current] -= k_u
            stay_gain = links.get(current, 0.0) / m - resolution * ctot[
                current
            ] * k_u / (2 * m * m)
            best_comm, best_gain = current, stay_gain
            for cand in sorted(links):
                if cand == current:
                    continue
                gain = links[cand] / m - resolution * ctot[cand] * k_u / (
                    2 * m * m
                )
                if gain > best_gain or (gain == best_gain and cand < best_comm):
                    best_comm, best_gain = cand, gain
            comm[u] = best_comm
            ctot[best_comm] += k_u
            if best_comm != current:
                moves += 1
                moved_any = True
        if moves == 0:
            break
    return comm, moved_any


def _aggregate(level: _Level, comm: dict) -> tuple[_Level, dict]:
    """Collapse communities into super-nodes; returns new level + relabel map."""
    labels = sorted(set(comm.values()))
    relabel = {label: i for i, label in enumerate(labels)}
    adj: dict[int, dict[int, float]] = {i: {} for i in range(len(labels))}
    loops = {i: 0.0 for i in range(len(labels))}
    for u, loop_w in level.loops.items():
        loops[relabel[comm[u]]] += loop_w
    for u, nbrs in level.adj.items():
        cu = relabel[comm[u]]
        for v, w in nbrs.items():
            if u < v:
                cv = relabel[comm[v]]
                if cu == cv:
                    loops[cu] += w
                else:
                    adj[cu][cv] = adj[cu].get(cv, 0.0) + w
                    adj[cv][cu] = adj[cv].get(cu, 0.0) + w
    return _Level(adj, loops), relabel


def detect(graph: TaxonomyGraph, resolution: float = 1.0, seed: int = 0) -> Partition:
    """Fast Unfolding: seeded local-move sweeps alternating with aggregation."""
    nodes, raw_adj = symmetrize(graph)
    if _edge_count(raw_adj) == 0:
        raise NoEdges("community detection undefined: graph has no edges")
    index = {n: i for i, n in enumerate(nodes)}
    adj = {
        index[u]: {index[v]: w for v, w in nbrs.items()}
        for u, nbrs in raw_adj.items()
    }
    level = _Level(adj, {u: 0.0 for u in adj})
    membership = {n: index[n] for n in nodes}

    rng = random.Random(seed)
    while True:
        comm, moved = _one_level(level, resolution, rng)
        if not moved:
            break
        level, relabel = _aggregate(level, comm)
        membership = {n: relabel[comm[membership[n]]] for n in nodes}
        if len(level.adj) == 1:
            break

    # dense community indices, ordered by first appearance over sorted ids
    dense: dict[int, int] = {}
    assignment = {}
    for n in nodes:
        label = membership[n]
        if label not in dense:
            dense[label] = len(dense)
        assignment[n] = dense[label]
    q = modularity(graph, assignment, resolution)
    return Partition(
        resolution=resolution,
        seed=seed,
        assignment=assignment,
        modularity=q,
        community_count=len(dense),
    )


def seed_stream(base: int) -> Iterator[int]:
    """Deterministic unbounded seed sequence for consensus runs."""
    return itertools.count(base)


def consensus_detect(
    graph: TaxonomyGraph,
    resolution: float,
    seeds: Iterable[int],
    detect_fn: Callable[..., Partition] = detect,
    initial_runs: int = 5,
    max_extensions: int = 64,
) -> DetectionConsensus:
    """Run detection five times; pick the modal community count.

    Ties extend one run at a time until a single count holds strict
    plurality. Among runs with the winning count, the highest-Q run is
    selected.
    """
    seed_iter = iter(seeds)

    def next_seed() -> int:
        try:
            return next(seed_iter)
        except StopIteration:
            raise SeedsExhausted("seed sequence exhausted during consensus") from None

    runs: list[tuple[int, Partition]] = []
    for _ in range(initial_runs):
        s = next_seed()
        runs.append((s, detect_fn(graph, resolution, s)))

    def histogram() -> dict:
        hist: dict[int, int] = {}
        for _, p in runs:
            hist[p.community_count] = hist.get(p.community_count, 0) + 1
        return hist

    extensions = 0
    hist = histogram()
    while True:
        top = max(hist.values())
        winners = [k for k, v in hist.items() if v == top]
        if len(winners) == 1:
            winning_count = winners[0]
            break
        if extensions >= max_extensions:
            # unresolved after budget: smallest tied count wins deterministically
            winning_count = min(winners)
            break
        s = next_seed()
        runs.append((s, detect_fn(graph, resolution, s)))
        extensions += 1
        hist = histogram()

    selected = max(
        (i for i, (_, p) in enumerate(runs) if p.community_count == winning_count),
        key=lambda i: (runs[i][1].modularity, -i),
    )
    return DetectionConsensus(
        runs=tuple(runs),
        histogram=hist,
        selected=selected,
        extensions=extensions,
    )
