import collections
import itertools

import pytest

from dp_toolkit.graph import (
    Attribution,
    PatternNode,
    TaxonomyGraph,
    TaxonomyNode,
    add_edge,
    add_node,
)


def attribution(key="Test2020"):
    return Attribution(source_taxonomy="test", original_name="x", citation_key=key)


def pattern(name, definition="", node_id=None, keys=("Test2020",)):
    from dp_toolkit.graph import slugify

    return PatternNode(
        id=node_id or slugify(name),
        canonical_name=name,
        aliases=tuple(attribution(k) for k in keys),
        definition=definition,
    )


def taxonomy(key, label=None):
    from dp_toolkit.graph import slugify

    return TaxonomyNode(id=slugify(key), label=label or key, citation_key=key)


def numbered_graph(n, edges, major=3):
    """n pattern nodes n00..n{n-1}, employs edges by index pair."""
    g = TaxonomyGraph(version=(major, 0))
    for i in range(n):
        g = add_node(g, pattern(f"N{i:02d}", node_id=f"n{i:02d}"))
    for a, b in edges:
        g = add_edge(g, "employs", f"n{a:02d}", f"n{b:02d}")
    return g


# -- independent modularity oracle (exhaustive scan, no reuse of the
#    implementation under test) ---------------------------------------


def oracle_modularity(n, edges, part, gamma=1.0):
    und = set(frozenset(e) for e in edges if e[0] != e[1])
    m = len(und)
    assert m > 0
    deg = collections.Counter()
    for e in und:
        a, b = tuple(e)
        deg[a] += 1
        deg[b] += 1
    q = 0.0
    for c in set(part):
        members = {i for i in range(n) if part[i] == c}
        e_c = sum(1 for e in und if e <= members)
        d_c = sum(deg[i] for i in members)
        q += e_c / m - gamma * (d_c / (2 * m)) ** 2
    return q


def brute_force_optimum(n, edges, gamma=1.0):
    """Max modularity over all partitions, via restricted-growth strings."""
    best, best_part = float("-inf"), None
    part = [0] * n

    def rec(i, next_label):
        nonlocal best, best_part
        if i == n:
            q = oracle_modularity(n, edges, part, gamma)
            if q > best:
                best, best_part = q, list(part)
            return
        for c in range(next_label + 1):
            part[i] = c
            rec(i + 1, max(next_label, c + 1))

    rec(0, 0)
    return best, best_part


TWO_TRIANGLES = (6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
TWO_K4_BRIDGE = (
    8,
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
     (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7), (3, 4)],
)
SINGLE_K4 = (4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
PATH_6 = (6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])


@pytest.fixture
def seed_graph():
    from dp_toolkit.corpus import load_seed_corpus

    return load_seed_corpus()


def random_pattern_graph(rng, n_min=4, n_max=14, p_edge=0.35):
    """Random employs-only graph with at least one edge."""
    n = rng.randint(n_min, n_max)
    edges = [
        (a, b)
        for a, b in itertools.permutations(range(n), 2)
        if rng.random() < p_edge / 2
    ]
    if not edges:
        edges = [(0, 1)]
    # drop opposite duplicates sometimes kept: graph layer allows both
    return numbered_graph(n, edges)
