#!/usr/bin/env python3
"""Export the shipped seed corpus to GEXF (optionally with community ids).

Useful for inspecting the graph in Gephi or any GEXF-aware viewer.
"""

import argparse
from pathlib import Path

from dp_toolkit import community as comm
from dp_toolkit import graph as g
from dp_toolkit.corpus import export_graph, load_seed_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path, help="output .gexf path")
    parser.add_argument(
        "--strip", action="store_true",
        help="strip taxonomy nodes before export (pattern-only graph)",
    )
    parser.add_argument(
        "--communities", action="store_true",
        help="annotate nodes with consensus community ids",
    )
    parser.add_argument("--resolution", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    graph = load_seed_corpus()
    if args.strip:
        graph = g.strip_taxonomy_nodes(graph)
    partition = None
    if args.communities:
        consensus = comm.consensus_detect(
            graph, args.resolution, comm.seed_stream(args.seed)
        )
        partition = consensus.selected_partition
        print(
            f"consensus: {partition.community_count} communities, "
            f"Q={partition.modularity:.4f}"
        )
    args.out.write_text(export_graph(graph, "gexf", partition), "utf-8")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
