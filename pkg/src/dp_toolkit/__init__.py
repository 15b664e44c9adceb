"""Dark-pattern taxonomy integration toolkit.

Builds a versioned directed graph over published dark-pattern
taxonomies, detects pattern communities by modularity optimization with
a five-run modal consensus, supports a human-in-the-loop merge/edge
curation workflow with an append-only journal, and evaluates app audits
against community-derived heuristics with glyph-based hazard labels.
"""

from .community import DetectionConsensus, Partition, consensus_detect, detect, modularity
from .corpus import (
    export_graph,
    import_gexf,
    load_seed_corpus,
    parse_corpus,
    serialize_corpus,
)
from .graph import (
    Attribution,
    Edge,
    PatternNode,
    TaxonomyGraph,
    TaxonomyNode,
    add_edge,
    add_node,
    in_degree,
    prominence_ranking,
    strip_taxonomy_nodes,
    validate,
)
from .heuristics import (
    AuditReport,
    GlyphManifest,
    HeuristicRule,
    emit_glyph_manifest,
    evaluate_audit,
    load_default_rules,
    load_rules,
)
from .merge import (
    ChangeCandidate,
    MergeRecord,
    changelog,
    enact,
    is_saturated,
    propose_candidates,
    review,
)
from .pipeline import eliminate_single_node_communities, run_iteration
from .workspace import Workspace, persist_and_recover

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
