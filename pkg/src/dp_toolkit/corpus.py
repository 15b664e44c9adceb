"""Corpus parsing/serialization and interchange exports (GEXF, DOT).

Corpus documents are UTF-8 JSON (extension ``.dpcorpus.json``) with three
top-level lists: ``taxonomies``, ``patterns``, ``edges``. Taxonomies are
referenced by citation key, patterns by canonical name.
"""

from __future__ import annotations

import json
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from importlib import resources

from . import graph as g
from .errors import CorpusSyntaxError, UnknownReference

SUPPORTED_SCHEMA_VERSIONS = (1,)

GEXF_NS = "http://www.gexf.net/1.2draft"


@dataclass(frozen=True)
class CorpusDocument:
    schema_version: int
    taxonomies: tuple
    patterns: tuple
    edges: tuple


def _require(mapping, key, context):
    if key not in mapping:
        raise CorpusSyntaxError(f"{context}: missing required field {key!r}")
    return mapping[key]


def load_document(text: str) -> CorpusDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusSyntaxError(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise CorpusSyntaxError("corpus document must be a JSON object")
    version = raw.get("schema_version", 1)
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise CorpusSyntaxError(f"unsupported schema_version {version}")
    return CorpusDocument(
        schema_version=version,
        taxonomies=tuple(raw.get("taxonomies", [])),
        patterns=tuple(raw.get("patterns", [])),
        edges=tuple(raw.get("edges", [])),
    )


def parse_corpus(text: str) -> g.TaxonomyGraph:
    """Build a version-1.0 graph from a corpus document."""
    doc = load_document(text)
    graph = g.TaxonomyGraph(version=(1, 0), lineage=("v1.0: corpus ingestion",))

    key_to_id = {}
    for i, decl in enumerate(doc.taxonomies):
        key = _require(decl, "citation_key", f"taxonomies[{i}]")
        name = _require(decl, "name", f"taxonomies[{i}]")
        node = g.TaxonomyNode(
            id=g.slugify(key),
            label=name,
            citation_key=key,
            domain=decl.get("domain", ""),
        )
        graph = g.add_node(graph, node)
        key_to_id[key] = node.id

    name_to_id = {}
    for i, decl in enumerate(doc.patterns):
        name = _require(decl, "name", f"patterns[{i}]")
        aliases = []
        for alias in _require(decl, "aliases", f"patterns[{i}]"):
            key = _require(alias, "citation_key", f"patterns[{i}].aliases")
            if key not in key_to_id:
                raise UnknownReference(
                    f"pattern {name!r} cites undeclared taxonomy {key!r}"
                )
            aliases.append(
                g.Attribution(
                    source_taxonomy=key_to_id[key],
                    original_name=alias.get("original_name", name),
                    citation_key=key,
                )
            )
        node = g.PatternNode(
            id=g.slugify(name),
            canonical_name=name,
            aliases=tuple(aliases),
            definition=decl.get("definition", ""),
            tags=frozenset(decl.get("tags", [])),
        )
        graph = g.add_node(graph, node)
        name_to_id[name] = node.id

    for i, decl in enumerate(doc.edges):
        kind = _require(decl, "kind", f"edges[{i}]")
        src_name = _require(decl, "src", f"edges[{i}]")
        dst_name = _require(decl, "dst", f"edges[{i}]")
        if kind == g.BELONGS_TO:
            if src_name not in key_to_id:
                raise UnknownReference(
                    f"edges[{i}] references undeclared taxonomy {src_name!r}"
                )
            src = key_to_id[src_name]
        else:
            if src_name not in name_to_id:
                raise UnknownReference(
                    f"edges[{i}] references undeclared pattern {src_name!r}"
                )
            src = name_to_id[src_name]
        if dst_name not in name_to_id:
            raise UnknownReference(
                f"edges[{i}] references undeclared pattern {dst_name!r}"
            )
        graph = g.add_edge(graph, kind, src, name_to_id[dst_name], decl.get("rationale", ""))

    return graph


def serialize_corpus(graph: g.TaxonomyGraph) -> str:
    """Inverse of parse_corpus, up to declaration order (sorted here)."""
    taxonomies = [
        {"name": t.label, "citation_key": t.citation_key, "domain": t.domain}
        for t in sorted(graph.taxonomies.values(), key=lambda t: t.id)
    ]
    patterns = [
        {
            "name": p.canonical_name,
            "definition": p.definition,
            "tags": sorted(p.tags),
            "aliases": [
                {"citation_key": a.citation_key, "original_name": a.original_name}
                for a in p.aliases
            ],
        }
        for p in sorted(graph.patterns.values(), key=lambda p: p.id)
    ]
    id_to_ref = {t.id: t.citation_key for t in graph.taxonomies.values()}
    id_to_ref.update({p.id: p.canonical_name for p in graph.patterns.values()})
    edges = [
        {
            "kind": e.kind,
            "src": id_to_ref[e.src],
            "dst": id_to_ref[e.dst],
            "rationale": e.rationale,
        }
        for e in sorted(graph.edges, key=lambda e: e.triple)
    ]
    return json.dumps(
        {
            "schema_version": 1,
            "taxonomies": taxonomies,
            "patterns": patterns,
            "edges": edges,
        },
        indent=2,
    ) + "\n"


def canonical_serialize(graph: g.TaxonomyGraph) -> bytes:
    """Order-independent byte form of a graph's content and version.

    Lineage strings are excluded: they narrate history, not content.
    """
    doc = {
        "version": list(graph.version),
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
                "aliases": [
                    [a.source_taxonomy, a.original_name, a.citation_key]
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
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def load_seed_corpus() -> g.TaxonomyGraph:
    text = (
        resources.files("dp_toolkit.data")
        .joinpath("seed.dpcorpus.json")
        .read_text("utf-8")
    )
    return parse_corpus(text)


# -- GEXF / DOT ------------------------------------------------------


def export_graph(graph: g.TaxonomyGraph, format: str, partition=None) -> str:
    if format.lower() == "gexf":
        return _export_gexf(graph, partition)
    if format.lower() == "dot":
        return _export_dot(graph)
    raise ValueError(f"unsupported export format {format!r}")


_NODE_ATTRS = [
    ("0", "role", "string"),
    ("1", "canonical_name", "string"),
    ("2", "in_degree", "integer"),
    ("3", "community", "integer"),
    ("4", "definition", "string"),
    ("5", "aliases", "string"),
    ("6", "citation_key", "string"),
    ("7", "domain", "string"),
]


def _export_gexf(graph: g.TaxonomyGraph, partition=None) -> str:
    assignment = partition.assignment if partition is not None else {}
    root = ET.Element("gexf", xmlns=GEXF_NS, version="1.2")
    meta = ET.SubElement(root, "meta")
    ET.SubElement(meta, "creator").text = "dp-toolkit"
    ET.SubElement(meta, "description").text = (
        f"version={graph.version[0]}.{graph.version[1]}"
    )
    graph_el = ET.SubElement(root, "graph", defaultedgetype="directed")
    node_attrs = ET.SubElement(graph_el, "attributes", attrib={"class": "node"})
    for attr_id, title, attr_type in _NODE_ATTRS:
        ET.SubElement(
            node_attrs, "attribute", id=attr_id, title=title, type=attr_type
        )
    edge_attrs = ET.SubElement(graph_el, "attributes", attrib={"class": "edge"})
    ET.SubElement(edge_attrs, "attribute", id="e0", title="kind", type="string")
    ET.SubElement(edge_attrs, "attribute", id="e1", title="rationale", type="string")

    nodes_el = ET.SubElement(graph_el, "nodes")

    def attvalue(parent, attr_id, value):
        ET.SubElement(parent, "attvalue", attrib={"for": attr_id, "value": str(value)})

    for t in sorted(graph.taxonomies.values(), key=lambda t: t.id):
        el = ET.SubElement(nodes_el, "node", id=t.id, label=t.label)
        values = ET.SubElement(el, "attvalues")
        attvalue(values, "0", "taxonomy")
        attvalue(values, "1", t.label)
        attvalue(values, "2", g.in_degree(graph, t.id))
        if t.id in assignment:
            attvalue(values, "3", assignment[t.id])
        attvalue(values, "6", t.citation_key)
        attvalue(values, "7", t.domain)
    for p in sorted(graph.patterns.values(), key=lambda p: p.id):
        el = ET.SubElement(nodes_el, "node", id=p.id, label=p.canonical_name)
        values = ET.SubElement(el, "attvalues")
        attvalue(values, "0", "pattern")
        attvalue(values, "1", p.canonical_name)
        attvalue(values, "2", g.in_degree(graph, p.id))
        if p.id in assignment:
            attvalue(values, "3", assignment[p.id])
        attvalue(values, "4", p.definition)
        aliases = [
            {
                "source_taxonomy": a.source_taxonomy,
                "original_name": a.original_name,
                "citation_key": a.citation_key,
            }
            for a in p.aliases
        ]
        attvalue(values, "5", json.dumps(aliases))

    edges_el = ET.SubElement(graph_el, "edges")
    for i, e in enumerate(sorted(graph.edges, key=lambda e: e.triple)):
        el = ET.SubElement(
            edges_el, "edge", id=str(i), source=e.src, target=e.dst
        )
        values = ET.SubElement(el, "attvalues")
        ET.SubElement(values, "attvalue", attrib={"for": "e0", "value": e.kind})
        ET.SubElement(values, "attvalue", attrib={"for": "e1", "value": e.rationale})

    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def import_gexf(text: str) -> g.TaxonomyGraph:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise CorpusSyntaxError(f"invalid GEXF XML: {exc}") from exc

    def strip_ns(tag):
        return tag.rsplit("}", 1)[-1]

    version = (1, 0)
    for el in root.iter():
        if strip_ns(el.tag) == "description" and el.text:
            head, _, tail = el.text.partition("=")
            if head == "version":
                major, _, minor = tail.partition(".")
                version = (int(major), int(minor))

    # attribute id -> title per class
    titles = {}
    for attrs_el in root.iter():
        if strip_ns(attrs_el.tag) != "attributes":
            continue
        for attr_el in attrs_el:
            titles[attr_el.get("id")] = attr_el.get("title")

    def attvalues(el):
        out = {}
        for child in el.iter():
            if strip_ns(child.tag) == "attvalue":
                title = titles.get(child.get("for"), child.get("for"))
                out[title] = child.get("value")
        return out

    graph = g.TaxonomyGraph(version=(1, 0), lineage=("gexf import",))
    for el in root.iter():
        if strip_ns(el.tag) != "node":
            continue
        node_id = el.get("id")
        label = el.get("label")
        if node_id is None:
            raise CorpusSyntaxError("GEXF node without id attribute")
        if label is None:
            raise CorpusSyntaxError(f"GEXF node {node_id!r} without label attribute")
        values = attvalues(el)
        role = values.get("role", "pattern")
        if role == "taxonomy":
            node = g.TaxonomyNode(
                id=node_id,
                label=label,
                citation_key=values.get("citation_key", label),
                domain=values.get("domain", ""),
            )
        else:
            raw_aliases = values.get("aliases")
            if raw_aliases:
                try:
                    alias_dicts = json.loads(raw_aliases)
                except json.JSONDecodeError as exc:
                    raise CorpusSyntaxError(
                        f"node {node_id!r}: malformed aliases attribute"
                    ) from exc
                aliases = tuple(
                    g.Attribution(
                        source_taxonomy=a["source_taxonomy"],
                        original_name=a["original_name"],
                        citation_key=a["citation_key"],
                    )
                    for a in alias_dicts
                )
            else:
                aliases = (
                    g.Attribution(
                        source_taxonomy="import",
                        original_name=label,
                        citation_key="import",
                    ),
                )
            node = g.PatternNode(
                id=node_id,
                canonical_name=label,
                aliases=aliases,
                definition=values.get("definition", ""),
            )
        graph = g.add_node(graph, node)

    for el in root.iter():
        if strip_ns(el.tag) != "edge":
            continue
        src = el.get("source")
        dst = el.get("target")
        if src is None or dst is None:
            raise CorpusSyntaxError("GEXF edge without source/target")
        values = attvalues(el)
        kind = values.get("kind")
        if kind is None:
            warnings.warn(
                f"edge {src}->{dst} has no kind attribute; assuming employs",
                stacklevel=2,
            )
            kind = g.EMPLOYS
        graph = g.add_edge(graph, kind, src, dst, values.get("rationale", ""))

    # restore exported version last so major-3 policy checks don't block edges
    from dataclasses import replace

    return replace(graph, version=version)


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _export_dot(graph: g.TaxonomyGraph) -> str:
    lines = ["digraph taxonomy {"]
    for t in sorted(graph.taxonomies.values(), key=lambda t: t.id):
        lines.append(
            f"  {_dot_quote(t.id)} [label={_dot_quote(t.label)}, shape=box];"
        )
    for p in sorted(graph.patterns.values(), key=lambda p: p.id):
        lines.append(
            f"  {_dot_quote(p.id)} [label={_dot_quote(p.canonical_name)}];"
        )
    for e in sorted(graph.edges, key=lambda e: e.triple):
        style = ' [style=dashed]' if e.kind == g.BELONGS_TO else ""
        lines.append(f"  {_dot_quote(e.src)} -> {_dot_quote(e.dst)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
