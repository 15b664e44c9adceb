"""Community-derived heuristic rules, audit evaluation, glyph manifests."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .errors import CorpusSyntaxError, DuplicateGlyph, RuleMismatch
from .graph import TaxonomyGraph


@dataclass(frozen=True)
class HeuristicRule:
    id: str
    statement: str
    community_label: str
    trigger_patterns: frozenset
    glyph_code: str

    def __post_init__(self):
        if not self.trigger_patterns:
            raise ValueError(f"rule {self.id!r} has no trigger patterns")


@dataclass(frozen=True)
class AuditReport:
    subject: str
    detected: frozenset
    violations: tuple          # tuple[(rule_id, tuple(triggering patterns)), ...]
    unmapped: frozenset


@dataclass(frozen=True)
class GlyphManifest:
    entries: tuple             # tuple[(glyph_code, label, svg_text), ...]


def load_rules(text: str) -> list[HeuristicRule]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusSyntaxError(
            f"invalid rules JSON at line {exc.lineno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, list):
        raise CorpusSyntaxError("rules document must be a JSON list")
    rules = []
    glyphs = set()
    for i, decl in enumerate(raw):
        for key in ("id", "statement", "glyph_code", "trigger_patterns"):
            if key not in decl:
                raise CorpusSyntaxError(f"rules[{i}]: missing field {key!r}")
        glyph = decl["glyph_code"]
        if glyph in glyphs:
            raise DuplicateGlyph(f"glyph code {glyph!r} used by more than one rule")
        glyphs.add(glyph)
        rules.append(
            HeuristicRule(
                id=decl["id"],
                statement=decl["statement"],
                community_label=decl.get("community_label", ""),
                trigger_patterns=frozenset(decl["trigger_patterns"]),
                glyph_code=glyph,
            )
        )
    return rules


def load_default_rules() -> list[HeuristicRule]:
    text = (
        resources.files("dp_toolkit.data")
        .joinpath("default_rules.json")
        .read_text("utf-8")
    )
    return load_rules(text)


def _alias_resolver(graph: TaxonomyGraph | None):
    """Map any canonical name or historical alias to the canonical name."""
    if graph is None:
        return lambda name: name
    table = {}
    for p in graph.patterns.values():
        table[p.canonical_name.casefold()] = p.canonical_name
        for alias in p.aliases:
            table.setdefault(alias.original_name.casefold(), p.canonical_name)
    return lambda name: table.get(name.casefold(), name)


def evaluate_audit(
    rules: list[HeuristicRule],
    detected,
    subject: str = "",
    graph: TaxonomyGraph | None = None,
) -> AuditReport:
    """A rule is violated iff its triggers intersect the detected set.

    When a graph is given, detected names and triggers resolve through
    pattern aliases, so names merged away keep firing their rules.
    """
    resolve = _alias_resolver(graph)
    detected = frozenset(detected)
    canonical = {resolve(name): name for name in detected}
    violations = []
    mapped = set()
    for rule in rules:
        triggers = {resolve(t) for t in rule.trigger_patterns}
        hits = sorted(triggers & set(canonical))
        if hits:
            violations.append((rule.id, tuple(canonical[h] for h in hits)))
            mapped.update(canonical[h] for h in hits)
    return AuditReport(
        subject=subject,
        detected=detected,
        violations=tuple(violations),
        unmapped=frozenset(detected - mapped),
    )


def lint_rules(rules: list[HeuristicRule], graph: TaxonomyGraph) -> list[str]:
    """Report triggers that no longer resolve to any pattern or alias."""
    known = set()
    for p in graph.patterns.values():
        known.add(p.canonical_name.casefold())
        for alias in p.aliases:
            known.add(alias.original_name.casefold())
    dangling = []
    for rule in rules:
        for trigger in sorted(rule.trigger_patterns):
            if trigger.casefold() not in known:
                dangling.append(f"rule {rule.id!r}: dangling trigger {trigger!r}")
    return dangling


_SVG_TEMPLATE = """<svg xmlns="http://www.w3.org/2000/svg" width="320" height="120" viewBox="0 0 320 120">
  <rect x="4" y="4" width="312" height="112" rx="10" fill="#fff" stroke="#b00020" stroke-width="4"/>
  <polygon points="60,16 104,60 60,104 16,60" fill="none" stroke="#b00020" stroke-width="6"/>
  <text x="60" y="66" font-family="sans-serif" font-size="28" font-weight="bold" fill="#b00020" text-anchor="middle">!</text>
  <text x="120" y="48" font-family="sans-serif" font-size="14" font-weight="bold" fill="#202020">{code}</text>
  <text x="120" y="76" font-family="sans-serif" font-size="10" fill="#404040">{label}</text>
</svg>
"""


def render_glyph(glyph_code: str, label: str) -> str:
    def esc(s: str) -> str:
        return (
            s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        )

    return _SVG_TEMPLATE.format(code=esc(glyph_code), label=esc(label[:90]))


def emit_glyph_manifest(
    report: AuditReport, rules: list[HeuristicRule]
) -> GlyphManifest:
    """One badge per violated rule, ordered by glyph code."""
    by_id = {rule.id: rule for rule in rules}
    entries = []
    for rule_id, _hits in report.violations:
        rule = by_id.get(rule_id)
        if rule is None:
            raise RuleMismatch(f"report names unknown rule {rule_id!r}")
        entries.append(
            (rule.glyph_code, rule.statement, render_glyph(rule.glyph_code, rule.statement))
        )
    entries.sort(key=lambda e: e[0])
    return GlyphManifest(entries=tuple(entries))
