import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp_toolkit import heuristics as h
from dp_toolkit.errors import CorpusSyntaxError, DuplicateGlyph, RuleMismatch


class TestLoadRules:
    def test_default_rules_cover_all_communities(self):
        rules = h.load_default_rules()
        assert len(rules) >= 10
        assert len({r.glyph_code for r in rules}) == len(rules)
        assert len({r.community_label for r in rules}) >= 10

    def test_value_communication_rule_shipped(self):
        rules = h.load_default_rules()
        rule = next(r for r in rules if r.glyph_code == "intermediate-currency")
        assert rule.statement == (
            "The value of purchasable items is clearly communicated "
            "to the purchasing party."
        )
        assert "Intermediate Currency" in rule.trigger_patterns

    def test_duplicate_glyph_rejected(self):
        doc = json.dumps(
            [
                {"id": "a", "statement": "s", "glyph_code": "g",
                 "trigger_patterns": ["X"]},
                {"id": "b", "statement": "s", "glyph_code": "g",
                 "trigger_patterns": ["Y"]},
            ]
        )
        with pytest.raises(DuplicateGlyph):
            h.load_rules(doc)

    def test_empty_rule_list(self):
        assert h.load_rules("[]") == []

    def test_malformed_document(self):
        with pytest.raises(CorpusSyntaxError):
            h.load_rules("{")


class TestEvaluateAudit:
    def test_intermediate_currency_violates_value_rule(self):
        rules = h.load_default_rules()
        report = h.evaluate_audit(rules, {"Intermediate Currency"})
        assert [rid for rid, _ in report.violations] == ["value-communication"]
        assert not report.unmapped

    def test_empty_detected_set(self):
        report = h.evaluate_audit(h.load_default_rules(), set())
        assert report.violations == ()
        assert report.unmapped == frozenset()

    def test_unknown_pattern_is_unmapped(self):
        report = h.evaluate_audit(
            h.load_default_rules(), {"Totally Novel Pattern"}
        )
        assert report.violations == ()
        assert report.unmapped == {"Totally Novel Pattern"}

    def test_alias_resolution_keeps_rules_firing(self, seed_graph):
        from dp_toolkit import merge as m

        # merge the CNIL duplicate into Brignull's Bait and Switch, then
        # audit with the absorbed name: the rule must still fire
        cand = m.ChangeCandidate(
            id="merge:bait-and-change+bait-and-switch",
            kind=m.MERGE, a="bait-and-change", b="bait-and-switch",
            scores=m.score_pair(seed_graph, "bait-and-change", "bait-and-switch", True),
            status=m.APPROVED, rationale="same pattern, different name",
        )
        merged, record, _ = m.enact(seed_graph, cand, 1)
        rules = h.load_default_rules()
        report = h.evaluate_audit(rules, {"Bait and Change"}, graph=merged)
        assert any(rid == "honest-signals" for rid, _ in report.violations)

    def test_monotonicity(self):
        rules = h.load_default_rules()
        base = h.evaluate_audit(rules, {"Nagging"})
        bigger = h.evaluate_audit(rules, {"Nagging", "Scarcity"})
        assert {rid for rid, _ in base.violations} <= {
            rid for rid, _ in bigger.violations
        }


class TestLint:
    def test_clean_rules_have_no_dangling_triggers(self, seed_graph):
        assert h.lint_rules(h.load_default_rules(), seed_graph) == []

    def test_dangling_trigger_reported(self, seed_graph):
        rules = h.load_rules(
            json.dumps(
                [{"id": "r", "statement": "s", "glyph_code": "g",
                  "trigger_patterns": ["Ghost Pattern"]}]
            )
        )
        issues = h.lint_rules(rules, seed_graph)
        assert issues and "Ghost Pattern" in issues[0]


class TestManifest:
    def test_manifest_contains_glyph(self):
        rules = h.load_default_rules()
        report = h.evaluate_audit(rules, {"Intermediate Currency"})
        manifest = h.emit_glyph_manifest(report, rules)
        assert len(manifest.entries) == 1
        code, label, svg = manifest.entries[0]
        assert code == "intermediate-currency"
        assert svg.startswith("<svg")
        assert "intermediate-currency" in svg

    def test_empty_report_empty_manifest(self):
        rules = h.load_default_rules()
        report = h.evaluate_audit(rules, set())
        assert h.emit_glyph_manifest(report, rules).entries == ()

    def test_entries_sorted_by_glyph_code(self):
        rules = h.load_default_rules()
        report = h.evaluate_audit(rules, {"Nagging", "Scarcity", "Obscure"})
        manifest = h.emit_glyph_manifest(report, rules)
        codes = [c for c, _, _ in manifest.entries]
        assert codes == sorted(codes)

    def test_foreign_report_rejected(self):
        rules = h.load_default_rules()
        report = h.AuditReport(
            subject="x", detected=frozenset({"y"}),
            violations=(("no-such-rule", ("y",)),), unmapped=frozenset(),
        )
        with pytest.raises(RuleMismatch):
            h.emit_glyph_manifest(report, rules)


names = st.sampled_from(
    ["Nagging", "Scarcity", "Obscure", "Maximize", "Intermediate Currency",
     "Confirmshaming", "Obstruction", "Unknown One", "Unknown Two"]
)


@settings(max_examples=60, deadline=None)
@given(st.frozensets(names, max_size=9))
def test_manifest_entry_count_equals_violation_count(detected):
    rules = h.load_default_rules()
    report = h.evaluate_audit(rules, detected)
    manifest = h.emit_glyph_manifest(report, rules)
    assert len(manifest.entries) == len(report.violations)
