"""Command-line interface.

A workspace directory (default ``.dpworkspace``) holds the ingested
corpus copy and the append-only curation journal; every command except
``ingest`` operates on an existing workspace.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

import click

from . import community as comm
from . import corpus as cio
from . import graph as g
from . import heuristics as h
from . import merge as m
from .errors import ToolkitError
from .workspace import Workspace, candidate_view, graph_to_dict

CORPUS_NAME = "corpus.dpcorpus.json"
JOURNAL_NAME = "journal.jsonl"


def _open_workspace(workspace_dir: str) -> Workspace:
    root = Path(workspace_dir)
    corpus_path = root / CORPUS_NAME
    if not corpus_path.exists():
        raise click.ClickException(
            f"no workspace at {root}; run `dpt ingest <corpus>` first"
        )
    return Workspace.open(corpus_path, root / JOURNAL_NAME)


@click.group()
@click.option(
    "--workspace",
    "-w",
    default=".dpworkspace",
    show_default=True,
    help="Workspace directory (corpus copy + journal).",
)
@click.pass_context
def main(ctx, workspace):
    ctx.obj = workspace


@main.command()
@click.argument("corpus_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def ingest(workspace_dir, corpus_file):
    """Ingest a corpus file into a fresh workspace."""
    root = Path(workspace_dir)
    root.mkdir(parents=True, exist_ok=True)
    target = root / CORPUS_NAME
    if target.exists():
        raise click.ClickException(f"workspace {root} already has a corpus")
    graph = cio.parse_corpus(Path(corpus_file).read_text("utf-8"))
    violations = g.validate(graph)
    if violations:
        raise click.ClickException("corpus fails validation:\n" + "\n".join(violations))
    shutil.copyfile(corpus_file, target)
    (root / JOURNAL_NAME).touch()
    click.echo(
        f"ingested {len(graph.taxonomies)} taxonomies, "
        f"{len(graph.patterns)} patterns, {len(graph.edges)} edges "
        f"at v{graph.version[0]}.{graph.version[1]}"
    )


@main.command()
@click.option("--format", "fmt", type=click.Choice(["gexf", "dot"]), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_obj
def export(workspace_dir, fmt, out):
    """Export the current graph to GEXF or DOT."""
    ws = _open_workspace(workspace_dir)
    text = cio.export_graph(ws.graph, fmt)
    Path(out).write_text(text, "utf-8")
    click.echo(f"wrote {fmt} to {out}")


@main.command()
@click.option("--resolution", default=1.0, show_default=True)
@click.option("--runs", default=5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--gexf", "gexf_out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def detect(workspace_dir, resolution, runs, seed, gexf_out):
    """Run consensus community detection and print a community report."""
    ws = _open_workspace(workspace_dir)
    consensus = comm.consensus_detect(
        ws.graph, resolution, comm.seed_stream(seed), initial_runs=runs
    )
    partition = consensus.selected_partition
    click.echo(
        f"runs: {len(consensus.runs)} (extensions {consensus.extensions}), "
        f"histogram {dict(sorted(consensus.histogram.items()))}"
    )
    click.echo(
        f"selected seed {partition.seed}: {partition.community_count} communities, "
        f"Q={partition.modularity:.4f}"
    )
    click.echo(f"{'id':>4}  {'size':>4}  {'top member (in-deg)':<34} members")
    for index, members in sorted(partition.members().items()):
        live = [n for n in members if ws.graph.has_node(n)]
        if not live:
            continue
        top = max(
            live,
            key=lambda n: (g.in_degree(ws.graph, n), n),
        )
        label = f"{top} ({g.in_degree(ws.graph, top)})"
        click.echo(f"{index:>4}  {len(live):>4}  {label:<34} {', '.join(live)}")
    if gexf_out:
        Path(gexf_out).write_text(
            cio.export_graph(ws.graph, "gexf", partition), "utf-8"
        )
        click.echo(f"wrote gexf with community ids to {gexf_out}")


@main.command()
@click.option("--threshold", default=m.DEFAULT_THRESHOLD, show_default=True)
@click.option("--resolution", default=1.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.pass_obj
def candidates(workspace_dir, threshold, resolution, seed):
    """Detect communities and propose merge candidates for review."""
    ws = _open_workspace(workspace_dir)
    ws.detect_and_propose(resolution, seed, threshold)
    pending = ws.pending_candidates()
    if not pending:
        click.echo("no pending candidates (saturated at this threshold)")
        return
    for cand in pending:
        view = candidate_view(ws.graph, cand)
        click.echo(
            f"{cand.id}  total={cand.scores.total:.3f} "
            f"(name={cand.scores.name_sim:.2f} def={cand.scores.def_sim:.2f} "
            f"nbr={cand.scores.neighbor_sim:.2f})  "
            f"{view['a']['name']} <> {view['b']['name']}"
        )


@main.command()
@click.argument("candidate_id")
@click.option("--approve", "verdict", flag_value="approve")
@click.option("--reject", "verdict", flag_value="reject")
@click.option("-m", "--message", "rationale", required=True)
@click.pass_obj
def review(workspace_dir, candidate_id, verdict, rationale):
    """Approve or reject a pending candidate with a rationale."""
    if verdict is None:
        raise click.ClickException("pass --approve or --reject")
    ws = _open_workspace(workspace_dir)
    cand = ws.verdict(candidate_id, verdict, rationale)
    click.echo(f"{cand.id}: {cand.status}")


@main.command()
@click.argument("candidate_id")
@click.pass_obj
def enact(workspace_dir, candidate_id):
    """Enact an approved candidate on the graph."""
    ws = _open_workspace(workspace_dir)
    record = ws.enact(candidate_id)
    major, minor = record.version_after
    if record.kind == m.MERGE:
        click.echo(
            f"v{major}.{minor}: merged {record.absorbed} into {record.survivor}"
        )
    else:
        click.echo(
            f"v{major}.{minor}: added employs edge "
            f"{record.survivor} -> {record.absorbed}"
        )


@main.command()
@click.pass_obj
def changelog(workspace_dir):
    """Print the ordinal-ordered curation changelog."""
    ws = _open_workspace(workspace_dir)
    click.echo(ws.changelog_text(), nl=False)


@main.group()
def pipeline():
    """Iterative reduction pipeline."""


@pipeline.command("run")
@click.option(
    "--script",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="JSON decisions file for non-interactive replay.",
)
@click.option("--max-iterations", default=10, show_default=True)
@click.pass_obj
def pipeline_run(workspace_dir, script, max_iterations):
    """Run detect -> propose -> scripted review -> enact until saturated."""
    ws = _open_workspace(workspace_dir)
    spec = json.loads(Path(script).read_text("utf-8"))
    resolution = float(spec.get("resolution", 1.0))
    seed = int(spec.get("seed", 0))
    threshold = float(spec.get("threshold", m.DEFAULT_THRESHOLD))
    default_verdict = spec.get("default_verdict")
    reviews = {
        tuple(sorted(entry["pair"])): (entry["verdict"], entry["rationale"])
        for entry in spec.get("reviews", [])
    }
    max_iterations = int(spec.get("max_iterations", max_iterations))

    if spec.get("strip") and ws.graph.version[0] < 3:
        ws.strip()
        click.echo("stripped taxonomy nodes (v3.0)")

    for iteration in range(1, max_iterations + 1):
        ws.detect_and_propose(resolution, seed, threshold)
        pending = ws.pending_candidates()
        if not pending:
            click.echo(f"iteration {iteration}: saturated, stopping")
            break
        acted = 0
        for cand in pending:
            key = tuple(sorted((cand.a, cand.b)))
            verdict = reviews.get(key)
            if verdict is None and default_verdict:
                verdict = (default_verdict, "scripted default verdict")
            if verdict is None:
                continue
            reviewed = ws.verdict(cand.id, verdict[0], verdict[1])
            if reviewed.status == m.APPROVED:
                ws.enact(cand.id)
                acted += 1
        click.echo(
            f"iteration {iteration}: {len(pending)} candidates, {acted} enacted, "
            f"now {len(ws.graph.patterns)} patterns at "
            f"v{ws.graph.version[0]}.{ws.graph.version[1]}"
        )
        if acted == 0:
            click.echo("no scripted decisions applied; pausing for review")
            break


@main.command()
@click.option(
    "--rules",
    "rules_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Rules JSON (defaults to the shipped community rules).",
)
@click.option("--detected", multiple=True, required=True)
@click.option("--subject", default="")
@click.option("--svg-dir", type=click.Path(file_okay=False), default=None)
@click.pass_obj
def audit(workspace_dir, rules_file, detected, subject, svg_dir):
    """Evaluate detected pattern names against the heuristic rules."""
    if rules_file:
        rules = h.load_rules(Path(rules_file).read_text("utf-8"))
    else:
        rules = h.load_default_rules()
    graph = None
    try:
        graph = _open_workspace(workspace_dir).graph
    except click.ClickException:
        pass  # audits work without a workspace; alias resolution is skipped
    report = h.evaluate_audit(rules, detected, subject=subject, graph=graph)
    manifest = h.emit_glyph_manifest(report, rules)
    click.echo(f"subject: {subject or '(unnamed)'}")
    click.echo(f"{'glyph':<24} {'rule':<20} statement")
    by_id = {r.id: r for r in rules}
    for rule_id, hits in report.violations:
        rule = by_id[rule_id]
        click.echo(f"{rule.glyph_code:<24} {rule_id:<20} {rule.statement}")
        click.echo(f"{'':<24} triggered by: {', '.join(hits)}")
    if report.unmapped:
        click.echo(f"unmapped: {', '.join(sorted(report.unmapped))}")
    if not report.violations:
        click.echo("no heuristic violations")
    if svg_dir:
        out = Path(svg_dir)
        out.mkdir(parents=True, exist_ok=True)
        for code, _label, svg in manifest.entries:
            (out / f"{code}.svg").write_text(svg, "utf-8")
        click.echo(f"wrote {len(manifest.entries)} glyph(s) to {out}")


@main.command()
@click.option("--port", default=8787, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--static-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory of built UI assets to serve at /.",
)
@click.pass_obj
def serve(workspace_dir, port, host, static_dir):
    """Serve the curation HTTP API (and optional UI assets)."""
    from .service import serve as run_server

    ws = _open_workspace(workspace_dir)
    run_server(ws, host=host, port=port, static_dir=static_dir)


if __name__ == "__main__":
    sys.exit(main())
