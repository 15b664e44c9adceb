"""Local HTTP API over a curation workspace.

Route table:
  GET  /graph
  GET  /communities
  POST /detect {resolution, seed, threshold?}
  GET  /candidates
  POST /candidates/{id}/verdict {verdict, rationale}
  POST /enact/{id}
  GET  /changelog
  POST /audit {subject?, detected: [...]}
  GET  /prominence

Error mapping: 400 malformed body, 404 unknown id, 409 invalid state
transition or stale candidate.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import community as comm
from . import graph as g
from . import pipeline as pl
from .errors import (
    EmptyRationale,
    InvalidTransition,
    NoEdges,
    StaleCandidate,
    UnknownNode,
)
from .workspace import (
    Workspace,
    candidate_view,
    consensus_view,
    graph_to_dict,
)

DEFAULT_PORT = 8787


def create_app(workspace: Workspace, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="dp-toolkit curation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"https?://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.workspace = workspace

    async def body_of(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=400, detail="malformed JSON body")
        if not isinstance(body, dict):
            raise HTTPException(status_code=400, detail="body must be an object")
        return body

    @app.get("/graph")
    def get_graph():
        return graph_to_dict(workspace.snapshot())

    @app.get("/communities")
    def get_communities():
        consensus = workspace.last_consensus
        if consensus is None:
            return {"detected": False, "communities": []}
        graph = workspace.snapshot()
        partition = consensus.selected_partition
        communities = []
        for index, members in sorted(partition.members().items()):
            live = [n for n in members if graph.has_node(n)]
            pattern_members = [n for n in live if n in graph.patterns]
            main = None
            if pattern_members:
                main = pl.community_main_pattern(graph, partition, index)
            communities.append(
                {
                    "id": index,
                    "size": len(live),
                    "members": live,
                    "main_pattern": main,
                }
            )
        return {
            "detected": True,
            "consensus": consensus_view(consensus),
            "communities": communities,
        }

    @app.post("/detect")
    async def post_detect(request: Request):
        body = await body_of(request)
        resolution = float(body.get("resolution", 1.0))
        seed = int(body.get("seed", 0))
        threshold = float(body.get("threshold", 0.45))
        try:
            consensus = workspace.detect_and_propose(resolution, seed, threshold)
        except NoEdges as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return consensus_view(consensus)

    @app.get("/candidates")
    def get_candidates():
        graph = workspace.snapshot()
        return {
            "candidates": [
                candidate_view(graph, c)
                for c in sorted(
                    workspace.candidates.values(),
                    key=lambda c: (-c.scores.total, c.id),
                )
            ]
        }

    @app.post("/candidates/{candidate_id}/verdict")
    async def post_verdict(candidate_id: str, request: Request):
        body = await body_of(request)
        verdict = body.get("verdict")
        rationale = body.get("rationale", "")
        if verdict not in ("approve", "reject"):
            raise HTTPException(
                status_code=400, detail="verdict must be approve or reject"
            )
        try:
            cand = workspace.verdict(candidate_id, verdict, rationale)
        except UnknownNode as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (InvalidTransition, StaleCandidate) as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except EmptyRationale as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return candidate_view(workspace.snapshot(), cand)

    @app.post("/enact/{candidate_id}")
    def post_enact(candidate_id: str):
        try:
            record = workspace.enact(candidate_id)
        except UnknownNode as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (InvalidTransition, StaleCandidate) as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {
            "ordinal": record.ordinal,
            "kind": record.kind,
            "survivor": record.survivor,
            "absorbed": record.absorbed,
            "version_after": list(record.version_after),
            "edge_delta": list(record.edge_delta),
            "rationale": record.rationale,
        }

    @app.get("/changelog", response_class=PlainTextResponse)
    def get_changelog():
        return workspace.changelog_text()

    @app.post("/audit")
    async def post_audit(request: Request):
        body = await body_of(request)
        detected = body.get("detected")
        if not isinstance(detected, list):
            raise HTTPException(status_code=400, detail="detected must be a list")
        report, manifest = workspace.audit(detected, body.get("subject", ""))
        return {
            "subject": report.subject,
            "detected": sorted(report.detected),
            "violations": [
                {"rule_id": rid, "triggering": list(hits)}
                for rid, hits in report.violations
            ],
            "unmapped": sorted(report.unmapped),
            "manifest": [
                {"glyph_code": code, "label": label, "svg": svg}
                for code, label, svg in manifest.entries
            ],
        }

    @app.get("/prominence")
    def get_prominence():
        graph = workspace.snapshot()
        if not graph.patterns:
            return {"ranking": []}
        ranking = g.prominence_ranking(graph)
        return {
            "ranking": [
                {
                    "id": nid,
                    "name": graph.patterns[nid].canonical_name,
                    "in_degree": count,
                }
                for nid, count in ranking
            ]
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(
    workspace: Workspace,
    host: str = "127.0.0.1",
    port: int = DEFAULT_PORT,
    static_dir: str | Path | None = None,
):
    import uvicorn

    uvicorn.run(create_app(workspace, static_dir), host=host, port=port)
