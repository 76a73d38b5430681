"""HTTP query service over one immutable artifact plus an idea ledger.

Every GET is a pure function of (artifact, request); POST /ideas is the
only write and goes through the ledger's single-writer append. Payload
builders are plain functions so responses can be checked against
direct library calls.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import atlas, explorer, ideation
from .artifact import IndexArtifact, load_artifact
from .corpus import record_payload
from .explorer import DomainPosition, ExplorerError, UnpositionedError
from .ideation import IdeaDraft, IdeaLedger, IdeationError
from .proximity import ProximityError
from .terms import TermError


def position_payload(position: DomainPosition) -> dict:
    return {
        "query": position.query,
        "level": position.level,
        "match_count": len(position.matched_ids),
        "matched_ids": sorted(position.matched_ids),
        "x": dict(sorted(position.x.items())),
        "red_fields": sorted(position.red_fields),
        "white_fields": sorted(position.white_fields),
        "unpositioned": position.unpositioned,
    }


def nearby_payload(query: str, level: int, entries: list[tuple[str, float]]) -> dict:
    return {
        "query": query,
        "level": level,
        "entries": [{"field": fld, "omega": omega} for fld, omega in entries],
    }


def panel_payload(panel: explorer.FieldPanel) -> dict:
    return {
        "field": panel.field,
        "stimulus_scope": panel.stimulus_scope,
        "scope_ids": list(panel.scope_ids),
        "top_terms": [[term, score] for term, score in panel.top_terms],
        "patents_by_citations": [list(row) for row in panel.patents_by_citations],
        "patents_by_recency": [list(row) for row in panel.patents_by_recency],
        "top_inventors": [list(row) for row in panel.top_inventors],
        "top_assignees": [list(row) for row in panel.top_assignees],
    }


class IdeaDraftBody(BaseModel):
    heuristic: str
    stimulus_text: str
    stimulus_kind: str
    source_field: str
    target_query: str
    idea_text: str


def _level_of(value: int) -> int:
    if value not in (3, 4):
        raise HTTPException(status_code=400, detail="level must be 3 or 4")
    return value


def create_app(artifact: IndexArtifact, ledger: IdeaLedger) -> FastAPI:
    app = FastAPI(title="techatlas", version=str(artifact.manifest.get("format_version", 1)))
    # the map client may be served from any static host
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def _position(q: str, level: int) -> DomainPosition:
        try:
            return explorer.position_domain(artifact.index, q, level)
        except ExplorerError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/map")
    def get_map(level: int = Query(...)):
        level = _level_of(level)
        return atlas.map_payload(artifact.graphs[level], artifact.layouts[level])

    @app.get("/position")
    def get_position(q: str = Query(...), level: int = Query(...)):
        return position_payload(_position(q, _level_of(level)))

    @app.get("/nearby")
    def get_nearby(q: str = Query(...), level: int = Query(...), k: int = Query(5)):
        level = _level_of(level)
        position = _position(q, level)
        try:
            entries = explorer.rank_nearby(position, artifact.matrices[level], k)
        except UnpositionedError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except ExplorerError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return nearby_payload(q, level, entries)

    @app.get("/field/{code}")
    def get_field(
        code: str,
        q: str | None = Query(None),
        level: int | None = Query(None),
        k_terms: int = Query(10),
        k_patents: int = Query(10),
    ):
        try:
            code_level = explorer.field_code_level(code)
        except ExplorerError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        if level is not None and _level_of(level) != code_level:
            raise HTTPException(
                status_code=400,
                detail=f"field {code!r} is a level-{code_level} code, not level {level}",
            )
        position = _position(q, code_level) if q else None
        try:
            panel = explorer.field_panel(
                artifact.index,
                code,
                position=position,
                k_terms=k_terms,
                k_patents=k_patents,
            )
        except (ExplorerError, TermError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return panel_payload(panel)

    @app.get("/patent/{pid}")
    def get_patent(pid: str):
        record = artifact.index.records.get(pid)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown patent id {pid!r}")
        payload = record_payload(record)
        payload["citation_count"] = artifact.index.citation_counts[pid]
        return payload

    @app.post("/ideas")
    def post_idea(body: IdeaDraftBody):
        level = len(body.source_field)
        if level not in (3, 4):
            raise HTTPException(
                status_code=400, detail=f"malformed source field {body.source_field!r}"
            )
        position = _position(body.target_query, level)
        try:
            record = ledger.record_idea(
                IdeaDraft(**body.model_dump()),
                position,
                artifact.matrices[level],
                artifact_hash=artifact.manifest_hash,
            )
        except (IdeationError, ProximityError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return record.payload()

    @app.get("/ideas")
    def get_ideas(order: str = Query("proximity_desc")):
        try:
            ranked = ledger.rank_ideas(order=order)
        except IdeationError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return [record.payload() for record in ranked]

    @app.get("/ideas/render")
    def get_render(
        heuristic: str = Query(...), stimulus: str = Query(...), target: str = Query(...)
    ):
        try:
            sentence = ideation.render_idea(heuristic, stimulus, target)
        except IdeationError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"heuristic": heuristic, "sentence": sentence}

    return app


def default_ledger_path(artifact_dir: str | Path) -> Path:
    """Ledger lives beside the artifact directory, never inside it."""
    root = Path(artifact_dir)
    return root.parent / f"{root.name}.ledger.jsonl"


def serve(
    artifact_dir: str | Path,
    port: int = 8000,
    host: str = "127.0.0.1",
    ledger_path: str | Path | None = None,
) -> None:
    """Load, validate, and serve an artifact (blocking)."""
    import uvicorn

    artifact = load_artifact(artifact_dir)
    ledger = IdeaLedger(ledger_path or default_ledger_path(artifact_dir))
    app = create_app(artifact, ledger)
    uvicorn.run(app, host=host, port=port, log_level="info")
