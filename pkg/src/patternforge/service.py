"""Local HTTP/JSON service over a SessionEngine.

Payload schemas are documented in docs/wire.md; the frontend consumes these
endpoints and nothing else.  Server state is the engine plus its per-session
event logs; all ranking and synthesis happen here so clients stay dumb.
"""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import (
    GroupAlreadyFilled,
    PatternForgeError,
    SessionIncomplete,
    UndoEmpty,
)
from .holes import SYNTAX_TYPES
from .ranker import match_credit
from .scs.printer import print_example, print_expr, print_pattern
from .session import Session, SessionEngine

NOT_FOUND = ("UnknownPattern", "UnknownSession", "UnknownGroup", "NoEmbedding", "NoMatch")
CONFLICT = ("GroupAlreadyFilled", "SessionIncomplete", "UndoEmpty")


class OpenRequest(BaseModel):
    pattern_id: str
    context: list[tuple[str, str]] = Field(default_factory=list)
    seed: int = 0


class FillChoice(BaseModel):
    candidate: Optional[str] = None
    constant: Optional[str] = None


class FillRequest(BaseModel):
    group_id: str
    choice: FillChoice


def _status_for(error: PatternForgeError) -> int:
    name = type(error).__name__
    if name in NOT_FOUND:
        return 404
    if name in CONFLICT:
        return 409
    return 400


def candidate_json(cand) -> dict:
    text = print_expr(cand.expression)
    return {
        "id": text,
        "text": text,
        "popularity": cand.popularity,
        "placeholders": cand.placeholder_count,
        "free_vars": cand.free_var_count,
        "syntax_type": cand.syntax_type,
    }


def session_json(engine: SessionEngine, session: Session, top_n: int = 10) -> dict:
    data = engine.pattern_data(session.pattern_id)
    groups = []
    for group in session.groups:
        buckets = {name: [] for name in SYNTAX_TYPES}
        for cand in session.candidates.get(group.id, ()):
            buckets[cand.syntax_type].append(candidate_json(cand))
        assigned = session.assignments.get(group.id)
        enum_constants = (
            list(engine.graph.constants_of(group.declared_type))
            if engine.graph.is_enum(group.declared_type)
            else None
        )
        groups.append(
            {
                "id": group.id,
                "description": group.description,
                "declared_type": group.declared_type,
                "holes": list(group.hole_ids),
                "assigned": print_expr(assigned) if assigned is not None else None,
                "enum_constants": enum_constants,
                "buckets": buckets,
            }
        )

    examples = []
    for rank, (example_id, score) in enumerate(session.ranking.order[:top_n], start=1):
        matches = {}
        for group in session.groups:
            assigned = session.assignments.get(group.id)
            if assigned is None:
                continue
            resolved = next(
                (
                    r.expression
                    for r in data.resolutions.get(group.hole_ids[0], [])
                    if r.example_id == example_id
                ),
                None,
            )
            credit = match_credit(resolved, assigned) if resolved is not None else 0.0
            matches[group.id] = "exact" if credit == 1.0 else "root" if credit > 0 else "none"
        examples.append({"id": example_id, "rank": rank, "score": score, "matches": matches})

    return {
        "id": session.id,
        "pattern_id": session.pattern_id,
        "seed": session.seed,
        "context": [list(p) for p in session.context],
        "complete": session.complete,
        "fixed": {hole_id: print_expr(e) for hole_id, e in session.fixed.items()},
        "groups": groups,
        "examples": examples,
        "example_total": len(session.ranking.order),
        "code": engine.emit_code(session) if session.complete else None,
    }


def build_app(engine: SessionEngine) -> FastAPI:
    app = FastAPI(title="patternforge", version="0.1.0")
    # fills on one session are serialized; shared data is immutable
    write_lock = threading.Lock()

    @app.exception_handler(PatternForgeError)
    async def _domain_error(request: Request, error: PatternForgeError):
        return JSONResponse(
            status_code=_status_for(error),
            content={"error": type(error).__name__, "detail": str(error)},
        )

    @app.post("/sessions")
    def open_session(body: OpenRequest, examples: int = Query(10, ge=1, le=100)):
        with write_lock:
            session = engine.open_session(body.pattern_id, body.context, body.seed)
        return session_json(engine, session, examples)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str, examples: int = Query(10, ge=1, le=100)):
        return session_json(engine, engine.get_session(session_id), examples)

    @app.post("/sessions/{session_id}/fill")
    def fill(session_id: str, body: FillRequest, examples: int = Query(10, ge=1, le=100)):
        choice = {k: v for k, v in body.choice.model_dump().items() if v is not None}
        with write_lock:
            session = engine.fill(session_id, body.group_id, choice)
        return session_json(engine, session, examples)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str, examples: int = Query(10, ge=1, le=100)):
        with write_lock:
            session = engine.undo(session_id)
        return session_json(engine, session, examples)

    @app.get("/sessions/{session_id}/code")
    def code(session_id: str):
        session = engine.get_session(session_id)
        return {"id": session.id, "complete": session.complete, "code": engine.emit_code(session)}

    @app.get("/patterns")
    def patterns():
        out = []
        for pattern in sorted(
            engine.patterns.values(), key=lambda p: (-p.support, p.id)
        ):
            out.append(
                {
                    "id": pattern.id,
                    "support": pattern.support,
                    "description": pattern.description,
                    "tokens": list(pattern.tokens),
                    "calls": [c.method_token for c in pattern.calls],
                    "hole_count": len(pattern.holes),
                    "text": print_pattern(pattern),
                }
            )
        return {"patterns": out}

    @app.get("/examples/{example_id}")
    def example(example_id: str):
        ex = engine.corpus.get(example_id)
        if ex is None:
            raise HTTPException(status_code=404, detail=f"no example {example_id!r}")
        return {
            "id": ex.id,
            "context_params": [list(p) for p in ex.context_params],
            "source_uri": ex.source_uri,
            "text": print_example(ex),
        }

    return app
