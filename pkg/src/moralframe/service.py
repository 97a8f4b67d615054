"""HTTP service: argument generation plus the study-runner API.

Generation requests are stateless; study mutations funnel through the
single-writer StudyStore. Responses never expose framing metadata on study
endpoints.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .foundations import Framing, MoralFoundation
from .mining import Stance
from .narrative import argument_to_document, render_text
from .pipeline import ArgumentEngine, GenerationRequest
from .study import StudyStateError, StudyStore, UnknownSessionError


class GenerateBody(BaseModel):
    topic: str
    stance: str
    framing: str | None = None
    morals: list[str] | None = None
    overrides: dict[str, float] | None = None


class SessionBody(BaseModel):
    participant: str = Field(min_length=1)
    ideology: str = "unknown"


class StanceBody(BaseModel):
    item_index: int
    value: int


class RankingBody(BaseModel):
    item_index: int
    ranks: dict[str, int]


class QuestionnaireBody(BaseModel):
    answers: dict[str, dict[str, int]]


def create_app(
    engine: ArgumentEngine | None = None,
    store: StudyStore | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="moralframe", version="0.1.0")

    def _engine() -> ArgumentEngine:
        if engine is None:
            raise HTTPException(status_code=503, detail="no index loaded; start with --index")
        return engine

    def _store() -> StudyStore:
        if store is None:
            raise HTTPException(status_code=503, detail="no study bundle loaded")
        return store

    @app.post("/api/generate")
    def generate(body: GenerateBody):
        try:
            request = GenerationRequest(
                topic=body.topic,
                stance=Stance(body.stance),
                framing=Framing(body.framing) if body.framing else None,
                morals=(
                    frozenset(MoralFoundation(m) for m in body.morals)
                    if body.morals
                    else None
                ),
                overrides=body.overrides,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        outcome = _engine().generate(request)
        response = {
            "status": outcome.status,
            "timings_ms": dict(outcome.timings_ms),
            "counts": dict(outcome.counts),
        }
        if outcome.ok:
            response["argument"] = argument_to_document(outcome.argument)
            response["rendered"] = render_text(outcome.argument)
        else:
            response["reason"] = outcome.reason
        return response

    @app.post("/api/study/sessions")
    def create_session(body: SessionBody):
        try:
            state = _store().create_session(body.participant, body.ideology)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"session_id": state.session_id, "items_total": len(state.items)}

    def _study_call(fn, *args):
        try:
            return fn(*args)
        except UnknownSessionError:
            raise HTTPException(status_code=404, detail="unknown session")
        except StudyStateError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/study/sessions/{session_id}/next")
    def next_step(session_id: str):
        return _study_call(_store().next_step, session_id)

    @app.post("/api/study/sessions/{session_id}/stance")
    def submit_stance(session_id: str, body: StanceBody):
        _study_call(_store().submit_stance, session_id, body.item_index, body.value)
        return {"accepted": True}

    @app.post("/api/study/sessions/{session_id}/ranking")
    def submit_ranking(session_id: str, body: RankingBody):
        _study_call(_store().submit_ranking, session_id, body.item_index, body.ranks)
        return {"accepted": True}

    @app.post("/api/study/sessions/{session_id}/questionnaire")
    def submit_questionnaire(session_id: str, body: QuestionnaireBody):
        _study_call(_store().submit_questionnaire, session_id, body.answers)
        return {"accepted": True}

    @app.get("/api/study/export")
    def export():
        return PlainTextResponse(
            _store().export_jsonl(), media_type="application/x-ndjson"
        )

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
