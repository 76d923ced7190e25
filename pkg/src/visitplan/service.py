"""HTTP facade over the engine: roster CRUD, rating, schedule generation and
views, confirmation responses, and the static UI bundle."""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import EngineError, NotFoundError
from .store import Engine
from .views import schedule_view

API = "/api/v1"

_STATUS_BY_CODE = {
    "not_found": 404,
    "not_generated": 404,
    "unknown_candidate": 404,
    "illegal_transition": 409,
    "duplicate_key": 409,
    "window_overflow": 409,
}


class ClientIn(BaseModel):
    client_id: str
    name: str = ""
    country: str
    city: str
    rank: int | None = None
    teu: int = 0


class TerminalIn(BaseModel):
    terminal_id: str
    name: str = ""
    owner_client_id: str
    city: str
    country: str
    teu: int = 0


class VisitorIn(BaseModel):
    visitor_id: str
    name: str = ""
    home_city: str = ""
    interest_countries: list[str] = Field(default_factory=list)


class RankRequest(BaseModel):
    mode: Literal["manual", "calculated"]
    value: int | None = None


class GenerateRequest(BaseModel):
    optimizer: Literal["greedy", "ga"] = "greedy"
    seed: int = 0


class ResponseRequest(BaseModel):
    status: Literal["confirmed", "denied"]


def create_app(engine: Engine, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="visitplan", docs_url=None, redoc_url=None)

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content=exc.as_dict())

    def ok(payload: dict) -> dict:
        payload["revision"] = engine.state.revision
        return payload

    # -- clients ------------------------------------------------------------

    @app.get(API + "/clients")
    def list_clients():
        return ok({"clients": [c.to_dict() for c in engine.state.clients]})

    @app.get(API + "/clients/{client_id}")
    def get_client(client_id: str):
        return ok({"client": engine.require_client(client_id).to_dict()})

    @app.post(API + "/clients")
    def create_client(body: ClientIn):
        client = engine.upsert_client(body.model_dump())
        return ok({"client": client.to_dict()})

    @app.put(API + "/clients/{client_id}")
    def update_client(client_id: str, body: ClientIn):
        engine.require_client(client_id)
        data = body.model_dump()
        data["client_id"] = client_id
        client = engine.upsert_client(data)
        return ok({"client": client.to_dict()})

    @app.delete(API + "/clients/{client_id}")
    def delete_client(client_id: str, confirm: bool = Query(default=False)):
        engine.delete_client(client_id, confirm=confirm)
        return ok({"deleted": client_id})

    # -- terminals ----------------------------------------------------------

    @app.get(API + "/terminals")
    def list_terminals():
        return ok({"terminals": [t.to_dict() for t in engine.state.terminals]})

    @app.get(API + "/terminals/{terminal_id}")
    def get_terminal(terminal_id: str):
        t = engine.state.terminal(terminal_id)
        if t is None:
            raise NotFoundError(f"terminal {terminal_id} not found", field="terminal_id")
        return ok({"terminal": t.to_dict()})

    @app.post(API + "/terminals")
    def create_terminal(body: TerminalIn):
        terminal = engine.upsert_terminal(body.model_dump())
        return ok({"terminal": terminal.to_dict()})

    @app.put(API + "/terminals/{terminal_id}")
    def update_terminal(terminal_id: str, body: TerminalIn):
        if engine.state.terminal(terminal_id) is None:
            raise NotFoundError(f"terminal {terminal_id} not found", field="terminal_id")
        data = body.model_dump()
        data["terminal_id"] = terminal_id
        terminal = engine.upsert_terminal(data)
        return ok({"terminal": terminal.to_dict()})

    @app.delete(API + "/terminals/{terminal_id}")
    def delete_terminal(terminal_id: str, confirm: bool = Query(default=False)):
        engine.delete_terminal(terminal_id, confirm=confirm)
        return ok({"deleted": terminal_id})

    # -- visitors -----------------------------------------------------------

    @app.get(API + "/visitors")
    def list_visitors():
        return ok({"visitors": [v.to_dict() for v in engine.state.visitors]})

    @app.get(API + "/visitors/{visitor_id}")
    def get_visitor(visitor_id: str):
        v = engine.state.visitor(visitor_id)
        if v is None:
            raise NotFoundError(f"visitor {visitor_id} not found", field="visitor_id")
        return ok({"visitor": v.to_dict()})

    @app.post(API + "/visitors")
    def create_visitor(body: VisitorIn):
        visitor = engine.upsert_visitor(body.model_dump())
        return ok({"visitor": visitor.to_dict()})

    @app.put(API + "/visitors/{visitor_id}")
    def update_visitor(visitor_id: str, body: VisitorIn):
        if engine.state.visitor(visitor_id) is None:
            raise NotFoundError(f"visitor {visitor_id} not found", field="visitor_id")
        data = body.model_dump()
        data["visitor_id"] = visitor_id
        visitor = engine.upsert_visitor(data)
        return ok({"visitor": visitor.to_dict()})

    @app.delete(API + "/visitors/{visitor_id}")
    def delete_visitor(visitor_id: str, confirm: bool = Query(default=False)):
        engine.delete_visitor(visitor_id, confirm=confirm)
        return ok({"deleted": visitor_id})

    # -- ranking ------------------------------------------------------------

    @app.post(API + "/clients/{client_id}/rank")
    def set_rank(client_id: str, body: RankRequest):
        client = engine.set_rank(client_id, body.mode, body.value)
        return ok({"client": client.to_dict()})

    @app.get(API + "/rank-suggestions")
    def rank_suggestions(variation_threshold_pct: float | None = Query(default=None)):
        suggestions = engine.rank_suggestions(variation_threshold_pct)
        return ok({"suggestions": [s.to_dict() for s in suggestions]})

    # -- schedule -----------------------------------------------------------

    @app.post(API + "/schedule/generate")
    def generate(body: GenerateRequest):
        schedule = engine.generate(optimizer=body.optimizer, seed=body.seed)
        return ok(
            {
                "generator": schedule.generator,
                "seed": schedule.seed,
                "stats": schedule.stats.to_dict(),
            }
        )

    @app.get(API + "/schedule")
    def get_schedule(
        view: Literal["date", "client"] = Query(default="date"),
        horizon: int = Query(default=180),
    ):
        schedule = engine.require_schedule()
        return ok(schedule_view(schedule, engine.clients_by_id(), view, horizon))

    @app.get(API + "/schedule/pending")
    def pending():
        return ok({"pending": [m.to_dict() for m in engine.pending_meetings()]})

    @app.get(API + "/schedule/check")
    def check():
        return ok({"report": engine.budget_report().to_dict()})

    @app.post(API + "/schedule/meetings/{meeting_id}/response")
    def respond(meeting_id: str, body: ResponseRequest):
        result = engine.respond(meeting_id, body.status)
        return ok(result)

    # -- state --------------------------------------------------------------

    @app.get(API + "/state/revision")
    def revision():
        return {"revision": engine.state.revision}

    if ui_dir and Path(ui_dir).exists():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
