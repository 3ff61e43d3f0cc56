"""Session-oriented HTTP facade over the recognizer and the scorer.

Each session accumulates the strokes of one in-progress element, serves
top-3 class predictions after every stroke, and keeps the confirmed sketch.
Results are recomputed from the current sketch on every mutation (never
cached across edits), so what a session sees always equals a fresh ranking
of its sketch.

The index, templates, and weights are loaded once at startup and shared
read-only; per-session state is guarded by a per-session lock, so distinct
sessions proceed concurrently while one session's edits are serialized.
Sessions expire after 30 minutes without a request.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable, Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .index import ScreenIndex
from .query import (DOODLE_CLASSES, Sketch, add_element,
                    remove_last_element)
from .recognizer import Prediction, TemplateSet, classify_partial
from .scoring import Hyperparams, ScoredScreen, score_screens
from .strokes import OutOfBounds, RawStroke, bbox_of, normalize_strokes
from .tiles import tile_bounds

SESSION_TTL_SECONDS = 30 * 60.0
MAX_RESULTS = 50
DEFAULT_RESULTS = 10

# Stable schematic colors per element class for thumbnails.
CLASS_COLORS = {
    "text": "#4c78a8", "image": "#9ecae9", "container": "#f58518",
    "default_icon": "#ffbf79", "text_button": "#54a24b", "menu": "#88d27a",
    "back": "#b79a20", "search": "#f2cf5b", "checkbox": "#439894",
    "plus": "#83bcb6", "avatar": "#e45756", "cancel": "#ff9d98",
    "switch": "#79706e", "slider": "#bab0ac", "share": "#d67195",
    "setting": "#fcbfd2", "home": "#b279a2", "star": "#d6a5c9",
    "forward": "#9e765f", "play": "#d8b5a5", "dropdown": "#3ca951",
    "left_arrow": "#6cc5b0", "envelope": "#c3bc3f", "camera": "#de9ed6",
}


class ApiError(Exception):
    """Error with an HTTP status and a machine-readable code."""

    def __init__(self, status: int, code: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail


def _unknown_session(session_id: str) -> ApiError:
    return ApiError(404, "unknown_session", f"no session {session_id!r}")


@dataclass
class Session:
    id: str
    sketch: Sketch = field(default_factory=Sketch)
    pending: list[RawStroke] = field(default_factory=list)
    redo: list[RawStroke] = field(default_factory=list)
    canvas: Optional[tuple[int, int]] = None
    last_predictions: list[Prediction] = field(default_factory=list)
    last_access: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock)


class StrokeBody(BaseModel):
    canvas: tuple[int, int]
    points: list[tuple[float, float]]


class ConfirmBody(BaseModel):
    klass: Optional[str] = Field(default=None, alias="class")

    model_config = {"populate_by_name": True}


class SearchApp:
    """Shared immutable state plus the session table."""

    def __init__(self, index: ScreenIndex, templates: TemplateSet,
                 hp: Hyperparams, clock: Callable[[], float] = time.monotonic,
                 session_ttl: float = SESSION_TTL_SECONDS):
        self.index = index
        self.templates = templates
        self.hp = hp
        self.clock = clock
        self.session_ttl = session_ttl
        self.sessions: dict[str, Session] = {}
        self.sessions_lock = threading.Lock()

    def create_session(self) -> Session:
        session = Session(id=uuid.uuid4().hex)
        session.last_access = self.clock()
        with self.sessions_lock:
            self.sessions[session.id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        now = self.clock()
        with self.sessions_lock:
            session = self.sessions.get(session_id)
            if session is None:
                raise _unknown_session(session_id)
            if now - session.last_access > self.session_ttl:
                del self.sessions[session_id]
                raise _unknown_session(session_id)
            session.last_access = now
            return session

    def predictions_payload(self, session: Session) -> dict:
        return {"predictions": [
            {"class": p.klass, "confidence": p.confidence}
            for p in session.last_predictions[:3]]}

    def results_payload(self, session: Session, n: int = DEFAULT_RESULTS) -> dict:
        results = self.rank(session.sketch, n)
        return {"results": [{"id": r.screen_id, "score": r.score}
                            for r in results]}

    def rank(self, sketch: Sketch, n: int) -> list[ScoredScreen]:
        if not sketch.elements:
            return []
        return score_screens(sketch, self.index, self.hp, n)

    def reclassify(self, session: Session) -> None:
        if not session.pending:
            session.last_predictions = []
            return
        seq = normalize_strokes(session.pending, session.canvas)
        session.last_predictions = classify_partial(seq, self.templates)


def render_thumbnail_svg(index: ScreenIndex, screen_id: str,
                         width: int = 120, height: int = 200) -> str:
    """Schematic SVG of a screen: one translucent block per covered tile."""
    coverage = index.coverage_for_screen(screen_id)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff" '
        f'stroke="#cccccc"/>',
    ]
    for klass in sorted(coverage):
        color = CLASS_COLORS.get(klass, "#999999")
        for tile, (area, count) in sorted(coverage[klass].items()):
            x, y, w, h = tile_bounds(tile)
            opacity = 0.25 + 0.6 * min(1.0, area)
            parts.append(
                f'<rect x="{x * width:.1f}" y="{y * height:.1f}" '
                f'width="{w * width:.1f}" height="{h * height:.1f}" '
                f'fill="{color}" fill-opacity="{opacity:.2f}">'
                f'<title>{klass} x{count}</title></rect>')
    parts.append("</svg>")
    return "".join(parts)


def create_app(index: ScreenIndex, templates: TemplateSet,
               hp: Hyperparams | None = None,
               clock: Callable[[], float] = time.monotonic,
               session_ttl: float = SESSION_TTL_SECONDS) -> FastAPI:
    state = SearchApp(index, templates, hp or Hyperparams(),
                      clock=clock, session_ttl=session_ttl)
    app = FastAPI(title="doodlesearch", version="0.1.0")
    app.state.search = state

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"error": exc.code, "detail": exc.detail})

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"error": "validation_error",
                                     "detail": str(exc.errors())})

    @app.post("/sessions")
    def create_session():
        return {"id": state.create_session().id}

    @app.post("/sessions/{session_id}/strokes")
    def submit_stroke(session_id: str, body: StrokeBody):
        session = state.get_session(session_id)
        if not body.points:
            raise ApiError(422, "empty_stroke", "stroke has no points")
        if body.canvas[0] <= 0 or body.canvas[1] <= 0:
            raise ApiError(422, "invalid_canvas",
                           f"canvas must be positive, got {body.canvas}")
        with session.lock:
            if session.pending and session.canvas != tuple(body.canvas):
                raise ApiError(422, "canvas_mismatch",
                               "canvas changed mid-element")
            stroke = RawStroke(tuple(body.points))
            try:
                probe = session.pending + [stroke]
                session.canvas = tuple(body.canvas)
                seq = normalize_strokes(probe, session.canvas)
            except OutOfBounds as exc:
                raise ApiError(422, exc.code, str(exc))
            session.pending.append(stroke)
            session.redo.clear()
            session.last_predictions = classify_partial(seq, state.templates)
            return state.predictions_payload(session)

    @app.post("/sessions/{session_id}/strokes/undo")
    def undo_stroke(session_id: str):
        session = state.get_session(session_id)
        with session.lock:
            if session.pending:
                session.redo.append(session.pending.pop())
                state.reclassify(session)
            return state.predictions_payload(session)

    @app.post("/sessions/{session_id}/strokes/redo")
    def redo_stroke(session_id: str):
        session = state.get_session(session_id)
        with session.lock:
            if session.redo:
                session.pending.append(session.redo.pop())
                state.reclassify(session)
            return state.predictions_payload(session)

    @app.post("/sessions/{session_id}/elements")
    def confirm_element(session_id: str, body: ConfirmBody):
        session = state.get_session(session_id)
        chosen = body.klass
        if chosen is not None and chosen not in DOODLE_CLASSES:
            raise ApiError(422, "unknown_class",
                           f"unknown doodle class {chosen!r}")
        with session.lock:
            if not session.pending:
                raise ApiError(422, "no_pending_strokes",
                               "confirm requires at least one stroke")
            if chosen is None:
                chosen = session.last_predictions[0].klass
            bbox = bbox_of(session.pending, session.canvas)
            session.sketch = add_element(session.sketch, chosen, bbox)
            session.pending.clear()
            session.redo.clear()
            session.last_predictions = []
            return state.results_payload(session)

    @app.delete("/sessions/{session_id}/elements/last")
    def remove_last(session_id: str):
        session = state.get_session(session_id)
        with session.lock:
            session.sketch = remove_last_element(session.sketch)
            return state.results_payload(session)

    @app.get("/sessions/{session_id}/results")
    def get_results(session_id: str, n: int = DEFAULT_RESULTS):
        session = state.get_session(session_id)
        if not 1 <= n <= MAX_RESULTS:
            raise ApiError(422, "invalid_n",
                           f"n must be in 1..{MAX_RESULTS}, got {n}")
        with session.lock:
            return state.results_payload(session, n)

    @app.get("/screens/{screen_id}/thumbnail")
    def thumbnail(screen_id: str):
        try:
            svg = render_thumbnail_svg(state.index, screen_id)
        except KeyError:
            raise ApiError(404, "unknown_screen",
                           f"no screen {screen_id!r}")
        return Response(content=svg, media_type="image/svg+xml")

    return app
