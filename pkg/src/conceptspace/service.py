"""HTTP API over sessions, plus the command-line launcher."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .config import Config, DEFAULTS
from .errors import (ConceptSpaceError, DimensionMismatch, EmptyQueue,
                     ForbiddenAction, JobAlreadyRunning, LastConcept,
                     LevelOutOfRange, MalformedRecord, MissingFile,
                     UnknownTarget)
from .refinement import ActionKind, RefinementAction
from .session import Session, hierarchy_hash

_CLIENT_ERRORS = (DimensionMismatch, MalformedRecord, MissingFile,
                  ForbiddenAction, UnknownTarget, LastConcept,
                  LevelOutOfRange, EmptyQueue)


class SessionRequest(BaseModel):
    corpus_path: str
    embeddings_path: str
    config: dict | None = None
    weights: dict | None = None


class ActionRequest(BaseModel):
    kind: str
    targets: list[str]
    destination: str | None = None


class AbstractionRequest(BaseModel):
    level: int


def create_app(sessions: dict[str, Session] | None = None) -> FastAPI:
    app = FastAPI(title="conceptspace")
    registry: dict[str, Session] = sessions if sessions is not None else {}

    def get(session_id: str) -> Session:
        if session_id not in registry:
            raise HTTPException(404, f"no session {session_id}")
        return registry[session_id]

    def guard(fn):
        try:
            return fn()
        except JobAlreadyRunning as exc:
            raise HTTPException(409, str(exc)) from exc
        except _CLIENT_ERRORS as exc:
            raise HTTPException(400, str(exc)) from exc
        except ConceptSpaceError as exc:
            raise HTTPException(422, str(exc)) from exc

    @app.post("/sessions")
    def create_session(req: SessionRequest):
        def run():
            config = Config(**req.config) if req.config else DEFAULTS
            session = Session.create(req.corpus_path, req.embeddings_path,
                                     config, req.weights)
            registry[session.id] = session
            return {"id": session.id, "generation": session.generation}
        return guard(run)

    @app.get("/sessions/{session_id}/state")
    def state(session_id: str, view: str = "concept"):
        return get(session_id).state(view)

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, req: ActionRequest):
        session = get(session_id)

        def run():
            action = RefinementAction(ActionKind(req.kind), req.targets,
                                      req.destination)
            session.apply_action(action)
            return {"generation": session.generation,
                    "hierarchy_hash": hierarchy_hash(session.hierarchy)}
        return guard(run)

    @app.post("/sessions/{session_id}/recompute/{kind}")
    def recompute(session_id: str, kind: str):
        session = get(session_id)

        def run():
            if kind not in ("tsne", "topics"):
                raise HTTPException(404, f"unknown job kind {kind}")
            job = session.recompute(kind)
            return {"kind": job.kind, "status": job.status}
        return guard(run)

    @app.get("/sessions/{session_id}/jobs/current")
    def current_job(session_id: str):
        session = get(session_id)
        if session.job is None:
            return {"status": "idle"}
        return {"kind": session.job.kind, "status": session.job.status,
                "progress": session.job.progress}

    @app.get("/sessions/{session_id}/recommendations")
    def recommendations(session_id: str):
        session = get(session_id)
        queue = session.recommendations()
        return {
            "recommendations": [
                {"word": r.word, "action": r.action.to_json(),
                 "impact": r.impact, "rationale": r.rationale,
                 "focus": list(r.focus_rect(session.projection))}
                for r in queue
            ]
        }

    @app.post("/sessions/{session_id}/recommendations/{idx}/{verdict}")
    def review(session_id: str, idx: int, verdict: str):
        session = get(session_id)

        def run():
            if session.tour is None:
                session.recommendations()
            state = session.tour
            if idx < 0 or idx >= len(state.queue):
                raise EmptyQueue(f"no recommendation at index {idx}")
            current = state.queue[idx]
            if verdict == "accept":
                session.apply_action(current.action)
                state.queue = [
                    r for r in _rebuild_queue(session, session.hierarchy)
                    if r.word not in state.suppressed]
            elif verdict == "reject":
                state.suppressed.add(current.word)
                state.queue = state.queue[:idx] + state.queue[idx + 1:]
            else:
                raise HTTPException(404, f"unknown verdict {verdict}")
            nxt = state.queue[0] if state.queue else None
            return {
                "generation": session.generation,
                "next": None if nxt is None else {
                    "word": nxt.word, "action": nxt.action.to_json(),
                    "impact": nxt.impact, "rationale": nxt.rationale,
                    "focus": list(nxt.focus_rect(session.projection)),
                },
            }
        return guard(run)

    @app.get("/sessions/{session_id}/quality")
    def quality(session_id: str):
        return get(session_id).quality()

    @app.get("/sessions/{session_id}/search")
    def search(session_id: str, q: str = ""):
        return {"results": get(session_id).search(q)}

    @app.get("/sessions/{session_id}/xray")
    def xray(session_id: str, x: float, y: float, r: float):
        return get(session_id).xray(x, y, r)

    @app.get("/sessions/{session_id}/abstraction")
    def get_abstraction(session_id: str):
        return {"level": get(session_id).level}

    @app.put("/sessions/{session_id}/abstraction")
    def put_abstraction(session_id: str, req: AbstractionRequest):
        session = get(session_id)

        def run():
            session.set_level(req.level)
            return {"level": session.level, "generation": session.generation}
        return guard(run)

    @app.get("/sessions/{session_id}/export/{what}")
    def export(session_id: str, what: str):
        session = get(session_id)
        if what == "hierarchy":
            return session.hierarchy.export_json()
        if what == "weights":
            return session.weights.export_learned()
        if what == "topics":
            return session.topic_model.export_json(
                session.topic_cases(), session.config.top_topic_keywords)
        if what == "layout":
            return session.layout_snapshot()
        raise HTTPException(404, f"unknown export {what}")

    return app


def _rebuild_queue(session: Session, h):
    from .refinement import build_queue, monitor
    report = monitor(h, session.projection, session.qt, session.store)
    return build_queue(report, session.stats, h, session.store,
                       session.projection, session.qt, session.config)


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(
        prog="conceptspace",
        description="Serve the concept-space refinement API.")
    parser.add_argument("--corpus", type=Path, required=False)
    parser.add_argument("--embeddings", type=Path, required=False)
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--config", type=Path, default=None)
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args(argv)

    config = DEFAULTS
    if args.config:
        config = Config(**json.loads(args.config.read_text()))
    if args.seed is not None:
        config.seed = args.seed

    sessions: dict[str, Session] = {}
    if args.corpus and args.embeddings:
        session = Session.create(args.corpus, args.embeddings, config)
        sessions[session.id] = session
        print(f"preloaded session {session.id}")

    import uvicorn
    uvicorn.run(create_app(sessions), host="127.0.0.1", port=args.port)


if __name__ == "__main__":
    main()
