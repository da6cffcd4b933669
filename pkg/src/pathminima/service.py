"""Local HTTP service hosting explorer sessions for the web client.

Endpoints (JSON over HTTP, schema documented in docs/wire-api.md):

    POST /sessions                    create a session from a scenario
    GET  /sessions/{sid}/tree         full tree document + selection + counts
    POST /sessions/{sid}/command      navigation / expand / export
    GET  /jobs/{token}                expansion job state and progress
    GET  /sessions/{sid}/geometry     densified path samples for rendering

Expansion runs on a worker thread and is reported through a job token: the
UI polls. One expansion at a time per session; any command sent while a job
runs is rejected with 409 so the tree cannot change under the worker.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path as FsPath

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .explorer import Session, densify_path
from .scenarios import ScenarioError, builtin, load_scenario

API_VERSION = 1


class CreateSession(BaseModel):
    scenario: str | None = None
    scenario_text: str | None = None
    params: dict | None = None
    seed: int | None = None


class Command(BaseModel):
    cmd: str
    id: int | None = None
    iterations: int | None = None
    seconds: float | None = None


class _Job:
    def __init__(self, session_id: str):
        self.token = uuid.uuid4().hex[:12]
        self.session_id = session_id
        self.state = "running"
        self.progress = {"iterations": 0, "candidates": 0}
        self.new_nodes: list[int] = []
        self.error: str | None = None


class _SessionSlot:
    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()
        self.job: _Job | None = None

    @property
    def busy(self) -> bool:
        return self.job is not None and self.job.state == "running"


def create_app(scenario_dir: str | None = None, log_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="pathminima session service", version=str(API_VERSION))
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    slots: dict[str, _SessionSlot] = {}
    jobs: dict[str, _Job] = {}

    def _slot(sid: str) -> _SessionSlot:
        slot = slots.get(sid)
        if slot is None:
            raise HTTPException(404, f"no session {sid}")
        return slot

    def _load(req: CreateSession):
        if (req.scenario is None) == (req.scenario_text is None):
            raise HTTPException(422, "provide exactly one of scenario, scenario_text")
        try:
            if req.scenario_text is not None:
                return load_scenario(req.scenario_text)
            name = req.scenario.removeprefix("builtin:")
            if scenario_dir is not None:
                cand = FsPath(scenario_dir) / f"{name}.yaml"
                if cand.is_file():
                    return load_scenario(cand.read_text())
            return builtin(name)
        except ScenarioError as e:
            raise HTTPException(422, str(e))

    def _persist_event(sess: Session) -> None:
        if log_dir is None or not sess.events:
            return
        path = FsPath(log_dir) / f"{sess.id}.events.jsonl"
        with path.open("a") as fh:
            fh.write(json.dumps(sess.events[-1], sort_keys=True) + "\n")

    @app.post("/sessions")
    def create_session(req: CreateSession):
        scenario = _load(req)
        overrides = dict(req.params or {})
        if req.seed is not None:
            overrides["seed"] = req.seed
        try:
            sess = Session(scenario, overrides)
        except (ScenarioError, ValueError, TypeError) as e:
            raise HTTPException(422, str(e))
        slots[sess.id] = _SessionSlot(sess)
        return {
            "session": sess.id,
            "api_version": API_VERSION,
            "scenario": scenario.to_canonical(),
            "view": sess.view(),
        }

    @app.get("/sessions/{sid}/tree")
    def get_tree(sid: str):
        sess = _slot(sid).session
        return {
            "tree": json.loads(sess.tree.serialize()),
            "selection": sess.selection,
            "levels": {str(k): v for k, v in sess.tree.level_counts().items()},
        }

    @app.post("/sessions/{sid}/command")
    def post_command(sid: str, cmd: Command):
        slot = _slot(sid)
        with slot.lock:
            if slot.busy:
                raise HTTPException(409, "an expansion job is running")
            if cmd.cmd == "expand":
                sess = slot.session
                node = sess.tree.nodes[sess.selection]
                if node.level >= sess.chain.K:
                    raise HTTPException(422, "leaf level: cannot expand further")
                job = _Job(sid)
                slot.job = job
                jobs[job.token] = job
                threading.Thread(
                    target=_run_job, args=(slot, job, cmd), daemon=True,
                ).start()
                return {"job": job.token, "selection": sess.selection}
            try:
                view = slot.session.command(cmd.cmd, node_id=cmd.id)
            except ValueError as e:
                raise HTTPException(422, str(e))
            _persist_event(slot.session)
            return view

    def _run_job(slot: _SessionSlot, job: _Job, cmd: Command):
        def on_progress(kind: str, n: int):
            job.progress[kind] = int(n)

        try:
            view = slot.session.command(
                "expand", iterations=cmd.iterations, seconds=cmd.seconds,
                on_progress=on_progress,
            )
            job.new_nodes = view.get("new_nodes", [])
            job.state = "done"
        except Exception as e:
            job.error = str(e)
            job.state = "failed"
        _persist_event(slot.session)

    @app.get("/jobs/{token}")
    def get_job(token: str):
        job = jobs.get(token)
        if job is None:
            raise HTTPException(404, f"no job {token}")
        out = {"state": job.state, "progress": dict(job.progress)}
        if job.state == "done":
            out["new_nodes"] = list(job.new_nodes)
        if job.error is not None:
            out["error"] = job.error
        return out

    @app.get("/sessions/{sid}/geometry")
    def get_geometry(sid: str, node: int, samples: int = 128):
        sess = _slot(sid).session
        rec = sess.tree.nodes.get(node)
        if rec is None:
            raise HTTPException(404, f"no node {node}")
        if rec.path is None:
            raise HTTPException(422, "root has no path geometry")
        dense = densify_path(rec.path, samples)
        robot = sess.scenario.robots[rec.level]
        return {
            "node": rec.id,
            "level": rec.level,
            "k_levels": sess.chain.K,
            "coords": [[float(v) for v in row] for row in dense],
            "workspace": [[float(v) for v in row[:2]] for row in dense],
            "robot": robot.to_dict(),
        }

    return app
