"""HTTP facade: vitals estimation jobs, patient CRUD/ranking, dialog sessions.

Estimation runs asynchronously: POST a frame payload, get a job id back,
poll until the job is done. The triage and dialog endpoints are thin
passthroughs over the library modules; responses serialize the module
outputs directly so HTTP adds no logic of its own.

Configuration comes from an optional JSON file overridden by the
environment variables PORT, STORE_PATH, MAX_FRAMES and WORKERS.
"""

from __future__ import annotations

import json
import os
import queue
import threading
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import dialog as dialog_mod
from . import triage as triage_mod
from .errors import VitalkitError
from .frameio import FrameSequence, decode_base64_frame, load_sequence
from .vitals import Spo2Calibration, estimate_hr, estimate_rr, estimate_spo2

JOB_STATES = ("queued", "running", "done", "failed")


@dataclass
class ServiceConfig:
    port: int = 8000
    store_path: str = "patients.json"
    max_frames: int = 2000
    workers: int = 2

    @classmethod
    def load(cls, path: Path | str | None = None) -> "ServiceConfig":
        values = {}
        if path is not None:
            values.update(json.loads(Path(path).read_text()))
        env_map = {
            "PORT": ("port", int),
            "STORE_PATH": ("store_path", str),
            "MAX_FRAMES": ("max_frames", int),
            "WORKERS": ("workers", int),
        }
        for env_name, (attr, cast) in env_map.items():
            if env_name in os.environ:
                values[attr] = cast(os.environ[env_name])
        return cls(**values)


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


@dataclass
class VitalsJob:
    job_id: str
    kind: str
    seq: FrameSequence | None
    roi_mode: str = "auto"
    cal: Spo2Calibration | None = None
    state: str = "queued"
    result: dict | None = None
    error: str | None = None
    created_at: str = field(default_factory=_now_iso)
    started_at: str | None = None
    finished_at: str | None = None

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "kind": self.kind,
            "state": self.state,
            "result": self.result,
            "error": self.error,
            "created_at": self.created_at,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }


class JobManager:
    """Bounded worker pool draining an in-process job queue.

    Job state only moves queued -> running -> done|failed; transitions
    happen under the lock, results are written before the state flips.
    """

    def __init__(self, workers: int):
        self._jobs: dict[str, VitalsJob] = {}
        self._queue: queue.Queue = queue.Queue()
        self._lock = threading.Lock()
        self._threads = [
            threading.Thread(target=self._work, daemon=True, name=f"vitals-worker-{i}")
            for i in range(max(1, workers))
        ]

    def start(self) -> None:
        for t in self._threads:
            t.start()

    def stop(self) -> None:
        for _ in self._threads:
            self._queue.put(None)

    def submit(self, job: VitalsJob) -> str:
        with self._lock:
            self._jobs[job.job_id] = job
        self._queue.put(job.job_id)
        return job.job_id

    def get(self, job_id: str) -> VitalsJob | None:
        with self._lock:
            return self._jobs.get(job_id)

    def _work(self) -> None:
        while True:
            job_id = self._queue.get()
            if job_id is None:
                return
            with self._lock:
                job = self._jobs[job_id]
                job.state = "running"
                job.started_at = _now_iso()
            try:
                result = self._run(job)
                with self._lock:
                    job.result = result
                    job.state = "done"
                    job.finished_at = _now_iso()
            except Exception as exc:
                with self._lock:
                    job.error = str(exc)
                    job.state = "failed"
                    job.finished_at = _now_iso()
            finally:
                job.seq = None  # release the frames; only the report is kept

    @staticmethod
    def _run(job: VitalsJob) -> dict:
        if job.kind == "hr":
            report = estimate_hr(job.seq, job.roi_mode)
        elif job.kind == "rr":
            report = estimate_rr(job.seq)
        else:
            report = estimate_spo2(job.seq, job.cal or Spo2Calibration())
        return report.to_dict()


class CalibrationBody(BaseModel):
    A: float
    B: float


class JobBody(BaseModel):
    kind: Literal["hr", "rr", "spo2"]
    fps: float
    frames: list[str] | None = None
    dir: str | None = None
    roi: str | None = None
    cal: CalibrationBody | None = None


class StepBody(BaseModel):
    choice: str | None = None


class SessionBody(BaseModel):
    graph_id: str


def _node_view(session: dialog_mod.DialogSession) -> dict:
    node = session.current_node
    return {
        "node_id": node.id,
        "text": node.text,
        "choices": node.choice_labels(),
        "is_checkpoint": node.is_checkpoint,
        "ended": node.is_terminal,
    }


def create_app(config: ServiceConfig | None = None, graphs: dict | None = None) -> FastAPI:
    config = config or ServiceConfig.load()
    if graphs is None:
        graphs = {"screening": dialog_mod.load_builtin_graph()}

    jobs = JobManager(config.workers)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        jobs.start()
        yield
        jobs.stop()

    app = FastAPI(title="vitalkit service", lifespan=lifespan)
    app.state.config = config
    app.state.jobs = jobs
    app.state.store = triage_mod.PatientStore(config.store_path)
    app.state.graphs = graphs
    app.state.sessions = {}
    app.state.sessions_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def validation_to_400(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "bad payload"})

    def error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    # ---- vitals jobs ------------------------------------------------------

    @app.post("/v1/vitals/jobs", status_code=202)
    def submit_job(body: JobBody):
        if (body.frames is None) == (body.dir is None):
            return error(400, "exactly one of frames or dir is required")
        if body.frames is not None and len(body.frames) > config.max_frames:
            return error(413, "frame count over configured limit")
        try:
            if body.frames is not None:
                frames = tuple(decode_base64_frame(p) for p in body.frames)
                seq = FrameSequence(frames, body.fps, source_id="upload")
            else:
                seq = load_sequence(body.dir, body.fps)
        except VitalkitError as exc:
            return error(400, str(exc))
        if len(seq.frames) > config.max_frames:
            return error(413, "frame count over configured limit")
        cal = None
        if body.cal is not None:
            try:
                cal = Spo2Calibration(body.cal.A, body.cal.B)
            except VitalkitError as exc:
                return error(400, str(exc))
        job = VitalsJob(
            job_id=uuid.uuid4().hex,
            kind=body.kind,
            seq=seq,
            roi_mode=body.roi or "auto",
            cal=cal,
        )
        jobs.submit(job)
        return {"job_id": job.job_id}

    @app.get("/v1/vitals/jobs/{job_id}")
    def job_status(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return error(404, "not found")
        return job.to_dict()

    # ---- patients ---------------------------------------------------------

    def _record_from_payload(payload: dict, record_id: str | None = None):
        data = dict(payload)
        if record_id is not None:
            data["id"] = record_id
        elif not data.get("id"):
            data["id"] = triage_mod.new_patient_id()
        return triage_mod.PatientRecord.from_dict(data)

    @app.get("/v1/patients")
    def list_patients(sort: str | None = None, name: str | None = None, age: float | None = None):
        store = app.state.store
        if name is not None or age is not None:
            records = store.search(name=name, age=age)
        else:
            records = store.all_records()
        if sort == "score":
            ranked = triage_mod.rank(records)
            by_id = {r.id: r for r in records}
            return {
                "patients": [
                    {
                        **by_id[s.patient_id].to_dict(),
                        "score": s.score,
                        "contributions": s.contributions,
                    }
                    for s in ranked
                ]
            }
        return {"patients": [r.to_dict() for r in records]}

    @app.post("/v1/patients", status_code=201)
    def create_patient(payload: dict):
        try:
            record = _record_from_payload(payload)
            stored = app.state.store.upsert(record)
        except VitalkitError as exc:
            return error(400, str(exc))
        return stored.to_dict()

    @app.get("/v1/patients/{patient_id}")
    def get_patient(patient_id: str):
        try:
            return app.state.store.get(patient_id).to_dict()
        except VitalkitError:
            return error(404, "not found")

    @app.put("/v1/patients/{patient_id}")
    def put_patient(patient_id: str, payload: dict, response: Response):
        store = app.state.store
        existed = True
        try:
            store.get(patient_id)
        except VitalkitError:
            existed = False
        try:
            record = _record_from_payload(payload, record_id=patient_id)
            stored = store.upsert(record)
        except VitalkitError as exc:
            return error(400, str(exc))
        response.status_code = 200 if existed else 201
        return stored.to_dict()

    @app.delete("/v1/patients/{patient_id}", status_code=204)
    def delete_patient(patient_id: str):
        try:
            app.state.store.delete(patient_id)
        except VitalkitError:
            return error(404, "not found")
        return Response(status_code=204)

    # ---- dialog -----------------------------------------------------------

    @app.post("/v1/dialog/sessions", status_code=201)
    def create_session(body: SessionBody):
        graph = app.state.graphs.get(body.graph_id)
        if graph is None:
            return error(404, "not found")
        session = dialog_mod.start_session(graph)
        session_id = uuid.uuid4().hex
        with app.state.sessions_lock:
            app.state.sessions[session_id] = session
        return {"session_id": session_id, "node": _node_view(session)}

    def _session_op(session_id: str, fn):
        with app.state.sessions_lock:
            session = app.state.sessions.get(session_id)
        if session is None:
            return error(404, "not found")
        try:
            fn(session)
        except VitalkitError as exc:
            msg = str(exc)
            status = 409 if msg in ("session ended", "no checkpoint") else 400
            return error(status, msg)
        return {"session_id": session_id, "node": _node_view(session)}

    @app.post("/v1/dialog/sessions/{session_id}/step")
    def step_session(session_id: str, body: StepBody | None = None):
        choice = body.choice if body is not None else None
        return _session_op(session_id, lambda s: dialog_mod.step(s, choice))

    @app.post("/v1/dialog/sessions/{session_id}/return")
    def return_session(session_id: str):
        return _session_op(session_id, dialog_mod.return_to_checkpoint)

    return app
