"""HTTP service hosting asynchronous analysis jobs for the browser playground.

POST /api/tasks      {"source": str, "config": {...}} -> 202 {"id": token}
GET  /api/tasks/{id} -> {"id", "state", "result"?, "error"?, ...}

Jobs run in forked subprocesses on a fixed-size worker pool, so the
concurrency bound holds by construction, a timeout can actually abandon
the computation (the child is terminated), and a crashing job cannot take
the server down. Completed tasks expire after a retention window.
"""

from __future__ import annotations

import argparse
import multiprocessing
import os
import queue
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from starlette.requests import Request

from .errors import SourceError
from .parser import parse_source
from .report import build_symbolic_report
from .semantics import validate
from .symbolic import analyze_symbolic, assemble_dmd
from .symbolic_config import SymbolicConfig

DEFAULT_CONCURRENCY = 4
DEFAULT_TIMEOUT_SECONDS = 30.0
DEFAULT_QUEUE_LIMIT = 64
DEFAULT_RETENTION_SECONDS = 600.0

QUEUED = "queued"
RUNNING = "running"
DONE = "done"
FAILED = "failed"
TIMED_OUT = "timed_out"

_TERMINAL = (DONE, FAILED, TIMED_OUT)

JobRunner = Callable[[str, dict], dict]


def run_analysis_job(source: str, config: dict) -> dict:
    """Default job: full symbolic analysis returning the CLI JSON document."""
    block_size = int(config.get("block_size", 1))
    num_sets = int(config.get("num_sets", 1))
    validated = validate(parse_source(source))
    dist = analyze_symbolic(validated, block_size, num_sets, SymbolicConfig())
    dmd = assemble_dmd(dist)
    return build_symbolic_report(
        validated,
        dist,
        dmd,
        {
            "block_size": block_size,
            "num_sets": num_sets,
            "mode": "symbolic",
            "period": dist.period,
            "degree_bound": dist.degree,
            "grid_bindings": len(dist.grid),
            "validation_bindings": len(dist.validation),
        },
    )


def _child_main(runner: JobRunner, source: str, config: dict, conn) -> None:
    try:
        result = runner(source, config)
        conn.send((DONE, result, None))
    except SourceError as e:
        conn.send((FAILED, None, {"diagnostics": [d.to_json() for d in e.diagnostics]}))
    except BaseException as e:  # noqa: BLE001 - report, never crash silently
        conn.send((FAILED, None, {"message": f"{type(e).__name__}: {e}"}))
    finally:
        conn.close()


@dataclass
class Task:
    id: str
    source: str
    config: dict
    state: str = QUEUED
    result: dict | None = None
    error: dict | None = None
    submitted_at: float = field(default_factory=time.time)
    finished_at: float | None = None

    def to_json(self) -> dict:
        doc: dict[str, Any] = {
            "id": self.id,
            "state": self.state,
            "submitted_at": self.submitted_at,
        }
        if self.state == DONE:
            doc["result"] = self.result
        if self.error is not None:
            doc["error"] = self.error
        if self.finished_at is not None:
            doc["finished_at"] = self.finished_at
        return doc


class TaskManager:
    """Bounded queue feeding a fixed pool of worker threads.

    Each worker runs one job at a time in a forked child process, enforcing
    the timeout by terminating the child. At most ``concurrency`` tasks are
    in the running state simultaneously.
    """

    def __init__(
        self,
        concurrency: int = DEFAULT_CONCURRENCY,
        timeout_seconds: float = DEFAULT_TIMEOUT_SECONDS,
        queue_limit: int = DEFAULT_QUEUE_LIMIT,
        retention_seconds: float = DEFAULT_RETENTION_SECONDS,
        runner: JobRunner = run_analysis_job,
    ):
        self.concurrency = concurrency
        self.timeout_seconds = timeout_seconds
        self.retention_seconds = retention_seconds
        self.runner = runner
        self._ctx = multiprocessing.get_context("fork")
        self._queue: queue.Queue[str | None] = queue.Queue(maxsize=queue_limit)
        self._tasks: dict[str, Task] = {}
        self._lock = threading.Lock()
        self._workers = [
            threading.Thread(target=self._worker, name=f"job-worker-{i}", daemon=True)
            for i in range(concurrency)
        ]
        for w in self._workers:
            w.start()

    # -- public API --------------------------------------------------------

    def submit(self, source: str, config: dict) -> str | None:
        """Queue a job; returns the task id, or None when the queue is full."""
        self.sweep()
        task = Task(id=secrets.token_urlsafe(16), source=source, config=config)
        with self._lock:
            self._tasks[task.id] = task
        try:
            self._queue.put_nowait(task.id)
        except queue.Full:
            with self._lock:
                del self._tasks[task.id]
            return None
        return task.id

    def get(self, task_id: str) -> Task | None:
        self.sweep()
        with self._lock:
            return self._tasks.get(task_id)

    def states(self) -> dict[str, str]:
        with self._lock:
            return {tid: t.state for tid, t in self._tasks.items()}

    def running_count(self) -> int:
        with self._lock:
            return sum(1 for t in self._tasks.values() if t.state == RUNNING)

    def sweep(self) -> None:
        """Drop finished tasks older than the retention window."""
        cutoff = time.time() - self.retention_seconds
        with self._lock:
            stale = [
                tid
                for tid, t in self._tasks.items()
                if t.state in _TERMINAL and (t.finished_at or 0) < cutoff
            ]
            for tid in stale:
                del self._tasks[tid]

    def shutdown(self) -> None:
        for _ in self._workers:
            self._queue.put(None)
        for w in self._workers:
            w.join(timeout=5)

    # -- worker ---------------------------------------------------------------

    def _worker(self) -> None:
        while True:
            task_id = self._queue.get()
            if task_id is None:
                return
            with self._lock:
                task = self._tasks.get(task_id)
                if task is None:
                    continue
                task.state = RUNNING
            state, result, error = self._run_job(task)
            with self._lock:
                task.state = state
                task.result = result
                task.error = error
                task.finished_at = time.time()

    def _run_job(self, task: Task) -> tuple[str, dict | None, dict | None]:
        recv, send = self._ctx.Pipe(duplex=False)
        proc = self._ctx.Process(
            target=_child_main,
            args=(self.runner, task.source, task.config, send),
            daemon=True,
        )
        proc.start()
        send.close()
        try:
            if not recv.poll(self.timeout_seconds):
                proc.terminate()
                proc.join(5)
                return TIMED_OUT, None, {
                    "message": f"job exceeded {self.timeout_seconds}s timeout"
                }
            try:
                state, result, error = recv.recv()
            except EOFError:
                return FAILED, None, {"message": "job crashed before reporting a result"}
            return state, result, error
        finally:
            recv.close()
            proc.join(5)
            if proc.is_alive():
                proc.kill()


def create_app(manager: TaskManager, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="loopdmd playground")
    app.state.manager = manager

    @app.post("/api/tasks")
    async def submit(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict) or not isinstance(body.get("source"), str):
            return JSONResponse(
                {"error": 'body must be {"source": str, "config"?: object}'},
                status_code=400,
            )
        config = body.get("config") or {}
        if not isinstance(config, dict):
            return JSONResponse({"error": "config must be an object"}, status_code=400)
        for key in ("block_size", "num_sets"):
            if key in config:
                value = config[key]
                if not isinstance(value, int) or value < 1:
                    return JSONResponse(
                        {"error": f"config.{key} must be an integer >= 1"}, status_code=400
                    )
        task_id = manager.submit(body["source"], config)
        if task_id is None:
            return JSONResponse({"error": "queue full, retry later"}, status_code=429)
        return JSONResponse({"id": task_id}, status_code=202)

    @app.get("/api/tasks/{task_id}")
    async def poll(task_id: str):
        task = manager.get(task_id)
        if task is None:
            return JSONResponse({"error": "unknown task id"}, status_code=404)
        return JSONResponse(task.to_json())

    if static_dir and os.path.isdir(static_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app


def default_static_dir() -> str | None:
    here = os.path.dirname(os.path.abspath(__file__))
    candidates = [
        os.path.join(os.getcwd(), "frontend", "dist"),
        os.path.abspath(os.path.join(here, "..", "..", "frontend", "dist")),
    ]
    for c in candidates:
        if os.path.isdir(c):
            return c
    return None


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(prog="loopdmd-playground")
    p.add_argument("--port", type=int, default=3000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--concurrency", type=int, default=DEFAULT_CONCURRENCY)
    p.add_argument("--timeout-seconds", type=float, default=DEFAULT_TIMEOUT_SECONDS)
    p.add_argument("--queue-limit", type=int, default=DEFAULT_QUEUE_LIMIT)
    p.add_argument("--static-dir", default=None,
                   help="directory of built UI assets served under / "
                        "(default: ./frontend/dist when present)")
    args = p.parse_args(argv)

    import uvicorn

    manager = TaskManager(
        concurrency=args.concurrency,
        timeout_seconds=args.timeout_seconds,
        queue_limit=args.queue_limit,
    )
    app = create_app(manager, static_dir=args.static_dir or default_static_dir())
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
