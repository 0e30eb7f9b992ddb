import os
import time

import pytest
from fastapi.testclient import TestClient

from loopdmd.service import TaskManager, create_app

from corpus import WALKTHROUGH

OVERSIZED = """\
params N;
array A[N];
for a in 0 .. N {
  for b in 0 .. N {
    for c in 0 .. N {
      for d in 0 .. N {
        for e in 0 .. N {
          read A[a + b + c + d + e];
        }
      }
    }
  }
}
"""


def slow_job(source: str, config: dict) -> dict:
    time.sleep(0.6)
    return {"ok": True, "source_len": len(source)}


def crashing_job(source: str, config: dict) -> dict:
    os._exit(3)


def sleepy_job(source: str, config: dict) -> dict:
    time.sleep(30)
    return {"never": "returned"}


@pytest.fixture()
def quick_manager():
    manager = TaskManager(concurrency=2, timeout_seconds=10, queue_limit=50, runner=slow_job)
    yield manager
    manager.shutdown()


def wait_until(predicate, timeout=30.0, interval=0.05):
    deadline = time.time() + timeout
    while time.time() < deadline:
        if predicate():
            return True
        time.sleep(interval)
    return False


def test_submit_and_poll_roundtrip(quick_manager):
    client = TestClient(create_app(quick_manager))
    resp = client.post("/api/tasks", json={"source": "read A[0];", "config": {}})
    assert resp.status_code == 202
    task_id = resp.json()["id"]
    first = client.get(f"/api/tasks/{task_id}")
    assert first.status_code == 200
    assert first.json()["state"] in ("queued", "running")
    assert wait_until(lambda: client.get(f"/api/tasks/{task_id}").json()["state"] == "done")
    doc = client.get(f"/api/tasks/{task_id}").json()
    assert doc["result"] == {"ok": True, "source_len": len("read A[0];")}
    assert "finished_at" in doc


def test_malformed_bodies_400(quick_manager):
    client = TestClient(create_app(quick_manager))
    assert client.post("/api/tasks", json={}).status_code == 400
    assert client.post("/api/tasks", json={"source": 7}).status_code == 400
    assert client.post("/api/tasks", json={"source": "x", "config": 3}).status_code == 400
    assert (
        client.post("/api/tasks", json={"source": "x", "config": {"block_size": 0}}).status_code
        == 400
    )
    assert (
        client.post("/api/tasks", content=b"not json", headers={"content-type": "application/json"})
    ).status_code == 400


def test_unknown_id_404(quick_manager):
    client = TestClient(create_app(quick_manager))
    assert client.get("/api/tasks/no-such-task").status_code == 404


def test_queue_full_429():
    manager = TaskManager(concurrency=1, timeout_seconds=10, queue_limit=2, runner=slow_job)
    try:
        client = TestClient(create_app(manager))
        codes = [
            client.post("/api/tasks", json={"source": "s", "config": {}}).status_code
            for _ in range(12)
        ]
        assert 429 in codes
        assert codes[0] == 202
    finally:
        manager.shutdown()


def test_concurrency_bound_under_burst():
    manager = TaskManager(concurrency=3, timeout_seconds=20, queue_limit=64, runner=slow_job)
    try:
        client = TestClient(create_app(manager))
        ids = []
        for _ in range(20):
            resp = client.post("/api/tasks", json={"source": "s", "config": {}})
            assert resp.status_code == 202
            ids.append(resp.json()["id"])
        max_running = 0
        deadline = time.time() + 60
        while time.time() < deadline:
            states = manager.states()
            max_running = max(max_running, sum(1 for s in states.values() if s == "running"))
            if all(states[i] == "done" for i in ids):
                break
            time.sleep(0.02)
        states = manager.states()
        assert all(states[i] == "done" for i in ids)
        assert max_running <= 3
        assert max_running >= 2  # the pool actually ran jobs in parallel
    finally:
        manager.shutdown()


def test_timeout_transitions_and_abandons():
    manager = TaskManager(concurrency=2, timeout_seconds=1, queue_limit=8, runner=sleepy_job)
    try:
        client = TestClient(create_app(manager))
        task_id = client.post("/api/tasks", json={"source": "s", "config": {}}).json()["id"]
        start = time.time()
        assert wait_until(
            lambda: client.get(f"/api/tasks/{task_id}").json()["state"] == "timed_out",
            timeout=15,
        )
        assert time.time() - start < 10
        doc = client.get(f"/api/tasks/{task_id}").json()
        assert "result" not in doc
        assert "timeout" in doc["error"]["message"]
    finally:
        manager.shutdown()


def test_oversized_program_times_out_with_real_runner():
    manager = TaskManager(concurrency=1, timeout_seconds=1, queue_limit=4)
    try:
        client = TestClient(create_app(manager))
        task_id = client.post("/api/tasks", json={"source": OVERSIZED, "config": {}}).json()["id"]
        assert wait_until(
            lambda: client.get(f"/api/tasks/{task_id}").json()["state"] == "timed_out",
            timeout=20,
        )
    finally:
        manager.shutdown()


def test_crashing_job_is_isolated():
    manager = TaskManager(concurrency=2, timeout_seconds=10, queue_limit=8, runner=crashing_job)
    try:
        client = TestClient(create_app(manager))
        task_id = client.post("/api/tasks", json={"source": "s", "config": {}}).json()["id"]
        assert wait_until(
            lambda: client.get(f"/api/tasks/{task_id}").json()["state"] == "failed", timeout=15
        )
        doc = client.get(f"/api/tasks/{task_id}").json()
        assert "crashed" in doc["error"]["message"]
        # the server keeps serving after the crash
        assert client.get(f"/api/tasks/{task_id}").status_code == 200
        second = client.post("/api/tasks", json={"source": "s2", "config": {}})
        assert second.status_code == 202
    finally:
        manager.shutdown()


def test_diagnostics_produce_failed_state():
    manager = TaskManager(concurrency=1, timeout_seconds=30, queue_limit=4)
    try:
        client = TestClient(create_app(manager))
        task_id = client.post(
            "/api/tasks", json={"source": "read A[i*j];", "config": {}}
        ).json()["id"]
        assert wait_until(
            lambda: client.get(f"/api/tasks/{task_id}").json()["state"] == "failed", timeout=30
        )
        doc = client.get(f"/api/tasks/{task_id}").json()
        assert doc["error"]["diagnostics"]
    finally:
        manager.shutdown()


def test_real_analysis_returns_cli_schema_result():
    manager = TaskManager(concurrency=2, timeout_seconds=60, queue_limit=4)
    try:
        client = TestClient(create_app(manager))
        task_id = client.post(
            "/api/tasks",
            json={"source": WALKTHROUGH, "config": {"block_size": 1, "num_sets": 1}},
        ).json()["id"]
        assert wait_until(
            lambda: client.get(f"/api/tasks/{task_id}").json()["state"] == "done", timeout=60
        )
        result = client.get(f"/api/tasks/{task_id}").json()["result"]
        assert result["dmd"]["plain"] == "M * N + M + (M * N - M) * sqrt(2 * M)"
        assert result["counts"]["n_total"]["plain"] == "2 * M * N"
        assert result["groups"][0]["scaling"] is True
    finally:
        manager.shutdown()


def test_finished_tasks_expire():
    manager = TaskManager(
        concurrency=1, timeout_seconds=10, queue_limit=4, retention_seconds=0.2, runner=slow_job
    )
    try:
        client = TestClient(create_app(manager))
        task_id = client.post("/api/tasks", json={"source": "s", "config": {}}).json()["id"]
        assert wait_until(
            lambda: client.get(f"/api/tasks/{task_id}").json().get("state") == "done", timeout=15
        )
        time.sleep(0.4)
        assert client.get(f"/api/tasks/{task_id}").status_code == 404
    finally:
        manager.shutdown()
