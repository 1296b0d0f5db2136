"""Telemetry and control over one WebSocket endpoint.

The runtime publishes a TelemetrySnapshot per tick onto a SnapshotBus;
every connected console receives them as JSON. The same socket accepts
the narrow control vocabulary (set_param, virtual_visitor, mode) which is
queued for the loop thread and applied between ticks. Raw servo commands
have no path through here by design.
"""

from __future__ import annotations

import asyncio
import queue
import threading
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .runtime import TelemetrySnapshot

CONTROL_TYPES = ("set_param", "virtual_visitor", "mode")


class Subscription:
    def __init__(self, bus: "SnapshotBus", q: "queue.Queue[TelemetrySnapshot]"):
        self._bus = bus
        self._q = q

    def get(self, timeout: float = 0.25) -> TelemetrySnapshot | None:
        try:
            return self._q.get(timeout=timeout)
        except queue.Empty:
            return None

    def close(self) -> None:
        self._bus._drop(self._q)


class SnapshotBus:
    """Thread-safe fan-out of snapshots; slow consumers lose old ones."""

    def __init__(self, depth: int = 256):
        self._depth = depth
        self._lock = threading.Lock()
        self._queues: list[queue.Queue] = []
        self.latest: TelemetrySnapshot | None = None

    def publish(self, snapshot: TelemetrySnapshot) -> None:
        with self._lock:
            self.latest = snapshot
            for q in self._queues:
                while True:
                    try:
                        q.put_nowait(snapshot)
                        break
                    except queue.Full:
                        try:
                            q.get_nowait()
                        except queue.Empty:
                            pass

    def subscribe(self) -> Subscription:
        q: "queue.Queue[TelemetrySnapshot]" = queue.Queue(maxsize=self._depth)
        with self._lock:
            if self.latest is not None:
                q.put_nowait(self.latest)
            self._queues.append(q)
        return Subscription(self, q)

    def _drop(self, q) -> None:
        with self._lock:
            if q in self._queues:
                self._queues.remove(q)


def make_app(
    bus: SnapshotBus,
    control_queue: "queue.Queue[dict]",
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="wastive console backend")

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        sub = bus.subscribe()

        async def sender():
            while True:
                snap = await asyncio.to_thread(sub.get, 0.25)
                if snap is not None:
                    await ws.send_json(snap.to_json_dict())

        async def receiver():
            while True:
                msg = await ws.receive_json()
                if isinstance(msg, dict) and msg.get("type") in CONTROL_TYPES:
                    control_queue.put(msg)
                else:
                    await ws.send_json(
                        {"type": "error", "error": f"unsupported message: {msg!r:.120}"}
                    )

        tasks = [asyncio.create_task(sender()), asyncio.create_task(receiver())]
        try:
            done, pending = await asyncio.wait(tasks, return_when=asyncio.FIRST_COMPLETED)
            for t in done:
                exc = t.exception()
                if exc is not None and not isinstance(exc, WebSocketDisconnect):
                    raise exc
        except WebSocketDisconnect:
            pass
        finally:
            for t in tasks:
                t.cancel()
            sub.close()

    if static_dir is not None and Path(static_dir).is_dir():
        index = Path(static_dir) / "index.html"

        @app.get("/")
        async def root():
            if index.is_file():
                return FileResponse(index)
            return JSONResponse({"service": "wastive", "console": "not built"})

        app.mount("/static", StaticFiles(directory=str(static_dir)), name="static")
    else:

        @app.get("/")
        async def root_stub():
            return JSONResponse({"service": "wastive", "console": "not built"})

    return app
