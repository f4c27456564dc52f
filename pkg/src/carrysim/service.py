"""Live session service: a WebSocket endpoint (/session) through which an
operator injects the human's force and button presses and receives per-tick
state, plus the deterministic replay machinery for recorded sessions."""

from __future__ import annotations

import asyncio
import http
import json
import math
import threading
from collections import deque
from pathlib import Path

from .config import SimConfig
from .engine import LiveInput, Simulation, TickRecord
from .geometry import Vec2, ZERO
from .intention import COMMANDS
from .scenario import Scenario, load_scenario, scenario_from_dict, scenario_to_dict

CLIENT_TYPES = ("hello", "set_force", "button_down", "button_up", "reset", "pause")
INBOX_CAP = 64


def parse_client_message(text: str) -> dict:
    """Single-line JSON frame -> message dict; raises ValueError on bad frames."""
    try:
        msg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"not valid JSON: {e}") from None
    if not isinstance(msg, dict) or msg.get("type") not in CLIENT_TYPES:
        raise ValueError(f"unknown message type {msg.get('type') if isinstance(msg, dict) else msg!r}")
    if msg["type"] == "set_force":
        force = msg.get("force")
        if (not isinstance(force, (list, tuple)) or len(force) != 2
                or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in force)):
            raise ValueError("set_force needs a finite [x, y] force")
    if msg["type"] in ("button_down", "button_up") and msg.get("button") not in COMMANDS:
        raise ValueError(f"unknown button {msg.get('button')!r}")
    return msg


def serialize_server_message(msg: dict) -> str:
    return json.dumps(msg, sort_keys=True, separators=(",", ":"))


class Session:
    """One live simulation plus its operator input state. Network-agnostic: the
    WebSocket layer feeds ingest() and drains tick(); tests may drive it directly."""

    def __init__(self, scenario: Scenario, seed: int = 0,
                 config: SimConfig | None = None, record_projections: bool = True):
        self.scenario = scenario
        self.seed = seed
        self.base_config = config
        self.record_projections = record_projections
        self.sim = Simulation(scenario, policy=None, seed=seed, config=config,
                              record_projections=record_projections)
        self.held_force = ZERO
        self.paused = False
        self.inbox: deque[dict] = deque()
        self.message_log: list[dict] = []
        self.trace: list[TickRecord] = []
        self._presses: list[str] = []
        self._releases: list[str] = []
        self._total_steps = 0

    # -- inbound -------------------------------------------------------------

    def ingest(self, msg: dict) -> None:
        """Queue a client message. The queue is bounded: overflow evicts the
        oldest set_force, never a button event."""
        if len(self.inbox) >= INBOX_CAP:
            for i, queued in enumerate(self.inbox):
                if queued["type"] == "set_force":
                    del self.inbox[i]
                    break
            else:
                if msg["type"] == "set_force":
                    return  # queue full of button events; drop the newcomer
        self.inbox.append(msg)

    def hello_ack(self) -> dict:
        return {
            "type": "hello_ack",
            "scenario": self.scenario.name,
            "seed": self.seed,
            "config": self.sim.config.canonical(),
            "config_hash": self.sim.config.config_hash(),
            "buttons_enabled": self.scenario.buttons_enabled,
            "arena": [self.scenario.arena[0], self.scenario.arena[1]],
            "obstacles": [
                {"vertices": [v.as_list() for v in o.vertices]}
                for o in self.scenario.obstacles
            ],
            "goal": self.scenario.goal.as_list(),
        }

    def _apply(self, msg: dict) -> None:
        kind = msg["type"]
        self.message_log.append({"tick": self.sim.tick_index, "msg": msg})
        if kind == "set_force":
            self.held_force = Vec2.from_list(msg["force"]).clamped(
                self.sim.config.f_human_max
            )
        elif kind == "button_down":
            self._presses.append(msg["button"])
        elif kind == "button_up":
            self._releases.append(msg["button"])
        elif kind == "pause":
            self.paused = not self.paused
        elif kind == "reset":
            scenario = self.scenario
            if msg.get("scenario"):
                scenario = load_scenario(msg["scenario"])
                self.scenario = scenario
            self.sim = Simulation(scenario, policy=None, seed=self.seed,
                                  config=self.base_config,
                                  record_projections=self.record_projections)
            self.held_force = ZERO
            self.paused = False
            self.trace = []
            self._presses = []
            self._releases = []

    def tick(self) -> TickRecord | None:
        """Apply every queued message, then advance one step unless paused or the
        episode already ended."""
        while self.inbox:
            self._apply(self.inbox.popleft())
        if self.paused or self.sim.outcome is not None:
            return None
        live = LiveInput(
            force=self.held_force,
            presses=tuple(self._presses),
            releases=tuple(self._releases),
        )
        self._presses = []
        self._releases = []
        record = self.sim.step(live)
        self.trace.append(record)
        self._total_steps += 1
        return record

    # -- persistence -----------------------------------------------------------

    def write_trace(self, path: str | Path) -> None:
        from .engine import write_trace
        write_trace(path, self.trace, self.sim.config, self.seed,
                    self.scenario.name, self.sim.outcome or "Running")

    def write_replay_log(self, path: str | Path) -> None:
        """Self-contained session log: the scenario, seed, base config and every
        applied message stamped with the tick it took effect on."""
        header = {
            "scenario": scenario_to_dict(self.scenario),
            "seed": self.seed,
            "config": (self.base_config or SimConfig()).canonical(),
            "config_hash": self.sim.config.config_hash(),
            "record_projections": self.record_projections,
            "ticks": self._total_steps,
        }
        lines = [json.dumps(header, sort_keys=True, separators=(",", ":"))]
        lines.extend(
            json.dumps(entry, sort_keys=True, separators=(",", ":"))
            for entry in self.message_log
        )
        Path(path).write_text("\n".join(lines) + "\n")


def replay_session(log_path: str | Path, max_ticks: int | None = None) -> Session:
    """Re-run a recorded session: messages land on the exact ticks where the live
    run applied them, so the trace reproduces byte-identically."""
    lines = Path(log_path).read_text().splitlines()
    header = json.loads(lines[0])
    scenario = scenario_from_dict(header["scenario"])
    session = Session(
        scenario,
        seed=header["seed"],
        config=SimConfig.from_canonical(header["config"]),
        record_projections=header.get("record_projections", True),
    )
    entries = [json.loads(line) for line in lines[1:]]
    if max_ticks is not None:
        target = max_ticks
    else:
        target = header.get("ticks", max((e["tick"] for e in entries), default=0) + 1)
    pos = 0
    steps = 0
    while steps < target and session.sim.outcome is None:
        while pos < len(entries) and entries[pos]["tick"] <= session.sim.tick_index:
            msg = entries[pos]["msg"]
            if msg["type"] == "hello":
                pos += 1
                continue
            session.ingest(msg)
            pos += 1
        if session.tick() is not None:
            steps += 1
        elif pos >= len(entries):
            break  # paused with no further input: nothing more can happen
    return session


# -- WebSocket plumbing ----------------------------------------------------------


_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def _static_response(static_dir: Path, path: str):
    from websockets.datastructures import Headers
    from websockets.http11 import Response

    if path in ("", "/"):
        path = "/index.html"
    target = (static_dir / path.lstrip("/")).resolve()
    try:
        target.relative_to(static_dir.resolve())
    except ValueError:
        return Response(http.HTTPStatus.FORBIDDEN.value, "Forbidden", Headers(), b"")
    if not target.is_file():
        return Response(http.HTTPStatus.NOT_FOUND.value, "Not Found", Headers(), b"not found")
    body = target.read_bytes()
    headers = Headers()
    headers["Content-Type"] = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
    headers["Content-Length"] = str(len(body))
    return Response(http.HTTPStatus.OK.value, "OK", headers, body)


class SessionServer:
    """Steps a session in real time and fans state out to connected clients.
    Slow clients receive the freshest tick only (their queue holds one record)."""

    def __init__(self, scenario: Scenario, port: int = 8765, seed: int = 0,
                 config: SimConfig | None = None, host: str = "127.0.0.1",
                 static_dir: str | Path | None = None, speed: float = 1.0,
                 trace_out: str | Path | None = None,
                 replay_out: str | Path | None = None):
        self.session = Session(scenario, seed=seed, config=config)
        self.host = host
        self.port = port
        self.speed = speed
        self.static_dir = Path(static_dir) if static_dir else None
        self.trace_out = trace_out
        self.replay_out = replay_out
        self._queues: dict = {}
        self._stop = asyncio.Event()
        self.bound_port: int | None = None
        self._episode_over_sent = False
        self.announce = False

    async def _handler(self, ws):
        # state fan-out starts only after the client's hello/ack handshake
        queue: asyncio.Queue = asyncio.Queue(maxsize=1)
        sender = asyncio.create_task(self._sender(ws, queue))
        try:
            async for raw in ws:
                try:
                    msg = parse_client_message(raw)
                except ValueError as e:
                    await ws.send(serialize_server_message(
                        {"type": "error", "error": str(e)}))
                    continue
                if msg["type"] == "hello":
                    await ws.send(serialize_server_message(self.session.hello_ack()))
                    latest = self.session.trace[-1] if self.session.trace else None
                    if latest is not None:
                        await ws.send(serialize_server_message(
                            {"type": "state", "tick": latest.to_dict()}))
                    self._queues[ws] = queue
                else:
                    self.session.ingest(msg)
        finally:
            sender.cancel()
            self._queues.pop(ws, None)

    async def _sender(self, ws, queue: asyncio.Queue) -> None:
        while True:
            msg = await queue.get()
            try:
                await ws.send(msg)
            except Exception:
                return

    def _offer(self, text: str) -> None:
        for queue in self._queues.values():
            if queue.full():
                try:
                    queue.get_nowait()  # drop the stale tick, keep order
                except asyncio.QueueEmpty:
                    pass
            queue.put_nowait(text)

    async def _stepper(self) -> None:
        dt = self.session.sim.config.dt
        while not self._stop.is_set():
            record = self.session.tick()
            if record is not None:
                self._offer(serialize_server_message(
                    {"type": "state", "tick": record.to_dict()}))
            outcome = self.session.sim.outcome
            if outcome is not None and not self._episode_over_sent:
                self._episode_over_sent = True
                self._offer(serialize_server_message(
                    {"type": "episode_end", "outcome": outcome}))
                if self.trace_out:
                    self.session.write_trace(self.trace_out)
                if self.replay_out:
                    self.session.write_replay_log(self.replay_out)
            if outcome is None:
                self._episode_over_sent = False
            try:
                await asyncio.wait_for(self._stop.wait(), timeout=dt / self.speed)
            except asyncio.TimeoutError:
                pass

    async def run(self, ready: threading.Event | None = None) -> None:
        from websockets.asyncio.server import serve

        def process_request(connection, request):
            if request.path == "/session" or "Upgrade" in request.headers.get(
                    "Connection", ""):
                return None
            if self.static_dir is not None:
                return _static_response(self.static_dir, request.path.split("?")[0])
            return None

        async with serve(self._handler, self.host, self.port,
                         process_request=process_request) as server:
            self.bound_port = server.sockets[0].getsockname()[1] if hasattr(
                server, "sockets") and server.sockets else self.port
            if ready is not None:
                ready.set()
            if self.announce:
                print(f"listening on ws://{self.host}:{self.bound_port}/session",
                      flush=True)
            stepper = asyncio.create_task(self._stepper())
            await self._stop.wait()
            stepper.cancel()

    def stop(self) -> None:
        self._stop.set()


def serve_forever(scenario: Scenario, port: int, **kwargs) -> None:
    server = SessionServer(scenario, port=port, **kwargs)
    server.announce = True
    try:
        asyncio.run(server.run())
    except KeyboardInterrupt:
        pass
