"""Live arena: a human evader plays the algorithmic pursuer over WebSocket.

Each session owns an authoritative game state advanced by ``tick`` at a
fixed dt.  Evader commands land in a single-slot mailbox and take effect
from the next tick (zero-order hold between commands); the pursuer only
ever sees positions.  A session's command transcript replayed through the
headless engine reproduces its trajectory bit-exactly.
"""

from __future__ import annotations

import asyncio
import json
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse, PlainTextResponse

from .geometry import Vec2, segment_clear
from .sim_engine import (AgentState, EvaderCommand, ExternalCommandPolicy, RunOutcome,
                         StepRecord, TrajectoryLog, _weights_snapshot, step)
from .toolkit_cli import Scenario, dumps_json, scenario_from_dict, trajectory_to_jsonl

FIELD_EVERY_TICKS = 10
FIELD_GRID = 12


@dataclass
class Snapshot:
    t: float
    px: float
    py: float
    ex: float
    ey: float
    los: bool
    score: float
    ended: Optional[str] = None

    def to_state_msg(self) -> dict:
        return {"type": "state", "t": self.t, "px": self.px, "py": self.py,
                "ex": self.ex, "ey": self.ey, "los": self.los, "score": self.score}


class Session:
    """One live game; the tick driver is the single writer of its state."""

    def __init__(self, scenario: Scenario):
        if not segment_clear(scenario.pursuer, scenario.evader, scenario.environment):
            raise ValueError("game starts lost")
        self.id = uuid.uuid4().hex
        self.scenario = scenario
        self.dt = scenario.dt
        self.max_time = scenario.max_time
        self.env = scenario.environment
        self.pursuer = AgentState(scenario.pursuer, scenario.pursuer_speed)
        self.evader = AgentState(scenario.evader, scenario.evader_speed)
        self.p_policy = scenario.build_pursuer_policy()
        self.tick_index = 0
        self.elapsed = 0.0
        self.los = True
        self.started = False
        self.ended: Optional[str] = None  # "los_broken" | "max_time"
        self.score = 0.0
        self._command: Optional[EvaderCommand] = None  # single-slot mailbox
        self.command_log: list[Optional[tuple[float, float, float]]] = []
        self.records: list[StepRecord] = []

    # -- command side (may be called from any task/thread) ------------------

    def apply_command(self, cmd: EvaderCommand) -> int:
        """Store the latest command; returns the first tick it can affect."""
        if self.ended is not None:
            raise ValueError("session over")
        self._command = cmd
        self.started = True
        return self.tick_index + 1

    def start(self):
        self.started = True

    # -- tick side (single writer) ------------------------------------------

    def snapshot(self) -> Snapshot:
        return Snapshot(t=self.elapsed,
                        px=self.pursuer.position.x, py=self.pursuer.position.y,
                        ex=self.evader.position.x, ey=self.evader.position.y,
                        los=self.los, score=self.score, ended=self.ended)

    def tick(self) -> Snapshot:
        if self.ended is not None:
            return self.snapshot()
        held = self._command
        self.command_log.append(None if held is None
                                else (held.direction.x, held.direction.y, held.throttle))
        e_policy = ExternalCommandPolicy(lambda _step, _c=held: _c)
        self.pursuer, self.evader, self.los = step(
            self.env, self.pursuer, self.evader, self.p_policy, e_policy,
            self.dt, self.tick_index)
        self.tick_index += 1
        self.elapsed = self.tick_index * self.dt
        self.score = self.elapsed
        active, weights = _weights_snapshot(self.p_policy)
        self.records.append(StepRecord(t=self.elapsed, pursuer=self.pursuer.position,
                                       evader=self.evader.position, los=self.los,
                                       active_corner=active, weights=weights))
        if not self.los:
            self.ended = "los_broken"
        elif self.elapsed >= self.max_time - 1e-12:
            self.ended = "max_time"
        return self.snapshot()

    def trajectory_log(self) -> TrajectoryLog:
        if self.ended == "los_broken":
            outcome = RunOutcome("los_broken", self.elapsed)
        else:
            outcome = RunOutcome("max_time", self.elapsed)
        return TrajectoryLog(dt=self.dt, steps=tuple(self.records), outcome=outcome)

    def field_samples(self) -> list[list[float]]:
        b = self.env.bounds
        xs = [b.xmin + (b.xmax - b.xmin) * (i + 0.5) / FIELD_GRID for i in range(FIELD_GRID)]
        ys = [b.ymin + (b.ymax - b.ymin) * (j + 0.5) / FIELD_GRID for j in range(FIELD_GRID)]
        from .pursuit_field import pursuit_direction
        out = []
        for y in ys:
            for x in xs:
                q = Vec2(x, y)
                if not self.env.point_free(q):
                    continue
                if not segment_clear(q, self.evader.position, self.env):
                    continue
                try:
                    pv = pursuit_direction(self.env, q, self.evader.position,
                                           (self.pursuer.speed_max, self.evader.speed_max),
                                           self.p_policy.scheme,
                                           self.p_policy.augment_weight,
                                           self.p_policy.normalize_before_augment)
                except ValueError:
                    continue
                out.append([x, y, pv.direction.x, pv.direction.y])
        return out


class SessionManager:
    def __init__(self):
        self.sessions: dict[str, Session] = {}

    def create_session(self, scenario: Scenario) -> Session:
        s = Session(scenario)
        self.sessions[s.id] = s
        return s

    def get(self, sid: str) -> Session:
        if sid not in self.sessions:
            raise KeyError(sid)
        return self.sessions[sid]


def create_app(manager: Optional[SessionManager] = None,
               default_scenario: Optional[Scenario] = None,
               ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="cornertrack arena")
    mgr = manager or SessionManager()
    app.state.manager = mgr
    app.state.default_scenario = default_scenario

    @app.post("/session")
    async def create_session(payload: dict):
        from .toolkit_cli import ScenarioError
        try:
            scn = scenario_from_dict(payload) if payload else None
            if scn is None:
                if default_scenario is None:
                    raise ScenarioError("scenario: empty request and no default scenario")
                scn = default_scenario
            sess = mgr.create_session(scn)
        except (ScenarioError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"id": sess.id, "ws": f"/session/{sess.id}/ws"}

    @app.get("/session/{sid}/log")
    async def session_log(sid: str):
        try:
            sess = mgr.get(sid)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        return PlainTextResponse(trajectory_to_jsonl(sess.trajectory_log()),
                                 media_type="application/jsonl")

    @app.get("/scenario/default")
    async def default_scn():
        if app.state.default_scenario is None:
            raise HTTPException(status_code=404, detail="no default scenario")
        return json.loads(dumps_json(app.state.default_scenario.to_dict()))

    @app.websocket("/session/{sid}/ws")
    async def session_ws(ws: WebSocket, sid: str):
        try:
            sess = mgr.get(sid)
        except KeyError:
            await ws.close(code=4404)
            return
        await ws.accept()
        await ws.send_text(dumps_json(sess.snapshot().to_state_msg()))

        stop = asyncio.Event()

        async def reader():
            try:
                while not stop.is_set():
                    raw = await ws.receive_text()
                    try:
                        msg = json.loads(raw)
                    except json.JSONDecodeError:
                        continue
                    if msg.get("type") == "start":
                        sess.start()
                    elif msg.get("type") == "cmd":
                        try:
                            cmd = EvaderCommand(Vec2(float(msg.get("dx", 0.0)),
                                                     float(msg.get("dy", 0.0))),
                                                float(msg.get("throttle", 0.0)))
                            sess.apply_command(cmd)
                        except ValueError:
                            pass
            except WebSocketDisconnect:
                stop.set()

        async def ticker():
            try:
                while not stop.is_set() and sess.ended is None:
                    if not sess.started:
                        await asyncio.sleep(sess.dt)
                        continue
                    t0 = asyncio.get_event_loop().time()
                    snap = sess.tick()
                    await ws.send_text(dumps_json(snap.to_state_msg()))
                    if sess.tick_index % FIELD_EVERY_TICKS == 1:
                        await ws.send_text(dumps_json(
                            {"type": "field", "samples": sess.field_samples()}))
                    if sess.ended is not None:
                        reason = sess.ended
                        await ws.send_text(dumps_json(
                            {"type": "end", "reason": reason, "score": sess.score}))
                        break
                    # Wall-clock pacing at 1/dt Hz; late ticks fire immediately.
                    budget = sess.dt - (asyncio.get_event_loop().time() - t0)
                    if budget > 0:
                        await asyncio.sleep(budget)
            except WebSocketDisconnect:
                pass
            finally:
                stop.set()

        reader_task = asyncio.create_task(reader())
        ticker_task = asyncio.create_task(ticker())
        await asyncio.wait({reader_task, ticker_task}, return_when=asyncio.FIRST_COMPLETED)
        stop.set()
        for task in (reader_task, ticker_task):
            task.cancel()
        try:
            await ws.close()
        except RuntimeError:
            pass

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

        @app.get("/")
        async def index():
            return HTMLResponse('<meta http-equiv="refresh" content="0; url=/ui/">')

    return app


def replay_session(session: Session) -> TrajectoryLog:
    """Re-run a finished session's command transcript through the engine."""
    from .sim_engine import run
    scn = session.scenario
    cmds = [None if c is None else EvaderCommand(Vec2(c[0], c[1]), c[2])
            for c in session.command_log]

    def source(step_index: int):
        if step_index < len(cmds):
            return cmds[step_index]
        return None

    e_policy = ExternalCommandPolicy(source)
    p_policy = scn.build_pursuer_policy()
    return run(scn.environment,
               AgentState(scn.pursuer, scn.pursuer_speed),
               AgentState(scn.evader, scn.evader_speed),
               p_policy, e_policy, session.dt,
               max_time=len(cmds) * session.dt)
