"""Fixed-timestep pursuit-evasion simulation in polygonal environments.

Both policies read the state at the start of a step (simultaneous play),
then both agents advance; motion into an obstacle is clipped by a sliding
projection along the contacted edge.  Runs are deterministic: identical
inputs produce bit-identical trajectory logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

from .corner_game import (StrategyClass, config_from_frame, solve_corner_game,
                          vector_from_outcome)
from .geometry import (Environment, PointLocation, Vec2, _orient, corner_frame,
                       segment_clear)
from .pursuit_field import PursuitVector, WeightScheme, candidate_corners, pursuit_direction


@dataclass(frozen=True, slots=True)
class AgentState:
    position: Vec2
    speed_max: float
    last_velocity: Vec2 = Vec2(0.0, 0.0)

    def __post_init__(self):
        if self.speed_max <= 0:
            raise ValueError("speed_max must be positive")
        if self.last_velocity.norm() > self.speed_max + 1e-12:
            raise ValueError("recorded velocity exceeds the speed limit")


@dataclass(frozen=True)
class EvaderCommand:
    direction: Vec2
    throttle: float

    def __post_init__(self):
        if not 0.0 <= self.throttle <= 1.0:
            raise ValueError("throttle outside [0, 1]")

    def velocity(self, speed_max: float) -> Vec2:
        if self.direction.norm() == 0.0 or self.throttle == 0.0:
            return Vec2(0.0, 0.0)
        return self.direction.unit() * (self.throttle * speed_max)


# --------------------------------------------------------------------------
# Policies.  A policy maps (env, own state, opponent state, step index) to a
# desired velocity; the engine clamps it to the agent's speed limit.


class ScriptedWaypointsPolicy:
    """Evader follows a fixed waypoint list at full speed."""

    def __init__(self, waypoints: Sequence[Vec2]):
        if not waypoints:
            raise ValueError("waypoint list must be non-empty")
        self.waypoints = [w if isinstance(w, Vec2) else Vec2(*w) for w in waypoints]
        self._next = 0

    def reset(self):
        self._next = 0

    @property
    def done(self) -> bool:
        return self._next >= len(self.waypoints)

    def velocity(self, env, me: AgentState, other: AgentState, step: int) -> Vec2:
        while self._next < len(self.waypoints):
            target = self.waypoints[self._next]
            d = target - me.position
            if d.norm() <= 1e-9:
                self._next += 1
                continue
            return d.unit() * me.speed_max
        return Vec2(0.0, 0.0)

    def advance_if_reached(self, me: AgentState, dt: float):
        # One-step reach, with slack for the overshoot of a fixed-speed step.
        while (self._next < len(self.waypoints)
               and (self.waypoints[self._next] - me.position).norm() <= me.speed_max * dt * 1.5):
            self._next += 1


class ExternalCommandPolicy:
    """Evader driven by externally supplied commands (zero-order hold)."""

    def __init__(self, commands: Optional[Callable[[int], Optional[EvaderCommand]]] = None):
        if commands is None:
            self._source = lambda step: None
        elif callable(commands):
            self._source = commands
        else:
            seq = list(commands)
            self._source = lambda step: seq[step] if step < len(seq) else (seq[-1] if seq else None)
        self._held: Optional[EvaderCommand] = None

    def velocity(self, env, me: AgentState, other: AgentState, step: int) -> Vec2:
        cmd = self._source(step)
        if cmd is not None:
            self._held = cmd
        if self._held is None:
            return Vec2(0.0, 0.0)
        return self._held.velocity(me.speed_max)


class GreedyNearestCornerPolicy:
    """Evader heads for the corner that minimizes its corner-game time."""

    def __init__(self, speeds: tuple[float, float]):
        self.speeds = speeds

    def velocity(self, env, me: AgentState, other: AgentState, step: int) -> Vec2:
        return greedy_evader_velocity(env, me, other, self.speeds)


class PursuitFieldPolicy:
    """Pursuer follows the combined pursuit field at full speed."""

    def __init__(self, scheme: WeightScheme, augment_weight: float = 1.0,
                 normalize_before_augment: bool = True):
        self.scheme = scheme
        self.augment_weight = augment_weight
        self.normalize_before_augment = normalize_before_augment
        self.last_query: Optional[PursuitVector] = None

    def velocity(self, env, me: AgentState, other: AgentState, step: int) -> Vec2:
        pv = pursuit_direction(env, me.position, other.position,
                               (me.speed_max, other.speed_max), self.scheme,
                               self.augment_weight, self.normalize_before_augment)
        self.last_query = pv
        return pv.direction * me.speed_max


class FixedCornerOptimalPolicy:
    """Pursuer replays the single-corner optimal direction for one corner."""

    def __init__(self, corner: tuple[int, int]):
        self.corner = corner

    def velocity(self, env, me: AgentState, other: AgentState, step: int) -> Vec2:
        try:
            frame, _, _ = corner_frame(env, self.corner, me.position, other.position)
        except ValueError:
            return Vec2(0.0, 0.0)
        cfg = config_from_frame(frame, me.position, other.position,
                                me.speed_max, other.speed_max)
        outcome = solve_corner_game(cfg, frame)
        if outcome.strategy is StrategyClass.NOT_VISIBLE:
            return Vec2(0.0, 0.0)
        return vector_from_outcome(cfg, frame, outcome) * me.speed_max


def greedy_evader_velocity(env: Environment, evader: AgentState, pursuer: AgentState,
                           speeds: Optional[tuple[float, float]] = None) -> Vec2:
    """Baseline adversary: run for the corner with the smallest tracking time.

    Falls back to the nearest usable corner when no finite-time escape
    exists, and to running straight away from the pursuer when no corner is
    visible at all.
    """
    if not env.point_free(evader.position) or not env.point_free(pursuer.position):
        raise ValueError("agent not in free space")
    v_p = speeds[0] if speeds else pursuer.speed_max
    v_e = speeds[1] if speeds else evader.speed_max
    best_finite = None
    nearest = None
    for cand in candidate_corners(env, pursuer.position, evader.position):
        vertex = cand.frame.vertex
        d = (vertex - evader.position).norm()
        if d <= 1e-12:
            continue
        if nearest is None or d < nearest[0]:
            nearest = (d, vertex)
        try:
            cfg = config_from_frame(cand.frame, pursuer.position, evader.position, v_p, v_e)
            outcome = solve_corner_game(cfg, cand.frame)
        except ValueError:
            continue
        t = outcome.tracking_time
        if math.isfinite(t) and (best_finite is None or t < best_finite[0]):
            best_finite = (t, vertex)
    target = best_finite[1] if best_finite else (nearest[1] if nearest else None)
    if target is None:
        away = evader.position - pursuer.position
        if away.norm() == 0.0:
            return Vec2(evader.speed_max, 0.0)
        return away.unit() * evader.speed_max
    return (target - evader.position).unit() * evader.speed_max


# --------------------------------------------------------------------------
# Motion with sliding projection.


def _first_blocking_contact(env: Environment, a: Vec2, b: Vec2):
    """Earliest parameter in [0, 1] where the motion a->b enters an obstacle.

    Returns (t, edge) or None.  Transversal crossings of an edge interior
    block; so does starting on an edge while heading into its interior
    side (the sliding case).  Grazing along edges or vertices is free.
    """
    best = None
    for poly in env.obstacles:
        for c, d in poly.edges():
            o1 = _orient(a, b, c)
            o2 = _orient(a, b, d)
            o3 = _orient(c, d, a)
            o4 = _orient(c, d, b)
            if o1 * o2 < 0 and o3 * o4 < 0:
                denom = (b - a).cross(d - c)
                if denom == 0.0:
                    continue
                t = (c - a).cross(d - c) / denom
                t = min(max(t, 0.0), 1.0)
                if best is None or t < best[0]:
                    best = (t, (c, d))
            elif o3 == 0 and o4 > 0:
                # start on the edge line, heading into the interior side
                cd = d - c
                denom = cd.dot(cd)
                s = (a - c).dot(cd) / denom if denom > 0 else -1.0
                if -1e-9 <= s <= 1 + 1e-9:
                    return (0.0, (c, d))
    return best


def _nearest_boundary_point(poly, pos: Vec2) -> Vec2:
    best = None
    for c, d in poly.edges():
        cd = d - c
        denom = cd.dot(cd)
        t = 0.0 if denom == 0 else max(0.0, min(1.0, (pos - c).dot(cd) / denom))
        q = Vec2(c.x + t * cd.x, c.y + t * cd.y)
        dist = (q - pos).norm()
        if best is None or dist < best[0]:
            best = (dist, q)
    return best[1]


def _slide_move(env: Environment, pos: Vec2, vel: Vec2, dt: float) -> Vec2:
    """Advance pos by vel*dt, sliding along obstacle edges on contact."""
    v = vel
    remaining = dt
    for _ in range(3):
        if v.norm() == 0.0 or remaining <= 0.0:
            break
        target = pos + v * remaining
        hit = _first_blocking_contact(env, pos, target)
        if hit is None:
            pos = target
            break
        t, (c, d) = hit
        pos = pos + v * (remaining * t)
        remaining = remaining * (1.0 - t)
        edge = (d - c).unit()
        v = edge * v.dot(edge)  # drop the component into the wall
    # Safety: never leave an agent strictly inside an obstacle.
    for poly in env.obstacles:
        if poly.locate(pos) is PointLocation.INSIDE:
            pos = _nearest_boundary_point(poly, pos)
            break
    return pos


def _clamp(v: Vec2, speed_max: float) -> Vec2:
    n = v.norm()
    if n <= speed_max or n == 0.0:
        return v
    return v * (speed_max / n)


def step(env: Environment, pursuer: AgentState, evader: AgentState,
         p_policy, e_policy, dt: float, step_index: int = 0):
    """One simultaneous step; returns (pursuer', evader', los)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    vp = _clamp(p_policy.velocity(env, pursuer, evader, step_index), pursuer.speed_max)
    ve = _clamp(e_policy.velocity(env, evader, pursuer, step_index), evader.speed_max)
    new_p = _slide_move(env, pursuer.position, vp, dt)
    new_e = _slide_move(env, evader.position, ve, dt)
    p2 = replace(pursuer, position=new_p, last_velocity=_clamp((new_p - pursuer.position) * (1 / dt), pursuer.speed_max))
    e2 = replace(evader, position=new_e, last_velocity=_clamp((new_e - evader.position) * (1 / dt), evader.speed_max))
    los = segment_clear(new_p, new_e, env)
    return p2, e2, los


@dataclass(frozen=True)
class StepRecord:
    t: float
    pursuer: Vec2
    evader: Vec2
    los: bool
    active_corner: Optional[tuple[int, int]]
    weights: tuple  # ((oi, vi, weight, time, distance), ...)


@dataclass(frozen=True)
class RunOutcome:
    kind: str  # "los_broken" | "max_time" | "path_done"
    t: float


@dataclass(frozen=True)
class TrajectoryLog:
    dt: float
    steps: tuple[StepRecord, ...]
    outcome: RunOutcome


def _weights_snapshot(p_policy) -> tuple[Optional[tuple[int, int]], tuple]:
    pv = getattr(p_policy, "last_query", None)
    if pv is None or not pv.contributors:
        return None, ()
    rows = tuple((c.corner[0], c.corner[1], c.weight, c.time, c.distance)
                 for c in sorted(pv.contributors, key=lambda c: c.corner))
    active = max(pv.contributors, key=lambda c: (c.weight, (-c.corner[0], -c.corner[1])))
    if active.weight <= 0:
        return None, rows
    return active.corner, rows


def run(env: Environment, pursuer: AgentState, evader: AgentState,
        p_policy, e_policy, dt: float, max_time: float) -> TrajectoryLog:
    """Iterate steps until LOS breaks, time runs out, or the script ends."""
    if not segment_clear(pursuer.position, evader.position, env):
        raise ValueError("game starts lost")
    records = []
    t = 0.0
    n_steps = int(round(max_time / dt))
    if isinstance(e_policy, ScriptedWaypointsPolicy):
        e_policy.reset()
    outcome = RunOutcome("max_time", n_steps * dt)
    for k in range(n_steps):
        pursuer, evader, los = step(env, pursuer, evader, p_policy, e_policy, dt, k)
        t = (k + 1) * dt
        active, weights = _weights_snapshot(p_policy)
        records.append(StepRecord(t=t, pursuer=pursuer.position, evader=evader.position,
                                  los=los, active_corner=active, weights=weights))
        if not los:
            outcome = RunOutcome("los_broken", t)
            break
        if isinstance(e_policy, ScriptedWaypointsPolicy):
            e_policy.advance_if_reached(evader, dt)
            if e_policy.done:
                outcome = RunOutcome("path_done", t)
                break
    return TrajectoryLog(dt=dt, steps=tuple(records), outcome=outcome)
