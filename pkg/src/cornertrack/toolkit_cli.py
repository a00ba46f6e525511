"""Scenario files, artifact export (CSV / SVG / JSON-lines) and the CLI.

Scenario files are JSON (schema documented in the README) with a version
field.  All numeric output uses Python's shortest round-trip float
formatting; ``inf`` is the literal for infinite times and ``nan`` marks
obstacle cells in time grids.  Exports are byte-stable for fixed inputs.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .corner_game import (CornerGameConfig, StrategyClass, config_from_frame,
                          solve_corner_game, tangent_angle, tangent_rate,
                          _min_S_along_segment)
from .geometry import (Bounds, CornerFrame, Environment, PolarPoint, Polygon, Vec2,
                       corner_frame, segment_clear)
from .partitions import GridPartition, GridSpec, PartitionKind, VectorField
from .pursuit_field import WeightScheme
from .sim_engine import (AgentState, ExternalCommandPolicy, GreedyNearestCornerPolicy,
                         PursuitFieldPolicy, ScriptedWaypointsPolicy, TrajectoryLog, run)

SCENARIO_VERSION = "1"

DEFAULTS = {
    "dt": 1.0 / 120.0,
    "max_time": 30.0,
    "seed": 0,
    "augment_weight": 1.0,
    "normalize_before_augment": True,
}


class ScenarioError(ValueError):
    """Scenario parsing / validation failure with a field-precise message."""


@dataclass
class Scenario:
    environment: Environment
    pursuer: Vec2
    pursuer_speed: float
    evader: Vec2
    evader_speed: float
    pursuer_policy: dict
    evader_policy: dict
    grid: Optional[GridSpec]
    dt: float
    max_time: float
    seed: int
    augment_weight: float
    normalize_before_augment: bool
    corner: Optional[tuple[int, int]] = None
    raw: dict = field(default_factory=dict)

    def speeds(self) -> tuple[float, float]:
        return self.pursuer_speed, self.evader_speed

    def build_pursuer_policy(self, scheme_override: Optional[WeightScheme] = None):
        kind = self.pursuer_policy.get("type", "pursuit-field")
        if kind == "pursuit-field":
            scheme = scheme_override or _scheme_from_name(
                self.pursuer_policy.get("scheme", "inverse-time"))
            return PursuitFieldPolicy(scheme, self.augment_weight,
                                      self.normalize_before_augment)
        raise ScenarioError(f"policies.pursuer.type: unknown policy {kind!r}")

    def build_evader_policy(self):
        kind = self.evader_policy.get("type", "external")
        if kind == "scripted":
            wps = [Vec2(*w) for w in self.evader_policy["waypoints"]]
            return ScriptedWaypointsPolicy(wps)
        if kind == "external":
            return ExternalCommandPolicy()
        if kind == "greedy":
            return GreedyNearestCornerPolicy((self.pursuer_speed, self.evader_speed))
        raise ScenarioError(f"policies.evader.type: unknown policy {kind!r}")

    def to_dict(self) -> dict:
        env = self.environment
        d = {
            "version": SCENARIO_VERSION,
            "environment": {
                "bounds": [env.bounds.xmin, env.bounds.ymin, env.bounds.xmax, env.bounds.ymax],
                "obstacles": [[[v.x, v.y] for v in poly.vertices] for poly in env.obstacles],
            },
            "pursuer": {"x": self.pursuer.x, "y": self.pursuer.y, "speed": self.pursuer_speed},
            "evader": {"x": self.evader.x, "y": self.evader.y, "speed": self.evader_speed},
            "policies": {"pursuer": self.pursuer_policy, "evader": self.evader_policy},
            "dt": self.dt,
            "max_time": self.max_time,
            "seed": self.seed,
            "augment_weight": self.augment_weight,
            "normalize_before_augment": self.normalize_before_augment,
        }
        if self.grid is not None:
            d["grid"] = {"origin": [self.grid.origin.x, self.grid.origin.y],
                         "cell_size": self.grid.cell_size,
                         "nx": self.grid.nx, "ny": self.grid.ny}
        if self.corner is not None:
            d["corner"] = list(self.corner)
        return d


def _scheme_from_name(name: str) -> WeightScheme:
    if name in ("distance", "distance-argmin"):
        return WeightScheme.DISTANCE_ARGMIN
    if name in ("inverse-time", "time"):
        return WeightScheme.INVERSE_TIME
    raise ScenarioError(f"unknown weight scheme {name!r}")


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ScenarioError(f"{where}: missing field {key!r}")
    return d[key]


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario: top level must be an object")
    version = str(data.get("version", SCENARIO_VERSION))
    if version != SCENARIO_VERSION:
        raise ScenarioError(f"version: unsupported scenario version {version!r}")
    env_d = _require(data, "environment", "scenario")
    bounds_v = _require(env_d, "bounds", "environment")
    try:
        bounds = Bounds(*[float(x) for x in bounds_v])
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"environment.bounds: {exc}") from exc
    obstacles = []
    for i, poly in enumerate(env_d.get("obstacles", [])):
        try:
            obstacles.append(Polygon([Vec2(float(x), float(y)) for x, y in poly]))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"environment.obstacles[{i}]: {exc}") from exc
    try:
        env = Environment(obstacles, bounds)
    except ValueError as exc:
        raise ScenarioError(f"environment: {exc}") from exc

    def agent(name: str) -> tuple[Vec2, float]:
        a = _require(data, name, "scenario")
        try:
            pos = Vec2(float(_require(a, "x", name)), float(_require(a, "y", name)))
            speed = float(_require(a, "speed", name))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"{name}: {exc}") from exc
        if speed <= 0:
            raise ScenarioError(f"{name}.speed: must be positive")
        if not env.point_free(pos):
            raise ScenarioError(f"{name} not in free space")
        if not bounds.contains(pos):
            raise ScenarioError(f"{name}: outside the bounds")
        return pos, speed

    pursuer, p_speed = agent("pursuer")
    evader, e_speed = agent("evader")

    policies = data.get("policies", {})
    p_pol = dict(policies.get("pursuer", {"type": "pursuit-field", "scheme": "inverse-time"}))
    e_pol = dict(policies.get("evader", {"type": "external"}))
    if e_pol.get("type") == "scripted":
        wps = e_pol.get("waypoints")
        if not wps:
            raise ScenarioError("policies.evader.waypoints: must be non-empty")
        for i, w in enumerate(wps):
            wp = Vec2(float(w[0]), float(w[1]))
            if not env.point_free(wp):
                raise ScenarioError(f"policies.evader.waypoints[{i}]: not in free space")

    grid = None
    if "grid" in data:
        g = data["grid"]
        try:
            grid = GridSpec(Vec2(float(g["origin"][0]), float(g["origin"][1])),
                            float(g["cell_size"]), int(g["nx"]), int(g["ny"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"grid: {exc}") from exc

    corner = None
    if "corner" in data:
        c = data["corner"]
        corner = (int(c[0]), int(c[1]))
        if corner[0] >= len(env.obstacles) or corner[1] >= len(env.obstacles[corner[0]].vertices):
            raise ScenarioError("corner: index out of range")

    dt = float(data.get("dt", DEFAULTS["dt"]))
    if dt <= 0:
        raise ScenarioError("dt: must be positive")
    max_time = float(data.get("max_time", DEFAULTS["max_time"]))
    if max_time <= 0:
        raise ScenarioError("max_time: must be positive")

    return Scenario(
        environment=env, pursuer=pursuer, pursuer_speed=p_speed,
        evader=evader, evader_speed=e_speed,
        pursuer_policy=p_pol, evader_policy=e_pol, grid=grid,
        dt=dt, max_time=max_time, seed=int(data.get("seed", DEFAULTS["seed"])),
        augment_weight=float(data.get("augment_weight", DEFAULTS["augment_weight"])),
        normalize_before_augment=bool(data.get("normalize_before_augment",
                                               DEFAULTS["normalize_before_augment"])),
        corner=corner, raw=data,
    )


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    return scenario_from_dict(data)


def save_scenario(scn: Scenario, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(scn.to_dict()) + "\n")


# --------------------------------------------------------------------------
# Deterministic serialization helpers.


def fmt(x: float) -> str:
    """Shortest decimal that round-trips; `inf`/`nan` literals allowed."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return repr(float(x))


def _json_default(o):
    raise TypeError(f"not serializable: {o!r}")


def _encode_floats(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {k: _encode_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode_floats(v) for v in obj]
    return obj


def dumps_json(obj) -> str:
    """Compact, key-sorted JSON with `inf` spelled as a string literal."""
    return json.dumps(_encode_floats(obj), sort_keys=True, separators=(",", ":"),
                      default=_json_default)


# --------------------------------------------------------------------------
# Partition / field / trajectory export.

CSV_HEADER = "# kind,nx,ny,ox,oy,cell"


def export_partition(p: GridPartition, path: str, fmt_name: str = "csv"):
    if fmt_name == "csv":
        text = partition_to_csv(p)
    elif fmt_name == "svg":
        text = partition_to_svg(p)
    else:
        raise ScenarioError(f"unknown partition format {fmt_name!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def partition_to_csv(p: GridPartition) -> str:
    lines = [CSV_HEADER,
             f"# {p.kind.value},{p.spec.nx},{p.spec.ny},{fmt(p.spec.origin.x)},"
             f"{fmt(p.spec.origin.y)},{fmt(p.spec.cell_size)}"]
    if p.kind is PartitionKind.STRATEGY_CLASS:
        lines.extend(str(int(v)) for v in p.values)
    else:
        lines.extend(fmt(float(v)) for v in p.values)
    return "\n".join(lines) + "\n"


def import_partition(path: str) -> GridPartition:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != CSV_HEADER:
        raise ScenarioError(f"{path}:1: not a partition CSV")
    meta = lines[1].lstrip("# ").split(",")
    kind = PartitionKind(meta[0])
    nx, ny = int(meta[1]), int(meta[2])
    spec = GridSpec(Vec2(float(meta[3]), float(meta[4])), float(meta[5]), nx, ny)
    body = [ln for ln in lines[2:] if ln]
    if len(body) != nx * ny:
        raise ScenarioError(f"{path}: expected {nx * ny} cells, found {len(body)}")
    if kind is PartitionKind.STRATEGY_CLASS:
        values = np.array([int(v) for v in body], dtype=np.int64)
    else:
        values = np.array([float(v) for v in body])
    return GridPartition(spec, kind, values)


def field_to_csv(f: VectorField) -> str:
    lines = [CSV_HEADER,
             f"# field,{f.spec.nx},{f.spec.ny},{fmt(f.spec.origin.x)},"
             f"{fmt(f.spec.origin.y)},{fmt(f.spec.cell_size)}"]
    for i in range(f.spec.nx * f.spec.ny):
        lines.append(f"{fmt(float(f.vectors[i, 0]))},{fmt(float(f.vectors[i, 1]))},"
                     f"{fmt(float(f.times[i]))}")
    return "\n".join(lines) + "\n"


def trajectory_to_jsonl(log: TrajectoryLog) -> str:
    out = io.StringIO()
    for s in log.steps:
        corner = None if s.active_corner is None else [s.active_corner[0], s.active_corner[1]]
        rec = {"t": s.t, "px": s.pursuer.x, "py": s.pursuer.y,
               "ex": s.evader.x, "ey": s.evader.y, "los": s.los,
               "corner": corner,
               "weights": [[w[0], w[1], w[2], w[3], w[4]] for w in s.weights]}
        out.write(dumps_json(rec) + "\n")
    out.write(dumps_json({"outcome": log.outcome.kind, "t": log.outcome.t,
                          "dt": log.dt}) + "\n")
    return out.getvalue()


def parse_trajectory_jsonl(text: str):
    """Inverse of trajectory_to_jsonl: list of step dicts plus the outcome dict."""
    rows = [json.loads(ln) for ln in text.splitlines() if ln.strip()]
    if not rows or "outcome" not in rows[-1]:
        raise ScenarioError("trajectory log missing its outcome line")
    return rows[:-1], rows[-1]


# --------------------------------------------------------------------------
# SVG rendering (house color semantics: grey obstacles, red evader, blue
# pursuer, light yellow for the infinite-time region).

_SVG_W = 640


def _svg_head(w, h):
    return (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">')


def _time_color(v: float, vmax: float) -> str:
    if math.isnan(v):
        return "#555555"            # obstacle
    if math.isinf(v):
        return "#ffffcc"            # pursuer win
    if vmax <= 0:
        return "#000080"
    u = max(0.0, min(1.0, v / vmax))
    r = int(30 + 200 * u)
    g = int(30 + 120 * u)
    b = int(140 - 110 * u)
    return f"#{r:02x}{g:02x}{b:02x}"


_CLASS_COLORS = {
    1: "#ffffcc", 2: "#ffcc66", 3: "#66bb66", 4: "#3377cc", 5: "#cccccc", 6: "#555555",
}


def partition_to_svg(p: GridPartition, evader: Optional[Vec2] = None,
                     pursuer: Optional[Vec2] = None) -> str:
    spec = p.spec
    scale = _SVG_W / (spec.nx * spec.cell_size)
    h = int(round(spec.ny * spec.cell_size * scale))
    parts = [_svg_head(_SVG_W, h)]
    finite = [float(v) for v in p.values
              if isinstance(v, (int, float, np.floating, np.integer))
              and math.isfinite(float(v))]
    vmax = max(finite) if (finite and p.kind is PartitionKind.TRACKING_TIME) else 1.0
    cs = spec.cell_size * scale
    for iy in range(spec.ny):
        for ix in range(spec.nx):
            v = p.values[spec.index(ix, iy)]
            if p.kind is PartitionKind.STRATEGY_CLASS:
                color = _CLASS_COLORS.get(int(v), "#000000")
            else:
                color = _time_color(float(v), vmax)
            x = ix * cs
            y = (spec.ny - 1 - iy) * cs
            parts.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{cs + 0.5:.2f}" '
                         f'height="{cs + 0.5:.2f}" fill="{color}"/>')

    def to_px(q: Vec2):
        return ((q.x - spec.origin.x) * scale,
                (spec.ny * spec.cell_size - (q.y - spec.origin.y)) * scale)

    if evader is not None:
        ex, ey = to_px(evader)
        parts.append(f'<circle cx="{ex:.2f}" cy="{ey:.2f}" r="5" fill="#cc0000"/>')
    if pursuer is not None:
        px, py = to_px(pursuer)
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="5" fill="#0000cc"/>')
    parts.append(_svg_legend(p.kind, vmax))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _svg_legend(kind: PartitionKind, vmax: float) -> str:
    if kind is PartitionKind.STRATEGY_CLASS:
        labels = ["1 star", "2 dash", "3 class1", "4 class2", "5 hidden", "6 obstacle"]
        rows = []
        for i, lab in enumerate(labels):
            y = 14 + 16 * i
            rows.append(f'<rect x="8" y="{y - 10}" width="12" height="12" '
                        f'fill="{_CLASS_COLORS[i + 1]}" stroke="#000"/>'
                        f'<text x="24" y="{y}" font-size="11">{lab}</text>')
        return "<g>" + "".join(rows) + "</g>"
    return (f'<g><rect x="8" y="4" width="12" height="12" fill="#ffffcc" stroke="#000"/>'
            f'<text x="24" y="14" font-size="11">inf</text>'
            f'<text x="8" y="30" font-size="11">max {vmax:.3g} s</text></g>')


def field_to_svg(f: VectorField, env: Optional[Environment] = None,
                 evader: Optional[Vec2] = None) -> str:
    spec = f.spec
    scale = _SVG_W / (spec.nx * spec.cell_size)
    h = int(round(spec.ny * spec.cell_size * scale))
    parts = [_svg_head(_SVG_W, h)]

    def to_px(x, y):
        return ((x - spec.origin.x) * scale,
                (spec.ny * spec.cell_size - (y - spec.origin.y)) * scale)

    if env is not None:
        for poly in env.obstacles:
            pts = " ".join(f"{to_px(v.x, v.y)[0]:.2f},{to_px(v.x, v.y)[1]:.2f}"
                           for v in poly.vertices)
            parts.append(f'<polygon points="{pts}" fill="#999999"/>')
    arrow = spec.cell_size * 0.45
    for iy in range(spec.ny):
        for ix in range(spec.nx):
            i = spec.index(ix, iy)
            vx, vy = f.vectors[i]
            if math.isnan(vx):
                continue
            c = spec.cell_center(ix, iy)
            x0, y0 = to_px(c.x - vx * arrow / 2, c.y - vy * arrow / 2)
            x1, y1 = to_px(c.x + vx * arrow / 2, c.y + vy * arrow / 2)
            parts.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
                         f'stroke="#222222" stroke-width="1"/>'
                         f'<circle cx="{x1:.2f}" cy="{y1:.2f}" r="1.2" fill="#222222"/>')
    if evader is not None:
        ex, ey = to_px(evader.x, evader.y)
        parts.append(f'<circle cx="{ex:.2f}" cy="{ey:.2f}" r="5" fill="#cc0000"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# --------------------------------------------------------------------------
# Corner-game configs from files (for `solve-corner`).


def corner_config_from_dict(data: dict) -> tuple[CornerGameConfig, Optional[CornerFrame]]:
    """Either an explicit canonical config or a scenario + corner index."""
    if "corner_game" in data:
        g = data["corner_game"]
        try:
            w = float(g.get("wedge_interior_angle", math.pi / 2))
            cfg = CornerGameConfig(
                v_p_max=float(g["v_p_max"]), v_e_max=float(g["v_e_max"]),
                evader0=PolarPoint(float(g["evader"]["angle"]), float(g["evader"]["radius"])),
                pursuer0=PolarPoint(float(g["pursuer"]["angle"]), float(g["pursuer"]["radius"])),
                wedge=(math.pi, -(math.pi - w)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"corner_game: {exc}") from exc
        return cfg, None
    scn = scenario_from_dict(data)
    if scn.corner is None:
        raise ScenarioError("corner: required when no corner_game block is given")
    frame, _, _ = corner_frame(scn.environment, scn.corner, scn.pursuer, scn.evader)
    return config_from_frame(frame, scn.pursuer, scn.evader,
                             scn.pursuer_speed, scn.evader_speed), frame


def solve_corner_report(cfg: CornerGameConfig, frame: Optional[CornerFrame]) -> dict:
    outcome = solve_corner_game(cfg, frame)
    rep: dict = {"class": outcome.strategy.label,
                 "tracking_time": outcome.tracking_time}
    det = outcome.detail or {}
    residuals: dict = {}
    if outcome.strategy is StrategyClass.CLASS1:
        t_f = det["t_f"]
        heading = det["heading"]  # canonical frame
        rep["t_f"] = t_f
        rep["heading"] = heading
        p0 = cfg.pursuer0.to_vec()
        pos = Vec2(p0.x + cfg.v_p_max * t_f * math.cos(heading),
                   p0.y + cfg.v_p_max * t_f * math.sin(heading))
        theta_f = tangent_angle(cfg, t_f) - math.pi
        gap = (math.atan2(pos.y, pos.x) - theta_f + math.pi) % (2 * math.pi) - math.pi
        residuals["collinearity"] = abs(gap)
        residuals["terminal_margin"] = tangent_rate(cfg, t_f) - cfg.v_p_max / pos.norm()
        residuals["min_S"] = _min_S_along_segment(cfg, heading, t_f)
    elif outcome.strategy is StrategyClass.CLASS2:
        rep["T1"] = det["T1"]
        rep["T2"] = det["T2"]
        rep["heading"] = det["heading"]
        sol = det["solution"]
        residuals["junction_rate_mismatch"] = abs(
            tangent_rate(cfg, sol.T1)
            - cfg.v_p_max * math.sin(sol.geometry.gamma_T) / sol.geometry.terminal_radius)
        residuals["junction_u1"] = sol.geometry.gamma_T - math.pi / 2
        if sol.T2 is not None:
            t_end = sol.T1 + sol.T2
            r_end = sol.stage2_radius(t_end)
            residuals["termination_speed_gap"] = abs(
                cfg.v_p_max - r_end * tangent_rate(cfg, min(t_end, cfg.horizon * (1 - 1e-12))))
    elif outcome.strategy is StrategyClass.SHORTEST_PATH_TO_STAR:
        rep["dash_time"] = det.get("dash_time")
        rep["heading"] = det.get("dash_heading")
    rep["residuals"] = residuals
    return rep


# --------------------------------------------------------------------------
# CLI.


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cornertrack", add_help=True,
                                description="corner-tracking pursuit toolkit")
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--config", required=True, help="scenario / config JSON file")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("solve-corner", help="solve a single corner game")
    common(sp)

    sp = sub.add_parser("partition", help="grid partition around a corner")
    common(sp)
    sp.add_argument("--kind", choices=["time", "strategy"], default="time")
    sp.add_argument("--based", choices=["evader", "pursuer"], default="evader")
    sp.add_argument("--format", choices=["csv", "svg"], default="csv")

    sp = sub.add_parser("field", help="guidance field export")
    common(sp)
    sp.add_argument("--mode", choices=["corner", "pursuit"], default="corner")
    sp.add_argument("--policy", choices=["distance", "inverse-time"], default="inverse-time")
    sp.add_argument("--format", choices=["csv", "svg"], default="csv")

    sp = sub.add_parser("simulate", help="run a tracking simulation")
    common(sp)
    sp.add_argument("--policy", choices=["distance", "inverse-time"], default=None)
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--max-time", type=float, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--format", choices=["jsonl"], default="jsonl")

    sp = sub.add_parser("serve", help="start the live arena service")
    sp.add_argument("--config", required=False, default=None)
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8720)
    sp.add_argument("--ui", default=None, help="static directory for the browser client")
    return p


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _frame_for_scenario(scn: Scenario) -> CornerFrame:
    if scn.corner is None:
        raise ScenarioError("corner: required for partition/field commands")
    return corner_frame(scn.environment, scn.corner, scn.pursuer, scn.evader)[0]


def cli_dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _run_command(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _run_command(args) -> int:
    if args.command == "solve-corner":
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ScenarioError(f"{args.config}:{exc.lineno}:{exc.colno}: {exc.msg}")
        cfg, frame = corner_config_from_dict(data)
        _emit(dumps_json(solve_corner_report(cfg, frame)) + "\n", args.out)
        return 0

    if args.command == "partition":
        scn = load_scenario(args.config)
        if scn.grid is None:
            raise ScenarioError("grid: required for the partition command")
        frame = _frame_for_scenario(scn)
        from .partitions import evader_partition, pursuer_partition
        if args.based == "evader":
            kind = PartitionKind.TRACKING_TIME if args.kind == "time" else PartitionKind.STRATEGY_CLASS
            part = evader_partition(frame, scn.evader, scn.speeds(), scn.grid, kind)
            dots = dict(evader=scn.evader)
        else:
            if args.kind == "strategy":
                from .partitions import pursuer_strategy_partition
                part = pursuer_strategy_partition(frame, scn.pursuer, scn.speeds(), scn.grid)
            else:
                part = pursuer_partition(frame, scn.pursuer, scn.speeds(), scn.grid)
            dots = dict(pursuer=scn.pursuer)
        if args.format == "csv":
            _emit(partition_to_csv(part), args.out)
        else:
            _emit(partition_to_svg(part, **dots), args.out)
        return 0

    if args.command == "field":
        scn = load_scenario(args.config)
        if scn.grid is None:
            raise ScenarioError("grid: required for the field command")
        if args.mode == "corner":
            frame = _frame_for_scenario(scn)
            from .partitions import corner_vector_field
            fld = corner_vector_field(frame, scn.evader, scn.speeds(), scn.grid)
        else:
            fld = _pursuit_field_samples(scn, _scheme_from_name(args.policy))
        if args.format == "csv":
            _emit(field_to_csv(fld), args.out)
        else:
            _emit(field_to_svg(fld, scn.environment, scn.evader), args.out)
        return 0

    if args.command == "simulate":
        scn = load_scenario(args.config)
        dt = args.dt if args.dt is not None else scn.dt
        max_time = args.max_time if args.max_time is not None else scn.max_time
        scheme = _scheme_from_name(args.policy) if args.policy else None
        p_policy = scn.build_pursuer_policy(scheme)
        e_policy = scn.build_evader_policy()
        log = run(scn.environment,
                  AgentState(scn.pursuer, scn.pursuer_speed),
                  AgentState(scn.evader, scn.evader_speed),
                  p_policy, e_policy, dt, max_time)
        _emit(trajectory_to_jsonl(log), args.out)
        return 0

    if args.command == "serve":
        from . import arena_service
        import uvicorn
        scn = load_scenario(args.config) if args.config else None
        app = arena_service.create_app(default_scenario=scn, ui_dir=args.ui)
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        return 0

    return 1


def _pursuit_field_samples(scn: Scenario, scheme: WeightScheme) -> VectorField:
    from .pursuit_field import pursuit_direction
    grid = scn.grid
    n = grid.nx * grid.ny
    vectors = np.full((n, 2), math.nan)
    times = np.zeros(n)
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            i = grid.index(ix, iy)
            c = grid.cell_center(ix, iy)
            if not scn.environment.point_free(c):
                times[i] = math.nan
                continue
            if not segment_clear(c, scn.evader, scn.environment):
                times[i] = 0.0
                continue
            try:
                pv = pursuit_direction(scn.environment, c, scn.evader, scn.speeds(),
                                       scheme, scn.augment_weight,
                                       scn.normalize_before_augment)
            except ValueError:
                times[i] = math.nan
                continue
            vectors[i, 0] = pv.direction.x
            vectors[i, 1] = pv.direction.y
            finite = [q.time for q in pv.contributors if math.isfinite(q.time) and q.weight > 0]
            times[i] = min(finite) if finite else math.inf
    return VectorField(grid, vectors, times)


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
