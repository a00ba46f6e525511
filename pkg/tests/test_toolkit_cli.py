import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from cornertrack.geometry import Vec2
from cornertrack.partitions import GridPartition, GridSpec, PartitionKind, VectorField
from cornertrack.toolkit_cli import (ScenarioError, cli_dispatch, dumps_json, field_to_csv,
                                     field_to_svg, import_partition, load_scenario,
                                     parse_trajectory_jsonl, partition_to_csv,
                                     partition_to_svg, save_scenario, scenario_from_dict,
                                     trajectory_to_jsonl)

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
TWO_OBSTACLE = os.path.join(REPO, "scenarios", "two_obstacle.json")
CORNER_DEMO = os.path.join(REPO, "scenarios", "corner_demo.json")


def minimal_scenario_dict():
    return {
        "version": "1",
        "environment": {"bounds": [0, 0, 10, 8],
                        "obstacles": [[[2, 2], [3, 2], [3, 3], [2, 3]]]},
        "pursuer": {"x": 1.0, "y": 1.0, "speed": 1.2},
        "evader": {"x": 5.0, "y": 1.0, "speed": 0.6},
    }


# ---------------------------------------------------------------------------
# scenario IO


def test_minimal_scenario_gets_defaults():
    scn = scenario_from_dict(minimal_scenario_dict())
    assert scn.dt == pytest.approx(1 / 120)
    assert scn.max_time == 30.0
    assert scn.seed == 0
    assert scn.augment_weight == 1.0
    assert scn.normalize_before_augment is True
    d = scn.to_dict()
    assert d["dt"] == scn.dt and d["max_time"] == scn.max_time


def test_scenario_rejects_agent_in_obstacle():
    data = minimal_scenario_dict()
    data["pursuer"] = {"x": 2.5, "y": 2.5, "speed": 1.0}
    with pytest.raises(ScenarioError, match="pursuer not in free space"):
        scenario_from_dict(data)


def test_scenario_rejects_bad_fields():
    data = minimal_scenario_dict()
    del data["evader"]
    with pytest.raises(ScenarioError, match="evader"):
        scenario_from_dict(data)
    data = minimal_scenario_dict()
    data["pursuer"]["speed"] = -1
    with pytest.raises(ScenarioError, match="speed"):
        scenario_from_dict(data)
    data = minimal_scenario_dict()
    data["version"] = "99"
    with pytest.raises(ScenarioError, match="version"):
        scenario_from_dict(data)


def test_scenario_parse_error_has_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"version": "1",\n  broken')
    with pytest.raises(ScenarioError, match=r":\d+:\d+"):
        load_scenario(str(p))


def test_scenario_round_trip(tmp_path):
    scn = scenario_from_dict(minimal_scenario_dict())
    path = tmp_path / "scn.json"
    save_scenario(scn, str(path))
    again = load_scenario(str(path))
    assert again.to_dict() == scn.to_dict()


def test_load_scenario_missing_file():
    with pytest.raises(ScenarioError, match="not found"):
        load_scenario("/nonexistent/file.json")


# ---------------------------------------------------------------------------
# partition / field export


def small_time_partition():
    spec = GridSpec(Vec2(0.0, 0.0), 0.5, 2, 2)
    values = np.array([1.5, math.inf, 0.25, 3.0])
    return GridPartition(spec, PartitionKind.TRACKING_TIME, values)


def small_strategy_partition():
    spec = GridSpec(Vec2(-1.0, 2.0), 0.5, 3, 2)
    values = np.array([1, 2, 3, 4, 5, 6], dtype=np.int64)
    return GridPartition(spec, PartitionKind.STRATEGY_CLASS, values)


def test_partition_csv_format():
    text = partition_to_csv(small_time_partition())
    lines = text.splitlines()
    assert lines[0] == "# kind,nx,ny,ox,oy,cell"
    assert lines[1] == "# time,2,2,0.0,0.0,0.5"
    assert lines[2:] == ["1.5", "inf", "0.25", "3.0"]


def test_partition_csv_strategy_codes():
    text = partition_to_csv(small_strategy_partition())
    body = text.splitlines()[2:]
    assert body == ["1", "2", "3", "4", "5", "6"]
    assert all(v in {"1", "2", "3", "4", "5", "6"} for v in body)


def test_partition_export_deterministic(tmp_path):
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    from cornertrack.toolkit_cli import export_partition
    export_partition(small_time_partition(), str(p1), "csv")
    export_partition(small_time_partition(), str(p2), "csv")
    assert p1.read_bytes() == p2.read_bytes()
    s1 = tmp_path / "a.svg"
    s2 = tmp_path / "b.svg"
    export_partition(small_strategy_partition(), str(s1), "svg")
    export_partition(small_strategy_partition(), str(s2), "svg")
    assert s1.read_bytes() == s2.read_bytes()


def test_partition_csv_round_trip(tmp_path):
    for part in (small_time_partition(), small_strategy_partition()):
        path = tmp_path / "p.csv"
        path.write_text(partition_to_csv(part))
        back = import_partition(str(path))
        assert back.kind == part.kind
        assert back.spec == part.spec
        assert all((a == b) or (math.isnan(a) and math.isnan(b))
                   for a, b in zip(back.values.tolist(), part.values.tolist()))


def test_partition_csv_nan_marker(tmp_path):
    spec = GridSpec(Vec2(0, 0), 1.0, 2, 1)
    part = GridPartition(spec, PartitionKind.TRACKING_TIME,
                         np.array([math.nan, 2.0]))
    text = partition_to_csv(part)
    assert text.splitlines()[2] == "nan"
    path = tmp_path / "n.csv"
    path.write_text(text)
    back = import_partition(str(path))
    assert math.isnan(back.values[0]) and back.values[1] == 2.0


def test_partition_svg_contains_paper_semantics():
    svg = partition_to_svg(small_time_partition(), evader=Vec2(0.5, 0.5),
                           pursuer=Vec2(0.2, 0.2))
    assert svg.startswith("<svg")
    assert "#cc0000" in svg  # red evader dot
    assert "#0000cc" in svg  # blue pursuer dot
    assert "#ffffcc" in svg  # infinite-time cell


def test_field_csv_and_svg():
    spec = GridSpec(Vec2(0, 0), 0.5, 2, 1)
    vectors = np.array([[1.0, 0.0], [math.nan, math.nan]])
    times = np.array([2.0, math.nan])
    f = VectorField(spec, vectors, times)
    text = field_to_csv(f)
    lines = text.splitlines()
    assert lines[1] == "# field,2,1,0.0,0.0,0.5"
    assert lines[2] == "1.0,0.0,2.0"
    assert lines[3] == "nan,nan,nan"
    svg = field_to_svg(f)
    assert "<line" in svg and svg.startswith("<svg")


# ---------------------------------------------------------------------------
# trajectory jsonl + goldens


def run_two_obstacle(scheme: str, dt=None):
    from cornertrack.pursuit_field import WeightScheme
    from cornertrack.sim_engine import AgentState, PursuitFieldPolicy, run
    scn = load_scenario(TWO_OBSTACLE)
    sch = WeightScheme.DISTANCE_ARGMIN if scheme == "distance" else WeightScheme.INVERSE_TIME
    return run(scn.environment, AgentState(scn.pursuer, scn.pursuer_speed),
               AgentState(scn.evader, scn.evader_speed),
               PursuitFieldPolicy(sch), scn.build_evader_policy(),
               dt or scn.dt, scn.max_time)


@pytest.mark.slow
@pytest.mark.parametrize("scheme", ["distance", "inverse_time"])
def test_golden_two_obstacle_logs(scheme):
    log = run_two_obstacle(scheme)
    assert log.outcome.kind == "path_done"
    assert all(s.los for s in log.steps)
    text = trajectory_to_jsonl(log)
    golden = os.path.join(os.path.dirname(__file__), "golden", f"sim_{scheme}.jsonl")
    with open(golden, "r", encoding="utf-8") as fh:
        assert fh.read() == text


def test_trajectory_jsonl_schema():
    log = run_two_obstacle("distance", dt=1 / 30)
    text = trajectory_to_jsonl(log)
    steps, outcome = parse_trajectory_jsonl(text)
    assert set(steps[0]) == {"t", "px", "py", "ex", "ey", "los", "corner", "weights"}
    assert outcome["outcome"] in {"path_done", "los_broken", "max_time"}
    # weights rows are (obstacle, vertex, weight, time, distance)
    row = next(s for s in steps if s["weights"])
    assert len(row["weights"][0]) == 5
    # values re-import losslessly (shortest round-trip decimals)
    for rec, step in zip(steps, log.steps):
        assert rec["px"] == step.pursuer.x and rec["py"] == step.pursuer.y
        assert rec["ex"] == step.evader.x and rec["ey"] == step.evader.y
        assert rec["t"] == step.t


def test_dumps_json_inf_literal():
    assert dumps_json({"t": math.inf}) == '{"t":"inf"}'
    assert dumps_json([1.5, math.nan]) == '[1.5,"nan"]'


# ---------------------------------------------------------------------------
# CLI


def write_corner_cfg(tmp_path, **kw):
    data = {"corner_game": {
        "v_p_max": kw.get("vp", 1.0), "v_e_max": kw.get("ve", 0.5),
        "evader": {"angle": kw.get("phi_e", 1.8), "radius": kw.get("Re", 1.0)},
        "pursuer": {"angle": kw.get("phi_p", -1.2), "radius": kw.get("Rp", 3.0)},
        "wedge_interior_angle": kw.get("interior", math.pi / 2),
    }}
    p = tmp_path / "corner.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_cli_solve_corner_class1(tmp_path, capsys):
    cfg = write_corner_cfg(tmp_path)
    rc = cli_dispatch(["solve-corner", "--config", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    rep = json.loads(out)
    assert rep["class"] == "Class1"
    assert "residuals" in rep and abs(rep["residuals"]["collinearity"]) < 1e-9
    assert rep["t_f"] > 0


def test_cli_solve_corner_star(tmp_path, capsys):
    cfg = write_corner_cfg(tmp_path, phi_p=0.4, Rp=1.0)
    rc = cli_dispatch(["solve-corner", "--config", cfg])
    rep = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert rep["class"] == "StarAny"
    assert rep["tracking_time"] == "inf"


def test_cli_partition_strategy(tmp_path):
    out = tmp_path / "part.csv"
    scn = json.load(open(CORNER_DEMO))
    scn["grid"] = {"origin": [-2.0, -2.0], "cell_size": 0.25, "nx": 16, "ny": 16}
    cfg = tmp_path / "scene.json"
    cfg.write_text(json.dumps(scn))
    rc = cli_dispatch(["partition", "--config", str(cfg), "--kind", "strategy",
                       "--out", str(out)])
    assert rc == 0
    body = out.read_text().splitlines()[2:]
    assert set(body) <= {"1", "2", "3", "4", "5", "6"}


def test_cli_simulate_deterministic(tmp_path):
    scn = json.load(open(TWO_OBSTACLE))
    scn["max_time"] = 2.0
    cfg = tmp_path / "scene.json"
    cfg.write_text(json.dumps(scn))
    outs = []
    for name in ("a.jsonl", "b.jsonl"):
        out = tmp_path / name
        rc = cli_dispatch(["simulate", "--config", str(cfg), "--policy", "inverse-time",
                           "--out", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_cli_unknown_subcommand_exit_code(capsys):
    rc = cli_dispatch(["frobnicate"])
    assert rc == 1
    assert capsys.readouterr().err


def test_cli_solver_error_exit_code(tmp_path, capsys):
    # Pursuer placed inside the wedge: the solver itself rejects the state.
    cfg = write_corner_cfg(tmp_path, phi_p=-2.9, interior=0.5)
    rc = cli_dispatch(["solve-corner", "--config", cfg])
    assert rc == 2
    assert "solver error" in capsys.readouterr().err


def test_cli_validation_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"version": "1"}))
    rc = cli_dispatch(["simulate", "--config", str(bad)])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_cli_field_csv(tmp_path):
    scn = json.load(open(CORNER_DEMO))
    scn["grid"] = {"origin": [-2.0, -2.0], "cell_size": 0.5, "nx": 8, "ny": 8}
    cfg = tmp_path / "scene.json"
    cfg.write_text(json.dumps(scn))
    out = tmp_path / "field.csv"
    rc = cli_dispatch(["field", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[1].startswith("# field,8,8")
    assert len(lines) == 2 + 64


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cornertrack.toolkit_cli"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "usage" in proc.stderr.lower() or "usage" in proc.stdout.lower()
