import math

import numpy as np
import pytest

from conftest import CLASS1_CFG, class2_cfgs, make_cfg
from cornertrack.corner_game import (CornerGameConfig, CornerState, Controls,
                                     StrategyClass, constraint_S, race_to_origin,
                                     sine_law_residual, solve_class1, solve_class2,
                                     solve_corner_game, stage1_geometry,
                                     strategy_vector, tangent_angle, tangent_rate)
from cornertrack.geometry import PolarPoint, Vec2
from oracles import best_straight_ride, perturbed_class2_total, straight_event_time


# ---------------------------------------------------------------------------
# tangent line


def test_tangent_angle_at_zero():
    cfg = make_cfg(1.0, 0.5, 2.0, 1.9, 3.0, -0.5)
    assert tangent_angle(cfg, 0.0) == cfg.evader0.angle


def test_tangent_angle_near_horizon():
    cfg = make_cfg(1.0, 0.5, 2.0, 1.2, 3.0, -0.5)
    t = cfg.horizon * (1 - 1e-12)
    assert math.isclose(tangent_angle(cfg, t), 1.2 + math.pi / 2, abs_tol=1e-5)


def test_tangent_angle_closed_form_value():
    cfg = make_cfg(1.0, 1.0, 2.0, 0.9, 3.0, -0.5)
    assert math.isclose(tangent_angle(cfg, 1.0), 0.9 + math.pi / 6, rel_tol=1e-12)


def test_tangent_angle_rejects_horizon():
    cfg = make_cfg(1.0, 0.5, 2.0, 1.2, 3.0, -0.5)
    with pytest.raises(ValueError, match="reachable disc"):
        tangent_angle(cfg, cfg.horizon)


def test_tangent_rate_matches_finite_differences():
    cfg = make_cfg(1.0, 0.7, 1.7, 1.3, 2.0, -0.4)
    for t in np.linspace(0.0, 0.99 * cfg.horizon, 50):
        h = 1e-7 * cfg.horizon
        t0 = max(t - h, 0.0)
        fd = (tangent_angle(cfg, t + h) - tangent_angle(cfg, t0)) / (t + h - t0)
        assert math.isclose(fd, tangent_rate(cfg, t), rel_tol=1e-6)


def test_constraint_S_values():
    cfg = make_cfg(1.0, 0.5, 2.0, 2.0, 3.0, -0.5)
    assert constraint_S(cfg, CornerState(0.0, 1.0 + math.pi, 1.0, 1.0)) == 0.0
    s = constraint_S(cfg, CornerState(0.0, 2.0, 1.0, 2.0 - math.pi / 2))
    assert math.isclose(s, math.pi / 2, rel_tol=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        make_cfg(0.0, 0.5, 1.0, 1.0, 1.0, -0.5)
    with pytest.raises(ValueError):
        make_cfg(1.0, 0.5, 0.0, 1.0, 1.0, -0.5)
    with pytest.raises(ValueError):
        CornerGameConfig(1.0, 0.5, PolarPoint(1.0, 1.0), PolarPoint(-0.5, 1.0),
                         wedge=(1.0, -1.0))
    cfg = make_cfg(2.0, 0.5, 1.0, 1.0, 1.0, -0.5)
    assert cfg.speed_ratio_a == 0.25


def test_controls_validation():
    Controls(0.3, 1.0)
    with pytest.raises(ValueError):
        Controls(2.0, 1.0)
    with pytest.raises(ValueError):
        Controls(0.0, -0.1)


# ---------------------------------------------------------------------------
# Class 1


def test_class1_boundary_start_rejects_zero_root():
    # Pursuer exactly on the t=0 terminal ray: S(0)=0, the trivial root at
    # t=0 must not be returned.
    cfg = make_cfg(1.0, 0.5, 2.0, 2.0, 3.0, 2.0 - math.pi)
    res = solve_class1(cfg)
    if res is not None:
        assert res[0] > 0


def test_class1_example_against_forward_simulation():
    cfg = make_cfg(1.0, **{k: v for k, v in CLASS1_CFG.items() if k != "vp"})
    res = solve_class1(cfg)
    assert res is not None
    t_f, heading = res
    t_sim = straight_event_time(cfg, heading)
    assert t_sim is not None
    assert abs(t_f - t_sim) < 1e-3


def test_class1_terminal_conditions():
    cfg = make_cfg(1.0, **{k: v for k, v in CLASS1_CFG.items() if k != "vp"})
    t_f, heading = solve_class1(cfg)
    p0 = cfg.pursuer0.to_vec()
    pos = Vec2(p0.x + t_f * math.cos(heading), p0.y + t_f * math.sin(heading))
    x3 = math.atan2(pos.y, pos.x)
    x1 = tangent_angle(cfg, t_f)
    assert abs(x1 - x3 - math.pi) < 1e-9
    assert tangent_rate(cfg, t_f) - cfg.v_p_max / pos.norm() > 0


def test_class1_straightness_and_speed():
    cfg = make_cfg(1.0, **{k: v for k, v in CLASS1_CFG.items() if k != "vp"})
    out = solve_corner_game(cfg)
    assert out.strategy is StrategyClass.CLASS1
    ts = np.linspace(0.0, out.tracking_time, 250)
    pts = [out.trajectory(t)[0] for t in ts]
    a, b = pts[0], pts[-1]
    chord = (b - a).unit()
    for q in pts:
        dev = abs((q - a).cross(chord))
        assert dev < 1e-9
    for i in range(1, len(ts)):
        d = (pts[i] - pts[i - 1]).norm()
        assert math.isclose(d, cfg.v_p_max * (ts[i] - ts[i - 1]), rel_tol=1e-6)


def test_class1_sweep_rejects_violating_roots():
    # When a perpendicular-arrival root exists but its path dips below the
    # visibility margin, the solver must not return it.
    rng = np.random.default_rng(5)
    from cornertrack.corner_game import _min_S_along_segment, _x1_np
    checked = 0
    for _ in range(400):
        cfg = make_cfg(1.0, rng.uniform(0.3, 0.9), rng.uniform(0.4, 1.2),
                       rng.uniform(1.7, 2.6), rng.uniform(1.5, 4.5),
                       rng.uniform(-1.3, -0.2))
        te = cfg.horizon
        ts = np.linspace(1e-9, te * (1 - 1e-9), 2000)
        f = cfg.pursuer0.radius * np.sin(_x1_np(cfg, ts) - math.pi
                                         - cfg.pursuer0.angle) - ts
        has_root = bool((np.sign(f[:-1]) * np.sign(f[1:]) < 0).any())
        if not has_root:
            continue
        res = solve_class1(cfg)
        if res is None:
            checked += 1
            continue
        t_f, heading = res
        assert _min_S_along_segment(cfg, heading, t_f) >= -1e-9
        checked += 1
    assert checked > 20


# ---------------------------------------------------------------------------
# Class 2


@pytest.mark.parametrize("cfg", class2_cfgs(8))
def test_class2_junction_identities(cfg):
    sol = solve_class2(cfg)
    assert sol is not None
    g = sol.geometry
    # law-of-sines residual
    assert sine_law_residual(cfg, g) < 1e-9
    # matched angular speed at the junction
    matched = cfg.v_p_max * math.sin(g.gamma_T) / g.terminal_radius
    assert abs(tangent_rate(cfg, sol.T1) - matched) < 1e-6
    # junction direction control in [0, pi/2)
    u1 = g.gamma_T - math.pi / 2
    assert 0 <= u1 < math.pi / 2
    # triangle quantities are mutually consistent
    assert math.isclose(math.sin(g.alpha_T),
                        cfg.v_e_max * sol.T1 / cfg.evader0.radius, rel_tol=1e-9)
    assert math.isclose(g.beta_T, g.alpha_T - math.pi + g.delta_phi0, rel_tol=1e-9)


@pytest.mark.parametrize("cfg", class2_cfgs(8))
def test_class2_stage_boundary_and_ride(cfg):
    out = solve_corner_game(cfg)
    assert out.strategy is StrategyClass.CLASS2
    assert math.isfinite(out.tracking_time)
    T1 = out.junction_time
    assert 0 < T1 < out.tracking_time
    # At the junction the pursuer sits on the opposite ray of the line.
    pos, _ = out.trajectory(T1)
    x3 = math.atan2(pos.y, pos.x)
    assert abs(x3 - (tangent_angle(cfg, T1) - math.pi)) < 1e-9
    # During the ride the angle stays locked to the line.
    for t in np.linspace(T1, out.tracking_time, 200):
        pos, _ = out.trajectory(t)
        x3 = math.atan2(pos.y, pos.x)
        gap = (x3 - (tangent_angle(cfg, min(t, cfg.horizon * (1 - 1e-12))) - math.pi)
               + math.pi) % (2 * math.pi) - math.pi
        assert abs(gap) < 1e-6
    # Termination: the full speed budget is angular.
    t_end = out.tracking_time
    r_end = out.trajectory(t_end)[0].norm()
    assert abs(cfg.v_p_max - r_end * tangent_rate(cfg, min(t_end, cfg.horizon * (1 - 1e-12)))) < 1e-6


def test_class2_stage1_straightness():
    cfg = class2_cfgs(1)[0]
    out = solve_corner_game(cfg)
    T1 = out.junction_time
    ts = np.linspace(0.0, T1, 200)
    pts = [out.trajectory(t)[0] for t in ts]
    chord = (pts[-1] - pts[0]).unit()
    for q in pts:
        assert abs((q - pts[0]).cross(chord)) < 1e-9


def test_class2_against_exhaustive_oracle():
    cfg = class2_cfgs(1)[0]
    out = solve_corner_game(cfg)
    best, _, _ = best_straight_ride(cfg, heading_step=1e-3, dt_rel=1e-4)
    assert math.isfinite(best)
    assert abs(best - out.tracking_time) < 1e-2


@pytest.mark.parametrize("cfg", class2_cfgs(3))
def test_class2_local_optimality(cfg):
    out = solve_corner_game(cfg)
    assert out.strategy is StrategyClass.CLASS2
    heading = out.detail["heading"]
    for d in (-0.01, 0.01):
        perturbed = perturbed_class2_total(cfg, heading + d)
        assert perturbed < out.tracking_time


def test_stage1_geometry_type():
    cfg = class2_cfgs(1)[0]
    sol = solve_class2(cfg)
    g = stage1_geometry(cfg, sol.T1)
    assert g.T == sol.T1
    assert g.terminal_radius > 0
    assert math.pi / 2 <= g.gamma_T < math.pi


# ---------------------------------------------------------------------------
# race / star / dispatch


def test_race_star_boundary_is_win():
    cfg = make_cfg(1.0, 0.5, 2.0, 2.2, 1.5, 0.0)  # pursuer on the star boundary ray
    out = race_to_origin(cfg)
    assert out.strategy is StrategyClass.SHORTEST_PATH_TO_STAR
    assert out.tracking_time == math.inf


def test_race_finite_when_pursuer_loses():
    # No intercept geometry, no junction, no safe dash: tracking lasts
    # exactly until the evader's escape matures (both configs confirmed by
    # the exhaustive straight-heading oracle: no heading wins and the best
    # survival equals the deadline).
    for params in ((0.6141, 1.2920, 0.7249, 4.6386, -0.6410, 0.8290),
                   (0.5685, 0.9703, 0.9087, 3.6210, -1.1322, 2.3103)):
        a, Re, phi_e, Rp, phi_p, w = params
        cfg = make_cfg(1.0, a, Re, phi_e, Rp, phi_p, w=w)
        assert solve_class1(cfg) is None
        out = solve_corner_game(cfg)
        assert out.strategy is StrategyClass.SHORTEST_PATH_TO_STAR
        assert math.isclose(out.tracking_time, cfg.escape_deadline, rel_tol=1e-9)
        standalone = race_to_origin(cfg)
        assert math.isclose(standalone.tracking_time, out.tracking_time, rel_tol=1e-12)


def test_race_geodesic_via_vertex():
    # Angular gap to the star wedge beyond pi/2: nearest entry is the
    # corner vertex itself; verified against dense sampling of the wedge
    # boundary.
    cfg = make_cfg(1.0, 0.9, 0.3, 0.9, 2.0, -1.9, w=2.4)
    from cornertrack.corner_game import star_distance
    d, ang, rad = star_distance(cfg, cfg.pursuer0)
    assert math.isclose(d, cfg.pursuer0.radius, rel_tol=1e-12)
    assert rad == 0.0
    # dense boundary sampling oracle
    p = cfg.pursuer0.to_vec()
    best = min(
        (Vec2.from_polar(a, r) - p).norm()
        for a in (cfg.star_lo, cfg.star_hi)
        for r in np.linspace(0.0, 3 * cfg.pursuer0.radius, 4000)
    )
    assert d <= best + 1e-6


def test_dispatch_star_any():
    cfg = make_cfg(1.0, 0.5, 2.0, 2.0, 1.5, 0.7)
    out = solve_corner_game(cfg)
    assert out.strategy is StrategyClass.STAR_ANY
    assert out.tracking_time == math.inf
    # sampler heads for the vertex at full speed, then stops
    p0, _ = out.trajectory(0.0)
    p1, _ = out.trajectory(0.5)
    assert math.isclose((p0 - p1).norm(), 0.5, rel_tol=1e-9)
    p_end, _ = out.trajectory(100.0)
    assert p_end.norm() < 1e-9


def test_dispatch_not_visible():
    cfg = make_cfg(1.0, 0.5, 2.0, 2.6, 1.5, 2.6 - math.pi - 0.1, w=2.6)
    out = solve_corner_game(cfg)
    assert out.strategy is StrategyClass.NOT_VISIBLE
    assert out.tracking_time == 0.0


def test_dispatch_rejects_wedge_positions():
    with pytest.raises(ValueError, match="pursuer not in free space"):
        solve_corner_game(make_cfg(1.0, 0.5, 2.0, 2.0, 1.5, -1.8, w=math.pi / 2))


def test_strategy_vector_star_points_at_vertex():
    cfg = make_cfg(1.0, 0.5, 2.0, 2.0, 1.5, 0.7)
    v, t = strategy_vector(cfg)
    assert t == math.inf
    expect = Vec2.from_polar(0.7 + math.pi, 1.0)
    assert (v - expect).norm() < 1e-12


def test_strategy_vector_class1_heading():
    cfg = make_cfg(1.0, **{k: v for k, v in CLASS1_CFG.items() if k != "vp"})
    t_f, heading = solve_class1(cfg)
    v, t = strategy_vector(cfg)
    assert math.isclose(t, t_f, rel_tol=1e-12)
    assert (v - Vec2.from_polar(heading, 1.0)).norm() < 1e-12


def test_strategy_vector_not_visible_errors():
    cfg = make_cfg(1.0, 0.5, 2.0, 2.6, 1.5, 2.6 - math.pi - 0.1, w=2.6)
    with pytest.raises(ValueError, match="no strategy"):
        strategy_vector(cfg)


def test_scale_invariance():
    lam = 2.7
    for base in [make_cfg(1.0, **{k: v for k, v in CLASS1_CFG.items() if k != "vp"}),
                 class2_cfgs(1)[0]]:
        scaled = CornerGameConfig(base.v_p_max, base.v_e_max,
                                  PolarPoint(base.evader0.angle, lam * base.evader0.radius),
                                  PolarPoint(base.pursuer0.angle, lam * base.pursuer0.radius),
                                  wedge=base.wedge)
        o1 = solve_corner_game(base)
        o2 = solve_corner_game(scaled)
        assert o1.strategy is o2.strategy
        if math.isfinite(o1.tracking_time):
            assert math.isclose(o2.tracking_time, lam * o1.tracking_time, rel_tol=1e-9)


def test_sampled_S_nonnegative_along_solutions():
    for cfg in [make_cfg(1.0, **{k: v for k, v in CLASS1_CFG.items() if k != "vp"}),
                class2_cfgs(1)[0]]:
        out = solve_corner_game(cfg)
        for t in np.linspace(0.0, out.tracking_time, 1000):
            pos, x1 = out.trajectory(t)
            x3 = math.atan2(pos.y, pos.x)
            S = (x3 - x1 + math.pi + math.pi) % (2 * math.pi) - math.pi
            assert S >= -1e-6


def test_speed_saturation_class2_and_race():
    # Every returned trajectory moves at exactly v_p_max until it stops.
    # The last 2% of a ride is excluded: the radius has a square-root
    # singularity at termination and the sampler interpolates linearly.
    cfgs = [class2_cfgs(1)[0],
            make_cfg(1.0, 0.4942, 0.9703, 1.07, 2.0256, -1.5782, w=1.8964)]
    for cfg in cfgs:
        out = solve_corner_game(cfg)
        t_end = min(out.tracking_time, cfg.horizon * 0.999) * 0.98
        ts = np.linspace(0.0, t_end, 400)
        pts = [out.trajectory(t)[0] for t in ts]
        det = out.detail or {}
        stop = det.get("dash_time", out.tracking_time)
        for i in range(1, len(ts)):
            d = (pts[i] - pts[i - 1]).norm()
            expect = cfg.v_p_max * (ts[i] - ts[i - 1])
            assert d <= expect * (1 + 1e-6) + 1e-12
            if ts[i] < stop:  # full speed until any early stop (dash arrival)
                assert math.isclose(d, expect, rel_tol=2e-4)
