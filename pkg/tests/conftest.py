import math

import numpy as np
import pytest

from cornertrack.corner_game import CornerGameConfig, StrategyClass, solve_corner_game
from cornertrack.geometry import Bounds, Environment, PolarPoint, Polygon


def make_cfg(vp, ve, Re, phi_e, Rp, phi_p, w=math.pi / 2):
    """Canonical corner-game config; w is the wedge complement (pi - interior)."""
    return CornerGameConfig(v_p_max=vp, v_e_max=ve,
                            evader0=PolarPoint(phi_e, Re),
                            pursuer0=PolarPoint(phi_p, Rp),
                            wedge=(math.pi, -w))


@pytest.fixture
def unit_square_env():
    return Environment([Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])],
                       Bounds(-10, -10, 10, 10))


# Pre-validated canonical configs (seeded satisfiability scans over
# a in [0.2,0.9], R in [0.5,5]; re-classified by the solver inside tests).

CLASS1_CFG = dict(vp=1.0, ve=0.5, Re=1.0, phi_e=1.8, Rp=3.0, phi_p=-1.2)

CLASS2_POOL = [
    # (a, Re, Rp, w, phi_e, phi_p) with finite two-stage outcomes
    (0.7098, 1.3106, 1.7426, 2.3594, 1.1671, -1.9411),
    (0.6181, 0.5849, 0.9195, 1.9210, 1.5340, -1.5809),
    (0.6290, 2.0570, 2.9204, 2.3910, 1.5096, -1.6066),
    (0.3036, 0.9212, 2.7697, 1.6094, 1.6127, -1.4916),
    (0.3119, 0.9011, 2.7223, 2.5635, 1.0185, -2.0892),
    (0.8066, 1.5655, 1.7420, 1.8879, 1.5953, -1.5113),
    (0.6179, 2.4524, 3.8032, 2.1113, 1.1139, -2.0006),
    (0.6652, 2.3753, 3.5559, 2.1921, 2.1381, -0.9833),
    (0.3830, 1.4241, 3.4018, 1.6257, 1.7440, -1.3659),
    (0.4182, 1.8362, 3.7372, 2.1367, 1.5522, -1.5550),
    (0.4770, 1.5808, 3.2551, 1.7703, 1.9426, -1.1690),
    (0.5227, 0.8713, 1.4170, 2.2860, 0.9365, -2.1841),
    (0.7699, 1.6251, 1.9574, 2.1226, 1.7110, -1.3983),
    (0.6159, 2.2739, 3.4190, 1.8647, 1.5489, -1.5598),
    (0.4119, 0.6496, 1.4768, 2.2406, 1.2165, -1.8843),
    (0.7372, 1.6189, 2.1262, 2.4866, 1.4771, -1.6364),
    (0.4001, 1.0054, 2.3367, 1.8268, 1.5753, -1.5246),
    (0.3831, 1.4708, 3.6547, 2.4848, 0.9383, -2.1823),
    (0.3681, 1.5324, 3.6843, 1.7915, 1.5581, -1.5508),
    (0.5978, 1.8181, 2.7384, 2.2089, 1.1210, -1.9902),
    (0.7311, 2.1972, 2.9481, 2.1893, 1.0878, -2.0159),
    (0.4709, 1.3395, 2.7533, 1.4706, 1.6899, -1.4172),
]


def class2_cfgs(limit=None):
    out = []
    for a, Re, Rp, w, phi_e, phi_p in CLASS2_POOL[: limit or len(CLASS2_POOL)]:
        out.append(make_cfg(1.0, a, Re, phi_e, Rp, phi_p, w=w))
    return out


def random_class1_cfgs(n, seed=2024, a_range=(0.2, 0.9), r_range=(0.5, 5.0)):
    """Rejection-sample canonical configs until n dispatch to a pure
    perpendicular-arrival Class-1 solution (no interior graze)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = rng.uniform(*a_range)
        Re = rng.uniform(*r_range)
        Rp = rng.uniform(*r_range)
        w = rng.uniform(0.8, 2.4)
        phi_e = rng.uniform(0.7, 2.8)
        phi_p = rng.uniform(-w + 0.05, min(phi_e - 0.05, math.pi - w - 0.02))
        if phi_p <= -w + 0.04:
            continue
        try:
            cfg = make_cfg(1.0, a, Re, phi_e, Rp, phi_p, w=w)
            outcome = solve_corner_game(cfg)
        except ValueError:
            continue
        if (outcome.strategy is StrategyClass.CLASS1
                and (outcome.detail or {}).get("graze_junction") is None):
            out.append((cfg, outcome))
    return out
