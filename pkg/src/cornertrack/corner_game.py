"""Optimal target tracking around a single convex corner.

The game is posed in a canonical frame: corner vertex at the origin, the
occluding obstacle edge along angle pi, the far edge at -(pi - interior).
The evader starts at polar (phi_e0, R_e); its worst-case reachable set is
the disc of radius v_e_max*t around that start.  The tangent line from the
origin to the disc on the occlusion side has angle

    x1(t) = phi_e0 + asin(v_e_max*t / R_e)

and the pursuer (polar angle x3, radius x2) keeps the whole disc in view
exactly while S = pi - x1 + x3 >= 0.  Tracking ends at the first time the
pursuer is collinear with the origin and the tangent point while the line
sweeps strictly faster than the pursuer can turn.

The solver dispatches over five mutually exclusive strategy regimes:

* star region: from angles [0, pi - interior-complement] the whole free
  space is visible, so the pursuer wins outright;
* a safe straight dash into the star region (checked before the two
  trajectory classes because a successful dash dominates any finite time);
* a single straight segment hitting the terminal line perpendicularly
  (``Class1``);
* a straight segment that reaches the rotating line with matched angular
  speed, then a constrained ride along it (``Class2``);
* the race: evader runs for the corner / occluding edge, pursuer runs for
  the star region, first arrival decides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Optional

import numpy as np

from .geometry import CornerFrame, PolarPoint, Vec2, normalize_angle

try:  # pragma: no cover - exercised implicitly
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(f):
            return f

        return deco


# Sweep/scan resolutions (fractions of the relevant domain).
SCAN_POINTS = 1000
SWEEP_POINTS = 1000
SWEEP_TOL = -1e-9
BISECT_TOL = 1e-12
RIDE_DT_FRACTION = 1e-4
RADICAND_EVENT_EPS = 1e-8


class SolverError(RuntimeError):
    """Raised when a numerical stage that must succeed fails."""


class StrategyClass(IntEnum):
    """Strategy codes; the integer values double as partition cell codes."""

    STAR_ANY = 1
    SHORTEST_PATH_TO_STAR = 2
    CLASS1 = 3
    CLASS2 = 4
    NOT_VISIBLE = 5
    OBSTACLE = 6

    @property
    def label(self) -> str:
        return _CLASS_LABELS[self]


_CLASS_LABELS = {
    StrategyClass.STAR_ANY: "StarAny",
    StrategyClass.SHORTEST_PATH_TO_STAR: "ShortestPathToStar",
    StrategyClass.CLASS1: "Class1",
    StrategyClass.CLASS2: "Class2",
    StrategyClass.NOT_VISIBLE: "NotVisible",
    StrategyClass.OBSTACLE: "Obstacle",
}


@dataclass(frozen=True, slots=True)
class CornerGameConfig:
    """Canonical-frame instance of the single-corner game."""

    v_p_max: float
    v_e_max: float
    evader0: PolarPoint
    pursuer0: PolarPoint
    wedge: tuple[float, float] = (math.pi, -math.pi / 2)

    def __post_init__(self):
        if self.v_p_max <= 0 or self.v_e_max <= 0:
            raise ValueError("speeds must be positive")
        if self.evader0.radius <= 0:
            raise ValueError("evader must not start on the corner vertex")
        if self.pursuer0.radius <= 0:
            raise ValueError("pursuer must not start on the corner vertex")
        occ, far = self.wedge
        if abs(occ - math.pi) > 1e-9:
            raise ValueError("canonical occluding edge must sit at angle pi")
        if not -math.pi < far <= 0:
            raise ValueError("far wedge edge must lie in (-pi, 0]")

    @property
    def speed_ratio_a(self) -> float:
        return self.v_e_max / self.v_p_max

    @property
    def horizon(self) -> float:
        """Time at which the reachable disc swallows the corner."""
        return self.evader0.radius / self.v_e_max

    @property
    def star_lo(self) -> float:
        return 0.0

    @property
    def star_hi(self) -> float:
        """Star region spans canonical angles [0, star_hi]."""
        return math.pi + self.wedge[1]

    @property
    def escape_deadline(self) -> float:
        """First time the worst-case disc reaches the occluding edge.

        For evaders below angle pi/2 the nearest edge point is the vertex
        itself and the deadline is the full horizon.
        """
        phi = self.evader0.angle
        if phi > math.pi / 2:
            return self.horizon * math.sin(phi)
        return self.horizon

    def in_star(self, angle: float, radius: float) -> bool:
        return radius >= 0 and self.star_lo <= angle <= self.star_hi

    def in_wedge(self, angle: float) -> bool:
        """True for canonical angles strictly inside the obstacle wedge.

        The wedge spans angles (pi, 2*pi - w) i.e. (-pi, far) after
        normalization; both edges are boundary and count as free.
        """
        far = self.wedge[1]
        a = normalize_angle(angle)
        return -math.pi + 1e-12 < a < far - 1e-12


@dataclass(frozen=True, slots=True)
class CornerState:
    t: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if self.x2 <= 0:
            raise ValueError("pursuer radius must stay positive")
        if self.t < 0:
            raise ValueError("negative time")


@dataclass(frozen=True, slots=True)
class Controls:
    u1: float
    u2: float

    def __post_init__(self):
        if not -math.pi / 2 <= self.u1 <= math.pi / 2:
            raise ValueError("u1 outside [-pi/2, pi/2]")
        if self.u2 < 0:
            raise ValueError("negative speed")


@dataclass(frozen=True, slots=True)
class Stage1Geometry:
    """Junction triangle quantities for the two-stage solution."""

    T: float
    alpha_T: float
    beta_T: float
    gamma_T: float
    delta_phi0: float
    terminal_radius: float


@dataclass(frozen=True)
class TrackingOutcome:
    strategy: StrategyClass
    tracking_time: float
    trajectory: Callable[[float], tuple[Vec2, float]]
    junction_time: Optional[float] = None
    detail: dict | None = None


def tangent_angle(cfg: CornerGameConfig, t: float) -> float:
    """Angle of the tangent line to the reachable disc at time t."""
    h = cfg.horizon
    if t < 0:
        raise ValueError("negative time")
    if t >= h:
        raise ValueError("reachable disc contains corner")
    return cfg.evader0.angle + math.asin(cfg.v_e_max * t / cfg.evader0.radius)


def tangent_rate(cfg: CornerGameConfig, t: float) -> float:
    """Angular speed of the tangent line."""
    r = cfg.evader0.radius
    rad = r * r - (cfg.v_e_max * t) ** 2
    if rad <= 0:
        raise ValueError("reachable disc contains corner")
    return cfg.v_e_max / math.sqrt(rad)


def constraint_S(cfg: CornerGameConfig, state: CornerState) -> float:
    """Visibility margin S = pi - x1 + x3 (>= 0 keeps the disc in view)."""
    return math.pi - state.x1 + state.x3


def _x1_np(cfg: CornerGameConfig, ts: np.ndarray) -> np.ndarray:
    arg = np.clip(cfg.v_e_max * ts / cfg.evader0.radius, -1.0, 1.0)
    return cfg.evader0.angle + np.arcsin(arg)


def _initial_S(cfg: CornerGameConfig) -> float:
    return math.pi - cfg.evader0.angle + cfg.pursuer0.angle


def _min_S_along_segment(cfg: CornerGameConfig, heading: float, duration: float,
                         n: int = SWEEP_POINTS) -> float:
    """Minimum of S(t) while the pursuer runs straight at full speed.

    Samples landing on the corner vertex itself have no defined angle and
    graze by convention; they are excluded from the minimum.
    """
    p0 = cfg.pursuer0.to_vec()
    ts = np.linspace(0.0, duration, n)
    xs = p0.x + cfg.v_p_max * ts * math.cos(heading)
    ys = p0.y + cfg.v_p_max * ts * math.sin(heading)
    x3 = np.unwrap(np.arctan2(ys, xs))
    S = math.pi - _x1_np(cfg, ts) + x3
    S = np.where(np.hypot(xs, ys) < 1e-9 * max(1.0, cfg.pursuer0.radius), np.inf, S)
    return float(S.min())


def _segment_angles_bounded(cfg: CornerGameConfig, heading: float, duration: float,
                            n: int = SWEEP_POINTS) -> tuple[float, float]:
    p0 = cfg.pursuer0.to_vec()
    ts = np.linspace(0.0, duration, n)
    xs = p0.x + cfg.v_p_max * ts * math.cos(heading)
    ys = p0.y + cfg.v_p_max * ts * math.sin(heading)
    x3 = np.unwrap(np.arctan2(ys, xs))
    return float(x3.min()), float(x3.max())


def _bisect(f, lo: float, hi: float, flo: float, tol: float = BISECT_TOL) -> float:
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_roots(f_vec, lo: float, hi: float, n: int = SCAN_POINTS) -> list[float]:
    """Bracket sign changes of a vectorized function on [lo, hi] and bisect."""
    if hi <= lo:
        return []
    ts = np.linspace(lo, hi, n + 1)
    vals = f_vec(ts)
    roots = []
    for i in range(n):
        v0, v1 = vals[i], vals[i + 1]
        if not (np.isfinite(v0) and np.isfinite(v1)):
            continue
        if v0 == 0.0:
            roots.append(float(ts[i]))
        elif v0 * v1 < 0:
            def scalar(t, _f=f_vec):
                return float(_f(np.array([t]))[0])

            roots.append(_bisect(scalar, float(ts[i]), float(ts[i + 1]), float(v0)))
    if vals[-1] == 0.0 and np.isfinite(vals[-1]):
        roots.append(float(ts[-1]))
    return roots


# ---------------------------------------------------------------------------
# Class 1: straight segment, perpendicular arrival on the terminal line.


def solve_class1(cfg: CornerGameConfig) -> Optional[tuple[float, float]]:
    """Largest valid root of  R_p sin(theta_f(t) - phi_p0) = v_p t.

    theta_f(t) = x1(t) - pi is the angle of the ray the pursuer must stand
    on at termination; the straight trajectory runs perpendicular to it in
    the sweep direction.  A root is accepted when the perpendicular foot
    lies on the ray, the line outruns the pursuer at the end, the terminal
    tangent stays on the free side of the occluding edge, and visibility
    holds along the whole segment.
    """
    if _initial_S(cfg) < 0:
        return None
    te = cfg.horizon
    hi = te * (1 - 1e-12)
    phi_e = cfg.evader0.angle
    if phi_e > math.pi / 2:
        # x1 may not pass the occluding edge before termination.
        hi = min(hi, te * math.sin(phi_e) * (1 - 1e-12))
    phi_p = cfg.pursuer0.angle
    r_p = cfg.pursuer0.radius

    def f_vec(ts):
        theta_f = _x1_np(cfg, ts) - math.pi
        return r_p * np.sin(theta_f - phi_p) - cfg.v_p_max * ts

    for t_f in sorted(_scan_roots(f_vec, 1e-12 * te, hi), reverse=True):
        theta_f = tangent_angle(cfg, t_f) - math.pi
        delta = theta_f - phi_p
        if not 0 < delta <= math.pi / 2 + 1e-12:
            continue
        if theta_f >= -1e-12:  # terminal ray would sit inside the star region
            continue
        rho_f = r_p * math.cos(delta)
        if rho_f <= 1e-12 * r_p:
            continue
        if tangent_rate(cfg, t_f) <= cfg.v_p_max / rho_f:
            continue  # terminal inequality must hold strictly
        heading = normalize_angle(theta_f + math.pi / 2)
        if _min_S_along_segment(cfg, heading, t_f) < SWEEP_TOL:
            continue
        return t_f, heading
    return None


# ---------------------------------------------------------------------------
# Class 2 stage 1: junction triangle, stage 2: ride along the tangent line.


def stage1_geometry(cfg: CornerGameConfig, T: float) -> Stage1Geometry:
    """Junction triangle for a stage-1 segment ending on the line at time T."""
    delta_phi0 = cfg.evader0.angle - cfg.pursuer0.angle
    alpha = math.asin(min(1.0, cfg.v_e_max * T / cfg.evader0.radius))
    beta = alpha - math.pi + delta_phi0
    s_gamma = cfg.pursuer0.radius * math.sin(beta) / (cfg.v_p_max * T)
    gamma = math.pi - math.asin(min(1.0, s_gamma))
    rho = cfg.v_p_max * T * math.sin(beta + gamma) / math.sin(beta)
    return Stage1Geometry(T=T, alpha_T=alpha, beta_T=beta, gamma_T=gamma,
                          delta_phi0=delta_phi0, terminal_radius=rho)


def sine_law_residual(cfg: CornerGameConfig, g: Stage1Geometry) -> float:
    lhs = g.terminal_radius / math.sin(math.pi - g.beta_T - g.gamma_T)
    mid = cfg.v_p_max * g.T / math.sin(g.beta_T)
    rhs = cfg.pursuer0.radius / math.sin(g.gamma_T)
    return max(abs(lhs - mid), abs(mid - rhs))


@_njit(cache=True)
def _ride_loop(vp, ve, Re, r0, t0, t_cap, dt, eps_rad):  # pragma: no cover - numba
    """Fixed-step 4th-order integration of  dr/dt = -sqrt(vp^2 - (r w(t))^2).

    Returns (status, t_end, r_end, ts, rs, n) with status 0 = radicand died
    (normal termination), 1 = reached t_cap (pursuer entered the star
    region while riding), 2 = reached the corner vertex.
    """
    max_n = int((t_cap - t0) / dt) + 8
    ts = np.empty(max_n)
    rs = np.empty(max_n)
    t = t0
    r = r0
    ts[0] = t
    rs[0] = r
    n = 1
    vp2 = vp * vp
    thresh = eps_rad * vp2

    def omega2(tt):
        rad = Re * Re - (ve * tt) ** 2
        if rad < 1e-300:
            rad = 1e-300
        return (ve * ve) / rad

    def deriv(tt, rr):
        g = vp2 - rr * rr * omega2(tt)
        if g <= 0.0:
            return 0.0
        return -math.sqrt(g)

    def step(tt, rr, h):
        k1 = deriv(tt, rr)
        k2 = deriv(tt + 0.5 * h, rr + 0.5 * h * k1)
        k3 = deriv(tt + 0.5 * h, rr + 0.5 * h * k2)
        k4 = deriv(tt + h, rr + h * k3)
        return rr + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    status = 1
    while t < t_cap - 1e-15 * t_cap:
        g_here = vp2 - r * r * omega2(t)
        if g_here <= 0.0:
            status = 0
            break
        h = dt
        if t + h > t_cap:
            h = t_cap - t
        if g_here <= thresh:
            h = 0.5 * h  # step-halving near the square-root event
        r_new = step(t, r, h)
        t_new = t + h
        g_new = vp2 - r_new * r_new * omega2(t_new)
        if g_new <= 0.0:
            # Refine the death time: bisect on the radicand along the
            # solution integrated from the last healthy state.
            lo = t
            hi = t_new
            r_lo = r
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                r_mid = step(lo, r_lo, mid - lo)
                if vp2 - r_mid * r_mid * omega2(mid) > 0.0:
                    lo = mid
                    r_lo = r_mid
                else:
                    hi = mid
                if hi - lo <= 1e-16 * t_cap:
                    break
            t = lo
            r = r_lo
            ts[n] = t
            rs[n] = r
            n += 1
            status = 0
            break
        if r_new <= 0.0:
            # Refine the vertex arrival time.
            lo = t
            hi = t_new
            r_lo = r
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                r_mid = step(lo, r_lo, mid - lo)
                if r_mid > 0.0:
                    lo = mid
                    r_lo = r_mid
                else:
                    hi = mid
            t = hi
            r = 0.0
            ts[n] = t
            rs[n] = r
            n += 1
            status = 2
            break
        t = t_new
        r = r_new
        ts[n] = t
        rs[n] = r
        n += 1
    return status, t, r, ts, rs, n


@dataclass(frozen=True)
class Class2Solution:
    T1: float
    T2: Optional[float]  # None when the ride ends in a win
    stage1_heading: float
    stage2_radius: Callable[[float], float]
    geometry: Stage1Geometry
    ride_status: int  # 0 death, 1 star entry, 2 vertex
    ride_ts: np.ndarray
    ride_rs: np.ndarray


def _integrate_ride(cfg: CornerGameConfig, r0: float, t0: float):
    """Ride integration; status 0 = radicand died (or the evader horizon was
    reached with the pursuer still riding, which ends the game the same
    way), 1 = the line swept onto the star boundary (win), 2 = the pursuer
    reached the corner vertex (win)."""
    te = cfg.horizon
    phi_e = cfg.evader0.angle
    t_cap = te * (1 - 1e-12)
    star_cap = phi_e > math.pi / 2
    if star_cap:
        t_cap = min(t_cap, te * math.sin(phi_e))
    dt = RIDE_DT_FRACTION * te
    status, t_end, r_end, ts, rs, n = _ride_loop(
        cfg.v_p_max, cfg.v_e_max, cfg.evader0.radius, r0, t0, t_cap, dt,
        RADICAND_EVENT_EPS)
    if not (t0 <= t_end <= t_cap * (1 + 1e-9)) or not math.isfinite(r_end):
        raise SolverError("stage-2 termination not found")
    if status == 1 and not star_cap:
        status = 0  # rode until the evader reached the corner
    return status, t_end, ts[:n].copy(), rs[:n].copy()


def _stage1_valid_roots(cfg: CornerGameConfig) -> list[tuple[float, Stage1Geometry, float]]:
    """All matched-arrival junction times, largest first.

    Every matched touch of any straight path from the start satisfies the
    junction-triangle equation, so its roots enumerate the candidate
    junctions; a root survives when its triangle is realizable (obtuse
    angle at the junction, pursuer radius the longest side) and the chord
    keeps visibility (interior grazes count as visible).
    """
    S0 = _initial_S(cfg)
    if S0 < 0 or S0 >= math.pi / 2:
        return []
    te = cfg.horizon
    vp, ve, Re = cfg.v_p_max, cfg.v_e_max, cfg.evader0.radius
    rp, phi_e = cfg.pursuer0.radius, cfg.evader0.angle
    lo = te * math.sin(S0)
    hi = min(te, rp / vp) * (1 - 1e-12)
    if phi_e > math.pi / 2:
        hi = min(hi, te * math.sin(phi_e) * (1 - 1e-12))
    if hi <= lo:
        return []

    def g_vec(Ts):
        with np.errstate(invalid="ignore", divide="ignore"):
            alpha = np.arcsin(np.clip(ve * Ts / Re, -1.0, 1.0))
            beta = alpha - S0
            s_gamma = rp * np.sin(beta) / (vp * Ts)
            gamma = math.pi - np.arcsin(np.clip(s_gamma, -1.0, 1.0))
            rho = vp * Ts * np.sin(beta + gamma) / np.sin(beta)
            omega = ve / np.sqrt(Re * Re - (ve * Ts) ** 2)
            out = omega - vp * np.sin(gamma) / rho
            bad = (beta <= 0) | (s_gamma > 1.0) | (beta + gamma >= math.pi) | (rho <= 0)
            out = np.where(bad, np.nan, out)
        return out

    out = []
    p0 = cfg.pursuer0.to_vec()
    for T1 in sorted(_scan_roots(g_vec, lo + 1e-12 * te, hi), reverse=True):
        geom = stage1_geometry(cfg, T1)
        if not (0 < geom.beta_T < math.pi / 2):
            continue
        if not (math.pi / 2 <= geom.gamma_T < math.pi):
            continue
        theta_T = cfg.evader0.angle + geom.alpha_T - math.pi  # junction ray angle
        p_T = Vec2.from_polar(theta_T, geom.terminal_radius)
        chord = p_T - p0
        if chord.norm() <= 1e-15 * rp:
            continue
        heading = chord.angle()
        if _min_S_along_segment(cfg, heading, T1) < SWEEP_TOL:
            continue
        out.append((T1, geom, heading))
    return out


def solve_class2(cfg: CornerGameConfig) -> Optional[Class2Solution]:
    """Two-stage solution: straight to the rotating line with matched
    angular speed, then ride the line toward the corner.

    Stage 1 reduces the junction triangle to one equation in the junction
    time T; among its roots the largest one whose straight segment keeps
    visibility is kept.  Stage 2 integrates the constrained ride until the
    speed budget dies (normal termination), the pursuer reaches the star
    boundary, or the corner vertex.
    """
    roots = _stage1_valid_roots(cfg)
    if not roots:
        return None
    T1, geom, heading = roots[0]
    status, t_end, ts, rs = _integrate_ride(cfg, geom.terminal_radius, T1)
    T2 = (t_end - T1) if status == 0 else None
    return Class2Solution(T1=T1, T2=T2, stage1_heading=heading,
                          stage2_radius=_ride_interp(ts, rs),
                          geometry=geom, ride_status=status,
                          ride_ts=ts, ride_rs=rs)


def _wrapped_S(cfg: CornerGameConfig, t: float, x: float, y: float) -> float:
    """Visibility margin from a position, wrapped to (-pi, pi]."""
    x1 = tangent_angle(cfg, min(t, cfg.horizon * (1 - 1e-15)))
    return normalize_angle(math.atan2(y, x) - x1 + math.pi)


def _extend_straight(cfg: CornerGameConfig, heading: float, t_from: float):
    """Follow a straight path past a matched graze.

    Returns one of ("star", t_entry), ("catch", t2), ("deadline", t_hi):
    the path either enters the closed star wedge, suffers a strict
    visibility violation (terminal catch, refined by bisection), or
    survives to the escape deadline.
    """
    te = cfg.horizon
    t_hi = te * (1 - 1e-9)
    phi_e = cfg.evader0.angle
    if phi_e > math.pi / 2:
        t_hi = min(t_hi, te * math.sin(phi_e))
    if t_from >= t_hi:
        return ("deadline", t_hi)
    p0 = cfg.pursuer0.to_vec()
    vp = cfg.v_p_max
    ts = np.linspace(t_from, t_hi, SWEEP_POINTS)
    xs = p0.x + vp * ts * math.cos(heading)
    ys = p0.y + vp * ts * math.sin(heading)
    x3 = np.unwrap(np.arctan2(ys, xs))
    x3 = x3 - 2 * math.pi * round((x3[0] - cfg.pursuer0.angle) / (2 * math.pi))
    S = math.pi - _x1_np(cfg, ts) + x3
    in_star = (x3 >= 0.0) & (x3 <= cfg.star_hi + 1e-12)
    star_idx = int(np.argmax(in_star)) if in_star.any() else None
    neg = S < SWEEP_TOL
    neg_idx = int(np.argmax(neg)) if neg.any() else None
    if star_idx is not None and (neg_idx is None or star_idx <= neg_idx):
        return ("star", float(ts[star_idx]))
    if neg_idx is None:
        return ("deadline", t_hi)
    # Refine the strict crossing by bisection on S along the path.
    lo = float(ts[max(neg_idx - 1, 0)])
    hi = float(ts[neg_idx])

    def S_at(t):
        return _wrapped_S(cfg, t, p0.x + vp * t * math.cos(heading),
                          p0.y + vp * t * math.sin(heading))

    s_lo = S_at(lo)
    for _ in range(200):
        if hi - lo <= 1e-15 * te:
            break
        mid = 0.5 * (lo + hi)
        sm = S_at(mid)
        if sm >= 0:
            lo, s_lo = mid, sm
        else:
            hi = mid
    return ("catch", 0.5 * (lo + hi))


def _ride_interp(ts: np.ndarray, rs: np.ndarray) -> Callable[[float], float]:
    def radius(t: float) -> float:
        return float(np.interp(t, ts, rs))

    return radius


# ---------------------------------------------------------------------------
# Star region: membership, distance and the straight-dash win check.


def star_distance(cfg: CornerGameConfig, polar: PolarPoint) -> tuple[float, float, float]:
    """Geodesic distance from a canonical point to the closed star wedge.

    Returns (distance, target_angle, target_radius); the target is the
    nearest star point (a perpendicular foot on a boundary ray, or the
    corner vertex when the angular gap exceeds pi/2).
    """
    a, r = polar.angle, polar.radius
    lo, hi = cfg.star_lo, cfg.star_hi
    if lo <= a <= hi:
        return 0.0, a, r
    gap = (lo - a) if a < lo else (a - hi)
    boundary = lo if a < lo else hi
    if gap >= math.pi / 2:
        return r, boundary, 0.0
    return r * math.sin(gap), boundary, r * math.cos(gap)


_DASH_RADII = (0.15, 0.3, 0.5, 0.75, 1.0, 1.4, 2.0, 3.0)


def _dash_candidates(cfg: CornerGameConfig):
    """Straight star-entry candidates, fastest first.

    Any straight entry into the star wedge crosses one of its boundary
    rays (or the vertex) first, and the prefix of a safe entry is itself
    safe, so targets on the boundary rays dominate interior targets: the
    candidate set is the vertex, the perpendicular feet where they exist,
    and a radius ladder on both boundary rays.
    """
    pp = cfg.pursuer0
    p0 = pp.to_vec()
    cands = [(pp.radius, 0.0, 0.0)]  # the corner vertex itself
    for ang in (cfg.star_lo, cfg.star_hi):
        gap = abs(pp.angle - ang)
        if gap < math.pi / 2:
            cands.append((pp.radius * math.sin(gap), ang, pp.radius * math.cos(gap)))
        for k in _DASH_RADII:
            r = k * pp.radius
            cands.append(((Vec2.from_polar(ang, r) - p0).norm(), ang, r))
    cands.sort(key=lambda c: c[0])
    return cands


def _safe_star_dash(cfg: CornerGameConfig) -> Optional[tuple[float, float, float]]:
    """Fastest straight star entry that keeps the disc visible en route.

    Returns (arrival_time, heading, length) or None.  Candidate dashes are
    screened with a coarse vectorized sweep; the winner is confirmed at the
    full sweep resolution.
    """
    p0 = cfg.pursuer0.to_vec()
    te = cfg.horizon
    vp = cfg.v_p_max
    rows = [(d, a, r) for d, a, r in _dash_candidates(cfg) if d / vp < te]
    if not rows:
        return None
    if rows[0][0] <= 1e-15 * max(1.0, cfg.pursuer0.radius):
        return 0.0, 0.0, 0.0
    dists = np.array([d for d, _, _ in rows])
    headings = np.array([math.atan2(r * math.sin(a) - p0.y, r * math.cos(a) - p0.x)
                         for _, a, r in rows])
    k = len(rows)
    lin = np.linspace(0.0, 1.0, 256)
    ts = (dists / vp)[:, None] * lin[None, :]
    xs = p0.x + vp * ts * np.cos(headings)[:, None]
    ys = p0.y + vp * ts * np.sin(headings)[:, None]
    x3 = np.unwrap(np.arctan2(ys, xs), axis=1)
    S = math.pi - _x1_np(cfg, ts) + x3
    S = np.where(np.hypot(xs, ys) < 1e-9 * max(1.0, cfg.pursuer0.radius), np.inf, S)
    mins = S.min(axis=1)
    for i in range(k):
        if mins[i] < SWEEP_TOL:
            continue
        t_arr = float(dists[i] / vp)
        heading = float(headings[i])
        if _min_S_along_segment(cfg, heading, t_arr) < SWEEP_TOL:
            continue
        return t_arr, heading, float(dists[i])
    return None


_UNSET = object()


def race_to_origin(cfg: CornerGameConfig, frame: CornerFrame | None = None,
                   *, _dash=_UNSET) -> TrackingOutcome:
    """Race regime: pursuer dashes for the star wedge, evader for its escape.

    The evader's destination is the corner vertex, or the nearest point of
    the occluding edge when that is closer (evader angle beyond pi/2); the
    pursuer wins (infinite time) iff some straight dash reaches the star
    wedge with visibility intact, otherwise tracking lasts exactly until
    the evader's arrival.
    """
    deadline = cfg.escape_deadline
    dash = _safe_star_dash(cfg) if _dash is _UNSET else _dash
    p0 = cfg.pursuer0.to_vec()
    if dash is not None:
        t_arr, heading, dist = dash
        traj = _straight_then_hold_traj(cfg, frame, p0, heading, t_arr)
        return TrackingOutcome(StrategyClass.SHORTEST_PATH_TO_STAR, math.inf, traj,
                               detail={"dash_time": t_arr, "dash_heading": heading})
    d, ta, tr = star_distance(cfg, cfg.pursuer0)
    heading = (Vec2.from_polar(ta, tr) - p0).angle() if d > 0 else 0.0
    t_run = min(deadline, d / cfg.v_p_max) if d > 0 else deadline
    traj = _straight_then_hold_traj(cfg, frame, p0, heading, t_run)
    return TrackingOutcome(StrategyClass.SHORTEST_PATH_TO_STAR, deadline, traj,
                           detail={"dash_time": d / cfg.v_p_max, "dash_heading": heading})


# ---------------------------------------------------------------------------
# Trajectory samplers (world frame via the corner frame).


def _to_world(frame: CornerFrame | None, p: Vec2) -> Vec2:
    return p if frame is None else frame.to_world(p)


def _clamped_tangent(cfg: CornerGameConfig, t: float) -> float:
    h = cfg.horizon * (1 - 1e-12)
    return tangent_angle(cfg, min(max(t, 0.0), h))


def _straight_then_hold_traj(cfg, frame, p0: Vec2, heading: float, t_stop: float):
    hx, hy = math.cos(heading), math.sin(heading)
    vp = cfg.v_p_max

    def traj(t: float) -> tuple[Vec2, float]:
        tt = min(max(t, 0.0), t_stop)
        pos = Vec2(p0.x + vp * tt * hx, p0.y + vp * tt * hy)
        return _to_world(frame, pos), _clamped_tangent(cfg, t)

    return traj


def _class2_traj(cfg, frame, sol: Class2Solution):
    p0 = cfg.pursuer0.to_vec()
    hx, hy = math.cos(sol.stage1_heading), math.sin(sol.stage1_heading)
    vp = cfg.v_p_max
    t_end = float(sol.ride_ts[-1])

    def traj(t: float) -> tuple[Vec2, float]:
        tt = min(max(t, 0.0), t_end)
        if tt <= sol.T1:
            pos = Vec2(p0.x + vp * tt * hx, p0.y + vp * tt * hy)
        else:
            r = sol.stage2_radius(tt)
            pos = Vec2.from_polar(_clamped_tangent(cfg, tt) - math.pi, r)
        return _to_world(frame, pos), _clamped_tangent(cfg, t)

    return traj


def _star_hold_traj(cfg, frame):
    """Inside the star: head for the corner vertex at full speed, then stop."""
    p0 = cfg.pursuer0.to_vec()
    r0 = cfg.pursuer0.radius
    t_hit = r0 / cfg.v_p_max

    def traj(t: float) -> tuple[Vec2, float]:
        tt = min(max(t, 0.0), t_hit)
        k = 1.0 - cfg.v_p_max * tt / r0 if r0 > 0 else 0.0
        return _to_world(frame, Vec2(p0.x * k, p0.y * k)), _clamped_tangent(cfg, t)

    return traj


# ---------------------------------------------------------------------------
# Dispatch.


def solve_corner_game(cfg: CornerGameConfig, frame: CornerFrame | None = None) -> TrackingOutcome:
    """Full dispatch over the strategy regimes (see module docstring).

    A safe straight dash into the star wedge dominates any finite time and
    is checked first.  Among the finite strategies the dispatch maximizes
    over (i) the perpendicular-arrival straight catch, (ii) the matched
    junction followed by the constrained ride, and (iii) straight paths
    pinned by an interior matched graze and terminated at their next
    strict visibility violation: a matched touch is not terminal (the
    terminal inequality is strict), so continuing straight through it is
    legal and sometimes outlasts the ride.
    """
    pp = cfg.pursuer0
    if cfg.in_wedge(pp.angle):
        raise ValueError("pursuer not in free space")
    if cfg.in_wedge(cfg.evader0.angle):
        raise ValueError("evader not in free space")
    if cfg.in_star(pp.angle, pp.radius):
        return TrackingOutcome(StrategyClass.STAR_ANY, math.inf, _star_hold_traj(cfg, frame))
    S0 = _initial_S(cfg)
    if S0 < 0:
        p0 = pp.to_vec()
        traj = _straight_then_hold_traj(cfg, frame, p0, 0.0, 0.0)
        return TrackingOutcome(StrategyClass.NOT_VISIBLE, 0.0, traj)
    dash = _safe_star_dash(cfg)
    if dash is not None:
        t_arr, heading, dist = dash
        traj = _straight_then_hold_traj(cfg, frame, pp.to_vec(), heading, t_arr)
        return TrackingOutcome(StrategyClass.SHORTEST_PATH_TO_STAR, math.inf, traj,
                               detail={"dash_time": t_arr, "dash_heading": heading})

    candidates: list[tuple[float, int, TrackingOutcome]] = []  # (time, priority, outcome)

    c1 = solve_class1(cfg)
    if c1 is not None:
        t_f, heading = c1
        traj = _straight_then_hold_traj(cfg, frame, pp.to_vec(), heading, t_f)
        candidates.append((t_f, 2, TrackingOutcome(StrategyClass.CLASS1, t_f, traj,
                                                   detail={"t_f": t_f, "heading": heading})))

    roots = _stage1_valid_roots(cfg)
    if roots:
        c2 = solve_class2(cfg)
        if c2 is not None:
            traj = _class2_traj(cfg, frame, c2)
            total = math.inf if c2.T2 is None else c2.T1 + c2.T2
            candidates.append((total, 1,
                               TrackingOutcome(StrategyClass.CLASS2, total, traj,
                                               junction_time=c2.T1,
                                               detail={"T1": c2.T1, "T2": c2.T2,
                                                       "heading": c2.stage1_heading,
                                                       "ride_status": c2.ride_status,
                                                       "solution": c2})))
        for T1, geom, heading in roots:
            kind, t_ev = _extend_straight(cfg, heading, T1)
            if kind == "star":
                traj = _straight_then_hold_traj(cfg, frame, pp.to_vec(), heading, t_ev)
                candidates.append((math.inf, 3,
                                   TrackingOutcome(StrategyClass.SHORTEST_PATH_TO_STAR,
                                                   math.inf, traj,
                                                   detail={"dash_time": t_ev,
                                                           "dash_heading": heading})))
            elif kind == "catch":
                traj = _straight_then_hold_traj(cfg, frame, pp.to_vec(), heading, t_ev)
                candidates.append((t_ev, 2,
                                   TrackingOutcome(StrategyClass.CLASS1, t_ev, traj,
                                                   detail={"t_f": t_ev, "heading": heading,
                                                           "graze_junction": T1})))
            else:  # survives to the escape deadline
                traj = _straight_then_hold_traj(cfg, frame, pp.to_vec(), heading, t_ev)
                candidates.append((t_ev, 0,
                                   TrackingOutcome(StrategyClass.SHORTEST_PATH_TO_STAR,
                                                   t_ev, traj,
                                                   detail={"dash_time": t_ev,
                                                           "dash_heading": heading})))

    if candidates:
        candidates.sort(key=lambda c: (c[0], c[1]), reverse=True)
        return candidates[0][2]
    return race_to_origin(cfg, frame, _dash=None)


def vector_from_outcome(cfg: CornerGameConfig, frame: CornerFrame | None,
                        outcome: TrackingOutcome) -> Vec2:
    """World-frame initial unit velocity of an already-solved outcome."""
    if outcome.strategy is StrategyClass.NOT_VISIBLE:
        raise ValueError("no strategy from invisible start")
    if outcome.strategy is StrategyClass.STAR_ANY:
        d = Vec2.from_polar(cfg.pursuer0.angle + math.pi, 1.0)  # toward the vertex
    else:
        detail = outcome.detail or {}
        heading = detail["heading"] if "heading" in detail else detail["dash_heading"]
        d = Vec2.from_polar(heading, 1.0)
    if frame is not None:
        d = frame.dir_to_world(d).unit()
    return d


def strategy_vector(cfg: CornerGameConfig, frame: CornerFrame | None = None) -> tuple[Vec2, float]:
    """Initial unit velocity of the optimal trajectory plus its tracking time."""
    outcome = solve_corner_game(cfg, frame)
    return vector_from_outcome(cfg, frame, outcome), outcome.tracking_time


def config_from_frame(frame: CornerFrame, p_world: Vec2, e_world: Vec2,
                      v_p_max: float, v_e_max: float) -> CornerGameConfig:
    """Build the canonical game instance for world-frame agent positions."""
    return CornerGameConfig(
        v_p_max=v_p_max,
        v_e_max=v_e_max,
        evader0=frame.canonical_polar(e_world),
        pursuer0=frame.canonical_polar(p_world),
        wedge=frame.wedge_canonical,
    )
