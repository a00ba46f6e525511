"""Guidance fields for multi-obstacle environments.

Each non-reflex obstacle corner visible to both agents contributes the
optimal corner-game direction computed as if that corner were alone; the
contributions are combined by a weight scheme and augmented with a vector
toward the evader, then normalized.  The field is memoryless: every query
re-derives the candidate set from the current positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .corner_game import config_from_frame, solve_corner_game, vector_from_outcome
from .geometry import CornerFrame, Environment, Vec2, corner_frame, reflex_vertices


class WeightScheme(Enum):
    DISTANCE_ARGMIN = "distance"
    INVERSE_TIME = "inverse-time"


@dataclass(frozen=True)
class CornerCandidate:
    corner: tuple[int, int]
    frame: CornerFrame
    local_vector: Optional[Vec2] = None
    local_time: Optional[float] = None


@dataclass(frozen=True)
class Contribution:
    corner: tuple[int, int]
    weight: float
    time: float
    distance: float


@dataclass(frozen=True)
class PursuitVector:
    direction: Vec2
    contributors: tuple[Contribution, ...]


def candidate_corners(env: Environment, p: Vec2, e: Vec2) -> list[CornerCandidate]:
    """Non-reflex corners visible to both agents, with their local frames.

    Corners whose local wedge model cannot host the game for the current
    positions (an agent sits behind the wedge extension) are skipped.
    """
    if not env.point_free(p) or not env.point_free(e):
        raise ValueError("agent not in free space")
    reflex = set(reflex_vertices(env))
    out = []
    for oi, poly in enumerate(env.obstacles):
        for vi in range(len(poly.vertices)):
            if (oi, vi) in reflex:
                continue
            try:
                frame, _, _ = corner_frame(env, (oi, vi), p, e)
            except ValueError:
                continue
            out.append(CornerCandidate(corner=(oi, vi), frame=frame))
    return out


def corner_local_solution(cand: CornerCandidate, p: Vec2, e: Vec2,
                          speeds: tuple[float, float]) -> CornerCandidate:
    """Fill the candidate with its world-frame direction and tracking time."""
    cfg = config_from_frame(cand.frame, p, e, speeds[0], speeds[1])
    outcome = solve_corner_game(cfg, cand.frame)
    vec = vector_from_outcome(cfg, cand.frame, outcome)
    return replace(cand, local_vector=vec, local_time=outcome.tracking_time)


def combine(cands: list[CornerCandidate], p: Vec2, e: Vec2, scheme: WeightScheme,
            augment_weight: float = 1.0, normalize_before_augment: bool = True) -> PursuitVector:
    """Weighted sum of per-corner directions plus an evader-pointing vector.

    DistanceArgmin puts weight 1 on the corner minimizing
    d_i = |p - corner| + |e - corner| (ties to the lowest index);
    InverseTime uses w_i = 1/T_i with infinite times weighing zero.  The
    corner sum is normalized first, then the evader-pointing unit vector
    (scaled by ``augment_weight``) is added and the total renormalized;
    set ``normalize_before_augment=False`` to add before any
    normalization, ``augment_weight=0`` to disable the augmentation.
    """
    to_evader = e - p
    if to_evader.norm() == 0.0:
        raise ValueError("degenerate field point")
    aug = to_evader.unit() * augment_weight

    contribs: list[Contribution] = []
    sx = sy = 0.0
    if cands:
        dists = []
        for c in cands:
            if c.local_vector is None or c.local_time is None:
                raise ValueError("candidate missing its local solution")
            v = c.frame.vertex
            dists.append((p - v).norm() + (e - v).norm())
        if scheme is WeightScheme.DISTANCE_ARGMIN:
            best = min(range(len(cands)), key=lambda i: (dists[i], cands[i].corner))
            weights = [1.0 if i == best else 0.0 for i in range(len(cands))]
        else:
            weights = [0.0 if math.isinf(c.local_time) else 1.0 / c.local_time
                       for c in cands]
        for c, w, d in zip(cands, weights, dists):
            contribs.append(Contribution(c.corner, w, c.local_time, d))
            sx += w * c.local_vector.x
            sy += w * c.local_vector.y
    else:
        return PursuitVector(direction=(aug.unit() if augment_weight != 0 else to_evader.unit()),
                             contributors=())

    v_sum = Vec2(sx, sy)
    if normalize_before_augment and v_sum.norm() > 0:
        v_sum = v_sum.unit()
    total = v_sum + aug
    if total.norm() == 0.0:
        raise ValueError("degenerate field point")
    return PursuitVector(direction=total.unit(), contributors=tuple(contribs))


def pursuit_direction(env: Environment, p: Vec2, e: Vec2, speeds: tuple[float, float],
                      scheme: WeightScheme, augment_weight: float = 1.0,
                      normalize_before_augment: bool = True) -> PursuitVector:
    """Candidate discovery, local solutions and combination in one query.

    Corners whose isolated wedge model reports the pair as mutually
    occluded contribute nothing (the threat they model does not exist for
    the current positions) and are dropped.
    """
    cands = []
    for c in candidate_corners(env, p, e):
        try:
            cands.append(corner_local_solution(c, p, e, speeds))
        except ValueError:
            continue
    return combine(cands, p, e, scheme, augment_weight, normalize_before_augment)
