"""Grid sweeps over the corner game: tracking-time and strategy partitions
plus the per-corner guidance field.

Every cell is classified by its center point: cells inside the obstacle
wedge get the obstacle code (strategy grids) or NaN (time grids); cells
without line of sight to the fixed agent get the not-visible code / zero
time; all other cells run the full corner-game dispatch in a frame
canonicalized for that cell, so both sides of the fixed agent are handled
by mirror symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .corner_game import (StrategyClass, config_from_frame, solve_corner_game,
                          vector_from_outcome)
from .geometry import CornerFrame, Vec2, _frame_for_corner

OBSTACLE_TIME = math.nan


@dataclass(frozen=True, slots=True)
class GridSpec:
    origin: Vec2
    cell_size: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")
        if self.nx <= 0 or self.ny <= 0:
            raise ValueError("grid dimensions must be positive")
        if self.nx * self.ny > 10**8:
            raise ValueError("grid too large (nx*ny > 1e8)")

    def cell_center(self, ix: int, iy: int) -> Vec2:
        return Vec2(self.origin.x + (ix + 0.5) * self.cell_size,
                    self.origin.y + (iy + 0.5) * self.cell_size)

    def index(self, ix: int, iy: int) -> int:
        return iy * self.nx + ix


class PartitionKind(Enum):
    TRACKING_TIME = "time"
    STRATEGY_CLASS = "strategy"


@dataclass(frozen=True)
class GridPartition:
    spec: GridSpec
    kind: PartitionKind
    values: np.ndarray  # row-major, length nx*ny

    def __post_init__(self):
        if len(self.values) != self.spec.nx * self.spec.ny:
            raise ValueError("value array does not match the grid")

    def at(self, ix: int, iy: int):
        return self.values[self.spec.index(ix, iy)]


@dataclass(frozen=True)
class VectorField:
    spec: GridSpec
    vectors: np.ndarray  # (nx*ny, 2); NaN rows where no vector exists
    times: np.ndarray

    def __post_init__(self):
        norms = np.hypot(self.vectors[:, 0], self.vectors[:, 1])
        ok = np.isnan(norms) | (np.abs(norms - 1.0) <= 1e-9)
        if not ok.all():
            raise ValueError("field contains non-unit vectors")


def _wedge_membership(frame: CornerFrame, q: Vec2) -> bool:
    """True when q lies inside the (semi-infinite) obstacle wedge."""
    v = frame.vertex
    d = q - v
    if d.norm() == 0.0:
        return False  # the vertex itself is boundary, not interior
    interior = frame.interior_angle
    span = 2 * math.pi - interior
    a = (d.angle() - frame.edge_dirs[0]) % (2 * math.pi)
    return a > span + 1e-12


def _cell_outcome(frame: CornerFrame, fixed: Vec2, moving: Vec2, speeds, moving_is_pursuer: bool):
    """Solve the corner game for one cell; returns (outcome|None, frame|None).

    None outcome means degenerate geometry (cell on the vertex): callers
    map it to an immediate-escape / immediate-win value.
    """
    v_p, v_e = speeds
    p, e = (moving, fixed) if moving_is_pursuer else (fixed, moving)
    scale = max(1.0, (fixed - frame.vertex).norm())
    if (moving - frame.vertex).norm() <= 1e-12 * scale:
        return None, None, None
    local = _frame_for_corner(frame.vertex, frame.edge_dirs[0], frame.edge_dirs[1], p, e)
    cfg = config_from_frame(local, p, e, v_p, v_e)
    return solve_corner_game(cfg, local), local, cfg


def _sweep(frame: CornerFrame, fixed: Vec2, speeds, grid: GridSpec,
           moving_is_pursuer: bool, want_vectors: bool):
    n = grid.nx * grid.ny
    times = np.zeros(n)
    codes = np.zeros(n, dtype=np.int64)
    vectors = np.full((n, 2), math.nan) if want_vectors else None
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            i = grid.index(ix, iy)
            c = grid.cell_center(ix, iy)
            if _wedge_membership(frame, c):
                codes[i] = int(StrategyClass.OBSTACLE)
                times[i] = OBSTACLE_TIME
                continue
            outcome, local, cfg = _cell_outcome(frame, fixed, c, speeds, moving_is_pursuer)
            if outcome is None:
                # Cell center on the corner vertex itself.
                if moving_is_pursuer:
                    codes[i] = int(StrategyClass.STAR_ANY)
                    times[i] = math.inf
                else:
                    codes[i] = int(StrategyClass.SHORTEST_PATH_TO_STAR)
                    times[i] = 0.0
                continue
            codes[i] = int(outcome.strategy)
            times[i] = outcome.tracking_time
            if want_vectors and outcome.strategy is not StrategyClass.NOT_VISIBLE:
                vec = vector_from_outcome(cfg, local, outcome)
                vectors[i, 0] = vec.x
                vectors[i, 1] = vec.y
    return times, codes, vectors


def evader_partition(frame: CornerFrame, evader: Vec2, speeds: tuple[float, float],
                     grid: GridSpec, kind: PartitionKind) -> GridPartition:
    """Per-cell tracking time or strategy class over pursuer start positions."""
    if _wedge_membership(frame, evader):
        raise ValueError("evader not in free space")
    times, codes, _ = _sweep(frame, evader, speeds, grid, moving_is_pursuer=True,
                             want_vectors=False)
    if kind is PartitionKind.TRACKING_TIME:
        return GridPartition(grid, kind, times)
    return GridPartition(grid, kind, codes)


def evader_partition_pair(frame: CornerFrame, evader: Vec2, speeds: tuple[float, float],
                          grid: GridSpec) -> tuple[GridPartition, GridPartition]:
    """Time and strategy partitions from one sweep (same solver calls)."""
    if _wedge_membership(frame, evader):
        raise ValueError("evader not in free space")
    times, codes, _ = _sweep(frame, evader, speeds, grid, moving_is_pursuer=True,
                             want_vectors=False)
    return (GridPartition(grid, PartitionKind.TRACKING_TIME, times),
            GridPartition(grid, PartitionKind.STRATEGY_CLASS, codes))


def pursuer_partition(frame: CornerFrame, pursuer: Vec2, speeds: tuple[float, float],
                      grid: GridSpec) -> GridPartition:
    """Per-cell tracking time over evader start positions (fixed pursuer)."""
    if _wedge_membership(frame, pursuer):
        raise ValueError("pursuer not in free space")
    times, codes, _ = _sweep(frame, pursuer, speeds, grid, moving_is_pursuer=False,
                             want_vectors=False)
    return GridPartition(grid, PartitionKind.TRACKING_TIME, times)


def pursuer_strategy_partition(frame: CornerFrame, pursuer: Vec2, speeds, grid: GridSpec) -> GridPartition:
    """Strategy-class variant of the pursuer-based sweep."""
    if _wedge_membership(frame, pursuer):
        raise ValueError("pursuer not in free space")
    _, codes, _ = _sweep(frame, pursuer, speeds, grid, moving_is_pursuer=False,
                         want_vectors=False)
    return GridPartition(grid, PartitionKind.STRATEGY_CLASS, codes)


def corner_vector_field(frame: CornerFrame, evader: Vec2, speeds: tuple[float, float],
                        grid: GridSpec) -> VectorField:
    """Unit guidance vector plus tracking time for every free, visible cell."""
    if _wedge_membership(frame, evader):
        raise ValueError("evader not in free space")
    times, codes, vectors = _sweep(frame, evader, speeds, grid, moving_is_pursuer=True,
                                   want_vectors=True)
    return VectorField(grid, vectors, times)
