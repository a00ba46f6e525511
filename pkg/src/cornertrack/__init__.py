"""Pursuit toolkit for visibility-based target tracking around polygonal
corners: closed-form corner-game solver, workspace partitions, composed
pursuit fields, a deterministic simulator and a live arena service."""

from .corner_game import (CornerGameConfig, CornerState, Controls, Stage1Geometry,
                          StrategyClass, TrackingOutcome, constraint_S, race_to_origin,
                          solve_class1, solve_class2, solve_corner_game, strategy_vector,
                          tangent_angle, tangent_rate)
from .geometry import (Bounds, CornerFrame, Environment, PolarPoint, PointLocation,
                       Polygon, Vec2, corner_frame, reflex_vertices, segment_clear,
                       visible_vertices, wedge_environment)
from .partitions import (GridPartition, GridSpec, PartitionKind, VectorField,
                         corner_vector_field, evader_partition, pursuer_partition)
from .pursuit_field import (CornerCandidate, PursuitVector, WeightScheme,
                            candidate_corners, combine, corner_local_solution,
                            pursuit_direction)
from .sim_engine import (AgentState, EvaderCommand, ExternalCommandPolicy,
                         FixedCornerOptimalPolicy, GreedyNearestCornerPolicy,
                         PursuitFieldPolicy, ScriptedWaypointsPolicy, TrajectoryLog,
                         greedy_evader_velocity, run, step)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
