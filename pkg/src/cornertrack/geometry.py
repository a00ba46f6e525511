"""Planar primitives, polygonal environments, and line-of-sight predicates.

Conventions used throughout the package:

* obstacles are closed point sets; agents may touch boundaries but never
  enter interiors,
* a sight segment that merely grazes an obstacle vertex or slides along an
  edge counts as clear (ties resolve toward "clear"),
* polygons are simple and stored counter-clockwise.

The module also canonicalizes an arbitrary convex obstacle corner into the
reference frame used by the corner-game solver: corner vertex at the origin,
the occluding edge pointing along the negative x axis, and the free space
ordered so that the evader sits counter-clockwise ahead of the pursuer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

TAU = 2.0 * math.pi
# Relative tie threshold for orientation / incidence predicates.
EPS = 1e-12


def normalize_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.remainder(a, TAU)
    if r <= -math.pi:
        r += TAU
    return r


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite Vec2 components: ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def perp(self) -> "Vec2":
        return Vec2(-self.y, self.x)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize zero vector")
        # Already-unit vectors pass through untouched so unit strategy
        # vectors survive round trips bit-exactly.
        if abs(n - 1.0) <= 4 * 2.220446049250313e-16:
            return self
        return Vec2(self.x / n, self.y / n)

    @staticmethod
    def from_polar(angle: float, radius: float) -> "Vec2":
        return Vec2(radius * math.cos(angle), radius * math.sin(angle))


@dataclass(frozen=True, slots=True)
class PolarPoint:
    angle: float
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.angle) and math.isfinite(self.radius)):
            raise ValueError("non-finite polar components")
        if self.radius < 0:
            raise ValueError(f"negative radius {self.radius}")
        object.__setattr__(self, "angle", normalize_angle(self.angle))

    def to_vec(self) -> Vec2:
        return Vec2.from_polar(self.angle, self.radius)


class PointLocation(IntEnum):
    OUTSIDE = 0
    BOUNDARY = 1
    INSIDE = 2


def _orient(a: Vec2, b: Vec2, c: Vec2) -> int:
    """Sign of the cross product (b-a) x (c-a) with a relative epsilon tie band."""
    ux, uy = b.x - a.x, b.y - a.y
    vx, vy = c.x - a.x, c.y - a.y
    det = ux * vy - uy * vx
    scale = math.hypot(ux, uy) * math.hypot(vx, vy)
    if abs(det) <= EPS * scale:
        return 0
    return 1 if det > 0 else -1


def _point_segment_dist(p: Vec2, a: Vec2, b: Vec2) -> float:
    ab = b - a
    ap = p - a
    denom = ab.dot(ab)
    if denom == 0.0:
        return ap.norm()
    t = max(0.0, min(1.0, ap.dot(ab) / denom))
    proj = Vec2(a.x + t * ab.x, a.y + t * ab.y)
    return (p - proj).norm()


class Polygon:
    """Simple polygon, normalized to counter-clockwise vertex order."""

    def __init__(self, vertices):
        verts = [v if isinstance(v, Vec2) else Vec2(*v) for v in vertices]
        if len(verts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        scale = max(max(abs(v.x), abs(v.y)) for v in verts) or 1.0
        for i, v in enumerate(verts):
            w = verts[(i + 1) % len(verts)]
            if (w - v).norm() <= 1e-12 * max(1.0, scale):
                raise ValueError(f"duplicate consecutive vertices at index {i}")
        area2 = sum(verts[i].cross(verts[(i + 1) % len(verts)]) for i in range(len(verts)))
        if area2 == 0.0:
            raise ValueError("degenerate polygon (zero area)")
        if area2 < 0:
            verts.reverse()
        self.vertices: tuple[Vec2, ...] = tuple(verts)
        if self._self_intersects():
            raise ValueError("polygon is not simple (self-intersecting)")

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"Polygon({[(v.x, v.y) for v in self.vertices]})"

    def edges(self):
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n]

    def _self_intersects(self) -> bool:
        es = list(self.edges())
        n = len(es)
        for i in range(n):
            a, b = es[i]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue  # shared-vertex neighbours
                c, d = es[j]
                if _orient(a, b, c) * _orient(a, b, d) < 0 and _orient(c, d, a) * _orient(c, d, b) < 0:
                    return True
        return False

    def signed_area(self) -> float:
        return 0.5 * sum(v.cross(w) for v, w in self.edges())

    def locate(self, p: Vec2) -> PointLocation:
        scale = max(1.0, max(max(abs(v.x), abs(v.y)) for v in self.vertices))
        for a, b in self.edges():
            if _point_segment_dist(p, a, b) <= 1e-12 * scale:
                return PointLocation.BOUNDARY
        inside = False
        x, y = p.x, p.y
        n = len(self.vertices)
        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            if (a.y > y) != (b.y > y):
                xi = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
                if x < xi:
                    inside = not inside
        return PointLocation.INSIDE if inside else PointLocation.OUTSIDE

    def interior_angle(self, i: int) -> float:
        """Interior angle at vertex i, in (0, 2*pi)."""
        n = len(self.vertices)
        v = self.vertices[i]
        d_prev = self.vertices[(i - 1) % n] - v
        d_next = self.vertices[(i + 1) % n] - v
        # CCW polygon: interior sweeps counter-clockwise from the outgoing
        # edge direction to the incoming one.
        ang = (d_prev.angle() - d_next.angle()) % TAU
        return ang


@dataclass(frozen=True, slots=True)
class Bounds:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.xmin, self.ymin, self.xmax, self.ymax))):
            raise ValueError("non-finite bounds")
        if self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise ValueError("empty bounds")

    def contains(self, p: Vec2) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax


class Environment:
    """Workspace window plus disjoint closed polygonal obstacles."""

    def __init__(self, obstacles, bounds: Bounds):
        self.obstacles: tuple[Polygon, ...] = tuple(
            o if isinstance(o, Polygon) else Polygon(o) for o in obstacles
        )
        self.bounds = bounds
        for k, poly in enumerate(self.obstacles):
            for v in poly.vertices:
                if not bounds.contains(v):
                    raise ValueError(f"obstacle {k} extends outside the bounds")
        for i in range(len(self.obstacles)):
            for j in range(i + 1, len(self.obstacles)):
                if self._polys_overlap(self.obstacles[i], self.obstacles[j]):
                    raise ValueError(f"obstacles {i} and {j} overlap")

    @staticmethod
    def _polys_overlap(p: Polygon, q: Polygon) -> bool:
        for a, b in p.edges():
            for c, d in q.edges():
                if _orient(a, b, c) * _orient(a, b, d) < 0 and _orient(c, d, a) * _orient(c, d, b) < 0:
                    return True
        if q.locate(p.vertices[0]) is PointLocation.INSIDE:
            return True
        if p.locate(q.vertices[0]) is PointLocation.INSIDE:
            return True
        return False

    def point_free(self, p: Vec2) -> bool:
        """True when p lies in the closure of free space."""
        return all(o.locate(p) is not PointLocation.INSIDE for o in self.obstacles)


def _segment_touch_params(a: Vec2, b: Vec2, poly: Polygon):
    """Parameters in [0,1] along a->b where the segment meets poly's boundary.

    Returns (blocked, params): blocked=True on a proper transversal crossing
    of an edge interior, which always enters the polygon interior.
    """
    params = []
    ab = b - a
    for c, d in poly.edges():
        o1 = _orient(a, b, c)
        o2 = _orient(a, b, d)
        o3 = _orient(c, d, a)
        o4 = _orient(c, d, b)
        if o1 * o2 < 0 and o3 * o4 < 0:
            return True, []
        # Collinear or endpoint-touch contacts: record parameters.
        cd = d - c
        for p, o in ((c, o1), (d, o2)):
            if o == 0:
                denom = ab.dot(ab)
                if denom > 0:
                    t = (p - a).dot(ab) / denom
                    if -1e-12 <= t <= 1 + 1e-12:
                        params.append(min(1.0, max(0.0, t)))
        for q, o in ((a, o3), (b, o4)):
            if o == 0:
                denom = cd.dot(cd)
                if denom > 0:
                    s = (q - c).dot(cd) / denom
                    if -1e-12 <= s <= 1 + 1e-12:
                        params.append(0.0 if q is a else 1.0)
    return False, params


def segment_clear(a: Vec2, b: Vec2, env: Environment) -> bool:
    """True iff the open segment (a, b) avoids every obstacle interior.

    Grazing contact with a vertex or sliding along an edge is clear.
    """
    if not all(map(math.isfinite, (a.x, a.y, b.x, b.y))):
        raise ValueError("non-finite segment endpoints")
    if (b - a).norm() == 0.0:
        return True
    for poly in env.obstacles:
        blocked, params = _segment_touch_params(a, b, poly)
        if blocked:
            return False
        cut = sorted(set([0.0, 1.0] + params))
        for t0, t1 in zip(cut[:-1], cut[1:]):
            if t1 - t0 <= 1e-12:
                continue
            tm = 0.5 * (t0 + t1)
            mid = Vec2(a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y))
            if poly.locate(mid) is PointLocation.INSIDE:
                return False
    return True


def visible_vertices(p: Vec2, env: Environment) -> list[tuple[int, int]]:
    """Obstacle vertices with a clear line of sight from p."""
    for poly in env.obstacles:
        if poly.locate(p) is PointLocation.INSIDE:
            raise ValueError("point not in free space")
    out = []
    for oi, poly in enumerate(env.obstacles):
        for vi, v in enumerate(poly.vertices):
            if segment_clear(p, v, env):
                out.append((oi, vi))
    return out


def reflex_vertices(env: Environment) -> list[tuple[int, int]]:
    """Vertices whose interior angle strictly exceeds pi."""
    out = []
    for oi, poly in enumerate(env.obstacles):
        n = len(poly.vertices)
        for vi in range(n):
            v = poly.vertices[vi]
            d_prev = poly.vertices[(vi - 1) % n] - v
            d_next = poly.vertices[(vi + 1) % n] - v
            # Reflex iff the boundary turns right at v (CCW order), i.e.
            # cross(d_prev, d_next) > 0; exactly straight vertices count
            # as convex.
            if _orient(Vec2(0, 0), d_prev, d_next) > 0:
                out.append((oi, vi))
    return out


@dataclass(frozen=True, slots=True)
class CornerFrame:
    """Rigid (possibly mirrored) map between world frame and the canonical
    corner frame: vertex at origin, occluding edge along angle pi, free
    space ordered so the tangent line sweeps counter-clockwise."""

    vertex: Vec2
    rotation: float  # world angle of the canonical +x axis
    mirrored: bool
    edge_dirs: tuple[float, float]  # world angles of (incoming, outgoing) edges at the vertex

    def to_canonical(self, q: Vec2) -> Vec2:
        d = q - self.vertex
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        x = d.x * c + d.y * s
        y = -d.x * s + d.y * c
        return Vec2(x, -y if self.mirrored else y)

    def to_world(self, q: Vec2) -> Vec2:
        y = -q.y if self.mirrored else q.y
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        return Vec2(self.vertex.x + q.x * c - y * s, self.vertex.y + q.x * s + y * c)

    def dir_to_world(self, d: Vec2) -> Vec2:
        y = -d.y if self.mirrored else d.y
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        return Vec2(d.x * c - y * s, d.x * s + y * c)

    def dir_to_canonical(self, d: Vec2) -> Vec2:
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        x = d.x * c + d.y * s
        y = -d.x * s + d.y * c
        return Vec2(x, -y if self.mirrored else y)

    def canonical_polar(self, q: Vec2) -> PolarPoint:
        c = self.to_canonical(q)
        return PolarPoint(math.atan2(c.y, c.x), c.norm())

    @property
    def interior_angle(self) -> float:
        return (self.edge_dirs[0] - self.edge_dirs[1]) % TAU

    @property
    def wedge_canonical(self) -> tuple[float, float]:
        """Canonical directions (occluding edge, far edge) = (pi, -(pi - interior))."""
        return (math.pi, -(math.pi - self.interior_angle))


def _frame_for_corner(vertex: Vec2, d_prev_ang: float, d_next_ang: float,
                      p: Vec2, e: Vec2) -> CornerFrame:
    interior = (d_prev_ang - d_next_ang) % TAU
    span = TAU - interior  # free-space angular width at the vertex
    ang_p = ((p - vertex).angle() - d_prev_ang) % TAU
    ang_e = ((e - vertex).angle() - d_prev_ang) % TAU
    for name, a in (("pursuer", ang_p), ("evader", ang_e)):
        if a > span + 1e-9:
            raise ValueError(f"{name} lies behind the corner wedge")
    # The evader escapes around the edge on its far side from the pursuer.
    if ang_e >= ang_p:
        occ = d_next_ang
        mirrored = False
    else:
        occ = d_prev_ang
        mirrored = True
    # Canonical +x axis is opposite the occluding edge.
    rotation = normalize_angle(occ + math.pi)
    return CornerFrame(vertex=vertex, rotation=rotation, mirrored=mirrored,
                       edge_dirs=(d_prev_ang, d_next_ang))


def corner_frame(env: Environment, corner: tuple[int, int], p: Vec2, e: Vec2):
    """Canonicalize an obstacle corner for the tangent-line game.

    Returns (frame, pursuer_polar, evader_polar) with the polar points
    expressed in the canonical frame.
    """
    oi, vi = corner
    poly = env.obstacles[oi]
    n = len(poly.vertices)
    v = poly.vertices[vi]
    d_prev = poly.vertices[(vi - 1) % n] - v
    d_next = poly.vertices[(vi + 1) % n] - v
    interior = (d_prev.angle() - d_next.angle()) % TAU
    if interior > math.pi + 1e-12:
        raise ValueError("reflex corner has no escape game")
    if not (segment_clear(p, v, env) and segment_clear(e, v, env)):
        raise ValueError("corner not mutually visible")
    frame = _frame_for_corner(v, d_prev.angle(), d_next.angle(), p, e)
    return frame, frame.canonical_polar(p), frame.canonical_polar(e)


def wedge_environment(interior_angle: float, extent: float = 100.0,
                      bounds: Bounds | None = None, arc_steps: int = 6) -> Environment:
    """Finite stand-in for the semi-infinite canonical corner.

    Builds a fan polygon with vertex at the origin, occluding edge along
    angle pi and far edge at -(pi - interior_angle), truncated at `extent`.
    """
    if not 0 < interior_angle < math.pi:
        raise ValueError("interior angle must lie in (0, pi)")
    w = math.pi - interior_angle
    start = math.pi
    stop = TAU - w
    verts = [Vec2(0.0, 0.0)]
    for k in range(arc_steps + 1):
        a = start + (stop - start) * k / arc_steps
        verts.append(Vec2.from_polar(a, extent))
    if bounds is None:
        m = extent * 1.5
        bounds = Bounds(-m, -m, m, m)
    return Environment([Polygon(verts)], bounds)
