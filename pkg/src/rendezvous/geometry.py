"""Planar primitives, simple polygons, and the bounded polygonal terrain model.

A terrain is a closed outer polygon minus a set of disjoint open polygonal
obstacles; agents live in the closed region, boundaries included.  Everything
here is immutable after construction and safe to share across concurrent
scenario runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

EPS = 1e-9            # absolute tolerance on coordinates / distances
EPS_ANG = 1e-9        # angular tolerance, radians
COORD_LIMIT = 1e6     # accepted coordinate magnitude


class GeometryError(Exception):
    """Base class for geometric failures."""


class InvalidPolygon(GeometryError):
    pass


class InvalidTerrain(GeometryError):
    pass


class NotOnBoundary(GeometryError):
    pass


class DegenerateRay(GeometryError):
    """Ray runs collinearly along a boundary edge for positive length."""


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __add__(self, o: "Point") -> "Point":
        return Point(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Point") -> "Point":
        return Point(self.x - o.x, self.y - o.y)

    def __mul__(self, k: float) -> "Point":
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, o: "Point") -> float:
        return self.x * o.x + self.y * o.y

    def cross(self, o: "Point") -> float:
        return self.x * o.y - self.y * o.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, o: "Point") -> float:
        return math.hypot(self.x - o.x, self.y - o.y)

    def unit(self) -> "Point":
        n = self.norm()
        if n <= 0.0:
            raise GeometryError("cannot normalize zero vector")
        return Point(self.x / n, self.y / n)

    def rotated(self, angle: float) -> "Point":
        c, s = math.cos(angle), math.sin(angle)
        return Point(c * self.x - s * self.y, s * self.x + c * self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self) -> None:
        if self.a.dist(self.b) <= EPS:
            raise GeometryError(f"zero-length segment at {self.a}")

    @property
    def length(self) -> float:
        return self.a.dist(self.b)

    def direction(self) -> Point:
        return (self.b - self.a).unit()

    def at(self, t: float) -> Point:
        return Point(self.a.x + t * (self.b.x - self.a.x),
                     self.a.y + t * (self.b.y - self.a.y))


def orient(a: Point, b: Point, c: Point) -> float:
    """Signed twice-area of triangle abc (>0 for counterclockwise)."""
    return (b - a).cross(c - a)


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ab = b - a
    denom = ab.dot(ab)
    if denom <= 0.0:
        return p.dist(a)
    t = (p - a).dot(ab) / denom
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return p.dist(Point(a.x + t * ab.x, a.y + t * ab.y))


def project_on_segment(p: Point, a: Point, b: Point) -> tuple[float, Point]:
    """Clamped parameter and foot of p on segment ab."""
    ab = b - a
    t = (p - a).dot(ab) / ab.dot(ab)
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return t, Point(a.x + t * ab.x, a.y + t * ab.y)


def segments_properly_cross(p: Point, q: Point, a: Point, b: Point,
                            tol: float = EPS) -> bool:
    """True iff open segments pq and ab cross transversally."""
    d1 = orient(p, q, a)
    d2 = orient(p, q, b)
    d3 = orient(a, b, p)
    d4 = orient(a, b, q)
    s1 = p.dist(q)
    s2 = a.dist(b)
    t1 = tol * max(s1, 1.0) * max(s2, 1.0)
    if abs(d1) <= t1 or abs(d2) <= t1 or abs(d3) <= t1 or abs(d4) <= t1:
        return False
    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)


class Polygon:
    """A simple polygon given by its ordered vertex ring."""

    def __init__(self, vertices: list[Point] | tuple[Point, ...]):
        vs = tuple(vertices)
        self._validate(vs)
        self.vertices: tuple[Point, ...] = vs

    @staticmethod
    def _validate(vs: tuple[Point, ...]) -> None:
        n = len(vs)
        if n < 3:
            raise InvalidPolygon(f"polygon needs >= 3 vertices, got {n}")
        for i, p in enumerate(vs):
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise InvalidPolygon(f"vertex {i} is not finite")
            if abs(p.x) > COORD_LIMIT or abs(p.y) > COORD_LIMIT:
                raise InvalidPolygon(f"vertex {i} exceeds coordinate limit")
        for i in range(n):
            for j in range(i + 1, n):
                if vs[i].dist(vs[j]) <= 10 * EPS:
                    raise InvalidPolygon(f"vertices {i} and {j} coincide")
        for i in range(n):
            a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
            area = abs(orient(a, b, c))
            if area <= EPS * max(a.dist(b), 1.0) * max(b.dist(c), 1.0):
                raise InvalidPolygon(f"vertex {i} is collinear with its neighbours")
        # simplicity: non-adjacent edges must not intersect or touch
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                c, d = vs[j], vs[(j + 1) % n]
                if segments_properly_cross(a, b, c, d):
                    raise InvalidPolygon(f"edges {i} and {j} cross")
                if point_segment_distance(c, a, b) <= EPS or \
                   point_segment_distance(d, a, b) <= EPS or \
                   point_segment_distance(a, c, d) <= EPS or \
                   point_segment_distance(b, c, d) <= EPS:
                    raise InvalidPolygon(f"edges {i} and {j} touch")

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"Polygon({len(self.vertices)} vertices)"

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    @property
    def signed_area(self) -> float:
        s = 0.0
        vs = self.vertices
        for i in range(len(vs)):
            s += vs[i].cross(vs[(i + 1) % len(vs)])
        return 0.5 * s

    @property
    def is_ccw(self) -> bool:
        return self.signed_area > 0.0

    @property
    def perimeter(self) -> float:
        vs = self.vertices
        return sum(vs[i].dist(vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def reversed(self) -> "Polygon":
        return Polygon(tuple(reversed(self.vertices)))

    def oriented(self, ccw: bool) -> "Polygon":
        return self if self.is_ccw == ccw else self.reversed()

    def bounding_box(self) -> tuple[float, float, float, float]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    @property
    def diameter(self) -> float:
        x0, y0, x1, y1 = self.bounding_box()
        return math.hypot(x1 - x0, y1 - y0)

    def contains(self, p: Point) -> bool:
        """Even-odd containment; exact away from the boundary."""
        inside = False
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            if (a.y > p.y) != (b.y > p.y):
                xi = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
                if p.x < xi:
                    inside = not inside
        return inside

    def nearest_edge(self, p: Point) -> tuple[int, float]:
        """(edge index, distance) of the boundary edge closest to p."""
        best_i, best_d = 0, math.inf
        for i, (a, b) in enumerate(self.edges()):
            d = point_segment_distance(p, a, b)
            if d < best_d:
                best_i, best_d = i, d
        return best_i, best_d

    def boundary_distance(self, p: Point) -> float:
        return self.nearest_edge(p)[1]

    # -- arc-length parameterization along the stored vertex order --

    def _cumlen(self) -> list[float]:
        cached = getattr(self, "_cumlen_cache", None)
        if cached is None:
            cs = [0.0]
            for a, b in self.edges():
                cs.append(cs[-1] + a.dist(b))
            object.__setattr__(self, "_cumlen_cache", cs)
            cached = cs
        return cached

    def vertex_params(self) -> list[float]:
        """Arc-length coordinates of the vertices in stored order."""
        return self._cumlen()[:-1]

    def param_of(self, p: Point) -> float:
        """Arc-length coordinate of a boundary point in stored order."""
        i, d = self.nearest_edge(p)
        if d > 10 * EPS:
            raise NotOnBoundary(f"{p} is {d:g} away from the boundary")
        a, b = self.vertices[i], self.vertices[(i + 1) % len(self.vertices)]
        t, _ = project_on_segment(p, a, b)
        return self._cumlen()[i] + t * a.dist(b)

    def point_at(self, s: float) -> Point:
        cs = self._cumlen()
        total = cs[-1]
        s = s % total
        # locate the edge containing s
        lo, hi = 0, len(cs) - 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if cs[mid] <= s:
                lo = mid
            else:
                hi = mid
        a = self.vertices[lo]
        b = self.vertices[(lo + 1) % len(self.vertices)]
        seg = cs[lo + 1] - cs[lo]
        t = (s - cs[lo]) / seg if seg > 0 else 0.0
        return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))

    def walk(self, s_from: float, distance: float, forward: bool) -> list[Point]:
        """Boundary polyline from arc coordinate s_from covering `distance`.

        Walks in stored vertex order when forward, reversed otherwise;
        includes every vertex passed.
        """
        cs = self._cumlen()
        total = cs[-1]
        if distance < 0:
            raise GeometryError("negative walk distance")
        pts = [self.point_at(s_from)]
        remaining = distance
        s = s_from % total
        while remaining > EPS:
            for c in cs:                      # snap onto a vertex coordinate
                if abs(s - c) <= EPS:
                    s = c % total
                    break
            if forward:
                nxt = total
                for c in cs:
                    if c > s + EPS:
                        nxt = c
                        break
                step = nxt - s
            else:
                if s <= EPS:                  # stepping backward past vertex 0
                    s = total
                prv = 0.0
                for c in reversed(cs):
                    if c < s - EPS:
                        prv = c
                        break
                step = s - prv
            take = min(step, remaining)
            s2 = s + take if forward else s - take
            pts.append(self.point_at(s2))
            s = s2 % total
            remaining -= take
        return pts


class Locus:
    """Where a point sits relative to a terrain."""

    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"

    __slots__ = ("kind", "polygon", "edge")

    def __init__(self, kind: str, polygon: int | None = None, edge: int | None = None):
        self.kind = kind
        self.polygon = polygon
        self.edge = edge

    @property
    def is_interior(self) -> bool:
        return self.kind == Locus.INTERIOR

    @property
    def is_boundary(self) -> bool:
        return self.kind == Locus.BOUNDARY

    @property
    def is_outside(self) -> bool:
        return self.kind == Locus.OUTSIDE

    @property
    def in_terrain(self) -> bool:
        return self.kind != Locus.OUTSIDE

    def __repr__(self) -> str:
        if self.kind == Locus.BOUNDARY:
            return f"Locus(boundary, polygon={self.polygon}, edge={self.edge})"
        return f"Locus({self.kind})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Locus) and (self.kind, self.polygon, self.edge) == \
            (other.kind, other.polygon, other.edge)


@dataclass(frozen=True)
class Hit:
    point: Point
    polygon: int       # 0 = outer, i >= 1 = obstacle i-1
    distance: float


class Terrain:
    """Closed outer polygon minus disjoint open obstacles.

    The outer polygon is stored counterclockwise and obstacles clockwise, so
    the terrain interior always lies to the left when walking a boundary in
    stored order.
    """

    def __init__(self, outer: Polygon, obstacles: list[Polygon] | tuple[Polygon, ...] = ()):
        self.outer = outer.oriented(ccw=True)
        self.obstacles = tuple(ob.oriented(ccw=False) for ob in obstacles)
        self._validate()
        self._vis = None  # lazy visibility index, owned by rendezvous.visibility

    def _validate(self) -> None:
        clearance = 10 * EPS
        for k, ob in enumerate(self.obstacles):
            for i, v in enumerate(ob.vertices):
                if not self.outer.contains(v):
                    raise InvalidTerrain(f"obstacle {k} vertex {i} outside the outer polygon")
                if self.outer.boundary_distance(v) < clearance:
                    raise InvalidTerrain(f"obstacle {k} vertex {i} touches the outer boundary")
            for i, v in enumerate(self.outer.vertices):
                if ob.boundary_distance(v) < clearance:
                    raise InvalidTerrain(f"outer vertex {i} touches obstacle {k}")
            for a, b in ob.edges():
                for c, d in self.outer.edges():
                    if segments_properly_cross(a, b, c, d):
                        raise InvalidTerrain(f"obstacle {k} crosses the outer boundary")
        for k1 in range(len(self.obstacles)):
            for k2 in range(k1 + 1, len(self.obstacles)):
                o1, o2 = self.obstacles[k1], self.obstacles[k2]
                if any(o2.contains(v) for v in o1.vertices) or \
                   any(o1.contains(v) for v in o2.vertices):
                    raise InvalidTerrain(f"obstacles {k1} and {k2} overlap")
                dmin = min(min(o2.boundary_distance(v) for v in o1.vertices),
                           min(o1.boundary_distance(v) for v in o2.vertices))
                if dmin < clearance:
                    raise InvalidTerrain(f"obstacles {k1} and {k2} touch")
                for a, b in o1.edges():
                    for c, d in o2.edges():
                        if segments_properly_cross(a, b, c, d):
                            raise InvalidTerrain(f"obstacles {k1} and {k2} cross")

    def polygons(self) -> list[tuple[int, Polygon]]:
        """(id, polygon) pairs; id 0 is the outer boundary."""
        return [(0, self.outer)] + [(i + 1, ob) for i, ob in enumerate(self.obstacles)]

    def polygon(self, pid: int) -> Polygon:
        return self.outer if pid == 0 else self.obstacles[pid - 1]

    @property
    def perimeter(self) -> float:
        return self.outer.perimeter + sum(o.perimeter for o in self.obstacles)

    @property
    def max_obstacle_perimeter(self) -> float:
        return max((o.perimeter for o in self.obstacles), default=0.0)

    @property
    def diameter(self) -> float:
        return self.outer.diameter

    def all_vertices(self) -> list[Point]:
        pts = list(self.outer.vertices)
        for ob in self.obstacles:
            pts.extend(ob.vertices)
        return pts

    def to_jsonable(self) -> dict:
        return {
            "outer": [[float(p.x), float(p.y)] for p in self.outer.vertices],
            "obstacles": [[[float(p.x), float(p.y)] for p in ob.vertices]
                          for ob in self.obstacles],
        }

    def __repr__(self) -> str:
        return f"Terrain(outer={len(self.outer)}v, obstacles={len(self.obstacles)})"


def classify_point(p: Point, t: Terrain) -> Locus:
    """Interior / Boundary(polygon, edge) / Outside classification of p."""
    best = None  # (distance, pid, edge)
    for pid, poly in t.polygons():
        i, d = poly.nearest_edge(p)
        if best is None or d < best[0]:
            best = (d, pid, i)
    if best is not None and best[0] <= EPS:
        return Locus(Locus.BOUNDARY, polygon=best[1], edge=best[2])
    if not t.outer.contains(p):
        return Locus(Locus.OUTSIDE)
    for ob in t.obstacles:
        if ob.contains(p):
            return Locus(Locus.OUTSIDE)
    return Locus(Locus.INTERIOR)


def snap_to_boundary(p: Point, t: Terrain) -> Point:
    """Project p onto the nearest boundary edge if within tolerance."""
    for pid, poly in t.polygons():
        i, d = poly.nearest_edge(p)
        if d <= EPS:
            a, b = poly.edges()[i]
            _, foot = project_on_segment(p, a, b)
            return foot
    return p


def _local_pass(t: Terrain, q: Point, d: Point) -> bool:
    """Can motion from boundary-or-interior point q proceed in direction d?

    Exact wedge test at vertices, side test on edge interiors.  Raises
    DegenerateRay when d runs along an incident edge.
    """
    loc = classify_point(q, t)
    if loc.is_interior:
        return True
    if loc.is_outside:
        return False
    poly = t.polygon(loc.polygon)
    vs = poly.vertices
    n = len(vs)
    # vertex or edge-interior?
    vidx = None
    for i, v in enumerate(vs):
        if v.dist(q) <= 10 * EPS:
            vidx = i
            break
    if vidx is None:
        a, b = vs[loc.edge], vs[(loc.edge + 1) % n]
        e = (b - a).unit()
        side = e.cross(d)
        if abs(side) <= EPS_ANG:
            raise DegenerateRay(f"ray runs along boundary edge at {q}")
        return side > 0  # interior lies to the left in stored order
    prev_v = vs[(vidx - 1) % n]
    next_v = vs[(vidx + 1) % n]
    a_dir = (next_v - vs[vidx]).unit()        # outgoing edge
    b_dir = (prev_v - vs[vidx]).unit()        # backward along incoming edge
    if abs(a_dir.cross(d)) <= EPS_ANG and a_dir.dot(d) > 0:
        raise DegenerateRay(f"ray runs along boundary edge at vertex {q}")
    if abs(b_dir.cross(d)) <= EPS_ANG and b_dir.dot(d) > 0:
        raise DegenerateRay(f"ray runs along boundary edge at vertex {q}")
    # terrain wedge spans from a_dir counterclockwise to b_dir
    c = a_dir.cross(b_dir)
    if c > EPS_ANG:        # wedge < pi
        return a_dir.cross(d) > 0 and d.cross(b_dir) > 0
    if c < -EPS_ANG:       # wedge > pi: complement (b_dir ccw to a_dir) is < pi
        outside = b_dir.cross(d) >= 0 and d.cross(a_dir) >= 0
        return not outside
    # near-straight wedge (should be excluded by validation); treat as edge
    return a_dir.cross(d) > 0


def can_progress(p: Point, direction: Point, t: Terrain) -> bool:
    """True iff an agent at p may advance a positive distance along direction."""
    return _local_pass(t, p, direction.unit())


def _ray_edge_params(o: Point, d: Point, a: Point, b: Point) -> list[float]:
    """Ray parameters t > 0 where o + t*d meets segment ab.

    Raises DegenerateRay on collinear overlap of positive length ahead.
    """
    ab = b - a
    denom = d.cross(ab)
    seg_len = ab.norm()
    if abs(denom) <= EPS * max(seg_len, 1.0):
        # parallel; collinear iff the edge lies on the ray's support line
        if abs((a - o).cross(d)) <= 10 * EPS:
            ta = (a - o).dot(d)
            tb = (b - o).dot(d)
            lo, hi = min(ta, tb), max(ta, tb)
            if hi > EPS and hi - max(lo, 0.0) > EPS:
                raise DegenerateRay(f"ray overlaps edge [{a}, {b}]")
        return []
    t = (a - o).cross(ab) / denom
    s = (a - o).cross(d) / denom
    if t <= EPS:
        return []
    s_tol = EPS / max(seg_len, EPS)
    if -s_tol <= s <= 1.0 + s_tol:
        return [t]
    return []


def ray_boundary_params(o: Point, d: Point, poly: Polygon) -> list[float]:
    """Sorted ray parameters where the half-line from o meets poly's boundary."""
    ts: list[float] = []
    for a, b in poly.edges():
        ts.extend(_ray_edge_params(o, d, a, b))
    ts.sort()
    merged: list[float] = []
    for t in ts:
        if not merged or t - merged[-1] > EPS:
            merged.append(t)
    return merged


def first_hit(origin: Point, direction: Point, t: Terrain,
              max_dist: float = math.inf) -> Hit | None:
    """Closest boundary point strictly ahead that blocks travel along the ray.

    Tangential grazes of single vertices are skipped.  Returns None when the
    ray leaves the terrain immediately or reaches max_dist unobstructed.
    """
    d = direction.unit()
    if not _local_pass(t, origin, d):
        return None
    candidates: list[tuple[float, int]] = []
    for pid, poly in t.polygons():
        for tt in ray_boundary_params(origin, d, poly):
            if tt <= max_dist + EPS:
                candidates.append((tt, pid))
    candidates.sort()
    i = 0
    while i < len(candidates):
        t0, pid = candidates[i]
        # merge co-located candidates (same geometric point)
        j = i + 1
        while j < len(candidates) and candidates[j][0] - t0 <= EPS:
            j += 1
        q = Point(origin.x + t0 * d.x, origin.y + t0 * d.y)
        q = snap_to_boundary(q, t)
        if not _local_pass(t, q, d):
            return Hit(point=q, polygon=pid, distance=t0)
        i = j
    return None


def boundary_tour(start: Point, poly: Polygon, orientation: str) -> list[Point]:
    """Closed boundary polyline from start around poly in geometric cw/ccw."""
    if orientation not in ("cw", "ccw"):
        raise ValueError(f"orientation must be 'cw' or 'ccw', got {orientation!r}")
    i, d = poly.nearest_edge(start)
    if d > 10 * EPS:
        raise NotOnBoundary(f"{start} not on the polygon boundary (distance {d:g})")
    a, b = poly.edges()[i]
    _, s0pt = project_on_segment(start, a, b)
    s0 = poly.param_of(s0pt)
    forward = (orientation == "ccw") == poly.is_ccw
    return poly.walk(s0, poly.perimeter, forward)


def boundary_walk_to(start: Point, target: Point, poly: Polygon,
                     orientation: str) -> list[Point]:
    """Boundary polyline from start to target in the given geometric sense."""
    if orientation not in ("cw", "ccw"):
        raise ValueError(f"orientation must be 'cw' or 'ccw', got {orientation!r}")
    s0 = poly.param_of(start)
    s1 = poly.param_of(target)
    total = poly.perimeter
    forward = (orientation == "ccw") == poly.is_ccw
    if forward:
        dist = (s1 - s0) % total
    else:
        dist = (s0 - s1) % total
    return poly.walk(s0, dist, forward)


def perimeter_stats(t: Terrain) -> tuple[float, float]:
    """(P, x): total perimeter and largest obstacle perimeter."""
    return t.perimeter, t.max_obstacle_perimeter


def polyline_length(pts: list[Point]) -> float:
    return sum(pts[i].dist(pts[i + 1]) for i in range(len(pts) - 1))


# ---------------------------------------------------------------------------
# terrain text format

def terrain_from_json(text: str) -> Terrain:
    """Parse the `{"outer": [[x,y],...], "obstacles": [...]}` format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidTerrain(f"not valid JSON: {e}") from e
    if not isinstance(data, dict) or "outer" not in data:
        raise InvalidTerrain("terrain object must contain an 'outer' vertex list")

    def parse_ring(raw, label):
        pts = []
        for i, xy in enumerate(raw):
            if (not isinstance(xy, (list, tuple))) or len(xy) != 2:
                raise InvalidTerrain(f"{label}: vertex {i} is not an [x, y] pair")
            x, y = float(xy[0]), float(xy[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InvalidTerrain(f"{label}: vertex {i} is not finite")
            pts.append(Point(x, y))
        try:
            return Polygon(pts)
        except InvalidPolygon as e:
            raise InvalidTerrain(f"{label}: {e}") from e

    outer = parse_ring(data["outer"], "outer")
    obstacles = [parse_ring(ring, f"obstacle {k}")
                 for k, ring in enumerate(data.get("obstacles", []))]
    return Terrain(outer, obstacles)


def terrain_to_json(t: Terrain) -> str:
    return json.dumps(t.to_jsonable())


def load_terrain(path: str) -> Terrain:
    with open(path, "r", encoding="utf-8") as fh:
        return terrain_from_json(fh.read())
