"""Route construction for the six rendezvous algorithms.

Every builder is a pure function of the agent's knowledge (its config, the
terrain, and — for map algorithms — the peer's start): it returns the finite
polygonal route the agent commits to, before any adversary scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import (
    EPS,
    GeometryError,
    Point,
    Segment,
    Terrain,
    boundary_tour,
    can_progress,
    classify_point,
    first_hit,
    polyline_length,
    ray_boundary_params,
    snap_to_boundary,
)
from .medial import medial_point
from .visibility import shortest_path, unique_path


class ProtocolError(GeometryError):
    pass


class SameStart(ProtocolError):
    pass


class SameLabel(ProtocolError):
    pass


class HasObstacles(ProtocolError):
    pass


ALGORITHMS = ("rvcm", "rvm", "rvmo", "rvc", "rv", "rvo")


@dataclass(frozen=True)
class AgentConfig:
    """An agent's starting knowledge and conventions.

    compass is the angle of the agent's North measured counterclockwise from
    world +y; alpha is the angle of its chosen half-line, counterclockwise
    from its own North (so the default half-line points North).
    """

    start: Point
    label: int = 1
    compass: float = 0.0
    has_map: bool = True
    alpha: float = 0.0

    def __post_init__(self):
        if self.label < 1:
            raise ValueError("label must be a positive integer")

    def north(self) -> Point:
        return Point(-math.sin(self.compass), math.cos(self.compass))

    def east(self) -> Point:
        return Point(math.cos(self.compass), math.sin(self.compass))

    def alpha_direction(self) -> Point:
        return self.north().rotated(self.alpha)

    def latitude(self, p: Point) -> float:
        return p.dot(self.north())

    def longitude(self, p: Point) -> float:
        return p.dot(self.east())


@dataclass(frozen=True)
class Route:
    segments: tuple[Segment, ...]
    origin: Point | None = None     # kept for empty routes

    @staticmethod
    def from_waypoints(points: list[Point]) -> "Route":
        segs = []
        cur = points[0]
        for p in points[1:]:
            if p.dist(cur) > EPS:
                segs.append(Segment(cur, p))
                cur = p
        return Route(segments=tuple(segs), origin=points[0])

    @property
    def waypoints(self) -> list[Point]:
        if not self.segments:
            return [self.origin] if self.origin else []
        pts = [self.segments[0].a]
        pts.extend(s.b for s in self.segments)
        return pts

    @property
    def total_length(self) -> float:
        return sum(s.length for s in self.segments)

    @property
    def start(self) -> Point:
        return self.segments[0].a if self.segments else self.origin

    @property
    def end(self) -> Point:
        return self.segments[-1].b if self.segments else self.origin

    def __len__(self) -> int:
        return len(self.segments)


def modified_label(mu: int) -> str:
    """Binary label, then a 1, then as many zeros as the label has bits.

    The resulting bitstrings are suffix-free across distinct labels, which is
    what lets staged tours break symmetry.
    """
    if mu < 1:
        raise ValueError("label must be a positive integer")
    bits = format(mu, "b")
    return bits + "1" + "0" * len(bits)


# ---------------------------------------------------------------------------
# map-based algorithms

def build_rvcm(me: AgentConfig, other_start: Point, terrain: Terrain) -> Route:
    """Coherent compasses, map: the southern agent walks to the northern one."""
    if me.start.dist(other_start) <= EPS:
        raise SameStart("agents share a starting point")
    a, b = me.start, other_start
    la, lb = me.latitude(a), me.latitude(b)
    if la > lb + EPS:
        v = a
    elif lb > la + EPS:
        v = b
    else:
        v = a if me.longitude(a) > me.longitude(b) else b
    if v.dist(me.start) <= EPS:
        return Route(segments=(), origin=me.start)   # stays inert
    path = unique_path(me.start, v, terrain)
    return Route.from_waypoints(list(path.waypoints))


def build_rvm(me: AgentConfig, other_start: Point, terrain: Terrain) -> Route:
    """No obstacles, map: walk the unique geodesic to its midpoint."""
    if terrain.obstacles:
        raise HasObstacles("rvm requires an obstacle-free terrain")
    if me.start.dist(other_start) <= EPS:
        raise SameStart("agents share a starting point")
    path = shortest_path(me.start, other_start, terrain)
    half, _ = path.split_at(path.length / 2)
    return Route.from_waypoints(list(half))


@dataclass(frozen=True)
class RingEmbedding:
    """Common 4-node cycle v -> a -> w -> b built from the two canonical paths.

    Both agents compute the same oriented cycle: swapping the roles of v and w
    maps (v, a, w, b) to (w, b, v, a), the same rotation.
    """

    nodes: tuple[Point, Point, Point, Point]
    arcs: tuple[tuple[Point, ...], ...]       # 4 polylines, arcs[i] from
                                              # nodes[i] to nodes[(i+1)%4]

    @property
    def length(self) -> float:
        return sum(polyline_length(list(a)) for a in self.arcs)

    def tour(self, start_node: int, forward: bool) -> list[Point]:
        pts: list[Point] = []
        for k in range(4):
            if forward:
                arc = list(self.arcs[(start_node + k) % 4])
            else:
                arc = list(reversed(self.arcs[(start_node - 1 - k) % 4]))
            if pts:
                arc = arc[1:]
            pts.extend(arc)
        return pts


def build_ring(me_start: Point, other_start: Point, terrain: Terrain) -> RingEmbedding:
    v, w = me_start, other_start
    pvw = unique_path(v, w, terrain)
    pwv = unique_path(w, v, terrain)
    first_vw, second_vw = pvw.split_at(pvw.length / 2)
    first_wv, second_wv = pwv.split_at(pwv.length / 2)
    a = first_vw[-1]
    b = first_wv[-1]
    return RingEmbedding(nodes=(v, a, w, b),
                         arcs=(first_vw, second_vw, first_wv, second_wv))


def build_rvmo(me: AgentConfig, other_start: Point, terrain: Terrain) -> Route:
    """Map, obstacles, incoherent compasses: staged double tours of the
    common 4-node ring, oriented by the agent's modified label bits."""
    if me.start.dist(other_start) <= EPS:
        raise SameStart("agents share a starting point")
    ring = build_ring(me.start, other_start, terrain)
    bits = modified_label(me.label)
    pts: list[Point] = [me.start]
    for bit in bits:
        for _ in range(2):
            tour = ring.tour(start_node=0, forward=(bit == "1"))
            pts.extend(tour[1:])
    return Route.from_waypoints(pts)


# ---------------------------------------------------------------------------
# map-free progress phases

def _tour_from(terrain: Terrain, pid: int, start: Point) -> list[Point]:
    """Full boundary tour in stored order (terrain interior on the left)."""
    poly = terrain.polygon(pid)
    s0 = poly.param_of(start)
    return poly.walk(s0, poly.perimeter, forward=True)


def _walk_forward_to(terrain: Terrain, pid: int, start: Point, target: Point) -> list[Point]:
    poly = terrain.polygon(pid)
    s0 = poly.param_of(start)
    s1 = poly.param_of(target)
    dist = (s1 - s0) % poly.perimeter
    return poly.walk(s0, dist, forward=True)


def ray_progress_phase(start: Point, direction: Point,
                       terrain: Terrain) -> tuple[list[Point], bool, Point]:
    """Advance along a half-line, touring and skirting every polygon hit,
    until the outer boundary is recognized (no further progress possible).

    Returns (polyline walked, outer_detected, final point on the outer
    boundary).
    """
    d = direction.unit()
    z = start
    pts: list[Point] = [start]
    cur = start
    for _ in range(len(terrain.obstacles) + 2):
        blocked_at_origin = not can_progress(cur, d, terrain) \
            if classify_point(cur, terrain).is_boundary else False
        if blocked_at_origin:
            loc = classify_point(cur, terrain)
            hit_point, pid = cur, loc.polygon
        else:
            hit = first_hit(cur, d, terrain)
            if hit is None:
                raise GeometryError("ray escaped the terrain")  # pragma: no cover
            hit_point, pid = hit.point, hit.polygon
            pts.append(hit_point)
        poly = terrain.polygon(pid)
        pts.extend(_tour_from(terrain, pid, hit_point)[1:])
        params = ray_boundary_params(z, d, poly)
        t_hit = (hit_point - z).dot(d)
        t_far = max(params) if params else t_hit
        t_far = max(t_far, t_hit)
        far = Point(z.x + t_far * d.x, z.y + t_far * d.y)
        far = snap_to_boundary(far, terrain)
        pts.extend(_walk_forward_to(terrain, pid, hit_point, far)[1:])
        cur = far
        if not can_progress(cur, d, terrain):
            return pts, True, cur
    raise GeometryError("ray progress failed to terminate")  # pragma: no cover


def segment_progress_phase(u: Point, v: Point,
                           terrain: Terrain) -> tuple[list[Point], bool, int | None]:
    """Follow the segment toward v, touring and skirting polygons hit.

    Returns (polyline, reached, blocking obstacle id or None).  reached=False
    means v lies strictly inside the returned obstacle and the polyline ends
    on its boundary.
    """
    if u.dist(v) <= EPS:
        return [u], True, None
    d = (v - u).unit()
    span = u.dist(v)
    pts: list[Point] = [u]
    cur = u
    for _ in range(len(terrain.obstacles) + 2):
        t_cur = (cur - u).dot(d)
        if t_cur >= span - EPS:
            return pts, True, None
        blocked_here = not can_progress(cur, d, terrain) \
            if classify_point(cur, terrain).is_boundary else False
        if blocked_here:
            loc = classify_point(cur, terrain)
            hit_point, pid = cur, loc.polygon
        else:
            hit = first_hit(cur, d, terrain, max_dist=span - t_cur)
            if hit is None:
                pts.append(v)
                return pts, True, None
            hit_point, pid = hit.point, hit.polygon
            pts.append(hit_point)
        poly = terrain.polygon(pid)
        pts.extend(_tour_from(terrain, pid, hit_point)[1:])
        params = [t for t in ray_boundary_params(u, d, poly) if t <= span + EPS]
        t_hit = (hit_point - u).dot(d)
        t_far = max(params) if params else t_hit
        t_far = max(t_far, t_hit)
        far = Point(u.x + t_far * d.x, u.y + t_far * d.y)
        far = snap_to_boundary(far, terrain)
        pts.extend(_walk_forward_to(terrain, pid, hit_point, far)[1:])
        cur = far
        if cur.dist(v) <= EPS:
            return pts, True, None
        if not can_progress(cur, d, terrain):
            if pid == 0:
                raise GeometryError(
                    "blocked on the outer boundary before reaching the target")
            return pts, False, pid
    raise GeometryError("segment progress failed to terminate")  # pragma: no cover


# ---------------------------------------------------------------------------
# map-free algorithms

def build_rvc(me: AgentConfig, terrain: Terrain) -> Route:
    """Coherent compasses, no map: find the outer boundary, then walk to the
    easternmost of its northernmost points (in the shared compass frame)."""
    pts, outer_seen, end = ray_progress_phase(me.start, me.alpha_direction(), terrain)
    assert outer_seen
    outer = terrain.outer
    # lexicographic max over (latitude, longitude), latitude compared at
    # geometric tolerance so a horizontal top edge falls to its east end
    best = outer.vertices[0]
    for p in outer.vertices[1:]:
        if me.latitude(p) > me.latitude(best) + EPS:
            best = p
        elif abs(me.latitude(p) - me.latitude(best)) <= EPS and \
                me.longitude(p) > me.longitude(best):
            best = p
    s0 = outer.param_of(end)
    s1 = outer.param_of(best)
    fwd = (s1 - s0) % outer.perimeter
    bwd = (s0 - s1) % outer.perimeter
    walk = outer.walk(s0, fwd, forward=True) if fwd <= bwd else \
        outer.walk(s0, bwd, forward=False)
    pts.extend(walk[1:])
    return Route.from_waypoints(pts)


def build_rv(me: AgentConfig, terrain: Terrain) -> Route:
    """No obstacles, no map: tour the boundary, then go to the medial point."""
    if terrain.obstacles:
        raise HasObstacles("rv requires an obstacle-free terrain")
    d = me.alpha_direction()
    hit = first_hit(me.start, d, terrain)
    if hit is None:
        loc = classify_point(me.start, terrain)
        if not loc.is_boundary:
            raise GeometryError("ray escaped the terrain")  # pragma: no cover
        hit_point = me.start
    else:
        hit_point = hit.point
    pts = [me.start]
    if hit_point.dist(me.start) > EPS:
        pts.append(hit_point)
    pts.extend(_tour_from(terrain, 0, hit_point)[1:])
    target = medial_point(terrain.outer).point
    geo = shortest_path(hit_point, target, terrain)
    pts.extend(list(geo.waypoints)[1:])
    return Route.from_waypoints(pts)


def build_rvo(me: AgentConfig, terrain: Terrain) -> Route:
    """Obstacles, incoherent compasses, no map.  Find the outer boundary and
    the medial point; go there; if it hides inside an obstacle, run staged
    label-coded double tours around that obstacle."""
    pts, outer_seen, end = ray_progress_phase(me.start, me.alpha_direction(), terrain)
    assert outer_seen
    target = medial_point(terrain.outer).point
    seg_pts, reached, blocking = segment_progress_phase(end, target, terrain)
    pts.extend(seg_pts[1:])
    if reached:
        return Route.from_waypoints(pts)
    ob = terrain.polygon(blocking)
    here = pts[-1]
    vertex = next((v for v in ob.vertices if v.dist(here) <= 10 * EPS), None)
    if vertex is None:
        # continue in the current walking orientation to the next vertex
        s0 = ob.param_of(here)
        ahead = min((c - s0) % ob.perimeter
                    for c in ob.vertex_params() if (c - s0) % ob.perimeter > EPS)
        walk = ob.walk(s0, ahead, forward=True)
        pts.extend(walk[1:])
        vertex = walk[-1]
    bits = modified_label(me.label)
    for bit in bits:
        # geometric clockwise for bit 1, counterclockwise for bit 0, in the
        # shared handedness (independent of either compass)
        orientation = "cw" if bit == "1" else "ccw"
        for _ in range(2):
            tour = boundary_tour(vertex, ob, orientation)
            pts.extend(tour[1:])
    return Route.from_waypoints(pts)


# ---------------------------------------------------------------------------
# dispatch

def build_route(algorithm: str, me: AgentConfig, other_start: Point,
                terrain: Terrain) -> Route:
    if algorithm == "rvcm":
        return build_rvcm(me, other_start, terrain)
    if algorithm == "rvm":
        return build_rvm(me, other_start, terrain)
    if algorithm == "rvmo":
        return build_rvmo(me, other_start, terrain)
    if algorithm == "rvc":
        return build_rvc(me, terrain)
    if algorithm == "rv":
        return build_rv(me, terrain)
    if algorithm == "rvo":
        return build_rvo(me, terrain)
    raise ValueError(f"unknown algorithm {algorithm!r}")
