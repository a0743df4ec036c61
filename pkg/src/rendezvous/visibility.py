"""Visibility-graph shortest paths and the canonical tie-broken path.

Shortest paths between terrain points are computed over the visibility graph
of polygon vertices.  When several shortest paths tie, `unique_path` selects
one deterministically by repeatedly keeping the candidates whose next segment
is first in clockwise order from the straight v-to-w direction; the result
depends only on the endpoints and the terrain, never on an agent's compass.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .geometry import (
    EPS,
    EPS_ANG,
    GeometryError,
    Point,
    Terrain,
    classify_point,
    segments_properly_cross,
    snap_to_boundary,
)

TIE_REL = 1e-9      # relative tolerance for "equal length" paths
ENUM_CAP = 64       # maximum number of tied shortest paths we will enumerate


class VisibilityError(GeometryError):
    pass


class Unreachable(VisibilityError):
    pass


class TooManyPaths(VisibilityError):
    def __init__(self, cap: int):
        super().__init__(f"more than {cap} tied shortest paths")
        self.cap = cap


class AmbiguousTie(VisibilityError):
    pass


@dataclass(frozen=True)
class GeodesicPath:
    waypoints: tuple[Point, ...]

    @property
    def length(self) -> float:
        w = self.waypoints
        return sum(w[i].dist(w[i + 1]) for i in range(len(w) - 1))

    @property
    def source(self) -> Point:
        return self.waypoints[0]

    @property
    def sink(self) -> Point:
        return self.waypoints[-1]

    def reversed(self) -> "GeodesicPath":
        return GeodesicPath(tuple(reversed(self.waypoints)))

    def point_at(self, s: float) -> Point:
        """Point at arc length s from the source."""
        w = self.waypoints
        if s <= 0:
            return w[0]
        for i in range(len(w) - 1):
            seg = w[i].dist(w[i + 1])
            if s <= seg or i == len(w) - 2:
                t = min(max(s / seg, 0.0), 1.0) if seg > 0 else 0.0
                return Point(w[i].x + t * (w[i + 1].x - w[i].x),
                             w[i].y + t * (w[i + 1].y - w[i].y))
            s -= seg
        return w[-1]

    def split_at(self, s: float) -> tuple[tuple[Point, ...], tuple[Point, ...]]:
        """Waypoint lists of the [0, s] and [s, end] pieces."""
        w = self.waypoints
        mid = self.point_at(s)
        acc = 0.0
        for i in range(len(w) - 1):
            seg = w[i].dist(w[i + 1])
            if acc + seg >= s - EPS:
                first = list(w[: i + 1])
                if mid.dist(w[i]) > EPS:
                    first.append(mid)
                second = [mid] + [p for p in w[i + 1:] if p.dist(mid) > EPS]
                return tuple(first), tuple(second)
            acc += seg
        return w, (w[-1],)


@dataclass
class ShortestPathDAG:
    source: Point
    sink: Point
    nodes: list[Point]
    dist: dict[int, float]
    tight: dict[int, list[int]]          # u -> successors on tight edges
    source_id: int
    sink_id: int


def segment_in_terrain(p: Point, q: Point, t: Terrain) -> bool:
    """True iff the whole segment pq stays in the closed terrain."""
    if p.dist(q) <= EPS:
        return classify_point(p, t).in_terrain
    for _, poly in t.polygons():
        for a, b in poly.edges():
            if segments_properly_cross(p, q, a, b):
                return False
    # split at boundary contacts and probe each open piece at its midpoint
    params = [0.0, 1.0]
    pq = q - p
    L = pq.norm()
    for _, poly in t.polygons():
        for a, b in poly.edges():
            params.extend(_segment_touch_params(p, q, a, b))
    params = sorted(set(round(v, 15) for v in params))
    for u, v in zip(params, params[1:]):
        if v - u <= EPS / max(L, EPS):
            continue
        m = Point(p.x + (u + v) / 2 * pq.x, p.y + (u + v) / 2 * pq.y)
        if classify_point(m, t).is_outside:
            return False
    return True


def _segment_touch_params(p: Point, q: Point, a: Point, b: Point) -> list[float]:
    """Parameters along pq where it meets segment ab (crossing, touch, overlap)."""
    pq = q - p
    ab = b - a
    L = pq.norm()
    denom = pq.cross(ab)
    out: list[float] = []
    if abs(denom) <= EPS * max(L, 1.0) * max(ab.norm(), 1.0):
        # parallel; if collinear, the overlap endpoints are contact params
        if abs((a - p).cross(pq)) <= 10 * EPS * max(L, 1.0):
            for w in (a, b):
                t = (w - p).dot(pq) / (L * L)
                if -EPS <= t <= 1 + EPS:
                    out.append(min(max(t, 0.0), 1.0))
        return out
    t = (a - p).cross(ab) / denom
    s = (a - p).cross(pq) / denom
    if -EPS <= t <= 1 + EPS and -EPS <= s <= 1 + EPS:
        out.append(min(max(t, 0.0), 1.0))
    return out


class PathFinder:
    """Visibility graph over a terrain's vertices with two-point queries.

    The vertex-to-vertex part is computed once; each query adds the two
    endpoints and runs Dijkstra.
    """

    def __init__(self, terrain: Terrain):
        self.terrain = terrain
        self.base: list[Point] = terrain.all_vertices()
        n = len(self.base)
        self.base_adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if segment_in_terrain(self.base[i], self.base[j], terrain):
                    w = self.base[i].dist(self.base[j])
                    self.base_adj[i].append((j, w))
                    self.base_adj[j].append((i, w))

    def _query_graph(self, s: Point, t: Point):
        nodes = self.base + [s, t]
        n = len(self.base)
        sid, tid = n, n + 1
        adj: list[list[tuple[int, float]]] = [list(a) for a in self.base_adj] + [[], []]
        for qid, q in ((sid, s), (tid, t)):
            for i, v in enumerate(self.base):
                if segment_in_terrain(q, v, self.terrain):
                    w = q.dist(v)
                    adj[qid].append((i, w))
                    adj[i].append((qid, w))
        if s.dist(t) > EPS and segment_in_terrain(s, t, self.terrain):
            w = s.dist(t)
            adj[sid].append((tid, w))
            adj[tid].append((sid, w))
        return nodes, adj, sid, tid

    def dag(self, s: Point, t: Point) -> ShortestPathDAG:
        s = snap_to_boundary(s, self.terrain)
        t = snap_to_boundary(t, self.terrain)
        nodes, adj, sid, tid = self._query_graph(s, t)
        dist = {sid: 0.0}
        done: set[int] = set()
        pq = [(0.0, sid)]
        while pq:
            d, u = heapq.heappop(pq)
            if u in done:
                continue
            done.add(u)
            for v, w in adj[u]:
                nd = d + w
                if v not in dist or nd < dist[v] - EPS * 1e-3:
                    dist[v] = nd
                    heapq.heappush(pq, (nd, v))
        if tid not in dist:
            raise Unreachable(f"no path between {s} and {t}")
        tight: dict[int, list[int]] = {}
        for u in dist:
            for v, w in adj[u]:
                if v not in dist:
                    continue
                tol = max(1e-12, TIE_REL * max(dist[v], 1.0))
                if dist[v] > dist[u] and abs(dist[u] + w - dist[v]) <= tol:
                    tight.setdefault(u, []).append(v)
        return ShortestPathDAG(source=s, sink=t, nodes=nodes, dist=dist,
                               tight=tight, source_id=sid, sink_id=tid)

    def shortest_path(self, s: Point, t: Point) -> GeodesicPath:
        dag = self.dag(s, t)
        # walk greedily along tight edges toward the sink
        counts = _paths_to_sink(dag, cap=None)
        u = dag.source_id
        out = [dag.nodes[u]]
        guard = 0
        while u != dag.sink_id:
            succ = [v for v in dag.tight.get(u, []) if counts.get(v, 0) > 0]
            if not succ:
                raise Unreachable("tight-edge walk failed")  # pragma: no cover
            u = min(succ, key=lambda v: dag.dist[v])
            out.append(dag.nodes[u])
            guard += 1
            if guard > len(dag.nodes) + 2:
                raise Unreachable("cycle in tight edges")  # pragma: no cover
        return GeodesicPath(tuple(out))


def _paths_to_sink(dag: ShortestPathDAG, cap: int | None) -> dict[int, int]:
    """Count of tight source-to-sink path continuations from every node."""
    order = sorted(dag.dist, key=lambda u: -dag.dist[u])
    counts: dict[int, int] = {dag.sink_id: 1}
    limit = (cap + 1) if cap is not None else None
    for u in order:
        if u == dag.sink_id:
            continue
        c = 0
        for v in dag.tight.get(u, []):
            c += counts.get(v, 0)
            if limit is not None and c >= limit:
                c = limit
                break
        counts[u] = c
    return counts


def enumerate_shortest_paths(dag: ShortestPathDAG, cap: int = ENUM_CAP) -> list[GeodesicPath]:
    """All tied shortest source-to-sink paths through the DAG's tight edges."""
    counts = _paths_to_sink(dag, cap)
    if counts.get(dag.source_id, 0) > cap:
        raise TooManyPaths(cap)
    if counts.get(dag.source_id, 0) == 0:
        raise Unreachable("no tight path reaches the sink")  # pragma: no cover
    out: list[GeodesicPath] = []
    stack = [dag.source_id]

    def rec(u: int) -> None:
        if u == dag.sink_id:
            out.append(GeodesicPath(tuple(dag.nodes[i] for i in stack)))
            return
        for v in sorted(dag.tight.get(u, [])):
            if counts.get(v, 0) > 0:
                stack.append(v)
                rec(v)
                stack.pop()

    rec(dag.source_id)
    if len(out) > cap:
        raise TooManyPaths(cap)  # pragma: no cover
    return out


def clockwise_first(base_direction: Point, candidates: list[Point]) -> int:
    """Index of the candidate first in clockwise order from base_direction.

    Angles are measured clockwise in (0, 2*pi]; a candidate aligned with the
    base direction gets angle 0 and wins outright.
    """
    if not candidates:
        raise ValueError("no candidates")
    base = math.atan2(base_direction.y, base_direction.x)
    angles = []
    for c in candidates:
        a = (base - math.atan2(c.y, c.x)) % (2 * math.pi)
        if a > 2 * math.pi - EPS_ANG:
            a = 0.0
        angles.append(a)
    order = sorted(range(len(angles)), key=lambda i: angles[i])
    for i, j in zip(order, order[1:]):
        if abs(angles[j] - angles[i]) <= EPS_ANG:
            raise AmbiguousTie(f"candidates {i} and {j} are angularly indistinct")
    return order[0]


def _group_by_direction(paths: list[list[Point]], u: Point) -> list[tuple[Point, list[list[Point]]]]:
    groups: list[tuple[Point, list[list[Point]]]] = []
    for p in paths:
        d = (p[1] - u).unit()
        placed = False
        for gd, members in groups:
            if abs(gd.cross(d)) <= EPS_ANG and gd.dot(d) > 0:
                members.append(p)
                placed = True
                break
        if not placed:
            groups.append((d, [p]))
    return groups


def _common_prefix(paths: list[list[Point]]) -> list[Point]:
    """Maximal common geometric prefix of paths sharing their first point.

    Consumes the consumed waypoints from each path in place and re-roots every
    path at the prefix end.
    """
    cur = paths[0][0]
    prefix = [cur]
    while True:
        if any(len(p) < 2 for p in paths):
            break
        dirs_lens = [((p[1] - cur).unit(), p[1].dist(cur)) for p in paths]
        d0 = dirs_lens[0][0]
        if any(abs(d0.cross(d)) > EPS_ANG or d0.dot(d) <= 0 for d, _ in dirs_lens[1:]):
            break
        lmin = min(l for _, l in dirs_lens)
        nxt = None
        for p, (_, l) in zip(paths, dirs_lens):
            if abs(l - lmin) <= EPS:
                nxt = p[1]
                break
        assert nxt is not None
        for p, (_, l) in zip(paths, dirs_lens):
            if abs(l - lmin) <= EPS:
                p.pop(0)          # waypoint consumed
                p[0] = nxt
            else:
                p[0] = nxt        # re-root mid-segment
        prefix.append(nxt)
        cur = nxt
    return prefix


def unique_path(v: Point, w: Point, terrain: Terrain) -> GeodesicPath:
    """Canonical shortest path from v to w, a function of geometry alone.

    Among all tied shortest paths, repeatedly keep those whose next segment is
    first in clockwise order around the current point starting from the
    straight v-to-w direction, and emit their maximal common prefix.
    """
    if v.dist(w) <= EPS:
        raise VisibilityError("endpoints coincide")
    finder = get_finder(terrain)
    dag = finder.dag(v, w)
    cands = [list(p.waypoints) for p in enumerate_shortest_paths(dag)]
    base_dir = (w - v).unit()
    out = [dag.source]
    u = dag.source
    while u.dist(dag.sink) > EPS:
        groups = _group_by_direction(cands, u)
        idx = clockwise_first(base_dir, [g[0] for g in groups])
        chosen = groups[idx][1]
        prefix = _common_prefix(chosen)
        if len(prefix) < 2:
            raise VisibilityError("canonical path failed to advance")  # pragma: no cover
        out.extend(prefix[1:])
        u = prefix[-1]
        cands = chosen
    return GeodesicPath(tuple(out))


def get_finder(terrain: Terrain) -> PathFinder:
    """Per-terrain cached PathFinder (visibility graph is built once)."""
    if terrain._vis is None:
        terrain._vis = PathFinder(terrain)
    return terrain._vis


def shortest_path(s: Point, t: Point, terrain: Terrain) -> GeodesicPath:
    return get_finder(terrain).shortest_path(s, t)


def geodesic_distance(s: Point, t: Point, terrain: Terrain) -> float:
    if s.dist(t) <= EPS:
        return 0.0
    return shortest_path(s, t, terrain).length


def build_dag(s: Point, t: Point, terrain: Terrain) -> ShortestPathDAG:
    return get_finder(terrain).dag(s, t)
