"""Medial axis of a simple polygon and the unique medial point.

The axis is assembled pairwise: sites are the boundary edges plus the reflex
vertices, every non-incident site pair contributes a bisector primitive (a
straight line or a parabola), and each primitive is clipped to the region
where its two sites are the nearest boundary sites overall.  Clipping is done
by dense sampling plus bisection refinement of the validity boundary, which is
plenty at desk scale and is easy to audit against a distance-field oracle.

The medial point is the center of the (contracted) topological tree: the
central node, or the arc-length midpoint of the central edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    EPS,
    GeometryError,
    Point,
    Polygon,
    orient,
    point_segment_distance,
    project_on_segment,
)

EPS_MED = 1e-7         # equidistance validation tolerance
N_SAMPLES = 512        # samples per candidate bisector (events catch short runs)
QUAD_TOL = 1e-9        # relative tolerance of parabolic arc-length quadrature


class MedialError(GeometryError):
    pass


class NumericFailure(MedialError):
    pass


# --------------------------------------------------------------------------
# sites

@dataclass(frozen=True)
class _EdgeSite:
    index: int
    a: Point
    b: Point

    @property
    def descriptor(self) -> str:
        return f"edge:{self.index}"


@dataclass(frozen=True)
class _VertexSite:
    index: int
    v: Point

    @property
    def descriptor(self) -> str:
        return f"vertex:{self.index}"


def _build_sites(poly: Polygon) -> list:
    vs = poly.vertices
    n = len(vs)
    sites: list = [_EdgeSite(i, vs[i], vs[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        if orient(vs[(i - 1) % n], vs[i], vs[(i + 1) % n]) < 0:  # reflex in ccw ring
            sites.append(_VertexSite(i, vs[i]))
    return sites


def _incident(s1, s2) -> bool:
    if isinstance(s1, _VertexSite) and isinstance(s2, _EdgeSite):
        s1, s2 = s2, s1
    if isinstance(s1, _EdgeSite) and isinstance(s2, _VertexSite):
        return s2.v.dist(s1.a) <= EPS or s2.v.dist(s1.b) <= EPS
    return False


# --------------------------------------------------------------------------
# bisector primitives, parameterized curves

@dataclass
class _Curve:
    kind: str                  # "line" | "parabola"
    origin: Point              # line point / parabola foot of the focus
    u: Point                   # unit direction of the line / directrix
    normal: Point | None       # parabola: unit normal toward the focus
    h: float                   # parabola: focus-to-directrix distance
    pair: tuple[int, int] = (0, 0)

    def at(self, t: float) -> Point:
        if self.kind == "line":
            return Point(self.origin.x + t * self.u.x, self.origin.y + t * self.u.y)
        off = (t * t + self.h * self.h) / (2 * self.h)
        return Point(self.origin.x + t * self.u.x + off * self.normal.x,
                     self.origin.y + t * self.u.y + off * self.normal.y)

    def at_many(self, ts: np.ndarray) -> np.ndarray:
        o = np.array([self.origin.x, self.origin.y])
        u = np.array([self.u.x, self.u.y])
        if self.kind == "line":
            return o[None, :] + ts[:, None] * u[None, :]
        nrm = np.array([self.normal.x, self.normal.y])
        off = (ts * ts + self.h * self.h) / (2 * self.h)
        return o[None, :] + ts[:, None] * u[None, :] + off[:, None] * nrm[None, :]

    def param_of(self, q: Point) -> float:
        return (q - self.origin).dot(self.u)

    def speed(self, t: float) -> float:
        if self.kind == "line":
            return 1.0
        return math.sqrt(1.0 + (t / self.h) ** 2)


def _pair_curves(s1, s2, scale: float) -> list[_Curve]:
    if isinstance(s1, _VertexSite) and isinstance(s2, _EdgeSite):
        s1, s2 = s2, s1
    if isinstance(s1, _EdgeSite) and isinstance(s2, _EdgeSite):
        u1 = (s1.b - s1.a).unit()
        u2 = (s2.b - s2.a).unit()
        if abs(u1.cross(u2)) <= 1e-12 and \
           abs((s2.a - s1.a).cross(u1)) <= EPS:
            return []              # collinear support lines: no genuine bisector
        # each bisector branch is the zero set of the affine map f1 -/+ f2
        # (signed line distances); solving it locally is stable even when the
        # support lines are nearly parallel and intersect far away
        n1 = Point(-u1.y, u1.x)
        n2 = Point(-u2.y, u2.x)
        c = Point((s1.a.x + s1.b.x + s2.a.x + s2.b.x) / 4,
                  (s1.a.y + s1.b.y + s2.a.y + s2.b.y) / 4)
        out = []
        for sgn in (1.0, -1.0):
            grad = Point(n1.x - sgn * n2.x, n1.y - sgn * n2.y)
            g2 = grad.dot(grad)
            if g2 <= 1e-18:
                continue           # branch degenerate (identical normals)
            gc = (c - s1.a).dot(n1) - sgn * (c - s2.a).dot(n2)
            anchor = Point(c.x - grad.x * gc / g2, c.y - grad.y * gc / g2)
            out.append(_Curve("line", anchor, Point(-grad.y, grad.x).unit(), None, 0.0))
        return out
    if isinstance(s1, _VertexSite) and isinstance(s2, _VertexSite):
        m = Point((s1.v.x + s2.v.x) / 2, (s1.v.y + s2.v.y) / 2)
        d = s2.v - s1.v
        return [_Curve("line", m, Point(-d.y, d.x).unit(), None, 0.0)]
    # edge + vertex: parabola with the vertex as focus, the edge line as directrix
    focus = s2.v
    u = (s1.b - s1.a).unit()
    n = Point(-u.y, u.x)
    h = (focus - s1.a).dot(n)
    if abs(h) <= 10 * EPS:
        return [_Curve("line", focus, n, None, 0.0)]
    n_hat = n if h > 0 else Point(-n.x, -n.y)
    h_abs = abs(h)
    foot = Point(focus.x - n_hat.x * h_abs, focus.y - n_hat.y * h_abs)
    return [_Curve("parabola", foot, u, n_hat, h_abs)]


# --------------------------------------------------------------------------
# vectorized validity

class _Field:
    """Vectorized distance field over the polygon's sites."""

    def __init__(self, poly: Polygon, sites: list):
        self.poly = poly
        self.sites = sites
        self.verts = np.array([[p.x, p.y] for p in poly.vertices])
        self.edge_sites = [s for s in sites if isinstance(s, _EdgeSite)]
        self.vert_sites = [s for s in sites if isinstance(s, _VertexSite)]
        self.ea = np.array([[s.a.x, s.a.y] for s in self.edge_sites])
        self.eb = np.array([[s.b.x, s.b.y] for s in self.edge_sites])
        self.ev = self.eb - self.ea
        self.elen2 = np.maximum((self.ev ** 2).sum(axis=1), 1e-300)
        if self.vert_sites:
            self.vp = np.array([[s.v.x, s.v.y] for s in self.vert_sites])
        else:
            self.vp = np.zeros((0, 2))
        # column order matches `sites` order: edges first, then vertices
        assert sites == self.edge_sites + self.vert_sites

    def distances(self, pts: np.ndarray) -> np.ndarray:
        d = pts[:, None, :] - self.ea[None, :, :]
        t = (d * self.ev[None, :, :]).sum(axis=2) / self.elen2[None, :]
        t = np.clip(t, 0.0, 1.0)
        foot = self.ea[None, :, :] + t[:, :, None] * self.ev[None, :, :]
        de = np.sqrt(((pts[:, None, :] - foot) ** 2).sum(axis=2))
        if len(self.vp):
            dv = np.sqrt(((pts[:, None, :] - self.vp[None, :, :]) ** 2).sum(axis=2))
            return np.concatenate([de, dv], axis=1)
        return de

    def feet(self, pts: np.ndarray, site_idx: int) -> np.ndarray:
        s = self.sites[site_idx]
        if isinstance(s, _VertexSite):
            return np.tile(np.array([s.v.x, s.v.y]), (len(pts), 1))
        a = np.array([s.a.x, s.a.y])
        v = np.array([s.b.x - s.a.x, s.b.y - s.a.y])
        t = ((pts - a[None, :]) * v[None, :]).sum(axis=1) / max(float((v ** 2).sum()), 1e-300)
        t = np.clip(t, 0.0, 1.0)
        return a[None, :] + t[:, None] * v[None, :]

    def inside(self, pts: np.ndarray) -> np.ndarray:
        x, y = pts[:, 0], pts[:, 1]
        res = np.zeros(len(pts), dtype=bool)
        vs = self.verts
        n = len(vs)
        for i in range(n):
            ax, ay = vs[i]
            bx, by = vs[(i + 1) % n]
            cond = (ay > y) != (by > y)
            if not cond.any():
                continue
            xi = ax + (y - ay) * (bx - ax) / (by - ay + (by == ay))
            res ^= cond & (x < xi)
        return res

    def foot_interior(self, pts: np.ndarray, site_idx: int, clamp: float) -> np.ndarray:
        """For an edge site: does the unclamped foot fall strictly inside?

        A clamped foot means the tie is really owned by the endpoint vertex
        (reflex: its own site; convex: a closer adjacent edge), so the edge
        pair must not claim it.
        """
        s = self.sites[site_idx]
        if isinstance(s, _VertexSite):
            return np.ones(len(pts), dtype=bool)
        a = np.array([s.a.x, s.a.y])
        v = np.array([s.b.x - s.a.x, s.b.y - s.a.y])
        L2 = max(float(v @ v), 1e-300)
        t = ((pts - a[None, :]) * v[None, :]).sum(axis=1) / L2
        margin = clamp / math.sqrt(L2)
        return (t > margin) & (t < 1.0 - margin)

    def validity(self, pts: np.ndarray, i1: int, i2: int,
                 tol_eq: float, tol_dom: float, feet_tol: float) -> np.ndarray:
        D = self.distances(pts)
        d1 = D[:, i1]
        d2 = D[:, i2]
        others = np.delete(D, [i1, i2], axis=1)
        dmin_o = others.min(axis=1) if others.shape[1] else np.full(len(pts), np.inf)
        ok = (np.abs(d1 - d2) <= tol_eq) & (d1 <= dmin_o + tol_dom) & self.inside(pts)
        if ok.any():
            clamp = 1e-9 * max(1.0, self.poly.diameter)
            ok &= self.foot_interior(pts, i1, clamp)
            ok &= self.foot_interior(pts, i2, clamp)
            f1 = self.feet(pts, i1)
            f2 = self.feet(pts, i2)
            sep = np.sqrt(((f1 - f2) ** 2).sum(axis=1))
            ok &= sep > feet_tol
        return ok

    # scalar single-point variants (bisection loops stay off numpy)

    def dist_one(self, p: Point, idx: int) -> float:
        s = self.sites[idx]
        if isinstance(s, _VertexSite):
            return p.dist(s.v)
        return point_segment_distance(p, s.a, s.b)

    def foot_one(self, p: Point, idx: int) -> Point:
        s = self.sites[idx]
        if isinstance(s, _VertexSite):
            return s.v
        return project_on_segment(p, s.a, s.b)[1]

    def inside_one(self, p: Point) -> bool:
        return self.poly.contains(p)

    def _foot_interior_one(self, p: Point, site_idx: int, clamp: float) -> bool:
        s = self.sites[site_idx]
        if isinstance(s, _VertexSite):
            return True
        v = s.b - s.a
        L2 = max(v.dot(v), 1e-300)
        t = (p - s.a).dot(v) / L2
        margin = clamp / math.sqrt(L2)
        return margin < t < 1.0 - margin

    def valid_one(self, p: Point, i1: int, i2: int,
                  tol_eq: float, tol_dom: float, feet_tol: float) -> bool:
        d1 = self.dist_one(p, i1)
        d2 = self.dist_one(p, i2)
        if abs(d1 - d2) > tol_eq:
            return False
        for k in range(len(self.sites)):
            if k != i1 and k != i2 and self.dist_one(p, k) < d1 - tol_dom:
                return False
        if not self.inside_one(p):
            return False
        clamp = 1e-9 * max(1.0, self.poly.diameter)
        if not (self._foot_interior_one(p, i1, clamp) and
                self._foot_interior_one(p, i2, clamp)):
            return False
        return self.foot_one(p, i1).dist(self.foot_one(p, i2)) > feet_tol


# --------------------------------------------------------------------------
# clipped pieces and graph assembly

@dataclass
class AxisEdge:
    kind: str                    # "segment" | "arc"
    p0: Point
    p1: Point
    sites: tuple[str, str]
    length: float
    curve: _Curve
    t0: float
    t1: float
    n0: int = -1                 # node ids, filled at assembly
    n1: int = -1

    def point_at_arc(self, s: float) -> Point:
        """Point at arc length s from p0 along this edge."""
        if self.kind == "segment":
            t = self.t0 + (self.t1 - self.t0) * min(max(s / self.length, 0.0), 1.0)
            return self.curve.at(t)
        target = min(max(s, 0.0), self.length)
        lo, hi = self.t0, self.t1
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if _parabola_arclen(self.curve, self.t0, mid) < target:
                lo = mid
            else:
                hi = mid
        return self.curve.at(0.5 * (lo + hi))

    def sample(self, n: int) -> list[Point]:
        ts = np.linspace(self.t0, self.t1, n)
        return [self.curve.at(float(t)) for t in ts]


@dataclass
class MedialAxisGraph:
    polygon: Polygon
    node_points: list[Point]
    node_clearance: list[float]
    edges: list[AxisEdge]

    @property
    def n_nodes(self) -> int:
        return len(self.node_points)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in range(self.n_nodes)}
        for ei, e in enumerate(self.edges):
            adj[e.n0].append(ei)
            adj[e.n1].append(ei)
        return adj

    def to_jsonable(self) -> list[dict]:
        return [{
            "kind": e.kind,
            "p0": [e.p0.x, e.p0.y],
            "p1": [e.p1.x, e.p1.y],
            "sites": list(e.sites),
            "length": e.length,
        } for e in self.edges]


@dataclass(frozen=True)
class MedialPoint:
    point: Point
    provenance: str     # "central_node" | "middle_of_central_edge"

    CENTRAL_NODE = "central_node"
    MIDDLE_OF_CENTRAL_EDGE = "middle_of_central_edge"


def _simpson(f, a, b):
    m = 0.5 * (a + b)
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))


def _adaptive_simpson(f, a, b, tol):
    whole = _simpson(f, a, b)

    def rec(a, b, whole, tol, depth):
        m = 0.5 * (a + b)
        left = _simpson(f, a, m)
        right = _simpson(f, m, b)
        if depth > 40 or abs(left + right - whole) <= 15 * tol:
            return left + right + (left + right - whole) / 15.0
        return rec(a, m, left, tol / 2, depth + 1) + rec(m, b, right, tol / 2, depth + 1)

    return rec(a, b, whole, tol, 0)


def _parabola_arclen(curve: _Curve, t0: float, t1: float) -> float:
    if t1 <= t0:
        return 0.0
    scale = max(abs(t0), abs(t1), curve.h)
    return _adaptive_simpson(lambda s: math.sqrt(1.0 + (s / curve.h) ** 2),
                             t0, t1, QUAD_TOL * max(scale, 1e-12))


def _piece_length(curve: _Curve, t0: float, t1: float) -> float:
    if curve.kind == "line":
        return abs(t1 - t0)
    return _parabola_arclen(curve, min(t0, t1), max(t0, t1))


def _clip_line_to_box(origin: Point, u: Point, box, margin: float):
    x0, y0, x1, y1 = box
    x0 -= margin; y0 -= margin; x1 += margin; y1 += margin
    tmin, tmax = -math.inf, math.inf
    for o, d, lo, hi in ((origin.x, u.x, x0, x1), (origin.y, u.y, y0, y1)):
        if abs(d) < 1e-15:
            if not (lo <= o <= hi):
                return None
            continue
        ta, tb = (lo - o) / d, (hi - o) / d
        if ta > tb:
            ta, tb = tb, ta
        tmin, tmax = max(tmin, ta), min(tmax, tb)
    if tmin >= tmax:
        return None
    return tmin, tmax


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def medial_axis(poly: Polygon) -> MedialAxisGraph:
    """Medial axis tree of a simple polygon (segments and parabolic arcs)."""
    poly = poly.oriented(ccw=True)
    sites = _build_sites(poly)
    field = _Field(poly, sites)
    scale = max(poly.diameter, 1e-9)
    # validity flips can be tangential (quadratic), so the clip point lands
    # sqrt(tol) past the true node; keep tol barely above float noise
    tol_eq = max(1e-14 * scale, 1e-15)
    tol_dom = tol_eq
    feet_tol = 1e-8 * max(1.0, scale)
    min_piece = 1e-8 * max(1.0, scale)
    box = poly.bounding_box()

    raw: list[AxisEdge] = []
    for i1 in range(len(sites)):
        for i2 in range(i1 + 1, len(sites)):
            if _incident(sites[i1], sites[i2]):
                continue
            for curve in _pair_curves(sites[i1], sites[i2], scale):
                curve.pair = (i1, i2)
                rng = (_clip_line_to_box(curve.origin, curve.u, box, 0.02 * scale)
                       if curve.kind == "line" else (-1.2 * scale, 1.2 * scale))
                if rng is None:
                    continue
                for tl, tr in _clip_candidate(field, curve, i1, i2, rng,
                                              tol_eq, tol_dom, feet_tol):
                    p0, p1 = curve.at(tl), curve.at(tr)
                    if p0.dist(p1) < min_piece and _piece_length(curve, tl, tr) < min_piece:
                        continue
                    kind = "segment" if curve.kind == "line" else "arc"
                    raw.append(AxisEdge(kind, p0, p1,
                                        (sites[i1].descriptor, sites[i2].descriptor),
                                        _piece_length(curve, tl, tr), curve, tl, tr))
    if not raw:
        raise NumericFailure("no medial axis pieces found")

    raw = _split_at_foreign_endpoints(raw, scale)
    return _assemble(poly, field, raw, scale)


def _clip_candidate(field: _Field, curve: _Curve, i1: int, i2: int, rng,
                    tol_eq: float, tol_dom: float, feet_tol: float) -> list[tuple[float, float]]:
    """Parameter intervals of the candidate where the pair dominates.

    The uniform grid is enriched with event parameters (third-site distance
    crossings, foot-clamp roots of the pair's own edge sites, inside/outside
    flips) so that short valid runs are never skipped over.
    """
    ts = np.linspace(rng[0], rng[1], N_SAMPLES)
    pts = curve.at_many(ts)
    D = field.distances(pts)
    d1 = D[:, i1]
    dmin = D.min(axis=1)
    gap = np.abs(ts[1] - ts[0]) if len(ts) > 1 else 0.0
    # pair can only dominate near cells where it is already almost minimal
    speed = np.sqrt(1.0 + (ts / curve.h) ** 2) if curve.kind == "parabola" \
        else np.ones_like(ts)
    near = (d1 - dmin) <= 4.0 * gap * np.maximum(speed, 1.0)
    noise = 1e-12 * max(1.0, float(dmin.max()))
    spd = np.maximum(speed, 1.0)
    cell_slack = 4.0 * gap * np.maximum(spd[:-1], spd[1:])
    near_cell = near[:-1] | near[1:]
    events: list[float] = []
    for i3 in range(D.shape[1]):
        if i3 in (i1, i2):
            continue
        g = d1 - D[:, i3]
        g = np.where(g == 0.0, 1e-300, g)
        cross = (g[:-1] * g[1:] < 0) & near_cell & \
                (np.maximum(np.abs(g[:-1]), np.abs(g[1:])) > noise)
        for k in np.nonzero(cross)[0]:
            # secant estimate is enough: events only seed the sample grid
            events.append(ts[k] - g[k] * (ts[k + 1] - ts[k]) / (g[k + 1] - g[k]))
        # a dip through zero and back inside one cell shows no sign change;
        # subdivide cells where |g| comes close to zero without crossing
        dip = near_cell & ~cross & \
            (np.minimum(np.abs(g[:-1]), np.abs(g[1:])) <= cell_slack)
        for k in np.nonzero(dip)[0]:
            step = ts[k + 1] - ts[k]
            events.extend((ts[k] + 0.25 * step, ts[k] + 0.5 * step, ts[k] + 0.75 * step))
    # foot-clamp releases of every edge site are also validity events: a
    # clamped edge's distance coincides with its endpoint vertex's, so the
    # takeover is invisible to the sign-change scan above
    for s in field.edge_sites:
        events.extend(e for e in _clamp_params(curve, s) if rng[0] < e < rng[1])
    ins = field.inside(pts)
    for k in np.nonzero((ins[:-1] != ins[1:]) & (near[:-1] | near[1:]))[0]:
        events.append(_bisect_bool(
            lambda t: field.inside_one(curve.at(t)), ts[k], ts[k + 1]))
    allp = np.unique(np.concatenate([ts, np.asarray(events, dtype=float)])) \
        if events else ts
    mids = 0.5 * (allp[:-1] + allp[1:])
    okm = field.validity(curve.at_many(mids), i1, i2, tol_eq, tol_dom, feet_tol)
    out: list[tuple[float, float]] = []
    for lo, hi in _runs(okm):
        bad_l = mids[lo - 1] if lo > 0 else allp[0]
        bad_r = mids[hi + 1] if hi + 1 < len(mids) else allp[-1]
        tl = _refine(field, curve, i1, i2, bad_l, mids[lo], tol_eq, tol_dom, feet_tol)
        tr = _refine(field, curve, i1, i2, bad_r, mids[hi], tol_eq, tol_dom, feet_tol)
        out.append((min(tl, tr), max(tl, tr)))
    return out


def _bisect_bool(f, a: float, b: float) -> float:
    fa = f(a)
    for _ in range(30):
        m = 0.5 * (a + b)
        if f(m) == fa:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def _clamp_params(curve: _Curve, site: _EdgeSite) -> list[float]:
    """Curve parameters where the foot on the site's line hits an endpoint."""
    v = site.b - site.a
    v2 = v.dot(v)
    o_off = (curve.origin - site.a).dot(v)
    uv = curve.u.dot(v)
    out: list[float] = []
    if curve.kind == "line":
        if abs(uv) < 1e-15:
            return out
        for target in (0.0, v2):
            out.append((target - o_off) / uv)
        return out
    nv = curve.normal.dot(v)
    # foot offset along the edge: o_off + t*uv + ((t^2 + h^2) / 2h) * nv
    A = nv / (2 * curve.h)
    B = uv
    for target in (0.0, v2):
        C = o_off + curve.h * nv / 2 - target
        if abs(A) < 1e-15:
            if abs(B) > 1e-15:
                out.append(-C / B)
            continue
        disc = B * B - 4 * A * C
        if disc < 0:
            continue
        rt = math.sqrt(disc)
        out.extend(((-B + rt) / (2 * A), (-B - rt) / (2 * A)))
    return out


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    runs = []
    start = None
    for i, v in enumerate(mask):
        if v and start is None:
            start = i
        elif not v and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def _refine(field: _Field, curve: _Curve, i1: int, i2: int,
            t_bad: float, t_good: float, tol_eq, tol_dom, feet_tol) -> float:
    if t_bad == t_good:
        return t_good
    for _ in range(48):
        mid = 0.5 * (t_bad + t_good)
        if field.valid_one(curve.at(mid), i1, i2, tol_eq, tol_dom, feet_tol):
            t_good = mid
        else:
            t_bad = mid
    return t_good


def _split_at_foreign_endpoints(raw: list[AxisEdge], scale: float) -> list[AxisEdge]:
    tol = 1e-6 * max(1.0, scale)
    endpoints = [p for e in raw for p in (e.p0, e.p1)]
    out: list[AxisEdge] = []
    for e in raw:
        cuts = []
        for q in endpoints:
            t = e.curve.param_of(q)
            lo, hi = min(e.t0, e.t1), max(e.t0, e.t1)
            if not (lo + 10 * tol < t < hi - 10 * tol):
                continue
            if e.curve.at(t).dist(q) <= tol:
                cuts.append(t)
        if not cuts:
            out.append(e)
            continue
        params = sorted({round(c, 12) for c in cuts})
        merged = [e.t0]
        for c in (params if e.t0 < e.t1 else reversed(params)):
            if abs(c - merged[-1]) > 10 * tol:
                merged.append(c)
        if abs(merged[-1] - e.t1) <= 10 * tol:
            merged[-1] = e.t1
        else:
            merged.append(e.t1)
        for ta, tb in zip(merged, merged[1:]):
            pa, pb = e.curve.at(ta), e.curve.at(tb)
            out.append(AxisEdge(e.kind, pa, pb, e.sites,
                                _piece_length(e.curve, min(ta, tb), max(ta, tb)),
                                e.curve, ta, tb))
    return out


def _assemble(poly: Polygon, field: _Field, raw: list[AxisEdge],
              scale: float) -> MedialAxisGraph:
    merge_tol = 1e-6 * max(1.0, scale)
    pts: list[Point] = []
    for e in raw:
        pts.extend((e.p0, e.p1))
    uf = _UnionFind(len(pts))
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i].dist(pts[j]) <= merge_tol:
                uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(len(pts)):
        groups.setdefault(uf.find(i), []).append(i)
    node_of: dict[int, int] = {}
    node_points: list[Point] = []
    for root, members in sorted(groups.items()):
        xs = sum(pts[i].x for i in members) / len(members)
        ys = sum(pts[i].y for i in members) / len(members)
        node_of[root] = len(node_points)
        node_points.append(Point(xs, ys))
    kept: list[AxisEdge] = []
    for k, e in enumerate(raw):
        e.n0 = node_of[uf.find(2 * k)]
        e.n1 = node_of[uf.find(2 * k + 1)]
        if e.n0 == e.n1:
            # a micro-piece whose ends merged contracts into its node; a long
            # piece looping back to one node means the merge went wrong
            if e.length > 10 * merge_tol:
                raise NumericFailure(
                    f"axis piece between {e.sites} collapsed to a loop")
            continue
        kept.append(e)
    raw = kept
    # drop nodes orphaned by contracted micro-pieces and renumber
    used = sorted({e.n0 for e in raw} | {e.n1 for e in raw})
    remap = {old: new for new, old in enumerate(used)}
    node_points = [node_points[old] for old in used]
    for e in raw:
        e.n0 = remap[e.n0]
        e.n1 = remap[e.n1]
    # snap leaf nodes onto convex polygon vertices they converge to
    deg = [0] * len(node_points)
    for e in raw:
        deg[e.n0] += 1
        deg[e.n1] += 1
    snap_tol = 1e-4 * max(1.0, scale)
    vs = poly.vertices
    n = len(vs)
    for ni in range(len(node_points)):
        if deg[ni] != 1:
            continue
        for i in range(n):
            if orient(vs[(i - 1) % n], vs[i], vs[(i + 1) % n]) > 0 and \
               node_points[ni].dist(vs[i]) <= snap_tol:
                node_points[ni] = vs[i]
                break
    for e in raw:
        e.p0 = node_points[e.n0]
        e.p1 = node_points[e.n1]
    # tree checks
    if len(raw) != len(node_points) - 1:
        raise NumericFailure(
            f"axis graph is not a tree: {len(node_points)} nodes, {len(raw)} edges")
    seen = {0}
    frontier = [0]
    adj: dict[int, list[int]] = {i: [] for i in range(len(node_points))}
    for e in raw:
        adj[e.n0].append(e.n1)
        adj[e.n1].append(e.n0)
    while frontier:
        u = frontier.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    if len(seen) != len(node_points):
        raise NumericFailure("axis graph is disconnected")
    clear = [min(field.dist_one(p, k) for k in range(len(field.sites)))
             for p in node_points]
    return MedialAxisGraph(polygon=poly, node_points=node_points,
                           node_clearance=clear, edges=raw)


# --------------------------------------------------------------------------
# tree center

def _contract(graph: MedialAxisGraph):
    """Chains between true nodes (degree != 2), with ordered pieces."""
    adj = graph.adjacency()
    deg = {i: len(adj[i]) for i in range(graph.n_nodes)}
    true_nodes = [i for i in range(graph.n_nodes) if deg[i] != 2]
    if not true_nodes:
        raise NumericFailure("medial axis contracted to a cycle")
    chains = []
    used: set[int] = set()
    for start in true_nodes:
        for ei in adj[start]:
            if ei in used:
                continue
            chain_edges = []
            node = start
            edge = ei
            while True:
                used.add(edge)
                e = graph.edges[edge]
                nxt = e.n1 if e.n0 == node else e.n0
                chain_edges.append((edge, node))
                if deg[nxt] != 2:
                    chains.append((start, nxt, chain_edges))
                    break
                edge = next(k for k in adj[nxt] if k != edge)
                node = nxt
    return true_nodes, chains


def _prune_center(true_nodes: list[int], chains: list, order_key=None):
    nodes = set(true_nodes)
    live = list(range(len(chains)))

    def degree(n):
        return sum(1 for ci in live if n in (chains[ci][0], chains[ci][1]))

    while len(nodes) > 2:
        leaves = sorted((n for n in nodes if degree(n) == 1), key=order_key)
        if not leaves:
            raise NumericFailure("leaf pruning stalled (cycle in contracted tree)")
        nodes -= set(leaves)
        live = [ci for ci in live
                if chains[ci][0] not in leaves and chains[ci][1] not in leaves]
    if len(nodes) == 1:
        return ("node", nodes.pop())
    if len(live) != 1:
        raise NumericFailure("central edge is not unique after pruning")
    return ("edge", live[0])


def medial_point(poly: Polygon, graph: MedialAxisGraph | None = None) -> MedialPoint:
    """The unique central point of the polygon's medial axis tree."""
    if graph is None:
        graph = cached_axis(poly)
    true_nodes, chains = _contract(graph)
    res = _prune_center(true_nodes, chains)
    res2 = _prune_center(true_nodes, chains, order_key=lambda n: -n)
    if res != res2:
        raise NumericFailure("pruning is contraction-order dependent")
    if res[0] == "node":
        return MedialPoint(graph.node_points[res[1]], MedialPoint.CENTRAL_NODE)
    start, _end, chain_edges = chains[res[1]]
    total = sum(graph.edges[ei].length for ei, _ in chain_edges)
    target = total / 2
    for ei, entry_node in chain_edges:
        e = graph.edges[ei]
        if target <= e.length + EPS:
            if e.n0 == entry_node:
                return MedialPoint(e.point_at_arc(target), MedialPoint.MIDDLE_OF_CENTRAL_EDGE)
            return MedialPoint(e.point_at_arc(e.length - target),
                               MedialPoint.MIDDLE_OF_CENTRAL_EDGE)
        target -= e.length
    return MedialPoint(graph.edges[chain_edges[-1][0]].p1,
                       MedialPoint.MIDDLE_OF_CENTRAL_EDGE)  # pragma: no cover


def cached_axis(poly: Polygon) -> MedialAxisGraph:
    cached = getattr(poly, "_medial_cache", None)
    if cached is None:
        cached = medial_axis(poly)
        object.__setattr__(poly, "_medial_cache", cached)
    return cached
