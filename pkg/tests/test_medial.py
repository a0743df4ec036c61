import math
import random

import pytest

from rendezvous.geometry import Point, Polygon, Terrain, classify_point
from rendezvous.medial import (
    EPS_MED,
    MedialPoint,
    NumericFailure,
    medial_axis,
    medial_point,
)

from oracles import ridge_points, two_nearest_boundary_feet

SQUARE2 = Polygon([Point(-1, -1), Point(1, -1), Point(1, 1), Point(-1, 1)])
RECT = Polygon([Point(0, 0), Point(4, 0), Point(4, 2), Point(0, 2)])
LSHAPE = Polygon([Point(0, 0), Point(4, 0), Point(4, 2),
                  Point(2, 2), Point(2, 4), Point(0, 4)])


def ring_of(poly):
    return [(v.x, v.y) for v in poly.oriented(ccw=True).vertices]


def test_square_axis_and_center():
    g = medial_axis(SQUARE2)
    # four diagonal segments meeting at the center
    assert len(g.edges) == 4
    assert all(e.kind == "segment" for e in g.edges)
    degrees = {}
    for e in g.edges:
        degrees[e.n0] = degrees.get(e.n0, 0) + 1
        degrees[e.n1] = degrees.get(e.n1, 0) + 1
    centers = [n for n, d in degrees.items() if d == 4]
    assert len(centers) == 1
    assert g.node_points[centers[0]].dist(Point(0, 0)) < 1e-9
    mp = medial_point(SQUARE2, g)
    assert mp.provenance == MedialPoint.CENTRAL_NODE
    assert mp.point.dist(Point(0, 0)) < 1e-9


def test_rectangle_spine_and_midpoint():
    g = medial_axis(RECT)
    # four corner diagonals plus the horizontal spine
    assert len(g.edges) == 5
    spine = [e for e in g.edges
             if abs(e.p0.y - 1) < 1e-9 and abs(e.p1.y - 1) < 1e-9]
    assert len(spine) == 1
    ends = sorted([spine[0].p0.x, spine[0].p1.x])
    assert abs(ends[0] - 1) < 1e-9 and abs(ends[1] - 3) < 1e-9
    mp = medial_point(RECT, g)
    assert mp.provenance == MedialPoint.MIDDLE_OF_CENTRAL_EDGE
    assert mp.point.dist(Point(2, 1)) < 1e-9


def test_equilateral_triangle_incenter():
    tri = Polygon([Point(0, 0), Point(2, 0), Point(1, math.sqrt(3))])
    mp = medial_point(tri)
    assert mp.provenance == MedialPoint.CENTRAL_NODE
    assert mp.point.dist(Point(1, 1 / math.sqrt(3))) < 1e-9


def test_lshape_has_parabolic_arc():
    g = medial_axis(LSHAPE)
    kinds = {e.kind for e in g.edges}
    assert "arc" in kinds
    arcs = [e for e in g.edges if e.kind == "arc"]
    # arcs pair the reflex vertex with a far edge
    assert all(any(s.startswith("vertex:") for s in e.sites) for e in arcs)


def test_lshape_axis_matches_grid_oracle():
    g = medial_axis(LSHAPE)
    ring = ring_of(LSHAPE)
    # every sampled axis point has two nearly-equal distinct nearest boundary
    # points per the dense-sampling oracle
    for e in g.edges:
        for p in e.sample(12)[1:-1]:
            d1, q1, d2, q2 = two_nearest_boundary_feet((p.x, p.y), ring)
            assert abs(d1 - d2) <= 5e-3        # oracle resolution limited
    # every oracle ridge point lies near some axis edge
    import numpy as np
    ridge, h = ridge_points(ring, grid_n=160)
    assert len(ridge) > 20
    samples = np.array([[q.x, q.y] for e in g.edges for q in e.sample(80)])
    R = np.array(ridge)
    d = np.sqrt(((R[:, None, :] - samples[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
    assert float(d.max()) <= 3 * h


def test_axis_equidistance_invariant():
    for poly in (SQUARE2, RECT, LSHAPE):
        g = medial_axis(poly)
        from rendezvous.medial import _Field, _build_sites
        ccw = poly.oriented(ccw=True)
        field = _Field(ccw, _build_sites(ccw))
        for e in g.edges:
            for p in e.sample(100)[1:-1]:
                ds = sorted(field.dist_one(p, k) for k in range(len(field.sites)))
                assert abs(ds[0] - ds[1]) <= EPS_MED
                assert ds[0] >= EPS_MED or min(p.dist(v) for v in ccw.vertices) < 1e-4


def test_axis_is_a_tree():
    for poly in (SQUARE2, RECT, LSHAPE):
        g = medial_axis(poly)
        assert len(g.edges) == g.n_nodes - 1


def test_medial_point_strictly_inside():
    for poly in (SQUARE2, RECT, LSHAPE):
        mp = medial_point(poly)
        t = Terrain(poly)
        assert classify_point(mp.point, t).is_interior


def star(seed, n=9, R=5.0):
    rnd = random.Random(seed)
    pts = []
    for i in range(n):
        a = 2 * math.pi * i / n + rnd.uniform(-0.25, 0.25) * 2 * math.pi / n
        r = R * rnd.uniform(0.45, 1.0)
        pts.append(Point(r * math.cos(a), r * math.sin(a)))
    return Polygon(pts)


@pytest.mark.parametrize("seed", [2, 11, 23])
def test_rigid_motion_equivariance(seed):
    poly = star(seed)
    mp = medial_point(poly)
    rnd = random.Random(seed + 1000)
    for _ in range(4):
        ang = rnd.uniform(0, 2 * math.pi)
        dx, dy = rnd.uniform(-4, 4), rnd.uniform(-4, 4)

        def R(p):
            return Point(p.x * math.cos(ang) - p.y * math.sin(ang) + dx,
                         p.x * math.sin(ang) + p.y * math.cos(ang) + dy)

        moved = Polygon([R(v) for v in poly.vertices])
        mp2 = medial_point(moved)
        assert mp2.point.dist(R(mp.point)) < 1e-6
        assert mp2.provenance == mp.provenance


def test_leaves_at_convex_vertices():
    for poly in (SQUARE2, RECT):
        g = medial_axis(poly)
        deg = {}
        for e in g.edges:
            deg[e.n0] = deg.get(e.n0, 0) + 1
            deg[e.n1] = deg.get(e.n1, 0) + 1
        leaves = [g.node_points[n] for n, d in deg.items() if d == 1]
        for leaf in leaves:
            assert min(leaf.dist(v) for v in poly.vertices) < 1e-9


def test_near_degenerate_raises_cleanly():
    # four sites almost cocircular at machine-indistinguishable radii can
    # fail to assemble; the failure must be the documented NumericFailure
    rnd = random.Random(33)
    bad = None
    for seed in range(100):
        try:
            p = star(seed, n=13)
            medial_axis(p)
        except NumericFailure:
            bad = seed
            break
        except Exception as e:  # pragma: no cover
            pytest.fail(f"unexpected {type(e).__name__}: {e}")
    # sampling found at least one pathological polygon in this family before;
    # if none fails any more the construction only got stronger
    assert bad is None or bad >= 0
