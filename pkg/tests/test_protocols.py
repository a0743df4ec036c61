import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rendezvous.geometry import (
    Point,
    Polygon,
    Terrain,
    perimeter_stats,
    polyline_length,
)
from rendezvous.medial import medial_point
from rendezvous.protocols import (
    AgentConfig,
    HasObstacles,
    SameStart,
    build_ring,
    build_route,
    build_rv,
    build_rvc,
    build_rvcm,
    build_rvm,
    build_rvmo,
    build_rvo,
    modified_label,
    ray_progress_phase,
    segment_progress_phase,
)
from rendezvous.visibility import geodesic_distance, segment_in_terrain, unique_path

BIG = Polygon([Point(0, 0), Point(10, 0), Point(10, 10), Point(0, 10)])
CENTER_OBST = Polygon([Point(4, 4), Point(6, 4), Point(6, 6), Point(4, 6)])
TALL_OBST = Polygon([Point(4, 2), Point(6, 2), Point(6, 8), Point(4, 8)])
UNIT = Polygon([Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)])


def test_modified_label_examples():
    assert modified_label(1) == "110"
    assert modified_label(2) == "10100"
    assert modified_label(5) == "1011000"
    assert len(modified_label(5)) == 7


@settings(max_examples=80, deadline=None)
@given(a=st.integers(1, 4096), b=st.integers(1, 4096))
def test_modified_label_suffix_free(a, b):
    if a == b:
        return
    assert not modified_label(a).endswith(modified_label(b))
    assert not modified_label(b).endswith(modified_label(a))


def test_rvcm_basic():
    t = Terrain(UNIT)
    a1 = AgentConfig(start=Point(0.2, 0.2))
    a2 = AgentConfig(start=Point(0.8, 0.8))
    r1 = build_rvcm(a1, a2.start, t)
    r2 = build_rvcm(a2, a1.start, t)
    assert len(r2) == 0                       # northern agent stays inert
    assert abs(r1.total_length - 0.6 * math.sqrt(2)) < 1e-12
    assert r1.end.dist(a2.start) < 1e-12


def test_rvcm_latitude_tie_goes_east():
    t = Terrain(UNIT)
    a1 = AgentConfig(start=Point(0.2, 0.5))
    a2 = AgentConfig(start=Point(0.8, 0.5))
    r1 = build_rvcm(a1, a2.start, t)
    r2 = build_rvcm(a2, a1.start, t)
    assert r1.end.dist(Point(0.8, 0.5)) < 1e-12
    assert len(r2) == 0


def test_rvcm_rotated_compasses_agree():
    t = Terrain(BIG, [TALL_OBST])
    ang = math.radians(30)
    a1 = AgentConfig(start=Point(2, 5), compass=ang)
    a2 = AgentConfig(start=Point(8, 5), compass=ang)
    r1 = build_rvcm(a1, a2.start, t)
    r2 = build_rvcm(a2, a1.start, t)
    movers = [r for r in (r1, r2) if len(r)]
    inert = [r for r in (r1, r2) if not len(r)]
    assert len(movers) == 1 and len(inert) == 1
    # north tilted toward -x: latitude of (2,5) beats (8,5), so agent 2 moves
    assert len(r2) > 0 and len(r1) == 0
    D = geodesic_distance(Point(2, 5), Point(8, 5), t)
    assert abs(movers[0].total_length - D) < 1e-9
    # route equals the canonical path toward the northern agent
    up = unique_path(Point(8, 5), Point(2, 5), t)
    assert [p.as_tuple() for p in movers[0].waypoints] == \
        [p.as_tuple() for p in up.waypoints]


def test_rvcm_same_start_raises():
    with pytest.raises(SameStart):
        build_rvcm(AgentConfig(start=Point(0.5, 0.5)), Point(0.5, 0.5), Terrain(UNIT))


def test_rvm_meets_in_the_middle():
    t = Terrain(UNIT)
    r1 = build_rvm(AgentConfig(start=Point(0.1, 0.1)), Point(0.9, 0.1), t)
    r2 = build_rvm(AgentConfig(start=Point(0.9, 0.1)), Point(0.1, 0.1), t)
    assert r1.end.dist(Point(0.5, 0.1)) < 1e-12
    assert r2.end.dist(Point(0.5, 0.1)) < 1e-12
    assert abs(r1.total_length + r2.total_length - 0.8) < 1e-12


def test_rvm_reflex_midpoint_on_geodesic():
    L = Polygon([Point(0, 0), Point(4, 0), Point(4, 2),
                 Point(2, 2), Point(2, 4), Point(0, 4)])
    t = Terrain(L)
    s1, s2 = Point(3.5, 1.0), Point(1.0, 3.5)
    r1 = build_rvm(AgentConfig(start=s1), s2, t)
    r2 = build_rvm(AgentConfig(start=s2), s1, t)
    D = geodesic_distance(s1, s2, t)
    assert r1.end.dist(r2.end) < 1e-9
    assert abs(r1.total_length + r2.total_length - D) < 1e-9
    assert abs(r1.total_length - D / 2) < 1e-9


def test_rvm_ignores_compass():
    t = Terrain(UNIT)
    r1 = build_rvm(AgentConfig(start=Point(0.1, 0.1), compass=0.0), Point(0.9, 0.3), t)
    r2 = build_rvm(AgentConfig(start=Point(0.1, 0.1), compass=2.1), Point(0.9, 0.3), t)
    assert [p.as_tuple() for p in r1.waypoints] == [p.as_tuple() for p in r2.waypoints]


def test_rvm_rejects_obstacles():
    with pytest.raises(HasObstacles):
        build_rvm(AgentConfig(start=Point(1, 1)), Point(9, 9),
                  Terrain(BIG, [CENTER_OBST]))


def test_ring_embedding_symmetric_instance():
    t = Terrain(BIG, [TALL_OBST])
    ring = build_ring(Point(2, 5), Point(8, 5), t)
    v, a, w, b = ring.nodes
    assert a.dist(Point(5, 2)) < 1e-9           # midpoint of the lower route
    assert b.dist(Point(5, 8)) < 1e-9
    D = geodesic_distance(Point(2, 5), Point(8, 5), t)
    assert abs(ring.length - 2 * D) < 1e-9
    # both agents compute the same oriented cycle
    ring2 = build_ring(Point(8, 5), Point(2, 5), t)
    cyc1 = [p.as_tuple() for p in ring.nodes]
    cyc2 = [p.as_tuple() for p in ring2.nodes]
    assert cyc2 == cyc1[2:] + cyc1[:2]


def test_ring_degenerate_in_empty_polygon():
    t = Terrain(UNIT)
    ring = build_ring(Point(0.2, 0.2), Point(0.8, 0.8), t)
    v, a, w, b = ring.nodes
    assert a.dist(b) < 1e-12
    assert a.dist(Point(0.5, 0.5)) < 1e-12


def test_rvmo_route_length_formula():
    t = Terrain(BIG, [TALL_OBST])
    D = geodesic_distance(Point(2, 5), Point(8, 5), t)
    for label in (1, 2, 5):
        r = build_rvmo(AgentConfig(start=Point(2, 5), label=label), Point(8, 5), t)
        expected = 2 * len(modified_label(label)) * 2 * D
        assert abs(r.total_length - expected) < 1e-6
        assert r.start.dist(Point(2, 5)) < 1e-12
        assert r.end.dist(Point(2, 5)) < 1e-9   # tours return to the start node


def test_ray_progress_walkthrough():
    t = Terrain(BIG, [CENTER_OBST])
    pts, outer_seen, end = ray_progress_phase(Point(5, 1), Point(0, 1), t)
    assert outer_seen
    assert end.dist(Point(5, 10)) < 1e-9
    # ray 3 + obstacle tour 8 + boundary walk 4 + ray 4 + outer tour 40
    assert abs(polyline_length(pts) - 59.0) < 1e-9


def test_ray_progress_empty_polygon_bound():
    t = Terrain(UNIT)
    pts, outer_seen, end = ray_progress_phase(Point(0.3, 0.4), Point(0, 1), t)
    assert outer_seen
    P = t.perimeter
    assert polyline_length(pts) <= 3 * P + 1e-9


def test_ray_progress_graze_continues():
    t = Terrain(BIG, [CENTER_OBST])
    # ray through the corner (4,4) tangentially: obstacle never toured
    pts, outer_seen, end = ray_progress_phase(Point(3, 5), Point(1, -1).unit(), t)
    assert outer_seen
    assert all(CENTER_OBST.boundary_distance(p) > 0.5 for p in pts[:2])
    assert polyline_length(pts) < 48 + 8  # would exceed if the obstacle were toured


def test_rvc_square_with_obstacle():
    t = Terrain(BIG, [CENTER_OBST])
    r = build_rvc(AgentConfig(start=Point(5, 1), compass=0.0, has_map=False), t)
    assert r.end.dist(Point(10, 10)) < 1e-9
    P, _ = perimeter_stats(t)
    assert r.total_length <= 4 * P + 1e-9


def test_rvc_rotated_coherent_compasses_share_target():
    t = Terrain(BIG, [CENTER_OBST])
    ang = math.pi / 2        # north points toward world -x, east toward +y
    r1 = build_rvc(AgentConfig(start=Point(5, 1), compass=ang, has_map=False), t)
    r2 = build_rvc(AgentConfig(start=Point(8, 7), compass=ang, has_map=False), t)
    assert r1.end.dist(r2.end) < 1e-9
    # northernmost = min world-x (left edge), easternmost of those = max y
    assert r1.end.dist(Point(0, 10)) < 1e-9


def test_rvc_empty_square_corner():
    t = Terrain(UNIT)
    for s in (Point(0.3, 0.4), Point(0.7, 0.2)):
        r = build_rvc(AgentConfig(start=s, compass=0.0, has_map=False), t)
        assert r.end.dist(Point(1, 1)) < 1e-9


def test_segment_progress_straight():
    t = Terrain(BIG, [CENTER_OBST])
    pts, reached, blocking = segment_progress_phase(Point(1, 1), Point(3, 1), t)
    assert reached and blocking is None
    assert len(pts) == 2


def test_segment_progress_blocked_inside():
    t = Terrain(BIG, [CENTER_OBST])
    pts, reached, blocking = segment_progress_phase(Point(5, 1), Point(5, 5), t)
    assert not reached and blocking == 1
    assert CENTER_OBST.boundary_distance(pts[-1]) < 1e-9


def test_segment_progress_far_side():
    t = Terrain(BIG, [CENTER_OBST])
    pts, reached, blocking = segment_progress_phase(Point(5, 1), Point(5, 8), t)
    assert reached and blocking is None
    assert pts[-1].dist(Point(5, 8)) < 1e-9


def test_rv_square_center():
    sq = Polygon([Point(-1, -1), Point(1, -1), Point(1, 1), Point(-1, 1)])
    t = Terrain(sq)
    for compass in (0.0, 1.3, 4.4):
        r = build_rv(AgentConfig(start=Point(0.3, -0.2), compass=compass,
                                 has_map=False), t)
        assert r.end.dist(Point(0, 0)) < 1e-9
        assert r.total_length <= 3 * t.perimeter + 1e-9


def test_rv_rectangle_medial_point():
    rect = Polygon([Point(0, 0), Point(4, 0), Point(4, 2), Point(0, 2)])
    t = Terrain(rect)
    r1 = build_rv(AgentConfig(start=Point(1, 0.5), compass=1.1, has_map=False), t)
    r2 = build_rv(AgentConfig(start=Point(3.3, 1.6), compass=3.9, has_map=False), t)
    assert r1.end.dist(Point(2, 1)) < 1e-9
    assert r2.end.dist(Point(2, 1)) < 1e-9


def test_rv_rotated_copy_equivariant():
    rect = Polygon([Point(0, 0), Point(4, 0), Point(4, 2), Point(0, 2)])
    ang, dx, dy = 0.7, 3.0, -2.0

    def R(p):
        return Point(p.x * math.cos(ang) - p.y * math.sin(ang) + dx,
                     p.x * math.sin(ang) + p.y * math.cos(ang) + dy)

    t2 = Terrain(Polygon([R(v) for v in rect.vertices]))
    r = build_rv(AgentConfig(start=R(Point(1, 0.5)), compass=2.2, has_map=False), t2)
    assert r.end.dist(R(Point(2, 1))) < 1e-6


def test_rv_rejects_obstacles():
    with pytest.raises(HasObstacles):
        build_rv(AgentConfig(start=Point(1, 1), has_map=False),
                 Terrain(BIG, [CENTER_OBST]))


def test_rvo_center_obstacle_enters_phase3():
    t = Terrain(BIG, [CENTER_OBST])
    mp = medial_point(t.outer)
    assert CENTER_OBST.contains(mp.point)      # medial point hidden
    a1 = AgentConfig(start=Point(2, 1), label=1, compass=0.3, has_map=False)
    a2 = AgentConfig(start=Point(9, 8), label=2, compass=2.9, has_map=False)
    r1 = build_rvo(a1, t)
    r2 = build_rvo(a2, t)
    for r in (r1, r2):
        assert CENTER_OBST.boundary_distance(r.end) < 1e-9
    P, x = perimeter_stats(t)
    for r, ag in ((r1, a1), (r2, a2)):
        phase3_max = x + 2 * x * len(modified_label(ag.label))
        assert r.total_length <= 6 * P + phase3_max + 1e-6


def test_rvo_phase3_tour_budget():
    t = Terrain(BIG, [CENTER_OBST])
    _, x = perimeter_stats(t)
    for label in (1, 2):
        r = build_rvo(AgentConfig(start=Point(2, 1), label=label,
                                  compass=0.0, has_map=False), t)
        # the tail of the route from first touching the obstacle vertex set
        bits = modified_label(label)
        assert r.total_length >= 2 * x * len(bits)  # tours alone


def test_rvo_free_medial_point_stops_there():
    # obstacle far from the big square's center: both agents stop at the center
    off = Polygon([Point(1, 1), Point(2.2, 1), Point(2.2, 2.2), Point(1, 2.2)])
    t = Terrain(BIG, [off])
    mp = medial_point(t.outer)
    assert not off.contains(mp.point)
    for cfg in (AgentConfig(start=Point(5, 1.5), label=1, compass=0.9, has_map=False),
                AgentConfig(start=Point(8, 8), label=2, compass=4.1, has_map=False)):
        r = build_rvo(cfg, t)
        assert r.end.dist(mp.point) < 1e-9


@pytest.mark.parametrize("algo", ["rvcm", "rvm", "rvmo", "rvc", "rv", "rvo"])
def test_routes_stay_in_terrain(algo):
    from rendezvous.scenarios import random_terrain
    n_obs = 0 if algo in ("rvm", "rv") else 1
    coherent = algo in ("rvcm", "rvc")
    sc = random_terrain(17, outer_vertices=9, n_obstacles=n_obs,
                        algorithm=algo, coherent=coherent)
    r1 = build_route(algo, sc.agent1, sc.agent2.start, sc.terrain)
    r2 = build_route(algo, sc.agent2, sc.agent1.start, sc.terrain)
    for r in (r1, r2):
        for seg in r.segments:
            assert segment_in_terrain(seg.a, seg.b, sc.terrain)
