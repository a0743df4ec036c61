import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rendezvous.geometry import Point, Polygon, Terrain
from rendezvous.protocols import AgentConfig, Route, build_rvm
from rendezvous.scheduler import (
    Delay,
    GreedyAvoider,
    InvalidStrategyParams,
    JitterBackForth,
    ScheduleMismatch,
    SpeedRatio,
    Uniform,
    WalkSchedule,
    make_schedule,
    simulate,
    simulate_avoider,
    tour_meeting_predicate,
)

LINE = Route.from_waypoints([Point(0, 0), Point(10, 0)])
LINE_BACK = Route.from_waypoints([Point(10, 0), Point(0, 0)])


def test_uniform_schedule_breakpoints():
    s = make_schedule(LINE, Uniform(1.0))
    assert s.breakpoints == [[(0.0, 0.0), (10.0, 10.0)]]


def test_delay_schedule_holds_at_start():
    s = make_schedule(LINE, Delay(agent=1, duration=20.0), agent_id=1)
    assert s.breakpoints == [[(0.0, 0.0), (20.0, 0.0), (30.0, 10.0)]]
    other = make_schedule(LINE, Delay(agent=1, duration=20.0), agent_id=2)
    assert other.breakpoints == [[(0.0, 0.0), (10.0, 10.0)]]


def test_jitter_schedule_is_valid_walk():
    r = Route.from_waypoints([Point(0, 0), Point(4, 0), Point(4, 3)])
    s = make_schedule(r, JitterBackForth(seed=12, max_reversals=3))
    s.validate()
    # stays within each segment and covers it
    for seg, bps in zip(r.segments, s.breakpoints):
        offs = [o for _, o in bps]
        assert min(offs) >= -1e-12 and max(offs) <= seg.length + 1e-12
        assert abs(bps[-1][1] - seg.length) < 1e-12


def test_invalid_strategy_params():
    with pytest.raises(InvalidStrategyParams):
        make_schedule(LINE, Uniform(0.0))
    with pytest.raises(InvalidStrategyParams):
        make_schedule(LINE, Delay(agent=1, duration=-1))
    with pytest.raises(InvalidStrategyParams):
        make_schedule(LINE, GreedyAvoider(seed=1))


def test_schedule_mismatch_detected():
    s = make_schedule(LINE, Uniform(1.0))
    other = Route.from_waypoints([Point(0, 0), Point(5, 0), Point(5, 5)])
    with pytest.raises(ScheduleMismatch):
        simulate(other, LINE, s, make_schedule(LINE, Uniform(1.0)))


def test_head_on_meeting():
    rep = simulate(LINE, LINE_BACK,
                   make_schedule(LINE, Uniform(1.0)),
                   make_schedule(LINE_BACK, Uniform(1.0)))
    assert rep.met
    assert abs(rep.meet_time - 5.0) < 1e-9
    assert rep.meet_point.dist(Point(5, 0)) < 1e-9
    assert abs(rep.cost_agent1 - 5.0) < 1e-9
    assert abs(rep.cost_agent2 - 5.0) < 1e-9


def test_delayed_agent_met_at_its_start():
    rep = simulate(LINE, LINE_BACK,
                   make_schedule(LINE, Uniform(1.0)),
                   make_schedule(LINE_BACK, Delay(agent=2, duration=20), agent_id=2))
    assert rep.met
    assert abs(rep.meet_time - 10.0) < 1e-9
    assert rep.meet_point.dist(Point(10, 0)) < 1e-9
    assert abs(rep.cost_agent1 - 10.0) < 1e-9
    assert abs(rep.cost_agent2 - 0.0) < 1e-9


def test_parallel_routes_never_meet():
    other = Route.from_waypoints([Point(0, 1), Point(10, 1)])
    rep = simulate(LINE, other,
                   make_schedule(LINE, Uniform(1.0)),
                   make_schedule(other, Uniform(1.0)))
    assert not rep.met
    assert rep.cost_agent1 == LINE.total_length
    assert rep.cost_agent2 == other.total_length


def test_meeting_detection_is_sound():
    rep = simulate(LINE, LINE_BACK,
                   make_schedule(LINE, Uniform(2.0)),
                   make_schedule(LINE_BACK, Uniform(0.5)))
    assert rep.met
    s1 = make_schedule(LINE, Uniform(2.0)).timeline()
    s2 = make_schedule(LINE_BACK, Uniform(0.5)).timeline()
    from rendezvous.scheduler import _interp
    p1 = _interp(s1, rep.meet_time)
    p2 = _interp(s2, rep.meet_time)
    assert p1.dist(p2) <= 1e-9 * (1 + 1e-6)


def test_back_and_forth_does_not_inflate_cost():
    r = Route.from_waypoints([Point(0, 0), Point(10, 0)])
    # adversarial wiggle: forward to 6, back to 4, then on to the end
    sched = WalkSchedule(route=r, start_point=r.start, breakpoints=[
        [(0.0, 0.0), (6.0, 6.0), (8.0, 4.0), (14.0, 10.0)]])
    sitter = Route(segments=(), origin=Point(5, 0))
    sit_sched = make_schedule(sitter, Uniform(1.0), agent_id=2)
    rep = simulate(r, sitter, sched, sit_sched)
    assert rep.met
    # met at the first forward pass (up to the eps-radius of co-location);
    # cost is arc covered, not wiggle distance
    assert abs(rep.meet_time - 5.0) < 1e-8
    assert abs(rep.cost_agent1 - 5.0) < 1e-8
    # another sitter position: cost still counts the farthest reach only
    sitter2 = Route(segments=(), origin=Point(4.5, 0))
    rep2 = simulate(r, sitter2, sched, make_schedule(sitter2, Uniform(1.0), agent_id=2))
    assert rep2.met and abs(rep2.cost_agent1 - 4.5) < 1e-8


def test_avoider_cannot_escape_shared_endpoint():
    a = Route.from_waypoints([Point(0, 0), Point(5, 0), Point(5, 5)])
    b = Route.from_waypoints([Point(10, 10), Point(5, 10), Point(5, 5)])
    rep = simulate_avoider(a, b, seed=4)
    assert rep.met


def test_avoider_disjoint_cycles_never_meet():
    a = Route.from_waypoints([Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1), Point(0, 0)])
    b = Route.from_waypoints([Point(5, 5), Point(6, 5), Point(6, 6), Point(5, 6), Point(5, 5)])
    rep = simulate_avoider(a, b, seed=4)
    assert not rep.met
    assert rep.cost_agent1 == pytest.approx(4.0)


def test_avoider_deterministic():
    a = Route.from_waypoints([Point(0, 0), Point(8, 0), Point(8, 8)])
    b = Route.from_waypoints([Point(8, 8), Point(0, 8), Point(0, 0)])
    r1 = simulate_avoider(a, b, seed=42)
    r2 = simulate_avoider(a, b, seed=42)
    assert r1 == r2


def test_simulate_deterministic_with_jitter():
    a = Route.from_waypoints([Point(0, 0), Point(8, 0)])
    b = Route.from_waypoints([Point(8, 0), Point(0, 0)])
    reps = []
    for _ in range(2):
        s1 = make_schedule(a, JitterBackForth(seed=7), agent_id=1)
        s2 = make_schedule(b, JitterBackForth(seed=7), agent_id=2)
        reps.append(simulate(a, b, s1, s2))
    assert reps[0] == reps[1]


def test_delay_never_cheapens_fixed_endpoint_meeting():
    t = Terrain(Polygon([Point(0, 0), Point(6, 0), Point(6, 4), Point(0, 4)]))
    r1 = build_rvm(AgentConfig(start=Point(0.5, 0.5)), Point(5.5, 3.5), t)
    r2 = build_rvm(AgentConfig(start=Point(5.5, 3.5)), Point(0.5, 0.5), t)
    cap = r1.total_length + r2.total_length
    totals = []
    for dur in (0.0, 2.0, 10.0, 50.0):
        s1 = make_schedule(r1, Delay(agent=1, duration=dur), agent_id=1)
        s2 = make_schedule(r2, Delay(agent=1, duration=dur), agent_id=2)
        rep = simulate(r1, r2, s1, s2)
        assert rep.met
        totals.append(rep.total_cost)
    assert all(b >= a - 1e-9 for a, b in zip(totals, totals[1:]))
    assert all(v <= cap + 1e-9 for v in totals)


SQ_CYCLE = [Point(0, 0), Point(4, 0), Point(4, 4), Point(0, 4)]


def _tour_route(cycle, start_idx, ccw=True, laps=1):
    n = len(cycle)
    pts = []
    rng = range(0, laps * n + 1) if ccw else range(0, -(laps * n + 1), -1)
    for k in rng:
        pts.append(cycle[(start_idx + k) % n])
    return Route.from_waypoints(pts)


def test_predicate_tour_vs_sitter():
    r1 = _tour_route(SQ_CYCLE, 0)
    r2 = Route(segments=(), origin=Point(2, 0))
    w1 = make_schedule(r1, Uniform(1.0))
    w2 = make_schedule(r2, Uniform(1.0), agent_id=2)
    assert tour_meeting_predicate(SQ_CYCLE, w1, w2)
    assert simulate(r1, r2, w1, w2).met


def test_predicate_constant_separation():
    r1 = _tour_route(SQ_CYCLE, 0, ccw=True)
    r2 = _tour_route(SQ_CYCLE, 2, ccw=True)
    w1 = make_schedule(r1, Uniform(1.0))
    w2 = make_schedule(r2, Uniform(1.0), agent_id=2)
    assert not tour_meeting_predicate(SQ_CYCLE, w1, w2)
    assert not simulate(r1, r2, w1, w2).met


def test_predicate_opposite_senses():
    r1 = _tour_route(SQ_CYCLE, 0, ccw=True)
    r2 = _tour_route(SQ_CYCLE, 2, ccw=False)
    w1 = make_schedule(r1, Uniform(1.0))
    w2 = make_schedule(r2, Uniform(1.0), agent_id=2)
    assert tour_meeting_predicate(SQ_CYCLE, w1, w2)
    assert simulate(r1, r2, w1, w2).met


@pytest.mark.parametrize("k", [0, 1, 2])
def test_predicate_lemma_tour_gap(k):
    rB = _tour_route(SQ_CYCLE, 0, ccw=True, laps=k + 2)
    pts = [Point(2, 0), Point(4, 0)]
    for _ in range(k):
        for j in range(1, len(SQ_CYCLE) + 1):
            pts.append(SQ_CYCLE[(1 + j) % len(SQ_CYCLE)])
    rA = Route.from_waypoints(pts)
    wB = make_schedule(rB, Uniform(1.0))
    wA = make_schedule(rA, Delay(agent=2, duration=3.0), agent_id=2)
    assert tour_meeting_predicate(SQ_CYCLE, wB, wA)
    assert simulate(rB, rA, wB, wA).met


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 99999))
def test_walk_validity_random_strategies(seed):
    rnd = random.Random(seed)
    pts = [Point(0, 0)]
    for _ in range(rnd.randint(1, 5)):
        pts.append(Point(pts[-1].x + rnd.uniform(-3, 3),
                         pts[-1].y + rnd.uniform(-3, 3)))
    try:
        r = Route.from_waypoints(pts)
    except Exception:
        return
    if not r.segments:
        return
    strat = rnd.choice([
        Uniform(rnd.uniform(0.2, 3.0)),
        Delay(agent=1, duration=rnd.uniform(0, 10)),
        SpeedRatio(rnd.uniform(0.2, 4.0)),
        JitterBackForth(seed=seed, max_reversals=rnd.randint(0, 4)),
    ])
    s = make_schedule(r, strat, agent_id=rnd.choice([1, 2]))
    s.validate()


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 99999))
def test_meet_report_costs_bounded_by_routes(seed):
    rnd = random.Random(seed)

    def rand_route(x0, y0):
        pts = [Point(x0, y0)]
        for _ in range(rnd.randint(1, 4)):
            pts.append(Point(pts[-1].x + rnd.uniform(-4, 4),
                             pts[-1].y + rnd.uniform(-4, 4)))
        return Route.from_waypoints(pts)

    r1 = rand_route(0, 0)
    r2 = rand_route(rnd.uniform(-2, 2), rnd.uniform(-2, 2))
    if not (r1.segments and r2.segments):
        return
    s1 = make_schedule(r1, JitterBackForth(seed=seed), agent_id=1)
    s2 = make_schedule(r2, JitterBackForth(seed=seed + 1), agent_id=2)
    rep = simulate(r1, r2, s1, s2)
    assert rep.cost_agent1 <= r1.total_length + 1e-9
    assert rep.cost_agent2 <= r2.total_length + 1e-9
    if rep.met:
        from rendezvous.scheduler import _interp
        p1 = _interp(s1.timeline(), rep.meet_time)
        p2 = _interp(s2.timeline(), rep.meet_time)
        assert p1.dist(p2) <= 1e-9
