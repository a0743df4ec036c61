"""The asynchronous adversary: walks over routes, meeting detection, cost.

A walk parameterizes a route segment by segment: within segment i the agent
may stop or move back and forth, but must stay on the segment and reach its
far end before the next segment starts.  All walks here are piecewise linear
in time, which keeps co-location detection exact: within any cell of the
merged timeline both positions are linear, so the squared distance is a
quadratic whose minimum is solved in closed form.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .geometry import EPS, Point
from .protocols import Route

EPS_MEET = 1e-9


class ScheduleError(Exception):
    pass


class InvalidStrategyParams(ScheduleError):
    pass


class ScheduleMismatch(ScheduleError):
    pass


class WalkOffCycle(ScheduleError):
    pass


@dataclass(frozen=True)
class Uniform:
    speed: float = 1.0


@dataclass(frozen=True)
class Delay:
    agent: int                # 1 or 2: which agent is held at its start
    duration: float
    speed: float = 1.0


@dataclass(frozen=True)
class SpeedRatio:
    ratio: float              # agent 2 moves at `ratio`, agent 1 at 1


@dataclass(frozen=True)
class JitterBackForth:
    seed: int
    max_reversals: int = 3
    speed: float = 1.0


@dataclass(frozen=True)
class GreedyAvoider:
    seed: int
    step: float | None = None


AdversaryStrategy = Uniform | Delay | SpeedRatio | JitterBackForth | GreedyAvoider


@dataclass
class WalkSchedule:
    """Per-segment time breakpoints (time, offset-along-segment)."""

    route: Route
    breakpoints: list[list[tuple[float, float]]]
    start_point: Point

    @property
    def end_time(self) -> float:
        if not self.breakpoints:
            return 0.0
        return self.breakpoints[-1][-1][0]

    def timeline(self) -> list[tuple[float, Point]]:
        """Global (time, position) breakpoints, continuous across segments."""
        if not self.breakpoints:
            return [(0.0, self.start_point)]
        out: list[tuple[float, Point]] = []
        for seg, bps in zip(self.route.segments, self.breakpoints):
            d = seg.direction()
            for t, s in bps:
                p = Point(seg.a.x + s * d.x, seg.a.y + s * d.y)
                if out and abs(out[-1][0] - t) <= 0.0:
                    continue
                out.append((t, p))
        return out

    def validate(self) -> None:
        if len(self.breakpoints) != len(self.route.segments):
            raise ScheduleMismatch(
                f"{len(self.breakpoints)} segment walks for "
                f"{len(self.route.segments)} route segments")
        t_prev = None
        for seg, bps in zip(self.route.segments, self.breakpoints):
            L = seg.length
            if len(bps) < 2:
                raise ScheduleMismatch("segment walk needs >= 2 breakpoints")
            if abs(bps[0][1]) > EPS or abs(bps[-1][1] - L) > EPS:
                raise ScheduleMismatch("segment walk must run from 0 to its length")
            if t_prev is not None and abs(bps[0][0] - t_prev) > EPS:
                raise ScheduleMismatch("segment walks must chain in time")
            for (t0, s0), (t1, s1) in zip(bps, bps[1:]):
                if t1 <= t0:
                    raise ScheduleMismatch("breakpoint times must strictly increase")
                if s1 < -EPS or s1 > L + EPS:
                    raise ScheduleMismatch("walk leaves its segment")
            t_prev = bps[-1][0]


@dataclass(frozen=True)
class MeetReport:
    met: bool
    meet_time: float | None
    meet_point: Point | None
    cost_agent1: float
    cost_agent2: float

    @property
    def total_cost(self) -> float:
        return self.cost_agent1 + self.cost_agent2

    def to_jsonable(self) -> dict:
        return {
            "met": self.met,
            "meet_time": self.meet_time,
            "meet_point": ([self.meet_point.x, self.meet_point.y]
                           if self.meet_point else None),
            "cost_agent1": self.cost_agent1,
            "cost_agent2": self.cost_agent2,
            "total_cost": self.total_cost,
        }


def make_schedule(route: Route, strategy: AdversaryStrategy,
                  horizon: float | None = None, agent_id: int = 1) -> WalkSchedule:
    """Build a valid walk for one route under the given adversary strategy."""
    start = route.start
    if isinstance(strategy, GreedyAvoider):
        raise InvalidStrategyParams("GreedyAvoider schedules are co-simulated; "
                                    "use simulate_avoider")
    if isinstance(strategy, Uniform):
        if strategy.speed <= 0:
            raise InvalidStrategyParams("speed must be positive")
        return _uniform(route, strategy.speed, 0.0)
    if isinstance(strategy, SpeedRatio):
        if strategy.ratio <= 0:
            raise InvalidStrategyParams("ratio must be positive")
        speed = strategy.ratio if agent_id == 2 else 1.0
        return _uniform(route, speed, 0.0)
    if isinstance(strategy, Delay):
        if strategy.duration < 0 or strategy.speed <= 0:
            raise InvalidStrategyParams("bad delay parameters")
        hold = strategy.duration if agent_id == strategy.agent else 0.0
        return _uniform(route, strategy.speed, hold)
    if isinstance(strategy, JitterBackForth):
        if strategy.max_reversals < 0:
            raise InvalidStrategyParams("max_reversals must be >= 0")
        return _jitter(route, strategy, agent_id)
    raise InvalidStrategyParams(f"unknown strategy {strategy!r}")


def _uniform(route: Route, speed: float, hold: float) -> WalkSchedule:
    bps: list[list[tuple[float, float]]] = []
    t = 0.0
    for i, seg in enumerate(route.segments):
        L = seg.length
        cur = [(t, 0.0)]
        if i == 0 and hold > 0:
            t += hold
            cur.append((t, 0.0))
        t += L / speed
        cur.append((t, L))
        bps.append(cur)
    return WalkSchedule(route=route, breakpoints=bps, start_point=route.start)


def _jitter(route: Route, strategy: JitterBackForth, agent_id: int) -> WalkSchedule:
    rng = random.Random(f"jitter:{strategy.seed}:{agent_id}")
    speed = strategy.speed
    bps: list[list[tuple[float, float]]] = []
    t = 0.0
    for seg in route.segments:
        L = seg.length
        cur = [(t, 0.0)]
        pos = 0.0
        for _ in range(rng.randint(0, strategy.max_reversals)):
            fwd = rng.uniform(pos, L)
            back = rng.uniform(0.0, fwd)
            for target in (fwd, back):
                if abs(target - pos) <= EPS:
                    continue
                t += abs(target - pos) / speed
                cur.append((t, target))
                pos = target
        if abs(L - pos) > EPS or len(cur) == 1:
            t += max(abs(L - pos), EPS) / speed
            cur.append((t, L))
        bps.append(cur)
    return WalkSchedule(route=route, breakpoints=bps, start_point=route.start)


# ---------------------------------------------------------------------------
# exact co-location scan

def _interp(timeline: list[tuple[float, Point]], t: float) -> Point:
    if t <= timeline[0][0]:
        return timeline[0][1]
    if t >= timeline[-1][0]:
        return timeline[-1][1]
    lo, hi = 0, len(timeline) - 1
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if timeline[mid][0] <= t:
            lo = mid
        else:
            hi = mid
    t0, p0 = timeline[lo]
    t1, p1 = timeline[lo + 1]
    u = (t - t0) / (t1 - t0)
    return Point(p0.x + u * (p1.x - p0.x), p0.y + u * (p1.y - p0.y))


def _earliest_meet_in_cell(a0: Point, a1: Point, b0: Point, b1: Point,
                           t0: float, t1: float) -> float | None:
    """Earliest t in [t0, t1] with |A(t)-B(t)| <= EPS_MEET, both linear."""
    px, py = a0.x - b0.x, a0.y - b0.y
    vx = (a1.x - b1.x) - px
    vy = (a1.y - b1.y) - py
    c = px * px + py * py
    eps2 = EPS_MEET * EPS_MEET
    if c <= eps2:
        return t0
    a = vx * vx + vy * vy
    b = 2 * (px * vx + py * vy)
    if a <= 0.0:
        return None
    # disc = b^2 - 4a(c - eps^2) = 4(a*eps^2 - (p x v)^2); the direct form
    # cancels catastrophically when the paths pass exactly through each other
    cross = px * vy - py * vx
    disc4 = a * eps2 - cross * cross
    if disc4 < 0:
        return None
    u = (-b - 2 * math.sqrt(disc4)) / (2 * a)  # first time the gap closes to eps
    if -1e-12 <= u <= 1 + 1e-12:
        return t0 + min(max(u, 0.0), 1.0) * (t1 - t0)
    return None


def simulate(route1: Route, route2: Route,
             sched1: WalkSchedule, sched2: WalkSchedule) -> MeetReport:
    """Scan the merged timeline for the earliest co-location."""
    if sched1.route is not route1:
        sched1 = WalkSchedule(route1, sched1.breakpoints, sched1.start_point)
    if sched2.route is not route2:
        sched2 = WalkSchedule(route2, sched2.breakpoints, sched2.start_point)
    sched1.validate()
    sched2.validate()
    tl1 = sched1.timeline()
    tl2 = sched2.timeline()
    t_end = max(tl1[-1][0], tl2[-1][0], 1.0)
    times = sorted({t for t, _ in tl1} | {t for t, _ in tl2} | {t_end})
    meet_t: float | None = None
    for t0, t1 in zip(times, times[1:]):
        a0, a1 = _interp(tl1, t0), _interp(tl1, t1)
        b0, b1 = _interp(tl2, t0), _interp(tl2, t1)
        hit = _earliest_meet_in_cell(a0, a1, b0, b1, t0, t1)
        if hit is not None:
            meet_t = hit
            break
    if meet_t is None:
        # final positions might coincide exactly at the very end
        pa, pb = tl1[-1][1], tl2[-1][1]
        if pa.dist(pb) <= EPS_MEET:
            meet_t = t_end
    if meet_t is None:
        return MeetReport(met=False, meet_time=None, meet_point=None,
                          cost_agent1=route1.total_length,
                          cost_agent2=route2.total_length)
    pa = _interp(tl1, meet_t)
    pb = _interp(tl2, meet_t)
    meet_point = Point((pa.x + pb.x) / 2, (pa.y + pb.y) / 2)
    return MeetReport(met=True, meet_time=meet_t, meet_point=meet_point,
                      cost_agent1=_covered_cost(sched1, meet_t),
                      cost_agent2=_covered_cost(sched2, meet_t))


def _covered_cost(sched: WalkSchedule, t_stop: float) -> float:
    """Route arc length covered by t_stop: full prior segments plus the
    farthest offset reached within the segment active at t_stop."""
    total = 0.0
    for seg, bps in zip(sched.route.segments, sched.breakpoints):
        t_seg_end = bps[-1][0]
        if t_seg_end <= t_stop:
            total += seg.length
            continue
        best = 0.0
        for (t0, s0), (t1, s1) in zip(bps, bps[1:]):
            if t0 > t_stop:
                break
            if t1 <= t_stop:
                best = max(best, s0, s1)
            else:
                u = (t_stop - t0) / (t1 - t0)
                best = max(best, s0, s0 + u * (s1 - s0))
        total += min(best, seg.length)
        break
    return total


# ---------------------------------------------------------------------------
# greedy adversarial avoider

def simulate_avoider(route1: Route, route2: Route, seed: int,
                     step: float | None = None) -> MeetReport:
    """Co-simulate both agents under a distance-maximizing greedy adversary.

    Each epoch the adversary picks, per agent, a speed in {0, 1/2, 1, 2}
    (times base) and a direction (in-segment reversal allowed) maximizing the
    minimum predicted separation, subject to a per-segment completion
    deadline so walks stay valid.  The resulting walks feed the exact
    simulator.
    """
    if step is not None and step <= 0:
        raise InvalidStrategyParams("step must be positive")
    rng = random.Random(seed)
    base = 1.0
    deadline_mult = 16.0
    budget = max(route1.total_length, route2.total_length, 1.0) * deadline_mult / base
    if step is None:
        step = budget / 1500.0

    states = [_AvoiderState(route1, base, deadline_mult),
              _AvoiderState(route2, base, deadline_mult)]
    t = 0.0
    guard = 0
    while not (states[0].done and states[1].done):
        guard += 1
        if guard > 200000:
            raise ScheduleError("avoider failed to terminate")  # pragma: no cover
        for me, other in ((0, 1), (1, 0)):
            st = states[me]
            if st.done:
                st.velocity = 0.0
                continue
            cands = st.candidate_velocities(t, step)
            if len(cands) > 1:
                rng.shuffle(cands)
                p_me0 = st.position()
                p_ot0 = states[other].position()
                p_ot1 = states[other].predicted(step)
                best, best_d = None, -1.0
                for v in cands:
                    p_me1 = st.predicted_with(v, step)
                    d = _min_separation(p_me0, p_me1, p_ot0, p_ot1)
                    if d > best_d + 1e-12:
                        best, best_d = v, d
                st.velocity = best
            else:
                st.velocity = cands[0]
        for st in states:
            st.advance(t, step)
        t += step
    bps1 = states[0].finish()
    bps2 = states[1].finish()
    s1 = WalkSchedule(route=route1, breakpoints=bps1, start_point=route1.start)
    s2 = WalkSchedule(route=route2, breakpoints=bps2, start_point=route2.start)
    return simulate(route1, route2, s1, s2)


def _min_separation(a0: Point, a1: Point, b0: Point, b1: Point) -> float:
    px, py = a0.x - b0.x, a0.y - b0.y
    vx = (a1.x - b1.x) - px
    vy = (a1.y - b1.y) - py
    a = vx * vx + vy * vy
    if a <= 0:
        return math.hypot(px, py)
    u = max(0.0, min(1.0, -(px * vx + py * vy) / a))
    return math.hypot(px + u * vx, py + u * vy)


class _AvoiderState:
    def __init__(self, route: Route, base: float, deadline_mult: float):
        self.route = route
        self.base = base
        self.deadline_mult = deadline_mult
        self.seg_idx = 0
        self.offset = 0.0
        self.velocity = 0.0
        self.seg_entry_time = 0.0
        self.bps: list[list[tuple[float, float]]] = \
            [[(0.0, 0.0)]] if route.segments else []
        self.done = not route.segments

    def position(self) -> Point:
        if self.done:
            return self.route.end if self.route.segments else self.route.start
        seg = self.route.segments[self.seg_idx]
        d = seg.direction()
        return Point(seg.a.x + self.offset * d.x, seg.a.y + self.offset * d.y)

    def _deadline(self) -> float:
        seg = self.route.segments[self.seg_idx]
        return self.seg_entry_time + self.deadline_mult * seg.length / self.base

    def candidate_velocities(self, t: float, step: float) -> list[float]:
        if self.done:
            return [0.0]
        seg = self.route.segments[self.seg_idx]
        remaining = seg.length - self.offset
        slack = self._deadline() - t
        # must the agent sprint to make the deadline?
        if slack - step <= remaining / (2 * self.base) + step:
            return [2 * self.base]
        speeds = [0.0, 0.5 * self.base, self.base, 2 * self.base]
        out = [s for s in speeds]
        out.extend(-s for s in speeds[1:] if self.offset > EPS)
        return out

    def predicted(self, step: float) -> Point:
        return self.predicted_with(self.velocity, step)

    def predicted_with(self, v: float, step: float) -> Point:
        if self.done:
            return self.position()
        seg = self.route.segments[self.seg_idx]
        off = max(0.0, min(seg.length, self.offset + v * step))
        d = seg.direction()
        return Point(seg.a.x + off * d.x, seg.a.y + off * d.y)

    def advance(self, t: float, step: float) -> None:
        if self.done:
            return
        v = self.velocity
        t_now = t
        t_cell_end = t + step
        while t_now < t_cell_end - 1e-15 and not self.done:
            seg = self.route.segments[self.seg_idx]
            if v > 0:
                dt_seg = (seg.length - self.offset) / v
            elif v < 0:
                dt_seg = self.offset / -v
            else:
                dt_seg = math.inf
            dt = min(t_cell_end - t_now, dt_seg)
            self.offset += v * dt
            t_now += dt
            if v > 0 and self.offset >= seg.length - 1e-12:
                self.offset = seg.length
                self.bps[self.seg_idx].append((t_now, seg.length))
                if self.seg_idx + 1 < len(self.route.segments):
                    self.seg_idx += 1
                    self.offset = 0.0
                    self.seg_entry_time = t_now
                    self.bps.append([(t_now, 0.0)])
                else:
                    self.done = True
                continue
            if v < 0 and self.offset <= 1e-12:
                self.offset = 0.0
                self.bps[self.seg_idx].append((t_now, 0.0))
                v = 0.0
                continue
            if t_now >= t_cell_end - 1e-15:
                self.bps[self.seg_idx].append((t_now, self.offset))
        self.velocity = v

    def finish(self) -> list[list[tuple[float, float]]]:
        # ensure each recorded segment walk is a valid chain
        out = []
        for seg, bps in zip(self.route.segments, self.bps):
            cleaned: list[tuple[float, float]] = []
            for t, s in bps:
                if cleaned and t <= cleaned[-1][0] + 1e-15:
                    continue
                cleaned.append((t, s))
            if not cleaned or cleaned[0][1] != 0.0:
                cleaned.insert(0, (self.seg_entry_time if not cleaned else
                                   cleaned[0][0] - 1e-9, 0.0))
            if abs(cleaned[-1][1] - seg.length) > EPS:
                cleaned.append((cleaned[-1][0] + max(seg.length - cleaned[-1][1],
                                                     EPS) / self.base, seg.length))
            out.append(cleaned)
        return out


# ---------------------------------------------------------------------------
# Executable form of the tour-meeting lemma

def tour_meeting_predicate(cycle: list[Point], walk1: WalkSchedule,
                           walk2: WalkSchedule) -> bool:
    """Certificate: some full tour of the cycle by one agent happens while the
    other agent's first traversal of the tour's base vertex is in the opposite
    rotational sense (or absent).  Whenever true, the walks must meet.
    """
    geo = _CycleGeometry(cycle)
    lifted1 = geo.lift(walk1)
    lifted2 = geo.lift(walk2)
    for tours, other in ((_tour_windows(geo, walk1), lifted2),
                         (_tour_windows(geo, walk2), lifted1)):
        for (t_start, t_end, v_lift, sense) in tours:
            ev = _first_vertex_traversal(other, v_lift, geo.total, t_start, t_end)
            if ev is None or ev[1] != sense:
                return True
    return False


class _CycleGeometry:
    def __init__(self, cycle: list[Point]):
        if len(cycle) < 3:
            raise WalkOffCycle("cycle needs at least 3 vertices")
        if cycle[0].dist(cycle[-1]) <= EPS:
            cycle = cycle[:-1]
        self.vertices = list(cycle)
        self.cum = [0.0]
        n = len(cycle)
        for i in range(n):
            self.cum.append(self.cum[-1] + cycle[i].dist(cycle[(i + 1) % n]))
        self.total = self.cum[-1]

    def param(self, p: Point) -> float:
        n = len(self.vertices)
        best = None
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            from .geometry import project_on_segment
            t, foot = project_on_segment(p, a, b)
            d = p.dist(foot)
            if best is None or d < best[0]:
                best = (d, self.cum[i] + t * a.dist(b))
        if best[0] > 1e-6:
            raise WalkOffCycle(f"point {p} is {best[0]:g} away from the cycle")
        return best[1] % self.total

    def vertex_param(self, p: Point) -> float | None:
        for i, v in enumerate(self.vertices):
            if v.dist(p) <= 1e-9:
                return self.cum[i]
        return None

    def lift(self, walk: WalkSchedule) -> list[tuple[float, float]]:
        """Unwrapped arc coordinate over time, subdivided for unambiguity."""
        tl = walk.timeline()
        dense: list[tuple[float, Point]] = []
        limit = self.total / 8.0
        for (t0, p0), (t1, p1) in zip(tl, tl[1:]):
            dense.append((t0, p0))
            d = p0.dist(p1)
            if d > limit:
                k = int(math.ceil(d / limit))
                for j in range(1, k):
                    u = j / k
                    dense.append((t0 + u * (t1 - t0),
                                  Point(p0.x + u * (p1.x - p0.x),
                                        p0.y + u * (p1.y - p0.y))))
        dense.append(tl[-1])
        out: list[tuple[float, float]] = []
        lift_prev: float | None = None
        for t, p in dense:
            s = self.param(p)
            if lift_prev is None:
                lift = s
            else:
                base = lift_prev + ((s - lift_prev) % self.total)
                lift = min((base, base - self.total),
                           key=lambda x: abs(x - lift_prev))
            out.append((t, lift))
            lift_prev = lift
        return out


def _tour_windows(geo: _CycleGeometry, walk: WalkSchedule):
    """(t_start, t_end, vertex_lift, sense) for each full tour in the route.

    A tour is a maximal run of route segments that traverses every cycle edge
    exactly once in one rotational sense, starting and ending at the same
    cycle vertex.
    """
    route = walk.route
    if not route.segments:
        return []
    wps = route.waypoints
    n = len(geo.vertices)
    params = [geo.vertex_param(p) for p in wps]
    windows = []
    for i in range(len(wps) - 1):
        if params[i] is None:
            continue
        for sense in (1, -1):
            if _is_tour(geo, params, i, sense):
                t_start = walk.breakpoints[i][0][0]
                t_end = walk.breakpoints[i + n - 1][-1][0]
                windows.append((t_start, t_end, params[i], sense))
    return windows


def _vi(geo: _CycleGeometry, param: float) -> int:
    for i, c in enumerate(geo.cum[:-1]):
        if abs(c - param) <= 1e-9:
            return i
    return -1


def _is_tour(geo: _CycleGeometry, params: list[float | None], i: int,
             sense: int) -> bool:
    """Do the n route segments starting at waypoint i walk the cycle once
    around in the given sense, vertex to vertex?"""
    n = len(geo.vertices)
    if i + n > len(params) - 1:
        return False
    idx = _vi(geo, params[i])
    if idx < 0:
        return False
    for k in range(1, n + 1):
        p = params[i + k]
        if p is None:
            return False
        want = geo.cum[(idx + sense * k) % n]
        if min((p - want) % geo.total, (want - p) % geo.total) > 1e-9:
            return False
    return True


def _first_vertex_traversal(lifted: list[tuple[float, float]], v_lift: float,
                            total: float, t_start: float, t_end: float):
    """Earliest transversal crossing of any lift of the vertex in the window.

    Returns (time, sense) or None; touching without passing through does not
    count as a traversal.
    """
    # restrict to the window
    pts = [(t, s) for t, s in lifted if t_start <= t <= t_end]
    if not pts or pts[0][0] > t_start:
        start_val = _lift_interp(lifted, t_start)
        pts.insert(0, (t_start, start_val))
    if pts[-1][0] < t_end:
        pts.append((t_end, _lift_interp(lifted, t_end)))
    values = [s for _, s in pts]
    lo, hi = min(values), max(values)
    k0 = math.floor((lo - v_lift) / total)
    k1 = math.ceil((hi - v_lift) / total)
    events = []
    for k in range(k0, k1 + 1):
        level = v_lift + k * total
        events.extend(_level_crossings(pts, level))
    if not events:
        return None
    return min(events, key=lambda e: e[0])


def _lift_interp(lifted: list[tuple[float, float]], t: float) -> float:
    if t <= lifted[0][0]:
        return lifted[0][1]
    if t >= lifted[-1][0]:
        return lifted[-1][1]
    for (t0, s0), (t1, s1) in zip(lifted, lifted[1:]):
        if t0 <= t <= t1:
            u = (t - t0) / (t1 - t0) if t1 > t0 else 0.0
            return s0 + u * (s1 - s0)
    return lifted[-1][1]  # pragma: no cover


def _level_crossings(pts: list[tuple[float, float]], level: float):
    """(time, sense) transversal crossings of a level by a piecewise-linear
    function; plateaus at the level count only if the signs differ around."""
    tol = 1e-12
    events = []
    signs = [(t, s - level) for t, s in pts]
    i = 0
    n = len(signs)
    while i < n - 1:
        t0, g0 = signs[i]
        t1, g1 = signs[i + 1]
        if g0 > tol and g1 < -tol:
            u = g0 / (g0 - g1)
            events.append((t0 + u * (t1 - t0), -1))
        elif g0 < -tol and g1 > tol:
            u = -g0 / (g1 - g0)
            events.append((t0 + u * (t1 - t0), 1))
        elif abs(g1) <= tol:
            # entering a (possibly zero-length) plateau at the level
            j = i + 1
            while j < n and abs(signs[j][1]) <= tol:
                j += 1
            if j < n and abs(g0) > tol:
                gj = signs[j][1]
                if (g0 > 0) != (gj > 0):
                    events.append((t1, 1 if gj > 0 else -1))
            i = j - 1
        i += 1
    return events
