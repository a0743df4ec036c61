"""Scenario generators: lower-bound terrains and randomized test instances."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .geometry import (
    EPS,
    InvalidPolygon,
    InvalidTerrain,
    Point,
    Polygon,
    Terrain,
    classify_point,
)
from .medial import EPS_MED, MedialError, cached_axis, medial_point
from .protocols import ALGORITHMS, AgentConfig


class ScenarioError(Exception):
    pass


class GenerationExhausted(ScenarioError):
    pass


class GeometryOverlap(ScenarioError):
    pass


@dataclass
class Scenario:
    terrain: Terrain
    agent1: AgentConfig
    agent2: AgentConfig
    algorithm: str
    expected_D: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ScenarioError(f"unknown algorithm {self.algorithm!r}")
        if self.agent1.start.dist(self.agent2.start) <= EPS:
            raise ScenarioError("agents must start at distinct points")
        for i, ag in enumerate((self.agent1, self.agent2), 1):
            if classify_point(ag.start, self.terrain).is_outside:
                raise ScenarioError(f"agent {i} starts outside the terrain")
        if self.algorithm in ("rvmo", "rvo") and self.agent1.label == self.agent2.label:
            raise ScenarioError(f"{self.algorithm} requires distinct labels")

    def to_jsonable(self) -> dict:
        out = {
            "terrain": self.terrain.to_jsonable(),
            "agents": [
                {"start": [ag.start.x, ag.start.y], "label": ag.label,
                 "compass": ag.compass, "has_map": ag.has_map, "alpha": ag.alpha}
                for ag in (self.agent1, self.agent2)
            ],
            "algorithm": self.algorithm,
        }
        if self.expected_D is not None:
            out["expected_D"] = self.expected_D
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable())

    @staticmethod
    def from_json(text: str) -> "Scenario":
        data = json.loads(text)
        outer = Polygon([Point(float(x), float(y)) for x, y in data["terrain"]["outer"]])
        obstacles = [Polygon([Point(float(x), float(y)) for x, y in ring])
                     for ring in data["terrain"].get("obstacles", [])]
        agents = []
        for raw in data["agents"]:
            agents.append(AgentConfig(
                start=Point(float(raw["start"][0]), float(raw["start"][1])),
                label=int(raw.get("label", 1)),
                compass=float(raw.get("compass", 0.0)),
                has_map=bool(raw.get("has_map", True)),
                alpha=float(raw.get("alpha", 0.0))))
        return Scenario(terrain=Terrain(outer, obstacles),
                        agent1=agents[0], agent2=agents[1],
                        algorithm=data["algorithm"],
                        expected_D=data.get("expected_D"))


def _regular_polygon(n: int, circumradius: float, phase: float) -> list[Point]:
    return [Point(circumradius * math.cos(phase + 2 * math.pi * k / n),
                  circumradius * math.sin(phase + 2 * math.pi * k / n))
            for k in range(n)]


def hexagon_terrain(y: float, rotation_index: int = 0, labels=(1, 2),
                    algorithm: str = "rvo") -> Scenario:
    """Concentric regular hexagons: outer side y+2, obstacle side y.

    Agents start on opposite corridor slice axes at the inner end of the
    corridor (a hair off the obstacle's side midpoints), with compasses
    pointing in opposite directions; the geodesic between them wraps three
    obstacle sides, so D = 3y up to the tiny inward nudge.
    """
    if y <= 0:
        raise ScenarioError("hexagon side must be positive")
    if not 0 <= rotation_index <= 5:
        raise ScenarioError("rotation_index must be in 0..5")
    phase = rotation_index * math.pi / 3
    outer = Polygon(_regular_polygon(6, y + 2, phase))
    inner = Polygon(_regular_polygon(6, y, phase))
    terrain = Terrain(outer, [inner])
    apothem_in = y * math.sqrt(3) / 2
    # slice axis through the midpoint of obstacle side 0 (vertices 0 and 1)
    axis_angle = phase + math.pi / 6
    nudge = 1e-5 * (1 + y)
    r = apothem_in + nudge
    u = Point(r * math.cos(axis_angle), r * math.sin(axis_angle))
    v = Point(-u.x, -u.y)
    expected = 3 * y
    a1 = AgentConfig(start=u, label=labels[0], compass=0.0, has_map=False)
    a2 = AgentConfig(start=v, label=labels[1], compass=math.pi, has_map=False)
    return Scenario(terrain=terrain, agent1=a1, agent2=a2, algorithm=algorithm,
                    expected_D=expected,
                    meta={"y": y, "rotation_index": rotation_index})


def double_pie(D: float, k: int, algorithm: str = "rvc") -> Scenario:
    """Two rosettes of rectangles glued along one rectangle's far side.

    Each rosette is a regular k-gon with apothem D/8 and a rectangle of length
    3D/8 (height = the k-gon side) attached outward to every side; the glued
    pair of rectangles forms the only corridor between the two k-gon centers,
    which sit distance D apart.
    """
    if D <= 0:
        raise ScenarioError("D must be positive")
    if k < 4 or k % 2 != 0:
        raise ScenarioError("k must be an even integer >= 4")
    apothem = D / 8
    side = 2 * apothem * math.tan(math.pi / k)
    rect_len = 3 * D / 8
    center1 = Point(-D / 2, 0.0)
    center2 = Point(D / 2, 0.0)

    def rosette(center: Point, phase: float) -> list[list[Point]]:
        """Per k-gon side: [A, A_out, B_out] with the passing side first."""
        circum = apothem / math.cos(math.pi / k)
        corners = [Point(center.x + circum * math.cos(phase + (2 * j + 1) * math.pi / k),
                         center.y + circum * math.sin(phase + (2 * j + 1) * math.pi / k))
                   for j in range(k)]
        out = []
        for j in range(k):
            a = corners[j - 1]
            b = corners[j]
            mid_angle = phase + 2 * j * math.pi / k
            n = Point(math.cos(mid_angle), math.sin(mid_angle))
            out.append([a,
                        Point(a.x + rect_len * n.x, a.y + rect_len * n.y),
                        Point(b.x + rect_len * n.x, b.y + rect_len * n.y),
                        b])
        return out

    # rosette 1 passing side faces +x (j = 0), rosette 2 faces -x
    sides1 = rosette(center1, 0.0)
    sides2 = rosette(center2, math.pi)
    ring: list[Point] = []
    meta_rects = {"passing": [], "normal": []}

    # walk rosette 1 counterclockwise starting after its passing side, cross
    # into rosette 2 along the glued corridor wall, and come back; the glue
    # points themselves are collinear interior points of the corridor walls
    # and are not polygon vertices
    def ordered(sides):
        return [sides[(1 + j) % k] for j in range(k)]   # passing side last

    for sides in (ordered(sides1), ordered(sides2)):
        for j, (a, a_out, b_out, b) in enumerate(sides):
            rect = [[a.x, a.y], [a_out.x, a_out.y], [b_out.x, b_out.y], [b.x, b.y]]
            if j == k - 1:
                meta_rects["passing"].append(rect)
                ring.append(a)          # corridor wall runs into the twin rosette
            else:
                meta_rects["normal"].append(rect)
                ring.extend([a, a_out, b_out])
    try:
        outer = Polygon(ring)
    except InvalidPolygon as e:
        raise GeometryOverlap(f"double-pie rectangles self-intersect: {e}") from e
    terrain = Terrain(outer)
    a1 = AgentConfig(start=center1, compass=0.0, has_map=False)
    a2 = AgentConfig(start=center2, compass=0.0, has_map=False)
    return Scenario(terrain=terrain, agent1=a1, agent2=a2, algorithm=algorithm,
                    expected_D=D, meta={"rectangles": meta_rects, "k": k, "D": D})


MAX_OUTER_VERTICES = 64
MAX_OBSTACLES = 8
MAX_OBSTACLE_VERTICES = 16
MAX_REJECTIONS = 10_000


def random_terrain(seed: int, outer_vertices: int = 12, n_obstacles: int = 0,
                   algorithm: str | None = None, coherent: bool = False,
                   require_medial_blocked: bool = False) -> Scenario:
    """Seed-deterministic random scenario; rejection-sampled until valid.

    Star-shaped outer polygon, small convex-ish obstacles, interior starts
    with a comfortable clearance.  The medial axis of the outer polygon must
    construct cleanly (near-degenerate axes are resampled away) so that every
    generated scenario can run any algorithm.
    """
    if not 3 <= outer_vertices <= MAX_OUTER_VERTICES:
        raise ScenarioError(f"outer_vertices must be in 3..{MAX_OUTER_VERTICES}")
    if not 0 <= n_obstacles <= MAX_OBSTACLES:
        raise ScenarioError(f"n_obstacles must be in 0..{MAX_OBSTACLES}")
    rng = random.Random(f"terrain:{seed}")
    for _ in range(MAX_REJECTIONS):
        scenario = _try_random_scenario(rng, outer_vertices, n_obstacles,
                                        algorithm, coherent, require_medial_blocked)
        if scenario is not None:
            return scenario
    raise GenerationExhausted(f"no valid terrain after {MAX_REJECTIONS} attempts")


def _try_random_scenario(rng, outer_vertices, n_obstacles, algorithm,
                         coherent, require_medial_blocked):
    R = 10.0
    pts = []
    for i in range(outer_vertices):
        ang = 2 * math.pi * i / outer_vertices + \
            rng.uniform(-0.3, 0.3) * 2 * math.pi / outer_vertices
        rad = R * rng.uniform(0.45, 1.0)
        pts.append(Point(rad * math.cos(ang), rad * math.sin(ang)))
    try:
        outer = Polygon(pts)
    except InvalidPolygon:
        return None
    mp = None
    if require_medial_blocked or algorithm in (None, "rv", "rvo"):
        # these scenarios will take the medial point of the outer polygon;
        # resample away near-degenerate axes instead of failing downstream
        try:
            axis = cached_axis(outer.oriented(ccw=True))
            if min(e.length for e in axis.edges) < 10 * EPS_MED:
                return None
            mp = medial_point(outer)
        except MedialError:
            return None
    obstacles = []
    margin = 0.35
    for kk in range(n_obstacles):
        placed = False
        for _ in range(60):
            if require_medial_blocked and kk == 0:
                c = mp.point
            else:
                c = Point(rng.uniform(-R, R), rng.uniform(-R, R))
            size = rng.uniform(0.5, 1.1)
            m = rng.randint(3, min(8, MAX_OBSTACLE_VERTICES))
            ring = []
            phase = rng.uniform(0, 2 * math.pi)
            for j in range(m):
                a = phase + 2 * math.pi * j / m + rng.uniform(-0.2, 0.2) * 2 * math.pi / m
                r = size * rng.uniform(0.75, 1.0)
                ring.append(Point(c.x + r * math.cos(a), c.y + r * math.sin(a)))
            try:
                ob = Polygon(ring)
            except InvalidPolygon:
                continue
            if not all(outer.contains(v) and outer.boundary_distance(v) > margin
                       for v in ob.vertices):
                continue
            clear = True
            for prev in obstacles:
                if any(prev.contains(v) for v in ob.vertices) or \
                   any(ob.contains(v) for v in prev.vertices):
                    clear = False
                    break
                dmin = min(min(prev.boundary_distance(v) for v in ob.vertices),
                           min(ob.boundary_distance(v) for v in prev.vertices))
                if dmin < margin:
                    clear = False
                    break
            if not clear:
                continue
            if require_medial_blocked and kk == 0 and not ob.contains(mp.point):
                continue
            obstacles.append(ob)
            placed = True
            break
        if not placed:
            return None
    try:
        terrain = Terrain(outer, obstacles)
    except InvalidTerrain:
        return None
    if require_medial_blocked and (not obstacles or
                                   not obstacles[0].contains(mp.point)):
        return None
    starts = []
    for _ in range(400):
        p = Point(rng.uniform(-R, R), rng.uniform(-R, R))
        loc = classify_point(p, terrain)
        if not loc.is_interior:
            continue
        if terrain.outer.boundary_distance(p) < margin:
            continue
        if any(ob.boundary_distance(p) < margin for ob in terrain.obstacles):
            continue
        if starts and p.dist(starts[0]) < 1.0:
            continue
        starts.append(p)
        if len(starts) == 2:
            break
    if len(starts) < 2:
        return None
    if algorithm is None:
        algorithm = "rvo" if obstacles else "rv"
    compass1 = rng.uniform(0, 2 * math.pi)
    compass2 = compass1 if coherent else rng.uniform(0, 2 * math.pi)
    label1 = rng.randint(1, 1000)
    label2 = rng.randint(1, 1000)
    while label2 == label1:
        label2 = rng.randint(1, 1000)
    has_map = algorithm in ("rvcm", "rvm", "rvmo")
    try:
        return Scenario(
            terrain=terrain,
            agent1=AgentConfig(start=starts[0], label=label1, compass=compass1,
                               has_map=has_map),
            agent2=AgentConfig(start=starts[1], label=label2, compass=compass2,
                               has_map=has_map),
            algorithm=algorithm)
    except ScenarioError:
        return None


def medial_blocked_terrain(seed: int, outer_vertices: int = 12,
                           n_obstacles: int = 2) -> Scenario:
    """Random obstructed terrain whose medial point hides inside an obstacle."""
    return random_terrain(seed, outer_vertices, max(1, n_obstacles),
                          algorithm="rvo", require_medial_blocked=True)


def square_with_center_obstacle(side: float = 10.0, hole: float = 2.0,
                                labels=(1, 2)) -> Scenario:
    """The paper's motivating symmetric instance: centered square obstacle."""
    h = side / 2
    o = hole / 2
    outer = Polygon([Point(-h, -h), Point(h, -h), Point(h, h), Point(-h, h)])
    obstacle = Polygon([Point(-o, -o), Point(o, -o), Point(o, o), Point(-o, o)])
    terrain = Terrain(outer, [obstacle])
    a1 = AgentConfig(start=Point(-h * 0.8, -h * 0.8), label=labels[0],
                     compass=0.0, has_map=False)
    a2 = AgentConfig(start=Point(h * 0.8, h * 0.8), label=labels[1],
                     compass=math.pi, has_map=False)
    return Scenario(terrain=terrain, agent1=a1, agent2=a2, algorithm="rvo")
