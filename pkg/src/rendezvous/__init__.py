"""Asynchronous deterministic rendezvous of two agents in polygonal terrains.

Geometry and terrain model, visibility-graph shortest paths, medial axis,
route protocols for six rendezvous algorithms, an adversarial asynchronous
scheduler, scenario generators, and a CLI harness.
"""

from .geometry import (
    EPS,
    Point,
    Polygon,
    Segment,
    Terrain,
    boundary_tour,
    boundary_walk_to,
    classify_point,
    first_hit,
    perimeter_stats,
)
from .medial import MedialAxisGraph, MedialPoint, medial_axis, medial_point
from .protocols import (
    AgentConfig,
    RingEmbedding,
    Route,
    build_ring,
    build_route,
    build_rv,
    build_rvc,
    build_rvcm,
    build_rvm,
    build_rvmo,
    build_rvo,
    modified_label,
)
from .scenarios import Scenario, double_pie, hexagon_terrain, random_terrain
from .scheduler import (
    Delay,
    GreedyAvoider,
    JitterBackForth,
    MeetReport,
    SpeedRatio,
    Uniform,
    WalkSchedule,
    make_schedule,
    simulate,
    simulate_avoider,
    tour_meeting_predicate,
)
from .visibility import (
    GeodesicPath,
    clockwise_first,
    enumerate_shortest_paths,
    shortest_path,
    unique_path,
)

__version__ = "0.1.0"
