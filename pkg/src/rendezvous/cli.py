"""Command-line front end: run scenarios, batch experiments, emit SVG traces.

Reports are deterministic JSON with 12-significant-digit floats and fixed
field order, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from .geometry import GeometryError, Point, load_terrain, perimeter_stats
from .medial import MedialError, cached_axis
from .protocols import (
    ALGORITHMS,
    AgentConfig,
    HasObstacles,
    SameLabel,
    SameStart,
    build_route,
)
from .scenarios import (
    GenerationExhausted,
    GeometryOverlap,
    Scenario,
    ScenarioError,
    double_pie,
    hexagon_terrain,
    medial_blocked_terrain,
    random_terrain,
    square_with_center_obstacle,
)
from .scheduler import (
    Delay,
    GreedyAvoider,
    InvalidStrategyParams,
    JitterBackForth,
    ScheduleError,
    SpeedRatio,
    Uniform,
    make_schedule,
    simulate,
    simulate_avoider,
)
from .visibility import geodesic_distance


class PreconditionViolation(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic number formatting

def _round12(x):
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return None
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: _round12(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round12(v) for v in x]
    return x


def dumps_report(obj: dict) -> str:
    return json.dumps(_round12(obj), indent=1)


# ---------------------------------------------------------------------------
# strategies

def parse_strategies(spec: str) -> list[tuple[str, object]]:
    out = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        parts = token.split(":")
        name = parts[0]
        try:
            if name == "uniform":
                out.append((token, Uniform(float(parts[1]) if len(parts) > 1 else 1.0)))
            elif name == "delay":
                out.append((token, Delay(agent=int(parts[1]), duration=float(parts[2]))))
            elif name == "ratio":
                out.append((token, SpeedRatio(float(parts[1]))))
            elif name == "jitter":
                out.append((token, JitterBackForth(seed=int(parts[1]))))
            elif name == "avoider":
                out.append((token, GreedyAvoider(seed=int(parts[1]))))
            else:
                raise InvalidStrategyParams(f"unknown strategy {name!r}")
        except (IndexError, ValueError) as e:
            raise InvalidStrategyParams(f"bad strategy token {token!r}: {e}") from e
    if not out:
        raise InvalidStrategyParams("empty strategy set")
    return out


GEN_FUNCS = {
    "hexagon": lambda kw: hexagon_terrain(
        y=float(kw.get("y", 1.0)), rotation_index=int(kw.get("rot", 0))),
    "double_pie": lambda kw: double_pie(
        D=float(kw.get("D", 8.0)), k=int(kw.get("k", 8))),
    "random": lambda kw: random_terrain(
        seed=int(kw.get("seed", 0)), outer_vertices=int(kw.get("outer", 12)),
        n_obstacles=int(kw.get("obstacles", 0)),
        algorithm=kw.get("algo"), coherent=bool(int(kw.get("coherent", 0)))),
    "medial_blocked": lambda kw: medial_blocked_terrain(
        seed=int(kw.get("seed", 0)), outer_vertices=int(kw.get("outer", 12)),
        n_obstacles=int(kw.get("obstacles", 2))),
    "square_with_center_obstacle": lambda kw: square_with_center_obstacle(),
}


def parse_gen(spec: str) -> Scenario:
    name, _, rest = spec.partition(":")
    kwargs = {}
    if rest:
        for pair in rest.split(","):
            k, _, v = pair.partition("=")
            kwargs[k.strip()] = v.strip()
    if name not in GEN_FUNCS:
        raise ScenarioError(f"unknown generator {name!r} "
                            f"(known: {', '.join(sorted(GEN_FUNCS))})")
    return GEN_FUNCS[name](kwargs)


# ---------------------------------------------------------------------------
# scenario execution

def check_preconditions(scenario: Scenario) -> None:
    algo = scenario.algorithm
    t = scenario.terrain
    a1, a2 = scenario.agent1, scenario.agent2
    if algo in ("rvm", "rv") and t.obstacles:
        raise PreconditionViolation(f"{algo} requires an obstacle-free terrain "
                                    "(HasObstacles)")
    if algo in ("rvcm", "rvm", "rvmo") and not (a1.has_map and a2.has_map):
        raise PreconditionViolation(f"{algo} requires both agents to carry a map")
    if algo in ("rvcm", "rvc") and abs(a1.compass - a2.compass) > 1e-12:
        raise PreconditionViolation(f"{algo} requires coherent compasses")
    if algo in ("rvmo", "rvo") and a1.label == a2.label:
        raise PreconditionViolation(f"{algo} requires distinct labels (SameLabel)")


def bound_checks(algo: str, D: float, P: float, x: float, L: int,
                 worst_total: float, all_met: bool) -> list[dict]:
    tol = 1e-6
    checks = []

    def add(name, bound, measured, passed):
        checks.append({"name": name, "bound": bound, "measured": measured,
                       "pass": bool(passed)})

    if algo in ("rvcm", "rvm"):
        add("total_cost == D", D, worst_total, abs(worst_total - D) <= tol * max(1, D))
    elif algo == "rvc":
        add("total_cost <= 8P", 8 * P, worst_total, worst_total <= 8 * P + tol)
    elif algo == "rv":
        add("total_cost <= 6P", 6 * P, worst_total, worst_total <= 6 * P + tol)
    elif algo == "rvmo":
        mu_len = 2 * L.bit_length() + 1
        bound = 2 * D * (2 * mu_len * 2 + 1)
        add("total_cost <= 2D(2|L*|*2 + 1)", bound, worst_total,
            worst_total <= bound + tol)
    elif algo == "rvo":
        mu_len = 2 * L.bit_length() + 1
        bound = 12 * P + 2 * (x + 2 * x * mu_len)
        add("total_cost <= 12P + 2(x + 2x|L*|)", bound, worst_total,
            worst_total <= bound + tol)
    add("met under all strategies", 1.0, 1.0 if all_met else 0.0, all_met)
    return checks


def run_scenario(scenario: Scenario, strategies: list[tuple[str, object]],
                 seed: int = 0) -> dict:
    check_preconditions(scenario)
    t = scenario.terrain
    a1, a2 = scenario.agent1, scenario.agent2
    try:
        route1 = build_route(scenario.algorithm, a1, a2.start, t)
        route2 = build_route(scenario.algorithm, a2, a1.start, t)
    except (SameStart, SameLabel, HasObstacles) as e:
        raise PreconditionViolation(str(e)) from e
    D = geodesic_distance(a1.start, a2.start, t)
    P, x = perimeter_stats(t)
    reports = {}
    all_met = True
    worst_total = 0.0
    for name, strat in strategies:
        if isinstance(strat, GreedyAvoider):
            rep = simulate_avoider(route1, route2, seed=strat.seed, step=strat.step)
        else:
            s1 = make_schedule(route1, strat, agent_id=1)
            s2 = make_schedule(route2, strat, agent_id=2)
            rep = simulate(route1, route2, s1, s2)
        reports[name] = rep.to_jsonable()
        all_met = all_met and rep.met
        worst_total = max(worst_total, rep.total_cost)
    L = max(a1.label, a2.label)
    checks = bound_checks(scenario.algorithm, D, P, x, L, worst_total, all_met)
    terrain_json = json.dumps(t.to_jsonable(), sort_keys=True)
    digest = hashlib.sha256(terrain_json.encode()).hexdigest()[:16]
    return {
        "scenario": {
            "terrain_hash": digest,
            "algorithm": scenario.algorithm,
            "agents": [
                {"start": [a.start.x, a.start.y], "label": a.label,
                 "compass": a.compass, "has_map": a.has_map}
                for a in (a1, a2)
            ],
        },
        "parameters": {"D": D, "P": P, "x": x},
        "routes": [[[p.x, p.y] for p in route1.waypoints],
                   [[p.x, p.y] for p in route2.waypoints]],
        "strategies": reports,
        "bound_checks": checks,
        "terrain": t.to_jsonable(),
    }


def report_passed(report: dict) -> bool:
    return all(c["pass"] for c in report["bound_checks"])


# ---------------------------------------------------------------------------
# SVG rendering

def render_svg(report: dict) -> str:
    terrain = report["terrain"]
    outer = terrain["outer"]
    xs = [p[0] for p in outer]
    ys = [p[1] for p in outer]
    for route in report["routes"]:
        xs.extend(p[0] for p in route)
        ys.extend(p[1] for p in route)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad = 0.06 * max(x1 - x0, y1 - y0, 1.0)
    width = x1 - x0 + 2 * pad
    height = y1 - y0 + 2 * pad

    def fmt(v: float) -> str:
        return f"{v:.6g}"

    def pt(p) -> str:
        # flip y so north is up in screen coordinates
        return f"{fmt(p[0] - x0 + pad)},{fmt(y1 + pad - p[1])}"

    def poly_points(ring) -> str:
        return " ".join(pt(p) for p in ring)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {fmt(width)} {fmt(height)}" '
        f'width="800" height="{fmt(800 * height / max(width, 1e-9))}">',
        "<defs><pattern id=\"hatch\" width=\"0.4\" height=\"0.4\" "
        "patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">"
        "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"0.4\" stroke=\"#888\" stroke-width=\"0.12\"/>"
        "</pattern></defs>",
        f'<polygon points="{poly_points(outer)}" fill="#f7f7f2" stroke="#222" '
        f'stroke-width="{fmt(0.004 * width)}"/>',
    ]
    for ring in terrain.get("obstacles", []):
        lines.append(f'<polygon points="{poly_points(ring)}" fill="url(#hatch)" '
                     f'stroke="#444" stroke-width="{fmt(0.003 * width)}"/>')
    colors = ("#c0392b", "#2471a3")
    for route, color in zip(report["routes"], colors):
        if len(route) >= 2:
            lines.append(f'<polyline points="{poly_points(route)}" fill="none" '
                         f'stroke="{color}" stroke-width="{fmt(0.0035 * width)}" '
                         f'stroke-opacity="0.75"/>')
        start = route[0]
        lines.append(f'<circle cx="{pt(start).split(",")[0]}" '
                     f'cy="{pt(start).split(",")[1]}" r="{fmt(0.008 * width)}" '
                     f'fill="{color}"/>')
    meet = None
    for rep in report["strategies"].values():
        if rep.get("met") and rep.get("meet_point"):
            meet = rep["meet_point"]
            break
    if meet is not None:
        lines.append(f'<circle cx="{pt(meet).split(",")[0]}" '
                     f'cy="{pt(meet).split(",")[1]}" r="{fmt(0.012 * width)}" '
                     f'fill="none" stroke="#1e8449" stroke-width="{fmt(0.004 * width)}"/>')
    pars = report["parameters"]
    costs = {name: rep["total_cost"] for name, rep in report["strategies"].items()}
    legend = (f"algo={report['scenario']['algorithm']} D={pars['D']:.6g} "
              f"P={pars['P']:.6g} x={pars['x']:.6g}")
    lines.append(f'<text x="{fmt(pad * 0.3)}" y="{fmt(0.035 * height)}" '
                 f'font-size="{fmt(0.03 * height)}" font-family="monospace">{legend}</text>')
    cost_text = " ".join(f"{k}:{v:.6g}" for k, v in sorted(costs.items()))
    lines.append(f'<text x="{fmt(pad * 0.3)}" y="{fmt(0.07 * height)}" '
                 f'font-size="{fmt(0.024 * height)}" font-family="monospace">{cost_text}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands

def _load_scenario(args) -> Scenario:
    if args.gen:
        scenario = parse_gen(args.gen)
    elif args.terrain:
        terrain = load_terrain(args.terrain)
        scenario = None
    else:
        raise PreconditionViolation("provide --terrain FILE or --gen SPEC")
    if args.gen and not (args.a1 or args.a2 or args.labels or args.algo):
        return scenario

    def parse_agent(text, default):
        if text is None:
            return default
        parts = [float(v) for v in text.split(",")]
        start = Point(parts[0], parts[1])
        label = int(parts[2]) if len(parts) > 2 else (default.label if default else 1)
        compass = parts[3] if len(parts) > 3 else (default.compass if default else 0.0)
        has_map = default.has_map if default else True
        return AgentConfig(start=start, label=label, compass=compass, has_map=has_map)

    if args.gen:
        base = scenario
        a1 = parse_agent(args.a1, base.agent1)
        a2 = parse_agent(args.a2, base.agent2)
        algo = args.algo or base.algorithm
        terrain = base.terrain
        expected = base.expected_D
    else:
        if not (args.a1 and args.a2):
            raise PreconditionViolation("--terrain requires --a1 and --a2")
        a1 = parse_agent(args.a1, None)
        a2 = parse_agent(args.a2, None)
        algo = args.algo or "rvcm"
        expected = None
    if args.labels:
        l1, l2 = (int(v) for v in args.labels.split(","))
        a1 = AgentConfig(start=a1.start, label=l1, compass=a1.compass,
                         has_map=a1.has_map, alpha=a1.alpha)
        a2 = AgentConfig(start=a2.start, label=l2, compass=a2.compass,
                         has_map=a2.has_map, alpha=a2.alpha)
    if algo in ("rvcm", "rvm", "rvmo"):
        a1 = AgentConfig(start=a1.start, label=a1.label, compass=a1.compass,
                         has_map=True, alpha=a1.alpha)
        a2 = AgentConfig(start=a2.start, label=a2.label, compass=a2.compass,
                         has_map=True, alpha=a2.alpha)
    try:
        return Scenario(terrain=terrain, agent1=a1, agent2=a2, algorithm=algo,
                        expected_D=expected)
    except ScenarioError as e:
        raise PreconditionViolation(str(e)) from e


def cmd_run(args) -> int:
    scenario = _load_scenario(args)
    strategies = parse_strategies(args.strategy)
    report = run_scenario(scenario, strategies, seed=args.seed)
    text = dumps_report(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(json.loads(text)))
    if args.dump_medial:
        axis = cached_axis(scenario.terrain.outer)
        with open(args.dump_medial, "w", encoding="utf-8") as fh:
            fh.write(dumps_report({"medial_axis": axis.to_jsonable()}))
    ok = report_passed(report)
    for c in report["bound_checks"]:
        status = "PASS" if c["pass"] else "FAIL"
        print(f"[{status}] {c['name']}: measured {c['measured']:.6g} "
              f"vs bound {c['bound']:.6g}", file=sys.stderr)
    return 0 if ok else 1


def _batch_one(seed: int, algo: str, strategies, outer: int, obstacles: int):
    n_obs = 0 if algo in ("rvm", "rv") else obstacles
    coherent = algo in ("rvcm", "rvc")
    scenario = random_terrain(seed, outer_vertices=outer, n_obstacles=n_obs,
                              algorithm=algo, coherent=coherent)
    report = run_scenario(scenario, strategies, seed=seed)
    return seed, algo, report


def cmd_batch(args) -> int:
    lo, _, hi = args.seeds.partition(":")
    seeds = range(int(lo), int(hi if hi else int(lo) + 1))
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise PreconditionViolation(f"unknown algorithm {a!r}")
    strategies = parse_strategies(args.strategy)
    jobs = [(s, a) for a in algos for s in seeds]
    results = []
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        futures = [pool.submit(_batch_one, s, a, strategies, args.outer,
                               args.obstacles) for s, a in jobs]
        for f in futures:
            results.append(f.result())
    results.sort(key=lambda r: (r[1], r[0]))
    summary = {}
    failed = False
    for seed, algo, report in results:
        entry = summary.setdefault(algo, {"scenarios": 0, "met": 0, "max_ratio": 0.0})
        entry["scenarios"] += 1
        met = all(rep["met"] for rep in report["strategies"].values())
        entry["met"] += int(met)
        for c in report["bound_checks"]:
            if c["bound"] > 0 and "<=" in c["name"]:
                entry["max_ratio"] = max(entry["max_ratio"],
                                         c["measured"] / c["bound"])
            if not c["pass"]:
                failed = True
                print(f"FAIL seed={seed} algo={algo}: {c['name']} "
                      f"measured={c['measured']:.6g} bound={c['bound']:.6g}",
                      file=sys.stderr)
        if not met:
            failed = True
    header = f"{'algorithm':<10} {'scenarios':>9} {'met':>5} {'max ratio':>10}"
    rows = [header, "-" * len(header)]
    for algo in sorted(summary):
        e = summary[algo]
        rows.append(f"{algo:<10} {e['scenarios']:>9} {e['met']:>5} "
                    f"{e['max_ratio']:>10.4f}")
    table = "\n".join(rows)
    print(table)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dumps_report({"summary": summary}))
    return 1 if failed else 0


def cmd_svg(args) -> int:
    with open(args.report_file, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(render_svg(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rendezvous",
                                description="Two-agent rendezvous in polygonal "
                                            "terrains: build routes, run the "
                                            "asynchronous adversary, check bounds.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--terrain", help="terrain JSON file")
    run.add_argument("--gen", help="generator spec, e.g. hexagon:y=2 or "
                                   "random:seed=3,outer=12,obstacles=2")
    run.add_argument("--algo", choices=ALGORITHMS)
    run.add_argument("--a1", help="agent 1 as x,y[,label[,compass]]")
    run.add_argument("--a2", help="agent 2 as x,y[,label[,compass]]")
    run.add_argument("--labels", help="override labels as l1,l2")
    run.add_argument("--strategy", default="uniform",
                     help="CSV of uniform|delay:AGENT:DUR|ratio:R|jitter:SEED|avoider:SEED")
    run.add_argument("--svg", help="write an SVG trace here")
    run.add_argument("--report", help="write the JSON report here")
    run.add_argument("--dump-medial", dest="dump_medial",
                     help="write the outer polygon's medial axis here")
    run.add_argument("--seed", type=int, default=0)
    run.set_defaults(func=cmd_run)

    batch = sub.add_parser("batch", help="run a seeds x algorithms suite")
    batch.add_argument("--seeds", required=True, help="range like 0:50")
    batch.add_argument("--algos", required=True, help="CSV of algorithms")
    batch.add_argument("--strategy", default="uniform,delay:1:20,jitter:1")
    batch.add_argument("--outer", type=int, default=10)
    batch.add_argument("--obstacles", type=int, default=1)
    batch.add_argument("--workers", type=int, default=4)
    batch.add_argument("--report", help="write the JSON summary here")
    batch.set_defaults(func=cmd_batch)

    svg = sub.add_parser("svg", help="render an SVG from a saved report")
    svg.add_argument("report_file")
    svg.add_argument("output")
    svg.set_defaults(func=cmd_svg)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionViolation as e:
        print(f"precondition violation: {e}", file=sys.stderr)
        return 2
    except (GeometryError, ScenarioError, ScheduleError, MedialError,
            GenerationExhausted, GeometryOverlap, InvalidStrategyParams) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
