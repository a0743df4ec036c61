#!/usr/bin/env python3
"""Experiment sweep: meeting rates, cost/bound ratios, label-growth curves.

Reproduces the headline behaviors end to end:
  * 50 random obstacle-free terrains x {rv, rvc} x {uniform, delay, jitter}:
    everything meets, costs stay under the proof-derived bounds;
  * hexagon family (y in {1, 2, 4}) under rvo for growing larger labels:
    measured worst-case cost grows at most linearly in the label length;
  * an SVG gallery of representative runs.

Run from the repository root:  python3 scripts/run_experiments.py [outdir]
"""

import json
import pathlib
import sys
import time

from rendezvous.cli import dumps_report, parse_strategies, render_svg, run_scenario
from rendezvous.geometry import perimeter_stats
from rendezvous.protocols import AgentConfig, build_route, modified_label
from rendezvous.scenarios import (
    double_pie,
    hexagon_terrain,
    random_terrain,
    square_with_center_obstacle,
)
from rendezvous.scheduler import Delay, Uniform, make_schedule, simulate
from rendezvous.visibility import geodesic_distance


def sweep_obstacle_free(out):
    strategies = parse_strategies("uniform,delay:1:20,jitter:1")
    rows = []
    for algo in ("rv", "rvc"):
        met = 0
        worst_ratio = 0.0
        for seed in range(50):
            sc = random_terrain(seed, outer_vertices=9, n_obstacles=0,
                                algorithm=algo, coherent=True)
            report = run_scenario(sc, strategies)
            met += all(s["met"] for s in report["strategies"].values())
            for c in report["bound_checks"]:
                if "<=" in c["name"] and c["bound"] > 0:
                    worst_ratio = max(worst_ratio, c["measured"] / c["bound"])
        rows.append({"algorithm": algo, "scenarios": 50, "met": met,
                     "worst_cost_over_bound": worst_ratio})
        print(f"{algo}: 50 scenarios, {met} met, worst cost/bound "
              f"{worst_ratio:.4f}")
    (out / "obstacle_free_sweep.json").write_text(dumps_report({"rows": rows}))


def hexagon_label_growth(out):
    """Worst measured rvo cost as the larger label grows, at fixed terrain."""
    results = {}
    for y in (1.0, 2.0, 4.0):
        sc = hexagon_terrain(y)
        P, x = perimeter_stats(sc.terrain)
        D = geodesic_distance(sc.agent1.start, sc.agent2.start, sc.terrain)
        curve = []
        for big in (2, 8, 64, 1024):
            a1 = AgentConfig(start=sc.agent1.start, label=1,
                             compass=sc.agent1.compass, has_map=False)
            a2 = AgentConfig(start=sc.agent2.start, label=big,
                             compass=sc.agent2.compass, has_map=False)
            r1 = build_route("rvo", a1, a2.start, sc.terrain)
            r2 = build_route("rvo", a2, a1.start, sc.terrain)
            worst = 0.0
            for strat in (Uniform(1.0), Delay(agent=1, duration=10 * D)):
                s1 = make_schedule(r1, strat, agent_id=1)
                s2 = make_schedule(r2, strat, agent_id=2)
                rep = simulate(r1, r2, s1, s2)
                assert rep.met
                worst = max(worst, rep.total_cost)
            curve.append({"label": big, "mu_star_len": len(modified_label(big)),
                          "worst_cost": worst})
        # linear-growth check: cost increments per extra stage stay bounded
        for lo, hi in zip(curve, curve[1:]):
            d_stages = hi["mu_star_len"] - lo["mu_star_len"]
            d_cost = hi["worst_cost"] - lo["worst_cost"]
            assert d_cost <= d_stages * 4 * x + 1e-6, "superlinear growth"
        results[f"y={y:g}"] = curve
        print(f"hexagon y={y:g}: costs " +
              " -> ".join(f"{c['worst_cost']:.1f}" for c in curve) +
              f"  (|mu*| {curve[0]['mu_star_len']}..{curve[-1]['mu_star_len']})")
    (out / "hexagon_label_growth.json").write_text(dumps_report(results))


def svg_gallery(out):
    cases = [
        ("rvcm_square", random_terrain(3, outer_vertices=8, n_obstacles=1,
                                       algorithm="rvcm", coherent=True),
         "uniform"),
        ("rvo_center_obstacle", square_with_center_obstacle(),
         "uniform,avoider:7"),
        ("rv_double_pie", double_pie(8.0, 8, algorithm="rv"), "uniform"),
        ("rvo_hexagon", hexagon_terrain(2.0), "uniform,delay:2:30"),
    ]
    for name, sc, strategy in cases:
        report = run_scenario(sc, parse_strategies(strategy))
        text = dumps_report(report)
        (out / f"{name}.json").write_text(text)
        (out / f"{name}.svg").write_text(render_svg(json.loads(text)))
        print(f"wrote {name}.svg")


def main() -> int:
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "experiments")
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    sweep_obstacle_free(out)
    hexagon_label_growth(out)
    svg_gallery(out)
    print(f"done in {time.time() - t0:.1f}s; outputs in {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
