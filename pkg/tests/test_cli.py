import json
import math
import os

import pytest

from rendezvous.cli import dumps_report, main, parse_gen, parse_strategies
from rendezvous.scheduler import Delay, InvalidStrategyParams


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "sq.json"
    path.write_text(json.dumps({"outer": [[0, 0], [1, 0], [1, 1], [0, 1]]}))
    return str(path)


@pytest.fixture
def holed_file(tmp_path):
    path = tmp_path / "holed.json"
    path.write_text(json.dumps({
        "outer": [[0, 0], [10, 0], [10, 10], [0, 10]],
        "obstacles": [[[4, 4], [6, 4], [6, 6], [4, 6]]],
    }))
    return str(path)


def test_parse_strategies():
    parsed = parse_strategies("uniform,delay:2:20,ratio:3,jitter:5,avoider:7")
    kinds = [type(s).__name__ for _, s in parsed]
    assert kinds == ["Uniform", "Delay", "SpeedRatio", "JitterBackForth",
                     "GreedyAvoider"]
    assert parsed[1][1] == Delay(agent=2, duration=20.0)


def test_parse_strategies_rejects_junk():
    with pytest.raises(InvalidStrategyParams):
        parse_strategies("warp:9")
    with pytest.raises(InvalidStrategyParams):
        parse_strategies("")


def test_run_rvcm(square_file, tmp_path, capsys):
    report_path = str(tmp_path / "rep.json")
    code = main(["run", "--algo", "rvcm", "--terrain", square_file,
                 "--a1", "0.2,0.2", "--a2", "0.8,0.8",
                 "--strategy", "uniform", "--report", report_path])
    assert code == 0
    rep = json.loads(open(report_path).read())
    assert abs(rep["strategies"]["uniform"]["total_cost"] - 0.6 * math.sqrt(2)) < 1e-9
    assert all(c["pass"] for c in rep["bound_checks"])


def test_run_rvm_with_obstacles_is_precondition_violation(holed_file):
    code = main(["run", "--algo", "rvm", "--terrain", holed_file,
                 "--a1", "1,1", "--a2", "9,9"])
    assert code == 2


def test_run_rvo_generated(tmp_path):
    report_path = str(tmp_path / "rvo.json")
    svg_path = str(tmp_path / "rvo.svg")
    code = main(["run", "--gen", "square_with_center_obstacle",
                 "--strategy", "uniform,delay:2:20,avoider:7",
                 "--report", report_path, "--svg", svg_path])
    assert code == 0
    rep = json.loads(open(report_path).read())
    assert all(s["met"] for s in rep["strategies"].values())
    assert os.path.getsize(svg_path) > 500


def test_report_round_trip_bytes(tmp_path):
    report_path = str(tmp_path / "r.json")
    main(["run", "--gen", "hexagon:y=1", "--strategy", "uniform",
          "--report", report_path])
    text = open(report_path).read()
    assert dumps_report(json.loads(text)) == text


def test_svg_deterministic(tmp_path):
    report_path = str(tmp_path / "r.json")
    main(["run", "--gen", "square_with_center_obstacle", "--strategy", "uniform",
          "--report", report_path])
    out1 = str(tmp_path / "a.svg")
    out2 = str(tmp_path / "b.svg")
    assert main(["svg", report_path, out1]) == 0
    assert main(["svg", report_path, out2]) == 0
    svg1 = open(out1).read()
    assert svg1 == open(out2).read()
    assert "<polygon" in svg1 and "<polyline" in svg1 and "url(#hatch)" in svg1


def test_run_emits_medial_dump(tmp_path, square_file):
    dump = str(tmp_path / "axis.json")
    code = main(["run", "--algo", "rvcm", "--terrain", square_file,
                 "--a1", "0.2,0.2", "--a2", "0.8,0.8",
                 "--report", str(tmp_path / "r.json"), "--dump-medial", dump])
    assert code == 0
    axis = json.loads(open(dump).read())["medial_axis"]
    assert len(axis) == 4
    assert all(e["kind"] in ("segment", "arc") for e in axis)
    assert all(set(e) == {"kind", "p0", "p1", "sites", "length"} for e in axis)


def test_gen_specs():
    sc = parse_gen("hexagon:y=2,rot=1")
    assert abs(sc.expected_D - 6.0) < 1e-12
    sc2 = parse_gen("random:seed=3,outer=9,obstacles=1")
    assert len(sc2.terrain.obstacles) == 1
    with pytest.raises(Exception):
        parse_gen("nonsense:x=1")


def test_batch_small(tmp_path, capsys):
    code = main(["batch", "--seeds", "0:2", "--algos", "rv",
                 "--strategy", "uniform,jitter:1", "--outer", "8",
                 "--report", str(tmp_path / "summary.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "rv" in out
    summary = json.loads(open(tmp_path / "summary.json").read())
    assert summary["summary"]["rv"]["scenarios"] == 2
    assert summary["summary"]["rv"]["met"] == 2


def test_batch_empty(capsys):
    code = main(["batch", "--seeds", "0:0", "--algos", "rv"])
    assert code == 0
    out = capsys.readouterr().out
    assert "algorithm" in out


def test_exit_code_tracks_bounds(square_file):
    # coherent-compass requirement violated: exit 2
    code = main(["run", "--algo", "rvcm", "--terrain", square_file,
                 "--a1", "0.2,0.2,1,0.0", "--a2", "0.8,0.8,2,1.0"])
    assert code == 2


def test_run_scenario_requires_distinct_labels(holed_file):
    code = main(["run", "--algo", "rvo", "--terrain", holed_file,
                 "--a1", "1,1", "--a2", "9,9", "--labels", "3,3"])
    assert code == 2
