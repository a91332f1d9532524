import csv
import json
import subprocess
import sys

import pytest

from fairrank.cli import main
from fairrank.formats import read_candidates, read_ranking, write_candidates

from conftest import intro_ids, make_pool


@pytest.fixture
def files(tmp_path):
    universe = make_pool({"b": 10, "g": 5})
    platform = universe.subset(intro_ids([1, 2]))
    paths = {"universe": tmp_path / "universe.csv", "platform": tmp_path / "platform.csv"}
    paths["universe"].write_text(write_candidates(universe))
    paths["platform"].write_text(write_candidates(platform))
    return paths


def ranked_ids(path):
    with open(path, newline="") as fh:
        return [row["id"] for row in csv.DictReader(fh)]


def test_rank_round(files, tmp_path):
    out = tmp_path / "urr.csv"
    assert main(["rank", str(files["universe"]), "--policy", "round", "-o", str(out)]) == 0
    assert ranked_ids(out)[:6] == ["b1", "g1", "b2", "b3", "g2", "b4"]
    assert out.read_text().splitlines()[0] == "rank,id,attribute,score"


def test_rank_json_input(tmp_path):
    src = tmp_path / "c.json"
    src.write_text(json.dumps([{"id": "x", "attribute": "a", "score": 0.2}, {"id": "y", "attribute": "a", "score": 0.9}]))
    out = tmp_path / "r.csv"
    assert main(["rank", str(src), "-o", str(out)]) == 0
    assert ranked_ids(out) == ["y", "x"]


def test_rank_detconst_and_ratio_override(files, tmp_path):
    out = tmp_path / "r.csv"
    assert main(["rank", str(files["platform"]), "--policy", "detconst", "--ratio", "b=0.6666666666666666,g=0.3333333333333334", "-o", str(out)]) == 0
    assert ranked_ids(out)[:2] == ["b1", "g1"]


def test_rank_estimated_seeded(files, tmp_path, monkeypatch):
    args = ["rank", str(files["platform"]), "--policy", "estimated-ifrr", "--ratio", "b=0.6666666666666666,g=0.3333333333333334",
            "--activeness", "g=0.4,b=1.0"]
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert main(args + ["--seed", "11", "-o", str(a)]) == 0
    monkeypatch.setenv("FAIRRANK_SEED", "11")
    assert main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(args + ["--seed", "11", "--draw", "bernoulli", "-o", str(c)]) == 0
    assert sorted(ranked_ids(c)) == sorted(ranked_ids(a))


def test_rank_estimated_requires_activeness(files, capsys):
    assert main(["rank", str(files["platform"]), "--policy", "estimated-ifrr"]) == 2
    assert capsys.readouterr().err.startswith("ERROR MissingFlag")


def test_missing_file(tmp_path, capsys):
    assert main(["rank", str(tmp_path / "nope.csv")]) == 2
    assert capsys.readouterr().err.startswith("ERROR IoError")


def test_bad_candidate_file(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,attribute,score\nb1,b,0.5\nb1,b,0.4\n")
    assert main(["rank", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("ERROR DuplicateId: b1")


def test_ideal_modes(files, tmp_path):
    out = tmp_path / "ifrr.csv"
    assert main(["ideal", "--universe", str(files["universe"]), "--platform", str(files["platform"]), "--mode", "ifrr", "-o", str(out)]) == 0
    assert ranked_ids(out) == ["b1", "g1", "b2", "b3", "g2", "b4", "b5", "b6", "b7", "b8", "b9", "b10"]
    out = tmp_path / "gfrr.csv"
    assert main(["ideal", "--universe", str(files["universe"]), "--platform", str(files["platform"]), "--mode", "gfrr", "-o", str(out)]) == 0
    assert len(ranked_ids(out)) == 12


def test_ideal_identity(files, tmp_path):
    urr, same = tmp_path / "urr.csv", tmp_path / "same.csv"
    main(["rank", str(files["universe"]), "-o", str(urr)])
    main(["ideal", "--universe", str(files["universe"]), "--platform", str(files["universe"]), "-o", str(same)])
    assert urr.read_bytes() == same.read_bytes()


def test_ideal_foreign_platform(files, tmp_path, capsys):
    foreign = tmp_path / "foreign.csv"
    foreign.write_text("id,attribute,score\nzz,b,0.5\n")
    assert main(["ideal", "--universe", str(files["universe"]), "--platform", str(foreign)]) == 2
    assert "PlatformNotSubset" in capsys.readouterr().err


def test_analyze_intro(files, tmp_path):
    urr, lrr = tmp_path / "urr.csv", tmp_path / "lrr.csv"
    main(["rank", str(files["universe"]), "-o", str(urr)])
    main(["rank", str(files["platform"]), "-o", str(lrr)])
    out = tmp_path / "report"
    assert main(["analyze", str(lrr), str(urr), "--platform", str(files["platform"]), "--k", "6", "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())["reports"][0]
    assert report["totals"] == {"n_unfair": 1, "n_favored": 1, "n_absent": 0}
    with open(out / "report.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert {r["id"] for r in rows if r["kind"] == "candidate" and r["individually_unfair"] == "1"} == {"g2"}
    assert sum(r["kind"] == "group" for r in rows) == 2


def test_analyze_identical_and_clamped(files, tmp_path, capsys):
    lrr = tmp_path / "lrr.csv"
    main(["rank", str(files["platform"]), "-o", str(lrr)])
    capsys.readouterr()
    assert main(["analyze", str(lrr), str(lrr), "--platform", str(files["platform"]), "--k", "3,40"]) == 0
    captured = capsys.readouterr()
    reports = json.loads(captured.out)["reports"]
    assert [r["k"] for r in reports] == [3, 12]
    assert all(r["totals"] == {"n_unfair": 0, "n_favored": 0, "n_absent": 0} for r in reports)
    assert "WARNING k=40" in captured.err


def test_read_ranking_round_trip(files, tmp_path):
    out = tmp_path / "r.csv"
    main(["rank", str(files["universe"]), "-o", str(out)])
    r = read_ranking(out)
    assert r.top(3) == ("b1", "g1", "b2")
    assert len(read_candidates(files["universe"])) == 15


def test_simulate(tmp_path):
    cfg = tmp_path / "tiny.json"
    cfg.write_text(json.dumps({
        "group_specs": [{"attribute": "g", "size": 60}, {"attribute": "b", "size": 60}],
        "k_grid": [10, 20], "activeness_grid": [0.5], "trials": 2, "skew_top": 60,
    }))
    out = tmp_path / "out"
    assert main(["simulate", str(cfg), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["manifest.json", "missed_opportunity.csv", "rank_difference.csv", "skew.csv"]


def test_simulate_rejects_zero_trials(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"group_specs": [{"attribute": "g", "size": 5}], "trials": 0}))
    assert main(["simulate", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert capsys.readouterr().err.startswith("ERROR InvalidConfig")
    assert not (tmp_path / "o").exists()


def test_bundled_presets_load():
    from fairrank.cli import config_path
    from fairrank.simulation import ScenarioConfig

    assert ScenarioConfig.load(config_path("desk")).total_size == 3000
    assert ScenarioConfig.load(config_path("full")).total_size == 30000


def test_console_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "fairrank.cli", "rank", str(files["universe"])], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("1,b1,b,")
