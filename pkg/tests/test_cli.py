import csv
import io
import json
import math

import pytest

from roughsupport import cli, interval, verification
from roughsupport.circle import triple_density
from roughsupport.montecarlo import RunManifest


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_density_interval_corners(capsys):
    code, out, _ = run(["density-interval", "--grid", "2"], capsys)
    assert code == 0
    r = rows(out)
    assert len(r) == 4 and list(r[0]) == ["a1", "a2", "p"]
    by = {(float(x["a1"]), float(x["a2"])): float(x["p"]) for x in r}
    assert by[(0.0, 0.0)] == 0 and by[(-1.0, 1.0)] == pytest.approx(1.0, abs=1e-15)


def test_density_interval_round_trip(capsys, tmp_path):
    path = tmp_path / "p.csv"
    assert cli.main(["density-interval", "--grid", "7", "--out", str(path)]) == 0
    for r in rows(path.read_text()):
        assert float(r["p"]) == interval.pair_density(float(r["a1"]), float(r["a2"]))
    assert b"\r" not in path.read_bytes()


def test_density_circle(capsys):
    code, out, _ = run(["density-circle", "--grid", "41"], capsys)
    r = rows(out)
    assert code == 0 and list(r[0]) == ["theta1", "theta2", "p_T"]
    for x in r:
        t1, t2, p = float(x["theta1"]), float(x["theta2"]), float(x["p_T"])
        assert t1 + t2 >= math.pi - 1e-12
        assert p == triple_density(t1, t2, check=False)
    # a zero gap only occurs at the corners of the closed triangle
    gaps = [(float(x["theta1"]), float(x["theta2"]), 2 * math.pi - float(x["theta1"]) - float(x["theta2"]))
            for x in r]
    zero_gap = [float(x["p_T"]) for x, g in zip(r, gaps) if min(g) < 1e-12]
    assert len(zero_gap) == 3 and max(zero_gap) < 1e-12
    best = max(r, key=lambda x: float(x["p_T"]))
    t = (float(best["theta1"]), float(best["theta2"]))
    images = [(math.pi, math.pi / 2), (math.pi / 2, math.pi), (math.pi / 2, math.pi / 2)]
    assert min(max(abs(a - b) for a, b in zip(t, im)) for im in images) <= math.pi / 40 + 1e-12


def test_pstar_rows(capsys):
    _, out, _ = run(["pstar", "--steps", "4"], capsys)
    r = rows(out)
    assert [float(x["mu"]) for x in r] == [0, 0.25, 0.5, 0.75, 1]
    assert float(r[0]["p_star"]) == 1
    assert float(r[2]["p_star"]) == pytest.approx(0.252315, abs=1e-6)
    _, out, _ = run(["pstar", "--kind", "circle", "--mu", "0.5", "0.7"], capsys)
    assert [float(x["p_star"]) for x in rows(out)] == [0, 0]


def test_mc_files_are_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["mc", "--teeth", "100", "--trials", "3000", "--bins", "5", "--seed", "17"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()
    r = rows(a.read_text())
    assert list(r[0]) == list(cli.MC_HEADER)
    manifest = RunManifest.from_json(a.with_suffix(".json").read_text())
    assert manifest.master_seed == 17
    assert sum(int(x["count"]) for x in r) == 3000
    assert json.loads(a.with_suffix(".json").read_text())["fit"]["tv_distance"] >= 0


def test_mc_circle_counts_three_images(tmp_path):
    out = tmp_path / "c.csv"
    assert cli.main(["mc", "--kind", "circle", "--teeth", "101", "--trials", "500", "--bins", "4",
                     "--out", str(out)]) == 0
    assert sum(int(x["count"]) for x in rows(out.read_text())) == 1500


def test_comb_below(capsys):
    code, out, _ = run(["comb-below", "--depths", "2", "2", "--at", "-1", "1", "--trials", "20000"], capsys)
    r = rows(out)[0]
    assert code == 0 and float(r["limit"]) == pytest.approx(math.exp(-2))
    assert abs(float(r["z"])) <= 4


def test_robustness(capsys):
    code, out, _ = run(["robustness", "--teeth", "100", "--trials", "500", "--bins", "5",
                        "--variant", "uniform/midpoint", "uniform/midpoint"], capsys)
    assert code == 0 and "0 vs 1: 0.0000" in out


@pytest.mark.parametrize("argv", [
    ["density-interval", "--grid", "1"],
    ["pstar", "--mu", "1.5"],
    ["mc", "--teeth", "101"],
    ["mc", "--dist", "gauss"],
    ["comb-below", "--depths", "1", "--at", "-1", "1"],
    ["mc", "--placement", "sideways"],
    ["no-such-command"],
])
def test_usage_errors_exit_two(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_io_error_exits_one(tmp_path, capsys):
    assert cli.main(["density-interval", "--grid", "2", "--out", str(tmp_path / "missing" / "x.csv")]) == 1


def test_verify_detects_tampered_density(monkeypatch, capsys):
    monkeypatch.setattr(verification, "CRITERIA", {k: verification.CRITERIA[k] for k in (1, 4)})
    assert cli.main(["verify", "--profile", "fast"]) == 0
    true_density = interval.pair_density
    monkeypatch.setattr(interval, "pair_density", lambda a1, a2: 1.01 * true_density(a1, a2))
    assert cli.main(["verify", "--profile", "fast"]) == 1
    assert "FAIL" in capsys.readouterr().out
