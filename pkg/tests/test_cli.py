import json

import pytest
from hypothesis import given, settings, strategies as st

from leafavg.cli import main

import oracles

ROT = '{"type": "rotation", "alpha": "sqrt(2)"}'


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_ball_prints_52(capsys):
    rc, out, _ = run(capsys, "ball", "--k", "2", "--n", "3")
    assert rc == 0 and out.strip() == "52"


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_ball_matches_closed_form(k, n):
    import contextlib
    import io
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        assert main(["ball", "--k", str(k), "--n", str(n)]) == 0
    assert int(buf.getvalue()) == oracles.closed_form_ball(k, n)


def test_certificate_gap(capsys):
    rc, out, _ = run(capsys, "certificate", "--preset", "f2-thin", "--N", "12")
    assert rc == 0
    cert = json.loads(out)
    assert cert["gap"] >= 0.49


def test_output_is_deterministic(capsys):
    a = run(capsys, "lambda", "--N", "6")[1]
    b = run(capsys, "lambda", "--N", "6")[1]
    assert a == b
    assert list(json.loads(a)) == sorted(json.loads(a))


def test_orbit_rotation_sizes(capsys):
    rc, out, _ = run(capsys, "orbit", "--action", ROT, "--y", "0", "--n", "4")
    assert rc == 0
    assert json.loads(out)["sizes"][1:] == [2, 4, 6, 8]


def test_folner_and_ball_average(capsys):
    rc, out, _ = run(capsys, "folner", "--a", "a1", "--n", "3")
    assert rc == 0 and json.loads(out)["defect"] <= json.loads(out)["bound"]
    rc, out, _ = run(capsys, "ball-average", "--action", ROT, "--y", "0", "--radii", "1,2,3")
    assert rc == 0 and [s["index"] for s in json.loads(out)["samples"]] == [1, 2, 3]


def test_sandwich_orders_bounds(capsys):
    rc, out, _ = run(capsys, "sandwich", "--action", ROT, "--y", "0", "--r", "40")
    d = json.loads(out)
    assert rc == 0 and d["lower"] <= d["upper"]


def test_hypothesis_warning_exits_zero_with_flag(capsys):
    rc, out, _ = run(capsys, "small-limits", "--N", "8")
    d = json.loads(out)
    assert rc == 0
    assert d["hypothesis_warning"] is True and d["warnings"]


def test_small_limits_rotation_no_flag(capsys):
    rc, out, _ = run(capsys, "small-limits", "--action", ROT, "--y", "0", "--N", "200")
    d = json.loads(out)
    assert rc == 0 and d["hypothesis_warning"] is False
    assert d["gap"] < 0.05


def test_resource_cap_exit_3(capsys):
    rc, _, err = run(capsys, "ball", "--k", "2", "--n", "40")
    assert rc == 3 and "cap" in err


@pytest.mark.parametrize("argv", [
    ["orbit", "--action", '{"type": "bogus"}'],
    ["orbit", "--action", "{not json"],
    ["ball", "--bogus"],
    ["plug-tree", "--n", "2", "--k", "9"],
    ["corner-plug", "--alpha", "-1"],
])
def test_schema_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_config_merges_and_rejects_unknown(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"k": 3, "n": 2}))
    rc, out, _ = run(capsys, "--config", str(good), "ball")
    assert rc == 0 and int(out) == oracles.closed_form_ball(3, 2)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"radius": 2}))
    rc, _, err = run(capsys, "--config", str(bad), "ball")
    assert rc == 2 and "radius" in err


def test_config_accepts_nested_action(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"action": {"type": "rotation", "alpha": "sqrt(2)"}, "y": "0",
                               "n": 2}))
    rc, out, _ = run(capsys, "--config", str(cfg), "orbit")
    assert rc == 0 and json.loads(out)["sizes"][-1] == 4


def test_out_dir_manifest(tmp_path, capsys):
    rc, _, _ = run(capsys, "--out", str(tmp_path), "small-limits", "--action", ROT, "--y", "0",
                   "--N", "30")
    assert rc == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    files = {e["file"] for e in man["artifacts"]}
    assert files == {"result.json", "series.csv"}
    for e in man["artifacts"]:
        assert (tmp_path / e["file"]).exists()
        assert "tol" in e


def test_plug_tree(capsys):
    rc, out, _ = run(capsys, "plug-tree", "--n", "3", "--k", "5", "--r0", "2")
    d = json.loads(out)
    assert rc == 0
    assert all(d["distances"][i][j] == (0.0 if i == j else 12.0)
               for i in range(5) for j in range(5))
    assert d["tree_hops"] == [3] * 8


def test_flow_and_trajectory(capsys):
    rc, out, _ = run(capsys, "flow", "--t", "0")
    assert rc == 0 and json.loads(out) == {"t": 0.0, "x": 0.1, "y": 0.0}
    rc, out, _ = run(capsys, "flow", "--t", "1", "--dt", "0.5")
    lines = out.strip().splitlines()
    assert rc == 0 and lines[0] == "t,x,y" and len(lines) == 6


def test_time_and_rotation_average(capsys):
    rc, out, _ = run(capsys, "time-average", "--T", "10,100")
    assert rc == 0 and len(json.loads(out)["samples"]) == 2
    rc, out, _ = run(capsys, "rotation-average", "--r", "50,200")
    res = json.loads(out)["results"]
    assert rc == 0
    for row in res:
        assert row["difference"] <= row["error"] + 1e-12


def test_sigma_subcommand_small(capsys, tmp_path):
    rc, out, _ = run(capsys, "--out", str(tmp_path), "sigma", "--L", "11", "--depth", "1",
                     "--distance", "1,0,0,-5", "1,0,1,5")
    d = json.loads(out)
    assert rc == 0
    assert d["height_difference"] <= d["distance"] + d["error_bound"]
    assert (tmp_path / "manifest.json").exists()


def test_sigma_bad_point(capsys):
    rc, _, err = run(capsys, "sigma", "--L", "11", "--depth", "1", "--ball", "1,0,0,5")
    assert rc == 2


def test_sigma_depth_cap(capsys):
    rc, _, _ = run(capsys, "sigma", "--L", "11", "--depth", "9")
    assert rc == 3


def test_sigma_series_two_csv(capsys):
    rc, out, _ = run(capsys, "sigma", "--L", "11", "--depth", "1", "--series")
    assert rc == 0
    assert out.count("r,average,error") == 2
