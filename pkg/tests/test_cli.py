import json

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from modone import GOLDEN_ALPHA, ResultRecord, read_points, write_points
from modone.cli import run_cli


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def records_of(out):
    return [json.loads(line) for line in out.splitlines() if line]


# ---------------------------------------------------------------------------
# points files

def test_points_round_trip_exact(tmp_path, rng):
    vals = np.concatenate([rng.random(50) * 1e6, -rng.random(10), [0.1, 1e-300]])
    path = tmp_path / "pts.csv"
    write_points(path, vals)
    assert_array_equal(read_points(path), vals)


def test_points_header_validation(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("0.5\n")
    with pytest.raises(ValueError, match="header"):
        read_points(p)
    p.write_text("# modone-points v1 n=3\n0.5\n")
    with pytest.raises(ValueError, match="n=3"):
        read_points(p)


def test_result_record_round_trip():
    rec = ResultRecord(command="stat", statistic="pair_correlation",
                       value=1.995, n=100, seed=7, window="s=1",
                       error=0.01, error_kind="standard_error",
                       wall_time_ms=12.5)
    line = rec.to_json_line()
    assert ResultRecord.from_json_line(line) == rec
    # --no-timing drops only the timing field
    assert "wall_time_ms" not in rec.to_json_line(include_timing=False)


# ---------------------------------------------------------------------------
# subcommands

def test_gen_stat_pipeline(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    code, out, err = run(capsys, "gen", "--kind", "theorem1", "--c", "1",
                         "--n", "1000", "--seed", "7", "--out", str(pts))
    assert code == 0 and err == ""
    code, out, err = run(capsys, "stat", "--in", str(pts), "--ppc", "--s", "1.0")
    assert code == 0
    recs = records_of(out)
    assert len(recs) == 1
    assert recs[0]["statistic"] == "pair_correlation"
    assert recs[0]["n"] == 1000


def test_stat_disc_two_point_example(tmp_path, capsys):
    pts = tmp_path / "two.csv"
    write_points(pts, [0.25, 0.75])
    code, out, _ = run(capsys, "stat", "--in", str(pts), "--disc", "--no-timing")
    assert code == 0
    recs = records_of(out)
    assert recs[0]["statistic"] == "discrepancy"
    assert recs[0]["value"] == 0.5
    assert recs[1]["statistic"] == "star_discrepancy"
    assert recs[1]["value"] == 0.25


def test_stat_all_statistics(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    run(capsys, "gen", "--kind", "vdc", "--base", "2", "--n", "200",
        "--out", str(pts))
    code, out, _ = run(capsys, "stat", "--in", str(pts), "--ppc", "--s", "0.5",
                       "--klevel", "--k", "3", "--windows", "0:1,0:1",
                       "--disc", "--profile", "geom", "--energy", "--gamma", "0.5",
                       "--gaps", "--no-timing")
    assert code == 0
    names = [r["statistic"] for r in records_of(out)]
    assert names == ["pair_correlation", "k_level_correlation", "discrepancy",
                     "star_discrepancy", "max_n_discrepancy", "additive_energy",
                     "gap_ks_vs_exponential"]


def test_exp_single_trial_matches_stat(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    run(capsys, "gen", "--kind", "arith", "--alpha", repr(GOLDEN_ALPHA),
        "--n", "500", "--out", str(pts))
    code, out, _ = run(capsys, "stat", "--in", str(pts), "--ppc", "--s", "1.0",
                       "--no-timing")
    stat_value = records_of(out)[0]["value"]

    config = tmp_path / "plan.json"
    config.write_text(json.dumps({
        "generator": {"kind": "arithmetic", "alpha": GOLDEN_ALPHA},
        "n_schedule": [500],
        "windows": [{"pair_s": 1.0}],
        "trials": 1,
        "master_seed": 7,
        "alpha_mode": {"fixed": 1.0},
    }))
    code, out, _ = run(capsys, "exp", "--config", str(config), "--no-timing")
    assert code == 0
    rec = records_of(out)[0]
    assert rec["value"] == stat_value
    assert rec["error_kind"] == "standard_error"


def test_check_gcond(capsys):
    code, out, _ = run(capsys, "check", "--what", "gcond", "--scale", "beck",
                       "--c", "1", "--kind", "arith",
                       "--alpha", repr(GOLDEN_ALPHA), "--n", "20000",
                       "--ratio", "1.12", "--no-timing")
    assert code == 0
    recs = records_of(out)
    assert [r["statistic"] for r in recs] == [
        "g_over_discrepancy_diverges", "n_times_g_diverges",
        "stretch_ratio_to_one"]
    assert all(r["value"] == 1.0 for r in recs)


def test_check_energy(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    run(capsys, "gen", "--kind", "theorem1", "--c", "1", "--n", "256",
        "--seed", "5", "--out", str(pts))
    code, out, _ = run(capsys, "check", "--what", "energy", "--in", str(pts),
                       "--gamma", "0.2", "--no-timing")
    assert code == 0
    recs = records_of(out)
    assert recs[0]["statistic"] == "energy_normalized"
    assert recs[1]["value"] == 1.0    # upper bound holds


# ---------------------------------------------------------------------------
# determinism and error handling

def test_cli_byte_determinism(tmp_path, capsys):
    outputs = []
    for _ in range(2):
        pts = tmp_path / "pts.csv"
        run(capsys, "gen", "--kind", "theorem1", "--c", "1", "--n", "500",
            "--seed", "42", "--out", str(pts))
        blob = pts.read_bytes()
        _, out1, _ = run(capsys, "stat", "--in", str(pts), "--ppc", "--s", "1",
                         "--gaps", "--disc", "--no-timing")
        config = tmp_path / "plan.json"
        config.write_text(json.dumps({
            "generator": {"kind": "theorem1", "c": 1.0},
            "n_schedule": [200, 400],
            "windows": [{"pair_s": 1.0}, {"k": 3, "intervals": [[0, 1], [0, 1]]}],
            "trials": 3, "master_seed": 9,
            "alpha_mode": {"uniform": [1.0, 2.0]}}))
        _, out2, _ = run(capsys, "exp", "--config", str(config), "--no-timing")
        outputs.append((blob, out1, out2))
    assert outputs[0] == outputs[1]


def test_exit_code_validation_errors(tmp_path, capsys):
    code, _, err = run(capsys, "stat", "--in", str(tmp_path / "nope.csv"), "--ppc")
    assert code == 1 and err.startswith("modone: error:")
    code, _, err = run(capsys, "gen", "--kind", "arith", "--n", "5",
                       "--out", str(tmp_path / "x.csv"))
    assert code == 1
    code, _, err = run(capsys, "stat", "--in", str(tmp_path / "nope.csv"))
    assert code == 1
    code, _, err = run(capsys, "bogus-subcommand")
    assert code == 1
    code, _, err = run(capsys, "gen", "--kind", "theorem1", "--n", "5",
                       "--out", str(tmp_path / "x.csv"))   # missing seed and c
    assert code == 1


def test_stat_klevel_requires_windows(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    write_points(pts, [0.1, 0.2, 0.3])
    code, _, err = run(capsys, "stat", "--in", str(pts), "--klevel")
    assert code == 1 and "windows" in err


def test_malformed_windows_spec(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    write_points(pts, [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7])
    code, _, err = run(capsys, "stat", "--in", str(pts), "--klevel", "--k", "3",
                       "--windows", "0:1,zz")
    assert code == 1


def test_config_requires_master_seed(tmp_path, capsys):
    config = tmp_path / "plan.json"
    config.write_text(json.dumps({
        "generator": {"kind": "theorem1", "c": 1.0},
        "n_schedule": [100], "windows": [{"pair_s": 1.0}], "trials": 1}))
    code, _, err = run(capsys, "exp", "--config", str(config))
    assert code == 1 and "master_seed" in err


def test_out_flag_writes_file(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    write_points(pts, [0.25, 0.75])
    target = tmp_path / "records.jsonl"
    code, out, _ = run(capsys, "stat", "--in", str(pts), "--disc",
                       "--no-timing", "--out", str(target))
    assert code == 0 and out == ""
    assert len(target.read_text().splitlines()) == 2
