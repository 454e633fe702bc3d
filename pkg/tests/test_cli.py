"""CLI tests: subcommands, exit codes, output files, seed discipline."""

import json
import math
from pathlib import Path

import pytest

from fanetsim.cli import main, read_results
from fanetsim.config import load_config
from fanetsim.simengine import RouterKind, derive_cell_seed, run_single

STATIC_2NODE = """
# two stationary nodes close together
arena_x = 50
arena_y = 50
arena_z = 10
nodes = 2
v_min = 0
v_max = 0
flows = 1
duration = 60
replications = 1
seed = 3
channel_rate_mbps = 2.0
routers = lb_opar
"""


@pytest.fixture
def static_config(tmp_path):
    path = tmp_path / "static.cfg"
    path.write_text(STATIC_2NODE)
    return path


def test_run_minimal_static(static_config, tmp_path):
    out = tmp_path / "results.csv"
    rc = main(["run", "--config", str(static_config), "--out", str(out)])
    assert rc == 0
    rows = read_results(out)
    assert len(rows) == 1
    assert rows[0]["router"] == "lb_opar"
    assert rows[0]["success_rate"] == 1.0
    flows = read_results(tmp_path / "results_flows.csv")
    assert len(flows) == 1
    assert flows[0]["success"] is True
    meta = json.loads((tmp_path / "results.csv.meta.json").read_text())
    assert meta["base_seed"] == 3
    assert len(meta["config_sha256"]) == 64


def test_run_replications_and_seed_discipline(tmp_path):
    cfg_path = tmp_path / "small.cfg"
    cfg_path.write_text(
        "nodes = 8\nflows = 2\nduration = 30\nreplications = 20\nseed = 5\n"
        "comm_range = 400\nrouters = reactive_hop, opar\n"
    )
    out = tmp_path / "rep.csv"
    assert main(["run", "--config", str(cfg_path), "--out", str(out)]) == 0
    rows = read_results(out)
    assert len(rows) == 40  # 2 routers x 20 replications
    per_router = {}
    for row in rows:
        per_router.setdefault(row["router"], []).append(row)
    for router_rows in per_router.values():
        assert len(router_rows) == 20
        seeds = [r["seed"] for r in router_rows]
        assert len(set(seeds)) == 20
    # Any row's seed reproduces that row's numbers exactly.
    cfg = load_config(str(cfg_path))
    probe = per_router["opar"][7]
    res = run_single(cfg, RouterKind.opar(cfg.opar_weights()), probe["seed"])
    assert res.success_rate == probe["success_rate"]
    assert res.mean_fct == probe["mean_fct_s"]
    assert probe["seed"] == derive_cell_seed(cfg.seed, probe["replication"])


def test_output_reparses_losslessly(static_config, tmp_path):
    out = tmp_path / "r.csv"
    main(["run", "--config", str(static_config), "--out", str(out)])
    rows = read_results(out)
    for row in rows:
        for key in ("success_rate", "weighted_throughput_mbps", "mean_fct_s"):
            assert isinstance(row[key], (int, float))
            assert math.isfinite(row[key])


def test_seed_override(static_config, tmp_path):
    out = tmp_path / "r.csv"
    main(["run", "--config", str(static_config), "--out", str(out),
          "--seed", "99"])
    meta = json.loads((tmp_path / "r.csv.meta.json").read_text())
    assert meta["base_seed"] == 99


def test_malformed_config_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nodes = 10\nwarp_speed = 9\n")
    out = tmp_path / "r.csv"
    assert main(["run", "--config", str(bad), "--out", str(out)]) == 2
    assert "warp_speed" in capsys.readouterr().err


def test_missing_config_exits_3(tmp_path):
    out = tmp_path / "r.csv"
    rc = main(["run", "--config", str(tmp_path / "nope.cfg"), "--out", str(out)])
    assert rc == 3


def test_unwritable_output_exits_3(static_config, tmp_path):
    rc = main(["run", "--config", str(static_config),
               "--out", str(tmp_path / "no" / "such" / "dir" / "r.csv")])
    assert rc == 3


def test_router_override(static_config, tmp_path):
    out = tmp_path / "r.csv"
    rc = main(["run", "--config", str(static_config), "--out", str(out),
               "--routers", "reactive_hop,proactive_hop"])
    assert rc == 0
    rows = read_results(out)
    assert sorted({r["router"] for r in rows}) == ["proactive_hop", "reactive_hop"]


class TestSweep:
    def test_degenerate_grid_matches_run(self, static_config, tmp_path):
        sweep_out = tmp_path / "sweep.csv"
        rc = main(["sweep-weights", "--config", str(static_config),
                   "--out", str(sweep_out), "--grid", "1,0,0"])
        assert rc == 0
        sweep_rows = read_results(sweep_out)
        assert len(sweep_rows) == 1
        run_out = tmp_path / "run.csv"
        main(["run", "--config", str(static_config), "--out", str(run_out),
              "--routers", "lb_opar"])
        run_rows = read_results(run_out)
        assert sweep_rows[0]["success_rate"] == run_rows[0]["success_rate"]
        assert sweep_rows[0]["mean_fct_s"] == run_rows[0]["mean_fct_s"]

    def test_w3_grid_has_eleven_points(self, static_config, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = main(["sweep-weights", "--config", str(static_config),
                   "--out", str(out), "--grid", "w3"])
        assert rc == 0
        rows = read_results(out)
        assert len(rows) == 11  # 11 grid points x 1 replication
        assert sorted({row["w3"] for row in rows}) == pytest.approx(
            [k / 10 for k in range(11)]
        )
        best = read_results(tmp_path / "sweep_best.csv")
        metrics = {row["metric"] for row in best}
        assert {"success_rate", "mean_fct", "weighted_throughput_mbps",
                "composite"} <= metrics

    def test_bad_grid_exits_2(self, static_config, tmp_path):
        rc = main(["sweep-weights", "--config", str(static_config),
                   "--out", str(tmp_path / "s.csv"), "--grid", "w1w2@nope"])
        assert rc == 2


class TestPredictEval:
    def test_stationary_network_has_zero_error(self, tmp_path):
        cfg_path = tmp_path / "pred.cfg"
        cfg_path.write_text(
            "arena_x = 500\narena_y = 500\narena_z = 50\nnodes = 6\n"
            "v_min = 0\nv_max = 0\nflows = 1\nduration = 50\n"
            "replications = 2\nseed = 8\ncomm_range = 400\n"
            "predict_warmup = 10\npredict_observation = 50\n"
        )
        out = tmp_path / "pred.csv"
        rc = main(["predict-eval", "--config", str(cfg_path), "--out", str(out)])
        assert rc == 0
        rows = read_results(out)
        assert rows, "expected at least one in-range link"
        for row in rows:
            assert row["observed_s"] == 50.0  # censored at the horizon
            assert row["error_kinematic_s"] == 0.0
            assert row["error_extrapolation_s"] == 0.0
        summary = read_results(tmp_path / "pred_summary.csv")
        by = {r["predictor"]: r for r in summary}
        assert by["kinematic"]["mean_abs_error_s"] == 0.0
        assert by["extrapolation"]["std_abs_error_s"] == 0.0

    def test_constant_velocity_error_within_tolerance(self, tmp_path):
        # Straight-line constant-speed motion matches the kinematic model
        # exactly, so prediction error is bounded by the bisection tolerance
        # on both sides (the observed crossing is interpolated).
        cfg_path = tmp_path / "cv.cfg"
        cfg_path.write_text(
            "arena_x = 100000\narena_y = 100000\narena_z = 1000\n"
            "nodes = 8\nmobility_model = gauss_markov3d\ngm_alpha = 1.0\n"
            "v_min = 5\nv_max = 15\nflows = 1\nduration = 50\n"
            "replications = 4\nseed = 12\ncomm_range = 5000\n"
            "predict_warmup = 5\npredict_observation = 200\n"
        )
        out = tmp_path / "cv.csv"
        rc = main(["predict-eval", "--config", str(cfg_path), "--out", str(out)])
        assert rc == 0
        rows = read_results(out)
        assert rows
        for row in rows:
            if row["observed_s"] < 200.0:  # uncensored crossings
                assert row["error_kinematic_s"] <= 2e-3
