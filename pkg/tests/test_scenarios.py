"""Scenario configs, the run pipeline, artifact files and the CLI surface."""

import json
import subprocess
import sys

import numpy as np
import pytest

from chronodyn.chronometry import DegenerateForceError
from chronodyn.frames import load_worldline_csv
from chronodyn.scenarios import (
    ScenarioConfigError,
    build_force,
    bundled_scenario_path,
    load_scenario,
    parse_scenario,
    run_perturb,
    run_scenario,
)


def _cyclotron_cfg(**overrides):
    cfg = {
        "name": "t-cyc",
        "v0": 0.6,
        "particle": {"m0": 1.0, "e": 1.0},
        "analytic": {"kind": "cyclotron", "u0_prime": 0.3, "B_prime": 1.0},
        "time_grid": {"periods": 1.5, "per_period": 600},
        "timemap_method": "kinematic",
    }
    cfg.update(overrides)
    return cfg


def _field_cfg(**overrides):
    cfg = {
        "name": "t-field",
        "v0": 0.5,
        "particle": {"m0": 1.0, "e": 1.0},
        "field": {"E": [0.0, 0.0, 0.0], "B": [0.0, 0.0, 1.0]},
        "initial": {"r": [0.0, 0.0, 0.0], "u": [0.3, 0.0, 0.0]},
        "integrator": {"method": "rk4", "dt": 0.01, "n_steps": 700},
        "timemap_method": "dynamic",
    }
    cfg.update(overrides)
    return cfg


# -- parsing and validation --------------------------------------------------

def test_parse_rejects_missing_name():
    cfg = _cyclotron_cfg()
    del cfg["name"]
    with pytest.raises(ScenarioConfigError, match="name"):
        parse_scenario(cfg)


def test_parse_rejects_superluminal_v0():
    with pytest.raises(ScenarioConfigError, match="v0"):
        parse_scenario(_cyclotron_cfg(v0=1.0))


def test_parse_rejects_field_and_analytic_together():
    cfg = _cyclotron_cfg()
    cfg["field"] = {"E": [0, 0, 0], "B": [0, 0, 1]}
    with pytest.raises(ScenarioConfigError, match="exactly one"):
        parse_scenario(cfg)


def test_parse_rejects_neither_field_nor_analytic():
    cfg = _cyclotron_cfg()
    del cfg["analytic"]
    with pytest.raises(ScenarioConfigError, match="exactly one"):
        parse_scenario(cfg)


def test_parse_rejects_unknown_kind_and_outputs():
    with pytest.raises(ScenarioConfigError, match="kind"):
        parse_scenario(
            _cyclotron_cfg(analytic={"kind": "spiral", "u0_prime": 0.3, "B_prime": 1.0})
        )
    with pytest.raises(ScenarioConfigError, match="outputs"):
        parse_scenario(_cyclotron_cfg(outputs=["worldline", "plots"]))


def test_parse_rejects_bad_particle_and_method():
    with pytest.raises(ScenarioConfigError, match="m0"):
        parse_scenario(_cyclotron_cfg(particle={"m0": -1.0, "e": 1.0}))
    with pytest.raises(ScenarioConfigError, match="timemap_method"):
        parse_scenario(_cyclotron_cfg(timemap_method="magic"))


def test_parse_rejects_bad_analytic_params():
    with pytest.raises(ScenarioConfigError, match="analytic"):
        parse_scenario(
            _cyclotron_cfg(analytic={"kind": "cyclotron", "u0_prime": 1.5, "B_prime": 1.0})
        )


def test_parse_rejects_periods_grid_for_uniform_e():
    cfg = _cyclotron_cfg(
        analytic={"kind": "uniform_e", "E_prime": [1.0, 0.0, 0.0]},
    )
    with pytest.raises(ScenarioConfigError, match="periods"):
        parse_scenario(cfg)


def test_load_scenario_reports_json_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x",\n  "v0": }')
    with pytest.raises(ScenarioConfigError, match="line 2"):
        load_scenario(bad)


# -- run pipeline ------------------------------------------------------------

def test_run_cyclotron_scenario(tmp_path):
    sc = parse_scenario(_cyclotron_cfg())
    summary = run_scenario(sc, tmp_path)
    assert abs(summary["period"]["ratio_numeric"] - 1.25) < 1e-9
    assert summary["energy"]["max_relative_drift"] < 1e-12
    assert summary["timemap"]["agreement"]["kinematic_vs_ratio"] < 1e-12
    for name in (
        "worldline_kprime.csv",
        "worldline_kprime.meta.json",
        "worldline_k.csv",
        "worldline_k.meta.json",
        "timemap.csv",
        "energy.csv",
        "summary.json",
    ):
        assert (tmp_path / name).exists(), name
    w = load_worldline_csv(tmp_path / "worldline_kprime.csv")
    assert len(w) == summary["n_samples"]
    meta = json.loads((tmp_path / "worldline_kprime.meta.json").read_text())
    assert meta["boost"]["v0"] == 0.6
    assert meta["field"]["B"] == [0.0, 0.0, 1.0]
    on_disk = json.loads((tmp_path / "summary.json").read_text())
    assert on_disk == json.loads(json.dumps(summary, default=float))


def test_run_field_scenario_with_dynamic_map(tmp_path):
    sc = parse_scenario(_field_cfg())
    summary = run_scenario(sc, tmp_path)
    assert summary["timemap"]["method"] == "dynamic"
    assert summary["timemap"]["agreement"]["kinematic_vs_dynamic"] < 1e-9


def test_run_uniform_e_scenario(tmp_path):
    cfg = _cyclotron_cfg(
        analytic={"kind": "uniform_e", "E_prime": [1.0, 0.0, 0.0]},
        time_grid={"t0": 0.0, "t1": 3.0, "n": 601},
        timemap_method="ratio",
    )
    summary = run_scenario(parse_scenario(cfg), tmp_path)
    assert summary["period"] is None
    assert summary["energy"]["max_relative_drift"] < 1e-10


def test_run_osc_drift_dynamic_is_degenerate(tmp_path):
    cfg = _cyclotron_cfg(
        analytic={
            "kind": "osc_drift",
            "a_prime": [0.2, 0.0, 0.0],
            "omega_prime": 1.0,
            "u0_prime": [0.1, 0.0, 0.0],
        },
        timemap_method="dynamic",
    )
    with pytest.raises(DegenerateForceError):
        run_scenario(parse_scenario(cfg), tmp_path)


def test_run_is_deterministic(tmp_path):
    sc = parse_scenario(_cyclotron_cfg())
    a, b = tmp_path / "a", tmp_path / "b"
    run_scenario(sc, a)
    run_scenario(sc, b)
    for p in sorted(a.iterdir()):
        assert p.read_bytes() == (b / p.name).read_bytes(), p.name


# -- forces from config ------------------------------------------------------

def test_build_force_kinds():
    f = build_force({"kind": "harmonic", "k": 2.0})
    assert np.array_equal(f(np.array([1.0, 0, 0]), np.zeros(3), 0.0), [-2.0, 0, 0])
    f = build_force({"kind": "constant", "F": [0.0, 1.0, 0.0]})
    assert np.array_equal(f(np.ones(3), np.ones(3), 5.0), [0.0, 1.0, 0.0])
    f = build_force({"kind": "damped_harmonic", "k": 1.0, "c": 0.5})
    assert np.array_equal(
        f(np.array([1.0, 0, 0]), np.array([0, 2.0, 0]), 0.0), [-1.0, -1.0, 0.0]
    )
    f = build_force({"kind": "anharmonic", "k": 1.0, "eps": 1.0})
    assert np.array_equal(f(np.array([1.0, 0, 0]), np.zeros(3), 0.0), [-2.0, 0, 0])
    with pytest.raises(ScenarioConfigError, match="kind"):
        build_force({"kind": "mystery"})


def test_run_perturb(tmp_path):
    cfg = {
        "name": "t-perturb",
        "force": {"kind": "harmonic", "k": 1.0},
        "m0": 1.0,
        "initial": {"r": [1.0, 0.0, 0.0], "u": [0.0, 0.0, 0.0]},
        "correction_initial": {"r1": [1e-3, 0.0, 0.0], "u1": [0.0, 0.0, 0.0]},
        "v0": 0.002,
        "t_span": [0.0, 6.283185307179586],
        "dt": 2e-3,
    }
    summary = run_perturb(cfg, tmp_path)
    assert summary["max_correction"] == pytest.approx(1e-3, rel=1e-6)
    assert summary["expansion_residual"] < 1e-12  # linear force: exact expansion
    lines = (tmp_path / "run.csv").read_text().splitlines()
    assert lines[0] == "t,r0x,r0y,r0z,r1x,r1y,r1z,Fx,Fy,Fz"
    row = [float(v) for v in lines[1].split(",")]
    assert row[1] == 1.0 and row[4] == 1e-3


# -- CLI surface -------------------------------------------------------------

def _cli(*args, env=None):
    import os

    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "chronodyn.cli", *args],
        capture_output=True,
        text=True,
        env=full_env,
    )


def test_cli_simulate_bundled(tmp_path):
    out = tmp_path / "run"
    proc = _cli("simulate", str(bundled_scenario_path("cyclotron")), "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    summary = json.loads(proc.stdout)
    assert abs(summary["period"]["ratio_numeric"] - 1.25) < 1e-9
    assert (out / "summary.json").exists()


def test_cli_out_dir_env_var(tmp_path):
    cfg = tmp_path / "sc.json"
    cfg.write_text(json.dumps(_cyclotron_cfg(outputs=["summary"])))
    proc = _cli("simulate", str(cfg), env={"CHRONO_OUT_DIR": str(tmp_path / "envout")})
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "envout" / "summary.json").exists()


def test_cli_config_error_exit_2(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps(_cyclotron_cfg(v0=2.0)))
    proc = _cli("simulate", str(cfg))
    assert proc.returncode == 2
    assert "v0" in proc.stderr


def test_cli_numeric_error_exit_3(tmp_path):
    cfg = tmp_path / "free.json"
    cfg.write_text(
        json.dumps(
            _field_cfg(
                field={"E": [0, 0, 0], "B": [0, 0, 0]},
                integrator={"method": "rk4", "dt": 0.01, "n_steps": 50},
            )
        )
    )
    proc = _cli("simulate", str(cfg))
    assert proc.returncode == 3
    assert "zero 4-force" in proc.stderr


def test_cli_verify_list():
    proc = _cli("verify", "--list")
    assert proc.returncode == 0
    lines = [ln for ln in proc.stdout.splitlines() if ln.strip()]
    assert len(lines) == 10


def test_cli_timemap_uses_sidecar(tmp_path):
    out = tmp_path / "sim"
    run_scenario(parse_scenario(_cyclotron_cfg()), out)
    proc = _cli(
        "timemap", str(out / "worldline_kprime.csv"), "--method", "dynamic",
        "--out", str(tmp_path / "tm"),
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "tm" / "timemap.csv").exists()


def test_cli_timemap_requires_v0_without_sidecar(tmp_path):
    out = tmp_path / "sim"
    run_scenario(parse_scenario(_cyclotron_cfg()), out)
    bare = tmp_path / "bare.csv"
    bare.write_bytes((out / "worldline_kprime.csv").read_bytes())
    proc = _cli("timemap", str(bare))
    assert proc.returncode == 2
    assert "--v0" in proc.stderr
    proc = _cli("timemap", str(bare), "--v0", "0.6", "--out", str(tmp_path / "tm2"))
    assert proc.returncode == 0, proc.stderr


def test_cli_perturb(tmp_path):
    cfg = tmp_path / "p.json"
    cfg.write_text(
        json.dumps(
            {
                "name": "cli-perturb",
                "force": {"kind": "harmonic", "k": 1.0},
                "initial": {"r": [1.0, 0.0, 0.0], "u": [0.0, 0.0, 0.0]},
                "correction_initial": {"r1": [0.001, 0.0, 0.0]},
                "t_span": [0.0, 3.0],
                "dt": 0.002,
            }
        )
    )
    proc = _cli("perturb", str(cfg), "--out", str(tmp_path / "pout"))
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "pout" / "run.csv").exists()
    summary = json.loads(proc.stdout)
    assert summary["max_correction"] > 0.0
