"""Configuration parsing and the command-line interface."""

import json
import subprocess
import sys

import numpy as np
import pytest

from pnedge.cli import main
from pnedge.config import RunConfig, box_radii, parse_config, parse_config_text
from pnedge.io import config_hash, write_csv


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def test_default_roundtrip():
    cfg = RunConfig()
    assert parse_config_text(cfg.echo()) == cfg


def test_echo_includes_derived_zeta():
    cfg = RunConfig()
    assert f"zeta = {cfg.zeta:.17g}" in cfg.echo()


def test_roundtrip_with_overrides():
    cfg = parse_config(None, {"N": "8192", "nu": "0.3", "seed": "7"})
    assert cfg.N == 8192 and cfg.nu == 0.3 and cfg.seed == 7
    assert parse_config_text(cfg.echo()) == cfg


def test_unknown_key_rejected():
    with pytest.raises(ValueError, match="unknown config key 'wibble'"):
        parse_config_text("wibble = 3\n")


def test_nu_out_of_range_names_key():
    with pytest.raises(ValueError, match="'nu'"):
        parse_config_text("nu = 0.6\n")


def test_inconsistent_zeta_rejected():
    with pytest.raises(ValueError, match="zeta"):
        parse_config_text("zeta = 0.9\n")


def test_flag_overrides_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("N = 4096\nseed = 3\n")
    cfg = parse_config(path, {"N": "8192"})
    assert cfg.N == 8192
    assert cfg.seed == 3


def test_box_radii_parsing():
    cfg = RunConfig(energy_box_radii_over_zeta="5, 10,20")
    np.testing.assert_allclose(box_radii(cfg), np.array([5, 10, 20]) * cfg.zeta)


def test_config_hash_stable():
    assert config_hash(RunConfig().echo()) == config_hash(RunConfig().echo())
    assert config_hash(RunConfig().echo()) != config_hash(RunConfig(N=8192).echo())


# ---------------------------------------------------------------------------
# CLI plumbing
# ---------------------------------------------------------------------------

def _fast_overrides(tmp_path, **extra):
    args = [
        "--output", str(tmp_path / "out"),
        "--set", "L_over_zeta=100", "--N", "512",
        "--set", "static_init=analytic",
    ]
    for key, value in extra.items():
        args += ["--set", f"{key}={value}"]
    return args


def test_cli_solve_static_writes_artifacts(tmp_path):
    rc = main(_fast_overrides(tmp_path) + ["solve-static"])
    assert rc == 0
    out = tmp_path / "out"
    header = (out / "profile.csv").read_text().splitlines()[0]
    assert header == "x,u1,v,rho,residual"
    summary = json.loads((out / "summary.json").read_text())
    assert summary["residual_linf"] <= 1e-10
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "solve-static"
    assert len(manifest["config_hash"]) == 64


def test_cli_refuses_existing_output(tmp_path):
    args = _fast_overrides(tmp_path)
    assert main(args + ["solve-static"]) == 0
    assert main(args + ["solve-static"]) == 2  # refused without --overwrite
    assert main(args + ["--overwrite", "solve-static"]) == 0


def test_cli_deterministic_outputs(tmp_path):
    args1 = [
        "--output", str(tmp_path / "a"), "--N", "512",
        "--set", "L_over_zeta=100", "--set", "static_init=analytic",
        "--seed", "9",
    ]
    args2 = [a.replace(str(tmp_path / "a"), str(tmp_path / "b")) for a in args1]
    assert main(args1 + ["solve-static"]) == 0
    assert main(args2 + ["solve-static"]) == 0
    csv_a = (tmp_path / "a" / "profile.csv").read_bytes()
    csv_b = (tmp_path / "b" / "profile.csv").read_bytes()
    assert csv_a == csv_b
    ha = json.loads((tmp_path / "a" / "manifest.json").read_text())["config_hash"]
    hb = json.loads((tmp_path / "b" / "manifest.json").read_text())["config_hash"]
    assert ha != hb  # output path differs in the config


def test_cli_extend(tmp_path):
    rc = main(_fast_overrides(tmp_path, ylevels_count=4) + ["extend"])
    assert rc == 0
    out = tmp_path / "out"
    for name in ("u1", "u2", "sigma11", "sigma12", "sigma22", "sigma33"):
        assert (out / f"{name}.csv").exists()
    header = (out / "u1.csv").read_text().splitlines()[0]
    assert header == "x,y,value"
    manifest = json.loads((out / "manifest.json").read_text())
    assert "gauges" in manifest


def test_cli_energy(tmp_path):
    rc = main(_fast_overrides(
        tmp_path, energy_n_perturbations=2, energy_quad_levels=48,
        energy_y_max_over_zeta=50,
        energy_box_radii_over_zeta="5,10,20") + ["energy"])
    assert rc == 0
    payload = json.loads((tmp_path / "out" / "energy.json").read_text())
    assert len(payload["perturbations"]) == 2
    assert payload["log_divergence"]["r_squared"] > 0.99
    rows = (tmp_path / "out" / "energy_box.csv").read_text().splitlines()
    assert rows[0] == "R,E"
    assert len(rows) == 4


def test_cli_energy_breakdowns_deterministic(tmp_path):
    common = dict(energy_n_perturbations=2, energy_quad_levels=48,
                  energy_y_max_over_zeta=50, energy_box_radii_over_zeta="5,10,20")
    rc = main(_fast_overrides(tmp_path, **common) + ["energy"])
    assert rc == 0
    first = (tmp_path / "out" / "energy.json").read_bytes()
    rc = main(_fast_overrides(tmp_path, **common) + ["--overwrite", "energy"])
    assert rc == 0
    assert (tmp_path / "out" / "energy.json").read_bytes() == first


def test_cli_dynamics(tmp_path):
    rc = main(_fast_overrides(
        tmp_path, dynamics_T_end=1.0, dynamics_dt=0.1,
        dynamics_snapshot_times="0.5") + ["dynamics"])
    assert rc == 0
    out = tmp_path / "out"
    rows = (out / "trace.csv").read_text().splitlines()
    assert rows[0] == "t,F,Q,residual,dt"
    assert (out / "snapshot_t0.5.csv").exists()
    assert (out / "snapshot_t1.csv").exists()


def test_cli_dynamics_underflow_exit_code(tmp_path, monkeypatch):
    import pnedge.cli as climod
    from pnedge.dynamics import DynamicsTrace
    from pnedge.errors import TimeStepUnderflowError

    def broken(*args, **kwargs):
        trace = DynamicsTrace()
        trace.record(0.0, 1.0, 1.0, 1.0, 0.0)
        raise TimeStepUnderflowError("forced underflow", trace=trace)

    monkeypatch.setattr(climod, "run_dynamics", broken)
    rc = main(_fast_overrides(tmp_path) + ["dynamics"])
    assert rc == 2
    assert (tmp_path / "out" / "trace.csv").exists()


def test_cli_validate_failure_exit_code(tmp_path, monkeypatch):
    import pnedge.cli as climod
    from pnedge.validation import CheckResult

    fake = [CheckResult(name="x", expected="", actual=1.0, tolerance=0.5, passed=False)]
    monkeypatch.setattr(climod, "run_validation", lambda cfg: fake)
    rc = main(["--output", str(tmp_path / "v"), "validate"])
    assert rc == 1
    report = json.loads((tmp_path / "v" / "report.json").read_text())
    assert report["all_pass"] is False


def test_cli_validate_success_exit_code(tmp_path, monkeypatch):
    import pnedge.cli as climod
    from pnedge.validation import CheckResult

    fake = [CheckResult(name="x", expected="", actual=0.1, tolerance=0.5, passed=True)]
    monkeypatch.setattr(climod, "run_validation", lambda cfg: fake)
    rc = main(["--output", str(tmp_path / "v"), "validate"])
    assert rc == 0


def test_cli_bad_config_exit_code(tmp_path):
    rc = main(["--set", "nu=0.7", "--output", str(tmp_path / "x"), "solve-static"])
    assert rc == 2


def test_cli_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "pnedge.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "solve-static" in proc.stdout


def test_write_csv_17_digits(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, {"x": np.array([1.0 / 3.0]), "value": np.array([np.pi])})
    body = path.read_text().splitlines()
    assert body[0] == "x,value"
    x_back, v_back = (float(tok) for tok in body[1].split(","))
    assert x_back == 1.0 / 3.0
    assert v_back == np.pi


def test_write_samples_csv_roundtrip(tmp_path):
    from pnedge.io import write_samples_csv

    x = np.linspace(-1, 1, 7)
    vals = np.sin(x) / 3.0
    path = tmp_path / "samples.csv"
    write_samples_csv(path, x, vals)
    rows = path.read_text().splitlines()
    assert rows[0] == "x,value"
    back = np.array([[float(t) for t in row.split(",")] for row in rows[1:]])
    np.testing.assert_array_equal(back[:, 0], x)
    np.testing.assert_array_equal(back[:, 1], vals)
