"""Configuration validation, serialization, batch runner, and the CLI."""

import json

import numpy as np
import pytest

from virialwave.config import SimConfig, build_initial_state
from virialwave.runner import (convergence_study, fit_order, report_standing_wave, run,
                               run_inequalities)
from virialwave.cli import main


def _base_dict(**over):
    d = {
        "n_x": 16, "n_z": 12,
        "depth": {"kind": "finite", "h": 1.0},
        "g": 1.0, "dt": 0.05, "t_end": 0.5, "output_stride": 0.1,
        "initial_condition": {"kind": "linear_standing", "eps": 0.01, "k": 1},
        "identity_set": ["virial_rate", "rellich"],
        "seed": 3,
    }
    d.update(over)
    return d


def test_config_roundtrip():
    cfg = SimConfig.from_dict(_base_dict())
    again = SimConfig.from_dict(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()
    assert cfg.config_hash() == again.config_hash()
    assert json.loads(cfg.canonical_json()) == cfg.to_dict()


def test_config_rejections():
    with pytest.raises(ValueError, match="unknown key"):
        SimConfig.from_dict(_base_dict(bogus=1))
    with pytest.raises(ValueError, match="required"):
        SimConfig.from_dict({k: v for k, v in _base_dict().items() if k != "g"})
    with pytest.raises(ValueError, match="CFL"):
        SimConfig.from_dict(_base_dict(dt=1.0, output_stride=1.0))
    with pytest.raises(ValueError, match="output_stride"):
        SimConfig.from_dict(_base_dict(output_stride=0.07))
    with pytest.raises(ValueError, match="filter"):
        SimConfig.from_dict(_base_dict(g=-1.0))
    with pytest.raises(ValueError, match="t_end"):
        SimConfig.from_dict(_base_dict(g=-1.0, t_end=2.0,
                                       filter={"kind": "exponential", "strength": 36.0}))
    with pytest.raises(ValueError, match="identity_set"):
        SimConfig.from_dict(_base_dict(identity_set=["nope"]))
    with pytest.raises(ValueError, match="does not apply"):
        SimConfig.from_dict(_base_dict(identity_set=["vertical_momentum_rate"]))
    with pytest.raises(ValueError, match="schema_version"):
        SimConfig.from_dict(_base_dict(schema_version=99))
    with pytest.raises(ValueError, match="initial_condition"):
        SimConfig.from_dict(_base_dict(initial_condition={"kind": "linear_standing",
                                                          "eps": 0.01, "oops": 2}))
    with pytest.raises(ValueError, match="standing_wave_expansion"):
        SimConfig.from_dict(_base_dict(
            initial_condition={"kind": "standing_wave_expansion", "eps": 0.1}))


def test_identity_set_all_expands_to_applicable():
    cfg = SimConfig.from_dict(_base_dict(identity_set="all"))
    assert "longuet_higgins" in cfg.identity_set
    assert "vertical_momentum_rate" not in cfg.identity_set


def test_initial_conditions_build():
    cfg = SimConfig.from_dict(_base_dict())
    st = build_initial_state(cfg)
    assert np.max(np.abs(st.eta.values - 0.01 * np.cos(st.grid.nodes))) <= 1e-15
    stokes = SimConfig.from_dict(_base_dict(
        depth={"kind": "infinite", "h_eff": 10.0},
        initial_condition={"kind": "stokes", "eps": 0.05, "k": 1}))
    st = build_initial_state(stokes)
    assert abs(st.eta.mean()) <= 1e-16
    custom = SimConfig.from_dict(_base_dict(
        initial_condition={"kind": "custom", "eta_cos": {"2": 0.01},
                           "psi_sin": {"1": 0.5}}))
    st = build_initial_state(custom)
    assert np.max(np.abs(st.psi.values - 0.5 * np.sin(st.grid.nodes))) <= 1e-15


def test_run_rest_state_all_residuals_zero(tmp_path):
    cfg = SimConfig.from_dict(_base_dict(
        initial_condition={"kind": "rest"}, identity_set=["virial_rate", "rellich"]))
    m = run(cfg, out_dir=str(tmp_path), name="rest")
    assert m["failures"] == []
    assert m["identities"]["virial_rate"]["max_abs_residual"] <= 1e-13
    csv = (tmp_path / "rest.csv").read_text().splitlines()
    assert csv[0].startswith("t,E_k,E_p,E_total,E_k_mod,B_bot,I_virial,mean_psi,gamma_min")
    assert "res_rellich" in csv[0] and "res_virial_rate" in csv[0]
    assert len(csv) == m["n_outputs"] + 1
    doc = json.loads((tmp_path / "rest.json").read_text())
    assert doc["config"] == cfg.to_dict()
    assert doc["failures"] == []


def test_run_determinism_byte_identical(tmp_path):
    cfg = SimConfig.from_dict(_base_dict())
    run(cfg, out_dir=str(tmp_path / "a"), name="x")
    run(cfg, out_dir=str(tmp_path / "b"), name="x")
    assert (tmp_path / "a/x.csv").read_bytes() == (tmp_path / "b/x.csv").read_bytes()
    assert (tmp_path / "a/x.json").read_bytes() == (tmp_path / "b/x.json").read_bytes()


def test_fit_order_basics():
    assert fit_order([0.1, 0.05, 0.025], [1e-2, 2.5e-3, 6.25e-4]) == pytest.approx(2.0)
    assert np.isnan(fit_order([0.1, 0.05], [0.0, 0.0]))


def test_convergence_study_requires_levels():
    cfg = SimConfig.from_dict(_base_dict())
    with pytest.raises(ValueError):
        convergence_study(cfg, 2)


def test_standing_wave_report(tmp_path):
    m = report_standing_wave([0.0, 0.1, 0.2], out_dir=str(tmp_path), n_t=128, n_x_quad=64)
    assert m["fitted_eps_slope"] >= 2.8
    assert m["intercept_errors"]["0.0"] <= 1e-9
    assert (tmp_path / "standing_wave.csv").exists()


def test_inequalities_runner_small(tmp_path):
    m = run_inequalities(seed=4, count=5, n_x=64, n_z=32, out_dir=str(tmp_path))
    assert m["failures"] == []
    assert len(m["reports"]) == 5
    text = (tmp_path / "inequalities.csv").read_text()
    assert "trace_lower_bound" in text and "bottom_decay" in text


def test_cli_simulate_and_errors(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(_base_dict()))
    assert main(["simulate", "--config", str(cfg_path), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "simulate: ok" in out
    # invalid config exits with the descriptive error path
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(_base_dict(dt=5.0)))
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "CFL" in err


def test_cli_standing_wave(tmp_path, capsys):
    assert main(["standing-wave", "--eps", "0.05,0.1", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "fitted eps-slope" in out


def test_cli_converge_smoke(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(_base_dict(
        n_x=16, n_z=8, dt=0.05, t_end=0.3, output_stride=0.05,
        initial_condition={"kind": "rest"}, identity_set=["virial_rate"])))
    assert main(["converge", "--config", str(cfg_path), "--levels", "3",
                 "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "virial_rate" in out and "converge: ok" in out
    doc = json.loads((tmp_path / "converge.json").read_text())
    assert doc["levels"] == 3
    assert "virial_rate" in doc["table"]


def test_cli_inequalities_smoke(tmp_path, capsys):
    assert main(["inequalities", "--seed", "1", "--count", "3",
                 "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "trace_lower_bound" in out and "0 violation(s)" in out


def test_cli_rt_bounds_smoke(tmp_path, capsys):
    assert main(["rt-bounds", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "rt_zero_g" in out and "rt-bounds: ok" in out
    assert (tmp_path / "rt_bounds.json").exists()
    assert (tmp_path / "rt_zero_g.csv").exists()


def test_cli_out_env_var(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("VIRIALWAVE_OUT", str(tmp_path / "envout"))
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(_base_dict()))
    assert main(["simulate", "--config", str(cfg_path)]) == 0
    capsys.readouterr()
    assert (tmp_path / "envout" / "run.csv").exists()


def test_manifest_serialization_roundtrip(tmp_path):
    cfg = SimConfig.from_dict(_base_dict())
    run(cfg, out_dir=str(tmp_path), name="rt")
    doc = json.loads((tmp_path / "rt.json").read_text())
    # shortest round-trip float serialization: rewriting changes nothing
    assert json.loads(json.dumps(doc)) == doc
