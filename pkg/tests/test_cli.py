import json
import os

import numpy as np
import pytest

from nvccd.cli import (ConfigError, main, merge_config, resolve_config,
                       validate_config)
from nvccd.presets import PRESET_NAMES, preset


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows


class TestValidation:
    def test_empty_config_lists_required(self):
        with pytest.raises(ConfigError, match="missing required fields: mode"):
            validate_config({})

    def test_missing_physics_fields(self):
        with pytest.raises(ConfigError, match="drive.order, hamiltonian.delta_plus"):
            validate_config({"mode": "evolve"})

    def test_unknown_key_path(self):
        with pytest.raises(ConfigError, match="unknown key: noise.bogus"):
            validate_config({"mode": "oracle-2lvl", "noise": {"bogus": 1}})

    def test_type_mismatch_path(self):
        with pytest.raises(ConfigError, match="lindblad.gamma: expected a number"):
            validate_config({"mode": "oracle-2lvl", "lindblad": {"gamma": "big"}})

    def test_negative_gamma_rejected(self):
        cfg = preset("fig4")
        cfg["lindblad"]["gamma"] = -0.1
        with pytest.raises(ConfigError, match="gamma: must be >= 0"):
            validate_config(cfg)

    def test_presets_all_validate(self):
        for name in PRESET_NAMES:
            validate_config(preset(name))

    def test_bad_mode(self):
        with pytest.raises(ConfigError, match="mode: expected one of"):
            validate_config({"mode": "simulate"})

    def test_merge_is_deep(self):
        merged = merge_config({"a": {"x": 1, "y": 2}, "b": 3}, {"a": {"y": 5}})
        assert merged == {"a": {"x": 1, "y": 5}, "b": 3}


class TestFlagResolution:
    def test_preset_with_order_flag_collapses(self):
        import argparse
        from nvccd.cli import build_parser
        args = build_parser().parse_args(["lindblad", "--figure", "fig4", "--order", "second"])
        cfg = resolve_config(args, "lindblad")
        assert cfg["configurations"] is None
        assert cfg["drive"]["order"] == "second"
        assert cfg["drive"]["omega_plus"] == 1.0  # preset values retained

    def test_runlevel_flags_keep_comparisons(self):
        from nvccd.cli import build_parser
        args = build_parser().parse_args(["lindblad", "--figure", "fig4", "--t-max", "5"])
        cfg = resolve_config(args, "lindblad")
        assert len(cfg["configurations"]) == 5
        assert cfg["run"]["t_max"] == 5.0

    def test_mode_mismatch_rejected(self):
        from nvccd.cli import build_parser
        args = build_parser().parse_args(["ensemble", "--figure", "fig4"])
        with pytest.raises(ConfigError, match="mode"):
            resolve_config(args, "ensemble")


class TestRuns:
    def test_cli_exit_code_on_bad_gamma(self, tmp_path, capsys):
        code = main(["lindblad", "--figure", "fig5", "--gamma", "-0.1",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "gamma" in capsys.readouterr().err

    def test_evolve_schema_and_manifest(self, tmp_path):
        out = tmp_path / "ev.csv"
        code = main(["evolve", "--figure", "fig3", "--t-max", "5",
                     "--out", str(out)])
        assert code == 0
        path1 = tmp_path / "ev.order-1.csv"
        header, rows = read_csv(path1)
        assert header == ["t", "pop1", "pop2", "pop3", "norm_drift",
                          "unitarity_residual"]
        assert float(rows[0][1]) == 1.0
        manifest = json.loads((tmp_path / "ev.manifest.json").read_text())
        assert manifest["config"]["figure"] == "fig3"
        assert str(path1) in manifest["outputs"]

    def test_lindblad_comparison_label_column(self, tmp_path):
        out = tmp_path / "f5.csv"
        assert main(["lindblad", "--figure", "fig5", "--t-max", "3",
                     "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == ["t", "purity", "entropy", "label"]
        labels = {r[3] for r in rows}
        assert labels == {"gamma-0.05", "gamma-0.1", "gamma-0.5"}

    def test_manifest_rerun_is_byte_identical(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["lindblad", "--figure", "fig5", "--t-max", "2",
                     "--out", str(out1)]) == 0
        assert main(["run", "--config", str(tmp_path / "a.manifest.json"),
                     "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_ensemble_schema_and_noise_dump(self, tmp_path):
        out = tmp_path / "ens.csv"
        assert main(["ensemble", "--figure", "fig7", "--n-realizations", "3",
                     "--t-max", "1", "--out", str(out), "--dump-noise"]) == 0
        header, rows = read_csv(out)
        assert header == ["t", "purity", "entropy", "std_err_purity",
                          "std_err_entropy", "label"]
        nheader, nrows = read_csv(tmp_path / "ens.noise.csv")
        assert nheader == ["t", "zeta_bath", "zeta_mw", "label"]
        assert len(nrows) > 0

    def test_ensemble_single_run_no_label(self, tmp_path):
        out = tmp_path / "single.csv"
        assert main(["ensemble", "--figure", "fig7", "--order", "second",
                     "--n-realizations", "2", "--t-max", "1",
                     "--out", str(out)]) == 0
        header, _ = read_csv(out)
        assert header == ["t", "purity", "entropy", "std_err_purity",
                          "std_err_entropy"]

    def test_twelve_significant_digits(self, tmp_path):
        out = tmp_path / "digits.csv"
        assert main(["lindblad", "--figure", "fig5", "--gamma", "0.05",
                     "--t-max", "1", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        values = {r[1] for r in rows}
        assert any(len(v.replace(".", "").replace("-", "").lstrip("0")) >= 11
                   for v in values)

    def test_config_file_overrides_preset(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"lindblad": {"gamma": 0.2},
                                        "configurations": None}))
        out = tmp_path / "c.csv"
        assert main(["lindblad", "--figure", "fig5", "--config", str(cfg_path),
                     "--t-max", "1", "--out", str(out)]) == 0
        manifest = json.loads((tmp_path / "c.manifest.json").read_text())
        assert manifest["config"]["lindblad"]["gamma"] == 0.2
        assert manifest["config"]["configurations"] is None

    def test_run_requires_config(self, capsys):
        assert main(["run"]) == 2
        assert "config" in capsys.readouterr().err

    def test_direct_backend_evolve(self, tmp_path):
        out = tmp_path / "d.csv"
        assert main(["evolve", "--figure", "fig2", "--order", "first",
                     "--backend", "direct", "--t-max", "2",
                     "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header[-1] == "unitarity_residual"
        assert all(float(r[-1]) < 1e-7 for r in rows)

    def test_workers_flag_accepted(self, tmp_path):
        out = tmp_path / "w.csv"
        assert main(["ensemble", "--figure", "fig7", "--order", "second",
                     "--n-realizations", "2", "--t-max", "1",
                     "--workers", "1", "--out", str(out)]) == 0

    def test_oracle_flags_reach_suite(self, tmp_path):
        out = tmp_path / "o.csv"
        code = main(["oracle-2lvl", "--n-realizations", "10",
                     "--out", str(out)])
        assert code == 0
        manifest = json.loads((tmp_path / "o.manifest.json").read_text())
        assert manifest["config"]["twolevel"]["n_realizations"] == 10
        header, _ = read_csv(out)
        assert header == ["t", "leakage", "std_err", "label"]
