import json
import math

import numpy as np
import pytest
import yaml

from covlind.cli import main, write_csv
from covlind.config import load_config, parse_initial_state
from covlind.errors import ConfigError


def run_cli(args):
    return main(args)


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    return header, data


class TestConfig:
    def test_unknown_top_level_key_named(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("experiment: touchard\nbogus_key: 1\n")
        with pytest.raises(ConfigError, match="bogus_key"):
            load_config(str(cfg))

    def test_unknown_section_key_named(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("experiment: fig2\njc:\n  omega_cc: 1.0\n")
        with pytest.raises(ConfigError, match="omega_cc"):
            load_config(str(cfg))

    def test_non_finite_rejected(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("experiment: fig2\njc:\n  omega_c: .nan\n")
        with pytest.raises(ConfigError):
            load_config(str(cfg))

    def test_experiment_mismatch(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("experiment: fig2\n")
        with pytest.raises(ConfigError):
            load_config(str(cfg), experiment="touchard")

    def test_named_states(self):
        plus = parse_initial_state("plus-x")
        assert np.allclose(plus, 0.5 * np.ones((2, 2)))
        with pytest.raises(ConfigError):
            parse_initial_state("plus-z")

    def test_explicit_state_entries(self):
        mat = parse_initial_state([[0.5, [0.0, -0.5]], ["0.5j", 0.5]])
        assert np.allclose(mat, [[0.5, -0.5j], [0.5j, 0.5]])

    def test_jc_params_exclusive_keys(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("experiment: jc-sim\njc: {g: 0.1, rabi: 2.0}\n")
        with pytest.raises(ConfigError):
            load_config(str(cfg)).jc_params()


class TestExitCodes:
    def test_config_error_is_2(self, tmp_path, capsys):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("experiment: touchard\nnope: 3\n")
        code = run_cli(["touchard", "--config", str(cfg), "--out", str(tmp_path)])
        assert code == 2
        assert "nope" in capsys.readouterr().err

    def test_missing_config_file_is_2(self, tmp_path):
        assert run_cli(["touchard", "--config", str(tmp_path / "missing.yaml")]) == 2

    def test_numerical_contract_is_3(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        # negative frequency violates the JCParams contract
        cfg.write_text("experiment: attractor\njc: {omega_c: 1.0, delta: -3.0,"
                       " rabi: 4.0, alpha: 2.0}\n")
        assert run_cli(["attractor", "--config", str(cfg),
                        "--out", str(tmp_path / "o")]) == 3

    def test_success_is_0(self, tmp_path):
        assert run_cli(["touchard", "--out", str(tmp_path / "o")]) == 0


class TestOutputs:
    def test_touchard_outputs(self, tmp_path):
        out = tmp_path / "o"
        assert run_cli(["touchard", "--out", str(out)]) == 0
        header, data = read_csv(out / "touchard.csv")
        assert header == ["j", "x", "touchard", "asymptotic", "scaled_residual"]
        summary = json.loads((out / "touchard_summary.json").read_text())
        assert "library_version" in summary
        for j in ("3", "4", "5", "6"):
            assert abs(summary["loglog_slopes"][j] + 2.0) < 0.1

    def test_eigenops_report(self, tmp_path):
        out = tmp_path / "o"
        assert run_cli(["eigenops", "--out", str(out)]) == 0
        rep = json.loads((out / "eigenops_report.json").read_text())
        freqs = rep["monodromy_frequencies"]
        assert len(freqs) == 4
        assert abs(freqs[0] + 0.4) < 1e-6 and abs(freqs[-1] - 0.4) < 1e-6
        assert abs(freqs[1]) < 1e-9 and abs(freqs[2]) < 1e-9
        assert all(d["max_deviation"] < 1e-6 for d in rep["analytic_deviation"])
        assert all(rep["nilpotent_flags"])

    def test_eigenops_static_fallback(self, tmp_path):
        out = tmp_path / "o"
        cfg = tmp_path / "c.yaml"
        cfg.write_text("experiment: eigenops\njc: {omega_c: 1.0, omega_eg: 1.3,"
                       " alpha: 0.0, g: 0.0}\n")
        assert run_cli(["eigenops", "--config", str(cfg), "--out", str(out)]) == 0
        rep = json.loads((out / "eigenops_report.json").read_text())
        assert rep["mode"] == "static-fallback"
        assert np.allclose(rep["bohr_frequencies"], [-1.3, 0.0, 0.0, 1.3])

    def test_attractor_report(self, tmp_path):
        out = tmp_path / "o"
        assert run_cli(["attractor", "--out", str(out)]) == 0
        rep = json.loads((out / "attractor_report.json").read_text())
        assert rep["residual"] <= 1e-9
        gm, gp = rep["coefficients"]["gammaMinus"], rep["coefficients"]["gammaPlus"]
        assert rep["delta_minus"] == pytest.approx(math.log(gm / gp))

    def test_coefficients_sweep(self, tmp_path):
        out = tmp_path / "o"
        assert run_cli(["coefficients", "--out", str(out)]) == 0
        header, data = read_csv(out / "coefficients.csv")
        assert header == ["delta", "T", "gamma0", "gammaMinus", "gammaPlus"]
        assert np.min(data[:, 2:]) >= 0.0
        # delta = 0 row exists and is a symmetric point of the sweep
        mid = data[np.argmin(np.abs(data[:, 0]))]
        assert abs(mid[0]) < 1e-12

    def test_fig2_csv_and_summary(self, tmp_path):
        out = tmp_path / "o"
        assert run_cli(["fig2", "--out", str(out), "--alpha", "5",
                        "--steps", "200"]) == 0
        header, data = read_csv(out / "fig2_alpha_5.csv")
        assert header[:2] == ["t_normalized", "fidelity"]
        assert data.shape == (201, 8)
        assert np.all(data[:, 1] <= 1.0) and data[0, 1] == pytest.approx(1.0)
        summary = json.loads((out / "fig2_summary.json").read_text())
        assert summary["alphas"][0]["min_fidelity"] < 0.98

    def test_fig2_byte_identical_reruns(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert run_cli(["fig2", "--out", str(out), "--alpha", "5,25",
                            "--steps", "150"]) == 0
        for name in ("fig2_alpha_5.csv", "fig2_alpha_25.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_fig2_step_doubling_pointwise(self, tmp_path):
        # closed-form trajectories: shared grid points agree to fp precision
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run_cli(["fig2", "--out", str(out1), "--alpha", "5",
                        "--steps", "100"]) == 0
        assert run_cli(["fig2", "--out", str(out2), "--alpha", "5",
                        "--steps", "200"]) == 0
        _, coarse = read_csv(out1 / "fig2_alpha_5.csv")
        _, fine = read_csv(out2 / "fig2_alpha_5.csv")
        assert np.max(np.abs(fine[::2] - coarse)) < 1e-6

    def test_jc_sim(self, tmp_path):
        out = tmp_path / "o"
        cfg = tmp_path / "c.yaml"
        cfg.write_text(yaml.safe_dump({
            "experiment": "jc-sim",
            "jc": {"omega_c": 1.0, "delta": 0.0, "rabi": 2.0, "alpha": 10.0},
            "grid": {"t1": 5.0, "steps": 100},
            "initial_state": "g",
        }))
        assert run_cli(["jc-sim", "--config", str(cfg), "--out", str(out)]) == 0
        header, data = read_csv(out / "jc_sim.csv")
        assert header[0] == "t"
        # resonant Rabi from |g>: semiclassical sz is exactly -cos(Omega t)
        sz_sc = data[:, 8]
        assert np.max(np.abs(sz_sc + np.cos(2.0 * data[:, 0]))) < 1e-6
        # the autonomous curve tracks it within the collapse envelope loss
        assert np.max(np.abs(data[:, 5] - sz_sc)) < 0.15

    def test_csv_format_17_digits(self, tmp_path):
        path = tmp_path / "x.csv"
        write_csv(path, ["a"], [np.array([1.0 / 3.0])])
        assert path.read_text() == "a\n0.33333333333333331\n"


class TestIOError:
    def test_unwritable_output_is_4(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        code = run_cli(["touchard", "--out", str(blocker / "sub")])
        assert code == 4
