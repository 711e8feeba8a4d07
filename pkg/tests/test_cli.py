"""End-to-end command-line behavior: outputs, exit codes, determinism."""

import csv
import io
import json

import numpy as np
import pytest

from oddpu import FrequencySpectrum, dirac_structure
from oddpu.cli import main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSpectrumCommand:
    def test_basic_output(self, capsys):
        code, out, _ = run(["spectrum", "--omegas", "1", "2"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["n"] == 2
        assert payload["sigma"] == [4.0, 5.0, 1.0]
        assert payload["rho"] == pytest.approx([1 / 3, 1 / 3])
        assert payload["P"]["2"] == pytest.approx(21.0)
        assert all(v["pass"] for v in payload["identities"].values())

    def test_repeated_frequency_is_bad_input(self, capsys):
        code, _, err = run(["spectrum", "--omegas", "1", "1"], capsys)
        assert code == 2
        assert "error" in err

    def test_missing_omegas(self, capsys):
        code, _, _ = run(["spectrum"], capsys)
        assert code == 2

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "spec.json"
        code, out, _ = run(["spectrum", "--omegas", "1", "--out", str(path)], capsys)
        assert code == 0
        assert out == ""
        assert json.loads(path.read_text())["n"] == 1


class TestStructureCommand:
    def test_dirac_default(self, capsys):
        code, out, _ = run(["structure", "--omegas", "1"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["provenance"] == "dirac"
        assert payload["rank"] == 6
        assert payload["degenerate"] is False
        assert np.array(payload["matrix"]) == pytest.approx(
            dirac_structure(FrequencySpectrum((1.0,))).omega)

    def test_dirac_equivalent_gamma_matches(self, capsys):
        code, out_d, _ = run(["structure", "--omegas", "1", "2"], capsys)
        code2, out_a, _ = run(["structure", "--omegas", "1", "2",
                               "--gamma", "1", "-1", "-1", "1"], capsys)
        assert code == code2 == 0
        md = np.array(json.loads(out_d)["matrix"])
        ma = np.array(json.loads(out_a)["matrix"])
        assert np.abs(md - ma).max() <= 1e-9 * np.abs(md).max()

    def test_degenerate_gamma_reported_not_refused(self, capsys):
        code, out, _ = run(["structure", "--omegas", "1",
                            "--gamma", "1", "1"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["degenerate"] is True
        assert payload["rank"] == 4
        assert payload["degeneracy_scalar"] == pytest.approx(0.0)

    def test_wrong_gamma_count(self, capsys):
        code, _, _ = run(["structure", "--omegas", "1", "--gamma", "1"], capsys)
        assert code == 2


class TestSimulateCommand:
    ARGS = ["simulate", "--omegas", "1",
            "--state", "0", "0", "1", "0", "0", "0",
            "--t-end", "1", "--dt", "0.25"]

    def test_header_and_shape(self, capsys):
        code, out, _ = run(self.ARGS, capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["t", "x1", "x2", "d1_x1", "d1_x2", "d2_x1", "d2_x2",
                           "H", "J_0_1", "J_0_2"]
        assert len(rows) == 1 + 5  # t = 0, 0.25, ..., 1.0

    def test_zero_state_gives_zero_columns(self, capsys):
        argv = ["simulate", "--omegas", "1",
                "--state", "0", "0", "0", "0", "0", "0",
                "--t-end", "1", "--dt", "0.5"]
        code, out, _ = run(argv, capsys)
        assert code == 0
        data = np.genfromtxt(io.StringIO(out), delimiter=",", skip_header=1)
        assert np.abs(data[:, 1:]).max() == 0.0

    def test_conserved_columns(self, capsys):
        argv = ["simulate", "--omegas", "1", "2",
                "--state", "0.3", "-0.2", "0.5", "0.1", "-0.4", "0.25",
                "0.7", "-0.1", "0.2", "0.6",
                "--t-end", "20", "--dt", "0.1"]
        code, out, _ = run(argv, capsys)
        assert code == 0
        data = np.genfromtxt(io.StringIO(out), delimiter=",", skip_header=1)
        for col in range(11, 16):  # H and the four J columns
            vals = data[:, col]
            assert np.abs(vals - vals[0]).max() <= 1e-9 * (1 + abs(vals[0]))

    def test_gamma_adds_hcal_column(self, capsys):
        argv = self.ARGS + ["--gamma", "1", "-1"]
        code, out, _ = run(argv, capsys)
        assert code == 0
        header = out.splitlines()[0].split(",")
        assert "Hcal" in header

    def test_deterministic_output(self, capsys):
        _, first, _ = run(self.ARGS, capsys)
        _, second, _ = run(self.ARGS, capsys)
        assert first == second

    def test_state_length_checked(self, capsys):
        argv = ["simulate", "--omegas", "1", "--state", "1", "0",
                "--t-end", "1", "--dt", "0.5"]
        code, _, _ = run(argv, capsys)
        assert code == 2

    def test_bad_grid(self, capsys):
        argv = ["simulate", "--omegas", "1",
                "--state", "0", "0", "1", "0", "0", "0",
                "--t-end", "-1", "--dt", "0.5"]
        code, _, _ = run(argv, capsys)
        assert code == 2


class TestDeformCommand:
    POT = json.dumps({"degree": 4, "coeffs": [
        {"i": 4, "j": 0, "value": 0.05},
        {"i": 2, "j": 2, "value": 0.1},
        {"i": 0, "j": 4, "value": 0.05}]})
    ARGS = ["deform", "--omegas", "1", "--gamma", "1", "-1",
            "--state", "0.4", "0.2", "-0.12", "0.32", "0.08", "-0.24",
            "--t-end", "2", "--dt", "0.01"]

    def test_energy_columns_consistent(self, capsys):
        code, out, _ = run(self.ARGS + ["--potential", self.POT], capsys)
        assert code == 0
        data = np.genfromtxt(io.StringIO(out), delimiter=",", skip_header=1)
        hcal, u, htot = data[:, 7], data[:, 8], data[:, 9]
        assert np.abs(hcal + u - htot).max() <= 1e-12
        assert np.abs(htot - htot[0]).max() <= 1e-8 * (1 + abs(htot[0]))

    def test_no_potential_is_linear_flow(self, capsys):
        code, out, _ = run(self.ARGS, capsys)
        assert code == 0
        data = np.genfromtxt(io.StringIO(out), delimiter=",", skip_header=1)
        assert np.abs(data[:, 8]).max() == 0.0  # U column
        htot = data[:, 9]
        assert np.abs(htot - htot[0]).max() <= 1e-8 * (1 + abs(htot[0]))

    def test_degenerate_gamma_exit_code(self, capsys):
        argv = list(self.ARGS)
        argv[argv.index("-1")] = "1"
        code, _, err = run(argv, capsys)
        assert code == 3
        assert "degenerate" in err

    def test_gamma_required(self, capsys):
        argv = [a for a in self.ARGS if a not in ("--gamma", "1", "-1")]
        argv = ["deform", "--omegas", "1",
                "--state", "0.4", "0.2", "-0.12", "0.32", "0.08", "-0.24",
                "--t-end", "1", "--dt", "0.01"]
        code, _, _ = run(argv, capsys)
        assert code == 2

    def test_bad_potential_json(self, capsys):
        code, _, _ = run(self.ARGS + ["--potential",
                                      '{"degree": 0, "coeffs": []}'], capsys)
        assert code == 2


class TestConfigHandling:
    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"omegas": [1.0, 2.0]}))
        code, out, _ = run(["spectrum", "--config", str(cfg)], capsys)
        assert code == 0
        assert json.loads(out)["n"] == 2

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"omegas": [1.0, 2.0]}))
        code, out, _ = run(["spectrum", "--config", str(cfg),
                            "--omegas", "3"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["n"] == 1
        assert payload["omegas"] == [3.0]

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, _ = run(["spectrum", "--config",
                          str(tmp_path / "nope.json")], capsys)
        assert code == 2

    def test_malformed_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("[1, 2]")
        code, _, _ = run(["spectrum", "--config", str(cfg)], capsys)
        assert code == 2


class TestVerifyCommand:
    def test_small_run_passes(self, capsys):
        code, out, _ = run(["verify", "--n-max", "2", "--trials", "3",
                            "--seed", "7"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["pass"] is True
        assert payload["seed"] == 7
        assert all(c["pass"] for c in payload["checks"].values())

    def test_bad_arguments(self, capsys):
        code, _, _ = run(["verify", "--n-max", "0"], capsys)
        assert code == 2
