import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from gravidec.cli import main
from gravidec.units import CODATA2018

# temperature giving k_B T / hbar = 1e12 1/s
T_1E12 = CODATA2018.hbar * 1e12 / CODATA2018.k_B


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args, **kwargs):
    return runner.invoke(main, args, catch_exceptions=False, **kwargs)


def parse_csv(text):
    """Split CSV output into (comments, header, rows-of-strings)."""
    comments, header, rows = [], None, []
    for line in text.splitlines():
        if line.startswith("#"):
            comments.append(line)
        elif header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return comments, header, rows


class TestRateCommand:
    def test_one_ev(self, runner):
        result = invoke(runner, ["rate", "--delta-e", "1eV", "--temp", "1", "--output", "json"])
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["rate_per_s"] == pytest.approx(8.78e-46, rel=5e-3)

    def test_zero_gap_inf_coherence(self, runner):
        result = invoke(runner, ["rate", "--delta-e", "0eV", "--temp", "1"])
        assert result.exit_code == 0
        assert "inf" in result.output
        lines = [l for l in result.output.splitlines() if l.startswith("rate_per_s")]
        assert lines and lines[0].split()[-1] == "0"

    def test_gev_unit(self, runner):
        result = invoke(runner, ["rate", "--delta-e", "2.5GeV", "--temp", "1", "--output", "json"])
        data = json.loads(result.output)
        assert data["delta_E_J"] == pytest.approx(2.5e9 * CODATA2018.eV, rel=1e-12)

    def test_bad_unit_exit_2(self, runner):
        result = runner.invoke(main, ["rate", "--delta-e", "1banana", "--temp", "1"])
        assert result.exit_code == 2
        assert "banana" in result.output

    def test_negative_temperature_exit_2(self, runner):
        result = runner.invoke(main, ["rate", "--delta-e", "1eV", "--temp", "-1"])
        assert result.exit_code == 2


class TestScenarioCommand:
    def test_all_rows_within_order(self, runner):
        result = invoke(runner, ["scenario", "--name", "all"])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert len(lines) == 4  # header + 3 scenarios
        for line in lines[1:]:
            assert line.split()[-1] == "true"

    def test_json_value(self, runner):
        result = invoke(runner, ["scenario", "--name", "atom_1eV", "--output", "json"])
        data = json.loads(result.output)
        assert data["rate_per_s"] == pytest.approx(8.78e-46, rel=5e-3)
        assert data["within_order"] is True

    def test_unknown_exit_2(self, runner):
        result = runner.invoke(main, ["scenario", "--name", "proton"])
        assert result.exit_code == 2

    def test_deterministic_output(self, runner):
        first = invoke(runner, ["scenario", "--name", "all", "--output", "csv"]).output
        second = invoke(runner, ["scenario", "--name", "all", "--output", "csv"]).output
        assert first == second

    def test_json_round_trip_bytes(self, runner):
        out = invoke(runner, ["scenario", "--name", "all", "--output", "json"]).output
        assert json.dumps(json.loads(out), sort_keys=True, indent=2) + "\n" == out


class TestEvolveCommand:
    BASE = [
        "evolve", "--c", "1e-3", "--temp", str(T_1E12), "--omega0", "1e9",
        "--tmax", "1e-9", "--steps", "25",
    ]

    def test_known_final_ratio(self, runner):
        result = invoke(runner, self.BASE + ["--state", "0:0.70710678,2:0.70710678",
                                             "--output", "csv"])
        assert result.exit_code == 0
        comments, header, rows = parse_csv(result.output)
        assert header == ["t", "n", "ntilde", "re", "im", "abs"]
        analytic_rows = []
        numeric = False
        for line in result.output.splitlines():
            if line.startswith("# propagation: numeric"):
                numeric = True
            elif not line.startswith("#") and not numeric and not line.startswith("t,"):
                analytic_rows.append(line.split(","))
        final = [r for r in analytic_rows if float(r[0]) == 1e-9 and r[1] == "0" and r[2] == "2"]
        assert len(final) == 1
        ratio = float(final[0][5]) / 0.5
        assert ratio == pytest.approx(0.0183, abs=1e-4)

    def test_diagonal_state_no_coherence(self, runner):
        result = invoke(runner, self.BASE + ["--state", "0:1", "--output", "csv"])
        _, _, rows = parse_csv(result.output)
        for row in rows:
            if row[1] != row[2]:
                assert float(row[5]) == 0.0

    def test_analytic_numeric_agreement(self, runner):
        result = invoke(runner, self.BASE + ["--state", "0:0.70710678,1:0.70710678",
                                             "--output", "json"])
        data = json.loads(result.output)
        fitted = data["fitted_decay_rate_per_s"]
        assert fitted["numeric"] == pytest.approx(fitted["analytic"], rel=0.02)
        assert fitted["analytic"] == pytest.approx(fitted["closed_form"], rel=1e-6)

    def test_malformed_state_exit_2(self, runner):
        result = runner.invoke(main, self.BASE + ["--state", "0:x"])
        assert result.exit_code == 2
        assert "0:x" in result.output

    def test_state_beyond_truncation_exit_2(self, runner):
        result = runner.invoke(main, self.BASE + ["--state", "40:1"])
        assert result.exit_code == 2


class TestKernelCommand:
    def test_dissipation_at_zero_time(self, runner):
        result = invoke(runner, ["kernel", "--which", "D", "--r", "1", "--t", "0",
                                 "--epsilon", "1e-2", "--output", "csv"])
        _, header, rows = parse_csv(result.output)
        assert header == ["r", "t", "value", "err", "method"]
        assert float(rows[0][2]) == 0.0

    def test_noise_even_in_time(self, runner):
        out = invoke(runner, ["kernel", "--which", "N", "--r", "0.7", "--t", "-1.3:1.3:2",
                              "--temp", "1.5", "--epsilon", "0.05", "--output", "csv"])
        _, _, rows = parse_csv(out.output)
        assert rows[0][2] == rows[1][2]

    def test_time_integrated_limit(self, runner):
        result = invoke(runner, [
            "kernel", "--which", "intN", "--r", "0.1", "--t", "16",
            "--temp", str(2 * math.pi), "--epsilon", "1e-4", "--tol", "1e-9",
            "--output", "json",
        ])
        data = json.loads(result.output)
        assert data[0]["value"] == pytest.approx(1.0, rel=0.01)

    def test_series_cap_exit_3(self, runner):
        result = runner.invoke(main, [
            "kernel", "--which", "N", "--r", "0.5", "--t", "0.3", "--temp", "2.0",
            "--epsilon", "0.05", "--tol", "1e-12", "--n-terms", "3",
        ])
        assert result.exit_code == 3

    def test_bad_range_exit_2(self, runner):
        result = runner.invoke(main, ["kernel", "--which", "N", "--r", "nope", "--t", "0"])
        assert result.exit_code == 2
        assert "nope" in result.output


class TestBallCommand:
    def test_single_ball_energy(self, runner):
        result = invoke(runner, ["ball", "--m", "1", "--phi0", "1", "--radius", "1",
                                 "--output", "json"])
        data = json.loads(result.output)
        assert data["rest_energy_natural"] == pytest.approx(2.7842, rel=1e-4)
        assert data["compton_ok"] is False

    def test_identical_pair_rate_zero(self, runner):
        result = invoke(runner, [
            "ball", "--m", "1e18", "--phi0", "1e20", "--radius", "1e-3",
            "--pair", "phi0=1e20;radius=1e-3;r0=0.5,0,0", "--temp", "1",
            "--output", "json",
        ])
        data = json.loads(result.output)
        assert data["rate_per_s"] == 0.0
        assert data["coherence_time_s"] == "inf" or data["coherence_time_s"] is None

    def test_pair_rates_agree(self, runner):
        result = invoke(runner, [
            "ball", "--m", "1e18", "--phi0", "1e20", "--radius", "1e-3",
            "--pair", "phi0=2e20;radius=1e-3", "--temp", "1",
            "--output", "json",
        ])
        data = json.loads(result.output)
        assert data["rates_agree_1e12"] is True
        assert data["rate_per_s"] == pytest.approx(data["closed_form_rate_per_s"], rel=1e-12)

    def test_pair_requires_temp(self, runner):
        result = runner.invoke(main, [
            "ball", "--m", "1", "--phi0", "1", "--radius", "1", "--pair", "phi0=2;radius=1",
        ])
        assert result.exit_code == 2

    def test_bad_pair_spec_exit_2(self, runner):
        result = runner.invoke(main, [
            "ball", "--m", "1", "--phi0", "1", "--radius", "1",
            "--pair", "phi0=2;bananas=1", "--temp", "1",
        ])
        assert result.exit_code == 2
        assert "bananas" in result.output

    def test_natural_unit_mode_omits_si(self, runner):
        result = invoke(runner, ["ball", "--m", "1", "--phi0", "1", "--radius", "1",
                                 "--unit-mode", "natural", "--output", "json"])
        data = json.loads(result.output)
        assert "rest_energy_J" not in data


class TestConfigAndOutput:
    def test_out_path_writes_file(self, runner, tmp_path):
        target = tmp_path / "rates.json"
        result = invoke(runner, ["rate", "--delta-e", "1eV", "--temp", "1",
                                 "--output", "json", "--out-path", str(target)])
        assert result.exit_code == 0
        data = json.loads(target.read_text())
        assert data["rate_per_s"] == pytest.approx(8.78e-46, rel=5e-3)

    def test_config_file_sets_output(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"output": "json"}))
        result = invoke(runner, ["rate", "--delta-e", "1eV", "--temp", "1",
                                 "--config", str(cfg)])
        json.loads(result.output)  # config selected JSON

    def test_flag_overrides_config(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"output": "json"}))
        result = invoke(runner, ["rate", "--delta-e", "1eV", "--temp", "1",
                                 "--config", str(cfg), "--output", "table"])
        with pytest.raises(json.JSONDecodeError):
            json.loads(result.output)

    def test_env_var_config(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"output": "json"}))
        result = runner.invoke(
            main, ["rate", "--delta-e", "1eV", "--temp", "1"],
            env={"GRAVIDEC_CONFIG": str(cfg)}, catch_exceptions=False,
        )
        json.loads(result.output)

    def test_unknown_config_key_exit_2(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"outputs": "json"}))
        result = runner.invoke(main, ["rate", "--delta-e", "1eV", "--temp", "1",
                                      "--config", str(cfg)])
        assert result.exit_code == 2

    def test_csv_has_metadata_comments(self, runner):
        result = invoke(runner, ["rate", "--delta-e", "1eV", "--temp", "1", "--output", "csv"])
        comments, header, rows = parse_csv(result.output)
        assert any("gravidec" in c for c in comments)
        assert len(rows) == 1

    def test_csv_seventeen_digit_round_trip(self, runner):
        result = invoke(runner, ["rate", "--delta-e", "1eV", "--temp", "1", "--output", "csv"])
        _, header, rows = parse_csv(result.output)
        rate = float(rows[0][header.index("rate_per_s")])
        from gravidec.decoherence import decoherence_rate

        assert rate == decoherence_rate(CODATA2018.eV, 1.0).rate
