import pathlib

import pytest
from click.testing import CliRunner

from cantiq.cli import main

SCENARIOS = pathlib.Path(__file__).resolve().parents[1] / "scenarios"


@pytest.fixture
def runner():
    return CliRunner()


def write_cfg(tmp_path, text, name="scenario.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


SMALL_WIGNER = """
name = smoke
omega = 100.0
gamma = 1.0
g_s = -300.0
beta_re = 3.0
times = 0.0,20.0
step = 1.0
dim = 60
out = smoke.csv
"""


class TestWignerCommand:
    def test_writes_deterministic_csv(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_WIGNER)
        out = tmp_path / "run1"
        res = runner.invoke(main, ["wigner", "--config", cfg, "--out",
                                   str(out)])
        assert res.exit_code == 0, res.output
        data1 = (out / "smoke.csv").read_bytes()
        assert data1.startswith(b"gamma_t,x,y,w\n")
        out2 = tmp_path / "run2"
        runner.invoke(main, ["wigner", "--config", cfg, "--out", str(out2)])
        assert data1 == (out2 / "smoke.csv").read_bytes()

    def test_unknown_key_exit_2(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_WIGNER + "mystery = 4\n")
        res = runner.invoke(main, ["wigner", "--config", cfg, "--out",
                                   str(tmp_path)])
        assert res.exit_code == 2

    def test_empty_times_exit_2(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_WIGNER.replace(
            "times = 0.0,20.0", "times ="))
        res = runner.invoke(main, ["wigner", "--config", cfg, "--out",
                                   str(tmp_path)])
        assert res.exit_code == 2

    def test_sorted_flag(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_WIGNER.replace(
            "times = 0.0,20.0", "times = 20.0,0.0"))
        res = runner.invoke(main, ["wigner", "--config", cfg, "--out",
                                   str(tmp_path), "--sorted"])
        assert res.exit_code == 0
        first_row = (tmp_path / "smoke.csv").read_text().splitlines()[1]
        assert first_row.startswith("0.0,")

    def test_env_var_out_dir(self, runner, tmp_path, monkeypatch):
        cfg = write_cfg(tmp_path, SMALL_WIGNER)
        target = tmp_path / "envout"
        monkeypatch.setenv("CANTIQ_OUT", str(target))
        res = runner.invoke(main, ["wigner", "--config", cfg])
        assert res.exit_code == 0
        assert (target / "smoke.csv").exists()


class TestSqueezeCommands:
    def test_unitary_instability_exit_3(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, "gprime = 0.3\nk = 1\n")
        res = runner.invoke(main, ["squeeze-unitary", "--config", cfg,
                                   "--out", str(tmp_path)])
        assert res.exit_code == 3

    def test_unitary_default_name(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, "gprime = 0.0115\nt_max = 5.0\n")
        res = runner.invoke(main, ["squeeze-unitary", "--config", cfg,
                                   "--out", str(tmp_path)])
        assert res.exit_code == 0, res.output
        assert (tmp_path / "squeeze-unitary.csv").exists()

    def test_dissipative_small_run(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, (
            "gamma = 0.01\ngprime = 0.0115\nt_max = 5.0\nt_step = 1.0\n"
            "temperatures = 0.0,3.0\nout = diss.csv\n"))
        res = runner.invoke(main, ["squeeze-dissipative", "--config", cfg,
                                   "--out", str(tmp_path)])
        assert res.exit_code == 0, res.output
        lines = (tmp_path / "diss.csv").read_text().splitlines()
        assert lines[0] == "temperature,omega_t,variance,steady_variance"
        assert len(lines) == 1 + 2 * 6


class TestSteadySweepCommand:
    def test_prints_critical_temperature(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, (
            "gamma = 0.01\ngprime = 0.0115\ntemp_min = 0.1\n"
            "temp_max = 0.5\ntemp_step = 0.1\n"))
        res = runner.invoke(main, ["steady-sweep", "--config", cfg, "--out",
                                   str(tmp_path)])
        assert res.exit_code == 0, res.output
        assert "critical_temperature = 0.22225" in res.output
        assert (tmp_path / "steady-sweep.csv").exists()


class TestParamsCommand:
    def test_prints_and_writes_report(self, runner, tmp_path):
        res = runner.invoke(main, ["params", "--config",
                                   str(SCENARIOS / "device.cfg"), "--out",
                                   str(tmp_path)])
        assert res.exit_code == 0, res.output
        assert "flux_coupling = -0.0075" in res.output
        report = (tmp_path / "couplings.csv").read_text().splitlines()
        assert report[0] == "parameter,value"
        values = dict(line.split(",") for line in report[1:])
        assert float(values["quadratic_coupling"]) == pytest.approx(
            144260.85, rel=1e-6)

    def test_invalid_device_exit_3(self, runner, tmp_path):
        cfg = write_cfg(tmp_path, (
            "josephson_energy = 5e9\ncantilever_freq = 1e7\n"
            "loop_area = 1e-12\n"))
        res = runner.invoke(main, ["params", "--config", cfg, "--out",
                                   str(tmp_path)])
        assert res.exit_code == 3


class TestVerifyCommand:
    def test_small_cutoff_surfaces_truncation_as_exit_3(self, runner):
        res = runner.invoke(main, ["verify", "--dim", "12"])
        assert res.exit_code == 3
        assert "TruncationInsufficient" in res.output

    def test_default_profile_passes(self, runner):
        res = runner.invoke(main, ["verify"])
        assert res.exit_code == 0, res.output
        assert "[FAIL]" not in res.output
        assert res.output.count("[PASS]") == 7

    def test_failing_check_exits_1(self, runner, monkeypatch):
        import cantiq.verify as verify_mod

        def broken_check(profile):
            return verify_mod.CheckResult(
                name="stub", passed=False, value=1.0, threshold=0.5,
                detail="injected failure")

        monkeypatch.setattr(verify_mod, "ALL_CHECKS", (broken_check,))
        res = runner.invoke(main, ["verify"])
        assert res.exit_code == 1
        assert "[FAIL] stub" in res.output
