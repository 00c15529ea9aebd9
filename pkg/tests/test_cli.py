"""Tests of the command-line interface and its exit codes."""

import numpy as np

from multifluid import __version__
from multifluid.cli import main

SIM_CONFIG = """
[mixture]
molar_masses = 2.0 1.0
gammas = 1.4 1.4

[pressure]
law = simple
k = 1.0
gamma = 1.4

[grid]
cells = 16
length = 1.0

[time]
t_end = 0.01

[initial]
profile = noise
density = 1.0 1.0
velocity = 0.0 0.0
density_amplitude = 0.05 0.05
seed = 3

[output]
directory = {directory}
snapshot_interval = 0.005
"""

ADIABAT_CONFIG = """
[mixture]
molar_masses = 0.028 0.032
degrees_of_freedom = 5 3
reference_densities = 0.9 0.3
reference_temperature = 300.0
reference_volume = 2.0

[adiabat]
v_start = 2.0
v_end = 0.5
steps = 4
"""

FLOOR_CONFIG = """
[mixture]
molar_masses = 2.0 1.0
gammas = 1.4 1.4

[pressure]
law = simple
k = 0.0
gamma = 1.4

[grid]
cells = 32
length = 1.0

[time]
t_end = 10.0

[initial]
profile = sine
density = 1.0 1.0
velocity = 0.0 0.0
velocity_amplitude = 4.0 4.0

[run]
max_steps = 100000
"""


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestSimulate:
    def test_writes_documents(self, tmp_path, capsys):
        out_dir = tmp_path / "results"
        config = write(tmp_path / "run.ini",
                       SIM_CONFIG.format(directory=out_dir))
        assert main(["simulate", "--config", config]) == 0
        captured = capsys.readouterr().out
        assert "steps" in captured and "wrote" in captured
        assert (out_dir / "diagnostics.csv").exists()
        assert (out_dir / "snapshot_0000.csv").exists()

    def test_out_flag_overrides_directory(self, tmp_path):
        config = write(tmp_path / "run.ini",
                       SIM_CONFIG.format(directory=tmp_path / "ignored"))
        target = tmp_path / "explicit"
        assert main(["simulate", "--config", config,
                     "--out", str(target)]) == 0
        assert (target / "diagnostics.csv").exists()
        assert not (tmp_path / "ignored").exists()

    def test_identical_bytes_for_same_config(self, tmp_path):
        config = write(tmp_path / "run.ini",
                       SIM_CONFIG.format(directory=tmp_path / "unused"))
        for name in ("a", "b"):
            assert main(["simulate", "--config", config,
                         "--out", str(tmp_path / name)]) == 0
        for file in ("snapshot_0000.csv", "snapshot_0001.csv",
                     "diagnostics.csv"):
            a = (tmp_path / "a" / file).read_bytes()
            b = (tmp_path / "b" / file).read_bytes()
            assert a == b

    def test_config_error_exit_code(self, tmp_path, capsys):
        config = write(tmp_path / "bad.ini", "[mixture]\nunknown = 1\n")
        assert main(["simulate", "--config", config]) == 1
        assert "mixture.unknown" in capsys.readouterr().err

    def test_missing_file_exit_code(self, tmp_path, capsys):
        assert main(["simulate", "--config",
                     str(tmp_path / "absent.ini")]) == 1
        assert "invalid input" in capsys.readouterr().err

    def test_floor_breach_exit_code(self, tmp_path, capsys):
        config = write(tmp_path / "floor.ini", FLOOR_CONFIG)
        assert main(["simulate", "--config", config,
                     "--out", str(tmp_path / "o")]) == 2
        assert "floor" in capsys.readouterr().err


class TestCounterexample:
    def test_tilde_success(self, capsys):
        assert main(["counterexample", "--case", "tilde"]) == 0
        out = capsys.readouterr().out
        assert "product_tilde -0.039057906522244085" in out
        assert "verdict tilde" in out

    def test_total_with_ratio(self, capsys):
        assert main(["counterexample", "--case", "total",
                     "--ratio", "1.3"]) == 0
        out = capsys.readouterr().out
        assert "product_total -0.021528629627634552" in out

    def test_invalid_ratio_exit_code(self, capsys):
        assert main(["counterexample", "--case", "total",
                     "--ratio", "9.0"]) == 1
        assert "strictly inside" in capsys.readouterr().err

    def test_integral_default_weight(self, capsys):
        assert main(["counterexample", "--case", "integral"]) == 0
        out = capsys.readouterr().out
        assert "weight 0.5 1" in out
        assert "integral -0.039057906522244085" in out

    def test_integral_positive_weight_exit_code(self, capsys):
        # weights proportional to the total density see the tilde pair
        # in the monotone direction
        assert main(["counterexample", "--case", "integral",
                     "--weight", "1,1"]) == 3
        out = capsys.readouterr().out
        assert "integral 0.096" in out

    def test_search_found(self, capsys):
        assert main(["counterexample", "--case", "search",
                     "--weight", "1,0", "--samples", "300"]) == 0
        out = capsys.readouterr().out
        assert "found true" in out

    def test_search_needs_weight(self, capsys):
        assert main(["counterexample", "--case", "search"]) == 1
        assert "--weight" in capsys.readouterr().err

    def test_csv_artifact(self, tmp_path, capsys):
        target = tmp_path / "report.csv"
        assert main(["counterexample", "--case", "tilde",
                     "--csv", str(target)]) == 0
        text = target.read_text(encoding="utf-8")
        assert text.startswith("case,m1,m2,gamma")
        assert "-0.039057906522244085" in text

    def test_near_degenerate_exit_code(self, capsys):
        assert main(["counterexample", "--case", "tilde", "--m1",
                     "1.0000000001", "--m2", "1.0"]) == 3
        assert "near_degenerate true" in capsys.readouterr().out


class TestAdiabat:
    def test_table_to_stdout(self, tmp_path, capsys):
        config = write(tmp_path / "adia.ini", ADIABAT_CONFIG)
        assert main(["adiabat", "--config", config]) == 0
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert lines[0] == "volume,rho,theta,p_1,p_2,p"
        assert len(lines) == 6
        first = lines[1].split(",")
        assert float(first[0]) == 2.0
        assert float(first[2]) == 300.0

    def test_table_to_file(self, tmp_path, capsys):
        config = write(tmp_path / "adia.ini", ADIABAT_CONFIG)
        target = tmp_path / "table.csv"
        assert main(["adiabat", "--config", config,
                     "--out", str(target)]) == 0
        out = capsys.readouterr().out
        assert "k1_composite 2302.1740500888573" in out
        assert target.read_text(encoding="utf-8").startswith("volume,")

    def test_missing_section_exit_code(self, tmp_path, capsys):
        config = write(tmp_path / "plain.ini",
                       "[mixture]\nmolar_masses = 1.0\ngammas = 1.4\n")
        assert main(["adiabat", "--config", config]) == 1
        assert "adiabat" in capsys.readouterr().err


class TestViscosity:
    def test_worked_matrix(self, capsys):
        assert main(["viscosity", "--mu", "4,1", "--xi", "0.5,0.5"]) == 0
        out = capsys.readouterr().out
        assert "shear\n  1.5 0.5\n  0.5 0.75" in out
        assert "positive true" in out

    def test_failure_reported(self, capsys):
        assert main(["viscosity", "--mu", "1,1", "--xi", "0.5,0.5",
                     "--second", "-9 0 ; 0 -9"]) == 0
        out = capsys.readouterr().out
        assert "positive false" in out
        assert "failure_reason" in out

    def test_bad_vector_exit_code(self, capsys):
        assert main(["viscosity", "--mu", "abc", "--xi", "0.5,0.5"]) == 1


class TestMeta:
    def test_version_flag(self, capsys):
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_unknown_command_exit_code(self, capsys):
        assert main(["explode"]) == 1

    def test_missing_required_flag_exit_code(self, capsys):
        assert main(["simulate"]) == 1


class TestDeterministicNoise:
    def test_seed_changes_fields(self, tmp_path):
        base = SIM_CONFIG.format(directory=tmp_path / "unused")
        config_a = write(tmp_path / "a.ini", base)
        config_b = write(tmp_path / "b.ini", base.replace("seed = 3",
                                                          "seed = 4"))
        assert main(["simulate", "--config", config_a,
                     "--out", str(tmp_path / "a")]) == 0
        assert main(["simulate", "--config", config_b,
                     "--out", str(tmp_path / "b")]) == 0
        a = np.loadtxt(tmp_path / "a" / "snapshot_0000.csv", delimiter=",",
                       skiprows=1)
        b = np.loadtxt(tmp_path / "b" / "snapshot_0000.csv", delimiter=",",
                       skiprows=1)
        assert not np.array_equal(a[:, 1], b[:, 1])
