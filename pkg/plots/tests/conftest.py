import subprocess
import sys

import pytest


def run_saiqh(*argv):
    """Drive the simulator CLI; the CSVs it emits are our only interface."""
    result = subprocess.run([sys.executable, "-m", "saiqh.cli", *argv],
                            capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    return result


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """Trajectory CSVs emitted by the simulator CLI, plus the observed series."""
    root = tmp_path_factory.mktemp("csv")
    config = subprocess.run(
        [sys.executable, "-c",
         "from saiqh import default_scenario_path, bundled_observed_path;"
         "print(default_scenario_path()); print(bundled_observed_path())"],
        capture_output=True, text=True, check=True).stdout.splitlines()
    scenario, observed = config
    run_saiqh("simulate", "--config", scenario, "--out", str(root / "nsfd.csv"))
    run_saiqh("simulate", "--config", scenario, "--scheme", "rk4", "--h", "1",
              "--steps", "2000", "--out", str(root / "rk4.csv"))
    run_saiqh("simulate", "--config", scenario, "--h", "0.25", "--steps", "256",
              "--out", str(root / "nsfd_fine.csv"))
    run_saiqh("simulate", "--config", scenario, "--scheme", "rk4", "--h", "0.25",
              "--steps", "256", "--out", str(root / "rk4_fine.csv"))
    return {"root": root, "observed": observed,
            "nsfd": str(root / "nsfd.csv"), "rk4": str(root / "rk4.csv"),
            "nsfd_fine": str(root / "nsfd_fine.csv"), "rk4_fine": str(root / "rk4_fine.csv")}
