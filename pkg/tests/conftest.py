import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the oracles helper module

from saiqh import Scenario, default_scenario_path, load_scenario


@pytest.fixture(scope="session")
def portugal() -> Scenario:
    """The bundled Portugal 2020 scenario (exercises the default file)."""
    return load_scenario(default_scenario_path())


@pytest.fixture(scope="session")
def params_t2(portugal):
    return portugal.params


@pytest.fixture(scope="session")
def init_t2(portugal):
    return portugal.init
