import os

import pytest
from dotenv import load_dotenv

from configs.constants import CONFIGS_DIR, EXPECTED_REPORTS_DIR
from helpers.fields import unit_gaussian
from helpers.ground_solver import minimize
from helpers.nonlinearity import Logarithmic, PowerMass
from helpers.radial_grid import build_grid
from utils.run_config import load_run_config
from utils.validator import Validator

# Load environment variables
load_dotenv()


@pytest.fixture(scope="session")
def validator():
    """Provide reusable validator instance."""
    return Validator()


@pytest.fixture(scope="session")
def grid5():
    """Default grid for N = 5 (R = 20, n = 2001, fourth order)."""
    return build_grid(5)


@pytest.fixture(scope="session")
def log5():
    return Logarithmic(5)


@pytest.fixture(scope="session")
def power5():
    return PowerMass(5, p=4.0, mu=1.0)


@pytest.fixture(scope="session")
def gaussian5(grid5):
    return unit_gaussian(grid5)


@pytest.fixture(scope="session")
def power_ground_state(grid5, power5):
    """Converged PowerMass(4, 1) ground state on the default grid, solved once per session."""
    return minimize(power5, grid5)


@pytest.fixture(scope="session")
def log_ground_state(grid5, log5):
    """Converged log-model ground state on the default grid, solved once per session."""
    return minimize(log5, grid5)


@pytest.fixture
def config_path():
    def _path(filename: str):
        path = CONFIGS_DIR / filename
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        return path
    return _path


@pytest.fixture
def load_config(config_path, tmp_path):
    """Load a sample run config with its output redirected to a temporary directory."""
    def _loader(filename: str, **overrides):
        merged = {"output.dir": os.fspath(tmp_path / "out")}
        merged.update(overrides)
        return load_run_config(config_path(filename), overrides=merged)
    return _loader


@pytest.fixture
def expected_path():
    def _path(filename: str):
        path = EXPECTED_REPORTS_DIR / filename
        if not path.exists():
            raise FileNotFoundError(f"Expected report not found: {path}")
        return path
    return _path
