"""Shared fixtures: a scenario-1a dataset and its fitted model."""

import pytest

from regression import fit_mle
from simstudy import generate_scenario_dataset, scenario_config
from special import RngStream


@pytest.fixture(scope="session")
def scenario_1a():
    return scenario_config("1a", 50)


@pytest.fixture(scope="session")
def sim_data(scenario_1a):
    data, _ = generate_scenario_dataset(scenario_1a, RngStream(20240601, 0))
    return data


@pytest.fixture(scope="session")
def fitted(scenario_1a, sim_data):
    return fit_mle(scenario_1a.spec, sim_data)


@pytest.fixture(autouse=True)
def quiet(monkeypatch):
    """Keep progress lines out of test output."""
    from config import config
    monkeypatch.setattr(config, "VERBOSE", False)
