"""
Fixtures compartidas: catálogos y edificios de fixtures/
"""
from pathlib import Path

import pytest

from sftcalc.orbits import OrbitCatalog
from sftcalc.schemas import load_asymptotics, load_building, load_catalog

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(*parts: str) -> Path:
    return FIXTURES.joinpath(*parts)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: flow-model suites that solve many dense eigenproblems")


@pytest.fixture(scope="session")
def demo_catalog() -> OrbitCatalog:
    return load_catalog(fixture_path("catalog_demo.json"))


@pytest.fixture(scope="session")
def table_catalog() -> OrbitCatalog:
    return load_catalog(fixture_path("catalog_tables.json"))


@pytest.fixture(scope="session")
def flow_catalog() -> OrbitCatalog:
    return load_catalog(fixture_path("catalog_flow.json"))


@pytest.fixture
def broken_pair():
    return load_building(fixture_path("broken_pair.json"))


@pytest.fixture
def nongeneric_middle():
    return load_building(fixture_path("nongeneric_middle.json"))


@pytest.fixture
def two_odd_punctures():
    return load_asymptotics(fixture_path("asymptotics_two_odd.json"))


@pytest.fixture
def mutant():
    def _load(name: str):
        return load_building(fixture_path("mutants", f"{name}.json"))
    return _load
