import sys
from pathlib import Path

import pytest

from synckit.network import Network, load_network

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

sys.path.insert(0, str(Path(__file__).resolve().parent))

FIXTURE_NAMES = [
    "triangle",
    "chain4",
    "two_roots",
    "twin_cycles_hub",
    "driven_chain",
    "cancel_fan",
    "two_sources_pair",
    "zero_sum_triangle",
    "cancel_cycle",
    "edge_pair",
    "chorded_cycle",
]


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def fixture_net(name: str) -> Network:
    return load_network(str(fixture_path(name)))


@pytest.fixture
def triangle() -> Network:
    return fixture_net("triangle")


@pytest.fixture
def chain4() -> Network:
    return fixture_net("chain4")


@pytest.fixture
def two_roots() -> Network:
    return fixture_net("two_roots")


@pytest.fixture(params=FIXTURE_NAMES)
def any_fixture(request) -> Network:
    return fixture_net(request.param)
