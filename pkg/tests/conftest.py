import os

import pytest

from phm.model import load_model, ota_example

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def ota():
    return ota_example()


@pytest.fixture(scope="session")
def ota_parallel_battery():
    return load_model(fixture_path("ota_parallel_battery.json"))
