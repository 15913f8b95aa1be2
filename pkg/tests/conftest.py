import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aoa_auth import Scenario


@pytest.fixture
def scenario():
    return Scenario()


@pytest.fixture
def schedule(scenario):
    return scenario.schedule()
