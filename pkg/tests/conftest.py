import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from blrc.presets import blrc_15_10_w3, blrc_16_10_w2, blrc_16_10_w3


@pytest.fixture(scope="session")
def code_15_10():
    return blrc_15_10_w3()


@pytest.fixture(scope="session")
def code_16_10_w3():
    return blrc_16_10_w3()


@pytest.fixture(scope="session")
def code_16_10_w2():
    return blrc_16_10_w2()
