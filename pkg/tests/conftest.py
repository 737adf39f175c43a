import pytest

from icsheaf import demos
from icsheaf.deligne import build_ic
from icsheaf.stratify import validate_stratification


@pytest.fixture(scope="session")
def spaces():
    """All bundled demos: name -> (complex, stratification)."""
    out = {}
    for name in demos.DEMO_NAMES:
        K, doc = demos.demo_space(name)
        out[name] = (K, validate_stratification(K, doc["levels"]))
    return out


@pytest.fixture(scope="session")
def built(spaces):
    """name -> ICBundle for the minimal stratification (canonical build)."""
    return {name: build_ic(strat) for name, (K, strat) in spaces.items()}


@pytest.fixture(scope="session")
def wedge(spaces):
    return spaces["wedge"]


@pytest.fixture(scope="session")
def wedge_ic(built):
    return built["wedge"]
