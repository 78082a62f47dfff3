import pytest

from cotlab.config import MAX_CARD_ENV, LabConfig, get_config, set_config
from cotlab.algebra.ring import Ring


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Every test gets default settings, untouched by the user's config file or environment."""
    monkeypatch.delenv(MAX_CARD_ENV, raising=False)
    config = LabConfig(str(tmp_path / "config.json"))
    set_config(config)
    yield config
    set_config(None)


@pytest.fixture
def quick():
    get_config().configs["suite"]["thoroughness"] = "quick"


@pytest.fixture
def z4():
    return Ring(4)


@pytest.fixture
def z12():
    return Ring(12)
