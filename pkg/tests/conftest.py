import sys
from fractions import Fraction
from pathlib import Path

import hypothesis
import pytest

SRC_ROOT = Path(__file__).resolve().parents[1] / "src"
if str(SRC_ROOT) not in sys.path:
    sys.path.insert(0, str(SRC_ROOT))

from regnet_complexity import presets  # noqa: E402
from regnet_complexity.config import get_default_config  # noqa: E402

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long-horizon acceptance tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-horizon run, enabled with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def config(tmp_path):
    cfg = get_default_config()
    cfg.output_dir = tmp_path
    return cfg


@pytest.fixture
def self_inhibitor():
    return presets.self_inhibitor(Fraction(1, 4), Fraction(1, 2))


@pytest.fixture
def rotating_inhibitor():
    return presets.self_inhibitor(Fraction(1, 3), Fraction(1, 5))


@pytest.fixture
def toggle_switch():
    return presets.toggle_switch(Fraction(1, 4))


@pytest.fixture
def negative_circuit():
    return presets.negative_2_circuit(Fraction(1, 4))


@pytest.fixture
def slow_negative_circuit():
    return presets.negative_2_circuit(Fraction(93, 100))


@pytest.fixture
def p53_network():
    return presets.p53(Fraction(1, 4))
