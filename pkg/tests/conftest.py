import os
import sys
from pathlib import Path

import numpy as np
import pytest

from bandgrid.data_io import DATA_ENV, load_split, read_descriptor
from bandgrid.errors import DataError

REPO = Path(__file__).resolve().parents[1]
DATA_ROOT = Path(os.environ.get(DATA_ENV) or REPO / "data")
GOLDEN = Path(__file__).parent / "golden"


def load_or_skip(name: str):
    """Unit tests skip when the raw file is absent; acceptance tests do not."""
    try:
        return load_split(read_descriptor(name), DATA_ROOT)
    except DataError as exc:
        pytest.skip(str(exc))


@pytest.fixture
def data_root() -> Path:
    return DATA_ROOT


@pytest.fixture
def iris():
    return load_or_skip("iris")[0]


@pytest.fixture
def wine():
    return load_or_skip("wine")[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
