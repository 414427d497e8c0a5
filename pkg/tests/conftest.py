import pathlib

import numpy as np
import pytest

from braidlab.model import SystemSpec

TEST_DIR = pathlib.Path(__file__).parent.absolute()
TEST_DATA_FOLDER = TEST_DIR / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(20231101)


@pytest.fixture
def four_qubit():
    return SystemSpec.four_qubit()


@pytest.fixture
def ten_qubit():
    return SystemSpec.ten_qubit()


@pytest.fixture
def verify_cfg_path():
    return str(TEST_DATA_FOLDER / "verify-four.yaml")


@pytest.fixture
def sweep_cfg_path():
    return str(TEST_DATA_FOLDER / "sweep-s.yaml")


@pytest.fixture
def dummy_exporter_name():
    from braidlab.exporters import register

    from . import DummyExporter

    name = "dummy-exporter"
    register(name, DummyExporter)
    return name


@pytest.fixture
def no_thread_cap(monkeypatch):
    monkeypatch.delenv("BRAIDLAB_THREADS", raising=False)
