import math

import pytest

from braidlab.config import VERIFY_SUITES, ConfigError, ExperimentConfig
from braidlab.model import SystemKind


def test_defaults():
    cfg = ExperimentConfig.from_dict({})
    assert cfg.operation == "verify"
    assert cfg.seed == 0
    assert cfg.shots is None
    assert cfg.system.kind == "four_qubit"
    assert cfg.braid.gate == "S"
    assert cfg.noise.to_model() is None
    assert cfg.verify.suites == list(VERIFY_SUITES)
    assert cfg.holonomy.targets == [math.pi / 2]
    assert cfg.output.format == "json"
    assert cfg.sweep.delta_grid()[:2] == [2.0, 2.1]
    assert cfg.system.to_spec().kind is SystemKind.FOUR_QUBIT


def test_nested_values():
    cfg = ExperimentConfig.from_dict(
        {
            "operation": "sweep",
            "system": {"kind": "ten_qubit", "middle": {"polar": 0.5}},
            "noise": {"depolarizing": 0.01},
            "sweep": {"gates": ["S", "T"], "delta_tilde": [4.2, 6.3], "n_equator": [1, 3]},
        }
    )
    spec = cfg.system.to_spec()
    assert spec.kind is SystemKind.TEN_QUBIT
    assert spec.middle.polar == 0.5
    assert spec.middle.magnitude == 1.0
    assert cfg.noise.to_model().two_qubit_depolarizing == 0.01
    assert cfg.sweep.delta_grid() == [4.2, 6.3]
    assert cfg.sweep.n_equator == [1, 3]

    assert ExperimentConfig.from_dict({"sweep": {"delta_tilde": 5}}).sweep.delta_grid() == [5.0]


def test_updated():
    cfg = ExperimentConfig.from_dict({"seed": 1})
    new = cfg.updated({"output.format": "csv", "seed": 7, "braid.labels": ["0"]})
    assert new.output.format == "csv"
    assert new.seed == 7
    assert new.braid.labels == ["0"]
    assert cfg.output.format == "json"
    assert ExperimentConfig.from_dict(new.to_dict()) == new

    with pytest.raises(ConfigError):
        cfg.updated({"nope.format": "csv"})
    with pytest.raises(ConfigError):
        cfg.updated({"seed.format": "csv"})
    with pytest.raises(ConfigError):
        cfg.updated({"output.colour": "red"})


@pytest.mark.parametrize(
    "doc",
    [
        {"foo": 1},
        {"system": {"kind": "eight_qubit"}},
        {"system": {"left": {"polar": 4.0}}},
        {"system": {"bars": {"z": 0.1}}},
        {"system": {"kind": "tetrad_torus", "bars": {"w": 0.1}}},
        {"system": [1]},
        {"operation": "dance"},
        {"seed": -1},
        {"shots": 0},
        {"braid": {"delta_tilde": -1}},
        {"braid": {"n_equator": 0}},
        {"braid": {"prep": "magic"}},
        {"braid": {"target_phi": 7.0}},
        {"braid": {"gate": None}},
        {"noise": {"depolarizing": 1.5}},
        {"sweep": {"gates": []}},
        {"sweep": {"delta_tilde": "10:2:1"}},
        {"sweep": {"delta_tilde": [0.0, 1.0]}},
        {"sweep": {"n_equator": [0]}},
        {"holonomy": {"arm": "top"}},
        {"holonomy": {"steps": 0}},
        {"verify": {"suites": ["nope"]}},
        {"verify": {"angle_samples": 0}},
        {"output": {"format": "xml"}},
    ],
)
def test_bad_values(doc):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(doc).system.to_spec()


def test_torus_bars():
    cfg = ExperimentConfig.from_dict({"system": {"kind": "tetrad_torus", "bars": {"z": 0.3, "x": 0.1}}})
    spec = cfg.system.to_spec()
    assert spec.bar("z") == 0.3
    assert spec.bar("y") == 0.0
