"""
Experiment configuration.

Configs are nested mappings (YAML or JSON). Every level is a dataclass;
missing keys take the dataclass defaults and unknown keys are rejected.
"""
import math
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from typing import Any, Dict, List, Mapping, Optional, Type, TypeVar, Union

from toolz import dicttoolz

from ._text import parse_float_grid
from .engine import NoiseModel
from .model import ClockArm, SystemKind, SystemSpec

OPERATIONS = ("verify", "effective", "holonomy", "braid", "tomography", "sweep", "export")
OUTPUT_FORMATS = ("csv", "json")
VERIFY_SUITES = ("algebra", "effective", "gauge_fields", "holonomy", "majorana", "initialization")

T = TypeVar("T")


class ConfigError(ValueError):
    pass


def _check(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def _grid(value: Union[str, float, List[float]], name: str) -> List[float]:
    if isinstance(value, str):
        try:
            return parse_float_grid(value)
        except ValueError as e:
            raise ConfigError(f"{name}: {e}") from None
    if isinstance(value, (int, float)):
        return [float(value)]
    return [float(v) for v in value]


@dataclass
class ArmConfig:
    magnitude: float = 1.0
    polar: float = 0.0
    azimuth: float = 0.0

    def to_arm(self) -> ClockArm:
        try:
            return ClockArm(float(self.magnitude), float(self.polar), float(self.azimuth))
        except ValueError as e:
            raise ConfigError(str(e)) from None


@dataclass
class SystemConfig:
    kind: str = "four_qubit"
    left: ArmConfig = field(default_factory=ArmConfig)
    right: ArmConfig = field(default_factory=ArmConfig)
    middle: ArmConfig = field(default_factory=ArmConfig)
    bars: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        _check(
            self.kind in [k.value for k in SystemKind],
            f"system.kind must be one of {[k.value for k in SystemKind]}, got '{self.kind}'",
        )

    def to_spec(self) -> SystemSpec:
        kind = SystemKind(self.kind)
        bars = {str(k): float(v) for k, v in self.bars.items()}
        try:
            if kind is SystemKind.TEN_QUBIT:
                return SystemSpec.ten_qubit(
                    self.left.to_arm(), self.right.to_arm(), self.middle.to_arm(), bars
                )
            if kind is SystemKind.TETRAD_TORUS:
                return SystemSpec.tetrad_torus(self.left.to_arm(), bars)
            _check(not bars, "system.bars only apply to tetrad_torus and ten_qubit systems")
            return SystemSpec.four_qubit(self.left.to_arm())
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(str(e)) from None


@dataclass
class BraidConfig:
    """
    Either a named ``gate`` preset or an explicit loop (``arm`` and
    ``target_phi``). Explicit values override the preset's.
    """

    gate: Optional[str] = "S"
    arm: Optional[str] = None
    target_phi: Optional[float] = None
    delta_tilde: Optional[float] = None
    n_equator: Optional[int] = None
    prep: str = "explicit"
    labels: Optional[List[str]] = None

    def __post_init__(self):
        _check(self.prep in ("explicit", "circuit"), f"braid.prep must be explicit or circuit, got '{self.prep}'")
        _check(self.delta_tilde is None or self.delta_tilde > 0, "braid.delta_tilde must be positive")
        _check(self.n_equator is None or self.n_equator >= 1, "braid.n_equator must be >= 1")
        _check(
            self.target_phi is None or abs(self.target_phi) <= 2 * math.pi + 1e-12,
            "braid.target_phi must satisfy |phi| <= 2 pi",
        )
        _check(self.gate is not None or self.arm is not None, "braid needs a gate or an arm")


@dataclass
class NoiseConfig:
    depolarizing: float = 0.0

    def __post_init__(self):
        _check(0 <= self.depolarizing <= 1, f"noise.depolarizing must be in [0, 1], got {self.depolarizing}")

    def to_model(self) -> Optional[NoiseModel]:
        if self.depolarizing == 0:
            return None
        return NoiseModel(float(self.depolarizing))


@dataclass
class SweepConfig:
    gates: List[str] = field(default_factory=lambda: ["S"])
    delta_tilde: Union[str, List[float]] = "2:10:0.1"
    n_equator: List[int] = field(default_factory=lambda: [3])

    def __post_init__(self):
        _check(len(self.gates) > 0, "sweep.gates is empty")
        _check(len(self.n_equator) > 0 and min(self.n_equator) >= 1, "sweep.n_equator needs values >= 1")
        grid = self.delta_grid()
        _check(len(grid) > 0 and min(grid) > 0, "sweep.delta_tilde needs positive values")

    def delta_grid(self) -> List[float]:
        return _grid(self.delta_tilde, "sweep.delta_tilde")


@dataclass
class HolonomyConfig:
    arm: str = "left"
    targets: List[float] = field(default_factory=lambda: [math.pi / 2])
    steps: int = 200

    def __post_init__(self):
        _check(self.arm in ("left", "right", "middle"), f"holonomy.arm: unknown arm '{self.arm}'")
        _check(self.steps >= 1, "holonomy.steps must be >= 1")


@dataclass
class VerifyConfig:
    suites: List[str] = field(default_factory=lambda: list(VERIFY_SUITES))
    force_conserved: List[str] = field(default_factory=list)
    angle_samples: int = 20
    tolerance: float = 1e-8

    def __post_init__(self):
        for s in self.suites:
            _check(s in VERIFY_SUITES, f"verify.suites: unknown suite '{s}'")
        _check(self.angle_samples >= 1, "verify.angle_samples must be >= 1")


@dataclass
class TomographyConfig:
    gates: List[str] = field(default_factory=lambda: ["S"])
    project_positive: bool = False


@dataclass
class OutputConfig:
    path: str = "-"
    format: str = "json"
    header_timestamp: bool = True
    circuit_format: str = "native"

    def __post_init__(self):
        _check(self.format in OUTPUT_FORMATS, f"output.format must be csv or json, got '{self.format}'")


@dataclass
class ExperimentConfig:
    operation: str = "verify"
    seed: int = 0
    shots: Optional[int] = None
    threads: int = -1
    system: SystemConfig = field(default_factory=SystemConfig)
    braid: BraidConfig = field(default_factory=BraidConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    holonomy: HolonomyConfig = field(default_factory=HolonomyConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    tomography: TomographyConfig = field(default_factory=TomographyConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        _check(self.operation in OPERATIONS, f"operation must be one of {OPERATIONS}, got '{self.operation}'")
        _check(isinstance(self.seed, int) and self.seed >= 0, f"seed must be a non-negative integer, got {self.seed}")
        _check(self.shots is None or self.shots >= 1, f"shots must be >= 1, got {self.shots}")

    @staticmethod
    def from_dict(data: Optional[Mapping[str, Any]]) -> "ExperimentConfig":
        return _from_dict(ExperimentConfig, data or {}, "")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def updated(self, overrides: Mapping[str, Any]) -> "ExperimentConfig":
        """Copy with dotted-key overrides, ``{"output.format": "csv"}``."""
        doc = self.to_dict()
        for key, value in overrides.items():
            *parents, leaf = key.split(".")
            node = doc
            for p in parents:
                node = node.get(p) if isinstance(node, dict) else None
                if not isinstance(node, dict):
                    raise ConfigError(f"Unknown config section in override '{key}'")
            node[leaf] = value
        return ExperimentConfig.from_dict(doc)


def _from_dict(cls: Type[T], data: Mapping[str, Any], where: str) -> T:
    if not isinstance(data, Mapping):
        raise ConfigError(f"{where or 'config'} must be a mapping, got {type(data).__name__}")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"Unknown config keys in {where or 'config'}: {unknown}")

    values = dicttoolz.merge(asdict(cls()), data)
    kwargs = {}
    for name, f in known.items():
        v = values[name]
        if is_dataclass(f.type):
            v = _from_dict(f.type, v or {}, f"{where}{name}.")
        kwargs[name] = v
    try:
        return cls(**kwargs)
    except TypeError as e:
        raise ConfigError(f"Bad value in {where or 'config'}: {e}") from None
