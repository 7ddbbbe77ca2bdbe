"""Experiment configuration, named presets and run manifests."""
from __future__ import annotations

import copy
import hashlib
import json
import re
from dataclasses import asdict, dataclass, field
from typing import Any

from .errors import InvalidInputError
from .rng import check_seed
from .singular import ShapeSequence, s0_analytic, s0_numeric

VERSION = "0.1.0"


@dataclass
class Budgets:
    grid_j: int = 10
    mc_samples: int = 100_000
    seeds: int = 1


@dataclass
class ExperimentConfig:
    """One experiment. ``shape`` uses keys kind, scales, exponents, values.

    ``params`` holds experiment-specific knobs (windows, checkpoints, plan
    floors); everything else maps one-to-one onto the JSON keys.
    """

    experiment: str
    d: int
    shape: dict
    seed: int
    s: float | None = None
    s_policy: str | None = None
    levels: int = 0
    mode: str = "relaxed"
    budgets: Budgets = field(default_factory=Budgets)
    out: str = "out"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.seed is None:
            raise InvalidInputError("a seed is required")
        self.seed = check_seed(self.seed)
        if isinstance(self.budgets, dict):
            self.budgets = Budgets(**self.budgets)
        if self.mode not in ("strict", "relaxed"):
            raise InvalidInputError(f"unknown mode {self.mode!r}")
        if self.shape.get("kind") not in ("power", "list", "matrix"):
            raise InvalidInputError(f"unknown shape kind {self.shape.get('kind')!r}")

    # serialisation

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise InvalidInputError(f"unknown config keys {sorted(unknown)}")
        if "seed" not in data:
            raise InvalidInputError("a seed is required")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            data = json.load(fh)
        # a manifest carries the config it was produced from
        if "config" in data and "config_hash" in data:
            data = data["config"]
        return cls.from_dict(data)

    def hash(self) -> str:
        return config_hash(self.to_dict())

    # derived objects

    def shape_sequence(self) -> ShapeSequence:
        sh = self.shape
        kind = sh["kind"]
        if kind == "power":
            seq = ShapeSequence.power_law(sh["exponents"], sh.get("scales"))
        elif kind == "list":
            seq = ShapeSequence.from_values(sh["values"], force=bool(self.params.get("force", False)))
        else:
            seq = ShapeSequence.from_matrices(sh["values"], force=bool(self.params.get("force", False)))
        if seq.d != self.d:
            raise InvalidInputError(f"shape has dimension {seq.d}, config says {self.d}")
        return seq

    def s0(self) -> float:
        seq = self.shape_sequence()
        return s0_analytic(seq).s0 if seq.kind == "power" else s0_numeric(seq).s0

    def resolve_s(self) -> float:
        """Explicit ``s`` or the value of ``s_policy`` such as "0.8*s0" or "s0+0.1"."""
        if self.s is not None:
            return float(self.s)
        if not self.s_policy:
            raise InvalidInputError("config needs s or s_policy")
        return apply_policy(self.s_policy, self.s0())


_NUM = r"([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)"
_MUL = re.compile(r"^\s*" + _NUM + r"\s*\*\s*s0\s*$")
_ADD = re.compile(r"^\s*s0\s*([+-])\s*" + _NUM + r"\s*$")


def apply_policy(policy: str, s0: float) -> float:
    m = _MUL.match(policy)
    if m:
        return float(m.group(1)) * s0
    m = _ADD.match(policy)
    if m:
        delta = float(m.group(2))
        return s0 + delta if m.group(1) == "+" else s0 - delta
    if policy.strip() == "s0":
        return s0
    raise InvalidInputError(f"cannot parse s_policy {policy!r}")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def config_hash(data: dict) -> str:
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()


@dataclass
class RunManifest:
    config_hash: str
    version: str
    outputs: list[str]
    runtime_s: float
    config: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# presets

_PRESETS: dict[str, dict] = {
    # coverage dichotomy, convergent lengths n^-2
    "dichotomy-convergent": dict(
        experiment="cover", d=1, shape={"kind": "power", "scales": [1.0], "exponents": [2.0]}, seed=1,
        budgets={"grid_j": 10}, params={"window": [1000, 10000], "checkpoints": [2000, 5000, 10000]},
    ),
    "dichotomy-divergent": dict(
        experiment="cover", d=1, shape={"kind": "power", "scales": [1.0], "exponents": [1.0]}, seed=1,
        budgets={"grid_j": 10}, params={"window": [1000, 100000], "checkpoints": [10000, 50000, 100000]},
    ),
    "fan-kahane": dict(
        experiment="cover", d=1, shape={"kind": "power", "scales": [2.0], "exponents": [1.0]}, seed=7,
        params={"window": [1, 100000], "checkpoints": [1000, 10000, 100000], "points": 1000},
    ),
    "full-limsup": dict(
        experiment="cover", d=1, shape={"kind": "power", "scales": [1.0], "exponents": [1.0]}, seed=1,
        budgets={"grid_j": 8}, params={"window": [1, 100000], "checkpoints": [100000]},
    ),
    "cantor-1d": dict(
        experiment="cantor", d=1, shape={"kind": "power", "scales": [16.0], "exponents": [2.0]}, seed=1,
        s=0.4, levels=3, budgets={"seeds": 100}, params={"hits_floor": 12.0},
    ),
    "cantor-2d": dict(
        experiment="cantor", d=2, shape={"kind": "power", "scales": [0.5, 2.0], "exponents": [0.6, 0.9]}, seed=1,
        s=1.3, levels=3, budgets={"seeds": 100}, params={"hits_floor": 12.0},
    ),
    "cantor-chebyshev": dict(
        experiment="cantor", d=1, shape={"kind": "power", "scales": [16.0], "exponents": [2.0]}, seed=1,
        s=0.4, levels=2, budgets={"seeds": 200}, params={"hits_floor": 12.0, "p_max": 0.5},
    ),
    "cantor-strict": dict(
        experiment="cantor", d=1, shape={"kind": "power", "scales": [16.0], "exponents": [2.0]}, seed=1,
        s=0.4, levels=3, mode="strict",
    ),
    "dim-1d": dict(
        experiment="dim", d=1, shape={"kind": "power", "scales": [2.0], "exponents": [2.0]}, seed=1,
        s=0.45, s_policy="0.8*s0", levels=3, budgets={"mc_samples": 100000, "seeds": 20},
        params={"hits_floor": [0.0, 0.0, 30000.0], "A": 1000.0, "tail_policy": "s0+0.1", "tail_N": [1000, 10000, 100000, 1000000]},
    ),
    "tail-2d": dict(
        experiment="dim", d=2, shape={"kind": "power", "scales": [0.5, 2.0], "exponents": [0.6, 0.9]}, seed=1,
        s_policy="0.8*s0", levels=0, params={"tail_policy": "s0+0.1", "tail_N": [1000, 10000, 100000, 1000000]},
    ),
    "energy-selftest": dict(
        experiment="dim", d=1, shape={"kind": "power", "scales": [1.0], "exponents": [2.0]}, seed=1,
        s=0.5, levels=0, budgets={"mc_samples": 100000}, params={"selftest": True},
    ),
    "shepp-critical": dict(
        experiment="shepp", d=1, shape={"kind": "power", "scales": [1.0], "exponents": [1.0]}, seed=1,
        params={"K": 1000000},
    ),
    "falconer-scalar": dict(
        experiment="falconer", d=1, shape={"kind": "power", "scales": [1.0], "exponents": [1.0]}, seed=1,
        s=0.5, budgets={"mc_samples": 100000}, params={"matrices": [[[0.3]]]},
    ),
    "falconer-diagonal": dict(
        experiment="falconer", d=2, shape={"kind": "power", "scales": [1.0, 1.0], "exponents": [1.0, 1.0]}, seed=1,
        s=1.5, budgets={"mc_samples": 100000}, params={"diagonal_family": {"count": 20, "low": 0.05, "high": 0.5}},
    ),
}


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def preset(name: str, **overrides) -> ExperimentConfig:
    if name not in _PRESETS:
        raise InvalidInputError(f"unknown preset {name!r}; choose from {preset_names()}")
    data = copy.deepcopy(_PRESETS[name])
    data.update(overrides)
    return ExperimentConfig.from_dict(data)
