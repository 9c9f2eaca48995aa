"""Run and sweep configuration documents.

A config is one JSON object. Unknown keys are rejected everywhere, and each
error names the offending field path.
"""

import dataclasses
import itertools
import json
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .engine import AttitudeSpace, Population
from .errors import ConfigError
from .models import PRESETS, ModelSpec
from .rng import stream_rng
from .selection import generate_topology

INIT_STREAM = 1
TOPOLOGY_STREAM = 2


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelConfig(Strict):
    preset: str
    params: Dict[str, Any] = Field(default_factory=dict)
    scheduler: Optional[Literal["synchronous", "random_sequential"]] = None

    @field_validator("preset")
    @classmethod
    def _known(cls, v):
        if v not in PRESETS:
            raise ValueError(f"unknown preset {v!r}; choose from {sorted(PRESETS)}")
        return v

    @model_validator(mode="after")
    def _params(self):
        fields = {f.name for f in dataclasses.fields(PRESETS[self.preset])}
        unknown = sorted(set(self.params) - fields)
        if unknown:
            raise ValueError(f"unknown {self.preset} parameters {unknown}; "
                             f"allowed {sorted(fields)}")
        return self


class UniformInit(Strict):
    kind: Literal["uniform"]
    low: float = -1.0
    high: float = 1.0

    @model_validator(mode="after")
    def _order(self):
        if not self.low < self.high:
            raise ValueError("need low < high")
        return self

    def draw(self, n, rng):
        return rng.uniform(self.low, self.high, n)


class NormalInit(Strict):
    kind: Literal["normal"]
    mean: float = 0.0
    sd: float = Field(1.0, gt=0)

    def draw(self, n, rng):
        return rng.normal(self.mean, self.sd, n)


class LognormalInit(Strict):
    kind: Literal["lognormal"]
    mean: float = 0.0
    sigma: float = Field(1.0, gt=0)

    def draw(self, n, rng):
        return rng.lognormal(self.mean, self.sigma, n)


class ExplicitInit(Strict):
    kind: Literal["explicit"]
    values: List[float]

    def draw(self, n, rng):
        if len(self.values) != n:
            raise ConfigError(f"{len(self.values)} values for N={n}", "init.values")
        return np.array(self.values, dtype=float)


InitConfig = Union[UniformInit, NormalInit, LognormalInit, ExplicitInit]


class TopologyConfig(Strict):
    kind: Literal["complete", "star", "random_regular", "scale_free", "erdos_renyi"] = "complete"
    params: Dict[str, float] = Field(default_factory=dict)
    seed: Optional[int] = None  # default: derived from the run seed


class ClassifierConfig(Strict):
    bins: int = Field(41, ge=3)
    eps_ext: Optional[float] = Field(None, gt=0)       # absolute threshold
    eps_ext_fraction: float = Field(0.8, gt=0, lt=1)   # used when eps_ext is unset
    min_fraction: float = Field(0.05, gt=0, lt=1)
    min_sep: int = Field(2, ge=1)


class OutputConfig(Strict):
    dir: str = "out"
    trajectory: str = "trajectory.csv"
    classification: str = "classification.json"
    record_every: int = Field(1, ge=1)


class RunConfig(Strict):
    model: ModelConfig
    N: int = Field(ge=2)
    init: InitConfig = Field(discriminator="kind")
    steps: int = Field(ge=0)
    seed: int = Field(0, ge=0)
    bound: Optional[float] = Field(1.0, gt=0)  # None: unbounded attitude space
    topology: TopologyConfig = Field(default_factory=TopologyConfig)
    classifier: ClassifierConfig = Field(default_factory=ClassifierConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @property
    def space(self):
        return AttitudeSpace(self.bound)

    def model_spec(self):
        cls = PRESETS[self.model.preset]
        try:
            preset = cls(**self.model.params)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), "model.params") from exc
        return ModelSpec(preset, self.model.scheduler, self.space)

    def build(self, seed=None):
        """``(ModelSpec, initial Population)`` for ``seed`` (default: the config's)."""
        seed = self.seed if seed is None else seed
        spec = self.model_spec()
        a0 = self.init.draw(self.N, stream_rng(seed, INIT_STREAM))
        topo = None
        if self.topology.kind != "complete":
            tseed = self.topology.seed
            if tseed is None:
                tseed = int(stream_rng(seed, TOPOLOGY_STREAM).integers(2**31))
            topo = generate_topology(self.topology.kind, self.N, self.topology.params, tseed)
        return spec, Population(a0, space=self.space, topology=topo)


class SweepAxis(Strict):
    name: str
    lo: float
    hi: float
    steps: int = Field(ge=1)

    def values(self):
        if self.steps == 1:
            return [self.lo]
        return [float(f"{v:.12g}") for v in np.linspace(self.lo, self.hi, self.steps)]


class SweepConfig(Strict):
    base: RunConfig
    sweep: List[SweepAxis] = Field(min_length=1)
    replicas: int = Field(1, ge=1)
    jobs: int = Field(1, ge=1)
    output: str = "sweep.csv"

    @model_validator(mode="after")
    def _names(self):
        base = self.base.model_dump()
        for ax in self.sweep:
            value = _lookup(base, ax.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                # params not given in the base config fall back to the preset default
                if not (ax.name.startswith("model.params.") and value is _MISSING
                        and _preset_default_is_real(self.base.model.preset, ax.name)):
                    raise ValueError(f"swept name {ax.name!r} is not a real-valued field")
        return self

    def cells(self):
        """Swept-value dicts in cell order (last axis varies fastest)."""
        names = [ax.name for ax in self.sweep]
        return [dict(zip(names, combo))
                for combo in itertools.product(*(ax.values() for ax in self.sweep))]

    def cell_config(self, values):
        doc = self.base.model_dump()
        for name, v in values.items():
            _assign(doc, name, v, self.base.model.preset)
        return validate_run(doc)


_MISSING = object()


def _lookup(doc, dotted):
    cur = doc
    for part in dotted.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return _MISSING
        cur = cur[part]
    return cur


def _assign(doc, dotted, value, preset):
    parts = dotted.split(".")
    cur = doc
    for part in parts[:-1]:
        cur = cur.setdefault(part, {})
    if dotted.startswith("model.params."):
        # params are stored untyped; the preset's own default says int or float
        integral = isinstance(_preset_default(preset, dotted), int)
    else:
        integral = isinstance(cur.get(parts[-1]), int)
    cur[parts[-1]] = int(round(value)) if integral else float(value)


def _preset_default(preset, dotted):
    name = dotted.split(".", 2)[2]
    for f in dataclasses.fields(PRESETS[preset]):
        if f.name == name:
            return f.default
    return None


def _preset_default_is_real(preset, dotted):
    d = _preset_default(preset, dotted)
    return isinstance(d, (int, float)) and not isinstance(d, bool)


def _as_config_error(exc):
    err = exc.errors()[0]
    path = ".".join(str(p) for p in err["loc"])
    return ConfigError(err["msg"], path or None)


def validate_run(doc):
    try:
        return RunConfig.model_validate(doc)
    except ValidationError as exc:
        raise _as_config_error(exc) from None


def validate_sweep(doc):
    try:
        return SweepConfig.model_validate(doc)
    except ValidationError as exc:
        raise _as_config_error(exc) from None


def shipped_configs():
    """Names of the configs bundled with the package."""
    root = resources.files("odl") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_document(path_or_name):
    """Parse a config file, or a bundled config given by bare name."""
    p = Path(path_or_name)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    elif path_or_name in shipped_configs():
        text = (resources.files("odl") / "configs" / f"{path_or_name}.json").read_text("utf-8")
    else:
        raise ConfigError(f"no such config file: {path_or_name}", "config")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", "config") from None
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object", "config")
    return doc


def load_run(path_or_name):
    return validate_run(read_document(path_or_name))


def load_sweep(path_or_name):
    return validate_sweep(read_document(path_or_name))
