"""Domain types and the simulation loop.

A run is a repeated application of :func:`step`: pick the focal agents
according to the model's scheduler, let the model's preset update them from
the current snapshot, clamp to the attitude space, record.
"""

import enum
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import (
    ConfigError,
    EmptyPopulation,
    InvariantViolation,
    LatitudeOrder,
    OdlError,
    OutOfSpace,
)
from .rng import make_rng


@dataclass(frozen=True)
class AttitudeSpace:
    """``[-bound, +bound]``, or the whole real line when ``bound`` is None."""
    bound: Optional[float] = None

    def __post_init__(self):
        if self.bound is not None and not self.bound > 0:
            raise ConfigError(f"bound must be > 0, got {self.bound}", "space.M")

    @classmethod
    def bounded(cls, M):
        return cls(float(M))

    @classmethod
    def unbounded(cls):
        return cls(None)

    @property
    def is_bounded(self):
        return self.bound is not None

    def clamp(self, x):
        if self.bound is None:
            return x
        return np.clip(x, -self.bound, self.bound)

    def clamp_scalar(self, x):
        M = self.bound
        if M is None:
            return x
        return M if x > M else (-M if x < -M else x)

    def contains(self, x):
        return self.bound is None or bool(np.all(np.abs(x) <= self.bound))


class Scheduler(str, enum.Enum):
    SYNCHRONOUS = "synchronous"
    RANDOM_SEQUENTIAL = "random_sequential"


# Per-agent parameter arrays a Population may carry.
PARAM_NAMES = (
    "epsilon",      # confidence bound
    "accept",       # latitude of acceptance u_i
    "reject",       # latitude of rejection t_i
    "uncertainty",  # relative-agreement segment half-width u_{i,t}
    "bias",         # partisan sign b_i
    "noise",        # partisan noise e_i
    "activity",     # activation probability
    "sigma",        # Bayesian belief spread (the mean is the attitude)
)


@dataclass
class AgentState:
    """Read-only view of one agent."""
    id: int
    attitude: float
    alpha: float
    params: dict


@dataclass
class Population:
    attitudes: np.ndarray
    space: AttitudeSpace = field(default_factory=AttitudeSpace)
    alpha: Optional[np.ndarray] = None
    params: dict = field(default_factory=dict)
    topology: object = None  # selection.Topology or None for complete

    def __post_init__(self):
        self.attitudes = np.array(self.attitudes, dtype=np.float64)
        if self.attitudes.ndim != 1:
            raise ConfigError("attitudes must be one-dimensional", "attitudes")
        if self.alpha is not None:
            self.alpha = np.broadcast_to(
                np.asarray(self.alpha, dtype=np.float64), self.attitudes.shape).copy()
        for name, value in list(self.params.items()):
            if name not in PARAM_NAMES:
                raise ConfigError(f"unknown agent parameter {name!r}", "params")
            self.params[name] = np.broadcast_to(
                np.asarray(value, dtype=np.float64), self.attitudes.shape).copy()

    def __len__(self):
        return self.attitudes.size

    def agent(self, i):
        alpha = None if self.alpha is None else float(self.alpha[i])
        return AgentState(i, float(self.attitudes[i]), alpha,
                          {k: float(v[i]) for k, v in self.params.items()})

    def copy(self):
        return replace(
            self,
            attitudes=self.attitudes.copy(),
            alpha=None if self.alpha is None else self.alpha.copy(),
            params={k: v.copy() for k, v in self.params.items()},
        )

    def set_default(self, name, value):
        """Fill a per-agent parameter unless the population already carries one."""
        if name not in self.params:
            self.params[name] = np.full(len(self), float(value))
        return self.params[name]

    def validate(self, alpha_unit=True):
        """Check agent invariants; raise :class:`InvariantViolation` naming the agent."""
        if len(self) == 0:
            raise EmptyPopulation("population is empty")
        a = self.attitudes
        bad = np.flatnonzero(~np.isfinite(a))
        if bad.size:
            raise InvariantViolation("attitude is not finite", int(bad[0]))
        if self.space.is_bounded:
            bad = np.flatnonzero(np.abs(a) > self.space.bound)
            if bad.size:
                raise OutOfSpace(f"|attitude| exceeds {self.space.bound}", int(bad[0]))
        if self.alpha is not None and alpha_unit:
            bad = np.flatnonzero((self.alpha < 0) | (self.alpha > 1))
            if bad.size:
                raise InvariantViolation("alpha must lie in [0, 1]", int(bad[0]))
        p = self.params
        for name in ("sigma", "uncertainty"):
            if name in p:
                bad = np.flatnonzero(~(p[name] > 0))
                if bad.size:
                    raise InvariantViolation(f"{name} must be > 0", int(bad[0]))
        if "accept" in p and "reject" in p:
            bad = np.flatnonzero(~((p["accept"] > 0) & (p["accept"] <= p["reject"])))
            if bad.size:
                raise LatitudeOrder("latitudes need 0 < u <= t", int(bad[0]))
        if "bias" in p:
            bad = np.flatnonzero(np.abs(p["bias"]) != 1)
            if bad.size:
                raise InvariantViolation("bias must be -1 or +1", int(bad[0]))
        if "activity" in p:
            bad = np.flatnonzero((p["activity"] < 0) | (p["activity"] > 1))
            if bad.size:
                raise InvariantViolation("activity must lie in [0, 1]", int(bad[0]))


@dataclass(frozen=True)
class MessageBundle:
    """What a receiver hears on one step."""
    senders: tuple
    values: tuple
    averaged: bool = False

    @classmethod
    def individual(cls, receiver, senders, values):
        senders = tuple(int(s) for s in senders)
        values = tuple(float(v) for v in values)
        if len(senders) != len(values) or not senders:
            raise ConfigError("senders and values must be non-empty and equal length")
        if receiver in senders:
            raise ConfigError(f"agent {receiver} cannot send to itself")
        return cls(senders, values, False)

    @classmethod
    def average(cls, receiver, senders, values):
        b = cls.individual(receiver, senders, values)
        return cls(b.senders, b.values, True)

    @property
    def count(self):
        return len(self.values)

    @property
    def mean(self):
        return float(np.mean(self.values))


@dataclass
class Trajectory:
    """Recorded attitudes: row ``r`` holds the population after ``steps[r]`` steps."""
    attitudes: np.ndarray
    steps: np.ndarray
    seed: int
    spec: object
    final: Population = None

    @property
    def initial(self):
        return self.attitudes[0]

    @property
    def last(self):
        return self.attitudes[-1]


def _clamp_one(a, i, M):
    if a[i] > M:
        a[i] = M
    elif a[i] < -M:
        a[i] = -M


def advance(state, spec, rng):
    """One in-place step. ``state`` must already be prepared for ``spec``."""
    M = state.space.bound
    if spec.scheduler is Scheduler.SYNCHRONOUS:
        spec.preset.advance(state, None, rng)
        if M is not None:
            np.clip(state.attitudes, -M, M, out=state.attitudes)
    else:
        i = int(rng.random() * state.attitudes.size)
        spec.preset.advance_one(state, i, rng)
        if M is not None:
            _clamp_one(state.attitudes, i, M)


def step(population, model_spec, rng):
    """Return the population after one application of the model."""
    state = population.copy()
    state.space = model_spec.space
    model_spec.preset.prepare(state, rng)
    model_spec.preset.validate(state)
    advance(state, model_spec, rng)
    return state


def simulate(model_spec, initial_population, steps, seed, record_every=1):
    """Run ``steps`` steps from ``initial_population`` with generator seed ``seed``.

    ``record_every`` thins the stored rows; the last step is always kept.
    """
    if steps < 0:
        raise ConfigError(f"steps must be >= 0, got {steps}", "steps")
    if record_every < 1:
        raise ConfigError("record_every must be >= 1", "record_every")
    rng = make_rng(seed)
    state = initial_population.copy()
    state.space = model_spec.space
    model_spec.preset.prepare(state, rng)
    model_spec.preset.validate(state)

    recorded = [k for k in range(0, steps + 1, record_every)]
    if recorded[-1] != steps:
        recorded.append(steps)
    rows = np.empty((len(recorded), len(state)))
    rows[0] = initial_population.attitudes
    n = len(state)
    M = state.space.bound
    sequential = model_spec.scheduler is Scheduler.RANDOM_SEQUENTIAL
    preset = model_spec.preset
    draw = rng.random
    k = 0
    try:
        for r in range(1, len(recorded)):
            target = recorded[r]
            if sequential and preset.run_sequential(state, target - k, rng):
                k = target
            while k < target:
                k += 1
                if sequential:
                    # inlined advance(): this loop dominates run time
                    i = int(draw() * n)
                    preset.advance_one(state, i, rng)
                    if M is not None:
                        _clamp_one(state.attitudes, i, M)
                else:
                    advance(state, model_spec, rng)
            rows[r] = state.attitudes
    except OdlError as exc:
        exc.step = k
        exc.args = (f"step {k}: {exc}",)
        raise
    return Trajectory(rows, np.array(recorded), int(seed), model_spec, state)
