"""The four force components of social influence and their modulators.

Every function here is a pure scalar map. Models compose them; nothing in
this module knows about agents, populations or time.
"""

import math
from dataclasses import dataclass
from typing import Union

from .errors import ConfigError, InvalidUncertainty, OutOfSpace


# -- kinds ------------------------------------------------------------------

@dataclass(frozen=True)
class Linear:
    """Reinforcement that passes the message through unchanged."""


@dataclass(frozen=True)
class Tanh:
    """Saturating reinforcement ``tanh(c * m)``; ``c`` is the controversialness."""
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ConfigError("controversialness c must be > 0", "c")


@dataclass(frozen=True)
class Step:
    """Confidence-bound similarity: 1 inside ``epsilon``, else 0."""
    epsilon: float


@dataclass(frozen=True)
class RationalPower:
    """Smooth similarity ``lam^k / (lam^k + d^k)``."""
    lam: float
    k: float

    def __post_init__(self):
        if not (self.lam > 0 and self.k > 0):
            raise ConfigError("lam and k must be > 0", "sim_kind")


@dataclass(frozen=True)
class RelativeAgreement:
    """Segment-overlap similarity; ``u_i`` and ``u_j`` are the uncertainties."""
    u_i: float
    u_j: float


ReinforcementKind = Union[Linear, Tanh]
SimilarityKind = Union[Step, RationalPower, RelativeAgreement]


@dataclass(frozen=True)
class ForceParams:
    """Bundle of force hyperparameters used by the combined update."""
    sim_kind: SimilarityKind
    rep_threshold: float = math.inf
    pol_bound: float = 1.0
    credibility: float = 1.0
    controversialness: float = 1.0
    rho: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError("rho must lie in [0, 1]", "rho")
        if not 0.0 <= self.credibility <= 1.0:
            raise ConfigError("credibility must lie in [0, 1]", "credibility")
        if not self.controversialness > 0:
            raise ConfigError("controversialness must be > 0", "controversialness")
        if not self.pol_bound > 0:
            raise ConfigError("pol_bound must be > 0", "pol_bound")


# -- forces -----------------------------------------------------------------

def assimilation(a, m):
    """Pull toward the message: ``m - a``."""
    return m - a


def reinforcement(m, kind=Linear()):
    """Push in the direction of the message's own sign."""
    if isinstance(kind, Tanh):
        return math.tanh(kind.c * m)
    return m


def ra_overlap(a, u_i, m, u_j):
    """Signed overlap of ``[a-u_i, a+u_i]`` and ``[m-u_j, m+u_j]``.

    Negative when the segments are disjoint.
    """
    return min(a + u_i, m + u_j) - max(a - u_i, m - u_j)


def similarity(a, m, kind):
    """Non-negative gate that decays with ``|m - a|``."""
    if isinstance(kind, Step):
        return 1.0 if abs(m - a) < kind.epsilon else 0.0
    if isinstance(kind, RationalPower):
        lk = kind.lam ** kind.k
        return lk / (lk + abs(m - a) ** kind.k)
    if isinstance(kind, RelativeAgreement):
        if not kind.u_j > 0:
            raise InvalidUncertainty(f"u_j must be > 0, got {kind.u_j}")
        ratio = ra_overlap(a, kind.u_i, m, kind.u_j) / kind.u_j
        return ratio - 1.0 if ratio > 1.0 else 0.0
    raise ConfigError(f"unknown similarity kind {kind!r}")


def repulsion(a, m, t_i):
    """Push away from messages beyond the latitude of rejection ``t_i``."""
    d = m - a
    return -d if abs(d) > t_i else 0.0


def polarity(a, M):
    """Mobility factor ``(M^2 - a^2) / M^2``; zero at the boundary."""
    if abs(a) > M:
        raise OutOfSpace(f"|{a}| exceeds bound {M}")
    return (M * M - a * a) / (M * M)


def combine_lorenz(asm, ref, sim, pol, s, rho, alpha):
    """Multiplicative combination of all components with assimilation weight ``rho``."""
    if not 0.0 <= rho <= 1.0:
        raise ConfigError("rho must lie in [0, 1]", "rho")
    return alpha * s * pol * sim * (rho * asm + (1.0 - rho) * ref)
