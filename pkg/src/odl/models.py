"""Attitude-update rules and the model presets that drive the engine.

The module has two layers. The ``*_update`` functions are the bare rules:
given one receiver and what it hears, return the change. The preset classes
wire a rule to a selection function and a message presentation so that
:func:`odl.engine.simulate` can run it.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import ClassVar, Optional

import numpy as np

from . import forces
from ._kernels import deffuant_run
from .engine import AttitudeSpace, MessageBundle, Scheduler
from .errors import (
    ConfigError,
    DegenerateErrors,
    IndividualBundle,
    InvalidUncertainty,
    LatitudeOrder,
    MultipleSenders,
    NonPositiveVariance,
    OutOfSpace,
    SenderCountNotTwo,
    WeightMismatch,
)
from .selection import (
    activity_homophily_arrays,
    sample_activities,
    select_neighbors,
    select_random_distinct,
    select_random_in_bound,
    select_random_single,
)

log = logging.getLogger(__name__)

SYNC = Scheduler.SYNCHRONOUS
SEQ = Scheduler.RANDOM_SEQUENTIAL


# -- update rules -----------------------------------------------------------

def _weight_list(bundle, weights):
    if isinstance(weights, dict):
        missing = [s for s in bundle.senders if s not in weights]
        if missing:
            raise WeightMismatch(f"no weight for senders {missing}")
        return [float(weights[s]) for s in bundle.senders]
    weights = [float(w) for w in weights]
    if len(weights) != bundle.count:
        raise WeightMismatch(f"{len(weights)} weights for {bundle.count} senders")
    return weights


def degroot_update(a_i, bundle, alpha, weights):
    """Weighted average of the differences to each sender.

    ``weights`` is either a sequence aligned with ``bundle.senders`` or a
    mapping from sender id to weight.
    """
    p = _weight_list(bundle, weights)
    if any(w < 0 or w > 1 for w in p) or abs(sum(p) - 1.0) > 1e-9:
        raise WeightMismatch("weights must lie in [0, 1] and sum to 1")
    return alpha * sum(w * (m - a_i) for w, m in zip(p, bundle.values))


def degroot_self_weight_form(attitudes, alpha, weights):
    """One synchronous step in the original self-inclusive form.

    ``weights[i, j]`` are the weights over the *other* agents (zero diagonal,
    rows summing to 1). Builds ``P'`` with ``P'_ii = 1 - alpha_i`` and
    ``P'_ij = alpha_i * p_ij`` and returns ``P' @ a``.
    """
    a = np.asarray(attitudes, dtype=float)
    alpha = np.broadcast_to(np.asarray(alpha, dtype=float), a.shape)
    full = alpha[:, None] * np.asarray(weights, dtype=float)
    full[np.diag_indices_from(full)] = 1.0 - alpha
    return full @ a


def hunter_update(bundle, alpha, kind=forces.Linear()):
    """Sum of the (reinforced) messages, scaled by ``alpha``."""
    return alpha * sum(forces.reinforcement(m, kind) for m in bundle.values)


def deffuant_bc_update(a_i, m_j, alpha, epsilon):
    """Move toward a single message only if it lies strictly within ``epsilon``."""
    if isinstance(m_j, MessageBundle):
        if m_j.count != 1:
            raise MultipleSenders(f"expected one sender, got {m_j.count}")
        m_j = m_j.values[0]
    d = m_j - a_i
    return alpha * d if abs(d) < epsilon else 0.0


def hk_update(a_i, bundle, epsilon):
    """Equal-weight average over self and every sender within ``epsilon``.

    Written as ``sum(in-bound differences) / (N_eps + 1)``, which is the same
    as ``N_eps/(N_eps+1) * mean(in-bound differences)``.
    """
    total = 0.0
    n_in = 0
    for m in bundle.values:
        d = m - a_i
        if abs(d) < epsilon:
            total += d
            n_in += 1
    if n_in == 0:
        return 0.0
    return (n_in / (n_in + 1)) * (total / n_in)


def ra_update(a_i, u_i, a_j, u_j, alpha, update_uncertainty=True):
    """Relative-agreement step; returns ``(delta_attitude, delta_uncertainty)``.

    The uncertainty moves by the same rule applied to ``u`` when
    ``update_uncertainty`` is set.
    """
    if not (u_i > 0 and u_j > 0):
        raise InvalidUncertainty(f"uncertainties must be > 0, got {u_i}, {u_j}")
    sim = forces.similarity(a_i, a_j, forces.RelativeAgreement(u_i, u_j))
    if sim == 0.0:
        return 0.0, 0.0
    du = alpha * sim * (u_j - u_i) if update_uncertainty else 0.0
    return alpha * sim * (a_j - a_i), du


def sj_update(a_i, m_j, alpha, u, t):
    """Assimilate inside the latitude of acceptance, repel beyond rejection."""
    if u > t:
        raise LatitudeOrder(f"acceptance {u} exceeds rejection {t}")
    d = m_j - a_i
    pull = d if abs(d) < u else 0.0
    return alpha * (pull + forces.repulsion(a_i, m_j, t))


def lorenz_update(a_i, m_j, alpha, lam, k, rho, M, s=1.0):
    """Similarity-gated, polarity-damped mix of assimilation and reinforcement."""
    if abs(a_i) > M:
        raise OutOfSpace(f"|{a_i}| exceeds bound {M}")
    lk = lam ** k
    sim = lk / (lk + abs(m_j - a_i) ** k)
    pol = (M * M - a_i * a_i) / (M * M)
    return s * sim * pol * alpha * (m_j - rho * a_i)


def madsen_bayes_update(mu_i, sigma_i, mu_j, beta, obs_variance=1.0):
    """Conjugate normal update of belief ``N(mu_i, sigma_i^2)`` on observing ``mu_j``.

    Messages further than ``beta * sigma_i`` from the mean are ignored.
    Returns ``(mu', sigma')``.
    """
    if not (sigma_i > 0 and obs_variance > 0):
        raise NonPositiveVariance("sigma and obs_variance must be > 0")
    if abs(mu_j - mu_i) > beta * sigma_i:
        return mu_i, sigma_i
    var = sigma_i * sigma_i
    denom = var + obs_variance
    mu = (obs_variance * mu_i + var * mu_j) / denom
    return mu, math.sqrt(var * obs_variance / denom)


def baumann_rhs(attitudes, rows, cols, alpha, c):
    """Right-hand side of the coupled ODE for a fixed contact list.

    ``(rows[k], cols[k])`` means agent ``rows[k]`` hears agent ``cols[k]``.
    """
    drive = np.bincount(rows, weights=np.tanh(c * attitudes[cols]), minlength=attitudes.size)
    return -attitudes + alpha * drive


def _contact_arrays(contacts, n):
    if isinstance(contacts, dict):
        items = contacts.items()
    else:
        items = enumerate(contacts)
    rows, cols = [], []
    for i, js in items:
        js = np.asarray(js, dtype=np.int64)
        rows.append(np.full(js.size, i, dtype=np.int64))
        cols.append(js)
    if not rows:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(rows), np.concatenate(cols)


def baumann_step(attitudes, contacts_per_agent, alpha, c, dt, integrator="euler"):
    """Advance the coupled ODE by ``dt`` with contacts held fixed over the step.

    ``contacts_per_agent`` maps receiver -> senders (dict or sequence).
    ``alpha`` may be a scalar or a per-agent array.
    """
    if not (dt > 0 and c > 0):
        raise ConfigError("dt and c must be > 0")
    a = np.asarray(attitudes, dtype=float)
    rows, cols = _contact_arrays(contacts_per_agent, a.size)
    return _integrate(a, rows, cols, np.asarray(alpha, dtype=float), c, dt, integrator)


def _integrate(a, rows, cols, alpha, c, dt, integrator):
    f = lambda x: baumann_rhs(x, rows, cols, alpha, c)  # noqa: E731
    if integrator == "euler":
        return a + dt * f(a)
    if integrator == "rk4":
        k1 = f(a)
        k2 = f(a + 0.5 * dt * k1)
        k3 = f(a + 0.5 * dt * k2)
        k4 = f(a + dt * k3)
        return a + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    raise ConfigError(f"unknown integrator {integrator!r}", "integrator")


def becker17_alpha_assignment(errors, r_target, rng):
    """Influence strengths in [0, 1] whose Pearson correlation with ``errors`` is ``r_target``.

    The centred error vector and an independent Gaussian vector,
    orthogonalised against it, are mixed as ``r*z + sqrt(1-r^2)*xi``; the
    sample correlation of the mix with the errors is then exactly ``r``.
    A min-max rescale to [0, 1] is affine and keeps it.
    """
    e = np.asarray(errors, dtype=float)
    if e.size < 3:
        raise ConfigError("need at least 3 agents", "errors")
    if not -1.0 <= r_target <= 1.0:
        raise ConfigError("r_target must lie in [-1, 1]", "r_target")
    z = e - e.mean()
    norm = np.linalg.norm(z)
    if norm <= 1e-12 * max(1.0, np.abs(e).max()):
        raise DegenerateErrors("all errors are identical; correlation undefined")
    z /= norm
    xi = rng.standard_normal(e.size)
    xi -= xi.mean()
    xi -= (xi @ z) * z
    xi /= np.linalg.norm(xi)
    v = r_target * z + math.sqrt(max(0.0, 1.0 - r_target * r_target)) * xi
    return (v - v.min()) / (v.max() - v.min())


def sigmoid(x):
    return 1.0 / (1.0 + math.exp(-x)) if x >= 0 else math.exp(x) / (1.0 + math.exp(x))


def becker19_alpha(a_i, b_i, e_i):
    """Sigmoid of the partisan-aligned attitude plus noise."""
    if b_i not in (-1, 1):
        raise ConfigError(f"partisan sign must be -1 or +1, got {b_i}", "bias")
    return sigmoid(a_i * b_i + e_i)


def becker_averaged_update(a_i, mean_message, alpha):
    """Move a fraction ``alpha`` of the way to the averaged message.

    ``mean_message`` is a float or an averaged :class:`MessageBundle`.
    """
    if isinstance(mean_message, MessageBundle):
        if not mean_message.averaged:
            raise IndividualBundle("this rule needs an averaged presentation")
        mean_message = mean_message.mean
    return alpha * (mean_message - a_i)


def hew_weight(distance, alpha, beta):
    """Raw source weight: 1 inside the dead band ``alpha``, hyperbolic decay beyond."""
    x = max(distance - alpha, 0.0)
    return 1.0 - x / (x + beta)


def hew_update(a_i, m_m, m_n, alpha, beta):
    """New attitude after hearing exactly two sources at once.

    The two raw weights are normalised to sum to one and the prior attitude
    gets no weight.
    """
    if isinstance(m_m, MessageBundle):
        if m_m.count != 2:
            raise SenderCountNotTwo(f"expected two senders, got {m_m.count}")
        m_m, m_n = m_m.values
    if not beta > 0:
        raise ConfigError("beta must be > 0", "beta")
    w_m = hew_weight(abs(m_m - a_i), alpha, beta)
    w_n = hew_weight(abs(m_n - a_i), alpha, beta)
    total = w_m + w_n
    if total <= 0.0:
        log.warning("both source weights vanished; attitude left unchanged")
        return a_i
    return (w_m * m_m + w_n * m_n) / total


# -- presets ----------------------------------------------------------------

def neighbor_mean(pop):
    """Mean attitude of each agent's senders (all others when no graph); NaN if none."""
    a = pop.attitudes
    n = a.size
    topo = pop.topology
    if topo is None:
        return (a.sum() - a) / (n - 1)
    flat = getattr(topo, "_flat", None)
    if flat is None:
        counts = topo.degrees()
        flat = (np.concatenate(topo.neighbors) if counts.sum() else np.empty(0, np.int64),
                np.repeat(np.arange(n), counts), counts)
        topo._flat = flat
    cols, rows, counts = flat
    sums = np.bincount(rows, weights=a[cols], minlength=n)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def senders_of(pop, i):
    if pop.topology is None:
        return [j for j in range(len(pop)) if j != i]
    return select_neighbors(pop.topology, i)


def random_partner(pop, i, rng):
    if pop.topology is None:
        return select_random_single(pop, i, rng)
    nb = pop.topology.neighbors[i]
    if nb.size == 0:
        return []
    return [int(nb[int(rng.random() * nb.size)])]


@dataclass(frozen=True)
class Preset:
    """Base for model presets.

    Subclasses either implement :meth:`update` (one focal agent, read from a
    snapshot) or override :meth:`advance` with a vectorised version.
    """
    name: ClassVar[str] = ""
    default_scheduler: ClassVar[Scheduler] = SYNC
    schedulers: ClassVar[tuple] = (SYNC, SEQ)
    alpha_unit: ClassVar[bool] = True
    needs_bound: ClassVar[bool] = False

    def prepare(self, pop, rng):
        """Fill per-agent parameters the population does not carry yet."""
        if pop.alpha is None and hasattr(self, "alpha"):
            pop.alpha = np.full(len(pop), float(self.alpha))

    def validate(self, pop):
        if self.needs_bound and not pop.space.is_bounded:
            raise ConfigError(f"{self.name} needs a bounded attitude space", "space")
        pop.validate(alpha_unit=self.alpha_unit)

    def update(self, pop, i, rng):
        """Return ``(new_attitude, {param: new_value})`` or None for no change."""
        raise NotImplementedError

    def advance_one(self, pop, i, rng):
        """Update the single focal agent ``i`` in place."""
        ch = self.update(pop, i, rng)
        if ch is not None:
            pop.attitudes[i] = ch[0]
            for k, v in ch[1].items():
                pop.params[k][i] = v

    def run_sequential(self, pop, steps, rng):
        """Optional compiled fast path for ``steps`` random-sequential steps.

        Return False when not available; the engine then loops over
        :meth:`advance_one`. Implementations must consume ``rng`` exactly as
        that loop would.
        """
        return False

    def advance(self, pop, focals, rng):
        snap = pop.copy() if focals is None else pop
        idx = range(len(pop)) if focals is None else focals
        changes = [(i, self.update(snap, i, rng)) for i in idx]
        for i, ch in changes:
            if ch is None:
                continue
            new_a, extra = ch
            pop.attitudes[i] = new_a
            for k, v in extra.items():
                pop.params[k][i] = v


@dataclass(frozen=True)
class VectorPreset(Preset):
    """Preset whose :meth:`advance` already handles any focal subset."""

    def advance_one(self, pop, i, rng):
        self.advance(pop, [i], rng)


@dataclass(frozen=True)
class DeGroot(VectorPreset):
    name: ClassVar[str] = "degroot"
    alpha: float = 1.0
    weights: Optional[np.ndarray] = field(default=None, compare=False)

    def validate(self, pop):
        super().validate(pop)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (len(pop), len(pop)):
                raise WeightMismatch("weights must be an N x N matrix", "model.weights")
            if np.any(np.diag(w) != 0) or np.any((w < 0) | (w > 1)):
                raise WeightMismatch("weights need zero diagonal and entries in [0, 1]")
            if np.any(np.abs(w.sum(axis=1) - 1.0) > 1e-9):
                raise WeightMismatch("each weight row must sum to 1")

    def advance(self, pop, focals, rng):
        a = pop.attitudes
        if self.weights is not None:
            target = np.asarray(self.weights) @ a
        else:
            target = neighbor_mean(pop)
        delta = np.where(np.isnan(target), 0.0, pop.alpha * (target - a))
        if focals is None:
            a += delta
        else:
            for i in focals:
                a[i] += delta[i]


@dataclass(frozen=True)
class Hunter(Preset):
    name: ClassVar[str] = "hunter"
    alpha: float = 1.0
    c: Optional[float] = None  # None: linear reinforcement, else tanh(c*m)

    def update(self, pop, i, rng):
        js = senders_of(pop, i)
        if not js:
            return None
        kind = forces.Linear() if self.c is None else forces.Tanh(self.c)
        bundle = MessageBundle.individual(i, js, pop.attitudes[js])
        return pop.attitudes[i] + hunter_update(bundle, pop.alpha[i], kind), {}


@dataclass(frozen=True)
class DeffuantBC(Preset):
    name: ClassVar[str] = "deffuant_bc"
    default_scheduler: ClassVar[Scheduler] = SEQ
    epsilon: float = 0.2
    alpha: float = 0.5

    def prepare(self, pop, rng):
        super().prepare(pop, rng)
        pop.set_default("epsilon", self.epsilon)

    def update(self, pop, i, rng):
        eps = pop.params["epsilon"][i]
        a = pop.attitudes
        if pop.topology is None:
            js = select_random_in_bound(pop, i, eps, rng)
        else:
            nb = [j for j in select_neighbors(pop.topology, i) if abs(a[j] - a[i]) < eps]
            js = [nb[int(rng.random() * len(nb))]] if nb else []
        if not js:
            return None
        return a[i] + deffuant_bc_update(a[i], a[js[0]], pop.alpha[i], eps), {}

    def advance_one(self, pop, i, rng):
        ch = self.update(pop, i, rng)
        if ch is not None:
            pop.attitudes[i] = ch[0]

    def run_sequential(self, pop, steps, rng):
        if pop.topology is not None or len(pop) < 2:
            return False
        bound = math.inf if pop.space.bound is None else pop.space.bound
        deffuant_run(pop.attitudes, pop.params["epsilon"], pop.alpha, bound, steps, rng)
        return True


@dataclass(frozen=True)
class HKBC(VectorPreset):
    name: ClassVar[str] = "hk_bc"
    epsilon: float = 0.2

    def prepare(self, pop, rng):
        pop.set_default("epsilon", self.epsilon)

    def advance(self, pop, focals, rng):
        a = pop.attitudes
        eps = pop.params["epsilon"]
        rows = np.arange(len(a)) if focals is None else np.asarray(focals)
        diff = a[None, :] - a[rows, None]
        inb = np.abs(diff) < eps[rows, None]
        inb[np.arange(rows.size), rows] = False
        if pop.topology is not None:
            adj = np.zeros_like(inb)
            for r, i in enumerate(rows):
                adj[r, pop.topology.neighbors[i]] = True
            inb &= adj
        n_in = inb.sum(axis=1)
        delta = np.where(inb, diff, 0.0).sum(axis=1) / (n_in + 1)
        a[rows] += delta


@dataclass(frozen=True)
class RelativeAgreementModel(Preset):
    name: ClassVar[str] = "ra"
    default_scheduler: ClassVar[Scheduler] = SEQ
    alpha: float = 0.5
    uncertainty: float = 0.5
    update_uncertainty: bool = True

    def prepare(self, pop, rng):
        super().prepare(pop, rng)
        pop.set_default("uncertainty", self.uncertainty)

    def update(self, pop, i, rng):
        js = random_partner(pop, i, rng)
        if not js:
            return None
        j = js[0]
        u = pop.params["uncertainty"]
        da, du = ra_update(pop.attitudes[i], u[i], pop.attitudes[j], u[j],
                           pop.alpha[i], self.update_uncertainty)
        return pop.attitudes[i] + da, {"uncertainty": u[i] + du}


@dataclass(frozen=True)
class SocialJudgement(Preset):
    name: ClassVar[str] = "sj"
    default_scheduler: ClassVar[Scheduler] = SEQ
    alpha: float = 0.1
    accept: float = 0.2
    reject: float = 0.6

    def prepare(self, pop, rng):
        super().prepare(pop, rng)
        pop.set_default("accept", self.accept)
        pop.set_default("reject", self.reject)

    def update(self, pop, i, rng):
        js = random_partner(pop, i, rng)
        if not js:
            return None
        a_i = pop.attitudes[i]
        d = sj_update(a_i, pop.attitudes[js[0]], pop.alpha[i],
                      pop.params["accept"][i], pop.params["reject"][i])
        return a_i + d, {}


@dataclass(frozen=True)
class Lorenz(Preset):
    name: ClassVar[str] = "lorenz"
    default_scheduler: ClassVar[Scheduler] = SEQ
    needs_bound: ClassVar[bool] = True
    alpha: float = 0.25
    lam: float = 0.5
    k: float = 2.0
    rho: float = 1.0
    credibility: float = 1.0

    def validate(self, pop):
        super().validate(pop)
        forces.ForceParams(forces.RationalPower(self.lam, self.k),
                           pol_bound=pop.space.bound, credibility=self.credibility,
                           rho=self.rho)

    def update(self, pop, i, rng):
        js = random_partner(pop, i, rng)
        if not js:
            return None
        a_i = pop.attitudes[i]
        d = lorenz_update(a_i, pop.attitudes[js[0]], pop.alpha[i], self.lam, self.k,
                          self.rho, pop.space.bound, self.credibility)
        return a_i + d, {}


@dataclass(frozen=True)
class MadsenBayes(Preset):
    name: ClassVar[str] = "madsen_bayes"
    default_scheduler: ClassVar[Scheduler] = SEQ
    alpha_unit: ClassVar[bool] = False
    beta: float = 2.0
    obs_variance: float = 1.0
    sigma: float = 1.0

    def prepare(self, pop, rng):
        pop.set_default("sigma", self.sigma)

    def validate(self, pop):
        if not self.obs_variance > 0:
            raise NonPositiveVariance("obs_variance must be > 0")
        super().validate(pop)

    def update(self, pop, i, rng):
        js = random_partner(pop, i, rng)
        if not js:
            return None
        mu, sigma = madsen_bayes_update(pop.attitudes[i], pop.params["sigma"][i],
                                        pop.attitudes[js[0]], self.beta, self.obs_variance)
        return mu, {"sigma": sigma}


@dataclass(frozen=True)
class Baumann(Preset):
    name: ClassVar[str] = "baumann"
    schedulers: ClassVar[tuple] = (SYNC,)
    alpha_unit: ClassVar[bool] = False
    alpha: float = 3.0
    c: float = 3.0
    beta: float = 3.0
    gamma: float = 2.1
    dt: float = 0.01
    contacts: int = 10
    act_min: float = 0.01
    delta: float = 1e-3
    reciprocity: float = 0.5
    integrator: str = "euler"
    substeps: int = 1  # integration steps per sampled contact network

    def prepare(self, pop, rng):
        super().prepare(pop, rng)
        if "activity" not in pop.params:
            pop.params["activity"] = sample_activities(len(pop), self.gamma, self.act_min, rng)

    def validate(self, pop):
        if not (self.dt > 0 and self.c > 0 and self.gamma > 0 and self.contacts >= 1):
            raise ConfigError("baumann needs dt > 0, c > 0, gamma > 0, contacts >= 1", "model")
        if self.substeps < 1:
            raise ConfigError("substeps must be >= 1", "model.substeps")
        if not 0.0 <= self.reciprocity <= 1.0:
            raise ConfigError("reciprocity must lie in [0, 1]", "model.reciprocity")
        if self.integrator not in ("euler", "rk4"):
            raise ConfigError(f"unknown integrator {self.integrator!r}", "model.integrator")
        super().validate(pop)

    def contact_arrays(self, pop, rng):
        """``(rows, cols)``: agent ``rows[k]`` hears ``cols[k]`` this step.

        Each chosen link is reciprocated with probability ``reciprocity``.
        """
        active, partners = activity_homophily_arrays(pop, self.beta, self.contacts, rng,
                                                     self.delta)
        rows = np.repeat(active, partners.shape[1])
        cols = partners.ravel()
        if self.reciprocity > 0 and cols.size:
            back = rng.random(cols.size) < self.reciprocity
            rows, cols = np.concatenate((rows, cols[back])), np.concatenate((cols, rows[back]))
        return rows, cols

    def contact_lists(self, pop, rng):
        """Receiver -> senders for this step, including reciprocated links."""
        rows, cols = self.contact_arrays(pop, rng)
        heard = {}
        for r, c in zip(rows.tolist(), cols.tolist()):
            heard.setdefault(r, []).append(c)
        return heard

    def advance(self, pop, focals, rng):
        rows, cols = self.contact_arrays(pop, rng)
        for _ in range(self.substeps):
            pop.attitudes[:] = _integrate(pop.attitudes, rows, cols, pop.alpha, self.c,
                                          self.dt, self.integrator)


@dataclass(frozen=True)
class Becker17(VectorPreset):
    """Averaged-neighbour updates with accuracy-correlated influence strength."""
    name: ClassVar[str] = "becker17"
    r_target: float = 0.8
    truth: float = 0.0

    def prepare(self, pop, rng):
        if pop.alpha is None:
            errors = np.abs(pop.attitudes - self.truth)
            pop.alpha = becker17_alpha_assignment(errors, self.r_target, rng)

    def advance(self, pop, focals, rng):
        a = pop.attitudes
        mbar = neighbor_mean(pop)
        delta = np.where(np.isnan(mbar), 0.0, pop.alpha * (mbar - a))
        if focals is None:
            a += delta
        else:
            for i in focals:
                a[i] += delta[i]


@dataclass(frozen=True)
class Becker19(VectorPreset):
    """Averaged-neighbour updates whose weighting follows a partisan sigmoid.

    With ``alpha_form="self_weight"`` (the default) the sigmoid is the weight
    an agent keeps on its own estimate, so influence strength is
    ``1 - sigmoid``; ``"influence"`` uses the sigmoid directly.
    """
    name: ClassVar[str] = "becker19"
    alpha_unit: ClassVar[bool] = False
    noise: float = 1.0
    alpha_form: str = "self_weight"

    def prepare(self, pop, rng):
        pop.set_default("bias", 1.0)
        if "noise" not in pop.params:
            pop.params["noise"] = rng.normal(0.0, self.noise, len(pop)) if self.noise > 0 \
                else np.zeros(len(pop))

    def validate(self, pop):
        if self.alpha_form not in ("self_weight", "influence"):
            raise ConfigError(f"unknown alpha_form {self.alpha_form!r}", "model.alpha_form")
        if self.noise < 0:
            raise ConfigError("noise must be >= 0", "model.noise")
        super().validate(pop)

    def influence(self, pop):
        x = pop.attitudes * pop.params["bias"] + pop.params["noise"]
        s = 0.5 * (1.0 + np.tanh(0.5 * x))  # sigmoid, overflow-free
        return 1.0 - s if self.alpha_form == "self_weight" else s

    def advance(self, pop, focals, rng):
        a = pop.attitudes
        mbar = neighbor_mean(pop)
        delta = np.where(np.isnan(mbar), 0.0, self.influence(pop) * (mbar - a))
        if focals is None:
            a += delta
        else:
            for i in focals:
                a[i] += delta[i]


@dataclass(frozen=True)
class FrigoHEW(Preset):
    name: ClassVar[str] = "frigo_hew"
    default_scheduler: ClassVar[Scheduler] = SEQ
    alpha: float = 5.0  # dead-band half-width, not an influence strength
    beta: float = 10.0

    def prepare(self, pop, rng):
        pass

    def validate(self, pop):
        if not (self.beta > 0 and self.alpha >= 0):
            raise ConfigError("frigo_hew needs alpha >= 0 and beta > 0", "model")
        super().validate(pop)

    def update(self, pop, i, rng):
        if pop.topology is None:
            js = select_random_distinct(pop, i, 2, rng)
        else:
            nb = pop.topology.neighbors[i]
            if nb.size < 2:
                return None
            js = [int(j) for j in rng.choice(nb, size=2, replace=False)]
        a = pop.attitudes
        return hew_update(a[i], a[js[0]], a[js[1]], self.alpha, self.beta), {}


PRESETS = {cls.name: cls for cls in (
    DeGroot, Hunter, DeffuantBC, HKBC, RelativeAgreementModel, SocialJudgement,
    Lorenz, MadsenBayes, Baumann, Becker17, Becker19, FrigoHEW)}


@dataclass(frozen=True)
class ModelSpec:
    """A preset plus its update scheduling and attitude space."""
    preset: Preset
    scheduler: Optional[Scheduler] = None
    space: AttitudeSpace = field(default_factory=lambda: AttitudeSpace.bounded(1.0))

    def __post_init__(self):
        sched = self.scheduler or self.preset.default_scheduler
        object.__setattr__(self, "scheduler", Scheduler(sched))
        if self.scheduler not in self.preset.schedulers:
            raise ConfigError(
                f"{self.preset.name} does not support scheduler {self.scheduler.value}",
                "model.scheduler")
