"""Selection functions and interaction graphs.

A selection function decides who a focal agent hears from on a given step.
Graphs are stored as per-agent neighbour arrays; ``None`` everywhere in the
engine means the complete graph.
"""

from dataclasses import dataclass

import networkx as nx
import numpy as np

from ._kernels import homophily_contacts, inbound_pick
from .errors import InvalidParams, TooFewAgents
from .rng import uniform_index

TOPOLOGY_KINDS = ("complete", "star", "random_regular", "scale_free", "erdos_renyi")


@dataclass
class Topology:
    kind: str
    neighbors: list  # list of sorted int arrays, one per agent

    def __len__(self):
        return len(self.neighbors)

    def degrees(self):
        return np.array([len(nb) for nb in self.neighbors])

    def edges(self):
        """Undirected edges as ``(u, v)`` with ``u < v``, sorted."""
        return [(u, int(v)) for u, nb in enumerate(self.neighbors) for v in nb if u < v]

    def validate(self):
        for i, nb in enumerate(self.neighbors):
            if np.any(nb == i):
                raise InvalidParams(f"self-loop at agent {i}", "topology")

    @classmethod
    def from_edges(cls, kind, n, edges):
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InvalidParams(f"self-loop at agent {u}", "topology")
            adj[u].add(v)
            adj[v].add(u)
        return cls(kind, [np.array(sorted(s), dtype=np.int64) for s in adj])


def generate_topology(kind, n, params=None, seed=0):
    """Build one of the supported graphs on ``n`` agents.

    ``params`` keys by kind: star ``center``; random_regular ``degree``;
    scale_free ``m_attach``; erdos_renyi ``p``.
    """
    params = dict(params or {})
    if n < 2:
        raise TooFewAgents(f"need at least 2 agents, got {n}", "N")
    if kind == "complete":
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    elif kind == "star":
        c = int(params.get("center", 0))
        if not 0 <= c < n:
            raise InvalidParams(f"center {c} out of range", "topology.center")
        edges = [(c, j) for j in range(n) if j != c]
    elif kind == "random_regular":
        d = int(params.get("degree", 4))
        if d < 1 or d >= n or (d * n) % 2:
            raise InvalidParams(f"no {d}-regular graph on {n} nodes", "topology.degree")
        edges = nx.random_regular_graph(d, n, seed=seed).edges()
    elif kind == "scale_free":
        m = int(params.get("m_attach", 2))
        if not 1 <= m < n:
            raise InvalidParams(f"m_attach must be in [1, {n})", "topology.m_attach")
        edges = nx.barabasi_albert_graph(n, m, seed=seed).edges()
    elif kind == "erdos_renyi":
        p = float(params.get("p", 0.1))
        if not 0.0 <= p <= 1.0:
            raise InvalidParams("p must lie in [0, 1]", "topology.p")
        edges = nx.gnp_random_graph(n, p, seed=seed).edges()
    else:
        raise InvalidParams(f"unknown topology kind {kind!r}", "topology.kind")
    return Topology.from_edges(kind, n, edges)


def write_edgelist(topology, path):
    with open(path, "w") as fh:
        for u, v in topology.edges():
            fh.write(f"{u} {v}\n")


def read_edgelist(path, n, kind="custom"):
    edges = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                u, v = line.split()
                edges.append((int(u), int(v)))
    return Topology.from_edges(kind, n, edges)


# -- selection functions -----------------------------------------------------

def select_random_single(population, focal, rng):
    """One agent drawn uniformly from everyone but ``focal``."""
    n = len(population)
    if n < 2:
        raise TooFewAgents("random selection needs at least 2 agents")
    j = uniform_index(rng, n - 1)
    return [j + 1 if j >= focal else j]


def select_random_distinct(population, focal, k, rng):
    """``k`` distinct agents drawn uniformly from everyone but ``focal``."""
    n = len(population)
    if n - 1 < k:
        raise TooFewAgents(f"need {k} agents besides the focal one")
    picks = rng.choice(n - 1, size=k, replace=False)
    return [int(j) + 1 if j >= focal else int(j) for j in picks]


def select_random_in_bound(population, focal, epsilon, rng):
    """One agent drawn uniformly from those strictly within ``epsilon`` of ``focal``.

    Returns ``[]`` when nobody qualifies; a uniform is consumed either way.
    """
    if len(population) < 2:
        raise TooFewAgents("random selection needs at least 2 agents")
    j = inbound_pick(population.attitudes, focal, epsilon, rng.random())
    return [j] if j >= 0 else []


def select_neighbors(topology, focal):
    """The focal agent's full neighbour list."""
    return topology.neighbors[focal].tolist()


def sample_activities(n, gamma, act_min, rng):
    """Draw activities from a density proportional to ``act**-gamma`` on ``[act_min, 1]``."""
    if not 0 < act_min < 1:
        raise InvalidParams("act_min must lie in (0, 1)", "act_min")
    u = rng.random(n)
    if abs(gamma - 1.0) < 1e-12:
        return act_min ** (1.0 - u)
    e = 1.0 - gamma
    lo = act_min ** e
    return (lo + u * (1.0 - lo)) ** (1.0 / e)


def homophily_weights(a, i, beta_h, delta=1e-3):
    """Unnormalised contact weights of agent ``i``; zero for ``i`` itself."""
    with np.errstate(divide="ignore"):  # the focal term is 0**-beta when delta == 0
        w = (np.abs(a - a[i]) + delta) ** (-beta_h)
    w[i] = 0.0
    return w


def select_activity_homophily(population, beta_h, contacts, rng, delta=1e-3):
    """Activity-driven contacts with homophilic partner choice.

    Each agent activates with probability equal to its activity; an active
    agent picks ``contacts`` distinct partners without replacement, weighted
    by ``(|a_i - a_j| + delta)^-beta_h``. Returns ``{focal: array of partners}``
    for the agents that activated.
    """
    active, partners = activity_homophily_arrays(population, beta_h, contacts, rng, delta)
    return {int(i): partners[r] for r, i in enumerate(active)}


def activity_homophily_arrays(population, beta_h, contacts, rng, delta=1e-3):
    """Array form of :func:`select_activity_homophily`: ``(active, partners[k])``."""
    a = population.attitudes
    n = len(a)
    k = min(int(contacts), n - 1)
    if k < 1:
        return np.empty(0, np.int64), np.empty((0, 0), np.int64)
    act = np.ascontiguousarray(population.params["activity"], dtype=np.float64)
    return homophily_contacts(a, act, float(beta_h), float(delta), k, rng)
