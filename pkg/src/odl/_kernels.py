"""Compiled inner loops."""

import numpy as np
from numba import njit


@njit(cache=True)
def inbound_pick(a, focal, epsilon, u):
    """Index of the ``floor(u * count)``-th agent strictly within ``epsilon`` of ``focal``.

    Returns -1 when no other agent qualifies.
    """
    ai = a[focal]
    count = 0
    for j in range(a.size):
        if j != focal and abs(a[j] - ai) < epsilon:
            count += 1
    if count == 0:
        return -1
    target = int(u * count)
    for j in range(a.size):
        if j != focal and abs(a[j] - ai) < epsilon:
            if target == 0:
                return j
            target -= 1
    return -1


@njit(cache=True)
def deffuant_run(a, epsilon, alpha, bound, steps, rng):
    """``steps`` random-sequential bounded-confidence steps on the complete graph.

    Consumes the generator in the same order as the interpreted path: one
    uniform for the focal agent, one for the partner. ``bound`` is ``inf``
    for an unbounded space.
    """
    n = a.size
    for _ in range(steps):
        i = int(rng.random() * n)
        j = inbound_pick(a, i, epsilon[i], rng.random())
        if j >= 0:
            x = a[i] + alpha[i] * (a[j] - a[i])
            if x > bound:
                x = bound
            elif x < -bound:
                x = -bound
            a[i] = x


@njit(cache=True)
def homophily_contacts(a, activity, beta_h, delta, k, rng):
    """Activity-driven contacts with homophilic partner choice.

    Draws one uniform per agent for activation, then for each active agent in
    index order ``k`` successive weighted draws without replacement. Returns
    ``(active, partners)`` with ``partners`` of shape ``(len(active), k)``.
    """
    n = a.size
    active = np.empty(n, np.int64)
    n_active = 0
    for i in range(n):
        if rng.random() < activity[i]:
            active[n_active] = i
            n_active += 1
    partners = np.empty((n_active, k), np.int64)
    w = np.empty(n)
    for r in range(n_active):
        i = active[r]
        total = 0.0
        for j in range(n):
            if j == i:
                w[j] = 0.0
            else:
                w[j] = (abs(a[j] - a[i]) + delta) ** (-beta_h)
                total += w[j]
        for c in range(k):
            u = rng.random() * total
            acc = 0.0
            pick = -1
            for j in range(n):
                if w[j] > 0.0:
                    acc += w[j]
                    pick = j
                    if u < acc:
                        break
            partners[r, c] = pick
            total -= w[pick]
            w[pick] = 0.0
    return active[:n_active], partners
