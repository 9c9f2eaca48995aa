"""Seeded random streams.

All randomness flows through :class:`numpy.random.Generator` backed by PCG64,
one generator per replica. Replica seeds are derived arithmetically so any
row of a sweep can be re-run on its own.
"""

import numpy as np

SEED_MASK = (1 << 64) - 1


def make_rng(seed):
    """Return a fresh PCG64 generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


def replica_seed(base_seed, cell, replicas, replica):
    """Seed of replica ``replica`` in sweep cell ``cell``."""
    return (int(base_seed) + cell * replicas + replica) & SEED_MASK


def uniform_index(rng, n):
    """Uniform integer in ``[0, n)``.

    Cheaper than ``rng.integers`` for scalar draws in the inner loops; the
    bias from flooring a 53-bit double is far below anything measurable.
    """
    # rng.random() < 1 - 2**-53, so the product floors below n for any n < 2**52
    return int(rng.random() * n)


def stream_rng(seed, stream):
    """Generator for an auxiliary stream (initial attitudes, graphs) of a seed.

    Kept apart from :func:`make_rng` so that changing how the initial state is
    drawn never shifts the simulation's own draws.
    """
    ss = np.random.SeedSequence([int(seed) & SEED_MASK, int(stream)])
    return np.random.Generator(np.random.PCG64(ss))
