"""Macro-level labels for a final attitude distribution, plus crowd-accuracy metrics."""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, EmptyInput, LengthMismatch

DEFAULT_BINS = 41
DEFAULT_EXT_FRACTION = 0.8


class Label(str, enum.Enum):
    CONSENSUS = "Consensus"
    EXTREMIZATION = "Extremization"
    FRAGMENTATION = "Fragmentation"
    BIPOLARIZATION = "Bipolarization"
    OTHER = "Other"


@dataclass
class DistributionSummary:
    edges: np.ndarray
    counts: np.ndarray
    modes: list
    median: float
    variance: float
    mode_counts: list = field(default_factory=list)

    @property
    def centers(self):
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def n(self):
        return int(self.counts.sum())

    def to_dict(self):
        return {"modes": [float(m) for m in self.modes],
                "median": float(self.median), "variance": float(self.variance)}


def _find_modes(counts, min_count, min_sep):
    """Bins that are local maxima with at least ``min_count`` agents.

    Plateaus count once (their left-most bin). Peaks closer than ``min_sep``
    bins merge into the taller one.
    """
    padded = np.concatenate(([-1], counts, [-1]))
    peaks = []
    b = 0
    B = counts.size
    while b < B:
        e = b
        while e + 1 < B and counts[e + 1] == counts[b]:
            e += 1
        if padded[b] < counts[b] and padded[e + 2] < counts[b] and counts[b] >= min_count:
            peaks.append(b)
        b = e + 1
    # greedy: keep the tallest peaks first, drop any within min_sep of a kept one
    kept = []
    for p in sorted(peaks, key=lambda p: (-counts[p], p)):
        if all(abs(p - q) >= min_sep for q in kept):
            kept.append(p)
    return sorted(kept)


def summarize(attitudes, bound=None, bins=DEFAULT_BINS, min_fraction=0.05, min_sep=2):
    """Histogram, modes, median and variance of ``attitudes``.

    The histogram spans ``[-bound, bound]``; for an unbounded space
    (``bound=None``) it spans the symmetric range ``[-R, R]`` with
    ``R = max|a|`` so that zero stays a bin center.
    """
    a = np.asarray(attitudes, dtype=np.float64).ravel()
    if a.size == 0:
        raise EmptyInput("no attitudes to summarize")
    if bins < 3:
        raise ConfigError("bins must be >= 3", "bins")
    R = float(bound) if bound is not None else float(np.max(np.abs(a)))
    if R <= 0:
        R = 1.0  # every agent at exactly 0
    counts, edges = np.histogram(np.clip(a, -R, R), bins=bins, range=(-R, R))
    min_count = max(2, min_fraction * a.size)
    peaks = _find_modes(counts, min_count, min_sep)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return DistributionSummary(
        edges=edges,
        counts=counts,
        modes=[float(centers[p]) for p in peaks],
        median=float(np.median(a)),
        variance=float(np.var(a)),
        mode_counts=[int(counts[p]) for p in peaks],
    )


def classify(summary, M, eps_ext=None):
    """Label a summary. ``eps_ext`` defaults to ``0.8 * M``."""
    if eps_ext is None:
        eps_ext = DEFAULT_EXT_FRACTION * M
    if not 0 < eps_ext < M:
        raise ConfigError(f"eps_ext must lie in (0, {M})", "eps_ext")
    return _label(summary.modes, eps_ext)


def _label(modes, eps_ext):
    if not modes:
        return Label.OTHER
    if len(modes) == 1:
        return Label.EXTREMIZATION if abs(modes[0]) >= eps_ext else Label.CONSENSUS
    if (len(modes) == 2 and modes[0] * modes[1] < 0
            and min(abs(modes[0]), abs(modes[1])) >= eps_ext):
        return Label.BIPOLARIZATION
    return Label.FRAGMENTATION


def classify_attitudes(attitudes, bound=None, eps_ext=None, bins=DEFAULT_BINS,
                       ext_fraction=DEFAULT_EXT_FRACTION, min_fraction=0.05, min_sep=2):
    """Summarize and label in one go; returns ``(label, summary)``.

    ``eps_ext`` is an absolute threshold; when unset it is ``ext_fraction``
    times the bound, or times the histogram range ``max|a|`` for an unbounded
    space. An absolute threshold may exceed that range in an unbounded
    space, in which case no mode counts as extreme.
    """
    s = summarize(attitudes, bound, bins, min_fraction, min_sep)
    M = float(bound) if bound is not None else float(-s.edges[0])
    if eps_ext is None:
        eps_ext = ext_fraction * M
    if bound is not None:
        return classify(s, M, eps_ext), s
    if not eps_ext > 0:
        raise ConfigError("eps_ext must be > 0", "eps_ext")
    return _label(s.modes, eps_ext), s


def woc_metrics(before, after, truth):
    """Median error and variance before and after an update round."""
    before = np.asarray(before, dtype=np.float64)
    after = np.asarray(after, dtype=np.float64)
    if before.shape != after.shape:
        raise LengthMismatch(f"{before.size} vs {after.size} attitudes")
    if before.size == 0:
        raise EmptyInput("no attitudes")
    return {
        "median_error_before": float(abs(np.median(before) - truth)),
        "median_error_after": float(abs(np.median(after) - truth)),
        "variance_before": float(np.var(before)),
        "variance_after": float(np.var(after)),
    }
