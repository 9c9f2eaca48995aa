"""Estimating influence parameters from trial data.

Two kinds of trial are supported. In an averaged trial a subject sees the
mean of several estimates and revises once; the revision gives an influence
strength. In a two-source trial a subject hears two fixed sources and the
final position gives the weight placed on one of them, which can then be
fitted against distance with the evidence-weighting curve.
"""

import csv
import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import (
    ConfigError,
    DegenerateDenominator,
    EmptyInput,
    IdenticalSources,
    InsufficientData,
    ZeroVariance,
)
from .models import hew_weight

DEFAULT_TOL_DIV = 1e-9
DEFAULT_RESPONDER_TOL = 0.05
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TrialRecord:
    """One subject's trial: either ``m_avg`` or the pair ``(m_m, m_n)`` is set."""
    subject: str
    a_initial: float
    a_updated: float
    m_avg: Optional[float] = None
    m_m: Optional[float] = None
    m_n: Optional[float] = None

    def __post_init__(self):
        averaged = self.m_avg is not None
        paired = self.m_m is not None and self.m_n is not None
        if averaged == paired or (not paired and (self.m_m is not None or self.m_n is not None)):
            raise ConfigError(f"subject {self.subject}: give either m_avg or both m_m and m_n")

    @property
    def is_averaged(self):
        return self.m_avg is not None


class ResponderType(str, enum.Enum):
    KEEPER = "Keeper"
    ADOPTER = "Adopter"
    COMPROMISER = "Compromiser"
    OVERREACTOR = "Overreactor"
    REPULSED = "Repulsed"


@dataclass(frozen=True)
class HewFit:
    alpha: float
    beta: float
    rss: float

    def __post_init__(self):
        if not (self.alpha >= 0 and self.beta > 0):
            raise ConfigError("HewFit needs alpha >= 0 and beta > 0")

    def predict(self, distances):
        return np.array([hew_weight(float(d), self.alpha, self.beta)
                         for d in np.atleast_1d(distances)])

    def to_dict(self):
        return asdict(self)


# -- point estimators --------------------------------------------------------

def estimate_alpha(a_initial, m_avg, a_updated, tol_div=DEFAULT_TOL_DIV):
    """Influence strength implied by one revision toward an averaged message.

    Unbounded: values above 1 overshoot the message, negative values move away.
    """
    d = m_avg - a_initial
    if abs(d) <= tol_div:
        raise DegenerateDenominator(f"message equals initial attitude (|diff|={abs(d):.3g})")
    return (a_updated - a_initial) / d


def estimate_alpha_record(record, tol_div=DEFAULT_TOL_DIV):
    if not record.is_averaged:
        raise ConfigError(f"subject {record.subject}: record has no averaged message")
    return estimate_alpha(record.a_initial, record.m_avg, record.a_updated, tol_div)


def classify_responder(alpha_hat, tol=DEFAULT_RESPONDER_TOL):
    if not 0 < tol < 0.5:
        raise ConfigError("tol must lie in (0, 0.5)", "tol")
    if abs(alpha_hat) <= tol:
        return ResponderType.KEEPER
    if abs(alpha_hat - 1.0) <= tol:
        return ResponderType.ADOPTER
    if tol < alpha_hat < 1.0 - tol:
        return ResponderType.COMPROMISER
    if alpha_hat > 1.0 + tol:
        return ResponderType.OVERREACTOR
    return ResponderType.REPULSED


def estimate_hew_weight(a_final, a_m, a_n):
    """Share of the final position attributable to source ``m``."""
    if a_m == a_n:
        raise IdenticalSources("the two sources hold the same attitude")
    return (a_final - a_n) / (a_m - a_n)


def raw_weight_from_share(p_m, w_ref=1.0):
    """Undo pairwise normalisation: ``w_m = w_ref * p / (1 - p)``.

    With the reference source inside its dead band (``w_ref = 1``) this turns
    a measured share into the single-source weight the curve describes.
    """
    if not 0.0 <= p_m < 1.0:
        raise ConfigError(f"share must lie in [0, 1), got {p_m}")
    return w_ref * p_m / (1.0 - p_m)


def correlation(xs, ys):
    """Sample Pearson correlation."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ConfigError("xs and ys must be 1-D and of equal length")
    if x.size < 3:
        raise InsufficientData("need at least 3 pairs")
    x = x - x.mean()
    y = y - y.mean()
    sx, sy = math.sqrt(x @ x), math.sqrt(y @ y)
    if sx == 0.0 or sy == 0.0:
        raise ZeroVariance("a variable has zero variance")
    return float(np.clip((x @ y) / (sx * sy), -1.0, 1.0))


# -- curve fitting ------------------------------------------------------------

def _hew_curve(d, alpha, beta):
    x = np.maximum(d - alpha, 0.0)
    return 1.0 - x / (x + beta)


def _rss(d, w, alpha, beta):
    r = w - _hew_curve(d, alpha, beta)
    return float(r @ r)


def golden_section(f, lo, hi, tol=1e-10, max_iter=200):
    """Minimiser of a unimodal ``f`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    e = a + GOLDEN * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fe:
            b, e, fe = e, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + GOLDEN * (b - a)
            fe = f(e)
    return (c, fc) if fc <= fe else (e, fe)


def fit_hew_curve(points, grid=81, rounds=6):
    """Least-squares fit of the evidence-weighting curve to ``(distance, weight)`` pairs.

    A coarse grid over ``alpha in [0, d_max]`` and ``beta in (0, 2*d_max]`` picks
    a start; coordinate-wise golden-section searches, each within one grid
    cell of the current point, then refine it. The curve has a kink at the
    dead-band edge, so no gradients are used.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
        raise InsufficientData("need at least 4 (distance, weight) points")
    d, w = np.abs(pts[:, 0]), pts[:, 1]
    if np.unique(d).size < 2:
        raise InsufficientData("need at least 2 distinct distances")
    d_max = float(d.max())
    alphas = np.linspace(0.0, d_max, grid)
    betas = np.linspace(2.0 * d_max / grid, 2.0 * d_max, grid)
    # rss over the grid, vectorised along beta
    best = (math.inf, 0.0, betas[0])
    for al in alphas:
        x = np.maximum(d - al, 0.0)[None, :]
        pred = 1.0 - x / (x + betas[:, None])
        rss = ((w[None, :] - pred) ** 2).sum(axis=1)
        k = int(np.argmin(rss))
        if rss[k] < best[0]:
            best = (float(rss[k]), float(al), float(betas[k]))
    rss, al, be = best
    da, db = alphas[1] - alphas[0], betas[1] - betas[0]
    for _ in range(rounds):
        al, _ = golden_section(lambda x: _rss(d, w, x, be), max(0.0, al - da), min(d_max, al + da))
        lo = max(be - db, 1e-12 * max(1.0, d_max))
        be, rss = golden_section(lambda x: _rss(d, w, al, x), lo, be + db)
        da, db = da / 2.0, db / 2.0
    return HewFit(float(al), float(be), float(rss))


# -- import ------------------------------------------------------------------

AVERAGED_COLUMNS = ("subject", "a_initial", "m_avg", "a_updated")
PAIRED_COLUMNS = ("subject", "a_initial", "m_m", "m_n", "a_final")


def _lognorm(x, truth):
    if x <= 0:
        raise ConfigError(f"log-normalisation needs positive values, got {x}")
    return math.log(x / truth)


def load_trials(path, truth=None):
    """Read trial records from a CSV with either column layout.

    When ``truth`` is given, every value is mapped to ``log(x / truth)``.
    """
    if truth is not None and not truth > 0:
        raise ConfigError("truth must be > 0 for log-normalisation", "truth")
    f = (lambda x: x) if truth is None else (lambda x: _lognorm(x, truth))
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols = tuple(reader.fieldnames or ())
        if cols == AVERAGED_COLUMNS:
            for row in reader:
                records.append(TrialRecord(row["subject"], f(float(row["a_initial"])),
                                           f(float(row["a_updated"])),
                                           m_avg=f(float(row["m_avg"]))))
        elif cols == PAIRED_COLUMNS:
            for row in reader:
                records.append(TrialRecord(row["subject"], f(float(row["a_initial"])),
                                           f(float(row["a_final"])),
                                           m_m=f(float(row["m_m"])), m_n=f(float(row["m_n"]))))
        else:
            raise ConfigError(f"unrecognised columns {list(cols)}; expected "
                              f"{list(AVERAGED_COLUMNS)} or {list(PAIRED_COLUMNS)}", "input")
    if not records:
        raise EmptyInput(f"no records in {path}")
    return records


def fit_alpha_records(records, tol=DEFAULT_RESPONDER_TOL, tol_div=DEFAULT_TOL_DIV):
    """Per-subject influence strength and responder type."""
    out = []
    for r in records:
        a = estimate_alpha_record(r, tol_div)
        out.append({"subject": r.subject, "alpha_hat": a,
                    "type": classify_responder(a, tol).value,
                    "distance": abs(r.m_avg - r.a_initial)})
    return out


def hew_points(records, raw=False):
    """``(|a_m - a_initial|, p_m)`` pairs from two-source records.

    With ``raw`` the shares go through :func:`raw_weight_from_share`, which
    assumes the reference source ``n`` sits inside the dead band.
    """
    pts = []
    for r in records:
        if r.is_averaged:
            raise ConfigError(f"subject {r.subject}: record has no source pair")
        p = estimate_hew_weight(r.a_updated, r.m_m, r.m_n)
        pts.append((abs(r.m_m - r.a_initial), raw_weight_from_share(p) if raw else p))
    return pts
