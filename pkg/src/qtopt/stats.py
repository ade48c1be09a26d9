"""Evaluation criteria and nonparametric statistics for benchmark runs.

Closeness and confidence factor score a single algorithm; population
diversity and the exploration/exploitation split describe search dynamics;
the Wilcoxon signed-rank test and tie-averaged rank tables compare
algorithms across benchmark cases.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)


def closeness(fs_out: int, fs_us: int) -> int:
    """Absolute distance in bytes between the output and requested size."""
    if fs_out <= 0 or fs_us <= 0:
        raise ValueError("file sizes must be positive")
    return abs(int(fs_out) - int(fs_us))


def confidence_factor(closenesses, cs: int = 10_000) -> float:
    """Fraction of runs whose closeness is strictly below the threshold."""
    values = list(closenesses)
    if not values:
        raise ValueError("need at least one run")
    if cs <= 0:
        raise ValueError("confidence coefficient must be positive")
    return sum(1 for c in values if c < cs) / len(values)


def population_diversity(positions: np.ndarray) -> float:
    """Mean Euclidean distance of population members from the mean vector."""
    x = np.asarray(positions, dtype=np.float64)
    if x.ndim != 2 or len(x) < 1:
        raise ValueError("expected a (NP, D) position matrix")
    centred = x - x.mean(axis=0)
    return float(np.mean(np.sqrt(np.sum(centred**2, axis=1))))


def median_dispersion(positions: np.ndarray) -> float:
    """Mean absolute deviation from the per-dimension median, averaged over
    dimensions; the per-iteration quantity behind the XPL/XPT split."""
    x = np.asarray(positions, dtype=np.float64)
    if x.ndim != 2 or len(x) < 1:
        raise ValueError("expected a (NP, D) position matrix")
    med = np.median(x, axis=0)
    return float(np.mean(np.abs(med - x)))


def exploration_exploitation(populations) -> tuple[np.ndarray, np.ndarray]:
    """Per-iteration exploration and exploitation percentages.

    Uses the run-wide maximum of the median dispersion as the reference:
    XPL = 100 * Div/Div_max and XPT = 100 * |Div - Div_max|/Div_max, so the
    two always sum to 100.
    """
    divs = np.array([median_dispersion(p) for p in populations])
    if len(divs) == 0:
        raise ValueError("need at least one iteration")
    div_max = divs.max()
    if div_max == 0.0:
        log.warning("fully degenerate run: dispersion is zero at every iteration")
        return np.zeros_like(divs), np.full_like(divs, 100.0)
    xpl = 100.0 * divs / div_max
    xpt = 100.0 * np.abs(divs - div_max) / div_max
    return xpl, xpt


def average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based competition ranks with ties sharing the averaged rank."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v))
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    verdict: str  # '+', '-' or '='


def _exact_two_sided_p(doubled_ranks: np.ndarray, w_plus_doubled: int) -> float:
    # Subset-sum distribution of 2*W+ under the null; counts fit exactly in
    # float64 for n <= 25 (at most 2^25 outcomes).
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for d in doubled_ranks:
        d = int(d)
        counts[d:] += counts[:-d] if d > 0 else counts
    denom = counts.sum()
    cdf = counts[: w_plus_doubled + 1].sum() / denom
    sf = counts[w_plus_doubled:].sum() / denom
    return min(1.0, 2.0 * min(cdf, sf))


def wilcoxon_signed_rank(a, b, alpha: float = 0.05) -> WilcoxonResult:
    """Two-sided paired signed-rank test with a minimisation verdict.

    Zero differences are dropped and tied magnitudes share averaged ranks.
    The exact null distribution is used for up to 25 nonzero pairs, the
    normal approximation with continuity correction above that.  The verdict
    is '+' when `a` is significantly smaller (better) than `b`, '-' for the
    reverse, '=' otherwise.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("samples must be paired 1-d arrays of equal length")
    diff = a - b
    diff = diff[diff != 0.0]
    n = len(diff)
    if n == 0:
        return WilcoxonResult(statistic=0.0, p_value=1.0, verdict="=")
    if n < 5:
        raise ValueError("need at least 5 nonzero differences")

    ranks = average_ranks(np.abs(diff))
    w_plus = float(ranks[diff > 0].sum())
    w_minus = float(ranks[diff < 0].sum())
    statistic = min(w_plus, w_minus)

    if n <= 25:
        doubled = np.rint(2 * ranks).astype(np.int64)
        p = _exact_two_sided_p(doubled, int(round(2 * w_plus)))
    else:
        mean = n * (n + 1) / 4
        var = n * (n + 1) * (2 * n + 1) / 24
        _, tie_counts = np.unique(ranks, return_counts=True)
        var -= (tie_counts**3 - tie_counts).sum() / 48
        if var == 0:
            return WilcoxonResult(statistic=statistic, p_value=1.0, verdict="=")
        d = w_plus - mean
        d -= 0.5 * np.sign(d)  # continuity correction
        z = d / math.sqrt(var)
        p = math.erfc(abs(z) / math.sqrt(2))

    if p < alpha:
        mean_a, mean_b = float(np.mean(a)), float(np.mean(b))
        if mean_a < mean_b:
            verdict = "+"
        elif mean_a > mean_b:
            verdict = "-"
        else:
            verdict = "="
    else:
        verdict = "="
    return WilcoxonResult(statistic=statistic, p_value=float(p), verdict=verdict)


@dataclass(frozen=True)
class RankTable:
    """Tie-averaged ranks per case plus the derived orderings."""

    per_case: np.ndarray  # (cases, algorithms)
    average: np.ndarray  # (algorithms,)
    overall: np.ndarray  # (algorithms,)


def rank_table(values: np.ndarray, direction: str = "min") -> RankTable:
    """Rank algorithms within each benchmark case and overall.

    ``values`` is (cases, algorithms); ``direction`` says whether smaller
    ("min") or larger ("max") values are better.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 2 or v.size == 0:
        raise ValueError("expected a non-empty (cases, algorithms) matrix")
    if np.any(np.isnan(v)):
        raise ValueError("rank table input has missing cells")
    if direction not in ("min", "max"):
        raise ValueError("direction must be 'min' or 'max'")
    signed = v if direction == "min" else -v
    per_case = np.vstack([average_ranks(row) for row in signed])
    average = per_case.mean(axis=0)
    overall = average_ranks(average)
    return RankTable(per_case=per_case, average=average, overall=overall)
