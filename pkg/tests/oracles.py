"""Independent slow/structured reference implementations used by the tests.

These deliberately avoid the library's groupwise windowed sweeps: the brute
oracles loop over intervals directly from the definitions, and the V-shape
oracle exploits monotone halves with searchsorted crossings, so agreement
with the library is a genuine two-route check.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar


def brute_interval_mean(values: np.ndarray, i: int, j: int) -> float:
    return float(sum(values[i:j]) / (j - i))


def brute_bmo(values: np.ndarray, intervals) -> float:
    """Mean oscillation max straight from the definition (python loop)."""
    best = 0.0
    for i, j in intervals:
        mu = np.mean(values[i:j])
        best = max(best, float(np.mean(np.abs(values[i:j] - mu))))
    return best


def brute_ainfty(values: np.ndarray, intervals) -> float:
    best = 0.0
    for i, j in intervals:
        w = values[i:j]
        best = max(best, float(np.mean(w) * math.exp(-np.mean(np.log(w)))))
    return best


def brute_ap(values: np.ndarray, p: float, intervals) -> float:
    best = 0.0
    for i, j in intervals:
        w = values[i:j]
        best = max(best, float(np.mean(w) * np.mean(w ** (1.0 / (1.0 - p))) ** (p - 1.0)))
    return best


def vshape_exhaustive_bmo(values: np.ndarray, min_length: int = 4) -> float:
    """Exhaustive-interval mean-oscillation max for V-shaped samples.

    Requires values nonincreasing up to their argmin and nondecreasing after
    (true for g(|x|) with monotone g on a symmetric staggered grid).  For a
    window [o, o+m) with mean mu, the samples above mu form a prefix of the
    descending run plus a suffix of the ascending run, located by binary
    search, which turns the O(n^3) exhaustive sweep into O(n^2 log n).
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    v = int(np.argmin(values))
    if not (np.all(np.diff(values[: v + 1]) <= 0.0) and np.all(np.diff(values[v:]) >= 0.0)):
        raise ValueError("samples are not V-shaped")
    P = np.concatenate(([0.0], np.cumsum(values)))
    desc_neg = -values[:v]          # ascending
    asc = values[v:]                # ascending
    best = 0.0
    for m in range(min_length, n + 1):
        o = np.arange(0, n - m + 1)
        mu = (P[o + m] - P[o]) / m
        # descending run part of each window: indices [o, desc_hi)
        desc_hi = np.maximum(o, np.minimum(o + m, v))
        c = np.searchsorted(desc_neg, -mu, side="left")  # first idx with values <= mu
        c = np.clip(c, o, desc_hi)
        cnt_above = c - o
        sum_above = P[c] - P[o]
        # ascending run part: indices [asc_lo, o+m): above-mu tail
        asc_lo = np.minimum(o + m, np.maximum(o, v))
        r = v + np.searchsorted(asc, mu, side="right")   # first idx with values > mu
        r = np.clip(r, asc_lo, o + m)
        cnt_above = cnt_above + (o + m - r)
        sum_above = sum_above + (P[o + m] - P[r])
        osc = 2.0 * (sum_above - mu * cnt_above) / m
        m_best = float(np.max(osc))
        if m_best > best:
            best = m_best
    return best


def asymmetric_interval_sup(per_interval, r_lo: float = 1.0, r_hi: float = 60.0) -> float:
    """Maximize a scale-invariant per-interval functional over (-r, 1) shapes."""
    res = minimize_scalar(lambda r: -per_interval(r, 1.0), bounds=(r_lo, r_hi),
                          method="bounded")
    sym = per_interval(1.0, 1.0)
    return float(max(-res.fun, sym))


def logabs_oscillation(A: float, B: float) -> float:
    """Mean of |log|x| - mean| over (-A, B) by quadrature (continuum value)."""
    m = (A * (math.log(A) - 1.0) + B * (math.log(B) - 1.0)) / (A + B)
    val, _ = quad(lambda x: abs(math.log(abs(x)) - m), -A, B, points=[0.0], limit=200)
    return val / (A + B)


def power_ainfty(A: float, B: float, a: float) -> float:
    """A-infinity functional of |x|^a on (-A, B), closed-form means."""
    mw = (A ** (1 + a) + B ** (1 + a)) / ((1 + a) * (A + B))
    ml = a * (A * (math.log(A) - 1.0) + B * (math.log(B) - 1.0)) / (A + B)
    return mw * math.exp(-ml)


def power_ap(A: float, B: float, a: float, p: float) -> float:
    """A_p functional of |x|^a on (-A, B), closed-form means."""
    q = a / (1.0 - p)
    mw = (A ** (1 + a) + B ** (1 + a)) / ((1 + a) * (A + B))
    mq = (A ** (1 + q) + B ** (1 + q)) / ((1 + q) * (A + B))
    return mw * mq ** (p - 1.0)


# continuum references computed from the asymmetric-interval analysis
LOGABS_BMO_SUP = 0.9305856254502322        # max_r of logabs_oscillation(r, 1)
LOGABS_BMO_CENTERED = 2.0 / math.e         # value on origin-centered intervals
