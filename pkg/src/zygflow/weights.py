"""Interval-sweep estimators for oscillation and weight functionals.

All estimators share one pattern: evaluate a per-interval functional over a
finite IntervalFamily and report the maximum together with the interval that
attains it.  Per-interval quantities that are averages of pointwise transforms
(w, w^q, log w) cost O(1) via prefix sums; the mean oscillation needs one pass
over each interval and is evaluated groupwise with windowed numpy sweeps.

The sup over all intervals of the line is approximated from below by the sup
over the family on the truncated domain; every estimate therefore records the
grid and family it was computed on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .grids import IntervalFamily, SampledFunction, UniformGrid, interval_mean
from .report import BoundReport, ConstantsLedger

__all__ = [
    "WeightEstimate",
    "NonPositiveWeightError",
    "bmo_norm",
    "oscillation_mean",
    "star_norm",
    "ap_constant",
    "ainfty_constant",
    "jn_tail",
    "JnTail",
    "reverse_holder_check",
    "exp_a2_check",
    "log_weight_bmo_check",
    "exp_small_bmo_ainfty",
    "orlicz_exp_norm",
    "gaussian_divergence",
]

_CHUNK_ELEMS = 1 << 22  # cap on elements touched per windowed chunk


@dataclass(frozen=True)
class WeightEstimate:
    """Maximum of a per-interval functional with its maximizing interval."""

    value: float
    i: int
    j: int
    grid: dict
    family: dict
    functional: str

    def argmax_descriptor(self) -> dict:
        L = self.grid["L"]
        h = 2.0 * L / self.grid["n"]
        return {
            "i": self.i,
            "j": self.j,
            "x_left": -L + self.i * h,
            "x_right": -L + self.j * h,
        }

    def to_json(self) -> dict:
        return {
            "functional": self.functional,
            "value": self.value,
            "argmax": self.argmax_descriptor(),
            "grid": self.grid,
            "family": self.family,
        }


def _check_family(f: SampledFunction, family: IntervalFamily) -> None:
    if family.n != f.grid.count:
        raise ValueError(
            f"family built for n={family.n} but function has n={f.grid.count}"
        )
    if len(family) == 0:
        raise ValueError("empty interval family")


def _interval_max(
    family: IntervalFamily,
    per_group: Callable[[int, np.ndarray], np.ndarray],
) -> tuple[float, tuple[int, int]]:
    """Maximize a per-interval functional; ties resolve to smallest (i, j)."""
    best_v = -math.inf
    best_ij = (0, 0)
    first = True
    for m, offsets in family.iter_groups():
        vals = per_group(m, offsets)
        k = int(np.argmax(vals))
        v = float(vals[k])
        ij = (int(offsets[k]), int(offsets[k]) + m)
        if first or v > best_v or (v == best_v and ij < best_ij):
            best_v, best_ij = v, ij
            first = False
    return best_v, best_ij


def _windowed_oscillation(values: np.ndarray, prefix: np.ndarray, m: int, offsets: np.ndarray) -> np.ndarray:
    """Mean |f - f_I| for every interval of length m at the given offsets."""
    means = (prefix[offsets + m] - prefix[offsets]) / m
    out = np.empty(len(offsets))
    windows = sliding_window_view(values, m)
    step = max(1, _CHUNK_ELEMS // m)
    for lo in range(0, len(offsets), step):
        hi = min(lo + step, len(offsets))
        w = windows[offsets[lo:hi]]
        out[lo:hi] = np.abs(w - means[lo:hi, None]).sum(axis=1) / m
    return out


def oscillation_mean(f: SampledFunction, i: int, j: int) -> float:
    """Direct mean of |f - f_I| over [i, j); re-evaluation path for estimates."""
    mu = interval_mean(f, i, j)
    return float(np.abs(f.values[i:j] - mu).mean())


def bmo_norm(f: SampledFunction, family: IntervalFamily) -> WeightEstimate:
    """Largest mean oscillation over the family."""
    _check_family(f, family)
    value, (i, j) = _interval_max(
        family, lambda m, o: _windowed_oscillation(f.values, f.prefix, m, o)
    )
    return WeightEstimate(
        value=value, i=i, j=j,
        grid=f.grid.descriptor(), family=family.descriptor(),
        functional="bmo",
    )


def star_norm(f: SampledFunction, family: IntervalFamily) -> float:
    """Mean-oscillation sup plus the integral of |f| over (-1, 1).

    The added integral pins down the constant that oscillation alone cannot
    see.  Requires the grid to cover [-1, 1].
    """
    if f.grid.half_width < 1.0:
        raise ValueError(f"grid half-width {f.grid.half_width} < 1; cannot integrate over (-1, 1)")
    i, j = f.grid.span_indices(-1.0, 1.0)
    integral = float(np.abs(f.values[i:j]).sum() * f.grid.spacing)
    return bmo_norm(f, family).value + integral


class NonPositiveWeightError(ValueError):
    """Weight functional evaluated on samples that are not strictly positive."""


def _require_positive(w: SampledFunction, what: str) -> None:
    if np.any(w.values <= 0.0):
        bad = int(np.flatnonzero(w.values <= 0.0)[0])
        raise NonPositiveWeightError(f"{what} requires strictly positive samples; "
                                     f"w[{bad}] = {w.values[bad]:g}")


def ap_constant(w: SampledFunction, p: float, family: IntervalFamily) -> WeightEstimate:
    """Muckenhoupt p-characteristic: sup_I (mean_I w) * (mean_I w^{1/(1-p)})^{p-1}."""
    _require_positive(w, "ap_constant")
    if not p > 1.0:
        raise ValueError(f"ap_constant requires p > 1, got {p}")
    _check_family(w, family)
    P = w.prefix
    Q = np.concatenate(([0.0], np.cumsum(w.values ** (1.0 / (1.0 - p)))))

    def per_group(m: int, o: np.ndarray) -> np.ndarray:
        mw = (P[o + m] - P[o]) / m
        mq = (Q[o + m] - Q[o]) / m
        return mw * mq ** (p - 1.0)

    value, (i, j) = _interval_max(family, per_group)
    return WeightEstimate(value=value, i=i, j=j,
                          grid=w.grid.descriptor(), family=family.descriptor(),
                          functional=f"ap(p={p:g})")


def ainfty_constant(w: SampledFunction, family: IntervalFamily) -> WeightEstimate:
    """Arithmetic/geometric mean ratio sup: sup_I (mean_I w) * exp(-mean_I log w)."""
    _require_positive(w, "ainfty_constant")
    _check_family(w, family)
    P = w.prefix
    G = np.concatenate(([0.0], np.cumsum(np.log(w.values))))

    def per_group(m: int, o: np.ndarray) -> np.ndarray:
        mw = (P[o + m] - P[o]) / m
        ml = (G[o + m] - G[o]) / m
        return mw * np.exp(-ml)

    value, (i, j) = _interval_max(family, per_group)
    return WeightEstimate(value=value, i=i, j=j,
                          grid=w.grid.descriptor(), family=family.descriptor(),
                          functional="ainfty")


@dataclass(frozen=True)
class JnTail:
    """Superlevel-set measures of |f - f_I| with a fitted exponential rate."""

    points: list[tuple[float, float]]
    rate: float
    interval: tuple[int, int]
    f_mean: float

    def to_json(self) -> dict:
        return {
            "points": [{"lambda": l, "measure": m} for l, m in self.points],
            "rate": self.rate,
            "interval": list(self.interval),
            "f_mean": self.f_mean,
        }


def jn_tail(f: SampledFunction, i: int, j: int, lambdas: Sequence[float]) -> JnTail:
    """Measure of {x in I : |f - f_I| > lam} for each lam, by node counting.

    Measures are h * (strict-exceedance count); choose lambdas that do not tie
    sample values exactly.  The decay rate is fitted by least squares of
    log(measure) against lam over the nonzero part of the tail.
    """
    lambdas = list(lambdas)
    if not lambdas:
        raise ValueError("empty lambda list")
    arr = np.asarray(lambdas, dtype=float)
    if np.any(arr <= 0.0) or np.any(np.diff(arr) <= 0.0):
        raise ValueError("lambda values must be positive and increasing")
    mu = interval_mean(f, i, j)
    dev = np.abs(f.values[i:j] - mu)
    h = f.grid.spacing
    measures = [float(h * np.count_nonzero(dev > lam)) for lam in arr]
    nz = [(l, m) for l, m in zip(arr, measures) if m > 0.0]
    if len(nz) >= 2:
        ls = np.array([p[0] for p in nz])
        lm = np.log([p[1] for p in nz])
        slope = np.polyfit(ls, lm, 1)[0]
        rate = float(-slope)
    else:
        rate = math.nan
    return JnTail(points=list(zip(arr.tolist(), measures)), rate=rate,
                  interval=(i, j), f_mean=mu)


def reverse_holder_check(
    w: SampledFunction,
    family: IntervalFamily,
    ledger: ConstantsLedger,
    quantiles: Sequence[float] = (0.5, 0.75, 0.9),
) -> BoundReport:
    """Self-improvement check for positive weights.

    With r_w = 1 + 1/(tau*[w]) and eps_w = 1/(1 + tau*[w]) it verifies
      (a)  (mean_I w^{r_w})^{1/r_w} <= 2 mean_I w            on every interval,
      (b)  w(E)/w(I) <= 2 (|E|/|I|)^{eps_w}                   for E a family
           subinterval of I and for E a superlevel set {w > q-quantile of w|I}
           (nearest-rank quantiles).
    Passes when both maxima of LHS/RHS stay <= 1.
    """
    _require_positive(w, "reverse_holder_check")
    _check_family(w, family)
    ainf = ainfty_constant(w, family).value
    tau = ledger.tau
    r_w = 1.0 + 1.0 / (tau * ainf)
    eps_w = 1.0 / (1.0 + tau * ainf)

    P = w.prefix
    R = np.concatenate(([0.0], np.cumsum(w.values ** r_w)))

    def per_group_a(m: int, o: np.ndarray) -> np.ndarray:
        lhs = ((R[o + m] - R[o]) / m) ** (1.0 / r_w)
        rhs = 2.0 * (P[o + m] - P[o]) / m
        return lhs / rhs

    max_a, ij_a = _interval_max(family, per_group_a)

    lengths = sorted(family.groups)
    max_b = -math.inf
    binding_b: dict = {}

    for M in lengths:
        offs = family.groups[M]
        wI = P[offs + M] - P[offs]
        # subinterval part: best w(E) over family-length-m windows inside I
        for m in lengths:
            if m >= M:
                continue
            S = P[m:] - P[:-m]  # window sums of w, all offsets
            span = M - m + 1
            sub = sliding_window_view(S, span)
            best_sub = np.empty(len(offs))
            step = max(1, _CHUNK_ELEMS // span)
            for lo in range(0, len(offs), step):
                hi = min(lo + step, len(offs))
                best_sub[lo:hi] = sub[offs[lo:hi]].max(axis=1)
            ratio = (best_sub / wI) / (2.0 * (m / M) ** eps_w)
            k = int(np.argmax(ratio))
            if ratio[k] > max_b:
                max_b = float(ratio[k])
                binding_b = {"kind": "subinterval", "I": [int(offs[k]), int(offs[k]) + M],
                             "E_length": m}
        # superlevel part: E = {w > nearest-rank q-quantile of w on I}
        windows = sliding_window_view(w.values, M)
        step = max(1, _CHUNK_ELEMS // M)
        for lo in range(0, len(offs), step):
            hi = min(lo + step, len(offs))
            W = windows[offs[lo:hi]]
            tot = wI[lo:hi]
            for q in quantiles:
                r = max(0, min(M - 1, math.ceil(q * M) - 1))
                thresh = np.partition(W, r, axis=1)[:, r]
                mask = W > thresh[:, None]
                cnt = mask.sum(axis=1)
                s = np.where(mask, W, 0.0).sum(axis=1)
                ok = cnt > 0
                if not np.any(ok):
                    continue
                ratio = np.full(len(tot), -math.inf)
                ratio[ok] = (s[ok] / tot[ok]) / (2.0 * (cnt[ok] / M) ** eps_w)
                k = int(np.argmax(ratio))
                if ratio[k] > max_b:
                    max_b = float(ratio[k])
                    binding_b = {"kind": "superlevel", "q": q,
                                 "I": [int(offs[lo + k]), int(offs[lo + k]) + M]}

    value = max(max_a, max_b)
    h = w.grid.spacing
    L = w.grid.half_width
    rep = BoundReport.compare(
        "reverse_holder", value, 1.0, tolerance=1e-9,
        grid=w.grid.descriptor(), family=family.descriptor(), ledger=ledger.as_dict(),
        argmax={"i": ij_a[0], "j": ij_a[1],
                "x_left": -L + ij_a[0] * h, "x_right": -L + ij_a[1] * h},
    )
    rep.extras = {
        "ainfty": ainf, "r_w": r_w, "eps_w": eps_w,
        "integrability_max": max_a,
        "set_ratio_max": max_b, "set_ratio_binding": binding_b,
    }
    return rep


def exp_a2_check(
    f: SampledFunction,
    s_count: int,
    family: IntervalFamily,
    ledger: ConstantsLedger,
) -> BoundReport:
    """Check [e^{sf}]_{A2} <= beta^2 for s swept over [-alpha, alpha]/bmo(f).

    Constant input has nothing to exponentiate against; the report comes back
    with outcome "constant input" instead of a pass/fail.
    """
    if s_count < 1:
        raise ValueError("s_count must be >= 1")
    beta_f = bmo_norm(f, family).value
    bound = ledger.beta ** 2
    # constant samples leave only summation roundoff in the oscillation
    if beta_f <= 1e-12 * max(1.0, float(np.max(np.abs(f.values)))):
        return BoundReport(name="exp_a2", value=0.0, bound=bound, passed=True,
                           outcome="constant input",
                           grid=f.grid.descriptor(), family=family.descriptor(),
                           ledger=ledger.as_dict())
    s_values = np.linspace(-ledger.alpha / beta_f, ledger.alpha / beta_f, s_count)
    results = []
    for s in s_values:
        w = f.map(lambda v: np.exp(s * v))
        results.append(ap_constant(w, 2.0, family).value)
    k = int(np.argmax(results))
    rep = BoundReport.compare("exp_a2", float(results[k]), bound, tolerance=1e-9,
                              grid=f.grid.descriptor(), family=family.descriptor(),
                              ledger=ledger.as_dict())
    rep.extras = {"bmo": beta_f, "s_max": float(s_values[k]),
                  "s_range": [float(s_values[0]), float(s_values[-1])],
                  "per_s": [{"s": float(s), "a2": float(v)}
                            for s, v in zip(s_values, results)]}
    return rep


def log_weight_bmo_check(w: SampledFunction, family: IntervalFamily) -> BoundReport:
    """Check bmo(log w) <= 2 log([w]_ainfty + 1); holds for every positive w."""
    _require_positive(w, "log_weight_bmo_check")
    lhs = bmo_norm(w.map(np.log), family).value
    ainf = ainfty_constant(w, family).value
    rhs = 2.0 * math.log(ainf + 1.0)
    rep = BoundReport(name="log_weight_bmo", value=lhs, bound=rhs,
                      passed=bool(lhs <= rhs + 1e-9), tolerance=1e-9,
                      grid=w.grid.descriptor(), family=family.descriptor())
    rep.extras = {"ainfty": ainf}
    return rep


def exp_small_bmo_ainfty(
    v: SampledFunction,
    family: IntervalFamily,
    ledger: ConstantsLedger,
) -> BoundReport:
    """Check [e^v]_ainfty <= 1 + C4*bmo(v), valid only for small oscillation.

    When bmo(v) >= epsilon0 the hypothesis fails and the report carries the
    outcome "norm too large" instead of a verdict.
    """
    bv = bmo_norm(v, family).value
    if bv >= ledger.epsilon0:
        return BoundReport(name="exp_small_bmo_ainfty", value=math.nan,
                           bound=math.nan, passed=True, outcome="norm too large",
                           grid=v.grid.descriptor(), family=family.descriptor(),
                           ledger=ledger.as_dict(), extras={"bmo": bv})
    lhs = ainfty_constant(v.map(np.exp), family).value
    rhs = 1.0 + ledger.C4 * bv
    rep = BoundReport(name="exp_small_bmo_ainfty", value=lhs, bound=rhs,
                      passed=bool(lhs <= rhs * (1.0 + 1e-9)), tolerance=1e-9,
                      grid=v.grid.descriptor(), family=family.descriptor(),
                      ledger=ledger.as_dict())
    rep.extras = {"bmo": bv}
    return rep


def _gaussian_cell_masses(grid: UniformGrid, refine: int) -> np.ndarray:
    """Per-cell standard Gaussian mass by midpoint quadrature on refined cells."""
    h = grid.spacing
    x = grid.nodes
    if refine <= 1:
        return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi) * h
    sub = (np.arange(refine) + 0.5) / refine - 0.5
    pts = x[:, None] + sub[None, :] * h
    dens = np.exp(-0.5 * pts * pts) / math.sqrt(2.0 * math.pi)
    return dens.mean(axis=1) * h


def orlicz_exp_norm(f: SampledFunction, quad_refine: int = 1) -> float:
    """Gaussian-measure Orlicz norm with Young function exp(t/(1+log+ t)) - 1.

    Returns the smallest lam > 0 such that

        integral [exp((|f|/lam) / (1 + log+(|f|/lam))) - 1] dmu <= 1,

    with mu the standard Gaussian and log+ t = max(1, log t).  Solved by
    bisection to relative width 1e-8.  ``quad_refine`` subdivides each cell
    for the mu quadrature while f stays at its sampled values (f is only
    known at the nodes).  Requires half-width >= 6 so the mass outside the
    grid is below 1e-8; identically-zero input returns 0.
    """
    if f.grid.half_width < 6.0:
        raise ValueError(
            f"grid half-width {f.grid.half_width} < 6; Gaussian tail mass too large"
        )
    af = np.abs(f.values)
    if not np.any(af > 0.0):
        return 0.0
    mass = _gaussian_cell_masses(f.grid, quad_refine)

    def G(lam: float) -> float:
        z = af / lam
        with np.errstate(divide="ignore", over="ignore"):
            lp = np.maximum(1.0, np.log(np.where(z > 0.0, z, 1.0)))
            e = np.expm1(z / (1.0 + lp))
        return float(e @ mass)

    hi = max(float(af.max()), 1e-3)
    for _ in range(200):
        if G(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise ArithmeticError("orlicz_exp_norm: bisection bracket failure (upper)")
    lo = hi
    for _ in range(200):
        cand = lo / 2.0
        if G(cand) > 1.0:
            lo = cand
            break
        lo = cand
        if lo < 1e-300:
            return 0.0
    else:
        raise ArithmeticError("orlicz_exp_norm: bisection bracket failure (lower)")
    while hi - lo > 1e-8 * hi:
        mid = 0.5 * (lo + hi)
        if G(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def gaussian_divergence(field, t: float, grid: UniformGrid) -> SampledFunction:
    """Divergence of the field against the standard Gaussian: dxb - x*b."""
    x = grid.nodes
    vals = field.eval_dx(t, x) - x * field.eval(t, x)
    return SampledFunction(grid, vals)
