"""Flow maps and their logarithmic derivatives.

For each starting point x the coupled system

    dphi/dt = b(t, phi),        dl/dt = dxb(t, phi),   l = log|dxphi|

is integrated with an embedded Dormand-Prince 5(4) pair (per-step error
atol + rtol*|state|), storing values on a requested time lattice via cubic
Hermite interpolation of the accepted steps.  The log-derivative is always
integrated, never obtained by differencing phi; differencing appears only
inside density_formula_check as the independent cross-check.

Fields of the x*log|x| family evolve log|phi| exactly linearly, so their
trajectories are integrated in u = log|phi| coordinates (du/dt = a(t)*s*u,
dl/dt = a(t)*s*(u+1)); this keeps *relative* accuracy in phi even when
|phi| decays below double-precision absolute tolerances.  Trajectories of
such fields that start (or land) inside the origin guard radius are pinned
to the invariant solution phi = 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from typing import Callable, Optional, Sequence

import numpy as np

from .fields import Field, SeparableField, XLogAbs
from .grids import UniformGrid
from .report import BoundReport

__all__ = [
    "SolverConfig", "SolverError", "MonotonicityError", "FlowResult",
    "forward_flow", "backward_flow",
    "check_inverse", "check_semigroup", "density_formula_check",
    "derivative_bound_check", "flow_to_csv",
]


class SolverError(RuntimeError):
    pass


class MonotonicityError(SolverError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    rtol: float = 1e-8
    atol: float = 1e-10
    max_step: Optional[float] = None  # default: time span / 32
    min_step: float = 1e-12
    guard_radius: float = 1e-14
    force_generic: bool = False

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_step is not None and self.max_step <= self.min_step:
            raise ValueError("max_step must exceed min_step")

    def as_dict(self) -> dict:
        return asdict(self)


# Dormand-Prince 5(4) tableau (stage combinations unrolled in _integrate)
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5c, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9

_MAX_ITER = 2_000_000


def _hermite(theta: float, h: float, y0, f0, y1, f1):
    t2 = theta * theta
    t3 = t2 * theta
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + theta
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _integrate(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    y0: Sequence[float],
    cfg: SolverConfig,
    store_times: np.ndarray,
    pin_guard: Optional[float] = None,
    label: str = "",
):
    """Adaptive DP45 from t0 to t1 with Hermite storage at store_times.

    store_times must run from t0 to t1 in the integration direction, with
    store_times[0] == t0.  Returns (array (len(store_times), dim), stats).
    """
    y = np.asarray(y0, dtype=float)
    dim = y.shape[0]
    out = np.empty((len(store_times), dim))
    out[0] = y
    stats = {"steps": 0, "rejections": 0, "min_step": math.inf, "pinned": 0}
    if t1 == t0:
        out[:] = y
        return out, stats

    d = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    h_cap = cfg.max_step if cfg.max_step is not None else span / 32.0
    h_abs = min(h_cap, span)
    t = t0
    try:
        f = np.asarray(rhs(t, y), dtype=float)
    except (ValueError, FloatingPointError) as exc:
        raise SolverError(f"field evaluation failed at t={t:g}, state={y} ({label}): {exc}") from exc
    idx = 1

    for _ in range(_MAX_ITER):
        if (t1 - t) * d <= 0:
            break
        h_abs = min(h_abs, h_cap)
        if h_abs < cfg.min_step:
            raise SolverError(f"step underflow at t={t:g} ({label})")
        h = d * min(h_abs, abs(t1 - t))
        k1 = f
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                k2 = rhs(t + _C2 * h, y + h * (_A21 * k1))
                k3 = rhs(t + _C3 * h, y + h * (_A31 * k1 + _A32 * k2))
                k4 = rhs(t + _C4 * h, y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
                k5 = rhs(t + _C5 * h, y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
                k6 = rhs(t + h, y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
                y1 = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5c * k5 + _B6 * k6)
                k7 = rhs(t + h, y1)
                err = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
        except (ValueError, FloatingPointError) as exc:
            raise SolverError(f"field evaluation failed near t={t:g} ({label}): {exc}") from exc
        scale = cfg.atol + cfg.rtol * np.maximum(np.abs(y), np.abs(y1))
        with np.errstate(invalid="ignore"):
            err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if not np.isfinite(err_norm):
            err_norm = math.inf
        if err_norm <= 1.0:
            t_new = t + h
            if abs(t_new - t1) < 1e-14 * max(1.0, abs(t1)):
                t_new = t1
            while idx < len(store_times) and (store_times[idx] - t_new) * d <= 0:
                tau = store_times[idx]
                if tau == t_new:
                    out[idx] = y1
                else:
                    out[idx] = _hermite((tau - t) / h, h, y, k1, y1, k7)
                idx += 1
            t, y, f = t_new, y1, k7
            stats["steps"] += 1
            stats["min_step"] = min(stats["min_step"], abs(h))
            if pin_guard is not None and abs(y[0]) < pin_guard:
                y[0] = 0.0
                stats["pinned"] = 1
                while idx < len(store_times):
                    out[idx] = y
                    idx += 1
                return out, stats
            factor = 5.0 if err_norm == 0.0 else min(5.0, max(0.2, 0.9 * err_norm ** -0.2))
            h_abs = abs(h) * factor
        else:
            stats["rejections"] += 1
            h_abs = abs(h) * min(1.0, max(0.1, 0.9 * err_norm ** -0.2))
    else:
        raise SolverError(f"iteration cap exceeded ({label})")
    while idx < len(store_times):
        out[idx] = y
        idx += 1
    return out, stats


@dataclass
class FlowResult:
    """Flow map and log-derivative on a time lattice times x starting grid."""

    field_id: str
    start: float
    times: np.ndarray
    x_grid: np.ndarray
    phi: np.ndarray
    logD: np.ndarray
    stats: dict
    config: dict
    grid: Optional[UniformGrid] = None

    def summary(self) -> dict:
        return {
            "field": self.field_id,
            "s": self.start,
            "times": [float(t) for t in self.times],
            "grid": (self.grid.descriptor() if self.grid is not None else
                     {"x_min": float(self.x_grid[0]), "x_max": float(self.x_grid[-1]),
                      "points": int(len(self.x_grid))}),
            "stats": self.stats,
            "config": self.config,
        }


def _merge_stats(parts: list[dict]) -> dict:
    return {
        "steps": int(sum(p["steps"] for p in parts)),
        "rejections": int(sum(p["rejections"] for p in parts)),
        "min_step": float(min(p["min_step"] for p in parts)),
        "pinned": int(sum(p.get("pinned", 0) for p in parts)),
    }


def _log_reduction(field: Field):
    if isinstance(field, SeparableField) and isinstance(field.shape, XLogAbs):
        sigma = field.shape.sigma
        prof = field.profile

        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            a = prof.at(t) * sigma
            return np.array([a * y[0], a * (y[0] + 1.0)])

        return rhs
    return None


def _origin_pinned(field: Field) -> bool:
    return isinstance(field, SeparableField) and isinstance(field.shape, XLogAbs)


def _check_monotone(phi: np.ndarray, times: np.ndarray, field_id: str) -> None:
    for j in range(phi.shape[0]):
        d = np.diff(phi[j])
        if np.any(d <= 0.0):
            i = int(np.flatnonzero(d <= 0.0)[0])
            raise MonotonicityError(
                f"flow of {field_id} lost strict monotonicity at t={times[j]:g} "
                f"between nodes {i} and {i + 1}"
            )


def _run_flow(field: Field, start: float, store_times: np.ndarray, x: np.ndarray,
              cfg: SolverConfig, workers: int) -> tuple[np.ndarray, np.ndarray, dict]:
    n = len(x)
    m = len(store_times)
    phi = np.empty((m, n))
    logD = np.empty((m, n))
    t_end = float(store_times[-1])
    log_rhs = None if cfg.force_generic else _log_reduction(field)
    pin = cfg.guard_radius if _origin_pinned(field) else None

    def one(i: int) -> dict:
        x0 = float(x[i])
        if log_rhs is not None:
            if abs(x0) < cfg.guard_radius:
                phi[:, i] = 0.0
                logD[0, i] = 0.0
                logD[1:, i] = -math.inf
                return {"steps": 0, "rejections": 0, "min_step": math.inf, "pinned": 1}
            y0 = (math.log(abs(x0)), 0.0)
            out, st = _integrate(log_rhs, start, t_end, y0, cfg, store_times,
                                 label=f"{field.field_id}, x0={x0:g}")
            phi[:, i] = math.copysign(1.0, x0) * np.exp(out[:, 0])
            logD[:, i] = out[:, 1]
            return st
        if isinstance(field, SeparableField):
            shape, prof = field.shape, field.profile
            def rhs(t: float, y: np.ndarray) -> np.ndarray:
                a = prof.at(t)
                return np.array([a * shape.value_scalar(y[0]),
                                 a * shape.slope_scalar(y[0])])
        else:
            def rhs(t: float, y: np.ndarray) -> np.ndarray:
                return np.array([float(field.eval(t, y[0])), float(field.eval_dx(t, y[0]))])
        if pin is not None and abs(x0) < pin:
            phi[:, i] = 0.0
            logD[0, i] = 0.0
            logD[1:, i] = -math.inf
            return {"steps": 0, "rejections": 0, "min_step": math.inf, "pinned": 1}
        out, st = _integrate(rhs, start, t_end, (x0, 0.0), cfg, store_times,
                             pin_guard=pin, label=f"{field.field_id}, x0={x0:g}")
        phi[:, i] = out[:, 0]
        logD[:, i] = out[:, 1]
        return st

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(n)))
    else:
        parts = [one(i) for i in range(n)]
    # identity rows exactly at the start time
    phi[0] = x
    logD[0] = 0.0
    return phi, logD, _merge_stats(parts)


def _as_nodes(x_grid) -> tuple[np.ndarray, Optional[UniformGrid]]:
    if isinstance(x_grid, UniformGrid):
        return x_grid.nodes, x_grid
    x = np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or len(x) < 1:
        raise ValueError("x_grid must be a 1-d array of starting points")
    if np.any(np.diff(x) <= 0.0):
        raise ValueError("x_grid must be strictly increasing")
    return x, None


def forward_flow(field: Field, s: float, times, x_grid, cfg: Optional[SolverConfig] = None,
                 workers: int = 1) -> FlowResult:
    """Flow started at time s, stored on the given increasing time lattice.

    ``times`` must be increasing with times[0] == s.  ``x_grid`` is either a
    UniformGrid or a strictly increasing array of starting points; each point
    integrates independently.
    """
    cfg = cfg or SolverConfig()
    times = np.asarray(times, dtype=float)
    if len(times) < 1 or abs(times[0] - s) > 1e-12 * max(1.0, abs(s)):
        raise ValueError("times must start at s")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be strictly increasing")
    times = times.copy()
    times[0] = s
    x, grid = _as_nodes(x_grid)
    phi, logD, stats = _run_flow(field, s, times, x, cfg, workers)
    _check_monotone(phi, times, field.field_id)
    return FlowResult(field_id=field.field_id, start=s, times=times, x_grid=x,
                      phi=phi, logD=logD, stats=stats, config=cfg.as_dict(), grid=grid)


def backward_flow(field: Field, t: float, s: float, x_grid, cfg: Optional[SolverConfig] = None,
                  times=None, workers: int = 1) -> FlowResult:
    """Reversed-time flow: start at time t on x_grid, integrate down to s.

    The stored lattice runs decreasingly from t to s; row 0 is the identity
    at t and the final row is the inverse image at s.
    """
    cfg = cfg or SolverConfig()
    if times is None:
        times = np.array([t, s], dtype=float)
    else:
        times = np.asarray(times, dtype=float)
    if s > t:
        raise ValueError("backward flow needs s <= t")
    if abs(times[0] - t) > 1e-12 * max(1.0, abs(t)) or np.any(np.diff(times) >= 0.0):
        raise ValueError("backward lattice must run decreasingly from t")
    times = times.copy()
    times[0] = t
    x, grid = _as_nodes(x_grid)
    phi, logD, stats = _run_flow(field, t, times, x, cfg, workers)
    _check_monotone(phi, times, field.field_id)
    return FlowResult(field_id=field.field_id, start=t, times=times, x_grid=x,
                      phi=phi, logD=logD, stats=stats, config=cfg.as_dict(), grid=grid)


def _roundtrip_scales(*results: FlowResult) -> np.ndarray:
    """Per-node state scale: the largest magnitude seen along the runs."""
    mags = [np.max(np.abs(r.phi), axis=0) for r in results]
    return np.maximum.reduce(mags)


def check_inverse(fwd: FlowResult, bwd: FlowResult) -> BoundReport:
    """Round trip through the reversed flow must return the starting points.

    ``bwd`` must have been started at fwd's final time on fwd's final values.
    Per-node tolerance is 10*(atol + rtol*scale) where scale is the largest
    magnitude the trajectory visits.
    """
    if fwd.field_id != bwd.field_id:
        raise ValueError("inverse check: field mismatch")
    if abs(bwd.times[0] - fwd.times[-1]) > 1e-12 or abs(bwd.times[-1] - fwd.times[0]) > 1e-12:
        raise ValueError("inverse check: time interval mismatch")
    if not np.array_equal(bwd.x_grid, fwd.phi[-1]):
        raise ValueError("inverse check: backward run must start on the forward images")
    err = np.abs(bwd.phi[-1] - fwd.x_grid)
    scale = _roundtrip_scales(fwd, bwd)
    atol, rtol = fwd.config["atol"], fwd.config["rtol"]
    # errors made near the compressed end of the trip are re-expanded by the
    # inverse map's slope exp(-logD); tolerate that conditioning
    with np.errstate(over="ignore"):
        amp = np.maximum(1.0, np.exp(-fwd.logD[-1]))
    thresh = 10.0 * (atol + rtol * scale) * amp
    k = int(np.argmax(err / thresh))
    rep = BoundReport(name="inverse_roundtrip", value=float(err.max()),
                      bound=float(thresh[k]),
                      passed=bool(np.all(err <= thresh)))
    rep.extras = {"field": fwd.field_id, "t": float(fwd.times[-1]), "s": float(fwd.times[0]),
                  "max_err": float(err.max()), "worst_x": float(fwd.x_grid[k]),
                  "max_rel_to_threshold": float(np.max(err / thresh))}
    return rep


def check_semigroup(field: Field, s: float, r: float, t: float, x_grid,
                    cfg: Optional[SolverConfig] = None) -> BoundReport:
    """Composition consistency: flowing s->t equals flowing s->r then r->t."""
    if not (s <= r <= t):
        raise ValueError(f"need s <= r <= t, got {s}, {r}, {t}")
    cfg = cfg or SolverConfig()
    x, _ = _as_nodes(x_grid)
    if r == s or r == t:
        lattice = np.array([s, t]) if t > s else np.array([s])
        direct = forward_flow(field, s, lattice, x, cfg)
        again = forward_flow(field, s, lattice, x, cfg)
        err = np.abs(direct.phi[-1] - again.phi[-1])
        results = (direct, again)
    else:
        # integrate each leg to an exact endpoint; the relay must not start
        # from a dense-output sample or its interpolation error dominates
        direct = forward_flow(field, s, np.array([s, t]), x, cfg)
        first = forward_flow(field, s, np.array([s, r]), x, cfg)
        relay = forward_flow(field, r, np.array([r, t]), first.phi[-1], cfg)
        err = np.abs(relay.phi[-1] - direct.phi[-1])
        results = (direct, first, relay)
    scale = _roundtrip_scales(*results)
    thresh = 10.0 * (cfg.atol + cfg.rtol * scale)
    k = int(np.argmax(err / thresh))
    rep = BoundReport(name="semigroup", value=float(err.max()), bound=float(thresh[k]),
                      passed=bool(np.all(err <= thresh)))
    rep.extras = {"field": field.field_id, "s": s, "r": r, "t": t,
                  "max_err": float(err.max()), "worst_x": float(x[k])}
    return rep


def density_formula_check(fr: FlowResult, field: Field,
                          tol_quadrature: float = 1e-3,
                          tol_fd: Optional[float] = None,
                          x_mask: Optional[np.ndarray] = None) -> BoundReport:
    """Cross-check the integrated log-derivative two independent ways.

    (a) trapezoid of dxb(t, phi(t, x)) along each stored trajectory,
    (b) log of centered finite differences of phi in x at the final time.
    Requires at least 8 stored times for (a).  ``x_mask`` restricts the
    comparison nodes (finite differencing is ill-posed across the origin for
    slope-singular fields).  Default FD tolerance is max(1e-4, 3*h) with h
    the largest node spacing among compared neighbors.
    """
    m = len(fr.times)
    if m < 8:
        raise ValueError(f"need at least 8 stored times for the quadrature check, got {m}")
    g = np.empty_like(fr.phi)
    for j, t in enumerate(fr.times):
        g[j] = np.asarray(field.eval_dx(float(t), fr.phi[j]), dtype=float)
    quad = np.trapezoid(g, fr.times, axis=0)
    dev_a_nodes = np.abs(fr.logD[-1] - quad)

    x = fr.x_grid
    with np.errstate(divide="ignore", invalid="ignore"):
        fd = (fr.phi[-1][2:] - fr.phi[-1][:-2]) / (x[2:] - x[:-2])
        fd_log = np.log(np.abs(fd))
    dev_b_nodes = np.abs(fr.logD[-1][1:-1] - fd_log)

    if x_mask is None:
        x_mask = np.ones(len(x), dtype=bool)
    inner = x_mask[1:-1] & x_mask[:-2] & x_mask[2:] & np.isfinite(fd_log)
    if not np.any(inner) or not np.any(x_mask):
        raise ValueError("x_mask leaves no comparable nodes")
    dev_a = float(dev_a_nodes[x_mask].max())
    dev_b = float(dev_b_nodes[inner].max())
    spacing = x[2:] - x[:-2]
    if tol_fd is None:
        tol_fd = max(1e-4, 3.0 * float(spacing[inner].max()) / 2.0)
    passed = dev_a <= tol_quadrature and dev_b <= tol_fd
    rep = BoundReport(name="density_formula", value=max(dev_a, dev_b),
                      bound=max(tol_quadrature, tol_fd), passed=bool(passed))
    rep.extras = {
        "field": fr.field_id,
        "quadrature_dev": dev_a, "quadrature_tol": tol_quadrature,
        "fd_dev": dev_b, "fd_tol": tol_fd,
        "compared_nodes": int(inner.sum()),
    }
    return rep


def derivative_bound_check(fr: FlowResult, norms) -> BoundReport:
    """Two-sided envelope |logD(t)| <= integral of the sup slope, nodewise.

    Only meaningful for Lipschitz fields; unbounded-slope fields come back
    with outcome "not lipschitz".
    """
    s = float(fr.times[0])
    worst = -math.inf
    for j, t in enumerate(fr.times):
        a_int = norms.sup_integral(min(s, float(t)), max(s, float(t)))
        if not math.isfinite(a_int):
            return BoundReport(name="slope_sup_envelope", value=math.nan, bound=math.nan,
                               passed=True, outcome="not lipschitz",
                               extras={"field": fr.field_id})
        worst = max(worst, float(np.max(np.abs(fr.logD[j])) - a_int))
    rep = BoundReport(name="slope_sup_envelope", value=worst, bound=0.0,
                      passed=bool(worst <= 1e-9), tolerance=1e-9)
    rep.extras = {"field": fr.field_id}
    return rep


def flow_to_csv(fr: FlowResult, path) -> None:
    """Long-format rows t,x,phi,logD with 13 significant digits."""
    with open(path, "w", newline="") as fh:
        fh.write("t,x,phi,logD\n")
        for j, t in enumerate(fr.times):
            for i, xx in enumerate(fr.x_grid):
                fh.write(f"{t:.12e},{xx:.12e},{fr.phi[j, i]:.12e},{fr.logD[j, i]:.12e}\n")
