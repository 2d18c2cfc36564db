"""Vector-field registry and field-level constructions.

A field is b(t, x) with an evaluable spatial slope dxb(t, x).  The registry
holds separable fields a(t) * B(x) built from analytic spatial shapes with
closed-form slopes; two wrappers derive new fields from existing ones:

    truncate(b, k)   slope clamped to [-k, k], value re-integrated from x = 0
    mollify(b, eps)  convolution with a compactly supported unit-mass bump

Field-level checks live here too: the symmetric-second-difference seminorm,
the two-increment ratio inequality, and the |x| log|x|-type growth bounds,
each compared against a right-hand side built from the slope's measured
oscillation norms.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .grids import IntervalFamily, SampledFunction, UniformGrid, build_family
from .quadrature import adaptive_simpson, gl_panel_rule
from .report import BoundReport, ConstantsLedger
from .weights import bmo_norm, star_norm

__all__ = [
    "SpatialShape", "XLogAbs", "Affine", "Sine", "PowerLog", "SampledShape",
    "TimeProfile", "ConstantProfile", "PiecewiseConstantProfile", "CallableProfile",
    "Field", "SeparableField", "TruncatedField", "MollifiedField",
    "parse_field", "UnknownFieldError", "FieldNorms",
    "truncate", "mollify",
    "zygmund_seminorm", "increment_ratio_check", "growth_bound_check",
]


# ---------------------------------------------------------------------------
# spatial shapes

class SpatialShape:
    """Spatial factor B(x) with closed-form slope B'(x)."""

    label: str = "shape"
    sup_slope: float = math.inf

    def value(self, x):
        raise NotImplementedError

    def slope(self, x):
        """B'(x); raises where the slope is singular (use _slope_limit for clamps)."""
        raise NotImplementedError

    def _slope_limit(self, x):
        """Like slope but returns +-inf at singular points instead of raising."""
        return self.slope(x)

    def slope_scalar(self, x: float) -> float:
        """Scalar fast path for quadrature loops; limits at singular points."""
        return float(self._slope_limit(x))

    def value_scalar(self, x: float) -> float:
        """Scalar fast path for integrator loops."""
        return float(self.value(x))


@dataclass(frozen=True)
class XLogAbs(SpatialShape):
    """B(x) = sigma * x * log|x|, extended by 0 at the origin.

    The slope sigma*(log|x| + 1) diverges at 0; raw evaluation there is an
    error, clamped wrappers use the -inf limit.
    """

    sigma: float = 1.0

    @property
    def label(self) -> str:
        return f"xlogabs:sigma={self.sigma:g}"

    def value(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(x == 0.0, 0.0, self.sigma * x * np.log(np.abs(np.where(x == 0.0, 1.0, x))))
        return out if out.ndim else float(out)

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x == 0.0):
            raise ValueError("slope of x*log|x| is singular at x = 0")
        out = self.sigma * (np.log(np.abs(x)) + 1.0)
        return out if out.ndim else float(out)

    def _slope_limit(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            out = self.sigma * (np.log(np.abs(x)) + 1.0)
        return out if out.ndim else float(out)

    def slope_scalar(self, x: float) -> float:
        if x == 0.0:
            return -math.inf if self.sigma > 0.0 else (math.inf if self.sigma < 0.0 else 0.0)
        return self.sigma * (math.log(abs(x)) + 1.0)

    def value_scalar(self, x: float) -> float:
        return 0.0 if x == 0.0 else self.sigma * x * math.log(abs(x))


@dataclass(frozen=True)
class Affine(SpatialShape):
    a0: float = 0.0
    a1: float = 1.0

    @property
    def label(self) -> str:
        return f"affine:a0={self.a0:g},a1={self.a1:g}"

    @property
    def sup_slope(self) -> float:
        return abs(self.a1)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = self.a0 + self.a1 * x
        return out if out.ndim else float(out)

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.a1)
        return out if out.ndim else float(out)

    def slope_scalar(self, x: float) -> float:
        return self.a1

    def value_scalar(self, x: float) -> float:
        return self.a0 + self.a1 * x


@dataclass(frozen=True)
class Sine(SpatialShape):
    amp: float = 1.0
    freq: float = 1.0

    @property
    def label(self) -> str:
        return f"sine:amp={self.amp:g},freq={self.freq:g}"

    @property
    def sup_slope(self) -> float:
        return abs(self.amp * self.freq)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = self.amp * np.sin(self.freq * x)
        return out if out.ndim else float(out)

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        out = self.amp * self.freq * np.cos(self.freq * x)
        return out if out.ndim else float(out)

    def slope_scalar(self, x: float) -> float:
        return self.amp * self.freq * math.cos(self.freq * x)

    def value_scalar(self, x: float) -> float:
        return self.amp * math.sin(self.freq * x)


@dataclass(frozen=True)
class PowerLog(SpatialShape):
    """B(x) = sign(x) |x|^p log(c + |x|); p=1, c=0 recovers x log|x|."""

    exponent: float = 1.0
    cutoff: float = 0.1

    def __post_init__(self):
        if self.exponent < 1.0:
            raise ValueError(f"powerlog exponent must be >= 1, got {self.exponent}")
        if self.cutoff < 0.0:
            raise ValueError(f"powerlog cutoff must be >= 0, got {self.cutoff}")

    @property
    def label(self) -> str:
        return f"powerlog:exponent={self.exponent:g},cutoff={self.cutoff:g}"

    def value(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(
                ax == 0.0, 0.0,
                np.sign(x) * ax ** self.exponent * np.log(self.cutoff + np.where(ax == 0.0, 1.0, ax)),
            )
        return out if out.ndim else float(out)

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        if self.cutoff == 0.0 and self.exponent == 1.0 and np.any(x == 0.0):
            raise ValueError("powerlog slope singular at x = 0 when exponent=1, cutoff=0")
        out = self._slope_limit(x)
        return out if np.ndim(out) else float(out)

    def value_scalar(self, x: float) -> float:
        if x == 0.0:
            return 0.0
        ax = abs(x)
        return math.copysign(ax ** self.exponent, x) * math.log(self.cutoff + ax)

    def slope_scalar(self, x: float) -> float:
        ax = abs(x)
        p, c = self.exponent, self.cutoff
        if ax == 0.0:
            if p > 1.0:
                return 0.0
            return (-math.inf if c == 0.0 else math.log(c))
        return p * ax ** (p - 1.0) * math.log(c + ax) + ax ** p / (c + ax)

    def _slope_limit(self, x):
        # p |x|^{p-1} log(c+|x|) + |x|^p / (c+|x|); at x=0 the limit is
        # 0 for p>1, log(c)+[c==0] for p=1 (so -inf when the shape is x log|x|).
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        p, c = self.exponent, self.cutoff
        zero = ax == 0.0
        safe = np.where(zero, 1.0, ax)
        with np.errstate(divide="ignore"):
            logterm = np.log(c + ax)  # -inf at 0 only when c == 0
        if p == 1.0:
            first = logterm
            second = np.where(zero, 1.0 if c == 0.0 else 0.0, ax / (c + ax))
        else:
            first = np.where(zero, 0.0, p * safe ** (p - 1.0) * np.where(zero, 0.0, logterm))
            second = np.where(zero, 0.0, safe ** p / (c + safe))
        out = first + second
        return out if out.ndim else float(out)


class SampledShape(SpatialShape):
    """Spatial shape given by value and slope samples; cubic Hermite between nodes.

    The sample grid must straddle the origin (staggered grids do), so the
    anchor value B(0) needed by the clamped wrapper is interpolable.
    """

    def __init__(self, grid: UniformGrid, values: np.ndarray, dvalues: np.ndarray):
        self.grid = grid
        self.values = np.asarray(values, dtype=float)
        self.dvalues = np.asarray(dvalues, dtype=float)
        if self.values.shape != (grid.count,) or self.dvalues.shape != (grid.count,):
            raise ValueError("values/dvalues must match the grid size")
        self.label = f"sampled:n={grid.count}"
        self.sup_slope = float(np.max(np.abs(self.dvalues)))

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        nodes = self.grid.nodes
        if np.any(x < nodes[0]) or np.any(x > nodes[-1]):
            raise ValueError("sampled field evaluated outside its grid range")
        k = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, self.grid.count - 2)
        return x, k

    def value(self, x):
        x, k = self._locate(x)
        h = self.grid.spacing
        t = (x - self.grid.nodes[k]) / h
        v0, v1 = self.values[k], self.values[k + 1]
        d0, d1 = self.dvalues[k], self.dvalues[k + 1]
        h00 = (1 + 2 * t) * (1 - t) ** 2
        h10 = t * (1 - t) ** 2
        h01 = t * t * (3 - 2 * t)
        h11 = t * t * (t - 1)
        out = h00 * v0 + h10 * h * d0 + h01 * v1 + h11 * h * d1
        return out if out.ndim else float(out)

    def slope(self, x):
        x, k = self._locate(x)
        h = self.grid.spacing
        t = (x - self.grid.nodes[k]) / h
        v0, v1 = self.values[k], self.values[k + 1]
        d0, d1 = self.dvalues[k], self.dvalues[k + 1]
        dh00 = 6 * t * (t - 1) / h
        dh10 = (1 - t) * (1 - 3 * t)
        dh01 = -6 * t * (t - 1) / h
        dh11 = t * (3 * t - 2)
        out = dh00 * v0 + dh10 * d0 + dh01 * v1 + dh11 * d1
        return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# time profiles

class TimeProfile:
    is_constant = False

    def at(self, t: float) -> float:
        raise NotImplementedError

    def integral(self, s: float, t: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantProfile(TimeProfile):
    level: float = 1.0
    is_constant = True

    def __post_init__(self):
        if self.level < 0.0:
            raise ValueError("time profile must be nonnegative")

    def at(self, t: float) -> float:
        return self.level

    def integral(self, s: float, t: float) -> float:
        return self.level * (t - s)


class PiecewiseConstantProfile(TimeProfile):
    """a(t) = levels[k] on [breaks[k], breaks[k+1]); constant beyond the ends."""

    def __init__(self, breaks: Sequence[float], levels: Sequence[float]):
        self.breaks = np.asarray(breaks, dtype=float)
        self.levels = np.asarray(levels, dtype=float)
        if len(self.breaks) != len(self.levels) + 1:
            raise ValueError("need len(breaks) == len(levels) + 1")
        if np.any(np.diff(self.breaks) <= 0.0):
            raise ValueError("breaks must be strictly increasing")
        if np.any(self.levels < 0.0):
            raise ValueError("time profile must be nonnegative")

    def at(self, t: float) -> float:
        k = np.clip(np.searchsorted(self.breaks, t, side="right") - 1, 0, len(self.levels) - 1)
        return float(self.levels[k])

    def integral(self, s: float, t: float) -> float:
        if t < s:
            return -self.integral(t, s)
        edges = self.breaks
        total = 0.0
        if s < edges[0]:
            total += self.levels[0] * (min(t, edges[0]) - s)
        for k, level in enumerate(self.levels):
            a = max(s, edges[k])
            b = min(t, edges[k + 1])
            if b > a:
                total += level * (b - a)
        if t > edges[-1]:
            total += self.levels[-1] * (t - max(s, edges[-1]))
        return total


class CallableProfile(TimeProfile):
    """Arbitrary nonnegative rate a(t); integrals by adaptive quadrature
    unless a closed-form antiderivative is supplied."""

    def __init__(self, fn, antiderivative=None):
        self._fn = fn
        self._anti = antiderivative

    def at(self, t: float) -> float:
        v = float(self._fn(t))
        if v < 0.0:
            raise ValueError(f"time profile must be nonnegative, got a({t}) = {v}")
        return v

    def integral(self, s: float, t: float) -> float:
        if self._anti is not None:
            return float(self._anti(t)) - float(self._anti(s))
        return adaptive_simpson(self.at, s, t, tol=1e-11)


# ---------------------------------------------------------------------------
# fields

class Field:
    """Time-dependent field b(t, x) with evaluable spatial slope."""

    field_id: str = "field"
    autonomous: bool = False

    def eval(self, t: float, x):
        raise NotImplementedError

    def eval_dx(self, t: float, x):
        raise NotImplementedError

    def _dx_limit(self, t: float, x):
        """eval_dx extended by limits at singular points (for clamped wrappers)."""
        return self.eval_dx(t, x)

    def sup_dx(self, t: float) -> float:
        """sup_x |dxb(t, x)| (analytic where known, +inf otherwise)."""
        return math.inf


class SeparableField(Field):
    """b(t, x) = a(t) * B(x) for a spatial shape B and nonnegative profile a."""

    def __init__(self, shape: SpatialShape, profile: Optional[TimeProfile] = None):
        self.shape = shape
        self.profile = profile if profile is not None else ConstantProfile(1.0)
        self.autonomous = self.profile.is_constant
        self.field_id = shape.label

    def eval(self, t: float, x):
        return self.profile.at(t) * self.shape.value(x)

    def eval_dx(self, t: float, x):
        return self.profile.at(t) * self.shape.slope(x)

    def _dx_limit(self, t: float, x):
        return self.profile.at(t) * self.shape._slope_limit(x)

    def sup_dx(self, t: float) -> float:
        return self.profile.at(t) * self.shape.sup_slope

    @property
    def log_reducible(self) -> bool:
        """True when d(log|phi|)/dt = a(t)*sigma*log|phi| holds exactly."""
        return isinstance(self.shape, XLogAbs)


class TruncatedField(Field):
    """Companion field with slope clamped to [-k, k].

    The value is re-integrated from the origin anchor:
    b_k(t, x) = b(t, 0) + integral_0^x clamp(dxb(t, y), -k, k) dy, by adaptive
    Simpson.  Cumulative integrals are cached on a quarter-octave anchor
    ladder (|x| = 2^{j/4}), so each evaluation only integrates the short gap
    from the nearest anchor below it; the chained segments use a tighter
    tolerance (1e-13) than the final gap (1e-11) to keep the composed value
    near the 1e-10 absolute target.
    """

    _LADDER_BASE_J = -160  # 2^{-40}: below this, integrate straight from 0

    def __init__(self, base: Field, k: float):
        if not (math.isfinite(k) and k > 0.0):
            raise ValueError(f"truncation level must be positive, got {k}")
        self.base = base
        self.k = float(k)
        self.autonomous = base.autonomous
        self.field_id = f"trunc(k={k:g})|{base.field_id}"
        self._levels: dict = {}
        self._lock = threading.Lock()

    def _cache_key(self, t: float):
        if self.autonomous:
            return 0.0
        if isinstance(self.base, SeparableField):
            return round(self.base.profile.at(t), 15)
        return round(t, 15)

    def eval_dx(self, t: float, x):
        if np.ndim(x) == 0 and isinstance(self.base, SeparableField):
            v = self.base.profile.at(t) * self.base.shape.slope_scalar(float(x))
            return self.k if v > self.k else (-self.k if v < -self.k else v)
        out = np.clip(self.base._dx_limit(t, x), -self.k, self.k)
        return out if np.ndim(out) else float(out)

    def _integrand(self, t: float):
        k = self.k
        base = self.base
        if isinstance(base, SeparableField):
            a = base.profile.at(t)
            g = base.shape.slope_scalar

            def fast(y: float) -> float:
                v = a * g(y)
                return k if v > k else (-k if v < -k else v)

            return fast

        def generic(y: float) -> float:
            v = float(base._dx_limit(t, y))
            return k if v > k else (-k if v < -k else v)

        return generic

    def _anchor(self, key, t: float, side: float, j: int) -> float:
        """Cumulative integral of the clamped slope from 0 to side*2^{j/4}."""
        with self._lock:
            levels = self._levels.setdefault(key, {})
            cached = levels.get((side, j))
        if cached is not None:
            return cached
        g = self._integrand(t)
        j0 = self._LADDER_BASE_J
        with self._lock:
            built = sorted(jj for (sd, jj) in levels if sd == side and jj <= j)
        if built:
            j_from = built[-1]
            I = levels[(side, j_from)]
        else:
            j_from = j0
            I = adaptive_simpson(g, 0.0, side * 2.0 ** (j0 / 4.0), tol=1e-13)
            with self._lock:
                levels[(side, j_from)] = I
        while j_from < j:
            a = side * 2.0 ** (j_from / 4.0)
            b = side * 2.0 ** ((j_from + 1) / 4.0)
            I = I + adaptive_simpson(g, a, b, tol=1e-13)
            j_from += 1
            with self._lock:
                levels[(side, j_from)] = I
        return I

    def eval(self, t: float, x):
        if np.ndim(x):
            return np.array([self.eval(t, float(xx)) for xx in np.asarray(x, dtype=float)])
        x = float(x)
        anchor0 = float(self.base.eval(t, 0.0))
        if x == 0.0:
            return anchor0
        key = self._cache_key(t)
        g = self._integrand(t)
        ax = abs(x)
        side = math.copysign(1.0, x)
        j = math.floor(4.0 * math.log2(ax))
        if j <= self._LADDER_BASE_J:
            return anchor0 + adaptive_simpson(g, 0.0, x, tol=1e-11)
        Ia = self._anchor(key, t, side, j)
        a = side * 2.0 ** (j / 4.0)
        return anchor0 + Ia + adaptive_simpson(g, a, x, tol=1e-11)

    def sup_dx(self, t: float) -> float:
        return min(self.base.sup_dx(t), self.k)


_BUMP_Z: Optional[float] = None


def _bump(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    inside = np.abs(v) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - v[inside] ** 2))
    return out


def _bump_dv(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    inside = np.abs(v) < 1.0
    vi = v[inside]
    out[inside] = np.exp(-1.0 / (1.0 - vi ** 2)) * (-2.0 * vi / (1.0 - vi ** 2) ** 2)
    return out


def _bump_normalization() -> float:
    global _BUMP_Z
    if _BUMP_Z is None:
        _BUMP_Z = adaptive_simpson(lambda v: math.exp(-1.0 / (1.0 - v * v)) if abs(v) < 1.0 else 0.0,
                                   -1.0, 1.0, tol=1e-13)
    return _BUMP_Z


class MollifiedField(Field):
    """Convolution of a field with the scaled standard bump kernel.

    Values use a fixed composite Gauss-Legendre rule whose panel count is
    chosen at construction (doubled until stable to 1e-10 on probe points);
    the slope is evaluated through the kernel-derivative form
    (1/eps) * integral b(t, x - eps v) rho'(v) dv, which keeps the integrand
    as smooth as b itself.
    """

    def __init__(self, base: Field, eps: float, probe_x: Optional[Sequence[float]] = None):
        if not (math.isfinite(eps) and eps > 0.0):
            raise ValueError(f"mollification width must be positive, got {eps}")
        self.base = base
        self.eps = float(eps)
        self.autonomous = base.autonomous
        self.field_id = f"mollify(eps={eps:g})|{base.field_id}"
        Z = _bump_normalization()
        if probe_x is None:
            probe_x = [0.0, 0.3 * eps, -1.1 * eps, 2.0 * eps, 1.0, -3.0]
        panels = 4
        prev = None
        while True:
            v, gw = gl_panel_rule(panels, 10)
            w_val = gw * _bump(v) / Z
            probe = np.array([
                float(np.dot(w_val, self.base.eval(0.0, px - eps * v))) for px in probe_x
            ])
            if prev is not None and np.max(np.abs(probe - prev)) <= 1e-10:
                break
            prev = probe
            panels *= 2
            if panels > 256:
                break
        self._v = v
        self._w_val = w_val
        self._w_slope = gw * _bump_dv(v) / (Z * self.eps)

    def eval(self, t: float, x):
        if np.ndim(x):
            x = np.asarray(x, dtype=float)
            pts = x[:, None] - self.eps * self._v[None, :]
            return self.base.eval(t, pts.ravel()).reshape(pts.shape) @ self._w_val
        return float(np.dot(self._w_val, self.base.eval(t, x - self.eps * self._v)))

    def eval_dx(self, t: float, x):
        if np.ndim(x):
            x = np.asarray(x, dtype=float)
            pts = x[:, None] - self.eps * self._v[None, :]
            return self.base.eval(t, pts.ravel()).reshape(pts.shape) @ self._w_slope
        return float(np.dot(self._w_slope, self.base.eval(t, x - self.eps * self._v)))

    def eval_dx_accurate(self, t: float, x: float, tol: float = 1e-11) -> float:
        """Slope via adaptive Simpson on the kernel-derivative form.

        Splits at the interior point where b's own argument crosses zero so
        log-flat kinks of the base field land on panel edges.
        """
        Z = _bump_normalization()

        def g(v: float) -> float:
            if abs(v) >= 1.0:
                return 0.0
            rho_dv = math.exp(-1.0 / (1.0 - v * v)) * (-2.0 * v / (1.0 - v * v) ** 2)
            return float(self.base.eval(t, x - self.eps * v)) * rho_dv

        vstar = x / self.eps
        if -1.0 < vstar < 1.0:
            total = adaptive_simpson(g, -1.0, vstar, tol=tol / 2) + adaptive_simpson(g, vstar, 1.0, tol=tol / 2)
        else:
            total = adaptive_simpson(g, -1.0, 1.0, tol=tol)
        return total / (Z * self.eps)

    def kernel_mass(self) -> float:
        """Quadrature mass of the scaled kernel (1 up to the rule's accuracy)."""
        return float(np.sum(self._w_val))

    def sup_dx(self, t: float) -> float:
        return self.base.sup_dx(t)


def truncate(field: Field, k: float) -> TruncatedField:
    """Clamp the field's slope to [-k, k] and re-integrate the value from 0."""
    return TruncatedField(field, k)


def mollify(field: Field, eps: float) -> MollifiedField:
    """Smooth the field by bump-kernel convolution at width eps."""
    return MollifiedField(field, eps)


# ---------------------------------------------------------------------------
# registry

class UnknownFieldError(ValueError):
    pass


_SHAPES = {
    "xlogabs": (XLogAbs, {"sigma": 1.0}),
    "affine": (Affine, {"a0": 0.0, "a1": 1.0}),
    "sine": (Sine, {"amp": 1.0, "freq": 1.0}),
    "powerlog": (PowerLog, {"exponent": 1.0, "cutoff": 0.1}),
}


def parse_field(field_id: str, profile: Optional[TimeProfile] = None) -> SeparableField:
    """Build a registry field from an id like ``xlogabs:sigma=1``."""
    name, _, rest = field_id.strip().partition(":")
    name = name.lower()
    if name not in _SHAPES:
        raise UnknownFieldError(f"unknown field id {name!r}; known: {sorted(_SHAPES)}")
    cls, defaults = _SHAPES[name]
    params = dict(defaults)
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            key = key.strip()
            if not eq or key not in params:
                raise UnknownFieldError(
                    f"bad parameter {item!r} for field {name!r}; known: {sorted(params)}"
                )
            try:
                params[key] = float(val)
            except ValueError:
                raise UnknownFieldError(f"non-numeric value in {item!r}") from None
    return SeparableField(cls(**params), profile)


# ---------------------------------------------------------------------------
# slope norms over time

class FieldNorms:
    """Oscillation/star/sup norms of the slope x -> dxb(t, x), per time.

    Spatial norms are measured once with the interval-sweep estimators on the
    given grid and family; time dependence comes from the profile, so the
    time integrals are exact for autonomous and separable fields (numeric
    Simpson otherwise).
    """

    def __init__(self, field: Field, grid: UniformGrid, family: Optional[IntervalFamily] = None):
        self.field = field
        self.grid = grid
        self.family = family if family is not None else build_family(grid)
        self._cache: dict = {}
        sep = isinstance(field, SeparableField) and not field.autonomous
        self._separable = sep
        if field.autonomous:
            b0, s0 = self._measure(0.0)
            self._bmo0, self._star0 = b0, s0
        elif sep:
            samples = SampledFunction(grid, field.shape.slope(grid.nodes))
            self._bmo0 = bmo_norm(samples, self.family).value
            self._star0 = star_norm(samples, self.family)
        else:
            self._bmo0 = None
            self._star0 = None

    def _measure(self, t: float) -> tuple[float, float]:
        key = round(t, 15)
        if key not in self._cache:
            samples = SampledFunction(self.grid, np.asarray(self.field.eval_dx(t, self.grid.nodes), dtype=float))
            self._cache[key] = (bmo_norm(samples, self.family).value,
                                star_norm(samples, self.family))
        return self._cache[key]

    def bmo_at(self, t: float) -> float:
        if self.field.autonomous:
            return self._bmo0
        if self._separable:
            return self.field.profile.at(t) * self._bmo0
        return self._measure(t)[0]

    def star_at(self, t: float) -> float:
        if self.field.autonomous:
            return self._star0
        if self._separable:
            return self.field.profile.at(t) * self._star0
        return self._measure(t)[1]

    def sup_at(self, t: float) -> float:
        return self.field.sup_dx(t)

    def B(self, s: float, t: float) -> float:
        """Accumulated slope oscillation: integral of bmo_at over [s, t]."""
        if self.field.autonomous:
            return self._bmo0 * (t - s)
        if self._separable:
            return self._bmo0 * self.field.profile.integral(s, t)
        return adaptive_simpson(self.bmo_at, s, t, tol=1e-9)

    def sup_integral(self, s: float, t: float) -> float:
        """Integral of the sup-slope over [s, t]; inf for non-Lipschitz fields."""
        if not math.isfinite(self.field.sup_dx(0.0) if self.field.autonomous else self.field.sup_dx(s)):
            return math.inf
        if self.field.autonomous:
            return self.field.sup_dx(0.0) * (t - s)
        if isinstance(self.field, SeparableField):
            return self.field.shape.sup_slope * self.field.profile.integral(s, t)
        return adaptive_simpson(self.field.sup_dx, s, t, tol=1e-9)


# ---------------------------------------------------------------------------
# field-level checks

def _slope_samples(field: Field, t: float, grid: UniformGrid) -> SampledFunction:
    return SampledFunction(grid, np.asarray(field.eval_dx(t, grid.nodes), dtype=float))


def zygmund_seminorm(
    field: Field,
    t: float,
    grid: UniformGrid,
    y_values: Sequence[float],
    family: Optional[IntervalFamily] = None,
) -> BoundReport:
    """Sup of |b(x+y) + b(x-y) - 2 b(x)| / y over grid x and the given y.

    Compared against twice the slope's measured oscillation norm; that bound
    is a theorem for the true sup, and the sampled sup sits below it, so the
    check passes with multiplicative slack 1e-6.
    """
    y_values = np.asarray(list(y_values), dtype=float)
    if y_values.size == 0:
        raise ValueError("empty y list")
    if np.any(y_values <= 0.0):
        raise ValueError("y values must be positive")
    family = family if family is not None else build_family(grid)
    beta = bmo_norm(_slope_samples(field, t, grid), family).value
    xs = grid.nodes
    base = np.asarray(field.eval(t, xs))
    sup = -math.inf
    arg = (0.0, 0.0)
    diag = -math.inf
    for y in y_values:
        d2 = np.abs(np.asarray(field.eval(t, xs + y)) + np.asarray(field.eval(t, xs - y))
                    - 2.0 * base) / y
        k = int(np.argmax(d2))
        if d2[k] > sup:
            sup = float(d2[k])
            arg = (float(xs[k]), float(y))
        hit = np.flatnonzero(xs == y)
        if hit.size:
            diag = max(diag, float(d2[hit[0]]))
    bound = 2.0 * beta
    rep = BoundReport(name="zygmund_seminorm", value=sup, bound=bound,
                      passed=bool(sup <= bound * (1.0 + 1e-6)), tolerance=1e-6,
                      grid=grid.descriptor(), family=family.descriptor())
    rep.extras = {"field": field.field_id, "t": t, "slope_bmo": beta,
                  "argmax_x": arg[0], "argmax_y": arg[1],
                  "x_equals_y_max": diag}
    return rep


def default_increment_samples() -> list[tuple[float, float, float]]:
    """Default (x, y, z) triples for the two-increment ratio check."""
    xs = [0.0, 0.5, -0.5, 2.0, -2.0, 5.0]
    yz = [1e-3, 1e-2, 0.1, 1.0, 3.0, -1e-2, -1.0]
    samples = [(x, y, z) for x in xs for y in yz for z in yz]
    samples += [(0.0, y, 1.0) for y in np.geomspace(1e-3, 10.0, 25)]
    return samples


def increment_ratio_check(
    field: Field,
    t: float,
    samples: Optional[Sequence[tuple[float, float, float]]],
    grid: UniformGrid,
    family: Optional[IntervalFamily] = None,
) -> BoundReport:
    """Two-increment comparison: difference quotients at scales y and z differ
    by at most 5*bmo + (bmo/log 2)*|log(y/z)| in absolute value.

    Reports max(LHS - RHS) over the samples; passes when it stays <= 1e-9.
    """
    if samples is None:
        samples = default_increment_samples()
    samples = list(samples)
    if any(y == 0.0 or z == 0.0 for _, y, z in samples):
        raise ValueError("increments y, z must be nonzero")
    family = family if family is not None else build_family(grid)
    beta = bmo_norm(_slope_samples(field, t, grid), family).value
    worst = -math.inf
    binding = None
    for x, y, z in samples:
        dy = (float(field.eval(t, x + y)) - float(field.eval(t, x))) / y
        dz = (float(field.eval(t, x + z)) - float(field.eval(t, x))) / z
        lhs = abs(dy - dz)
        rhs = 5.0 * beta + (beta / math.log(2.0)) * abs(math.log(abs(y) / abs(z)))
        if lhs - rhs > worst:
            worst = lhs - rhs
            binding = {"x": x, "y": y, "z": z, "lhs": lhs, "rhs": rhs}
    rep = BoundReport(name="increment_ratio", value=worst, bound=0.0,
                      passed=bool(worst <= 1e-9), tolerance=1e-9,
                      grid=grid.descriptor(), family=family.descriptor())
    rep.extras = {"field": field.field_id, "t": t, "slope_bmo": beta, "binding": binding}
    return rep


def growth_bound_check(
    field: Field,
    t: float,
    x_values: Sequence[float],
    h_values: Sequence[float],
    grid: UniformGrid,
    ledger: ConstantsLedger,
    family: Optional[IntervalFamily] = None,
) -> BoundReport:
    """Check the |x|(1 + |log|x||)-type growth and modulus-of-continuity bounds.

        |b(x) - b(0)|   <= C5 * star * |x| (1 + |log|x||)
        |b(x+h) - b(x)| <= C5 * star * log+|x| * |h| (1 + |log|h||)

    with star the slope's measured star norm and log+ s = max(1, log s).
    The report carries the fitted constant (the smallest C5 that would make
    both hold on these samples) alongside the pass/fail under the ledger C5.
    """
    x_values = np.asarray(list(x_values), dtype=float)
    h_values = np.asarray(list(h_values), dtype=float)
    if np.any(x_values == 0.0) or np.any(h_values == 0.0):
        raise ValueError("x and h samples must be nonzero")
    family = family if family is not None else build_family(grid)
    star = star_norm(_slope_samples(field, t, grid), family)
    C5 = ledger.C5

    b0 = float(field.eval(t, 0.0))
    bx = np.asarray(field.eval(t, x_values), dtype=float)
    denom1 = C5 * star * np.abs(x_values) * (1.0 + np.abs(np.log(np.abs(x_values))))
    r1 = np.abs(bx - b0) / denom1
    k1 = int(np.argmax(r1))

    logp = np.maximum(1.0, np.log(np.abs(x_values)))
    r2max, binding2 = -math.inf, None
    for h in h_values:
        bxh = np.asarray(field.eval(t, x_values + h), dtype=float)
        denom2 = C5 * star * logp * abs(h) * (1.0 + abs(math.log(abs(h))))
        r2 = np.abs(bxh - bx) / denom2
        k = int(np.argmax(r2))
        if r2[k] > r2max:
            r2max = float(r2[k])
            binding2 = {"x": float(x_values[k]), "h": float(h)}

    value = max(float(r1[k1]), r2max)
    rep = BoundReport.compare("growth_bound", value, 1.0, tolerance=1e-9,
                              grid=grid.descriptor(), family=family.descriptor(),
                              ledger=ledger.as_dict())
    rep.extras = {
        "field": field.field_id, "t": t, "slope_star": star,
        "pointwise_max": float(r1[k1]), "pointwise_binding_x": float(x_values[k1]),
        "increment_max": r2max, "increment_binding": binding2,
        "fitted_C5": C5 * value,
    }
    return rep
