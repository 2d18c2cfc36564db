"""Uniform staggered grids, sampled functions, and interval families.

Every estimator in this package is a finite maximum of a per-interval
functional.  This module provides the substrate: an origin-staggered uniform
grid on [-L, L] (no node ever sits at x = 0, so log|x|-type integrands are
always evaluable), prefix-sum accelerated interval averages, and the three
interval-family strategies the estimators sweep over:

    dyadic     aligned power-of-two blocks
    sliding    every power-of-two length at every offset  (default)
    exhaustive every admissible (i, j) pair               (oracle use; O(n^2))

Intervals are half-open index pairs (i, j) with 0 <= i < j <= n, covering the
physical span [-L + i*h, -L + j*h].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

__all__ = [
    "UniformGrid",
    "SampledFunction",
    "IntervalFamily",
    "make_grid",
    "interval_mean",
    "build_family",
    "write_csv",
    "read_csv",
]

STRATEGIES = ("dyadic", "sliding", "exhaustive")


@dataclass(frozen=True)
class UniformGrid:
    """Origin-staggered uniform grid on [-L, L] with nodes x_i = -L + (i+1/2)h."""

    half_width: float
    count: int

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.count

    @property
    def nodes(self) -> np.ndarray:
        h = self.spacing
        return -self.half_width + (np.arange(self.count) + 0.5) * h

    def span_indices(self, a: float, b: float) -> tuple[int, int]:
        """Half-open index range (i, j) of the nodes strictly inside (a, b)."""
        x = self.nodes
        i = int(np.searchsorted(x, a, side="right"))
        j = int(np.searchsorted(x, b, side="left"))
        if j <= i:
            raise ValueError(f"no grid nodes inside ({a}, {b})")
        return i, j

    def descriptor(self) -> dict:
        return {"L": self.half_width, "n": self.count}


def make_grid(L: float, n: int) -> UniformGrid:
    """Build a staggered grid over [-L, L] with n nodes.

    Requires n even and >= 4 so that the grid is symmetric about the origin
    and min |x_i| = h/2 > 0.
    """
    if not isinstance(n, (int, np.integer)):
        raise TypeError(f"node count must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < 4:
        raise ValueError(f"node count must be >= 4, got {n}")
    if n % 2 != 0:
        raise ValueError(f"node count must be even, got {n}")
    L = float(L)
    if not np.isfinite(L) or L <= 0.0:
        raise ValueError(f"half-width must be finite and positive, got {L}")
    return UniformGrid(half_width=L, count=n)


class SampledFunction:
    """Real samples on a uniform grid with a prefix-sum table.

    ``prefix[j] - prefix[i]`` is the sum of ``values[i:j]``, so interval means
    cost O(1).  Values must be finite; the constructor rejects NaN/Inf.
    """

    __slots__ = ("grid", "values", "prefix")

    def __init__(self, grid: UniformGrid, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (grid.count,):
            raise ValueError(
                f"expected {grid.count} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise ValueError(f"non-finite sample at node {bad} (x={grid.nodes[bad]:g})")
        self.grid = grid
        self.values = values
        self.prefix = np.concatenate(([0.0], np.cumsum(values)))

    @classmethod
    def from_callable(cls, grid: UniformGrid, fn: Callable[[np.ndarray], np.ndarray]) -> "SampledFunction":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=np.float64))

    def __len__(self) -> int:
        return self.grid.count

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "SampledFunction":
        return SampledFunction(self.grid, fn(self.values))


def interval_mean(f: SampledFunction, i: int, j: int) -> float:
    """Average of f over the index interval [i, j), in O(1) via prefix sums."""
    n = f.grid.count
    if not (0 <= i < j <= n):
        raise IndexError(f"interval ({i}, {j}) out of range for n={n}")
    return float((f.prefix[j] - f.prefix[i]) / (j - i))


def _pow2_lengths(n: int, min_length: int) -> list[int]:
    m = 1
    while m < min_length:
        m *= 2
    out = []
    while m <= n:
        out.append(m)
        m *= 2
    return out


@dataclass(frozen=True)
class IntervalFamily:
    """A finite family of index intervals on one grid, grouped by length.

    ``groups`` maps interval length m to the ascending array of admissible
    left offsets.  ``intervals`` materializes the lexicographically sorted
    (i, j) list; avoid it for large exhaustive families.
    """

    n: int
    strategy: str
    min_length: int
    groups: dict[int, np.ndarray] = field(repr=False)

    def __len__(self) -> int:
        return sum(len(o) for o in self.groups.values())

    def iter_groups(self) -> Iterator[tuple[int, np.ndarray]]:
        for m in sorted(self.groups):
            yield m, self.groups[m]

    @property
    def intervals(self) -> list[tuple[int, int]]:
        pairs = [
            (int(o), int(o) + m)
            for m, offsets in self.groups.items()
            for o in offsets
        ]
        pairs.sort()
        return pairs

    def descriptor(self) -> dict:
        return {
            "strategy": self.strategy,
            "min_length": self.min_length,
            "size": len(self),
        }


def build_family(grid: UniformGrid, strategy: str = "sliding", min_length: int = 4) -> IntervalFamily:
    """Enumerate the interval family for one strategy.

    dyadic     lengths 2^k >= min_length at offsets 0, m, 2m, ...
    sliding    lengths 2^k >= min_length at every offset (superset of dyadic)
    exhaustive every length in [min_length, n] at every offset
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if min_length < 2:
        raise ValueError(f"min_length must be >= 2, got {min_length}")
    n = grid.count
    if min_length > n:
        raise ValueError(f"min_length {min_length} exceeds grid size {n}")

    groups: dict[int, np.ndarray] = {}
    if strategy == "exhaustive":
        for m in range(min_length, n + 1):
            groups[m] = np.arange(0, n - m + 1, dtype=np.int64)
    elif strategy == "sliding":
        for m in _pow2_lengths(n, min_length):
            groups[m] = np.arange(0, n - m + 1, dtype=np.int64)
    else:  # dyadic
        for m in _pow2_lengths(n, min_length):
            groups[m] = np.arange(0, n - m + 1, m, dtype=np.int64)
    return IntervalFamily(n=n, strategy=strategy, min_length=min_length, groups=groups)


def write_csv(f: SampledFunction, path) -> None:
    """Write samples as ``x,value`` rows with 13 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        for x, v in zip(f.grid.nodes, f.values):
            w.writerow([f"{x:.12e}", f"{v:.12e}"])


def read_csv(path) -> SampledFunction:
    """Read an ``x,value`` CSV back into a SampledFunction.

    The x column must form a staggered uniform grid (as produced by
    ``write_csv``); deviations beyond 1e-9 of one spacing are rejected.
    """
    xs: list[float] = []
    vs: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip().lower() for c in header[:2]] != ["x", "value"]:
            raise ValueError(f"{path}: expected header 'x,value'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{lineno}: expected two columns")
            try:
                xs.append(float(row[0]))
                vs.append(float(row[1]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    n = len(xs)
    if n < 4:
        raise ValueError(f"{path}: need at least 4 rows, got {n}")
    x = np.asarray(xs)
    h = x[1] - x[0]
    if h <= 0:
        raise ValueError(f"{path}: x column is not increasing")
    L = (x[-1] + h / 2.0 - x[0] + h / 2.0) / 2.0
    grid = make_grid(L, n)
    if np.max(np.abs(grid.nodes - x)) > 1e-9 * h:
        raise ValueError(f"{path}: x column is not a staggered uniform grid")
    return SampledFunction(grid, np.asarray(vs))
