"""Shared report types: the constants ledger and the bound-comparison record.

Every quantitative check in this package compares a measured left-hand side
against a theorem-shaped right-hand side built from a ConstantsLedger.  The
ledger is explicit and configurable because the underlying estimates only
assert that *some* positive constants work; every emitted BoundReport embeds
the ledger snapshot it was judged against, so reports are reproducible and
re-judgeable under different constants.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Optional

__all__ = ["ConstantsLedger", "BoundReport", "solve_slab_increment", "round_sig"]


def solve_slab_increment(C3: float, C4: float, epsilon0: float, tol: float = 1e-12) -> float:
    """Solve C3 * d * exp(C3*C4*d) = epsilon0/2 for d by bisection on [1e-12, 10]."""
    target = epsilon0 / 2.0

    def g(d: float) -> float:
        return C3 * d * math.exp(C3 * C4 * d) - target

    lo, hi = 1e-12, 10.0
    if g(lo) > 0.0 or g(hi) < 0.0:
        raise ValueError("slab-increment equation has no root in [1e-12, 10]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ConstantsLedger:
    """Positive constants used on the right-hand sides of every bound check.

    Defaults: C3=8, C4=4, C1=C6=2*C3, c=C7=C3*C4, C2=C3, C5=2, tau=1,
    alpha=0.3, beta=4, jn_c1=sqrt(2), jn_c2=1/2, epsilon0=min(1, jn_c2/2).
    delta0 is solved from C3*d*exp(C3*C4*d) = epsilon0/2 when not supplied.
    """

    C1: float = 16.0
    C2: float = 8.0
    C3: float = 8.0
    C4: float = 4.0
    C5: float = 2.0
    C6: float = 16.0
    C7: float = 32.0
    c: float = 32.0
    tau: float = 1.0
    epsilon0: float = 0.25
    alpha: float = 0.3
    beta: float = 4.0
    jn_c1: float = math.sqrt(2.0)
    jn_c2: float = 0.5
    delta0: Optional[float] = None

    def __post_init__(self):
        for name in ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "c", "tau", "jn_c1", "jn_c2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"ledger entry {name} must be finite and positive, got {v}")
        if not (0.0 < self.epsilon0 <= 1.0):
            raise ValueError(f"epsilon0 must lie in (0, 1], got {self.epsilon0}")
        if not (0.0 < self.alpha < 1.0 < self.beta):
            raise ValueError(f"need 0 < alpha < 1 < beta, got alpha={self.alpha}, beta={self.beta}")
        if self.delta0 is None:
            object.__setattr__(
                self, "delta0", solve_slab_increment(self.C3, self.C4, self.epsilon0)
            )
        resid = self.C3 * self.delta0 * math.exp(self.C3 * self.C4 * self.delta0) - self.epsilon0 / 2.0
        if abs(resid) > 1e-10:
            raise ValueError(
                f"delta0={self.delta0} violates its defining equation (residual {resid:.3e})"
            )

    def replace(self, **kwargs) -> "ConstantsLedger":
        current = dataclasses.asdict(self)
        if any(k in kwargs for k in ("C3", "C4", "epsilon0")) and "delta0" not in kwargs:
            current["delta0"] = None
        current.update(kwargs)
        return ConstantsLedger(**current)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def round_sig(obj, digits: int = 12):
    """Recursively round floats to `digits` significant decimal digits."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return obj
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(v, digits) for v in obj]
    return obj


@dataclass
class BoundReport:
    """Measured value vs theorem bound, with everything needed to re-check it.

    ``passed`` is defined as measured <= bound * (1 + tolerance) whenever the
    check ran; checks that are skipped by contract (constant input, oscillation
    too large for the small-norm hypothesis, ...) set ``outcome`` accordingly
    and leave ``passed`` true so suite aggregation is unaffected.
    """

    name: str
    value: float
    bound: float
    passed: bool
    tolerance: float = 0.0
    outcome: str = "ok"
    argmax: Optional[dict] = None
    grid: Optional[dict] = None
    family: Optional[dict] = None
    ledger: Optional[dict] = None
    extras: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        if self.bound == 0.0:
            return math.inf if self.value > 0.0 else 0.0
        return self.value / self.bound

    @classmethod
    def compare(cls, name: str, value: float, bound: float, tolerance: float = 0.0, **kwargs) -> "BoundReport":
        passed = bool(value <= bound * (1.0 + tolerance) + (tolerance if bound == 0.0 else 0.0))
        return cls(name=name, value=float(value), bound=float(bound),
                   passed=passed, tolerance=tolerance, **kwargs)

    def to_json(self) -> dict:
        out = {
            "functional": self.name,
            "value": self.value,
            "bound": self.bound,
            "ratio": self.ratio,
            "pass": self.passed,
            "tolerance": self.tolerance,
            "outcome": self.outcome,
        }
        if self.argmax is not None:
            out["argmax"] = self.argmax
        if self.grid is not None:
            out["grid"] = self.grid
        if self.family is not None:
            out["family"] = self.family
        if self.ledger is not None:
            out["ledger"] = self.ledger
        if self.extras:
            out["extras"] = self.extras
        return round_sig(out)

    def __str__(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        if self.outcome != "ok":
            tag = self.outcome.upper()
        return f"[{tag}] {self.name}: value={self.value:.6g} bound={self.bound:.6g}"


def reports_to_json(reports: list[BoundReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2)
