"""Scalar quadrature helpers: adaptive Simpson and composite Gauss-Legendre."""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["adaptive_simpson", "gl_panel_rule"]


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width * (fa + 4.0 * fm + fb) / 6.0


def _adapt(fn, a, fa, m, fm, b, fb, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = fn(lm)
    frm = fn(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (
        _adapt(fn, a, fa, lm, flm, m, fm, left, tol / 2.0, depth - 1)
        + _adapt(fn, m, fm, rm, frm, b, fb, right, tol / 2.0, depth - 1)
    )


def adaptive_simpson(fn: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, max_depth: int = 48) -> float:
    """Adaptive Simpson integral of a scalar function over [a, b].

    Absolute tolerance; the recursion deepens only where the local Richardson
    estimate exceeds its share of the budget, so kinks and integrable
    singularities cost extra subdivisions only nearby.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = _simpson(fa, fm, fb, b - a)
    return sign * _adapt(fn, a, fa, m, fm, b, fb, whole, tol, max_depth)


def gl_panel_rule(panels: int, order: int, a: float = -1.0, b: float = 1.0):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        xs.append(mid + half * base_x)
        ws.append(half * base_w)
    return np.concatenate(xs), np.concatenate(ws)
