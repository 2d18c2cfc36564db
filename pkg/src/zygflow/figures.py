"""Figure rendering for the report paths.

Every CLI command that writes delimited output also renders a PNG next to it:
flow runs get the map and its log-derivative per stored time, estimator runs
get the samples with the maximizing interval shaded, and verification suites
get a measured/bound ratio chart.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .flow import FlowResult
from .grids import SampledFunction
from .report import BoundReport
from .weights import WeightEstimate

__all__ = ["flow_figure", "estimate_figure", "verify_figure", "transport_figure"]

_RC = {
    "figure.figsize": (7.0, 4.6),
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
}


def _save(fig, path) -> None:
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def flow_figure(fr: FlowResult, path) -> None:
    """Flow map and log-derivative against x, one curve per stored time."""
    with plt.rc_context(_RC):
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 6.0))
        for j, t in enumerate(fr.times):
            ax1.plot(fr.x_grid, fr.phi[j], lw=1.0, label=f"t={t:g}")
            ax2.plot(fr.x_grid, fr.logD[j], lw=1.0)
        ax1.set_ylabel("phi(t, x)")
        ax1.legend(loc="best", fontsize=8)
        ax1.set_title(fr.field_id)
        ax2.set_ylabel("log|dx phi|")
        ax2.set_xlabel("x")
        _save(fig, path)


def estimate_figure(f: SampledFunction, est: WeightEstimate, path) -> None:
    """Samples with the maximizing interval of the swept functional shaded."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        x = f.grid.nodes
        ax.plot(x, f.values, lw=0.8, color="tab:blue")
        arg = est.argmax_descriptor()
        ax.axvspan(arg["x_left"], arg["x_right"], color="tab:orange", alpha=0.25,
                   label=f"argmax [{arg['x_left']:.3g}, {arg['x_right']:.3g}]")
        ax.set_title(f"{est.functional} = {est.value:.6g}")
        ax.set_xlabel("x")
        ax.set_ylabel("samples")
        ax.legend(loc="best", fontsize=8)
        _save(fig, path)


def verify_figure(reports: list[BoundReport], path) -> None:
    """Measured/bound ratios per report, colored by outcome."""
    rows = [r for r in reports if r.outcome == "ok"]
    if not rows:
        rows = reports
    names = [r.name for r in rows]
    ratios = []
    for r in rows:
        ratio = r.ratio
        if not math.isfinite(ratio) or ratio <= 0.0:
            ratio = 1e-12 if r.passed else 10.0
        ratios.append(ratio)
    colors = ["tab:green" if r.passed else "tab:red" for r in rows]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7.0, 0.4 * len(rows) + 1.6))
        ypos = np.arange(len(rows))
        ax.barh(ypos, ratios, color=colors, alpha=0.8)
        ax.axvline(1.0, color="k", lw=1.0)
        ax.set_yticks(ypos, names, fontsize=7)
        ax.set_xscale("log")
        ax.set_xlabel("measured / bound (1 = at the bound)")
        ax.invert_yaxis()
        _save(fig, path)


def transport_figure(tr, path) -> None:
    """Transported profiles per stored time plus the oscillation growth."""
    with plt.rc_context(_RC):
        fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 6.0))
        for j, t in enumerate(tr.times):
            ax1.plot(tr.grid.nodes, tr.u[j], lw=0.9, label=f"t={t:g}")
        ax1.set_ylabel("u(t, x)")
        ax1.set_xlabel("x")
        ax1.legend(loc="best", fontsize=8)
        ax1.set_title(f"{tr.field_id}, datum {tr.u0_id}")
        ax2.plot(tr.times, tr.bmo, "o-", lw=1.0)
        ax2.set_xlabel("t")
        ax2.set_ylabel("bmo(u(t, .))")
        _save(fig, path)
