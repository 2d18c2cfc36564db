"""Verification suites: each function runs one acceptance check end to end.

The suites drive the full pipeline (fields -> flows -> estimators -> bound
reports) at pinned resolutions and tolerances and return BoundReports; the
CLI ``verify`` command and the acceptance tests both consume them.

Two checks in the weight-oracle suite compare against origin-centered
closed forms (2/e for the oscillation of log|x|, e^a/(a+1) for the
power-weight mean ratios).  Those closed forms are exact on symmetric
intervals but are NOT the sup over all intervals: asymmetric straddling
intervals (-rA, A) beat them (max_r of the log|x| oscillation is
0.9305856... at r ~ 7.28, and the |x| mean-ratio sup is 1.5477572... at
r ~ 6.79).  The estimators and the exhaustive oracle agree with each other
and with those asymmetric suprema, so the origin-centered brackets fail and
are reported as failing rather than being loosened.
"""

from __future__ import annotations

import math
import time
from typing import Optional

import numpy as np

from .bounds import iterated_bound, sharpness_report, time_partition
from .fields import (
    FieldNorms,
    PiecewiseConstantProfile,
    SeparableField,
    XLogAbs,
    growth_bound_check,
    increment_ratio_check,
    mollify,
    parse_field,
    truncate,
    zygmund_seminorm,
)
from .flow import (
    SolverConfig,
    backward_flow,
    check_inverse,
    check_semigroup,
    density_formula_check,
    derivative_bound_check,
    forward_flow,
)
from .grids import SampledFunction, build_family, make_grid
from .report import BoundReport, ConstantsLedger
from .transport import characteristic_residual, solution_bmo_growth, transport_solve
from .weights import (
    ainfty_constant,
    ap_constant,
    bmo_norm,
    exp_a2_check,
    exp_small_bmo_ainfty,
    jn_tail,
    log_weight_bmo_check,
    orlicz_exp_norm,
    reverse_holder_check,
)

__all__ = ["SUITES", "run_suite", "suite_names"]

# exhaustive-family oracle values, frozen from tests/oracles.py runs
# (vshape_exhaustive_bmo and the library exhaustive sweep at n = 2^12)
EXHAUSTIVE_BMO_LOGABS_4096_L16 = 0.930213824354059
EXHAUSTIVE_AINFTY_4096_L8 = {0.25: 1.039290684467095, 0.5: 1.1449690461461666,
                             1.0: 1.5473008487903712}
# continuum suprema over asymmetric straddling intervals (-rA, A), from the
# closed-form quadrature analysis; origin-centered values in parentheses
LOGABS_BMO_SUP = 0.9305856254502322          # centered: 2/e = 0.7357588823
POWER_AINFTY_SUP = {0.25: 1.0393610049141613,  # centered: 1.0272203334
                    0.5: 1.1451394971725182,   # centered: 1.0991475138
                    1.0: 1.5477572459901874}   # centered: e/2 = 1.3591409142


def _xlog() -> SeparableField:
    return SeparableField(XLogAbs(1.0))


def _logspaced_sweep(n_half: int, lo: float, hi: float) -> np.ndarray:
    return np.concatenate([-np.geomspace(hi, lo, n_half), np.geomspace(lo, hi, n_half)])


# ---------------------------------------------------------------------- 1

def sharp_flow_report() -> BoundReport:
    """Flow of x log|x| against sign(x)|x|^{e^t} on +-[1e-3, 10], 512 points."""
    field = _xlog()
    x = _logspaced_sweep(256, 1e-3, 10.0)
    t_values = [0.25, 0.5, 1.0, 2.0]
    t0 = time.perf_counter()
    fr = forward_flow(field, 0.0, [0.0] + t_values, x)
    runtime = time.perf_counter() - t0
    worst = 0.0
    for j, t in enumerate(t_values, start=1):
        exact = np.sign(x) * np.abs(x) ** math.exp(t)
        worst = max(worst, float(np.max(np.abs(fr.phi[j] - exact) / np.abs(exact))))
    rep = BoundReport(name="sharp_example_flow", value=worst, bound=1e-4,
                      passed=bool(worst <= 1e-4 and runtime < 30.0))
    rep.extras = {"runtime_s": runtime, "points": len(x), "t_values": t_values,
                  "stats": fr.stats}
    return rep


# ---------------------------------------------------------------------- 2

def density_reports() -> list[BoundReport]:
    """Log-derivative vs closed form on the sweep, and the two cross-checks."""
    field = _xlog()
    x = _logspaced_sweep(256, 1e-3, 10.0)
    t_values = [0.25, 0.5, 1.0, 2.0]
    fr = forward_flow(field, 0.0, [0.0] + t_values, x)
    worst = 0.0
    for j, t in enumerate(t_values, start=1):
        exact = t + (math.exp(t) - 1.0) * np.log(np.abs(x))
        worst = max(worst, float(np.max(np.abs(fr.logD[j] - exact))))
    rep1 = BoundReport(name="logderiv_closed_form", value=worst, bound=1e-3,
                       passed=bool(worst <= 1e-3))
    rep1.extras = {"points": len(x), "t_values": t_values}

    grid = make_grid(10.0, 8192)
    lattice = np.linspace(0.0, 2.0, 129)
    fr2 = forward_flow(field, 0.0, lattice, grid)
    mask = np.abs(grid.nodes) >= 0.1
    rep2 = density_formula_check(fr2, field, tol_quadrature=1e-3, x_mask=mask)
    return [rep1, rep2]


# ---------------------------------------------------------------------- 3

def equivariance_report(seed: int = 20240) -> BoundReport:
    """bmo(a + c f) = |c| bmo(f) on random fixtures, to 1e-12 relative."""
    rng = np.random.default_rng(seed)
    grid = make_grid(8.0, 2 ** 10)
    family = build_family(grid)
    worst = 0.0
    for _ in range(20):
        f = SampledFunction(grid, rng.normal(scale=rng.uniform(0.2, 3.0), size=grid.count))
        a = float(rng.uniform(-4.0, 4.0))
        c = float(rng.uniform(0.25, 4.0) * rng.choice([-1.0, 1.0]))
        lhs = bmo_norm(f.map(lambda v: a + c * v), family).value
        rhs = abs(c) * bmo_norm(f, family).value
        worst = max(worst, abs(lhs - rhs) / rhs)
    rep = BoundReport(name="estimator_equivariance", value=worst, bound=1e-12,
                      passed=bool(worst <= 1e-12))
    rep.extras = {"fixtures": 20, "seed": seed}
    return rep


def sharpness_suite_report() -> BoundReport:
    grid = make_grid(16.0, 2 ** 11)
    return sharpness_report([0.1, 0.25, 0.5, 1.0, 1.5, 2.0], grid)


# ---------------------------------------------------------------------- 4

def ainfty_oracle_reports() -> list[BoundReport]:
    """Power-weight mean-ratio estimates vs the origin-centered closed form.

    The closed form e^a/(a+1) holds on symmetric intervals only; see the
    module docstring.  The exhaustive-oracle agreement part is informative
    either way and is asserted at 1%.
    """
    grid = make_grid(8.0, 2 ** 14)
    family = build_family(grid)
    out = []
    for a in (0.25, 0.5, 1.0):
        w = SampledFunction(grid, np.abs(grid.nodes) ** a)
        est = ainfty_constant(w, family).value
        centered = math.exp(a) / (a + 1.0)
        dev = abs(est - centered) / centered
        oracle = EXHAUSTIVE_AINFTY_4096_L8[a]
        agree = abs(est - oracle) / oracle
        rep = BoundReport(name=f"ainfty_power_a={a:g}", value=dev, bound=0.02,
                          passed=bool(dev <= 0.02 and agree <= 0.01),
                          grid=grid.descriptor(), family=family.descriptor())
        rep.extras = {"estimate": est, "centered_reference": centered,
                      "exhaustive_oracle_4096": oracle, "oracle_agreement": agree,
                      "asymmetric_sup": POWER_AINFTY_SUP[a]}
        out.append(rep)
    return out


# ---------------------------------------------------------------------- 5

def bmo_logabs_report() -> BoundReport:
    """Oscillation norm of log|x| samples vs bracket, doubling and oracle.

    The [0.69, 0.736] bracket encodes the origin-centered value 2/e; the
    sliding estimator and the exhaustive oracle instead settle on the
    asymmetric sup 0.93058... so the bracket part fails (see module doc).
    """
    grid = make_grid(16.0, 2 ** 14)
    family = build_family(grid)
    est = bmo_norm(SampledFunction(grid, np.log(np.abs(grid.nodes))), family).value
    grid2 = make_grid(16.0, 2 ** 15)
    est2 = bmo_norm(SampledFunction(grid2, np.log(np.abs(grid2.nodes))),
                    build_family(grid2)).value
    bracket_ok = 0.69 <= est <= 0.736
    doubling_ok = est2 >= est - 1e-9
    oracle = EXHAUSTIVE_BMO_LOGABS_4096_L16
    agree = abs(est - oracle) / oracle
    oracle_ok = agree <= 0.01
    rep = BoundReport(name="bmo_logabs", value=est, bound=0.736,
                      passed=bool(bracket_ok and doubling_ok and oracle_ok),
                      grid=grid.descriptor(), family=family.descriptor())
    rep.extras = {
        "bracket": [0.69, 0.736], "bracket_ok": bracket_ok,
        "doubled_n_value": est2, "doubling_ok": doubling_ok,
        "exhaustive_oracle_4096": oracle, "oracle_agreement": agree,
        "oracle_ok": oracle_ok,
        "centered_reference": 2.0 / math.e, "asymmetric_sup": LOGABS_BMO_SUP,
    }
    return rep


# ---------------------------------------------------------------------- 6

def jn_tail_report() -> BoundReport:
    """Superlevel measures of log|x| on (-1, 1) vs 2 e^{-1-lambda}."""
    grid = make_grid(16.0, 2 ** 16)
    f = SampledFunction(grid, np.log(np.abs(grid.nodes)))
    i, j = grid.span_indices(-1.0, 1.0)
    lambdas = [1.0, 1.5, 2.0, 3.0, 4.0]
    tail = jn_tail(f, i, j, lambdas)
    worst = 0.0
    rows = []
    for lam, measure in tail.points:
        exact = 2.0 * math.exp(-1.0 - lam)
        dev = abs(measure - exact) / exact
        worst = max(worst, dev)
        rows.append({"lambda": lam, "measure": measure, "exact": exact, "rel_dev": dev})
    rep = BoundReport(name="jn_tail_logabs", value=worst, bound=0.03,
                      passed=bool(worst <= 0.03), grid=grid.descriptor())
    rep.extras = {"rows": rows, "fitted_rate": tail.rate}
    return rep


# ---------------------------------------------------------------------- 7

def lemma_suite_reports(ledger: Optional[ConstantsLedger] = None) -> list[BoundReport]:
    """Weight-lemma checks over the fixture set, plus the A2 divergence probe."""
    ledger = ledger or ConstantsLedger()
    grid = make_grid(8.0, 2 ** 10)
    family = build_family(grid)
    x = np.abs(grid.nodes)
    beta = bmo_norm(SampledFunction(grid, np.log(x)), family).value
    s_edge = 0.3 / beta
    fixtures = [("const_2", np.full(grid.count, 2.0))]
    fixtures += [(f"|x|^{a:g}", x ** a) for a in (0.25, 0.5, 1.0, 3.0)]
    fixtures += [(f"|x|^{s:+.4f}", x ** s) for s in (s_edge, -s_edge)]

    out = []
    for name, w_vals in fixtures:
        w = SampledFunction(grid, w_vals)
        r = log_weight_bmo_check(w, family)
        r.name = f"log_weight_bmo[{name}]"
        out.append(r)
        r = reverse_holder_check(w, family, ledger)
        r.name = f"reverse_holder[{name}]"
        out.append(r)
        logw = w.map(np.log)
        r = exp_a2_check(logw, 7, family, ledger)
        r.name = f"exp_a2[{name}]"
        out.append(r)
        r = exp_small_bmo_ainfty(logw, family, ledger)
        r.name = f"exp_small_bmo[{name}]"
        out.append(r)

    # criticality probe: |x|^{-1} mean ratios must grow without bound in n
    values = []
    for n in (2 ** 10, 2 ** 12, 2 ** 14):
        g = make_grid(8.0, n)
        w = SampledFunction(g, np.abs(g.nodes) ** -1.0)
        values.append(ap_constant(w, 2.0, build_family(g)).value)
    growing = values[0] < values[1] < values[2]
    probe = BoundReport(name="a2_divergence_probe", value=float(values[-1]),
                        bound=math.inf, passed=bool(growing),
                        ledger=ledger.as_dict())
    probe.extras = {"n": [2 ** 10, 2 ** 12, 2 ** 14], "a2_values": values,
                    "monotone_growth": growing}
    out.append(probe)
    return out


# ---------------------------------------------------------------------- 8

def zygmund_suite_reports(ledger: Optional[ConstantsLedger] = None) -> list[BoundReport]:
    """Second-difference seminorm for x log|x| plus growth/increment checks."""
    ledger = ledger or ConstantsLedger()
    grid = make_grid(16.0, 2 ** 12)
    field = _xlog()
    half = grid.count // 2
    y_values = grid.nodes[half + 7: half + grid.count // 2: 48]
    rep = zygmund_seminorm(field, 0.0, grid, y_values)
    ray = rep.extras.get("x_equals_y_max", -math.inf)
    ray_ok = ray >= 2.0 * math.log(2.0) - 1e-3
    rep.passed = bool(rep.passed and ray_ok)
    rep.extras["ray_target"] = 2.0 * math.log(2.0)
    rep.extras["ray_ok"] = ray_ok
    out = [rep]

    x_samples = _logspaced_sweep(12, 1e-3, 10.0)
    h_samples = [2.0 ** -k for k in range(0, 21, 4)] + [-0.5, 3.0]
    for fid in ("xlogabs:sigma=1", "affine:a0=0,a1=2", "sine:amp=1,freq=1",
                "powerlog:exponent=1,cutoff=0.1"):
        f = parse_field(fid)
        r = increment_ratio_check(f, 0.0, None, grid)
        r.name = f"increment_ratio[{fid}]"
        out.append(r)
        r = growth_bound_check(f, 0.0, x_samples, h_samples, grid, ledger)
        r.name = f"growth_bound[{fid}]"
        out.append(r)
    return out


# ---------------------------------------------------------------------- 9

def flow_structure_reports() -> list[BoundReport]:
    """Inverse/semigroup round trips and slope envelopes on the fixture fields."""
    cfg = SolverConfig(rtol=1e-10, atol=1e-12)
    xlog = _xlog()
    fixtures = [
        ("affine", parse_field("affine:a0=1,a1=0.5"), np.linspace(-10.0, 10.0, 41)),
        ("sine", parse_field("sine:amp=1,freq=1"), np.linspace(-10.0, 10.0, 41)),
        ("xlogabs", xlog, _logspaced_sweep(20, 0.01, 10.0)),
        ("trunc_k16", truncate(xlog, 16.0), _logspaced_sweep(20, 0.01, 10.0)),
    ]
    out = []
    for name, field, xs in fixtures:
        fwd = forward_flow(field, 0.0, np.array([0.0, 0.5, 1.0]), xs, cfg)
        bwd = backward_flow(field, 1.0, 0.0, fwd.phi[-1], cfg)
        inv = check_inverse(fwd, bwd)
        inv.name = f"inverse[{name}]"
        inv.passed = bool(inv.passed and inv.extras["max_err"] <= 1e-6)
        out.append(inv)
        sg = check_semigroup(field, 0.0, 0.4, 1.0, xs, cfg)
        sg.name = f"semigroup[{name}]"
        sg.passed = bool(sg.passed and sg.extras["max_err"] <= 1e-6)
        out.append(sg)
        if name != "xlogabs":
            norms = FieldNorms(field, make_grid(16.0, 2 ** 10))
            env = derivative_bound_check(fwd, norms)
            env.name = f"slope_envelope[{name}]"
            out.append(env)
    return out


# --------------------------------------------------------------------- 10

def convergence_reports() -> list[BoundReport]:
    """Clamped and smoothed companions' flows converge to the raw flow."""
    cfg = SolverConfig(rtol=1e-10, atol=1e-12)
    field = _xlog()
    xs = _logspaced_sweep(21, 1e-3, 10.0)
    raw = forward_flow(field, 0.0, [0.0, 1.0], xs, cfg)
    devs = []
    for k in (4.0, 8.0, 16.0, 32.0):
        fk = forward_flow(truncate(field, k), 0.0, [0.0, 1.0], xs, cfg)
        devs.append(float(np.max(np.abs(fk.phi[-1] - raw.phi[-1]))))
    monotone = all(devs[i + 1] < devs[i] for i in range(len(devs) - 1))
    rep1 = BoundReport(name="truncation_flow_convergence", value=devs[-1], bound=1e-5,
                       passed=bool(monotone and devs[-1] <= 1e-5))
    rep1.extras = {"k": [4, 8, 16, 32], "max_dev": devs, "monotone": monotone}

    xs2 = _logspaced_sweep(20, 0.05, 10.0)
    raw2 = forward_flow(field, 0.0, [0.0, 0.5], xs2, SolverConfig())
    devs2 = []
    for eps in (0.1, 0.02, 0.004):
        fm = forward_flow(mollify(field, eps), 0.0, [0.0, 0.5], xs2, SolverConfig())
        devs2.append(float(np.max(np.abs(fm.phi[-1] - raw2.phi[-1]))))
    monotone2 = all(devs2[i + 1] < devs2[i] for i in range(len(devs2) - 1))
    rep2 = BoundReport(name="mollified_flow_convergence", value=devs2[-1], bound=devs2[0],
                       passed=bool(monotone2))
    rep2.extras = {"eps": [0.1, 0.02, 0.004], "max_dev": devs2, "monotone": monotone2}
    return [rep1, rep2]


# --------------------------------------------------------------------- 11

def transport_suite_reports(ledger: Optional[ConstantsLedger] = None) -> list[BoundReport]:
    """Characteristic constancy across the fixture matrix, plus growth."""
    ledger = ledger or ConstantsLedger()
    grid = make_grid(8.0, 2 ** 11)
    times = [0.0, 0.25, 0.5, 1.0]
    seeds = [-2.0, -0.5, 0.5, 2.0]
    data = {
        "const_5": lambda x: np.full_like(np.asarray(x, dtype=float), 5.0),
        "sin": np.sin,
        "logabs": lambda x: np.log(np.abs(x)),
    }
    fields = {
        "const_b": parse_field("affine:a0=1,a1=0"),
        "sine": parse_field("sine:amp=1,freq=1"),
        "xlogabs": _xlog(),
    }
    tight = SolverConfig(rtol=1e-11, atol=1e-13, max_step=0.02)
    out = []
    keep = None
    for fname, field in fields.items():
        cfg = tight if fname == "xlogabs" else SolverConfig()
        for uname, u0 in data.items():
            tr = transport_solve(field, u0, times, grid, cfg, u0_id=uname)
            r = characteristic_residual(tr, field, seeds, cfg)
            r.name = f"characteristic[{fname},{uname}]"
            out.append(r)
            if fname == "xlogabs" and uname == "logabs":
                keep = tr

    beta = keep.bmo[0]
    worst = max(abs(keep.bmo[j] - math.exp(t) * beta) / (math.exp(t) * beta)
                for j, t in enumerate(times))
    rep = BoundReport(name="transport_bmo_equivariance", value=float(worst), bound=1e-6,
                      passed=bool(worst <= 1e-6), grid=grid.descriptor())
    rep.extras = {"beta": beta, "bmo_series": keep.bmo}
    out.append(rep)

    norms = FieldNorms(fields["xlogabs"], grid)
    out.append(solution_bmo_growth(keep, norms, ledger))
    return out


# --------------------------------------------------------------------- 12

def partition_reports(ledger: Optional[ConstantsLedger] = None) -> list[BoundReport]:
    """Slab increments, boundary agreement, and the piecewise-profile scan."""
    ledger = ledger or ConstantsLedger()
    grid = make_grid(8.0, 2 ** 10)
    field = _xlog()
    norms = FieldNorms(field, grid)
    T = 1.0
    part = time_partition(norms, ledger, T)
    incr = np.array([norms.B(0.0, part[i + 1]) - norms.B(0.0, part[i])
                     for i in range(len(part) - 1)])
    dev = float(np.max(np.abs(incr[:-1] - ledger.delta0))) if len(incr) > 1 else 0.0
    expected = math.ceil(norms.B(0.0, T) / ledger.delta0) + 1
    rep1 = BoundReport(name="partition_increments", value=dev, bound=1e-8,
                       passed=bool(dev <= 1e-8
                                   and incr[-1] <= ledger.delta0 * (1 + 1e-8)
                                   and len(part) == expected),
                       ledger=ledger.as_dict())
    rep1.extras = {"points": len(part), "expected_points": expected,
                   "last_increment": float(incr[-1])}

    worst = 0.0
    for i in range(1, len(part) - 1):
        ib = iterated_bound(part, norms, ledger, float(part[i]))
        worst = max(worst, abs(ib.power - ib.exponential) / ib.power)
    rep2 = BoundReport(name="iterated_bound_boundaries", value=worst, bound=1e-9,
                       passed=bool(worst <= 1e-9), ledger=ledger.as_dict())
    rep2.extras = {"boundaries_checked": len(part) - 2}

    profile = PiecewiseConstantProfile([0.0, 1 / 3, 2 / 3, 1.0], [2.0, 0.0, 2.0])
    pfield = SeparableField(XLogAbs(1.0), profile)
    pnorms = FieldNorms(pfield, grid)
    ppart = time_partition(pnorms, ledger, T)
    # fine-scan oracle: midpoint sums on cells aligned with the profile breaks
    bmo0 = bmo_norm(SampledFunction(grid, XLogAbs(1.0).slope(grid.nodes)),
                    build_family(grid)).value
    ts = np.linspace(0.0, T, 18001)  # 18000 cells; breaks sit on cell edges
    mids = 0.5 * (ts[1:] + ts[:-1])
    rates = np.array([profile.at(float(t)) for t in mids]) * bmo0
    scan = np.concatenate(([0.0], np.cumsum(rates * np.diff(ts))))
    worst3 = 0.0
    for i in range(1, len(ppart) - 1):
        B_exact = pnorms.B(0.0, float(ppart[i]))
        B_scan = float(np.interp(ppart[i], ts, scan))
        worst3 = max(worst3, abs(B_exact - B_scan))
        worst3 = max(worst3, abs(B_exact - i * ledger.delta0))
    dead_zone = np.count_nonzero((ppart > 1 / 3 + 1e-6) & (ppart < 2 / 3 - 1e-6))
    rep3 = BoundReport(name="partition_piecewise_profile", value=worst3, bound=1e-6,
                       passed=bool(worst3 <= 1e-6 and dead_zone == 0),
                       ledger=ledger.as_dict())
    rep3.extras = {"points": len(ppart), "boundaries_in_zero_span": int(dead_zone)}
    return [rep1, rep2, rep3]


# --------------------------------------------------------------------- 13

def orlicz_reports() -> list[BoundReport]:
    """Gaussian Orlicz norm: constants closed form and quadrature doubling."""
    grid = make_grid(8.0, 2 ** 13)
    worst = 0.0
    for c in (0.1, 1.0, 10.0):
        f = SampledFunction(grid, np.full(grid.count, c))
        lam = orlicz_exp_norm(f)
        exact = c / (2.0 * math.log(2.0))
        worst = max(worst, abs(lam - exact) / exact)
    rep1 = BoundReport(name="orlicz_constants", value=worst, bound=1e-6,
                       passed=bool(worst <= 1e-6), grid=grid.descriptor())

    worst2 = 0.0
    rows = []
    for name, vals in (("abs", np.abs(grid.nodes)),
                       ("xlog_slope", np.log(np.abs(grid.nodes)) + 1.0)):
        f = SampledFunction(grid, vals)
        lam1 = orlicz_exp_norm(f)
        lam2 = orlicz_exp_norm(f, quad_refine=2)
        dev = abs(lam2 - lam1) / lam1
        worst2 = max(worst2, dev)
        rows.append({"fixture": name, "lam": lam1, "lam_refined": lam2, "rel_dev": dev})
    rep2 = BoundReport(name="orlicz_quadrature_doubling", value=worst2, bound=1e-6,
                       passed=bool(worst2 <= 1e-6), grid=grid.descriptor())
    rep2.extras = {"rows": rows}
    return [rep1, rep2]


# ---------------------------------------------------------------------------

SUITES = {
    "sharp-example": (
        lambda: [sharp_flow_report()] + density_reports()
        + [equivariance_report(), sharpness_suite_report()]
        + flow_structure_reports() + convergence_reports()
    ),
    "weights-lemmas": (
        lambda: ainfty_oracle_reports() + [bmo_logabs_report(), jn_tail_report()]
        + lemma_suite_reports() + orlicz_reports()
    ),
    "zygmund": lambda: zygmund_suite_reports(),
    "transport": lambda: transport_suite_reports(),
    "partition": lambda: partition_reports(),
}


def suite_names() -> list[str]:
    return [*SUITES, "all"]


def run_suite(name: str) -> list[BoundReport]:
    """Run a named verification suite and return its reports."""
    if name == "all":
        out: list[BoundReport] = []
        for key in SUITES:
            out.extend(SUITES[key]())
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {suite_names()}")
    return SUITES[name]()
