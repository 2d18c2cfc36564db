"""Flow integration against closed forms and structural checks."""

import math

import numpy as np
import pytest

import zygflow as zf
from zygflow.flow import MonotonicityError, _check_monotone

TIGHT = zf.SolverConfig(rtol=1e-10, atol=1e-12)


def _xlog():
    return zf.parse_field("xlogabs:sigma=1")


def _sweep(n_half, lo, hi):
    return np.concatenate([-np.geomspace(hi, lo, n_half), np.geomspace(lo, hi, n_half)])


class TestForwardFlow:
    def test_constant_field_translation(self):
        f = zf.parse_field("affine:a0=1,a1=0")
        x = np.linspace(-5, 5, 21)
        fr = zf.forward_flow(f, 0.0, [0.0, 0.5, 1.0], x)
        np.testing.assert_allclose(fr.phi[-1], x + 1.0, atol=1e-12)
        np.testing.assert_allclose(fr.logD, 0.0, atol=1e-12)

    def test_identity_rows_exact(self):
        f = _xlog()
        x = _sweep(8, 0.01, 4.0)
        fr = zf.forward_flow(f, 0.0, [0.0, 1.0], x)
        assert np.array_equal(fr.phi[0], x)
        assert np.all(fr.logD[0] == 0.0)

    def test_xlogabs_closed_form_point(self):
        fr = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], np.array([math.e]), TIGHT)
        assert fr.phi[-1][0] == pytest.approx(math.e ** math.e, rel=1e-8)

    def test_xlogabs_logD_point(self):
        t = math.log(2.0)
        fr = zf.forward_flow(_xlog(), 0.0, [0.0, t], np.array([2.0]), TIGHT)
        assert fr.logD[-1][0] == pytest.approx(2.0 * math.log(2.0), abs=1e-9)

    def test_negative_branch_sign(self):
        fr = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], np.array([-2.0, 2.0]), TIGHT)
        assert fr.phi[-1][0] == pytest.approx(-2.0 ** math.e, rel=1e-8)
        assert fr.phi[-1][1] == pytest.approx(2.0 ** math.e, rel=1e-8)

    def test_tolerance_halving_improves(self):
        x = _sweep(16, 1e-3, 10.0)
        exact = np.sign(x) * np.abs(x) ** math.e
        errs = []
        for rtol in (1e-4, 1e-10):
            # uncapped steps so the tolerance actually controls the error
            fr = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], x,
                                 zf.SolverConfig(rtol=rtol, atol=rtol * 1e-2, max_step=1.0))
            errs.append(np.max(np.abs(fr.phi[-1] - exact) / np.abs(exact)))
        assert errs[1] < errs[0]

    def test_monotone_rows(self):
        fr = zf.forward_flow(zf.parse_field("sine:amp=1,freq=1"), 0.0,
                             np.linspace(0, 1, 9), np.linspace(-8, 8, 33))
        for row in fr.phi:
            assert np.all(np.diff(row) > 0)

    def test_monotonicity_hard_failure(self):
        with pytest.raises(MonotonicityError):
            _check_monotone(np.array([[0.0, 1.0], [1.0, 0.5]]), np.array([0.0, 1.0]), "x")

    def test_time_validation(self):
        f = _xlog()
        x = np.array([1.0])
        with pytest.raises(ValueError, match="start"):
            zf.forward_flow(f, 0.0, [0.5, 1.0], x)
        with pytest.raises(ValueError, match="increasing"):
            zf.forward_flow(f, 0.0, [0.0, 1.0, 0.5], x)
        with pytest.raises(ValueError, match="increasing"):
            zf.forward_flow(f, 0.0, [0.0, 1.0], np.array([2.0, 1.0]))

    def test_origin_pin_exact_zero(self):
        fr = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], np.array([-1.0, 0.0, 1.0]))
        assert fr.phi[-1][1] == 0.0
        assert fr.stats["pinned"] == 1
        assert np.isneginf(fr.logD[-1][1])

    def test_generic_path_matches_log_form(self):
        x = _sweep(6, 0.1, 5.0)
        a = zf.forward_flow(_xlog(), 0.0, [0.0, 0.5], x, TIGHT)
        cfg = zf.SolverConfig(rtol=1e-10, atol=1e-12, force_generic=True)
        b = zf.forward_flow(_xlog(), 0.0, [0.0, 0.5], x, cfg)
        np.testing.assert_allclose(a.phi[-1], b.phi[-1], rtol=1e-7)
        np.testing.assert_allclose(a.logD[-1], b.logD[-1], atol=1e-7)

    def test_blowup_reports_solver_error(self):
        cfg = zf.SolverConfig(force_generic=True)
        with pytest.raises(zf.SolverError):
            zf.forward_flow(_xlog(), 0.0, [0.0, 6.0], np.array([1e5]), cfg)

    def test_workers_deterministic(self):
        x = _sweep(10, 0.01, 10.0)
        a = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], x, workers=1)
        b = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], x, workers=3)
        assert np.array_equal(a.phi, b.phi)
        assert np.array_equal(a.logD, b.logD)

    def test_stats_present(self):
        fr = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], np.array([0.5, 2.0]))
        assert fr.stats["steps"] > 0
        assert fr.stats["min_step"] > 0
        assert "rejections" in fr.stats


class TestBackwardFlow:
    def test_constant_field(self):
        f = zf.parse_field("affine:a0=1,a1=0")
        x = np.linspace(-3, 3, 7)
        bwd = zf.backward_flow(f, 1.0, 0.25, x)
        np.testing.assert_allclose(bwd.phi[-1], x - 0.75, atol=1e-12)

    def test_identity_at_start(self):
        x = np.array([0.5, 2.0])
        bwd = zf.backward_flow(_xlog(), 1.0, 0.0, x)
        assert np.array_equal(bwd.phi[0], x)

    def test_xlogabs_inverse_closed_form(self):
        x = _sweep(10, 0.1, 5.0)
        bwd = zf.backward_flow(_xlog(), 1.0, 0.0, x, TIGHT)
        exact = np.sign(x) * np.abs(x) ** math.exp(-1.0)
        np.testing.assert_allclose(bwd.phi[-1], exact, rtol=1e-6)

    def test_time_order_validation(self):
        with pytest.raises(ValueError, match="s <= t"):
            zf.backward_flow(_xlog(), 0.0, 1.0, np.array([1.0]))


class TestInverseSemigroup:
    @pytest.mark.parametrize("fid,xs", [
        ("affine:a0=1,a1=0", np.linspace(-5, 5, 11)),
        ("sine:amp=1,freq=1", np.linspace(-8, 8, 17)),
        ("xlogabs:sigma=1", None),
    ])
    def test_inverse_roundtrip(self, fid, xs):
        if xs is None:
            xs = _sweep(12, 0.01, 10.0)
        f = zf.parse_field(fid)
        fwd = zf.forward_flow(f, 0.0, [0.0, 1.0], xs, TIGHT)
        bwd = zf.backward_flow(f, 1.0, 0.0, fwd.phi[-1], TIGHT)
        rep = zf.check_inverse(fwd, bwd)
        assert rep.passed
        assert rep.extras["max_err"] <= 1e-6

    def test_constant_field_roundtrip_tiny(self):
        f = zf.parse_field("affine:a0=1,a1=0")
        xs = np.linspace(-3, 3, 7)
        fwd = zf.forward_flow(f, 0.0, [0.0, 1.0], xs, TIGHT)
        bwd = zf.backward_flow(f, 1.0, 0.0, fwd.phi[-1], TIGHT)
        assert zf.check_inverse(fwd, bwd).extras["max_err"] <= 1e-12

    def test_mismatch_rejected(self):
        f = _xlog()
        xs = _sweep(4, 0.1, 2.0)
        fwd = zf.forward_flow(f, 0.0, [0.0, 1.0], xs, TIGHT)
        bwd = zf.backward_flow(f, 1.0, 0.0, xs, TIGHT)  # wrong start values
        with pytest.raises(ValueError, match="forward images"):
            zf.check_inverse(fwd, bwd)

    def test_semigroup(self):
        xs = _sweep(10, 0.01, 10.0)
        rep = zf.check_semigroup(_xlog(), 0.0, 0.4, 1.0, xs, TIGHT)
        assert rep.passed and rep.extras["max_err"] <= 1e-6

    def test_semigroup_degenerate(self):
        xs = _sweep(6, 0.1, 2.0)
        rep = zf.check_semigroup(_xlog(), 0.0, 0.0, 1.0, xs, TIGHT)
        assert rep.extras["max_err"] == 0.0
        rep = zf.check_semigroup(_xlog(), 0.0, 1.0, 1.0, xs, TIGHT)
        assert rep.extras["max_err"] == 0.0

    def test_semigroup_order_validation(self):
        with pytest.raises(ValueError, match="s <= r <= t"):
            zf.check_semigroup(_xlog(), 0.0, 2.0, 1.0, np.array([1.0]))


class TestDensityFormula:
    def test_constant_field_all_zero(self):
        f = zf.parse_field("affine:a0=1,a1=0")
        fr = zf.forward_flow(f, 0.0, np.linspace(0, 1, 9), np.linspace(-4, 4, 17))
        rep = zf.density_formula_check(fr, f)
        assert rep.passed
        assert rep.extras["quadrature_dev"] <= 1e-12
        assert rep.extras["fd_dev"] <= 1e-10

    def test_sine_interior_agreement(self):
        f = zf.parse_field("sine:amp=1,freq=1")
        grid = zf.make_grid(10.0, 1024)
        fr = zf.forward_flow(f, 0.0, np.linspace(0, 1, 33), grid)
        rep = zf.density_formula_check(fr, f)
        assert rep.passed
        assert rep.extras["fd_dev"] <= max(1e-4, 3.0 * grid.spacing)

    def test_needs_time_resolution(self):
        f = zf.parse_field("sine:amp=1,freq=1")
        fr = zf.forward_flow(f, 0.0, [0.0, 0.5, 1.0], np.linspace(-4, 4, 17))
        with pytest.raises(ValueError, match="8 stored times"):
            zf.density_formula_check(fr, f)

    def test_xlogabs_masked(self):
        f = _xlog()
        grid = zf.make_grid(10.0, 2048)
        fr = zf.forward_flow(f, 0.0, np.linspace(0, 1, 33), grid)
        mask = np.abs(grid.nodes) >= 0.1
        rep = zf.density_formula_check(fr, f, x_mask=mask)
        assert rep.extras["quadrature_dev"] <= 1e-3


class TestDerivativeEnvelope:
    def test_lipschitz_fields(self):
        for fid in ("affine:a0=1,a1=0.5", "sine:amp=1,freq=1"):
            f = zf.parse_field(fid)
            norms = zf.FieldNorms(f, zf.make_grid(16.0, 2 ** 9))
            fr = zf.forward_flow(f, 0.0, [0.0, 0.5, 1.0], np.linspace(-8, 8, 17), TIGHT)
            rep = zf.derivative_bound_check(fr, norms)
            assert rep.passed, (fid, rep.value)

    def test_affine_equality_edge(self):
        f = zf.parse_field("affine:a0=0,a1=2")
        norms = zf.FieldNorms(f, zf.make_grid(16.0, 2 ** 9))
        fr = zf.forward_flow(f, 0.0, [0.0, 1.0], np.linspace(-2, 2, 9), TIGHT)
        rep = zf.derivative_bound_check(fr, norms)
        # logD = 2t exactly meets the envelope
        assert rep.passed and abs(rep.value) <= 1e-7

    def test_unbounded_slope_outcome(self):
        f = _xlog()
        norms = zf.FieldNorms(f, zf.make_grid(16.0, 2 ** 9))
        fr = zf.forward_flow(f, 0.0, [0.0, 1.0], np.array([0.5, 2.0]))
        rep = zf.derivative_bound_check(fr, norms)
        assert rep.outcome == "not lipschitz"


class TestLogDerivativeOscillation:
    def test_equivariance_through_flow(self):
        """bmo(logD(t)) = (e^t - 1) * bmo(log|x| samples), exactly via samples."""
        grid = zf.make_grid(16.0, 2 ** 10)
        fam = zf.build_family(grid)
        cfg = zf.SolverConfig(rtol=1e-11, atol=1e-13, max_step=0.02)
        fr = zf.forward_flow(_xlog(), 0.0, [0.0, 0.5, 1.0], grid, cfg)
        beta = zf.bmo_norm(zf.SampledFunction(grid, np.log(np.abs(grid.nodes))), fam).value
        for j, t in ((1, 0.5), (2, 1.0)):
            measured = zf.bmo_norm(zf.SampledFunction(grid, fr.logD[j]), fam).value
            assert measured == pytest.approx((math.exp(t) - 1.0) * beta, rel=1e-6)


class TestExport:
    def test_csv_long_format(self, tmp_path):
        from zygflow.flow import flow_to_csv
        fr = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], np.array([0.5, 2.0]), TIGHT)
        path = tmp_path / "flow.csv"
        flow_to_csv(fr, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,x,phi,logD"
        assert len(lines) == 1 + 2 * 2
        t, x, phi, logd = map(float, lines[-1].split(","))
        assert (t, x) == (1.0, 2.0)
        assert phi == pytest.approx(2.0 ** math.e, rel=1e-8)

    def test_summary_fields(self):
        fr = zf.forward_flow(_xlog(), 0.0, [0.0, 1.0], zf.make_grid(4.0, 16))
        s = fr.summary()
        assert s["field"] == "xlogabs:sigma=1"
        assert s["grid"] == {"L": 4.0, "n": 16}
        assert "stats" in s and "config" in s
