"""Envelope calculators, slab partitions, and the ledger."""

import math

import numpy as np
import pytest

import zygflow as zf
from zygflow.report import BoundReport, ConstantsLedger, solve_slab_increment


@pytest.fixture(scope="module")
def norms():
    return zf.FieldNorms(zf.parse_field("xlogabs:sigma=1"), zf.make_grid(8.0, 2 ** 10))


class TestLedger:
    def test_defaults(self):
        led = ConstantsLedger()
        assert led.C1 == 2 * led.C3 == led.C6
        assert led.c == led.C3 * led.C4 == led.C7
        assert led.epsilon0 == min(1.0, led.jn_c2 / 2.0)

    def test_delta0_defining_relation(self):
        led = ConstantsLedger()
        resid = led.C3 * led.delta0 * math.exp(led.C3 * led.C4 * led.delta0) - led.epsilon0 / 2
        assert abs(resid) <= 1e-10

    def test_delta0_recomputed_on_replace(self):
        led = ConstantsLedger().replace(C3=4.0)
        resid = 4.0 * led.delta0 * math.exp(4.0 * led.C4 * led.delta0) - led.epsilon0 / 2
        assert abs(resid) <= 1e-10

    def test_validation(self):
        with pytest.raises(ValueError):
            ConstantsLedger(alpha=1.5)
        with pytest.raises(ValueError):
            ConstantsLedger(epsilon0=0.0)
        with pytest.raises(ValueError):
            ConstantsLedger(C3=-1.0)
        with pytest.raises(ValueError):
            ConstantsLedger(delta0=0.5)  # violates the defining relation

    def test_solver_monotone(self):
        assert solve_slab_increment(8.0, 4.0, 0.25) < solve_slab_increment(4.0, 4.0, 0.25)


class TestBoundReport:
    def test_compare_and_ratio(self):
        rep = BoundReport.compare("x", 0.5, 1.0)
        assert rep.passed and rep.ratio == 0.5
        rep = BoundReport.compare("x", 2.0, 1.0)
        assert not rep.passed

    def test_json_sig_digits(self):
        rep = BoundReport.compare("x", 1.0 / 3.0, 1.0, grid={"L": 1 / 7, "n": 4})
        payload = rep.to_json()
        assert payload["value"] == float(f"{1/3:.12g}")
        assert payload["functional"] == "x"
        assert payload["pass"] is True


class TestGronwallRhs:
    def test_zero_at_zero(self, norms):
        assert zf.gronwall_rhs(norms, 0.0, ConstantsLedger()) == 0.0

    def test_formula(self, norms):
        led = ConstantsLedger()
        B = norms.B(0.0, 1.0)
        assert zf.gronwall_rhs(norms, 1.0, led) == pytest.approx(
            led.C1 * B * math.exp(led.c * B), rel=1e-14)

    def test_monotone_in_time_and_constants(self, norms):
        led = ConstantsLedger()
        vals = [zf.gronwall_rhs(norms, t, led) for t in (0.25, 0.5, 1.0, 2.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert zf.gronwall_rhs(norms, 1.0, led.replace(C1=32.0)) > vals[2]


class TestTimePartition:
    def test_single_slab_for_short_horizon(self, norms):
        led = ConstantsLedger()
        T = 0.5 * led.delta0 / norms.bmo_at(0.0)
        part = zf.time_partition(norms, led, T)
        np.testing.assert_allclose(part, [0.0, T])

    def test_equispaced_for_autonomous(self, norms):
        led = ConstantsLedger()
        part = zf.time_partition(norms, led, 1.0)
        gaps = np.diff(part[:-1])
        assert np.max(np.abs(gaps - led.delta0 / norms.bmo_at(0.0))) <= 1e-10

    def test_increments(self, norms):
        led = ConstantsLedger()
        part = zf.time_partition(norms, led, 1.0)
        incr = [norms.B(0.0, part[i + 1]) - norms.B(0.0, part[i])
                for i in range(len(part) - 1)]
        assert max(abs(v - led.delta0) for v in incr[:-1]) <= 1e-8
        assert incr[-1] <= led.delta0 * (1 + 1e-8)
        assert len(part) == math.ceil(norms.B(0.0, 1.0) / led.delta0) + 1

    def test_rejects_bad_horizon(self, norms):
        with pytest.raises(ValueError):
            zf.time_partition(norms, ConstantsLedger(), 0.0)


class TestIteratedBound:
    def test_first_slab_power(self, norms):
        led = ConstantsLedger()
        part = zf.time_partition(norms, led, 1.0)
        K = led.C3 * (1 + led.C4) + 1
        ib = zf.iterated_bound(part, norms, led, float(part[1]) / 2)
        assert ib.slab == 1 and ib.power == K

    def test_two_increment_power(self, norms):
        led = ConstantsLedger()
        part = zf.time_partition(norms, led, 1.0)
        K = led.C3 * (1 + led.C4) + 1
        ib = zf.iterated_bound(part, norms, led, float(part[2]))
        assert ib.power == pytest.approx(K ** 2, rel=1e-12)
        # B equals 2*delta0 at this boundary
        assert ib.B == pytest.approx(2 * led.delta0, abs=1e-10)

    def test_boundary_agreement(self, norms):
        led = ConstantsLedger()
        part = zf.time_partition(norms, led, 1.0)
        for i in (1, 5, 20, len(part) - 2):
            ib = zf.iterated_bound(part, norms, led, float(part[i]))
            assert abs(ib.power - ib.exponential) / ib.power <= 1e-9

    def test_power_below_pointwise_inside_slab(self, norms):
        led = ConstantsLedger()
        part = zf.time_partition(norms, led, 1.0)
        for t in np.linspace(0.01, 0.99, 17):
            ib = zf.iterated_bound(part, norms, led, float(t))
            assert ib.power <= ib.pointwise * (1 + 1e-9)
            assert ib.envelope >= 0.0

    def test_outside_horizon_rejected(self, norms):
        led = ConstantsLedger()
        part = zf.time_partition(norms, led, 1.0)
        with pytest.raises(ValueError):
            zf.iterated_bound(part, norms, led, 1.5)


class TestSharpness:
    def test_report_on_modest_grid(self):
        grid = zf.make_grid(16.0, 2 ** 10)
        rep = zf.sharpness_report([0.1, 0.5, 1.0, 2.0], grid)
        assert rep.passed
        beta = rep.extras["beta"]
        rows = {r["t"]: r for r in rep.extras["per_t"]}
        # t -> 0: ratio/beta tends to 1 like (1 - e^{-t})/t
        assert rows[0.1]["ratio_over_beta"] == pytest.approx(
            (1 - math.exp(-0.1)) / 0.1, rel=1e-4)
        # t = 1: measured equals (e - 1) beta
        assert rows[1.0]["measured"] == pytest.approx((math.e - 1) * beta, rel=1e-6)
        # t = 2 ratio
        assert rows[2.0]["ratio_over_beta"] == pytest.approx(
            (math.e ** 2 - 1) / (2 * math.e ** 2), rel=1e-4)

    def test_rejects_nonpositive_times(self):
        with pytest.raises(ValueError):
            zf.sharpness_report([0.0, 1.0], zf.make_grid(16.0, 2 ** 8))
