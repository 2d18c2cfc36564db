"""Grid, sampled-function, and interval-family behavior."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zygflow import (
    SampledFunction,
    build_family,
    interval_mean,
    make_grid,
)
from zygflow.grids import read_csv, write_csv

import oracles


class TestMakeGrid:
    def test_nodes_small(self):
        g = make_grid(1.0, 4)
        np.testing.assert_allclose(g.nodes, [-0.75, -0.25, 0.25, 0.75])

    def test_spacing_and_first_node(self):
        g = make_grid(8.0, 16)
        assert g.spacing == 1.0
        assert g.nodes[0] == -7.5

    def test_rejects_odd_count(self):
        with pytest.raises(ValueError, match="even"):
            make_grid(1.0, 5)

    def test_rejects_small_count(self):
        with pytest.raises(ValueError):
            make_grid(1.0, 2)

    @pytest.mark.parametrize("L", [0.0, -1.0, float("inf"), float("nan")])
    def test_rejects_bad_half_width(self, L):
        with pytest.raises(ValueError):
            make_grid(L, 8)

    @pytest.mark.parametrize("L,n", [(1.0, 4), (16.0, 2 ** 10), (0.5, 6)])
    def test_invariants(self, L, n):
        g = make_grid(L, n)
        x = g.nodes
        assert np.all(np.diff(x) > 0)
        assert not np.any(x == 0.0)
        assert np.min(np.abs(x)) == pytest.approx(g.spacing / 2, rel=1e-14)
        assert x[-1] - x[0] == pytest.approx(2 * L - g.spacing, rel=1e-14)

    def test_span_indices(self):
        g = make_grid(2.0, 8)
        i, j = g.span_indices(-1.0, 1.0)
        assert np.all(np.abs(g.nodes[i:j]) < 1.0)
        assert i > 0 and j < 8
        with pytest.raises(ValueError):
            g.span_indices(5.0, 6.0)


class TestSampledFunction:
    def test_rejects_nonfinite(self):
        g = make_grid(1.0, 4)
        with pytest.raises(ValueError, match="non-finite"):
            SampledFunction(g, [1.0, np.nan, 0.0, 2.0])

    def test_rejects_wrong_shape(self):
        g = make_grid(1.0, 4)
        with pytest.raises(ValueError):
            SampledFunction(g, [1.0, 2.0])

    def test_prefix_is_cumulative_sum(self):
        g = make_grid(1.0, 8)
        rng = np.random.default_rng(1)
        v = rng.normal(size=8)
        f = SampledFunction(g, v)
        for j in range(9):
            assert f.prefix[j] == pytest.approx(v[:j].sum(), abs=1e-12)

    def test_full_mean(self):
        g = make_grid(1.0, 8)
        f = SampledFunction(g, np.arange(8.0))
        assert interval_mean(f, 0, 8) == pytest.approx((f.prefix[8] - f.prefix[0]) / 8)


class TestIntervalMean:
    def test_constant(self):
        g = make_grid(1.0, 8)
        f = SampledFunction(g, np.full(8, 3.0))
        assert interval_mean(f, 2, 7) == pytest.approx(3.0, abs=1e-14)

    def test_identity_symmetric(self):
        g = make_grid(1.0, 8)
        f = SampledFunction(g, g.nodes)
        assert interval_mean(f, 0, 8) == pytest.approx(0.0, abs=1e-15)

    def test_squares(self):
        g = make_grid(1.0, 4)
        f = SampledFunction(g, g.nodes ** 2)
        assert interval_mean(f, 0, 4) == pytest.approx(0.3125, abs=1e-14)

    def test_out_of_range(self):
        g = make_grid(1.0, 4)
        f = SampledFunction(g, np.ones(4))
        for i, j in [(-1, 2), (0, 5), (3, 3), (2, 1)]:
            with pytest.raises(IndexError):
                interval_mean(f, i, j)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 30), st.integers(1, 32),
           st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 10_000))
    def test_linearity(self, i, length, a, b, seed):
        g = make_grid(2.0, 32)
        j = min(32, i + length)
        if j <= i:
            j = i + 1
        rng = np.random.default_rng(seed)
        fv = rng.normal(size=32)
        gv = rng.normal(size=32)
        f = SampledFunction(g, fv)
        h = SampledFunction(g, gv)
        combo = SampledFunction(g, a * fv + b * gv)
        lhs = interval_mean(combo, i, j)
        rhs = a * interval_mean(f, i, j) + b * interval_mean(h, i, j)
        assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(rhs)))

    def test_prefix_matches_direct_sum_large(self):
        g = make_grid(4.0, 2 ** 14)
        rng = np.random.default_rng(7)
        f = SampledFunction(g, rng.normal(size=2 ** 14))
        for i, j in [(0, 2 ** 14), (5, 2 ** 13), (1234, 9876)]:
            direct = oracles.brute_interval_mean(f.values, i, j)
            assert interval_mean(f, i, j) == pytest.approx(direct, rel=1e-12, abs=1e-12)


class TestFamilies:
    def test_dyadic_count(self):
        fam = build_family(make_grid(1.0, 8), "dyadic", 2)
        assert len(fam) == 7
        assert all(j - i >= 2 for i, j in fam.intervals)

    def test_exhaustive_count(self):
        fam = build_family(make_grid(1.0, 8), "exhaustive", 2)
        assert len(fam) == 28

    def test_sliding_count(self):
        fam = build_family(make_grid(1.0, 4), "sliding", 2)
        assert len(fam) == 4

    def test_lexicographic_order(self):
        fam = build_family(make_grid(1.0, 8), "sliding", 2)
        pairs = fam.intervals
        assert pairs == sorted(pairs)

    def test_nesting(self):
        g = make_grid(1.0, 16)
        dy = set(build_family(g, "dyadic", 2).intervals)
        sl = set(build_family(g, "sliding", 2).intervals)
        ex = set(build_family(g, "exhaustive", 2).intervals)
        assert dy <= sl <= ex

    def test_dyadic_alignment(self):
        fam = build_family(make_grid(1.0, 16), "dyadic", 4)
        for i, j in fam.intervals:
            m = j - i
            assert m & (m - 1) == 0 and i % m == 0

    def test_min_length_errors(self):
        g = make_grid(1.0, 8)
        with pytest.raises(ValueError):
            build_family(g, "sliding", 1)
        with pytest.raises(ValueError):
            build_family(g, "sliding", 9)
        with pytest.raises(ValueError):
            build_family(g, "weird", 4)

    def test_functional_max_ordering(self):
        """Nested families give nondecreasing maxima of any swept functional."""
        from zygflow import bmo_norm
        g = make_grid(2.0, 64)
        rng = np.random.default_rng(3)
        f = SampledFunction(g, rng.normal(size=64))
        vals = [bmo_norm(f, build_family(g, s, 4)).value
                for s in ("dyadic", "sliding", "exhaustive")]
        assert vals[0] <= vals[1] + 1e-15 <= vals[2] + 2e-15


class TestCsv:
    def test_roundtrip(self, tmp_path):
        g = make_grid(3.0, 64)
        rng = np.random.default_rng(5)
        f = SampledFunction(g, rng.normal(size=64))
        path = tmp_path / "f.csv"
        write_csv(f, path)
        back = read_csv(path)
        assert back.grid.count == 64
        assert back.grid.half_width == pytest.approx(3.0, rel=1e-12)
        np.testing.assert_allclose(back.values, f.values, rtol=1e-12)

    def test_significant_digits(self, tmp_path):
        g = make_grid(1.0, 4)
        f = SampledFunction(g, [1 / 3, 2 / 3, 1 / 7, 1 / 11])
        path = tmp_path / "f.csv"
        write_csv(f, path)
        line = path.read_text().splitlines()[1]
        mantissa = line.split(",")[1].split("e")[0]
        assert len(mantissa.replace("-", "").replace(".", "")) >= 12

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError, match="header"):
            read_csv(path)

    def test_rejects_nonuniform(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,value\n-0.75,1\n-0.25,1\n0.3,1\n0.75,1\n")
        with pytest.raises(ValueError, match="uniform"):
            read_csv(path)

    def test_rejects_nonnumeric(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,value\n-0.75,1\n-0.25,oops\n0.25,1\n0.75,1\n")
        with pytest.raises(ValueError):
            read_csv(path)


class TestLargePrefix:
    def test_prefix_means_at_large_n(self):
        """Prefix-difference means agree with direct summation at n = 2^20."""
        g = make_grid(8.0, 2 ** 20)
        rng = np.random.default_rng(13)
        f = SampledFunction(g, rng.normal(size=2 ** 20))
        for i, j in [(0, 2 ** 20), (12345, 999999), (2 ** 19, 2 ** 19 + 7)]:
            direct = float(np.sum(f.values[i:j], dtype=np.longdouble) / (j - i))
            assert interval_mean(f, i, j) == pytest.approx(direct, rel=1e-12, abs=1e-12)
