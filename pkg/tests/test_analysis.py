import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autoviz import errors
from autoviz.analysis import (DEFAULT_MI_BINS, analyze, chi_square,
                              chi_square_from_table, entropy_of, kde,
                              kde_evaluate, mutual_information, pca,
                              pearson_matrix, pearson_r, quantile,
                              scott_bandwidth, silverman_bandwidth,
                              summary_stats)
from autoviz.special import chi_square_sf
from helpers import cat_col, make_dataset, num_col, random_numeric_table
from oracles import (charpoly_eigvals_oracle, chi2_oracle, eigvec_oracle,
                     entropy_oracle, mi_oracle, pearson_oracle,
                     standardized_cov_oracle, trapezoid)


class TestSummaryStats:
    def test_one_to_five(self):
        s = summary_stats([1, 2, 3, 4, 5])
        assert s.mean == 3.0
        assert s.median == 3.0
        assert s.std == pytest.approx(math.sqrt(2.5))
        assert s.skewness == pytest.approx(0.0)
        assert s.kurtosis == pytest.approx(-1.3)
        assert (s.min, s.max, s.n) == (1.0, 5.0, 5)

    def test_constant_column(self):
        s = summary_stats([4, 4, 4])
        assert s.std == 0.0
        assert s.skewness == 0.0 and s.kurtosis == 0.0

    def test_single_value(self):
        s = summary_stats([7.0])
        assert s.std == 0.0 and s.n == 1

    def test_right_skew_is_positive(self):
        assert summary_stats([1, 1, 1, 1, 10]).skewness > 1

    def test_quantile_interpolation(self):
        assert quantile([1, 2, 3, 4], 0.5) == 2.5
        assert quantile([1, 2, 3, 4, 100], 0.25) == 2.0
        assert quantile([10], 0.9) == 10.0


class TestPearson:
    def test_perfect_positive(self):
        assert pearson_r([1, 2, 3], [10, 20, 30]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson_r([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_matches_oracle(self):
        rng = random.Random(11)
        for _ in range(20):
            n = rng.randint(3, 50)
            xs = [rng.gauss(0, 2) for _ in range(n)]
            ys = [0.5 * x + rng.gauss(0, 1) for x in xs]
            assert pearson_r(xs, ys) == pytest.approx(
                pearson_oracle(xs, ys), abs=1e-12)

    def test_shift_and_scale_invariance(self):
        xs, ys = [1, 4, 2, 8], [3, 1, 5, 9]
        base = pearson_r(xs, ys)
        assert pearson_r([3 * x + 7 for x in xs], ys) == pytest.approx(base)
        assert pearson_r(xs, [-2 * y for y in ys]) == pytest.approx(-base)

    def test_constant_input_gives_zero(self):
        assert pearson_r([1, 1, 1], [1, 2, 3]) == 0.0

    def test_matrix_pairwise_complete(self):
        cols = [num_col("a", [1, 2, 3, None]),
                num_col("b", [2, 4, 6, 8]),
                num_col("c", [None, 5, 1, 2])]
        m = pearson_matrix(cols)
        assert m.r("a", "b") == pytest.approx(1.0)
        assert m.pair_counts[0, 1] == 3
        # a vs c share rows 1 and 2 only
        assert m.pair_counts[0, 2] == 2
        assert m.r("a", "c") == pytest.approx(
            pearson_oracle([2, 3], [5, 1]), abs=1e-12)
        assert np.allclose(m.values, m.values.T)
        assert np.all(np.abs(m.values) <= 1.0)

    def test_matrix_degenerate_pair(self):
        cols = [num_col("a", [1, 1, 1]), num_col("b", [1, 2, 3])]
        m = pearson_matrix(cols)
        assert m.r("a", "b") == 0.0
        assert m.degenerate[0, 1]


class TestChiSquare:
    def test_known_table(self):
        res = chi_square_from_table(np.array([[20, 10], [10, 20]]))
        assert res.statistic == pytest.approx(20 / 3, abs=1e-9)
        assert res.dof == 1
        assert res.p_value == pytest.approx(0.009823, abs=1e-4)
        assert not res.low_expected_warning

    def test_from_pairs_matches_oracle(self):
        rng = random.Random(23)
        for _ in range(15):
            n = rng.randint(20, 80)
            a = [rng.choice("xyz") for _ in range(n)]
            b = [rng.choice("pq") for _ in range(n)]
            while len(set(a)) < 2 or len(set(b)) < 2:
                a = [rng.choice("xyz") for _ in range(n)]
                b = [rng.choice("pq") for _ in range(n)]
            res = chi_square(a, b)
            stat, dof = chi2_oracle(list(zip(a, b)))
            assert res.statistic == pytest.approx(stat, abs=1e-9)
            assert res.dof == dof

    def test_row_permutation_invariance(self):
        a = ["x", "x", "y", "y", "x", "y"] * 4
        b = ["p", "q", "p", "q", "q", "p"] * 4
        base = chi_square(a, b).statistic
        order = list(range(len(a)))
        random.Random(1).shuffle(order)
        shuffled = chi_square([a[i] for i in order],
                              [b[i] for i in order]).statistic
        assert shuffled == pytest.approx(base, abs=1e-12)

    def test_zero_rows_and_columns_pruned(self):
        res = chi_square_from_table(
            np.array([[20, 0, 10], [0, 0, 0], [10, 0, 20]]))
        assert res.observed.shape == (2, 2)
        assert res.dof == 1

    def test_degenerate_table_raises(self):
        with pytest.raises(errors.DegenerateTable):
            chi_square(["x", "x", "x"], ["p", "q", "p"])
        with pytest.raises(errors.DegenerateTable):
            chi_square_from_table(np.array([[5, 5]]))

    def test_missing_rows_excluded(self):
        a = ["x", "y", None, "x", "y"]
        b = ["p", "q", "p", None, "p"]
        res = chi_square(a, b)
        assert res.observed.sum() == 3

    def test_low_expected_warning(self):
        res = chi_square_from_table(np.array([[1, 2], [2, 1]]))
        assert res.low_expected_warning


class TestChiSquareSurvival:
    def test_critical_value_at_005(self):
        assert chi_square_sf(3.841, 1) == pytest.approx(0.05, abs=5e-4)

    def test_zero_statistic(self):
        for dof in (1, 2, 5):
            assert chi_square_sf(0.0, dof) == pytest.approx(1.0)

    def test_even_dof_matches_poisson_sum(self):
        # for dof = 2m the survival function is a finite Poisson tail sum
        for x in (0.5, 1.7, 4.0, 9.3, 25.0):
            for m in (1, 2, 5, 10):
                expected = math.exp(-x / 2) * sum(
                    (x / 2) ** i / math.factorial(i) for i in range(m))
                assert chi_square_sf(x, 2 * m) == pytest.approx(
                    expected, abs=1e-10)

    def test_monotone_decreasing_in_x(self):
        vals = [chi_square_sf(x, 3) for x in (0.1, 1, 3, 7, 15, 40)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_bounds(self):
        for x in (0.01, 2.0, 50.0):
            for dof in (1, 4, 9):
                assert 0.0 <= chi_square_sf(x, dof) <= 1.0


class TestPCA:
    def test_collinear_pair(self):
        cols = [num_col("x", [1, 2, 3, 4]), num_col("y", [2, 4, 6, 8])]
        res = pca(cols)
        assert res.explained_variance_ratio[0] == pytest.approx(1.0)
        assert res.explained_variance_ratio[1] == pytest.approx(0.0, abs=1e-12)
        assert res.components[0] == pytest.approx(
            [math.sqrt(0.5), math.sqrt(0.5)])

    def test_trace_equals_dimension(self):
        ds = random_numeric_table(random.Random(2), 40, 4)
        res = pca(ds.columns)
        assert res.eigenvalues.sum() == pytest.approx(4.0, abs=1e-9)

    def test_components_orthonormal(self):
        ds = random_numeric_table(random.Random(3), 30, 3)
        res = pca(ds.columns)
        assert np.allclose(res.components @ res.components.T, np.eye(3),
                           atol=1e-9)

    def test_reconstruction(self):
        ds = random_numeric_table(random.Random(4), 25, 3)
        res = pca(ds.columns)
        x = np.stack([np.asarray(c.values, dtype=float)
                      for c in ds.columns], axis=1)
        z = (x - res.means) / res.stds
        recon = (z @ res.components.T) @ res.components
        assert np.allclose(recon, z, atol=1e-9)

    def test_sign_convention(self):
        ds = random_numeric_table(random.Random(5), 30, 3)
        res = pca(ds.columns)
        for row in res.components:
            assert row[np.argmax(np.abs(row))] > 0

    def test_matches_charpoly_oracle(self):
        rng = random.Random(7)
        for p in (2, 3):
            for _ in range(10):
                ds = random_numeric_table(rng, rng.randint(10, 40), p)
                raw = [[float(v) for v in c.values] for c in ds.columns]
                cov = standardized_cov_oracle(raw)
                want_vals = charpoly_eigvals_oracle(cov)
                res = pca(ds.columns)
                assert res.eigenvalues == pytest.approx(want_vals, abs=1e-6)
                for k, lam in enumerate(want_vals):
                    gap = min(abs(lam - other)
                              for j, other in enumerate(want_vals) if j != k)
                    if gap < 1e-4:
                        continue
                    v = eigvec_oracle(cov, lam)
                    dot = abs(float(np.dot(v, res.components[k])))
                    assert dot == pytest.approx(1.0, abs=1e-6)

    def test_listwise_deletion_and_exclusion(self):
        cols = [num_col("x", [1, 2, 3, 4, None]),
                num_col("k", [5, 5, 5, 5, 9]),
                num_col("y", [2, 1, 4, 3, 0])]
        res = pca(cols)
        assert res.excluded == ("k",)
        assert res.feature_names == ("x", "y")

    def test_too_few_rows(self):
        with pytest.raises(errors.TooFewRows):
            pca([num_col("x", [1, None, 2]), num_col("y", [1, 2, None])])

    def test_n_components_truncates(self):
        ds = random_numeric_table(random.Random(8), 20, 3)
        res = pca(ds.columns, n_components=2)
        assert res.components.shape == (2, 3)
        assert len(res.eigenvalues) == 3


class TestMutualInformation:
    def test_identical_binary_is_ln2(self):
        c = cat_col("a", ["u", "v"] * 10)
        d = cat_col("b", ["u", "v"] * 10)
        assert mutual_information(c, d).score == pytest.approx(math.log(2))

    def test_categorical_matches_oracle(self):
        rng = random.Random(13)
        for _ in range(15):
            n = rng.randint(10, 60)
            xs = [rng.choice("abc") for _ in range(n)]
            ys = [rng.choice("xy") for _ in range(n)]
            got = mutual_information(cat_col("p", xs), cat_col("q", ys))
            assert got.score == pytest.approx(
                max(0.0, mi_oracle(xs, ys)), abs=1e-12)

    def test_symmetry(self):
        a = cat_col("a", ["x", "y", "x", "z", "y", "x"])
        b = num_col("b", [1, 2, 1, 3, 2, 1])
        assert mutual_information(a, b).score == pytest.approx(
            mutual_information(b, a).score)

    def test_bounded_by_entropies(self):
        rng = random.Random(19)
        xs = [rng.choice("abcd") for _ in range(50)]
        ys = [rng.choice("pq") for _ in range(50)]
        mi = mutual_information(cat_col("a", xs), cat_col("b", ys)).score
        assert mi <= entropy_oracle(xs) + 1e-12
        assert mi <= entropy_oracle(ys) + 1e-12

    def test_numeric_bins_clamped_to_sqrt_n(self):
        vals = list(range(25))
        got = mutual_information(num_col("a", vals), num_col("b", vals))
        assert got.bins_used <= 5

    def test_constant_column_scores_zero(self):
        assert mutual_information(num_col("a", [1, 1, 1]),
                                  cat_col("b", list("xyz"))).score == 0.0

    def test_missing_pairs_dropped(self):
        a = cat_col("a", ["x", None, "y", "x"])
        b = cat_col("b", ["p", "q", None, "q"])
        got = mutual_information(a, b)
        assert got.score == pytest.approx(
            max(0.0, mi_oracle(["x", "x"], ["p", "q"])), abs=1e-12)

    def test_entropy_uniform(self):
        for k in (2, 3, 5):
            vals = [f"c{i}" for i in range(k)] * 6
            assert entropy_of(vals, "categorical") == pytest.approx(
                math.log(k))


class TestKDE:
    def test_single_datum_peak_height(self):
        out = kde_evaluate([0.0], [0.0], 1.0)
        assert out[0] == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-12)
        assert out[0] == pytest.approx(0.39894228, abs=1e-7)

    def test_evaluate_matches_direct_sum(self):
        rng = random.Random(29)
        vals = [rng.gauss(0, 1) for _ in range(40)]
        grid = [-2.0, -0.5, 0.0, 1.5]
        h = 0.4
        out = kde_evaluate(vals, grid, h)
        for g, got in zip(grid, out):
            want = sum(math.exp(-((g - v) / h) ** 2 / 2)
                       for v in vals) / (len(vals) * h *
                                         math.sqrt(2 * math.pi))
            assert got == pytest.approx(want, abs=1e-12)

    def test_scott_bandwidth(self):
        assert scott_bandwidth(2.0, 32) == pytest.approx(2.0 * 32 ** -0.2)

    def test_silverman_bandwidth(self):
        assert silverman_bandwidth(1.0, 1.0, 100) == pytest.approx(
            0.9 * (1.0 / 1.34) * 100 ** -0.2, abs=1e-12)
        # sigma smaller than iqr/1.34 wins the min
        assert silverman_bandwidth(0.5, 10.0, 100) == pytest.approx(
            0.9 * 0.5 * 100 ** -0.2, abs=1e-12)

    def test_integral_close_to_one(self):
        rng = random.Random(31)
        for rule in ("scott", "silverman"):
            vals = [rng.gauss(5, 2) for _ in range(200)]
            est = kde(vals, rule=rule)
            area = trapezoid(est.density.tolist(), est.grid.tolist())
            assert 0.98 <= area <= 1.001

    def test_grid_span(self):
        est = kde([1.0, 2.0, 3.0, 4.0])
        h = est.bandwidth
        assert est.grid[0] == pytest.approx(1.0 - 3 * h)
        assert est.grid[-1] == pytest.approx(4.0 + 3 * h)
        assert len(est.grid) == 256

    def test_degenerate_spread_raises(self):
        with pytest.raises(errors.DegenerateSpread):
            kde([2.0, 2.0, 2.0])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(min_value=-100, max_value=100,
                              allow_nan=False), min_size=5, max_size=60),
           st.floats(min_value=0.05, max_value=5.0))
    def test_doubling_h_lowers_peak(self, vals, h):
        if max(vals) == min(vals):
            return
        # grid fine relative to h so the discrete max tracks the supremum
        span = (max(vals) - min(vals)) + 6 * h
        npts = min(4000, int(span / (h / 4)) + 2)
        grid = np.concatenate([
            np.linspace(min(vals) - 3 * h, max(vals) + 3 * h, npts),
            np.asarray(vals, dtype=float)])
        peak = kde_evaluate(vals, grid, h).max()
        peak2 = kde_evaluate(vals, grid, 2 * h).max()
        assert peak2 <= peak * 1.01 + 1e-12


class TestAnalyze:
    def test_mixed_dataset_runs_all_stages(self):
        ds = make_dataset(
            num_col("x", [1, 2, 3, 4, 5, 6]),
            num_col("y", [2, 4, 5, 4, 10, 12]),
            cat_col("c", ["a", "b", "a", "b", "a", "b"]),
            cat_col("d", ["p", "p", "q", "q", "p", "q"]))
        res = analyze(ds)
        assert set(res.stats) == {"x", "y"}
        assert res.correlation is not None
        assert ("c", "d") in res.chi_square
        assert res.pca is not None
        assert res.mi_score("x", "y") is not None
        assert set(res.kde) == {"x", "y"}

    def test_single_numeric_column_skips_multivariate(self):
        ds = make_dataset(num_col("x", [1, 2, 3]))
        res = analyze(ds)
        assert res.correlation is None
        assert "correlation" in res.skipped
        assert "pca" in res.skipped

    def test_degenerate_kde_recorded_as_skipped(self):
        ds = make_dataset(num_col("x", [5, 5, 5]), num_col("y", [1, 2, 3]))
        res = analyze(ds)
        assert "kde:x" in res.skipped
        assert "y" in res.kde
