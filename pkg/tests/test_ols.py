"""Least-squares fitting against an exact rational reference."""

from fractions import Fraction

import numpy as np
import pytest

import oracle
from helpers import predictor_names, random_dataset, random_integer_dataset
from partialreg import (
    Dataset,
    MissingPredictorValue,
    SingularDesign,
    TooFewRows,
    UnknownColumn,
    ZeroVariance,
    design_matrix,
    fit,
    fit_simple,
    predict,
    residuals,
)
from partialreg.ols import CONDITION_LIMIT

D1_COEFFICIENTS = (Fraction(4, 33), Fraction(15, 11), Fraction(4, 11))
D1_SIMPLE_X1 = (Fraction(4, 15), Fraction(59, 35))
D1_RESIDUALS_ON_X1 = (
    Fraction(1, 21), Fraction(38, 105), Fraction(-34, 105),
    Fraction(-1, 105), Fraction(-73, 105), Fraction(13, 21),
)


def assert_close_to_fractions(values, fractions, rel=1e-12):
    for got, want in zip(values, fractions):
        assert got == pytest.approx(float(want), rel=rel, abs=1e-15)


class TestDesignMatrix:
    def test_ones_column_first(self, d1):
        x = design_matrix(d1, ["X1", "X2"])
        assert x.shape == (6, 3)
        assert np.array_equal(x[:, 0], np.ones(6))
        assert np.array_equal(x[:, 1], d1.column("X1"))

    def test_empty_predictor_list(self, d1):
        x = design_matrix(d1, [])
        assert x.shape == (6, 1)


class TestFit:
    def test_d1_two_predictors_exact(self, d1):
        fitted = fit(d1, "Y", ["X1", "X2"])
        assert_close_to_fractions(fitted.coefficients(), D1_COEFFICIENTS)
        assert fitted.response == "Y"
        assert fitted.predictors == ("X1", "X2")

    def test_d1_three_predictors_exact(self, d1_extended):
        fitted = fit(d1_extended, "Y", ["X1", "X2", "X3"])
        want = (Fraction(11, 12), Fraction(11, 4),
                Fraction(-1, 2), Fraction(-3, 4))
        assert_close_to_fractions(fitted.coefficients(), want, rel=1e-10)

    def test_slope_lookup_by_name(self, d1):
        fitted = fit(d1, "Y", ["X1", "X2"])
        assert fitted.slope("X2") == fitted.slopes[1]
        with pytest.raises(MissingPredictorValue):
            fitted.slope("X3")

    def test_rss_matches_residual_norm(self, d1):
        fitted = fit(d1, "Y", ["X1", "X2"])
        r = residuals(fitted, d1)
        assert fitted.rss == pytest.approx(float(r @ r), rel=1e-12)
        assert fitted.rss >= 0.0

    def test_mean_only_fit(self, d1):
        fitted = fit(d1, "Y", [])
        assert fitted.slopes == ()
        assert fitted.intercept == pytest.approx(37 / 6, rel=1e-15)

    def test_deterministic_across_calls(self, d1_extended):
        a = fit(d1_extended, "Y", ["X1", "X2", "X3"])
        b = fit(d1_extended, "Y", ["X1", "X2", "X3"])
        assert a.coefficients() == b.coefficients()
        assert a.rss == b.rss

    def test_unknown_column_checked_before_row_count(self):
        ds = Dataset({"a": [1.0, 2.0], "y": [1.0, 2.0]})
        with pytest.raises(UnknownColumn):
            fit(ds, "y", ["a", "b", "c"])

    def test_too_few_rows(self):
        ds = Dataset({"a": [1.0, 2.0], "b": [2.0, 1.0], "y": [1.0, 2.0]})
        with pytest.raises(TooFewRows):
            fit(ds, "y", ["a", "b"])

    def test_collinear_predictors_rejected(self):
        ds = Dataset({
            "a": [1.0, 2.0, 3.0, 4.0],
            "b": [2.0, 4.0, 6.0, 8.0],
            "y": [1.0, 3.0, 2.0, 5.0],
        })
        with pytest.raises(SingularDesign):
            fit(ds, "y", ["a", "b"])

    def test_constant_predictor_rejected(self):
        ds = Dataset({"a": [5.0, 5.0, 5.0], "y": [1.0, 2.0, 3.0]})
        with pytest.raises(SingularDesign):
            fit(ds, "y", ["a"])

    def test_condition_estimate_below_limit(self, d1):
        fitted = fit(d1, "Y", ["X1", "X2"])
        assert 1.0 <= fitted.condition_estimate < CONDITION_LIMIT

    def test_matches_oracle_on_random_real_data(self):
        # lstsq agrees with exact normal-equation elimination to well
        # inside 1e-8 on well-conditioned designs.
        rng = np.random.default_rng(2024)
        for _ in range(200):
            n = int(rng.integers(5, 51))
            k = int(rng.integers(1, 5))
            ds = random_dataset(rng, n=n, k=k)
            names = predictor_names(k)
            fitted = fit(ds, "Y", names)
            cols = [[Fraction(v) for v in ds.column(p)] for p in names]
            want = oracle.fit_coefficients(
                [Fraction(v) for v in ds.column("Y")], cols)
            for got, ref in zip(fitted.coefficients(), want):
                assert abs(got - float(ref)) <= 1e-8 * max(1.0, abs(float(ref)))

    def test_matches_oracle_exactly_on_integer_data(self):
        rng = np.random.default_rng(90)
        for _ in range(50):
            ds, exact = random_integer_dataset(rng, n=int(rng.integers(6, 16)),
                                               k=int(rng.integers(1, 4)))
            names = [n for n in ds.names if n != "Y"]
            fitted = fit(ds, "Y", names)
            want = oracle.fit_coefficients(exact["Y"],
                                           [exact[n] for n in names])
            for got, ref in zip(fitted.coefficients(), want):
                assert abs(got - float(ref)) <= 1e-10 * max(1.0, abs(float(ref)))

    def test_scale_equivariance(self):
        # Multiplying one predictor by alpha divides its slope by alpha
        # and leaves the others alone.
        rng = np.random.default_rng(8)
        ds = random_dataset(rng, n=25, k=3)
        base = fit(ds, "Y", ["X1", "X2", "X3"])
        alpha = 12.5
        scaled = ds.replace_columns({"X2": alpha * ds.column("X2")})
        after = fit(scaled, "Y", ["X1", "X2", "X3"])
        assert after.slopes[1] == pytest.approx(base.slopes[1] / alpha, rel=1e-9)
        assert after.slopes[0] == pytest.approx(base.slopes[0], rel=1e-9)
        assert after.slopes[2] == pytest.approx(base.slopes[2], rel=1e-9)
        assert after.intercept == pytest.approx(base.intercept, rel=1e-9)


class TestFitSimple:
    def test_d1_exact(self, d1):
        fitted = fit_simple(d1, "Y", "X1")
        assert_close_to_fractions(fitted.coefficients(), D1_SIMPLE_X1)

    def test_x1_on_x2_slope(self, d1):
        fitted = fit_simple(d1, "X1", "X2")
        assert fitted.slopes[0] == pytest.approx(31 / 35, rel=1e-14)
        assert fitted.intercept == pytest.approx(2 / 5, rel=1e-13)

    def test_agrees_with_matrix_path(self):
        rng = np.random.default_rng(55)
        for _ in range(25):
            ds = random_dataset(rng, n=int(rng.integers(3, 40)), k=1)
            closed = fit_simple(ds, "Y", "X1")
            matrix = fit(ds, "Y", ["X1"])
            assert closed.slopes[0] == pytest.approx(matrix.slopes[0], rel=1e-9)
            assert closed.intercept == pytest.approx(
                matrix.intercept, rel=1e-9, abs=1e-12)

    def test_constant_predictor_raises_zero_variance(self):
        ds = Dataset({"a": [5.0, 5.0, 5.0], "y": [1.0, 2.0, 3.0]})
        with pytest.raises(ZeroVariance):
            fit_simple(ds, "y", "a")

    def test_slope_matches_oracle(self, d1):
        want = oracle.simple_slope(
            [Fraction(v) for v in d1.column("Y")],
            [Fraction(v) for v in d1.column("X2")])
        assert fit_simple(d1, "Y", "X2").slopes[0] == pytest.approx(
            float(want), rel=1e-14)
        assert want == Fraction(11, 7)


class TestPredictAndResiduals:
    def test_first_row_fitted_value(self, d1):
        fitted = fit(d1, "Y", ["X1", "X2"])
        got = predict(fitted, {"X1": 1.0, "X2": 1.0})
        assert got == pytest.approx(float(Fraction(61, 33)), rel=1e-12)

    def test_extra_keys_ignored_missing_keys_named(self, d1):
        fitted = fit(d1, "Y", ["X1", "X2"])
        predict(fitted, {"X1": 0.0, "X2": 0.0, "junk": 9.0})
        with pytest.raises(MissingPredictorValue, match="X2"):
            predict(fitted, {"X1": 0.0})

    def test_residuals_exact_values(self, d1):
        fitted = fit_simple(d1, "Y", "X1")
        got = residuals(fitted, d1)
        assert_close_to_fractions(got, D1_RESIDUALS_ON_X1, rel=1e-11)

    def test_residuals_sum_to_zero(self, d1):
        fitted = fit(d1, "Y", ["X1", "X2"])
        assert abs(residuals(fitted, d1).sum()) <= 1e-10

    def test_residuals_match_oracle(self, d1):
        fitted = fit_simple(d1, "Y", "X1")
        want = oracle.residual_vector(
            [Fraction(v) for v in d1.column("Y")],
            [[Fraction(v) for v in d1.column("X1")]])
        got = residuals(fitted, d1)
        for g, w in zip(got, want):
            assert g == pytest.approx(float(w), rel=1e-10, abs=1e-13)

    def test_residuals_require_columns(self, d1):
        fitted = fit(d1, "Y", ["X1", "X2"])
        small = Dataset({"X1": [1.0, 2.0], "Y": [1.0, 2.0]})
        with pytest.raises(UnknownColumn):
            residuals(fitted, small)


class TestOrthogonalDesigns:
    def test_hadamard_columns_make_multiple_equal_simple(self):
        # Sign-balanced +-1 columns have exactly zero pairwise covariance,
        # so every multiple-regression slope collapses to its simple slope.
        x1 = np.array([1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0])
        x2 = np.array([1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0])
        x3 = np.array([1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0])
        y = 2.0 * x1 - 3.0 * x2 + 0.5 * x3 + np.array(
            [0.3, -0.1, 0.2, 0.0, -0.4, 0.1, -0.2, 0.1])
        ds = Dataset({"X1": x1, "X2": x2, "X3": x3, "Y": y})
        multi = fit(ds, "Y", ["X1", "X2", "X3"])
        for name, slope in zip(multi.predictors, multi.slopes):
            simple = fit_simple(ds, "Y", name).slopes[0]
            assert abs(slope - simple) <= 1e-10
