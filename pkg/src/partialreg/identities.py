"""Identities connecting simple, multiple, and residualized-fit slopes.

Every claim here is an exact algebraic identity of least-squares fits, so
on well-conditioned data a failure at the default tolerance means a bug,
not noise.  The checks:

``residualized_slope_*``
    The multiple-regression slope on ``x1`` equals the simple-regression
    slope of the response on ``x1`` residualized against the controls.
``residual_uncorrelated_with_controls``
    That residualized predictor has multiple correlation ~0 with the
    controls.
``controls_have_zero_slope_on_residual``
    (Two controls.)  Regressing either control on the residualized
    predictor plus the other control puts ~0 slope on the residual.
``mapped_coefficients_match_refit``
    Transforming fitted coefficients with the inverse predictor transform
    reproduces a fresh fit on the transformed columns.
``two_predictor_slope_relations``
    (One control.)  With simple slopes ``a1, a2``, cross-fit slopes
    ``c12, c21`` and multiple slopes ``b1, b2``:
    ``b1*c12 = a2 - b2``, ``b2*c21 = a1 - b1``, and ``c12*c21 = r**2``.
``aggregation_recovers_subset_slopes``
    Slopes of the fit on a predictor subset equal the full-model slopes
    contracted with the matrix of predictor-on-subset slopes.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import (
    CollinearPredictors,
    NonCanonicalSubsetRows,
    PartialRegError,
    ShapeMismatch,
)
from .ols import fit, fit_simple
from .stats import multiple_correlation, pearson_r
from .transform import apply_transform, build_transform, map_coefficients, residualize

__all__ = [
    "DEFAULT_TOLERANCE",
    "VerificationReport",
    "verify_residualized_slope",
    "aggregate_coefficients",
    "decompose_coefficients",
    "run_verification_suite",
]

#: Default claim tolerance, applied relative to ``max(1, |lhs|)``.
DEFAULT_TOLERANCE = 1e-8

#: How exactly a kept predictor's row must be a unit row.
_UNIT_ROW_TOLERANCE = 1e-10

#: Proportional-predictor gate on ``1 - c12*c21`` (equivalently 1 - r**2).
_PROPORTIONALITY_FLOOR = 1e-12


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking one identity.

    ``lhs`` and ``rhs`` hold the compared numbers (tuples even when the
    claim compares scalars), ``abs_diff`` their largest absolute
    difference, and ``tolerance`` the absolute bound actually applied, so
    ``passed == (abs_diff <= tolerance)`` always holds.
    """

    claim: str
    lhs: tuple[float, ...]
    rhs: tuple[float, ...]
    abs_diff: float
    tolerance: float
    passed: bool


def _report(claim: str, lhs, rhs, tolerance: float) -> VerificationReport:
    lhs_t = tuple(float(v) for v in np.atleast_1d(lhs))
    rhs_t = tuple(float(v) for v in np.atleast_1d(rhs))
    if len(lhs_t) != len(rhs_t):
        raise ShapeMismatch(
            f"claim {claim!r} compares {len(lhs_t)} values to {len(rhs_t)}")
    abs_diff = max(abs(l - r) for l, r in zip(lhs_t, rhs_t))
    bound = tolerance * max(1.0, max(abs(v) for v in lhs_t))
    return VerificationReport(
        claim=claim,
        lhs=lhs_t,
        rhs=rhs_t,
        abs_diff=abs_diff,
        tolerance=bound,
        passed=abs_diff <= bound,
    )


def _claim_name(control_count: int) -> str:
    if control_count == 1:
        return "residualized_slope_one_control"
    if control_count == 2:
        return "residualized_slope_two_controls"
    return "residualized_slope_many_controls"


def verify_residualized_slope(ds: Dataset, response: str, x1: str,
                              controls: Sequence[str],
                              tolerance: float = DEFAULT_TOLERANCE
                              ) -> VerificationReport:
    """Check multiple slope == simple slope on the residualized predictor.

    ``lhs`` is the slope on ``x1`` in the fit of ``response`` on
    ``[x1, *controls]``; ``rhs`` is the slope of the simple fit of
    ``response`` on ``x1`` residualized against the controls.
    """
    controls = list(controls)
    full = fit(ds, response, [x1, *controls])
    residual = residualize(ds, x1, controls)
    augmented = residual.merged_into(ds)
    simple = fit_simple(augmented, response, residual.name)
    return _report(_claim_name(len(controls)),
                   full.slopes[0], simple.slopes[0], tolerance)


def aggregate_coefficients(slopes: Sequence[float],
                           coefficient_matrix) -> tuple[float, ...]:
    """Slopes on a predictor subset from the full-model slopes.

    ``coefficient_matrix`` has one row per full-model predictor and one
    column per kept predictor; entry (i, j) is the slope of predictor i in
    the fit of predictor i on the kept set.  Rows belonging to kept
    predictors are therefore unit rows, which is checked: every column j
    must contain some row equal to the j-th unit row (unit rows for
    different columns can never collide, so no further bookkeeping is
    needed).  The result is the vector-matrix product
    ``slopes @ coefficient_matrix``; no data access happens here.

    Raises
    ------
    ShapeMismatch
        If the matrix is not 2-d with one row per slope, or is wider than
        it is tall.
    NonCanonicalSubsetRows
        If some column has no unit row, i.e. the matrix cannot have come
        from fits onto a subset of the same predictor set.
    """
    b = np.asarray([float(v) for v in slopes])
    matrix = np.asarray(coefficient_matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ShapeMismatch(
            f"coefficient matrix must be 2-d, got shape {matrix.shape}")
    rows, cols = matrix.shape
    if rows != b.size:
        raise ShapeMismatch(
            f"{b.size} slopes but coefficient matrix has {rows} rows")
    if cols > rows:
        raise ShapeMismatch(
            f"subset of {cols} predictors cannot exceed the full {rows}")
    for j in range(cols):
        unit = np.zeros(cols)
        unit[j] = 1.0
        deviations = np.max(np.abs(matrix - unit), axis=1)
        if not np.any(deviations <= _UNIT_ROW_TOLERANCE):
            raise NonCanonicalSubsetRows(
                f"no row of the coefficient matrix is the unit row for "
                f"kept predictor {j}; rows for kept predictors must be "
                f"unit rows")
    return tuple(float(v) for v in b @ matrix)


def decompose_coefficients(a1: float, a2: float, c12: float, c21: float
                           ) -> tuple[float, float]:
    """Two-predictor multiple slopes from simple and cross-fit slopes.

    Inverts the aggregation identities ``a1 = b1 + b2*c21`` and
    ``a2 = b1*c12 + b2``::

        b1 = (a1 - a2*c21) / (1 - c12*c21)
        b2 = (a2 - a1*c12) / (1 - c12*c21)

    Since ``c12*c21 = r**2``, the denominator vanishes exactly when the
    two predictors are proportional, and :class:`CollinearPredictors` is
    raised.
    """
    determinant = 1.0 - float(c12) * float(c21)
    if abs(determinant) <= _PROPORTIONALITY_FLOOR:
        raise CollinearPredictors(
            f"1 - c12*c21 = {determinant!r}; the predictors are "
            f"proportional and the slopes are not identifiable")
    b1 = (float(a1) - float(a2) * float(c21)) / determinant
    b2 = (float(a2) - float(a1) * float(c12)) / determinant
    return (b1, b2)


def _tag_claim(claim: str):
    """Re-raise library errors annotated with the claim being checked."""
    class _Tagger:
        def __enter__(self):
            return None

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, PartialRegError):
                raise type(exc)(
                    f"while checking {claim}: {exc}") from exc
            return False

    return _Tagger()


def run_verification_suite(ds: Dataset, response: str, x1: str,
                           controls: Sequence[str],
                           tolerance: float = DEFAULT_TOLERANCE
                           ) -> list[VerificationReport]:
    """Check every identity applicable to this response/predictor split.

    Always includes the residualized-slope claim, the zero-correlation
    claim, and the transform/refit claim; adds the two-predictor slope
    relations with one control, and the zero-slope-on-residual claim with
    two.  The aggregation claim (subset = controls) closes the list.

    The suite passes iff every report's ``passed`` flag is true.

    Raises
    ------
    CollinearPredictors
        If any two of ``[x1, *controls]`` are proportional
        (``|pearson_r| >= 1 - 1e-12``); no report is produced because no
        claim is well posed in that case.
    SingularDesign
        Propagated from an inner fit, annotated with the claim it arose
        in.
    """
    controls = list(controls)
    if not controls:
        raise ValueError("need at least one control")
    names = [x1, *controls]
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            r = pearson_r(ds, names[i], names[j])
            if abs(r) >= 1.0 - 1e-12:
                raise CollinearPredictors(
                    f"columns {names[i]!r} and {names[j]!r} are "
                    f"proportional (|r| = {abs(r)!r})")

    reports: list[VerificationReport] = []

    claim = _claim_name(len(controls))
    with _tag_claim(claim):
        reports.append(
            verify_residualized_slope(ds, response, x1, controls, tolerance))
        full = fit(ds, response, names)
        residual = residualize(ds, x1, controls)
        augmented = residual.merged_into(ds)

    with _tag_claim("residual_uncorrelated_with_controls"):
        rho = multiple_correlation(augmented, residual.name, controls)
        reports.append(_report("residual_uncorrelated_with_controls",
                               rho, 0.0, tolerance))

    if len(controls) == 2:
        x2, x3 = controls
        with _tag_claim("controls_have_zero_slope_on_residual"):
            on_x3 = fit(augmented, x3, [residual.name, x2]).slopes[0]
            on_x2 = fit(augmented, x2, [residual.name, x3]).slopes[0]
            reports.append(_report("controls_have_zero_slope_on_residual",
                                   (on_x3, on_x2), (0.0, 0.0), tolerance))

    with _tag_claim("mapped_coefficients_match_refit"):
        k = len(names)
        transform = build_transform(k, 1, residual.control_coefficients)
        transformed = apply_transform(ds, names, transform)
        refit = fit(transformed, response, names)
        mapped = map_coefficients(full.coefficients(), transform)
        reports.append(_report("mapped_coefficients_match_refit",
                               mapped, refit.coefficients(), tolerance))

    if len(controls) == 1:
        x2 = controls[0]
        with _tag_claim("two_predictor_slope_relations"):
            a1 = fit_simple(ds, response, x1).slopes[0]
            a2 = fit_simple(ds, response, x2).slopes[0]
            c12 = fit_simple(ds, x1, x2).slopes[0]
            c21 = fit_simple(ds, x2, x1).slopes[0]
            b1, b2 = full.slopes
            r = pearson_r(ds, x1, x2)
            reports.append(_report(
                "two_predictor_slope_relations",
                (b1 * c12, b2 * c21, c12 * c21),
                (a2 - b2, a1 - b1, r * r),
                tolerance))

    with _tag_claim("aggregation_recovers_subset_slopes"):
        matrix = np.zeros((k, len(controls)))
        matrix[0, :] = fit(ds, x1, controls).slopes
        matrix[1:, :] = np.eye(len(controls))
        aggregated = aggregate_coefficients(full.slopes, matrix)
        subset = fit(ds, response, controls)
        reports.append(_report("aggregation_recovers_subset_slopes",
                               aggregated, subset.slopes, tolerance))

    return reports
