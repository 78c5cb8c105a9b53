"""Ordinary least squares with an explicit conditioning gate.

``fit`` solves the normal-equations problem through an orthogonal
decomposition (``numpy.linalg.lstsq``) rather than by forming X'X, and it
refuses designs whose condition number says the answer would be noise.
``fit_simple`` is the one-predictor closed form, kept as a separate code
path on purpose: several identities in this package equate outputs of the
two routes, and that check is only meaningful if they do not share code.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import (
    MissingPredictorValue,
    SingularDesign,
    TooFewRows,
    ZeroVariance,
)
from .stats import column_stats, covariance

__all__ = [
    "CONDITION_LIMIT",
    "RegressionFit",
    "design_matrix",
    "fit",
    "fit_simple",
    "predict",
    "residuals",
]

#: Designs whose 2-norm condition number exceeds this are rejected.
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class RegressionFit:
    """Intercept and named slopes of one least-squares fit.

    ``slopes`` is ordered like ``predictors``.  ``condition_estimate`` is
    the condition number of the design matrix (ones column included) and is
    always below :data:`CONDITION_LIMIT`; ``rss`` is the residual sum of
    squares, never negative.
    """

    response: str
    predictors: tuple[str, ...]
    intercept: float
    slopes: tuple[float, ...]
    condition_estimate: float
    rss: float

    def coefficients(self) -> tuple[float, ...]:
        """Intercept followed by the slopes, in predictor order."""
        return (self.intercept, *self.slopes)

    def slope(self, predictor: str) -> float:
        """Slope attached to one named predictor."""
        try:
            return self.slopes[self.predictors.index(predictor)]
        except ValueError:
            raise MissingPredictorValue(
                f"fit has no predictor {predictor!r}; "
                f"have {list(self.predictors)}") from None


def design_matrix(ds: Dataset, predictors: Sequence[str]) -> np.ndarray:
    """n x (k+1) design whose first column is all ones."""
    columns = [np.ones(ds.n)]
    columns.extend(ds.column(p) for p in predictors)
    return np.column_stack(columns)


def fit(ds: Dataset, response: str,
        predictors: Sequence[str]) -> RegressionFit:
    """Least-squares fit of ``response`` on the named predictors.

    Parameters
    ----------
    ds:
        Source dataset.
    response:
        Column to explain.
    predictors:
        Columns to explain it with, in the order the slopes should come
        back.  May be empty, in which case the fit is just the mean.

    Raises
    ------
    UnknownColumn
        If any named column is absent.
    TooFewRows
        If ``ds.n < len(predictors) + 1``.
    SingularDesign
        If the design's condition number exceeds
        :data:`CONDITION_LIMIT` (constant predictor, repeated predictor,
        collinear predictors, ...).
    """
    preds = tuple(predictors)
    y = ds.column(response)
    x = design_matrix(ds, preds)
    if ds.n < len(preds) + 1:
        raise TooFewRows(
            f"{ds.n} rows cannot determine {len(preds) + 1} coefficients")
    condition = float(np.linalg.cond(x))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularDesign(
            f"design for {response!r} ~ {list(preds)} has condition "
            f"{condition:.3g} (limit {CONDITION_LIMIT:.0e})")
    coef, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ coef
    return RegressionFit(
        response=response,
        predictors=preds,
        intercept=float(coef[0]),
        slopes=tuple(float(c) for c in coef[1:]),
        condition_estimate=condition,
        rss=float(resid @ resid),
    )


def fit_simple(ds: Dataset, response: str, predictor: str) -> RegressionFit:
    """One-predictor fit via the moment closed form.

    ``slope = cov(x, y) / var(x)`` and
    ``intercept = mean(y) - slope * mean(x)``.

    Raises
    ------
    ZeroVariance
        If the predictor is constant.
    """
    x_stats = column_stats(ds, predictor)
    y = ds.column(response)
    if x_stats.variance == 0.0:
        raise ZeroVariance(f"column {predictor!r} is constant")
    slope = covariance(ds, predictor, response) / x_stats.variance
    intercept = float(y.mean()) - slope * x_stats.mean
    resid = y - (intercept + slope * ds.column(predictor))
    condition = float(np.linalg.cond(design_matrix(ds, (predictor,))))
    return RegressionFit(
        response=response,
        predictors=(predictor,),
        intercept=intercept,
        slopes=(slope,),
        condition_estimate=condition,
        rss=float(resid @ resid),
    )


def predict(fitted: RegressionFit, row: Mapping[str, float]) -> float:
    """Fitted value at one observation given as a name -> value mapping.

    Extra keys are ignored; a missing predictor raises
    :class:`MissingPredictorValue` naming every absent column.
    """
    missing = [p for p in fitted.predictors if p not in row]
    if missing:
        raise MissingPredictorValue(
            f"row lacks values for {missing}")
    value = fitted.intercept
    for name, slope in zip(fitted.predictors, fitted.slopes):
        value += slope * float(row[name])
    return value


def residuals(fitted: RegressionFit, ds: Dataset) -> np.ndarray:
    """Observed minus fitted response over a whole dataset.

    ``ds`` may be any dataset carrying the fit's response and predictors;
    passing the training data gives residuals that sum to ~0.
    """
    ds.require(fitted.response, *fitted.predictors)
    y = ds.column(fitted.response)
    fitted_values = np.full(ds.n, fitted.intercept)
    for name, slope in zip(fitted.predictors, fitted.slopes):
        fitted_values = fitted_values + slope * ds.column(name)
    return y - fitted_values
