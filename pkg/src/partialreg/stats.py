"""Descriptive statistics over dataset columns.

All second moments use the population convention (divide by ``n``):
``var(x) = mean((x - mean(x))**2)`` and likewise for covariances.  The
coefficient identities in :mod:`partialreg.identities` are written in terms
of these population moments, and any common rescaling of them (for example
the ``n/(n-1)`` sample correction) cancels in every slope, so nothing here
exposes a convention switch.

Computation is two-pass (center first, then average products), which is the
numerically stable arrangement and makes ``covariance(ds, a, a)`` return the
variance of ``a`` bit for bit.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DegenerateCofactor, NumericalOvershoot, ZeroVariance

__all__ = [
    "CLAMP_TOLERANCE",
    "SummaryStats",
    "column_stats",
    "covariance",
    "pearson_r",
    "correlation_matrix",
    "multiple_correlation",
]

#: How far a correlation (or squared multiple correlation) may overshoot its
#: legal range and still be silently clamped.  Larger excursions raise
#: :class:`NumericalOvershoot` instead of being hidden.
CLAMP_TOLERANCE = 1e-9

#: Below this fraction of the leading cofactor's natural scale the predictor
#: block of a correlation matrix counts as singular.
_COFACTOR_FLOOR = 1e-12


@dataclass(frozen=True)
class SummaryStats:
    """Mean, population variance, and standard deviation of one column."""

    mean: float
    variance: float
    sd: float


def _centered(ds: Dataset, name: str) -> np.ndarray:
    x = ds.column(name)
    return x - x.mean()


def _mean_product(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.mean(a * b))


def column_stats(ds: Dataset, name: str) -> SummaryStats:
    """Summary statistics of one column.

    The variance is the mean squared deviation from the mean; it is zero
    exactly (not merely tiny) for a constant column, which downstream code
    relies on when deciding whether to raise :class:`ZeroVariance`.
    """
    x = ds.column(name)
    dev = x - x.mean()
    variance = _mean_product(dev, dev)
    return SummaryStats(float(x.mean()), variance, math.sqrt(variance))


def covariance(ds: Dataset, a: str, b: str) -> float:
    """Population covariance of two columns.

    Symmetric by construction: the elementwise products commute, so
    ``covariance(ds, a, b) == covariance(ds, b, a)`` exactly.
    """
    return _mean_product(_centered(ds, a), _centered(ds, b))


def _clamp(value: float, lo: float, hi: float, what: str) -> float:
    if value < lo:
        if lo - value > CLAMP_TOLERANCE:
            raise NumericalOvershoot(
                f"{what} = {value!r} is below {lo} by more than "
                f"{CLAMP_TOLERANCE}")
        return lo
    if value > hi:
        if value - hi > CLAMP_TOLERANCE:
            raise NumericalOvershoot(
                f"{what} = {value!r} is above {hi} by more than "
                f"{CLAMP_TOLERANCE}")
        return hi
    return value


def pearson_r(ds: Dataset, a: str, b: str) -> float:
    """Pearson correlation of two columns, clamped to [-1, 1].

    Raises
    ------
    ZeroVariance
        If either column is constant.
    NumericalOvershoot
        If rounding pushed the ratio outside [-1, 1] by more than
        :data:`CLAMP_TOLERANCE`.
    """
    stats_a = column_stats(ds, a)
    stats_b = column_stats(ds, b)
    if stats_a.variance == 0.0:
        raise ZeroVariance(f"column {a!r} is constant")
    if stats_b.variance == 0.0:
        raise ZeroVariance(f"column {b!r} is constant")
    r = covariance(ds, a, b) / (stats_a.sd * stats_b.sd)
    return _clamp(r, -1.0, 1.0, f"pearson_r({a!r}, {b!r})")


def correlation_matrix(ds: Dataset, names: Sequence[str]) -> np.ndarray:
    """Correlation matrix of the named columns.

    Unit diagonal and exact symmetry hold by construction: each off-diagonal
    pair is computed once and mirrored.
    """
    names = list(names)
    for name in names:
        if column_stats(ds, name).variance == 0.0:
            raise ZeroVariance(f"column {name!r} is constant")
    m = len(names)
    corr = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            r = pearson_r(ds, names[i], names[j])
            corr[i, j] = r
            corr[j, i] = r
    return corr


def multiple_correlation(ds: Dataset, target: str,
                         predictors: Sequence[str]) -> float:
    """Multiple correlation of ``target`` with the predictor set.

    Computed as ``sqrt(1 - det(R) / M11)`` where ``R`` is the correlation
    matrix of ``(target, *predictors)`` and ``M11`` is the determinant of
    its predictor block (the minor obtained by deleting the target's row
    and column).  With one predictor this reduces to ``|pearson_r|``.

    Raises
    ------
    DegenerateCofactor
        If the predictor block is singular, i.e. the predictors are
        perfectly collinear among themselves.
    NumericalOvershoot
        If the squared value leaves [0, 1] by more than
        :data:`CLAMP_TOLERANCE`.
    """
    predictors = list(predictors)
    if not predictors:
        raise ValueError("need at least one predictor")
    corr = correlation_matrix(ds, [target, *predictors])
    minor = corr[1:, 1:]
    cofactor = float(np.linalg.det(minor))
    # Hadamard bound: |det| of a unit-diagonal correlation block is <= 1,
    # so the floor needs no further scaling.
    if abs(cofactor) <= _COFACTOR_FLOOR:
        raise DegenerateCofactor(
            f"predictor block of {predictors} is singular "
            f"(det = {cofactor!r})")
    rho_sq = 1.0 - float(np.linalg.det(corr)) / cofactor
    rho_sq = _clamp(rho_sq, 0.0, 1.0,
                    f"multiple_correlation({target!r}, {predictors})**2")
    return math.sqrt(rho_sq)
