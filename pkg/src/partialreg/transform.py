"""Residualized predictors and linear predictor transforms.

Orientation convention, used everywhere in this module: an observation is
the row vector ``(1, x1, ..., xk)`` and a transform acts by right
multiplication.  New predictor ``j`` is therefore assembled from the
weights in **column** ``j`` of ``gamma``::

    new_j = sum_i gamma[i, j] * old_i

and a coefficient column vector ``(b0, b1, ..., bk)`` moves the opposite
way: the intercept is untouched and the slopes are multiplied by
``gamma^-1``.  Fitting on transformed columns and transforming the
coefficients of the original fit must land on the same numbers; that
round trip is what :func:`map_coefficients` is for.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import (
    IndexOutOfRange,
    LengthMismatch,
    ShapeMismatch,
    SingularTransform,
)
from .ols import design_matrix, fit

__all__ = [
    "INVERSE_RESIDUAL_LIMIT",
    "PredictorTransform",
    "ResidualizedVariable",
    "residualize",
    "residualize_with",
    "build_transform",
    "apply_transform",
    "map_coefficients",
]

#: Max-norm bound on ``gamma @ inverse - identity`` for a usable inverse.
INVERSE_RESIDUAL_LIMIT = 1e-12

#: Singular-value ratio below which a transform is rejected outright.
_SINGULAR_FLOOR = 1e-12


@dataclass(frozen=True)
class PredictorTransform:
    """A nonsingular linear map of the ``k`` predictors.

    ``gamma`` is the k x k block acting on the predictors alone; see the
    module docstring for which way it multiplies.  Nonsingularity is
    checked at construction.
    """

    gamma: np.ndarray

    def __post_init__(self) -> None:
        g = np.array(self.gamma, dtype=np.float64)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ShapeMismatch(f"transform must be square, got {g.shape}")
        if g.shape[0] == 0:
            raise ShapeMismatch("transform must act on at least 1 predictor")
        if not np.all(np.isfinite(g)):
            raise ValueError("transform contains a non-finite value")
        singular_values = np.linalg.svd(g, compute_uv=False)
        if singular_values[-1] <= _SINGULAR_FLOOR * singular_values[0]:
            raise SingularTransform(
                f"transform is singular to working precision "
                f"(singular values {singular_values[0]:.3g} .. "
                f"{singular_values[-1]:.3g})")
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)

    @property
    def k(self) -> int:
        """Number of predictors the transform acts on."""
        return self.gamma.shape[0]

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.gamma))

    def full_matrix(self) -> np.ndarray:
        """(k+1) x (k+1) block matrix fixing the leading constant 1."""
        full = np.zeros((self.k + 1, self.k + 1))
        full[0, 0] = 1.0
        full[1:, 1:] = self.gamma
        return full

    def inverse_gamma(self) -> np.ndarray:
        """Refined inverse of ``gamma`` with its residual checked.

        One Newton step on the solved inverse squares the residual, so a
        merely ill-conditioned matrix still meets the gate while an
        effectively singular one fails it loudly.
        """
        identity = np.eye(self.k)
        try:
            inv = np.linalg.solve(self.gamma, identity)
        except np.linalg.LinAlgError as exc:
            raise SingularTransform(str(exc)) from None
        inv = inv + inv @ (identity - self.gamma @ inv)
        # If row i of gamma is literally e_i then row i of the inverse is
        # too (e_i' @ inv = (gamma @ inv) row i = identity row i), and the
        # same goes for unit columns.  Snapping them keeps untouched
        # predictors untouched exactly instead of to rounding.
        for i in range(self.k):
            if np.array_equal(self.gamma[i, :], identity[i, :]):
                inv[i, :] = identity[i, :]
            if np.array_equal(self.gamma[:, i], identity[:, i]):
                inv[:, i] = identity[:, i]
        residual = float(np.max(np.abs(self.gamma @ inv - identity)))
        if residual > INVERSE_RESIDUAL_LIMIT:
            raise SingularTransform(
                f"inverse residual {residual:.3g} exceeds "
                f"{INVERSE_RESIDUAL_LIMIT:.0e}")
        return inv


@dataclass(frozen=True)
class ResidualizedVariable:
    """A predictor with fitted multiples of the controls removed.

    ``values = target - sum_j control_coefficients[j] * controls[j]``.  Only the
    slope pieces are subtracted; the intercept of the auxiliary regression
    is deliberately left in, so the residualized variable keeps a nonzero
    mean in general.  ``name`` defaults to the target's name with ``*``
    appended.
    """

    name: str
    target: str
    controls: tuple[str, ...]
    control_coefficients: tuple[float, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        if len(self.controls) != len(self.control_coefficients):
            raise LengthMismatch(
                f"{len(self.controls)} controls but "
                f"{len(self.control_coefficients)} coefficients")
        vals = np.array(self.values, dtype=np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def merged_into(self, ds: Dataset) -> Dataset:
        """Return ``ds`` with this variable appended as a column."""
        return ds.with_column(self.name, self.values)


def _combine(ds: Dataset, target: str, controls: Sequence[str],
             coefficients: Sequence[float], name: str | None
             ) -> ResidualizedVariable:
    values = np.array(ds.column(target))
    for control, coeff in zip(controls, coefficients):
        values = values - float(coeff) * ds.column(control)
    return ResidualizedVariable(
        name=name if name is not None else target + "*",
        target=target,
        controls=tuple(controls),
        control_coefficients=tuple(float(c) for c in coefficients),
        values=values,
    )


def residualize(ds: Dataset, target: str, controls: Sequence[str],
                name: str | None = None) -> ResidualizedVariable:
    """Remove the fitted influence of ``controls`` from ``target``.

    The subtracted multiples are the slopes of the least-squares fit of
    ``target`` on ``controls``, so the result is uncorrelated with every
    control (up to rounding).

    Raises
    ------
    SingularDesign
        If the auxiliary fit of ``target`` on ``controls`` is not well
        posed.
    """
    controls = list(controls)
    if not controls:
        raise ValueError("need at least one control")
    aux = fit(ds, target, controls)
    return _combine(ds, target, controls, aux.slopes, name)


def residualize_with(ds: Dataset, target: str, controls: Sequence[str],
                     coefficients: Sequence[float],
                     name: str | None = None) -> ResidualizedVariable:
    """Subtract caller-chosen multiples of the controls from ``target``.

    No orthogonality is implied: this is the tool for sweeping arbitrary
    coefficients, with :func:`residualize` as the special case that picks
    the fitted ones.
    """
    controls = list(controls)
    if len(coefficients) != len(controls):
        raise LengthMismatch(
            f"{len(controls)} controls but {len(coefficients)} coefficients")
    ds.require(target, *controls)
    return _combine(ds, target, controls, coefficients, name)


def build_transform(k: int, target_index: int,
                    coefficients: Sequence[float]) -> PredictorTransform:
    """Transform that residualizes predictor ``target_index`` (1-based).

    The returned ``gamma`` is the identity except in column
    ``target_index``, where the rows of the other predictors carry minus
    the given coefficients (in ascending predictor order).  Applying it
    replaces only that one predictor::

        new_t = old_t - sum_j coefficients[j] * old_j

    Its determinant is exactly 1, so the transform is always invertible.

    Raises
    ------
    IndexOutOfRange
        If ``target_index`` is not in ``1..k``.
    LengthMismatch
        If ``len(coefficients) != k - 1``.
    """
    if k < 1:
        raise IndexOutOfRange(f"k must be at least 1, got {k}")
    if not 1 <= target_index <= k:
        raise IndexOutOfRange(
            f"target_index {target_index} outside 1..{k}")
    coefficients = [float(c) for c in coefficients]
    if len(coefficients) != k - 1:
        raise LengthMismatch(
            f"expected {k - 1} coefficients for k={k}, "
            f"got {len(coefficients)}")
    gamma = np.eye(k)
    others = [i for i in range(k) if i != target_index - 1]
    for row, coeff in zip(others, coefficients):
        gamma[row, target_index - 1] = -coeff
    return PredictorTransform(gamma)


def apply_transform(ds: Dataset, predictors: Sequence[str],
                    transform: PredictorTransform) -> Dataset:
    """Replace the named predictor columns by their transformed versions.

    Column ``predictors[j]`` ends up holding
    ``sum_i gamma[i, j] * old_i``; every other column of ``ds`` passes
    through untouched and column order is preserved.
    """
    predictors = list(predictors)
    if len(predictors) != transform.k:
        raise LengthMismatch(
            f"{len(predictors)} predictors but transform acts on "
            f"{transform.k}")
    design = design_matrix(ds, predictors)
    transformed = design @ transform.full_matrix()
    replacements = {
        name: transformed[:, j + 1] for j, name in enumerate(predictors)
    }
    return ds.replace_columns(replacements)


def map_coefficients(coefficients: Sequence[float],
                     transform: PredictorTransform) -> tuple[float, ...]:
    """Coefficients of the same fit expressed in transformed predictors.

    The intercept passes through; the slope block is multiplied by the
    inverse of ``gamma``.  If ``b`` solves the original least-squares
    problem then the returned vector solves the problem on the transformed
    columns, to rounding.

    Raises
    ------
    ShapeMismatch
        If ``len(coefficients) != k + 1``.
    SingularTransform
        If the inverse cannot be computed within
        :data:`INVERSE_RESIDUAL_LIMIT`.
    """
    coefficients = [float(c) for c in coefficients]
    if len(coefficients) != transform.k + 1:
        raise ShapeMismatch(
            f"expected {transform.k + 1} coefficients "
            f"(intercept + {transform.k} slopes), got {len(coefficients)}")
    slopes = np.array(coefficients[1:])
    mapped = transform.inverse_gamma() @ slopes
    return (coefficients[0], *(float(b) for b in mapped))
