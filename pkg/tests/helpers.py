"""Shared generators and scan utilities for the test suite."""

from __future__ import annotations

import numpy as np

from partialreg import Dataset, column_stats, covariance, design_matrix


def predictor_names(k: int) -> list[str]:
    return [f"X{i + 1}" for i in range(k)]


def random_dataset(rng: np.random.Generator, n: int, k: int, *,
                   condition_limit: float = 1e6) -> Dataset:
    """Random dataset with correlated predictors and a gated condition.

    Predictors are mixed normals (so they correlate with each other), the
    response is a random linear signal plus noise.  Regenerates until the
    design's condition number is under ``condition_limit``.
    """
    names = predictor_names(k)
    while True:
        base = rng.normal(size=(n, k))
        mix = np.eye(k) + 0.5 * rng.normal(size=(k, k))
        x = base @ mix
        coef = rng.uniform(-3.0, 3.0, size=k)
        y = rng.normal() + x @ coef + rng.normal(scale=0.5, size=n)
        columns = {name: x[:, i] for i, name in enumerate(names)}
        columns["Y"] = y
        ds = Dataset(columns)
        if np.linalg.cond(design_matrix(ds, names)) < condition_limit:
            return ds


def random_integer_dataset(rng: np.random.Generator, n: int, k: int, *,
                           condition_limit: float = 1e3
                           ) -> tuple[Dataset, dict[str, list[int]]]:
    """Small-integer dataset plus its exact integer columns.

    Entries lie in [-9, 9]; the same integers feed the rational oracle, so
    there is no representation gap between the two computations.
    """
    names = predictor_names(k)
    while True:
        raw = {name: rng.integers(-9, 10, size=n) for name in names}
        raw["Y"] = rng.integers(-9, 10, size=n)
        if any(np.all(v == v[0]) for v in raw.values()):
            continue
        ds = Dataset({name: raw[name].astype(float)
                      for name in (*names, "Y")})
        if np.linalg.cond(design_matrix(ds, names)) < condition_limit:
            return ds, {name: [int(v) for v in raw[name]]
                        for name in (*names, "Y")}


def gamma_scan_values(ds: Dataset, response: str, x1: str, x2: str,
                      gammas: np.ndarray) -> np.ndarray:
    """Vectorized scan of the combined-predictor slope over a gamma grid.

    Re-derives the rational form from column moments without touching the
    library's own grid evaluator, so sweeps have something independent to
    agree with.
    """
    c1y = covariance(ds, x1, response)
    c2y = covariance(ds, x2, response)
    c12 = covariance(ds, x1, x2)
    v1 = column_stats(ds, x1).variance
    v2 = column_stats(ds, x2).variance
    return (c1y - gammas * c2y) / (v1 - 2.0 * gammas * c12
                                   + gammas ** 2 * v2)


def crossing_points(gammas: np.ndarray, values: np.ndarray,
                    target: float) -> np.ndarray:
    """Grid locations where ``values - target`` changes sign.

    Returns the midpoint of each bracketing interval; an exact hit on a
    grid point returns that point itself.
    """
    signed = values - target
    hits = list(gammas[signed == 0.0])
    products = signed[:-1] * signed[1:]
    for i in np.nonzero(products < 0.0)[0]:
        hits.append((gammas[i] + gammas[i + 1]) / 2.0)
    return np.array(sorted(float(h) for h in hits))


def sign_change_count(values: np.ndarray, *, zero_floor: float) -> int:
    """Sign changes of ``diff(values)``, treating |diff| <= floor as zero."""
    steps = np.diff(values)
    signs = np.sign(np.where(np.abs(steps) <= zero_floor, 0.0, steps))
    signs = signs[signs != 0.0]
    if signs.size < 2:
        return 0
    return int(np.sum(signs[1:] != signs[:-1]))
