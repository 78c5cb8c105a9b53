"""Immutable named-column datasets that every fit draws from."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

import numpy as np

from .errors import DuplicateColumn, LengthMismatch, TooFewRows, UnknownColumn

__all__ = ["Dataset"]


def _freeze(values: Iterable[float], name: str) -> np.ndarray:
    arr = np.array(list(values) if not isinstance(values, np.ndarray) else values,
                   dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"column {name!r} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"column {name!r} contains a non-finite value")
    arr.setflags(write=False)
    return arr


class Dataset:
    """Named columns of equal-length, finite, float64 observations.

    A Dataset is a value: its arrays are frozen against writes and every
    operation that "adds" a column returns a new instance.  Column order is
    the insertion order and is preserved by every derived dataset.

    Parameters
    ----------
    columns:
        Mapping from column name to a sequence of numbers.  At least two
        rows are required (no statistic here is defined on fewer), names
        must be non-empty strings, and all columns must share one length.
    """

    __slots__ = ("_names", "_columns", "_n")

    def __init__(self, columns: Mapping[str, Iterable[float]]):
        if not columns:
            raise ValueError("a dataset needs at least one column")
        names: list[str] = []
        frozen: dict[str, np.ndarray] = {}
        n: int | None = None
        for name, values in columns.items():
            if not isinstance(name, str) or not name:
                raise ValueError("column names must be non-empty strings")
            arr = _freeze(values, name)
            if n is None:
                n = arr.size
            elif arr.size != n:
                raise LengthMismatch(
                    f"column {name!r} has {arr.size} rows, expected {n}")
            names.append(name)
            frozen[name] = arr
        assert n is not None
        if n < 2:
            raise TooFewRows(f"need at least 2 rows, got {n}")
        self._names = tuple(names)
        self._columns = frozen
        self._n = n

    # ------------------------------------------------------------------
    # inspection

    @property
    def n(self) -> int:
        """Number of rows."""
        return self._n

    @property
    def names(self) -> tuple[str, ...]:
        """Column names in insertion order."""
        return self._names

    def __contains__(self, name: object) -> bool:
        return name in self._columns

    def __len__(self) -> int:
        return self._n

    def __repr__(self) -> str:
        cols = ", ".join(self._names)
        return f"Dataset(n={self._n}, columns=[{cols}])"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self._names == other._names and all(
            np.array_equal(self._columns[c], other._columns[c])
            for c in self._names)

    def column(self, name: str) -> np.ndarray:
        """Return the named column as a read-only float64 array."""
        try:
            return self._columns[name]
        except KeyError:
            raise UnknownColumn(f"no column named {name!r}; "
                                f"have {list(self._names)}") from None

    def require(self, *names: str) -> None:
        """Raise :class:`UnknownColumn` unless every name is present."""
        for name in names:
            if name not in self._columns:
                self.column(name)  # raises with the standard message

    def items(self) -> Iterable[tuple[str, np.ndarray]]:
        """Yield ``(name, column)`` pairs in column order."""
        for name in self._names:
            yield name, self._columns[name]

    # ------------------------------------------------------------------
    # derivation

    def with_column(self, name: str, values: Iterable[float]) -> "Dataset":
        """Return a new dataset with ``values`` appended under ``name``."""
        if name in self._columns:
            raise DuplicateColumn(f"column {name!r} already exists")
        merged = {c: self._columns[c] for c in self._names}
        merged[name] = values
        return Dataset(merged)

    def replace_columns(self, replacements: Mapping[str, Iterable[float]]
                        ) -> "Dataset":
        """Return a new dataset with the named columns' values swapped out."""
        for name in replacements:
            self.require(name)
        merged: dict[str, Iterable[float]] = {}
        for name in self._names:
            merged[name] = replacements.get(name, self._columns[name])
        return Dataset(merged)
