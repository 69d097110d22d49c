"""Column-wise min-max scaling and band edge construction."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DataError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormStats:
    """Per-column minimum and maximum seen by :func:`fit_normalizer`."""

    min: np.ndarray
    max: np.ndarray

    @property
    def constant_column(self) -> np.ndarray:
        return self.min == self.max

    @property
    def n_columns(self) -> int:
        return len(self.min)

    def to_dict(self) -> dict:
        return {"min": self.min.tolist(), "max": self.max.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "NormStats":
        return cls(np.asarray(d["min"], dtype=float), np.asarray(d["max"], dtype=float))


def _check_finite(matrix: np.ndarray) -> None:
    bad = np.argwhere(~np.isfinite(matrix))
    if len(bad):
        r, c = bad[0]
        raise DataError(f"non-finite value {matrix[r, c]!r} at row {r}, column {c}")


def fit_normalizer(matrix) -> NormStats:
    """Record the min and max of every column over all given rows."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DataError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    _check_finite(m)
    return NormStats(m.min(axis=0), m.max(axis=0))


def normalize(matrix, stats: NormStats) -> np.ndarray:
    """Scale each column to [0, 1] with ``(x - min) / (max - min)``.

    Constant columns map to 0.0 and values outside the fitted range are
    clamped, so a test row never falls off the grid.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim == 1:
        m = m[None, :]
    if m.shape[1] != stats.n_columns:
        raise ConfigurationError(
            f"matrix has {m.shape[1]} columns but stats were fitted on {stats.n_columns}"
        )
    span = stats.max - stats.min
    const = span == 0
    # keep the exact (x - min) / span form: band placement of boundary values
    # depends on this rounding
    out = (m - stats.min) / np.where(const, 1.0, span)
    out[:, const] = 0.0
    return np.clip(out, 0.0, 1.0)


def uniform_boundaries(num_bands: int) -> np.ndarray:
    """Upper band edges ``[w, 2w, ..., 1.0]`` with ``w = 1.0 / num_bands``.

    Interior edges are ``(i + 1) * w`` in floating point rather than
    ``(i + 1) / num_bands``; the two differ in the last bit for some
    values and that decides which band a value sitting on an edge joins.
    """
    if int(num_bands) != num_bands or num_bands < 1:
        raise ConfigurationError(f"number of bands must be a positive integer, got {num_bands!r}")
    n = int(num_bands)
    width = 1.0 / n
    edges = np.arange(1, n + 1, dtype=float) * width
    edges[-1] = 1.0
    return edges


def gap_boundaries(column_values, num_bands: int) -> np.ndarray:
    """Place edges at the midpoints of the ``num_bands - 1`` widest gaps.

    Gaps are measured between consecutive sorted distinct values; equal gaps
    go to the leftmost one first. With too few distinct values the column
    falls back to uniform bands.
    """
    uniform = uniform_boundaries(num_bands)
    n = int(num_bands)
    vals = np.unique(np.asarray(column_values, dtype=float))
    if not np.all(np.isfinite(vals)):
        raise DataError("column contains non-finite values")
    if len(vals) < n:
        log.warning(
            "only %d distinct values for %d bands; using uniform boundaries", len(vals), n
        )
        return uniform
    if n == 1:
        return uniform
    gaps = np.diff(vals)
    # stable sort on negated width keeps the leftmost of equal gaps first
    chosen = np.sort(np.argsort(-gaps, kind="stable")[: n - 1])
    mids = (vals[chosen] + vals[chosen + 1]) / 2.0
    edges = np.append(mids, 1.0)
    if np.any(np.diff(edges) <= 0):
        # a midpoint at or beyond 1.0 only happens for values above the fitted range
        raise DataError("gap boundaries are not strictly increasing; normalize the column first")
    return edges
