"""The band grid classifier.

Every input variable owns a row of bands over its normalized [0, 1] range.
Each band cell keeps a scale weight (how many training values landed there,
times ``cw``) and one output weight per category (how many of those rows had
that category, times ``ow[category]``). Training is a single pass of
increments; classification sums per-category contributions from the one
cell each variable selects.
"""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ConfigurationError, DataError
from .preprocess import uniform_boundaries


class ContributionMode(str, Enum):
    """How a selected cell turns into per-category votes.

    ``ratio``: ``output_weights / scale_weight``; the cell's category mix
    relative to how busy the cell is. Reproduces the published accuracy tables.

    ``product``: ``value * scale_weight * output_weights``, the input value
    weighted by the cell weight and then by the output weights.
    """

    RATIO = "ratio"
    PRODUCT = "product"

    @property
    def code(self) -> int:
        return kernels.RATIO if self is ContributionMode.RATIO else kernels.PRODUCT


@dataclass(frozen=True)
class Cell:
    scale_weight: float
    output_weights: tuple[float, ...]


@dataclass(frozen=True)
class BandRow:
    boundaries: np.ndarray
    cells: tuple[Cell, ...]

    def __len__(self) -> int:
        return len(self.cells)


def _sig(x: float) -> str:
    return format(float(x), ".10g")


class Grid:
    """Band grid with per-cell scale and output weights.

    Parameters
    ----------
    boundaries : sequence of 1-D arrays
        Upper band edges per variable, strictly increasing, last edge >= 1.
        A value ``x`` falls in the first band with ``x <= edge``.
    categories : sequence
        Output category labels, in index order.
    cw : float
        Scale weight increment per training value.
    ow : sequence of float
        Output weight increment per category.
    mode : ContributionMode or str
        Classification rule, see :class:`ContributionMode`.
    """

    def __init__(
        self,
        boundaries: Sequence[Sequence[float]],
        categories: Sequence[Hashable],
        cw: float,
        ow: Sequence[float],
        mode: ContributionMode | str = ContributionMode.RATIO,
    ):
        if len(boundaries) < 1:
            raise ConfigurationError("a grid needs at least one variable")
        categories = tuple(categories)
        if len(categories) < 1:
            raise ConfigurationError("a grid needs at least one category")
        if len(set(categories)) != len(categories):
            raise ConfigurationError(f"duplicate category labels in {categories}")
        ow = np.asarray(ow, dtype=float)
        if ow.shape != (len(categories),):
            raise ConfigurationError(
                f"ow has {ow.size} entries but there are {len(categories)} categories"
            )
        if not (cw > 0) or not np.all(ow > 0):
            raise ConfigurationError("increments cw and ow must all be positive")
        try:
            self.mode = ContributionMode(mode)
        except ValueError:
            raise ConfigurationError(f"unknown contribution mode {mode!r}") from None

        edges = [np.asarray(b, dtype=float) for b in boundaries]
        for v, e in enumerate(edges):
            if e.ndim != 1 or e.size < 1:
                raise ConfigurationError(f"variable {v}: needs at least one band")
            if np.any(np.diff(e) <= 0):
                raise ConfigurationError(f"variable {v}: boundaries must be strictly increasing")
            if e[-1] < 1.0:
                raise ConfigurationError(f"variable {v}: last boundary {e[-1]} is below 1.0")

        self.categories = categories
        self._cat_index = {c: i for i, c in enumerate(categories)}
        self.cw = float(cw)
        self.ow = ow
        self.n_bands = np.array([e.size for e in edges], dtype=np.intp)
        width = int(self.n_bands.max())
        self.edges = np.full((len(edges), width), np.inf)
        for v, e in enumerate(edges):
            self.edges[v, : e.size] = e
        self.scale = np.zeros((len(edges), width))
        self.outputs = np.zeros((len(edges), width, len(categories)))
        self.cell_updates = 0
        self.rows_trained = 0

    # -- shape -------------------------------------------------------------

    @property
    def n_variables(self) -> int:
        return self.scale.shape[0]

    @property
    def n_categories(self) -> int:
        return len(self.categories)

    @property
    def uniform(self) -> bool:
        return len(set(self.n_bands.tolist())) == 1

    def boundaries(self, variable: int) -> np.ndarray:
        return self.edges[variable, : self.n_bands[variable]].copy()

    def cell(self, variable: int, band: int) -> Cell:
        if not 0 <= band < self.n_bands[variable]:
            raise IndexError(f"variable {variable} has no band {band}")
        return Cell(float(self.scale[variable, band]), tuple(self.outputs[variable, band].tolist()))

    def band_row(self, variable: int) -> BandRow:
        nb = self.n_bands[variable]
        return BandRow(self.boundaries(variable), tuple(self.cell(variable, b) for b in range(nb)))

    def category_index(self, label) -> int:
        try:
            return self._cat_index[label]
        except (KeyError, TypeError):
            raise DataError(f"unknown category {label!r}; known: {list(self.categories)}") from None

    # -- lookup ------------------------------------------------------------

    def _check_width(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.n_variables:
            raise DataError(
                f"expected rows of {self.n_variables} values, got shape {np.shape(x)}"
            )
        return x

    def locate(self, rows) -> np.ndarray:
        """Band index of every value, shape (rows, variables)."""
        return kernels.band_indices(self._check_width(rows), self.edges, self.n_bands)

    def band_index(self, variable: int, value: float) -> int:
        row = np.zeros(self.n_variables)
        if np.isnan(value):
            raise DataError(f"NaN value for variable {variable}")
        row[variable] = value
        return int(self.locate(row)[0, variable])

    # -- training ----------------------------------------------------------

    def train(self, rows, label_indices) -> int:
        """Single pass over ``rows`` with integer category indices.

        Returns the number of cells touched, always rows x variables.
        """
        x = self._check_width(rows)
        y = np.asarray(label_indices)
        if y.shape != (x.shape[0],):
            raise DataError(f"{x.shape[0]} rows but {y.size} labels")
        if y.size and (not np.issubdtype(y.dtype, np.integer) or y.min() < 0 or y.max() >= self.n_categories):
            raise DataError(f"label indices must be integers in [0, {self.n_categories})")
        bands = self.locate(x)
        touched = kernels.train_rows(bands, y, self.scale, self.outputs, self.cw, self.ow)
        self.cell_updates += touched
        self.rows_trained += x.shape[0]
        return touched

    def reset(self) -> "Grid":
        """Zero every weight and counter, keeping boundaries and increments."""
        self.scale[:] = 0.0
        self.outputs[:] = 0.0
        self.cell_updates = 0
        self.rows_trained = 0
        return self

    def train_row(self, row, label) -> "Grid":
        self.train(np.asarray(row, dtype=float)[None, :], [self.category_index(label)])
        return self

    # -- classification ----------------------------------------------------

    def scores(self, rows) -> np.ndarray:
        """Per-category output values ``ov``, shape (rows, categories)."""
        x = self._check_width(rows)
        bands = kernels.band_indices(x, self.edges, self.n_bands)
        return kernels.score_rows(bands, x, self.scale, self.outputs, self.mode.code)

    def predict(self, rows) -> np.ndarray:
        """Winning category index per row; ties go to the lowest index."""
        return np.argmax(self.scores(rows), axis=1)

    def classify_row(self, row) -> tuple[Hashable, np.ndarray]:
        ov = self.scores(row)[0]
        return self.categories[int(np.argmax(ov))], ov

    # -- copies and serialization -----------------------------------------

    def copy(self) -> "Grid":
        g = Grid.__new__(Grid)
        g.__dict__.update(self.__dict__)
        for name in ("ow", "n_bands", "edges", "scale", "outputs"):
            setattr(g, name, getattr(self, name).copy())
        g._cat_index = dict(self._cat_index)
        return g

    def same_weights(self, other: "Grid") -> bool:
        return (
            np.array_equal(self.scale, other.scale)
            and np.array_equal(self.outputs, other.outputs)
            and np.array_equal(self.n_bands, other.n_bands)
        )

    def to_dict(self) -> dict:
        return {
            "categories": [str(c) for c in self.categories],
            "cw": self.cw,
            "ow": self.ow.tolist(),
            "mode": self.mode.value,
            "rows_trained": self.rows_trained,
            "cell_updates": self.cell_updates,
            "variables": [
                {
                    "boundaries": self.boundaries(v).tolist(),
                    "scale": self.scale[v, : self.n_bands[v]].tolist(),
                    "outputs": self.outputs[v, : self.n_bands[v]].tolist(),
                }
                for v in range(self.n_variables)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Grid":
        g = cls(
            [var["boundaries"] for var in d["variables"]],
            d["categories"],
            d["cw"],
            d["ow"],
            d.get("mode", "ratio"),
        )
        for v, var in enumerate(d["variables"]):
            nb = g.n_bands[v]
            g.scale[v, :nb] = var["scale"]
            g.outputs[v, :nb] = var["outputs"]
        g.rows_trained = int(d.get("rows_trained", 0))
        g.cell_updates = int(d.get("cell_updates", 0))
        return g

    def dump(self, variables: Iterable[int] | None = None) -> list[dict]:
        """Weight table per variable, values rounded to 10 significant digits."""
        out = []
        for v in range(self.n_variables) if variables is None else variables:
            if not 0 <= v < self.n_variables:
                raise ConfigurationError(f"no variable {v + 1}; grid has {self.n_variables}")
            bands = []
            for b in range(self.n_bands[v]):
                bands.append(
                    {
                        "band": b + 1,
                        "upper_edge": float(_sig(self.edges[v, b])),
                        "scale_weight": float(_sig(self.scale[v, b])),
                        "output_weights": [float(_sig(w)) for w in self.outputs[v, b]],
                    }
                )
            out.append({"variable": v + 1, "bands": bands})
        return out

    def dump_text(self, variables: Iterable[int] | None = None) -> str:
        lines = ["Categories: " + ", ".join(str(c) for c in self.categories)]
        for var in self.dump(variables):
            lines.append(f"Variable {var['variable']}:")
            for band in var["bands"]:
                outs = ", ".join(_sig(w) for w in band["output_weights"])
                lines.append(f"Weight (B{band['band']}): {_sig(band['scale_weight'])}> Outputs: {outs},")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (
            f"Grid(variables={self.n_variables}, bands={self.n_bands.tolist() if not self.uniform else int(self.n_bands[0])}, "
            f"categories={list(self.categories)}, mode={self.mode.value!r})"
        )


def init_grid(
    num_variables: int,
    num_bands: int,
    categories: Sequence[Hashable],
    cw: float,
    ow: Sequence[float],
    mode: ContributionMode | str = ContributionMode.RATIO,
) -> Grid:
    """All-zero grid with ``num_bands`` uniform bands for every variable."""
    if int(num_variables) != num_variables or num_variables < 1:
        raise ConfigurationError(f"num_variables must be >= 1, got {num_variables!r}")
    edges = uniform_boundaries(num_bands)
    return Grid([edges] * int(num_variables), categories, cw, ow, mode)


def band_index(value: float, boundaries) -> int:
    """0-based band for ``value`` given upper edges (or a :class:`BandRow`).

    The first band whose edge is >= the value wins; values are clamped to
    [0, 1] first and anything past the last edge lands in the last band.
    """
    edges = boundaries.boundaries if isinstance(boundaries, BandRow) else boundaries
    if math.isnan(value):
        raise DataError("cannot place NaN in a band")
    x = min(max(float(value), 0.0), 1.0)
    return min(bisect_left(list(edges), x), len(edges) - 1)
