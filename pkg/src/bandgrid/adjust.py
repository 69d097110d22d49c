"""Experimental competitive adjustment after single-pass training.

For every misclassified row, each variable's selected cell is nudged: a cell
whose strongest output already names the true category is reinforced, any
other cell loses weight from the category it currently favours. Scale
weights are never touched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grid import Grid

MODES = ("dominant", "true_class", "all_others")


@dataclass(frozen=True)
class AdjustConfig:
    eta: float = 0.01
    epochs: int = 1
    floor: float = 0.0
    mode: str = "dominant"

    def __post_init__(self):
        if not self.eta >= 0:
            raise ConfigurationError(f"eta must be >= 0, got {self.eta}")
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be >= 1, got {self.epochs}")
        if not self.floor >= 0:
            raise ConfigurationError(f"floor must be >= 0, got {self.floor}")
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown adjust mode {self.mode!r}; use one of {MODES}")


def _lower(w: float, eta: float, floor: float) -> float:
    # a weight already under the floor is left alone rather than raised
    return max(w - eta, floor) if w >= floor else w


def _nudge(out: np.ndarray, true: int, cfg: AdjustConfig) -> None:
    dom = int(np.argmax(out))
    if dom == true:
        out[true] += cfg.eta
    elif cfg.mode == "dominant":
        out[dom] = _lower(out[dom], cfg.eta, cfg.floor)
    elif cfg.mode == "true_class":
        out[true] = _lower(out[true], cfg.eta, cfg.floor)
    else:
        for c in range(out.size):
            if c != true:
                out[c] = _lower(out[c], cfg.eta, cfg.floor)


def adjust_pass(grid: Grid, rows, labels, config: AdjustConfig = AdjustConfig()) -> tuple[Grid, int]:
    """Run ``config.epochs`` sequential passes over normalized ``rows``.

    Returns a new grid and the number of rows misclassified by the input grid
    but classified correctly by the adjusted one. ``grid`` is not modified.
    """
    x = grid._check_width(rows)
    y = np.asarray(labels, dtype=np.intp)
    before = grid.predict(x) == y
    g = grid.copy()
    if config.eta == 0:
        return g, 0
    bands = g.locate(x)
    for _ in range(config.epochs):
        for r in range(x.shape[0]):
            if g.predict(x[r])[0] == y[r]:
                continue
            for v in range(g.n_variables):
                _nudge(g.outputs[v, bands[r, v]], int(y[r]), config)
    after = g.predict(x) == y
    return g, int(np.sum(~before & after))
