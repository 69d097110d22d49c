"""Increment policies: how much each training row adds to the grid."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ConfigurationError


class Strategy(str, Enum):
    ROW_UNIFORM = "row_uniform"
    PER_CATEGORY = "per_category"
    PER_CATEGORY_ADJUSTED = "per_category_adjusted"
    MANUAL = "manual"


# CLI and descriptor spellings
_ALIASES = {
    "flat": Strategy.ROW_UNIFORM,
    "uniform": Strategy.ROW_UNIFORM,
    "row_uniform": Strategy.ROW_UNIFORM,
    "per_category": Strategy.PER_CATEGORY,
    "category": Strategy.PER_CATEGORY,
    "scaled": Strategy.PER_CATEGORY,
    "per_category_adjusted": Strategy.PER_CATEGORY_ADJUSTED,
    "adjusted": Strategy.PER_CATEGORY_ADJUSTED,
    "manual": Strategy.MANUAL,
}


def parse_strategy(name: str | Strategy) -> Strategy:
    if isinstance(name, Strategy):
        return name
    try:
        return _ALIASES[name.strip().lower().replace("-", "_")]
    except KeyError:
        raise ConfigurationError(
            f"unknown policy {name!r}; expected one of {sorted(_ALIASES)}"
        ) from None


@dataclass(frozen=True)
class IncrementPolicy:
    strategy: Strategy
    cw: float
    ow: tuple[float, ...]
    adjustments: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.cw > 0:
            raise ConfigurationError(f"cell increment must be > 0, got {self.cw}")
        if len(self.ow) == 0 or not all(w > 0 for w in self.ow):
            raise ConfigurationError(f"output increments must all be > 0, got {self.ow}")

    @property
    def ow_array(self) -> np.ndarray:
        return np.asarray(self.ow, dtype=float)

    def summary(self) -> str:
        return f"{self.strategy.value} cw={self.cw:.6g} ow=[{', '.join(f'{w:.6g}' for w in self.ow)}]"

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "cw": self.cw,
            "ow": list(self.ow),
            "adjustments": list(self.adjustments),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IncrementPolicy":
        return cls(
            Strategy(d["strategy"]),
            float(d["cw"]),
            tuple(float(w) for w in d["ow"]),
            tuple(int(a) for a in d.get("adjustments", ())),
        )


def make_policy(
    category_counts: Sequence[int],
    total_rows: int | None = None,
    strategy: str | Strategy = Strategy.PER_CATEGORY,
    adjustments: Sequence[int] | None = None,
    ow: Sequence[float] | None = None,
    denominators: Sequence[float] | None = None,
) -> IncrementPolicy:
    """Build the (cw, ow) increments for a training set.

    ``cw`` is always ``1 / total_rows``. The output increment per category is
    ``1 / total_rows`` (row_uniform), ``1 / count`` (per_category),
    ``1 / (count + adjustment)`` (per_category_adjusted), or caller supplied
    (manual, either as ``ow`` values or as ``denominators``).
    """
    strategy = parse_strategy(strategy)
    counts = [int(c) for c in category_counts]
    if not counts:
        raise ConfigurationError("at least one category is required")
    if total_rows is None:
        total_rows = sum(counts)
    if total_rows != sum(counts):
        raise ConfigurationError(f"total_rows={total_rows} but category counts sum to {sum(counts)}")
    if total_rows < 1:
        raise ConfigurationError("cannot build a policy for an empty training set")
    cw = 1.0 / total_rows
    k = len(counts)

    if strategy is Strategy.ROW_UNIFORM:
        return IncrementPolicy(strategy, cw, (1.0 / total_rows,) * k)

    if strategy is Strategy.MANUAL:
        if (ow is None) == (denominators is None):
            raise ConfigurationError("manual policy needs exactly one of ow or denominators")
        if denominators is not None:
            if any(d <= 0 for d in denominators):
                raise ConfigurationError(f"denominators must be > 0, got {list(denominators)}")
            ow = [1.0 / d for d in denominators]
        if len(ow) != k:
            raise ConfigurationError(f"{len(ow)} output increments for {k} categories")
        return IncrementPolicy(strategy, cw, tuple(float(w) for w in ow))

    if any(c < 1 for c in counts):
        raise ConfigurationError(
            f"per-category increments need every category present; counts={counts}"
        )
    if strategy is Strategy.PER_CATEGORY:
        return IncrementPolicy(strategy, cw, tuple(1.0 / c for c in counts))

    adj = [int(a) for a in (adjustments or ())]
    if len(adj) != k:
        raise ConfigurationError(f"{len(adj)} adjustments for {k} categories")
    denoms = [c + a for c, a in zip(counts, adj)]
    if any(d <= 0 for d in denoms):
        raise ConfigurationError(f"adjusted denominators must stay positive, got {denoms}")
    return IncrementPolicy(strategy, cw, tuple(1.0 / d for d in denoms), tuple(adj))
