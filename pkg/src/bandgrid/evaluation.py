"""Accuracy reports, holdout runs and band-count sweeps."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .balance import IncrementPolicy, Strategy, make_policy, parse_strategy
from .data_io import Dataset
from .errors import ConfigurationError
from .grid import ContributionMode, Grid
from .preprocess import NormStats, fit_normalizer, gap_boundaries, normalize, uniform_boundaries

REPORT_SCHEMA = "bandgrid.report/1"
SWEEP_SCHEMA = "bandgrid.sweep/1"
DEFAULT_CELL_CAP = 10**7


@dataclass
class Model:
    """A trained grid plus what is needed to feed it raw rows."""

    grid: Grid
    stats: NormStats
    policy: IncrementPolicy
    bands: int
    boundary_mode: str = "uniform"

    def predict_raw(self, rows) -> np.ndarray:
        return self.grid.predict(normalize(rows, self.stats))


def resolve_policy(
    train: Dataset,
    strategy: str | Strategy | IncrementPolicy | None = None,
    adjustments: Sequence[int] | None = None,
    denominators: Sequence[float] | None = None,
) -> IncrementPolicy:
    """Policy for ``train``; unset pieces come from the dataset descriptor."""
    if isinstance(strategy, IncrementPolicy):
        return strategy
    desc = train.descriptor
    strategy = parse_strategy(strategy or desc.default_policy)
    if adjustments is None and strategy is Strategy.PER_CATEGORY_ADJUSTED:
        adjustments = desc.adjustments
    if denominators is None and strategy is Strategy.MANUAL:
        denominators = desc.denominators
    return make_policy(
        train.category_counts(),
        train.n_rows,
        strategy,
        adjustments=adjustments,
        denominators=denominators or None,
    )


def build_boundaries(normalized: np.ndarray, bands: int, boundary_mode: str) -> list[np.ndarray]:
    if boundary_mode == "uniform":
        return [uniform_boundaries(bands)] * normalized.shape[1]
    if boundary_mode == "gaps":
        return [gap_boundaries(normalized[:, v], bands) for v in range(normalized.shape[1])]
    raise ConfigurationError(f"unknown boundary mode {boundary_mode!r}; use uniform or gaps")


def fit(
    train: Dataset,
    bands: int,
    policy=None,
    boundary_mode: str = "uniform",
    mode: ContributionMode | str = ContributionMode.RATIO,
) -> Model:
    """Normalize on ``train`` and run the single training pass."""
    stats = fit_normalizer(train.features)
    xn = normalize(train.features, stats)
    pol = resolve_policy(train, policy)
    if len(pol.ow) != len(train.categories):
        raise ConfigurationError(f"policy has {len(pol.ow)} increments for {len(train.categories)} categories")
    grid = Grid(build_boundaries(xn, bands, boundary_mode), train.categories, pol.cw, pol.ow, mode)
    grid.train(xn, train.labels)
    return Model(grid, stats, pol, int(bands), boundary_mode)


@dataclass
class EvalReport:
    dataset: str
    protocol: str
    bands: int
    boundary_mode: str
    mode: str
    policy: dict
    categories: list[str]
    correct: int
    total: int
    confusion: list[list[int]]
    predictions: list[int] | None = None
    notes: list[str] = field(default_factory=list)
    schema: str = REPORT_SCHEMA

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["accuracy"] = round(self.accuracy, 12)
        if self.predictions is None:
            del d["predictions"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary_line(self) -> str:
        return (
            f"{self.dataset:16s} {self.bands:>5d}  {self.policy['strategy']:22s} "
            f"{self.correct:>5d} from {self.total:<5d} {100 * self.accuracy:6.1f}%"
        )

    def to_text(self) -> str:
        lines = [
            f"{'Dataset':16s} {'Bands':>5s}  {'Policy':22s} {'Correctly classified':17s} % Correct",
            self.summary_line(),
            "",
            f"protocol: {self.protocol}; boundaries: {self.boundary_mode}; contribution: {self.mode}",
            "confusion (rows = true, columns = predicted):",
        ]
        width = max(6, *(len(c) for c in self.categories))
        lines.append(" " * (width + 1) + " ".join(f"{c:>{width}s}" for c in self.categories))
        for cat, row in zip(self.categories, self.confusion):
            lines.append(f"{cat:>{width}s} " + " ".join(f"{n:>{width}d}" for n in row))
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def confusion_matrix(true: np.ndarray, pred: np.ndarray, n: int) -> np.ndarray:
    cm = np.zeros((n, n), dtype=np.int64)
    np.add.at(cm, (true, pred), 1)
    return cm


def evaluate(
    model: Model,
    dataset: Dataset,
    protocol: str = "resubstitution",
    keep_predictions: bool = False,
) -> EvalReport:
    """Classify every row of ``dataset`` with a trained model."""
    if dataset.n_variables != model.grid.n_variables:
        raise ConfigurationError(
            f"dataset has {dataset.n_variables} variables, model expects {model.grid.n_variables}"
        )
    pred = model.predict_raw(dataset.features)
    cm = confusion_matrix(dataset.labels, pred, model.grid.n_categories)
    return EvalReport(
        dataset=dataset.name,
        protocol=protocol,
        bands=model.bands,
        boundary_mode=model.boundary_mode,
        mode=model.grid.mode.value,
        policy=model.policy.to_dict(),
        categories=[str(c) for c in model.grid.categories],
        correct=int(np.trace(cm)),
        total=int(dataset.n_rows),
        confusion=cm.tolist(),
        predictions=pred.tolist() if keep_predictions else None,
    )


def resubstitution(dataset: Dataset, bands: int, policy=None, boundary_mode="uniform", mode="ratio", **kw) -> EvalReport:
    """Train on every row, then classify the same rows."""
    return evaluate(fit(dataset, bands, policy, boundary_mode, mode), dataset, "resubstitution", **kw)


def evaluate_holdout(
    train: Dataset, test: Dataset, bands: int, policy=None, boundary_mode="uniform", mode="ratio", **kw
) -> EvalReport:
    """Normalize and train on ``train`` only; report on ``test``."""
    if train.n_variables != test.n_variables or tuple(train.categories) != tuple(test.categories):
        raise ConfigurationError(
            f"train/test schemas differ: {train.n_variables} vs {test.n_variables} variables"
        )
    return evaluate(fit(train, bands, policy, boundary_mode, mode), test, "holdout", **kw)


@dataclass
class SweepResult:
    dataset: str
    reports: list[EvalReport]
    skipped: list[int]
    column_variance: list[float]

    @property
    def accuracies(self) -> list[tuple[int, float]]:
        return [(r.bands, r.accuracy) for r in self.reports]

    @property
    def best(self) -> EvalReport | None:
        # first of the equal best keeps the smallest band count
        return max(self.reports, key=lambda r: r.correct, default=None)

    @property
    def local_optima(self) -> list[int]:
        """Band counts that peak locally but are beaten elsewhere in the sweep."""
        acc = [r.correct for r in self.reports]
        best = max(acc, default=0)
        peaks = []
        i = 0
        while i < len(acc):
            j = i
            while j + 1 < len(acc) and acc[j + 1] == acc[i]:
                j += 1
            left = acc[i - 1] if i > 0 else None
            right = acc[j + 1] if j + 1 < len(acc) else None
            higher_left = left is None or left < acc[i]
            higher_right = right is None or right < acc[i]
            if higher_left and higher_right and acc[i] < best and left is not None and right is not None:
                peaks.append(self.reports[i].bands)
            i = j + 1
        return peaks

    def to_dict(self) -> dict:
        best = self.best
        return {
            "schema": SWEEP_SCHEMA,
            "dataset": self.dataset,
            "points": [
                {"bands": r.bands, "correct": r.correct, "total": r.total, "accuracy": round(r.accuracy, 12)}
                for r in self.reports
            ],
            "best_bands": best.bands if best else None,
            "local_optima": self.local_optima,
            "skipped": self.skipped,
            "column_variance": [round(v, 12) for v in self.column_variance],
        }

    def to_csv(self) -> str:
        rows = ["bands,correct,total,accuracy"]
        rows += [f"{r.bands},{r.correct},{r.total},{r.accuracy:.6f}" for r in self.reports]
        return "\n".join(rows) + "\n"

    def to_text(self) -> str:
        lines = [f"{'Bands':>5s} {'Correct':>8s} {'Total':>6s} {'%':>7s}"]
        best = self.best
        for r in self.reports:
            mark = " *" if best is not None and r is best else ""
            lines.append(f"{r.bands:>5d} {r.correct:>8d} {r.total:>6d} {100 * r.accuracy:6.1f}%{mark}")
        for b in self.skipped:
            lines.append(f"{b:>5d}  SKIPPED (cell cap)")
        if self.local_optima:
            lines.append("local optima at bands: " + ", ".join(map(str, self.local_optima)))
        lines.append("column variance (normalized): " + ", ".join(f"{v:.4f}" for v in self.column_variance))
        return "\n".join(lines) + "\n"


def weight_slots(n_variables: int, bands: int, n_categories: int) -> int:
    """Stored weights for one configuration: a scale plus one output per category per cell."""
    return n_variables * bands * (1 + n_categories)


def sweep_bands(
    dataset: Dataset,
    band_range: Iterable[int],
    policy=None,
    test: Dataset | None = None,
    boundary_mode: str = "uniform",
    mode: ContributionMode | str = ContributionMode.RATIO,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> SweepResult:
    """Evaluate every band count; resubstitution unless ``test`` is given."""
    bands_list = list(band_range)
    if not bands_list:
        raise ConfigurationError("band range is empty")
    reports, skipped = [], []
    for b in bands_list:
        if weight_slots(dataset.n_variables, b, len(dataset.categories)) > cell_cap:
            skipped.append(b)
            continue
        if test is None:
            reports.append(resubstitution(dataset, b, policy, boundary_mode, mode))
        else:
            reports.append(evaluate_holdout(dataset, test, b, policy, boundary_mode, mode))
    xn = normalize(dataset.features, fit_normalizer(dataset.features))
    return SweepResult(dataset.name, reports, skipped, xn.var(axis=0).tolist())
