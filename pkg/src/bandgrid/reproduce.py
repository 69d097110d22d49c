"""Published accuracy results and the suite that re-runs them."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .data_io import load_split, read_descriptor
from .errors import DataError
from .evaluation import evaluate_holdout, resubstitution


@dataclass(frozen=True)
class Experiment:
    table: str
    dataset: str
    bands: int
    policy: str
    correct: int
    total: int
    tolerance_rows: float | None = None
    tolerance_pp: float | None = None

    def tolerance(self) -> float:
        """Allowed deviation in rows."""
        if self.tolerance_pp is not None:
            return self.tolerance_pp / 100.0 * self.total
        return float(self.tolerance_rows)


PUBLISHED = (
    Experiment("Table 1", "zoo", 10, "per_category", 91, 101, tolerance_rows=2),
    Experiment("Table 1", "wine", 10, "per_category", 172, 178, tolerance_rows=2),
    Experiment("Table 1", "wine", 10, "flat", 177, 178, tolerance_rows=2),
    Experiment("Table 1", "iris", 10, "per_category", 143, 150, tolerance_rows=2),
    Experiment("Table 2", "zoo", 2, "per_category", 94, 101, tolerance_rows=2),
    Experiment("Table 2", "wine", 15, "flat", 178, 178, tolerance_rows=2),
    Experiment("Table 2", "iris", 12, "per_category", 145, 150, tolerance_rows=2),
    Experiment("Table 2", "abalone", 160, "flat", 1452, 4177, tolerance_pp=1.5),
    Experiment("Holdout", "user_modeling", 14, "manual", 127, 145, tolerance_rows=3),
    Experiment("Holdout", "banknote", 17, "per_category", 81, 100, tolerance_rows=3),
)


@dataclass
class Outcome:
    experiment: Experiment
    correct: int | None
    total: int | None
    status: str
    detail: str = ""

    def to_dict(self) -> dict:
        e = self.experiment
        return {
            "table": e.table,
            "dataset": e.dataset,
            "bands": e.bands,
            "policy": e.policy,
            "published_correct": e.correct,
            "published_total": e.total,
            "correct": self.correct,
            "total": self.total,
            "tolerance_rows": round(e.tolerance(), 6),
            "status": self.status,
            "detail": self.detail,
        }


def run_experiment(exp: Experiment, root=None) -> Outcome:
    desc = read_descriptor(exp.dataset)
    try:
        train, test = load_split(desc, root)
    except DataError as exc:
        return Outcome(exp, None, None, "SKIPPED", str(exc))
    if test is None:
        rep = resubstitution(train, exp.bands, exp.policy)
    else:
        rep = evaluate_holdout(train, test, exp.bands, exp.policy)
    ok = rep.total == exp.total and abs(rep.correct - exp.correct) <= exp.tolerance() + 1e-9
    detail = "" if rep.total == exp.total else f"row count {rep.total} differs from {exp.total}"
    return Outcome(exp, rep.correct, rep.total, "PASS" if ok else "FAIL", detail)


def run_suite(root=None, experiments=PUBLISHED) -> list[Outcome]:
    return [run_experiment(e, root) for e in experiments]


def format_text(outcomes: list[Outcome]) -> str:
    head = f"{'Source':8s} {'Dataset':14s} {'Bands':>5s} {'Policy':13s} {'Published':>11s} {'Ours':>11s} {'Diff':>5s} {'Tol':>6s}  Status"
    lines = [head, "-" * len(head)]
    for o in outcomes:
        e = o.experiment
        published = f"{e.correct}/{e.total}"
        ours = f"{o.correct}/{o.total}" if o.correct is not None else "-"
        diff = f"{o.correct - e.correct:+d}" if o.correct is not None else "-"
        lines.append(
            f"{e.table:8s} {e.dataset:14s} {e.bands:>5d} {e.policy:13s} {published:>11s} {ours:>11s} "
            f"{diff:>5s} {e.tolerance():>6.1f}  {o.status}"
        )
    for o in outcomes:
        if o.detail:
            lines.append(f"{o.experiment.dataset}: {o.detail}")
    return "\n".join(lines) + "\n"


def format_json(outcomes: list[Outcome]) -> str:
    return json.dumps({"schema": "bandgrid.reproduce/1", "rows": [o.to_dict() for o in outcomes]}, indent=2) + "\n"
