import json

import numpy as np
import pytest

from bandgrid.data_io import Dataset, parse_descriptor
from bandgrid.errors import ConfigurationError
from bandgrid.evaluation import (
    confusion_matrix, evaluate_holdout, fit, resolve_policy, resubstitution, sweep_bands, weight_slots,
)

DESC = parse_descriptor("""
[dataset]
name = synth
train = none.csv
label_column = 2
category_labels = a, b
[defaults]
bands = 4
policy = flat
""")


def synth(rng, n=60):
    x = rng.random((n, 2))
    y = (x[:, 0] + 0.2 * rng.random(n) > 0.6).astype(np.intp)
    return Dataset(x * 10, y, DESC)


class TestReports:
    def test_resubstitution_counts(self, rng):
        ds = synth(rng)
        rep = resubstitution(ds, 4)
        assert rep.total == 60 and 0 <= rep.correct <= 60
        assert np.trace(rep.confusion) == rep.correct
        assert np.sum(rep.confusion) == 60

    def test_deterministic(self, rng):
        ds = synth(rng)
        assert resubstitution(ds, 5).to_json() == resubstitution(ds, 5).to_json()

    def test_json_schema(self, rng):
        d = json.loads(resubstitution(synth(rng), 3, keep_predictions=True).to_json())
        assert d["schema"] == "bandgrid.report/1" and len(d["predictions"]) == 60
        assert d["policy"]["strategy"] == "row_uniform"

    def test_text_has_table(self, rng):
        text = resubstitution(synth(rng), 3).to_text()
        assert "Correctly classified" in text and "confusion" in text

    def test_holdout_normalizes_on_train_only(self, rng):
        train = synth(rng)
        test = Dataset(np.array([[100.0, -100.0]]), np.array([1]), DESC)
        rep = evaluate_holdout(train, test, 4)
        assert rep.total == 1 and rep.protocol == "holdout"

    def test_holdout_schema_mismatch(self, rng):
        other = Dataset(np.zeros((2, 3)), np.array([0, 1]), DESC)
        with pytest.raises(ConfigurationError):
            evaluate_holdout(synth(rng), other, 4)

    def test_confusion_matrix(self):
        cm = confusion_matrix(np.array([0, 1, 1]), np.array([0, 0, 1]), 2)
        assert cm.tolist() == [[1, 0], [1, 1]]

    def test_policy_from_descriptor(self, rng):
        assert resolve_policy(synth(rng)).strategy.value == "row_uniform"

    def test_gap_boundaries_fit(self, rng):
        m = fit(synth(rng), 4, boundary_mode="gaps")
        assert m.grid.boundaries(0)[-1] == 1.0 and m.grid.boundaries(0).size == 4

    def test_unknown_boundary_mode(self, rng):
        with pytest.raises(ConfigurationError):
            fit(synth(rng), 4, boundary_mode="quantile")


class TestSweep:
    def test_points_and_best(self, rng):
        res = sweep_bands(synth(rng), range(2, 8))
        assert [r.bands for r in res.reports] == list(range(2, 8))
        assert res.best.correct == max(r.correct for r in res.reports)
        assert res.to_csv().splitlines()[0] == "bands,correct,total,accuracy"
        assert len(res.column_variance) == 2

    def test_cell_cap_skips(self, rng):
        cap = weight_slots(2, 5, 2)
        res = sweep_bands(synth(rng), [5, 6], cell_cap=cap)
        assert [r.bands for r in res.reports] == [5] and res.skipped == [6]

    def test_empty_range(self, rng):
        with pytest.raises(ConfigurationError):
            sweep_bands(synth(rng), [])

    def test_local_optima(self, rng):
        res = sweep_bands(synth(rng), [2, 3, 4])
        correct = [5, 7, 6, 9, 8]
        res.reports = [res.reports[0].__class__(**{**res.reports[0].__dict__, "bands": b, "correct": c})
                       for b, c in zip(range(5), correct)]
        assert res.local_optima == [1]


class TestBundledDatasets:
    def test_wine_flat_any_value(self, wine):
        # a flat output increment of 1/50 behaves like 1/178
        counts = wine.category_counts()
        from bandgrid.balance import make_policy
        pol = make_policy(counts, strategy="manual", ow=[1 / 50] * 3)
        assert resubstitution(wine, 10, pol).correct == resubstitution(wine, 10, "flat").correct == 177

    def test_iris_table_values(self, iris):
        assert resubstitution(iris, 10).correct == 143
        assert resubstitution(iris, 12).correct == 145
