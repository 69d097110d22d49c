import json

import numpy as np
import pytest

from bandgrid.cli import band_range, main
from conftest import DATA_ROOT, GOLDEN, load_or_skip

DESCRIPTOR = """
[dataset]
name = toy
train = toy.csv
label_column = 2
category_labels = a, b
[defaults]
bands = 4
policy = per_category
"""


@pytest.fixture
def toy(tmp_path):
    rng = np.random.default_rng(3)
    x = rng.random((40, 2))
    y = np.where(x[:, 0] > 0.5, "b", "a")
    (tmp_path / "toy.csv").write_text("".join(f"{p:.4f},{q:.4f},{c}\n" for (p, q), c in zip(x, y)))
    (tmp_path / "toy.ini").write_text(DESCRIPTOR)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestTrainEvaluate:
    def test_evaluate_text(self, toy, capsys):
        code, out, _ = run(capsys, "evaluate", "--descriptor", toy / "toy.ini", "--data-root", toy)
        assert code == 0 and "from 40" in out

    def test_evaluate_json(self, toy, capsys):
        code, out, _ = run(capsys, "evaluate", "--descriptor", toy / "toy.ini", "--data-root", toy,
                           "--bands", 6, "--format", "json")
        d = json.loads(out)
        assert code == 0 and d["bands"] == 6 and d["total"] == 40

    def test_train_then_evaluate_model(self, toy, capsys):
        model = toy / "m.json"
        code, out, _ = run(capsys, "train", "--descriptor", toy / "toy.ini", "--data-root", toy, "--model", model)
        assert code == 0 and "80 cell updates" in out
        code, out, _ = run(capsys, "evaluate", "--model", model, "--descriptor", toy / "toy.ini",
                           "--data-root", toy, "--format", "json")
        assert code == 0 and json.loads(out)["bands"] == 4

    def test_train_refuses_overwrite(self, toy, capsys):
        model = toy / "m.json"
        model.write_text("{}")
        code, _, err = run(capsys, "train", "--descriptor", toy / "toy.ini", "--data-root", toy, "--model", model)
        assert code == 4 and "--force" in err

    def test_model_for_other_dataset_refused(self, toy, capsys):
        model = toy / "m.json"
        run(capsys, "train", "--descriptor", toy / "toy.ini", "--data-root", toy, "--model", model)
        other = toy / "other.ini"
        other.write_text(DESCRIPTOR.replace("bands = 4", "bands = 5"))
        code, _, err = run(capsys, "evaluate", "--model", model, "--descriptor", other, "--data-root", toy)
        assert code == 4 and "retrain" in err

    def test_adjust_reports_before_after(self, toy, capsys):
        code, out, _ = run(capsys, "evaluate", "--descriptor", toy / "toy.ini", "--data-root", toy,
                           "--adjust", "--eta", 0.05)
        assert code == 0 and "adjustment phase" in out

    def test_output_file(self, toy, capsys):
        target = toy / "report.json"
        run(capsys, "evaluate", "--descriptor", toy / "toy.ini", "--data-root", toy, "--format", "json",
            "--output", target)
        assert json.loads(target.read_text())["schema"] == "bandgrid.report/1"


class TestErrors:
    def test_missing_data_exit_3(self, tmp_path, capsys):
        (tmp_path / "toy.ini").write_text(DESCRIPTOR)
        code, _, err = run(capsys, "evaluate", "--descriptor", tmp_path / "toy.ini", "--data-root", tmp_path)
        assert code == 3 and "not found" in err

    def test_bad_policy_exit_4(self, toy, capsys):
        code, _, _ = run(capsys, "evaluate", "--descriptor", toy / "toy.ini", "--data-root", toy, "--policy", "nope")
        assert code == 4

    def test_zero_bands_exit_4(self, toy, capsys):
        code, _, _ = run(capsys, "evaluate", "--descriptor", toy / "toy.ini", "--data-root", toy, "--bands", 0)
        assert code == 4

    def test_usage_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--dataset", "iris"])
        assert exc.value.code == 2

    def test_env_data_root(self, toy, capsys, monkeypatch):
        monkeypatch.setenv("BANDGRID_DATA", str(toy))
        code, _, _ = run(capsys, "evaluate", "--descriptor", toy / "toy.ini")
        assert code == 0


class TestSweep:
    def test_plot_data(self, toy, capsys):
        csv = toy / "sweep.csv"
        code, out, _ = run(capsys, "sweep", "--descriptor", toy / "toy.ini", "--data-root", toy,
                           "--range", "2:6", "--plot-data", csv)
        assert code == 0 and len(csv.read_text().splitlines()) == 6
        assert "column variance" in out

    def test_json(self, toy, capsys):
        _, out, _ = run(capsys, "sweep", "--descriptor", toy / "toy.ini", "--data-root", toy,
                        "--range", "2,4", "--format", "json")
        assert [p["bands"] for p in json.loads(out)["points"]] == [2, 4]

    @pytest.mark.parametrize("text,expected", [("5:8", [5, 6, 7, 8]), ("5:20:5", [5, 10, 15, 20]), ("2,10", [2, 10])])
    def test_band_range(self, text, expected):
        assert band_range(text) == expected


class TestInspect:
    def test_golden_iris_variable_1(self, tmp_path, capsys):
        load_or_skip("iris")
        model = tmp_path / "iris.json"
        run(capsys, "train", "--dataset", "iris", "--bands", 12, "--data-root", DATA_ROOT, "--model", model)
        code, out, _ = run(capsys, "inspect", "--model", model, "--variable", 1)
        assert code == 0
        assert out == (GOLDEN / "iris12_var1.txt").read_text()

    def test_json(self, toy, capsys):
        model = toy / "m.json"
        run(capsys, "train", "--descriptor", toy / "toy.ini", "--data-root", toy, "--model", model)
        _, out, _ = run(capsys, "inspect", "--model", model, "--format", "json")
        d = json.loads(out)
        assert [v["variable"] for v in d["variables"]] == [1, 2]
        assert len(d["variables"][0]["bands"]) == 4

    def test_bad_variable(self, toy, capsys):
        model = toy / "m.json"
        run(capsys, "train", "--descriptor", toy / "toy.ini", "--data-root", toy, "--model", model)
        code, _, _ = run(capsys, "inspect", "--model", model, "--variable", 9)
        assert code == 4


def test_reproduce_json(capsys):
    code, out, _ = run(capsys, "reproduce", "--data-root", DATA_ROOT, "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 10
    assert {r["status"] for r in rows} <= {"PASS", "FAIL", "SKIPPED"}


def test_reproduce_is_byte_identical(capsys):
    _, first, _ = run(capsys, "reproduce", "--data-root", DATA_ROOT)
    _, second, _ = run(capsys, "reproduce", "--data-root", DATA_ROOT)
    assert first == second
    assert sum(line.endswith(("PASS", "FAIL", "SKIPPED")) for line in first.splitlines()) == 10
