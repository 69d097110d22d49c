import numpy as np
import pytest

from bandgrid.data_io import (
    DATA_ENV, bundled_descriptors, data_root, encode_categorical, evenly_spaced_rows, load, load_split,
    parse_descriptor, read_descriptor,
)
from bandgrid.errors import ConfigurationError, DataError

TOY = """
[dataset]
name = toy
train = toy.csv
delimiter = comma
label_column = 3
ignore_columns = 0
category_labels = no, yes

[categorical]
2 = lo, mid, hi

[label_aliases]
N = no
"""


def _write(tmp_path, body, name="toy.csv", descriptor=TOY):
    (tmp_path / name).write_text(body)
    return parse_descriptor(descriptor)


class TestDescriptor:
    def test_bundled(self):
        assert {"iris", "wine", "zoo", "abalone", "user_modeling", "banknote"} <= set(bundled_descriptors())

    def test_iris_defaults(self):
        d = read_descriptor("iris")
        assert d.label_column == 4 and d.default_bands == 10
        assert d.category_labels == ("Iris-setosa", "Iris-versicolor", "Iris-virginica")

    def test_user_modeling_by_header_name(self):
        d = read_descriptor("user_modeling")
        assert d.label_column == "UNS" and d.has_separate_test
        assert d.denominators == (34, 73, 78, 53)

    def test_digest_changes_with_text(self):
        assert parse_descriptor(TOY).digest != parse_descriptor(TOY + "\n; note\n").digest

    def test_unknown_name(self):
        with pytest.raises(ConfigurationError, match="unknown dataset"):
            read_descriptor("nope")

    @pytest.mark.parametrize("text", ["[other]\nx=1\n", "[dataset]\nname = a\n", "not ini at all"])
    def test_malformed(self, text):
        with pytest.raises(ConfigurationError):
            parse_descriptor(text)

    def test_from_path(self, tmp_path):
        p = tmp_path / "toy.ini"
        p.write_text(TOY)
        assert read_descriptor(p).name == "toy"


class TestLoading:
    def test_parse_with_categorical_ignore_and_alias(self, tmp_path):
        desc = _write(tmp_path, "1,0.5,lo,N\n2,1.5,hi,yes\n\n3,1.0,mid,no\n")
        ds, test = load_split(desc, tmp_path)
        assert test is None
        np.testing.assert_allclose(ds.features, [[0.5, 0.0], [1.5, 1.0], [1.0, 0.5]])
        assert ds.labels.tolist() == [0, 1, 0]
        assert ds.category_counts().tolist() == [2, 1]

    def test_unknown_label_names_line(self, tmp_path):
        desc = _write(tmp_path, "1,0.5,lo,no\n2,1.5,hi,maybe\n")
        with pytest.raises(DataError, match=r"toy.csv:2: unknown category 'maybe'"):
            load(desc, tmp_path)

    def test_ragged_row(self, tmp_path):
        desc = _write(tmp_path, "1,0.5,lo,no\n2,1.5,no\n")
        with pytest.raises(DataError, match="expected 4 fields"):
            load(desc, tmp_path)

    def test_non_numeric(self, tmp_path):
        desc = _write(tmp_path, "1,abc,lo,no\n")
        with pytest.raises(DataError, match="not numeric"):
            load(desc, tmp_path)

    def test_unseen_level(self, tmp_path):
        desc = _write(tmp_path, "1,0.5,huge,no\n")
        with pytest.raises(DataError, match="unseen categorical level"):
            load(desc, tmp_path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="not found"):
            load(parse_descriptor(TOY), tmp_path)

    def test_checksum(self, tmp_path):
        desc = parse_descriptor(TOY.replace("delimiter", "train_checksum = sha256:00\ndelimiter"))
        (tmp_path / "toy.csv").write_text("1,0.5,lo,no\n")
        with pytest.raises(DataError, match="checksum"):
            load(desc, tmp_path)

    def test_evenly_spaced_split(self, tmp_path):
        text = TOY.replace("name = toy", "name = toy\nsplit = evenly:2")
        desc = _write(tmp_path, "".join(f"{i},{i},lo,no\n" for i in range(6)), descriptor=text)
        train, test = load_split(desc, tmp_path)
        assert test.features[:, 0].tolist() == [0.0, 3.0]
        assert train.n_rows == 4 and test.split == "test"

    def test_holdout_files_with_header(self, tmp_path):
        text = """
[dataset]
name = h
train = a.csv
test = b.csv
split = holdout
header_lines = 1
label_column = cls
category_labels = x, y
"""
        (tmp_path / "a.csv").write_text("f,cls\n1,x\n2,y\n")
        (tmp_path / "b.csv").write_text("f,cls\n3,y\n")
        train, test = load_split(parse_descriptor(text), tmp_path)
        assert train.feature_names == ("f",) and test.labels.tolist() == [1]

    def test_env_root(self, monkeypatch, tmp_path):
        monkeypatch.setenv(DATA_ENV, str(tmp_path))
        assert data_root() == tmp_path


class TestHelpers:
    def test_encode_categorical(self):
        assert encode_categorical(["M", "F", "I"], ["M", "F", "I"]).tolist() == [0.0, 0.5, 1.0]
        assert encode_categorical(["a"], ["a"]).tolist() == [0.0]

    def test_evenly_spaced_rows(self):
        assert evenly_spaced_rows(1372, 100)[:3].tolist() == [0, 13, 27]
        with pytest.raises(ConfigurationError):
            evenly_spaced_rows(5, 5)


class TestBundledData:
    def test_iris_shape(self, iris):
        assert iris.features.shape == (150, 4)
        assert iris.category_counts().tolist() == [50, 50, 50]

    def test_wine_shape(self, wine):
        assert wine.features.shape == (178, 13)
        assert wine.category_counts().tolist() == [59, 71, 48]
