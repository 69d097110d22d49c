"""Dataset descriptors and loading.

A descriptor is a small INI file naming the raw data file(s), which column
holds the label, which columns to drop or encode, and the default experiment
settings. See ``docs/descriptor_format.md`` for the full grammar. Raw files
live under a dataset root directory (``$BANDGRID_DATA``, default ``./data``).
"""
from __future__ import annotations

import configparser
import csv
import hashlib
import io
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DataError

DATA_ENV = "BANDGRID_DATA"

_DELIMITERS = {"comma": ",", "tab": "\t", "semicolon": ";", "whitespace": None}


def data_root(root: str | os.PathLike | None = None) -> Path:
    if root is not None:
        return Path(root)
    return Path(os.environ.get(DATA_ENV, "data"))


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    train_file: str
    label_column: int | str
    category_labels: tuple[str, ...]
    delimiter: str = "comma"
    header_lines: int = 0
    ignore_columns: tuple[int, ...] = ()
    categorical_columns: dict = field(default_factory=dict)
    label_aliases: dict = field(default_factory=dict)
    test_file: str | None = None
    split: str = "all"
    train_checksum: str | None = None
    test_checksum: str | None = None
    default_bands: int = 10
    default_policy: str = "per_category"
    adjustments: tuple[int, ...] = ()
    denominators: tuple[float, ...] = ()
    boundary_mode: str = "uniform"
    description: str = ""
    source_text: str = field(default="", repr=False, compare=False)

    def __post_init__(self):
        if not self.category_labels:
            raise ConfigurationError(f"{self.name}: category_labels must not be empty")
        if len(set(self.category_labels)) != len(self.category_labels):
            raise ConfigurationError(f"{self.name}: category_labels must be distinct")
        if isinstance(self.label_column, int) and self.label_column in self.ignore_columns:
            raise ConfigurationError(f"{self.name}: label column is also listed as ignored")
        if self.delimiter not in _DELIMITERS and len(self.delimiter) != 1:
            raise ConfigurationError(f"{self.name}: unknown delimiter {self.delimiter!r}")
        kind = self.split.split(":")[0]
        if kind not in ("all", "holdout", "evenly"):
            raise ConfigurationError(f"{self.name}: unknown split {self.split!r}")
        if kind == "holdout" and not self.test_file:
            raise ConfigurationError(f"{self.name}: split=holdout needs a test file")
        if kind == "evenly":
            try:
                n = int(self.split.split(":")[1])
            except (IndexError, ValueError):
                raise ConfigurationError(f"{self.name}: use split = evenly:<rows>") from None
            if n < 1:
                raise ConfigurationError(f"{self.name}: evenly split needs at least one test row")

    @property
    def has_separate_test(self) -> bool:
        return self.split != "all"

    @property
    def digest(self) -> str:
        """sha256 of the descriptor text; ties saved models to their schema."""
        return hashlib.sha256(self.source_text.encode("utf-8")).hexdigest()


def parse_descriptor(text: str) -> DatasetDescriptor:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";",))
    cp.optionxform = str  # keep label alias keys as written
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed descriptor: {exc}") from None
    if "dataset" not in cp:
        raise ConfigurationError("descriptor has no [dataset] section")
    ds = cp["dataset"]
    defaults = cp["defaults"] if "defaults" in cp else {}

    def req(key):
        if key not in ds or not ds[key].strip():
            raise ConfigurationError(f"descriptor is missing dataset.{key}")
        return ds[key].strip()

    label = req("label_column")
    label_column: int | str = int(label) if label.lstrip("-").isdigit() else label
    categorical = {}
    if "categorical" in cp:
        for col, levels in cp["categorical"].items():
            categorical[int(col)] = tuple(_split_list(levels))
    aliases = dict(cp["label_aliases"]) if "label_aliases" in cp else {}
    try:
        return DatasetDescriptor(
            name=req("name"),
            train_file=req("train"),
            label_column=label_column,
            category_labels=tuple(_split_list(req("category_labels"))),
            delimiter=ds.get("delimiter", "comma").strip() or "comma",
            header_lines=int(ds.get("header_lines", "0")),
            ignore_columns=tuple(int(c) for c in _split_list(ds.get("ignore_columns", ""))),
            categorical_columns=categorical,
            label_aliases={k.strip(): v.strip() for k, v in aliases.items()},
            test_file=ds.get("test", "").strip() or None,
            split=ds.get("split", "all").strip(),
            train_checksum=ds.get("train_checksum", "").strip() or None,
            test_checksum=ds.get("test_checksum", "").strip() or None,
            default_bands=int(defaults.get("bands", "10")),
            default_policy=defaults.get("policy", "per_category").strip(),
            adjustments=tuple(int(a) for a in _split_list(defaults.get("adjustments", ""))),
            denominators=tuple(float(d) for d in _split_list(defaults.get("denominators", ""))),
            boundary_mode=defaults.get("boundaries", "uniform").strip(),
            description=ds.get("description", "").strip(),
            source_text=text,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"malformed descriptor value: {exc}") from None


def bundled_descriptors() -> list[str]:
    pkg = resources.files("bandgrid") / "descriptors"
    return sorted(p.name[:-4] for p in pkg.iterdir() if p.name.endswith(".ini"))


def read_descriptor(name_or_path: str | os.PathLike) -> DatasetDescriptor:
    """Load a descriptor by bundled name (``iris``) or by file path."""
    path = Path(name_or_path)
    if path.suffix == ".ini" or path.exists():
        if not path.is_file():
            raise ConfigurationError(f"descriptor file not found: {path}")
        return parse_descriptor(path.read_text(encoding="utf-8"))
    res = resources.files("bandgrid") / "descriptors" / f"{name_or_path}.ini"
    if not res.is_file():
        raise ConfigurationError(
            f"unknown dataset {str(name_or_path)!r}; bundled: {', '.join(bundled_descriptors())}"
        )
    return parse_descriptor(res.read_text(encoding="utf-8"))


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    descriptor: DatasetDescriptor
    split: str = "all"
    feature_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.features.shape[0] != self.labels.shape[0]:
            raise DataError("feature rows and labels differ in length")
        if self.labels.size and self.labels.max() >= len(self.categories):
            raise DataError("label index out of range")

    @property
    def name(self) -> str:
        return self.descriptor.name

    @property
    def categories(self) -> tuple[str, ...]:
        return self.descriptor.category_labels

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_variables(self) -> int:
        return self.features.shape[1]

    def category_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=len(self.categories))

    def subset(self, rows, split: str) -> "Dataset":
        return Dataset(self.features[rows], self.labels[rows], self.descriptor, split, self.feature_names)

    def label_of(self, index: int) -> str:
        return self.categories[index]

    def index_of(self, label: str) -> int:
        try:
            return self.categories.index(label)
        except ValueError:
            raise DataError(f"unknown category {label!r}") from None


def encode_categorical(raw: Sequence[str], levels: Sequence[str]) -> np.ndarray:
    """Map level ``i`` of ``L`` to ``i / (L - 1)``; a single level maps to 0."""
    index = {lv: i for i, lv in enumerate(levels)}
    if not index:
        raise ConfigurationError("categorical column needs at least one level")
    span = max(len(levels) - 1, 1)
    out = np.empty(len(raw))
    for i, value in enumerate(raw):
        key = str(value).strip()
        if key not in index:
            raise DataError(f"unseen categorical level {key!r} (row {i}); known: {list(levels)}")
        out[i] = index[key] / span
    return out


def _read_rows(path: Path, desc: DatasetDescriptor) -> list[tuple[int, list[str]]]:
    try:
        text = path.read_text(encoding="utf-8-sig")
    except FileNotFoundError:
        raise DataError(f"data file not found: {path}") from None
    rows = []
    delim = _DELIMITERS.get(desc.delimiter, desc.delimiter)
    lines = text.splitlines()
    if delim is None:
        parsed = ((n, line.split()) for n, line in enumerate(lines, 1))
    else:
        reader = csv.reader(io.StringIO("\n".join(lines)), delimiter=delim)
        parsed = ((reader.line_num, fields) for fields in reader)
    for lineno, fields in parsed:
        if lineno <= desc.header_lines:
            continue
        fields = [f.strip() for f in fields]
        if not any(fields):
            continue
        rows.append((lineno, fields))
    return rows


def _header(path: Path, desc: DatasetDescriptor) -> list[str]:
    if desc.header_lines < 1:
        return []
    with open(path, encoding="utf-8-sig") as fh:
        first = fh.readline()
    delim = _DELIMITERS.get(desc.delimiter, desc.delimiter)
    return [f.strip() for f in (first.split() if delim is None else next(csv.reader([first], delimiter=delim)))]


def _verify_checksum(path: Path, expected: str | None) -> None:
    if not expected:
        return
    algo, _, digest = expected.partition(":")
    if not digest:
        algo, digest = "sha256", expected
    actual = hashlib.new(algo, path.read_bytes()).hexdigest()
    if actual != digest.lower():
        raise DataError(f"checksum mismatch for {path}: expected {digest}, got {actual}")


def read_table(path: Path, desc: DatasetDescriptor, split: str) -> Dataset:
    """Parse one raw file under ``desc`` into a :class:`Dataset`."""
    rows = _read_rows(path, desc)
    if not rows:
        raise DataError(f"{path}: no data rows")
    header = _header(path, desc)
    width = len(rows[0][1])
    label_col = desc.label_column
    if isinstance(label_col, str):
        if label_col not in header:
            raise ConfigurationError(f"label column {label_col!r} not in header {header}")
        label_col = header.index(label_col)
    if label_col < 0:
        label_col += width
    if not 0 <= label_col < width:
        raise ConfigurationError(f"label column {desc.label_column} outside {width} columns")
    ignored = {c % width for c in desc.ignore_columns}
    feature_cols = [c for c in range(width) if c != label_col and c not in ignored]
    cat_cols = {c % width: lv for c, lv in desc.categorical_columns.items()}
    labels_index = {lab: i for i, lab in enumerate(desc.category_labels)}

    features = np.empty((len(rows), len(feature_cols)))
    labels = np.empty(len(rows), dtype=np.intp)
    for i, (lineno, fields) in enumerate(rows):
        if len(fields) != width:
            raise DataError(f"{path}:{lineno}: expected {width} fields, found {len(fields)}")
        raw_label = fields[label_col]
        label = desc.label_aliases.get(raw_label, raw_label)
        if label not in labels_index:
            raise DataError(f"{path}:{lineno}: unknown category {raw_label!r}")
        labels[i] = labels_index[label]
        for j, c in enumerate(feature_cols):
            if c in cat_cols:
                try:
                    features[i, j] = encode_categorical([fields[c]], cat_cols[c])[0]
                except DataError as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from None
                continue
            try:
                features[i, j] = float(fields[c])
            except ValueError:
                raise DataError(f"{path}:{lineno}: column {c} is not numeric: {fields[c]!r}") from None
            if not np.isfinite(features[i, j]):
                raise DataError(f"{path}:{lineno}: column {c} is not finite")
    names = tuple(header[c] for c in feature_cols) if header else tuple(f"x{c}" for c in feature_cols)
    return Dataset(features, labels, desc, split, names)


def evenly_spaced_rows(n_rows: int, n_test: int) -> np.ndarray:
    """Indices ``floor(i * n_rows / n_test)`` for ``i < n_test``."""
    if not 0 < n_test < n_rows:
        raise ConfigurationError(f"cannot hold out {n_test} of {n_rows} rows")
    return (np.arange(n_test) * n_rows) // n_test


def load_split(
    desc: DatasetDescriptor, root: str | os.PathLike | None = None
) -> tuple[Dataset, Dataset | None]:
    """Return ``(train, test)``; ``test`` is None for resubstitution datasets."""
    base = data_root(root)
    train_path = base / desc.train_file
    if not train_path.is_file():
        raise DataError(f"data file not found: {train_path} (run scripts/fetch_datasets.py)")
    _verify_checksum(train_path, desc.train_checksum)
    kind = desc.split.split(":")[0]
    if kind == "all":
        return read_table(train_path, desc, "all"), None
    if kind == "holdout":
        test_path = base / desc.test_file
        if not test_path.is_file():
            raise DataError(f"data file not found: {test_path} (run scripts/fetch_datasets.py)")
        _verify_checksum(test_path, desc.test_checksum)
        return read_table(train_path, desc, "train"), read_table(test_path, desc, "test")
    full = read_table(train_path, desc, "all")
    test_rows = evenly_spaced_rows(full.n_rows, int(desc.split.split(":")[1]))
    mask = np.zeros(full.n_rows, dtype=bool)
    mask[test_rows] = True
    return full.subset(~mask, "train"), full.subset(mask, "test")


def load(desc: DatasetDescriptor, root: str | os.PathLike | None = None):
    """One :class:`Dataset` for resubstitution data, else a (train, test) pair."""
    train, test = load_split(desc, root)
    return train if test is None else (train, test)
