#!/usr/bin/env python3
"""Download the six benchmark datasets into the dataset root.

Files are written under ``--root`` (default ``$BANDGRID_DATA`` or ``./data``)
with the names the bundled descriptors expect. Each dataset is fetched from
the UCI repository first. When UCI is unreachable, Iris and Wine are copied
from the copies bundled with scikit-learn and Zoo is extracted from the
Orange3 wheel on PyPI; the other three have no offline source.

    python3 scripts/fetch_datasets.py
    python3 scripts/fetch_datasets.py --only iris wine --root /tmp/uci
"""
from __future__ import annotations

import argparse
import hashlib
import io
import os
import subprocess
import sys
import tempfile
import urllib.request
import zipfile
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"
URLS = {
    "iris": (f"{UCI}/iris/iris.data", "iris.data"),
    "wine": (f"{UCI}/wine/wine.data", "wine.data"),
    "zoo": (f"{UCI}/zoo/zoo.data", "zoo.data"),
    "abalone": (f"{UCI}/abalone/abalone.data", "abalone.data"),
    "banknote": (f"{UCI}/00267/data_banknote_authentication.txt", "data_banknote_authentication.txt"),
    "user_modeling": ("https://archive.ics.uci.edu/static/public/257/user+knowledge+modeling.zip", None),
}
IRIS_NAMES = ["Iris-setosa", "Iris-versicolor", "Iris-virginica"]
# Orange names the zoo types; UCI numbers them
ZOO_TYPES = {"mammal": 1, "bird": 2, "reptile": 3, "fish": 4, "amphibian": 5, "insect": 6, "invertebrate": 7}
USER_MODELING_COLUMNS = ["STG", "SCG", "STR", "LPR", "PEG", "UNS"]


def download(url: str, timeout: float = 30.0) -> bytes:
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read()


def sklearn_csv(name: str) -> list[str]:
    import sklearn.datasets

    path = Path(sklearn.datasets.__file__).parent / "data" / name
    return path.read_text().splitlines()[1:]


def iris_from_sklearn() -> bytes:
    out = []
    for line in sklearn_csv("iris.csv"):
        *vals, label = line.split(",")
        out.append(",".join(vals + [IRIS_NAMES[int(label)]]))
    return ("\n".join(out) + "\n").encode()


def wine_from_sklearn() -> bytes:
    out = []
    for line in sklearn_csv("wine_data.csv"):
        *vals, label = line.split(",")
        out.append(",".join([str(int(label) + 1)] + vals))
    return ("\n".join(out) + "\n").encode()


def zoo_from_orange() -> bytes:
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
             "orange3", "-d", tmp],
            check=True, capture_output=True,
        )
        wheel = next(Path(tmp).glob("*.whl"))
        text = zipfile.ZipFile(wheel).read("Orange/datasets/zoo.tab").decode()
    out = []
    for line in text.splitlines()[3:]:  # name row, type row, flag row
        fields = line.split("\t")
        if len(fields) < 18:
            continue
        out.append(",".join(fields[:17] + [str(ZOO_TYPES[fields[17]])]))
    return ("\n".join(out) + "\n").encode()


def user_modeling_csvs(archive: bytes) -> dict[str, bytes]:
    import pandas as pd

    zf = zipfile.ZipFile(io.BytesIO(archive))
    xls = next(n for n in zf.namelist() if n.lower().endswith((".xls", ".xlsx")))
    book = pd.read_excel(io.BytesIO(zf.read(xls)), sheet_name=None)
    out = {}
    for sheet, fname in (("train", "user_modeling_train.csv"), ("test", "user_modeling_test.csv")):
        key = next(k for k in book if sheet in k.lower())
        frame = book[key]
        frame.columns = [str(c).strip() for c in frame.columns]
        frame = frame[USER_MODELING_COLUMNS].dropna()
        frame["UNS"] = frame["UNS"].astype(str).str.strip()
        out[fname] = frame.to_csv(index=False).encode()
    return out


FALLBACKS = {"iris": iris_from_sklearn, "wine": wine_from_sklearn, "zoo": zoo_from_orange}


def fetch(name: str, root: Path) -> list[Path]:
    url, fname = URLS[name]
    try:
        payload = download(url)
        files = user_modeling_csvs(payload) if fname is None else {fname: payload}
        source = url
    except Exception as exc:
        if name not in FALLBACKS:
            raise RuntimeError(f"{name}: download failed ({exc}) and no offline source exists") from exc
        files = {fname: FALLBACKS[name]()}
        source = f"offline fallback ({FALLBACKS[name].__name__})"
    written = []
    for fn, data in files.items():
        path = root / fn
        path.write_bytes(data)
        print(f"{name:14s} {fn:36s} sha256:{hashlib.sha256(data).hexdigest()[:16]}...  <- {source}")
        written.append(path)
    return written


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--root", default=os.environ.get("BANDGRID_DATA", "data"))
    ap.add_argument("--only", nargs="+", choices=sorted(URLS), default=sorted(URLS))
    args = ap.parse_args(argv)
    root = Path(args.root)
    root.mkdir(parents=True, exist_ok=True)
    failed = []
    for name in args.only:
        try:
            fetch(name, root)
        except Exception as exc:
            print(f"{name:14s} FAILED: {exc}", file=sys.stderr)
            failed.append(name)
    if failed:
        print(f"missing: {', '.join(failed)}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
