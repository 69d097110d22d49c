"""Saved model files: versioned JSON carrying grid, scaling and schema hash."""
from __future__ import annotations

import json
from pathlib import Path

from .balance import IncrementPolicy
from .data_io import DatasetDescriptor
from .errors import ConfigurationError
from .evaluation import Model
from .grid import Grid
from .preprocess import NormStats

MODEL_FORMAT = "bandgrid.model"
MODEL_VERSION = 1


def model_to_dict(model: Model, descriptor: DatasetDescriptor) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "dataset": descriptor.name,
        "descriptor_sha256": descriptor.digest,
        "bands": model.bands,
        "boundary_mode": model.boundary_mode,
        "policy": model.policy.to_dict(),
        "norm_stats": model.stats.to_dict(),
        "grid": model.grid.to_dict(),
    }


def save_model(model: Model, descriptor: DatasetDescriptor, path, force: bool = False) -> Path:
    path = Path(path)
    if path.exists() and not force:
        raise ConfigurationError(f"{path} exists; pass --force to overwrite")
    path.write_text(json.dumps(model_to_dict(model, descriptor), indent=1) + "\n")
    return path


def load_model(path) -> tuple[Model, dict]:
    """Return the model and its header (dataset name, descriptor hash)."""
    path = Path(path)
    try:
        d = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigurationError(f"model file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path} is not a model file: {exc}") from None
    if d.get("format") != MODEL_FORMAT:
        raise ConfigurationError(f"{path} is not a bandgrid model file")
    if d.get("version") != MODEL_VERSION:
        raise ConfigurationError(f"{path}: unsupported model version {d.get('version')}")
    model = Model(
        grid=Grid.from_dict(d["grid"]),
        stats=NormStats.from_dict(d["norm_stats"]),
        policy=IncrementPolicy.from_dict(d["policy"]),
        bands=int(d["bands"]),
        boundary_mode=d.get("boundary_mode", "uniform"),
    )
    header = {k: d[k] for k in ("dataset", "descriptor_sha256")}
    return model, header


def check_pairing(header: dict, descriptor: DatasetDescriptor) -> None:
    if header["descriptor_sha256"] != descriptor.digest:
        raise ConfigurationError(
            f"model was trained under descriptor {header['dataset']!r} "
            f"(sha256 {header['descriptor_sha256'][:12]}...), but dataset {descriptor.name!r} "
            f"has sha256 {descriptor.digest[:12]}...; retrain the model for this dataset"
        )
