"""Backend selection for the hot loops.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback. Set ``BANDGRID_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from .errors import DataError

if os.environ.get("BANDGRID_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

RATIO = _kernels_py.RATIO
PRODUCT = _kernels_py.PRODUCT


def prepare_values(values) -> np.ndarray:
    """Clamp to [0, 1] as a C-contiguous float64 matrix; reject NaN."""
    x = np.ascontiguousarray(values, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if np.isnan(x).any():
        r, c = np.argwhere(np.isnan(x))[0]
        raise DataError(f"NaN value at row {r}, column {c}")
    return np.clip(x, 0.0, 1.0)


def band_indices(values, edges, n_bands, impl=None) -> np.ndarray:
    impl = impl or _impl
    return impl.band_indices(prepare_values(values), edges, n_bands)


def train_rows(bands, labels, scale, outputs, cw, ow, impl=None) -> int:
    impl = impl or _impl
    return int(
        impl.train_rows(
            np.ascontiguousarray(bands, dtype=np.intp),
            np.ascontiguousarray(labels, dtype=np.intp),
            scale,
            outputs,
            float(cw),
            np.ascontiguousarray(ow, dtype=np.float64),
        )
    )


def score_rows(bands, values, scale, outputs, mode, impl=None) -> np.ndarray:
    impl = impl or _impl
    return impl.score_rows(
        np.ascontiguousarray(bands, dtype=np.intp),
        prepare_values(values),
        scale,
        outputs,
        int(mode),
    )
