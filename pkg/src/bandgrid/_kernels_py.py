"""Pure numpy versions of the loops in ``_kernels.pyx``.

Used when the extension is not built, or when ``BANDGRID_PURE_PYTHON=1``.
"""
import numpy as np

RATIO = 0
PRODUCT = 1


def band_indices(values, edges, n_bands):
    n_rows, n_vars = values.shape
    out = np.empty((n_rows, n_vars), dtype=np.intp)
    for v in range(n_vars):
        nb = n_bands[v]
        idx = np.searchsorted(edges[v, :nb], values[:, v], side="left")
        out[:, v] = np.minimum(idx, nb - 1)
    return out


def train_rows(bands, labels, scale, outputs, cw, ow):
    n_rows, n_vars = bands.shape
    inc = ow[labels]
    for v in range(n_vars):
        # unbuffered and applied in row order, like the compiled loop
        np.add.at(scale[v], bands[:, v], cw)
        np.add.at(outputs[v], (bands[:, v], labels), inc)
    return n_rows * n_vars


def score_rows(bands, values, scale, outputs, mode):
    n_rows, n_vars = bands.shape
    ov = np.zeros((n_rows, outputs.shape[2]))
    for v in range(n_vars):
        b = bands[:, v]
        s = scale[v, b][:, None]
        o = outputs[v, b]
        if mode == RATIO:
            with np.errstate(divide="ignore", invalid="ignore"):
                contrib = np.where(s == 0.0, 0.0, o / s)
        else:
            contrib = (values[:, v][:, None] * s) * o
        ov += contrib
    return ov
