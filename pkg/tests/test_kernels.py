import numpy as np
import pytest

from bandgrid import _kernels_py, kernels
from bandgrid.errors import DataError

try:
    from bandgrid import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

needs_ext = pytest.mark.skipif(_kernels_c is None, reason="compiled extension not built")


def _edges(rng, n_vars, max_bands):
    n_bands = rng.integers(1, max_bands + 1, size=n_vars)
    edges = np.full((n_vars, max_bands), np.inf)
    for v, nb in enumerate(n_bands):
        inner = np.sort(rng.choice(np.arange(1, 1000), size=nb - 1, replace=False)) / 1000.0
        edges[v, :nb] = np.append(inner, 1.0)
    return edges, n_bands.astype(np.intp)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_nan_rejected():
    with pytest.raises(DataError, match="row 0, column 1"):
        kernels.prepare_values([[0.1, np.nan]])


@needs_ext
class TestBackendParity:
    @pytest.mark.parametrize("seed", range(5))
    def test_band_indices(self, seed):
        rng = np.random.default_rng(seed)
        edges, nb = _edges(rng, 6, 20)
        x = rng.random((300, 6))
        x[:10] = edges[np.arange(6), 0]  # values sitting on edges
        a = kernels.band_indices(x, edges, nb, impl=_kernels_c)
        b = kernels.band_indices(x, edges, nb, impl=_kernels_py)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("seed", range(5))
    def test_train_and_score_bitwise(self, seed):
        rng = np.random.default_rng(seed)
        edges, nb = _edges(rng, 5, 12)
        x = rng.random((400, 5))
        y = rng.integers(0, 4, size=400)
        ow = rng.random(4) + 0.01
        grids = []
        for impl in (_kernels_c, _kernels_py):
            scale = np.zeros((5, 12))
            outputs = np.zeros((5, 12, 4))
            bands = kernels.band_indices(x, edges, nb, impl=impl)
            assert kernels.train_rows(bands, y, scale, outputs, 1 / 400, ow, impl=impl) == 2000
            scores = {m: kernels.score_rows(bands, x, scale, outputs, m, impl=impl)
                      for m in (kernels.RATIO, kernels.PRODUCT)}
            grids.append((scale, outputs, scores))
        (s1, o1, sc1), (s2, o2, sc2) = grids
        assert np.array_equal(s1, s2) and np.array_equal(o1, o2)
        for m in sc1:
            assert np.array_equal(sc1[m], sc2[m])
