import subprocess
import sys

import numpy as np

from autoviz import _kernels_py, kernels


def random_inputs(seed=0, n=200, g=64, p=4):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=n)
    grid = np.linspace(values.min() - 1, values.max() + 1, g)
    x = rng.normal(size=(n, p))
    present = rng.random((n, p)) < 0.8
    return values, grid, x, present


class TestBackendParity:
    def test_kde_matches_python_fallback(self):
        values, grid, _, _ = random_inputs()
        a = kernels.kde_gaussian(values, grid, 0.3)
        b = _kernels_py.kde_gaussian(values, grid, 0.3)
        assert np.allclose(a, b, atol=1e-12)

    def test_masked_distances_match_python_fallback(self):
        _, _, x, present = random_inputs()
        for row in (0, 7, 199):
            a = kernels.masked_distances(x, present, row)
            b = _kernels_py.masked_distances(x, present, row)
            both = np.isfinite(a) & np.isfinite(b)
            assert np.array_equal(np.isfinite(a), np.isfinite(b))
            assert np.allclose(a[both], b[both], atol=1e-12)

    def test_masked_distance_to_self_is_zero(self):
        _, _, x, present = random_inputs()
        present[3] = True
        d = kernels.masked_distances(x, present, 3)
        assert d[3] == 0.0

    def test_no_shared_dimensions_gives_infinity(self):
        x = np.zeros((2, 2))
        present = np.array([[True, False], [False, True]])
        d = _kernels_py.masked_distances(x, present, 0)
        assert not np.isfinite(d[1])

    def test_partial_overlap_rescaled(self):
        # rows share one of two dims at distance 3; rescaled by sqrt(2/1)
        x = np.array([[0.0, 0.0], [3.0, 9.9]])
        present = np.array([[True, False], [True, True]])
        for impl in (kernels.masked_distances,
                     _kernels_py.masked_distances):
            d = impl(x, present, 0)
            assert d[1] == np.sqrt(9.0 * 2)


class TestBackendSelection:
    def test_backend_reported(self):
        assert kernels.BACKEND in ("compiled", "python")

    def test_force_py_env_var(self):
        out = subprocess.run(
            [sys.executable, "-c",
             "from autoviz import kernels; print(kernels.BACKEND)"],
            env={"PATH": "/usr/bin:/bin", "AUTOVIZ_FORCE_PY_KERNELS": "1"},
            capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"
