import os
import subprocess
import sys

import numpy as np
import pytest

from lrdkit import _kernels
from lrdkit._accel import HAVE_NUMBA, backend

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not active")


def test_basis_is_orthonormal():
    for s, m in [(5, 0), (10, 1), (64, 3), (4096, 2)]:
        b = _kernels.poly_basis(s, m)
        np.testing.assert_allclose(b.T @ b, np.eye(m + 1), atol=1e-12)
        np.testing.assert_allclose(b[:, 0], 1 / np.sqrt(s))


@needs_numba
def test_window_kernels_agree():
    rng = np.random.default_rng(0)
    for _ in range(50):
        T = int(rng.integers(16, 3000))
        prof = np.cumsum(rng.standard_normal(T))
        m = int(rng.integers(0, 4))
        s = int(rng.integers(m + 1, T // 2 + 1))
        basis = _kernels.poly_basis(s, m)
        a = _kernels.window_f2_numpy(prof, s, basis)
        b = _kernels.window_f2_jit(prof, s, basis)
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-12 * np.abs(prof).max() ** 2)


@needs_numba
def test_ar1_kernels_agree():
    e = np.random.default_rng(1).standard_normal(10_000)
    for phi, x0 in [(0.5, 0.0), (-0.9, 3.0), (0.999, -1.0)]:
        np.testing.assert_allclose(_kernels.ar1_numpy(phi, e, x0), _kernels.ar1_jit(phi, e, x0), rtol=1e-10, atol=1e-10)


def test_ar1_recursion():
    out = _kernels.ar1(0.5, np.array([1.0, 0.0, 2.0]), x0=4.0)
    np.testing.assert_allclose(out, [3.0, 1.5, 2.75])


def test_env_flag_selects_numpy():
    code = (
        "import numpy as np, lrdkit\n"
        "from lrdkit import _kernels\n"
        "assert _kernels.window_f2_jit is None\n"
        "from lrdkit.generators import GeneratorSpec, generate_values\n"
        "x = generate_values(GeneratorSpec('fgn', 4096, seed=3, hurst=0.7))\n"
        "print(lrdkit.backend(), repr(lrdkit.hurst(x).h))\n"
    )
    env = dict(os.environ, LRDKIT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    name, h = out.stdout.split()
    assert name == "numpy"
    from lrdkit import hurst
    from lrdkit.generators import GeneratorSpec, generate_values

    x = generate_values(GeneratorSpec("fgn", 4096, seed=3, hurst=0.7))
    assert float(h) == pytest.approx(hurst(x).h, abs=1e-10)


def test_backend_name():
    assert backend() in {"numba", "numpy"}
    assert (backend() == "numba") == HAVE_NUMBA
