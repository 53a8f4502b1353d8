import math

import numpy as np
import pytest

from tridecouple import kernels
from tridecouple.kernels import numpy_backend as npk

nbk = kernels.numba_backend
needs_numba = pytest.mark.skipif(nbk is None, reason="numba not installed")


def random_symmetric(rng, n):
    a = rng.normal(size=(n, n, n))
    return sum(a.transpose(p) for p in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]) / 6


def test_backend_flag():
    assert kernels.BACKEND in ("numba", "numpy")


def test_act_dense_matches_einsum(rng):
    g = random_symmetric(rng, 4)
    s = np.linalg.qr(rng.normal(size=(4, 4)))[0]
    expected = np.einsum("ia,jb,kc,abc->ijk", s, s, s, g)
    assert np.allclose(npk.act_dense(s, g), expected, atol=1e-12)
    assert np.allclose(kernels.act_dense(s, g), expected, atol=1e-12)


def test_givens_batch_orthogonal(rng):
    angles = rng.uniform(-math.pi, math.pi, size=(5, 3))
    reflect = np.array([False, True, False, True, False])
    mats = npk.givens_batch(angles, reflect, 3)
    for m, r in zip(mats, reflect):
        assert np.allclose(m.T @ m, np.eye(3), atol=1e-13)
        assert np.linalg.det(m) == pytest.approx(-1 if r else 1)


def test_charpoly_reciprocal_scalar_case():
    # 1 / (1 - l) = sum l^k
    mats = np.zeros((1, 4, 4))
    mats[0, 0, 0] = 1.0
    out = npk.charpoly_reciprocal(mats, 6)
    assert np.allclose(out[0], 1.0)


@needs_numba
def test_backends_agree(rng):
    g = random_symmetric(rng, 3)
    s = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    assert np.allclose(nbk.act_dense(s, g), npk.act_dense(s, g), atol=1e-13)
    ss = np.stack([np.linalg.qr(rng.normal(size=(3, 3)))[0] for _ in range(4)])
    assert np.allclose(nbk.act_batch(ss, g), npk.act_batch(ss, g), atol=1e-13)
    angles = rng.uniform(-3, 3, size=(6, 3))
    refl = np.arange(6) % 2 == 1
    assert np.allclose(nbk.givens_batch(angles, refl, 3), npk.givens_batch(angles, refl, 3), atol=1e-14)
    flat = np.array([1, 5, 13], dtype=np.int64)
    w = np.array([1.0, 2.0, 0.5])
    assert np.allclose(nbk.pattern_residuals(angles, refl, g, flat, w), npk.pattern_residuals(angles, refl, g, flat, w), atol=1e-13)
    thetas = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(nbk.rep_matrices(thetas), npk.rep_matrices(thetas), atol=1e-14)
    for refl_flag in (False, True):
        assert np.allclose(nbk.molien_average(thetas, refl_flag, 12), npk.molien_average(thetas, refl_flag, 12), atol=1e-10)


def test_disable_flag_selects_numpy():
    import os
    import subprocess
    import sys

    env = dict(os.environ, TRIDECOUPLE_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from tridecouple import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
