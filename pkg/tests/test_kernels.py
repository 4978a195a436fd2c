import os
import subprocess
import sys

import numpy as np
import pytest

from symsector import _pykernels, kernels
from symsector.generators import random_symplectic

try:
    from symsector import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])
needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


@pytest.fixture
def strict_map():
    return random_symplectic(np.random.default_rng(8), 3, "strict").full


@pytest.mark.parametrize("impl", BACKENDS)
def test_beta_sq_batch_semantics(impl, strict_map):
    rng = np.random.default_rng(0)
    w = rng.standard_normal((200, 6))
    got = impl.beta_sq_batch(strict_map, w)
    img = w @ strict_map.T
    q0 = np.sum(w[:, :3] * w[:, 3:], axis=1)
    q1 = np.sum(img[:, :3] * img[:, 3:], axis=1)
    inside = q0 > 0
    np.testing.assert_allclose(got[inside], q1[inside] / q0[inside], rtol=1e-12)
    assert np.all(np.isinf(got[~inside]))


@pytest.mark.parametrize("impl", BACKENDS)
def test_refine_never_worsens(impl, strict_map):
    w0 = np.array([1.0, 0.5, 0.2, 0.3, 1.0, 0.4])
    start = impl.beta_sq_batch(strict_map, w0[None])[0]
    w, val = impl.refine(strict_map, w0, 100, 0.05)
    assert val <= start
    assert val == pytest.approx(impl.beta_sq_batch(strict_map, w[None])[0], rel=1e-12)
    np.testing.assert_array_equal(w0, [1.0, 0.5, 0.2, 0.3, 1.0, 0.4])


@pytest.mark.parametrize("impl", BACKENDS)
def test_refine_zero_steps_is_identity(impl, strict_map):
    w0 = np.array([1.0, 0.5, 0.2, 0.3, 1.0, 0.4])
    w, _ = impl.refine(strict_map, w0, 0, 0.05)
    np.testing.assert_array_equal(w, w0)


@pytest.mark.parametrize("impl", BACKENDS)
def test_propagate(impl):
    maps = np.stack([np.array([[1.0, 1.0], [1.0, 2.0]])] * 3)
    traj = impl.propagate(maps, np.array([1.0, 0.0]))
    np.testing.assert_array_equal(traj, [[1, 0], [1, 1], [2, 3], [5, 8]])


@needs_ext
def test_backends_agree(strict_map):
    rng = np.random.default_rng(1)
    w = rng.standard_normal((500, 6))
    np.testing.assert_allclose(_ckernels.beta_sq_batch(strict_map, w), _pykernels.beta_sq_batch(strict_map, w), rtol=1e-12)
    w0 = np.abs(rng.standard_normal(6)) + 0.1
    wc, vc = _ckernels.refine(strict_map, w0, 100, 0.05)
    wp, vp = _pykernels.refine(strict_map, w0, 100, 0.05)
    assert vc == pytest.approx(vp, rel=1e-9)
    maps = np.stack([random_symplectic(rng, 3, "monotone").full for _ in range(50)])
    np.testing.assert_allclose(_ckernels.propagate(maps, w0), _pykernels.propagate(maps, w0), rtol=1e-10)


def test_backend_selection():
    assert kernels.BACKEND == ("cython" if _ckernels is not None and not os.environ.get("SYMSECTOR_PURE_PYTHON") else "python")
    env = dict(os.environ, SYMSECTOR_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from symsector import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
