import math

import numpy as np
import pytest

from ictsparse.metrics import PSNR_CAP_DB, mse, percent_nonzero, psnr, psnr_from_mse
from ictsparse.patches import Image


def test_mse_examples():
    a = np.zeros((4, 4))
    assert mse(a, a) == 0.0
    assert mse(Image(a), Image(np.ones((4, 4)))) == 1.0
    rng = np.random.default_rng(0)
    x, y = rng.random((5, 6)), rng.random((5, 6))
    acc = 0.0
    for i in range(5):
        for j in range(6):
            acc += (x[i, j] - y[i, j]) ** 2
    assert mse(x, y) == pytest.approx(acc / 30, abs=1e-12)
    with pytest.raises(ValueError):
        mse(np.zeros((2, 2)), np.zeros((2, 3)))


def test_psnr_examples():
    a = Image(np.full((3, 3), 0.3))
    assert psnr(a, a) == PSNR_CAP_DB
    assert psnr_from_mse(1.0, 255.0) == pytest.approx(48.130803608679, abs=1e-9)
    assert psnr_from_mse(0.25, 1.0) == pytest.approx(6.020599913279624, abs=1e-12)
    assert psnr(np.zeros((2, 2)), np.full((2, 2), 0.5)) == pytest.approx(10 * math.log10(4))


def test_psnr_symmetric_and_decreasing():
    rng = np.random.default_rng(1)
    a, b = rng.random((6, 6)), rng.random((6, 6))
    assert psnr(a, b) == psnr(b, a)
    values = [psnr_from_mse(e) for e in (1e-4, 1e-3, 1e-2, 1e-1)]
    assert all(u > v for u, v in zip(values, values[1:]))


def test_psnr_peak_mismatch():
    with pytest.raises(ValueError):
        psnr(Image(np.zeros((2, 2)), peak=1.0), Image(np.zeros((2, 2)), peak=255.0))


def test_percent_nonzero():
    assert percent_nonzero(np.zeros(10)) == 0.0
    v = np.zeros(10)
    v[::2] = 1.0
    assert percent_nonzero(v, 1e-6) == 50.0
    rng = np.random.default_rng(2)
    blocks = [rng.normal(scale=1e-5, size=(144, 7)) for _ in range(3)]
    count = sum(1 for b in blocks for e in b.ravel() if abs(e) > 1e-6)
    assert percent_nonzero(blocks, 1e-6) == pytest.approx(100 * count / (3 * 144 * 7))
    eps = [0, 1e-7, 1e-6, 1e-5, 1e-4]
    vals = [percent_nonzero(blocks, e) for e in eps]
    assert all(u >= v for u, v in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        percent_nonzero(v, -1.0)
