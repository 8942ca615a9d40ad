"""Reconstruction quality and sparsity measures."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .patches import Image

# PSNR reported for a perfect reconstruction.
PSNR_CAP_DB = 999.0


@dataclass
class MetricsRecord:
    dataset: str
    algorithm: str
    lam: float
    psnr_db: float
    mse: float
    percent_nonzero: float
    iterations: int
    failed: bool = False
    note: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _pixels(img) -> np.ndarray:
    return img.pixels if isinstance(img, Image) else np.asarray(img, dtype=float)


def mse(reference, estimate) -> float:
    a, b = _pixels(reference), _pixels(estimate)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def psnr_from_mse(err: float, peak: float = 1.0) -> float:
    if err == 0.0:
        return PSNR_CAP_DB
    return 10.0 * math.log10(peak * peak / err)


def psnr(reference, estimate, peak: float | None = None) -> float:
    """PSNR in dB; identical inputs give :data:`PSNR_CAP_DB`."""
    if peak is None:
        peaks = {img.peak for img in (reference, estimate) if isinstance(img, Image)}
        if len(peaks) > 1:
            raise ValueError(f"images disagree on peak value: {sorted(peaks)}")
        peak = peaks.pop() if peaks else 1.0
    return psnr_from_mse(mse(reference, estimate), peak)


def percent_nonzero(coeffs, epsilon: float = 1e-6) -> float:
    """Percentage of entries with magnitude above ``epsilon``.

    ``coeffs`` is any array, or a sequence of arrays pooled together.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    if isinstance(coeffs, (list, tuple)):
        arrays = [np.asarray(c, dtype=float).ravel() for c in coeffs]
        total = sum(a.size for a in arrays)
        hits = sum(int(np.count_nonzero(np.abs(a) > epsilon)) for a in arrays)
    else:
        a = np.asarray(coeffs, dtype=float)
        total = a.size
        hits = int(np.count_nonzero(np.abs(a) > epsilon))
    if total == 0:
        return 0.0
    return 100.0 * hits / total
