"""Overlapping patch extraction and averaging reassembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Image:
    """Grayscale raster; ``peak`` is the intensity ceiling used for PSNR."""

    pixels: np.ndarray
    peak: float = 1.0

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=float)
        if self.pixels.ndim != 2:
            raise ValueError(f"image must be 2-D, got shape {self.pixels.shape}")
        if not np.all(np.isfinite(self.pixels)):
            raise ValueError("image contains non-finite pixels")
        if not self.peak > 0:
            raise ValueError(f"peak must be positive, got {self.peak}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape


@dataclass
class PatchSet:
    """Patches as columns of a ``(patch_edge**2, T)`` matrix."""

    patches: np.ndarray
    origins: np.ndarray  # (T, 2) integer (row, col)
    source_dims: tuple[int, int]
    patch_edge: int
    stride: int

    def __len__(self) -> int:
        return self.patches.shape[1]


def _anchors(length: int, patch_edge: int, stride: int) -> np.ndarray:
    last = length - patch_edge
    starts = list(range(0, last + 1, stride))
    if starts[-1] != last:
        starts.append(last)  # clamp so the trailing border is covered
    return np.asarray(starts, dtype=np.int64)


def extract_patches(image: Image | np.ndarray, patch_edge: int = 8,
                    stride: int = 1) -> PatchSet:
    pixels = image.pixels if isinstance(image, Image) else np.asarray(image, float)
    h, w = pixels.shape
    if patch_edge < 1 or patch_edge > min(h, w):
        raise ValueError(f"patch_edge {patch_edge} does not fit a {h}x{w} image")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    rows = _anchors(h, patch_edge, stride)
    cols = _anchors(w, patch_edge, stride)
    windows = np.lib.stride_tricks.sliding_window_view(pixels, (patch_edge, patch_edge))
    sel = windows[rows][:, cols]  # (R, C, pe, pe)
    patches = sel.reshape(len(rows) * len(cols), patch_edge * patch_edge).T.copy()
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    origins = np.stack([rr.ravel(), cc.ravel()], axis=1)
    return PatchSet(patches=patches, origins=origins, source_dims=(h, w),
                    patch_edge=patch_edge, stride=stride)


def coverage(patchset: PatchSet) -> np.ndarray:
    """Number of patches covering each pixel."""
    h, w = patchset.source_dims
    pe = patchset.patch_edge
    count = np.zeros((h, w))
    for r, c in patchset.origins:
        count[r:r + pe, c:c + pe] += 1.0
    return count


def reconstruct_from_patches(patchset: PatchSet, reconstructed: np.ndarray,
                             peak: float = 1.0) -> Image:
    """Average overlapping patch estimates back into an image.

    Each pixel keeps a running mean updated in patch order. The update is
    deterministic for a fixed ordering and exact when every estimate of a
    pixel agrees, so identity coding round-trips bit-for-bit.
    """
    reconstructed = np.asarray(reconstructed, dtype=float)
    if reconstructed.shape != patchset.patches.shape:
        raise ValueError(f"expected patches of shape {patchset.patches.shape}, "
                         f"got {reconstructed.shape}")
    h, w = patchset.source_dims
    pe = patchset.patch_edge
    mean = np.zeros((h, w))
    count = np.zeros((h, w))
    for t, (r, c) in enumerate(patchset.origins):
        cnt = count[r:r + pe, c:c + pe]
        cnt += 1.0
        win = mean[r:r + pe, c:c + pe]
        win += (reconstructed[:, t].reshape(pe, pe) - win) / cnt
    return Image(mean, peak=peak)
