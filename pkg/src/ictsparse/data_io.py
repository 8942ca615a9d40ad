"""Dataset loading and synthesis: PGM images, MNIST IDX files, Shepp-Logan."""

from __future__ import annotations

import enum
import gzip
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .patches import Image


class DataFormatError(ValueError):
    """Base class for malformed dataset files."""


class PGMHeaderError(DataFormatError):
    pass


class PGMTruncatedError(DataFormatError):
    pass


class UnsupportedFormatError(DataFormatError):
    pass


class IDXMagicError(DataFormatError):
    pass


class IDXLengthError(DataFormatError):
    pass


# ---------------------------------------------------------------- random ---

_MASK64 = (1 << 64) - 1


class XorShift64Star:
    """xorshift64* generator (Vigna 2016), state seeded through splitmix64.

    Small enough to reimplement anywhere, so seeded selections reproduce
    across languages.
    """

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        self.state = z or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & _MASK64
        s ^= s >> 27
        self.state = s
        return (s * 0x2545F4914F6CDD1D) & _MASK64

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n


def sample_without_replacement(n: int, k: int, seed: int) -> list[int]:
    """First ``k`` entries of a seeded partial Fisher-Yates shuffle of range(n)."""
    if not 0 <= k <= n:
        raise ValueError(f"cannot draw {k} items from {n}")
    rng = XorShift64Star(seed)
    pool = list(range(n))
    for i in range(k):
        j = i + rng.below(n - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


# ------------------------------------------------------------------- PGM ---

def _pgm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    tokens: list[bytes] = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise PGMHeaderError("header ended early")
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> Image:
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise UnsupportedFormatError(f"unsupported magic {magic!r}; expected P2 or P5")
    try:
        tokens, pos = _pgm_tokens(data[2:], 3)
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        if isinstance(exc, PGMHeaderError):
            raise
        raise PGMHeaderError(f"non-numeric header field: {exc}") from None
    pos += 2
    if width <= 0 or height <= 0 or not 0 < maxval <= 65535:
        raise PGMHeaderError(f"bad header values {width}x{height}, maxval={maxval}")
    count = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        payload = data[pos:pos + count * dtype.itemsize]
        if len(payload) < count * dtype.itemsize:
            raise PGMTruncatedError(
                f"expected {count * dtype.itemsize} payload bytes, got {len(payload)}")
        values = np.frombuffer(payload, dtype=dtype).astype(float)
    else:
        fields = data[pos:].split()
        if len(fields) < count:
            raise PGMTruncatedError(f"expected {count} samples, got {len(fields)}")
        try:
            values = np.array([int(f) for f in fields[:count]], dtype=float)
        except ValueError:
            raise PGMHeaderError("non-numeric sample in P2 payload") from None
    if values.max(initial=0) > maxval:
        raise PGMHeaderError("sample exceeds maxval")
    return Image(values.reshape(height, width) / maxval, peak=1.0)


def load_pgm(path: str | os.PathLike) -> Image:
    """Read a P2 or P5 PGM file, scaling samples to [0, 1]."""
    return parse_pgm(Path(path).read_bytes())


def save_pgm(image: Image | np.ndarray, path: str | os.PathLike,
             maxval: int = 255, binary: bool = True) -> None:
    pixels = image.pixels if isinstance(image, Image) else np.asarray(image, float)
    if not 0 < maxval <= 65535:
        raise ValueError(f"maxval must be in 1..65535, got {maxval}")
    if pixels.min(initial=0.0) < 0.0 or pixels.max(initial=0.0) > 1.0:
        raise ValueError("pixels must lie in [0, 1]")
    q = np.rint(pixels * maxval).astype(np.int64)
    h, w = q.shape
    header = f"{'P5' if binary else 'P2'}\n{w} {h}\n{maxval}\n".encode("ascii")
    if binary:
        body = q.astype(">u2" if maxval > 255 else "u1").tobytes()
    else:
        body = "\n".join(" ".join(str(v) for v in row) for row in q).encode() + b"\n"
    Path(path).write_bytes(header + body)


# ----------------------------------------------------------------- MNIST ---

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


def _read_maybe_gz(path) -> bytes:
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        return gzip.decompress(raw)
    return raw


def read_idx_images(path) -> np.ndarray:
    """Raw ``(count, rows, cols)`` uint8 array from an IDX image file."""
    data = _read_maybe_gz(path)
    if len(data) < 16:
        raise IDXLengthError("IDX image header is truncated")
    magic, count, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IDX_IMAGES_MAGIC:
        raise IDXMagicError(f"image magic 0x{magic:08x}, expected 0x{IDX_IMAGES_MAGIC:08x}")
    expected = count * rows * cols
    if len(data) - 16 != expected:
        raise IDXLengthError(f"header promises {expected} pixels, file has {len(data) - 16}")
    return np.frombuffer(data, dtype=np.uint8, offset=16).reshape(count, rows, cols)


def read_idx_labels(path) -> np.ndarray:
    data = _read_maybe_gz(path)
    if len(data) < 8:
        raise IDXLengthError("IDX label header is truncated")
    magic, count = struct.unpack(">II", data[:8])
    if magic != IDX_LABELS_MAGIC:
        raise IDXMagicError(f"label magic 0x{magic:08x}, expected 0x{IDX_LABELS_MAGIC:08x}")
    if len(data) - 8 != count:
        raise IDXLengthError(f"header promises {count} labels, file has {len(data) - 8}")
    return np.frombuffer(data, dtype=np.uint8, offset=8)


def load_mnist(images_path, labels_path=None, sample_count: int | None = None,
               rng_seed: int = 0) -> list[Image]:
    """Decode MNIST rasters to [0, 1] and draw a seeded sample.

    With ``sample_count=None`` every image is returned in file order.
    """
    raw = read_idx_images(images_path)
    if labels_path is not None:
        labels = read_idx_labels(labels_path)
        if len(labels) != len(raw):
            raise IDXLengthError(f"{len(raw)} images but {len(labels)} labels")
    if sample_count is None:
        order = range(len(raw))
    else:
        order = sample_without_replacement(len(raw), sample_count, rng_seed)
    return [Image(raw[i].astype(float) / 255.0) for i in order]


# ----------------------------------------------------------- Shepp-Logan ---

# (intensity, semi-axis a, semi-axis b, centre x, centre y, rotation degrees)
SHEPP_LOGAN_ELLIPSES = (
    (2.00, 0.6900, 0.9200, 0.00, 0.0000, 0.0),
    (-0.98, 0.6624, 0.8740, 0.00, -0.0184, 0.0),
    (-0.02, 0.1100, 0.3100, 0.22, 0.0000, -18.0),
    (-0.02, 0.1600, 0.4100, -0.22, 0.0000, 18.0),
    (0.01, 0.2100, 0.2500, 0.00, 0.3500, 0.0),
    (0.01, 0.0460, 0.0460, 0.00, 0.1000, 0.0),
    (0.01, 0.0460, 0.0460, 0.00, -0.1000, 0.0),
    (0.01, 0.0460, 0.0230, -0.08, -0.6050, 0.0),
    (0.01, 0.0230, 0.0230, 0.00, -0.6060, 0.0),
    (0.01, 0.0230, 0.0460, 0.06, -0.6050, 0.0),
)

# Toft's high-contrast intensities for the same ellipses.
MODIFIED_INTENSITIES = (1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1)


def phantom_grid(size: int) -> tuple[np.ndarray, np.ndarray]:
    """Pixel-centre coordinates on [-1, 1]^2, row 0 at the top (y = +1)."""
    centres = -1.0 + (2.0 * np.arange(size) + 1.0) / size
    xx, yy = np.meshgrid(centres, centres[::-1])
    return xx, yy


def generate_shepp_logan(size: int = 256, variant: str = "original") -> Image:
    """Render the 10-ellipse Shepp-Logan phantom.

    ``"original"`` uses the classic intensities divided by the outer-skull
    value 2.0 so the image spans [0, 1]; ``"modified"`` uses the
    high-contrast variant. Either result is clamped to [0, 1].
    """
    if size < 16:
        raise ValueError(f"size must be >= 16, got {size}")
    if variant == "original":
        intensities = [e[0] / 2.0 for e in SHEPP_LOGAN_ELLIPSES]
    elif variant == "modified":
        intensities = list(MODIFIED_INTENSITIES)
    else:
        raise ValueError(f"unknown phantom variant {variant!r}")
    xx, yy = phantom_grid(size)
    img = np.zeros((size, size))
    for value, (_, a, b, x0, y0, deg) in zip(intensities, SHEPP_LOGAN_ELLIPSES):
        phi = np.deg2rad(deg)
        c, s = np.cos(phi), np.sin(phi)
        dx, dy = xx - x0, yy - y0
        u = dx * c + dy * s
        v = -dx * s + dy * c
        img[(u / a) ** 2 + (v / b) ** 2 <= 1.0] += value
    return Image(np.clip(img, 0.0, 1.0))


# ------------------------------------------------------------------- CSV ---

def save_csv_matrix(matrix: np.ndarray, path: str | os.PathLike) -> None:
    """Row-major numeric CSV with 17 significant digits."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    lines = [",".join(f"{v:.17g}" for v in row) for row in matrix]
    Path(path).write_text("\n".join(lines) + "\n")


def load_csv_matrix(path: str | os.PathLike) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


# --------------------------------------------------------------- specs -----

class DatasetKind(enum.Enum):
    PGM = "pgm"
    MNIST = "mnist"
    SHEPP_LOGAN = "shepp-logan"


@dataclass(frozen=True)
class DatasetSpec:
    kind: DatasetKind
    name: str = ""
    path: str | None = None
    labels_path: str | None = None
    sample_count: int | None = None
    rng_seed: int = 0
    size: int = 256
    variant: str = "original"

    def __post_init__(self):
        object.__setattr__(self, "kind", DatasetKind(self.kind))
        if self.kind is not DatasetKind.SHEPP_LOGAN and not self.path:
            raise ValueError(f"{self.kind.value} dataset needs a path")
        if self.sample_count is not None and self.sample_count < 0:
            raise ValueError("sample_count must be >= 0")
        if not self.name:
            object.__setattr__(self, "name", self.kind.value)

    def load(self) -> list[Image]:
        if self.kind is DatasetKind.SHEPP_LOGAN:
            return [generate_shepp_logan(self.size, self.variant)]
        if self.kind is DatasetKind.MNIST:
            return load_mnist(self.path, self.labels_path, self.sample_count, self.rng_seed)
        path = Path(self.path)
        if not path.is_dir():
            return [load_pgm(path)]
        # A directory of PGM files (e.g. AT&T faces): sorted, then sampled.
        files = sorted(p for p in path.rglob("*.pgm"))
        if self.sample_count is not None:
            idx = sample_without_replacement(len(files), self.sample_count, self.rng_seed)
            files = [files[i] for i in idx]
        return [load_pgm(f) for f in files]
