"""Frame containers, color-space reductions and per-frame feature vectors.

Frames are row-major RGB uint8 arrays of shape (H, W, 3); grayscale frames are
(H, W) uint8.  A video is a FrameSequence: a (T, H, W, 3) stack plus its frame
rate.  All functions here are pure and safe to call concurrently.
"""
from __future__ import annotations

import math
import re
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import convolve2d

RAW_MAGIC = b"IWFR"

# ITU-R BT.601 luma weights
_LUMA = np.array([0.299, 0.587, 0.114])

_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=float)
_SOBEL_Y = _SOBEL_X.T


@dataclass(frozen=True)
class FrameSequence:
    """An ordered stack of same-sized RGB frames with a frame rate."""

    frames: np.ndarray  # (T, H, W, 3) uint8
    fps: float

    def __post_init__(self):
        f = np.asarray(self.frames)
        if f.ndim != 4 or f.shape[-1] != 3:
            raise ValueError(f"expected (T, H, W, 3) frame stack, got {f.shape}")
        if f.shape[0] < 1:
            raise ValueError("sequence must contain at least one frame")
        if f.dtype != np.uint8:
            raise ValueError(f"frames must be uint8, got {f.dtype}")
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        object.__setattr__(self, "frames", f)

    def __len__(self) -> int:
        return self.frames.shape[0]

    def __getitem__(self, t: int) -> np.ndarray:
        return self.frames[t]


def _check_rgb(frame: np.ndarray) -> np.ndarray:
    frame = np.asarray(frame)
    if frame.ndim != 3 or frame.shape[-1] != 3:
        raise ValueError(f"expected (H, W, 3) frame, got shape {frame.shape}")
    return frame


def to_grayscale(frame: np.ndarray) -> np.ndarray:
    """Reduce an RGB frame to rounded BT.601 luma (uint8).

    Rounding is half-to-even; the weights sum to 1 so white maps to 255.
    """
    frame = _check_rgb(frame).astype(float)
    # explicit elementwise association keeps the rounding bit-reproducible
    gray = frame[..., 0] * 0.299 + frame[..., 1] * 0.587 + frame[..., 2] * 0.114
    return np.rint(gray).astype(np.uint8)


def brightness_vector(gray: np.ndarray, dark_max: int = 85, bright_min: int = 170) -> np.ndarray:
    """Fractions of pixels in the dark / mid / bright grayscale bands.

    Bands are [0, dark_max], (dark_max, bright_min) and [bright_min, 255].
    The three fractions sum to 1.
    """
    gray = np.asarray(gray)
    if gray.size == 0:
        raise ValueError("empty input")
    if not 0 < dark_max < bright_min <= 255:
        raise ValueError("thresholds must satisfy 0 < dark_max < bright_min <= 255")
    total = gray.size
    dark = int(np.count_nonzero(gray <= dark_max))
    bright = int(np.count_nonzero(gray >= bright_min))
    mid = total - dark - bright
    return np.array([dark, mid, bright], dtype=float) / total


def hue_vector(frame: np.ndarray, bins: int = 7) -> np.ndarray:
    """Hue histogram over equal-width bins of the 0..179 half-degree scale.

    Pixels with zero saturation (max channel == min channel) carry no hue and
    are excluded; a fully gray frame yields the all-zero vector.  Otherwise
    the bin fractions sum to 1.
    """
    frame = _check_rgb(frame).astype(float)
    r, g, b = frame[..., 0], frame[..., 1], frame[..., 2]
    cmax = frame.max(axis=-1)
    cmin = frame.min(axis=-1)
    delta = cmax - cmin
    saturated = delta > 0

    out = np.zeros(bins, dtype=float)
    if not saturated.any():
        return out

    d = np.where(saturated, delta, 1.0)
    hue = np.zeros_like(cmax)
    rmax = saturated & (cmax == r)
    gmax = saturated & ~rmax & (cmax == g)
    bmax = saturated & ~rmax & ~gmax
    hue[rmax] = np.mod((g - b)[rmax] / d[rmax], 6.0)
    hue[gmax] = (b - r)[gmax] / d[gmax] + 2.0
    hue[bmax] = (r - g)[bmax] / d[bmax] + 4.0
    # 60 deg per sector, halved to the 0..179 scale
    hue_half = hue[saturated] * 30.0

    idx = np.minimum((hue_half * bins / 180.0).astype(int), bins - 1)
    counts = np.bincount(idx, minlength=bins).astype(float)
    return counts / counts.sum()


def sharpness_vector(gray: np.ndarray) -> np.ndarray:
    """Summed absolute 3x3 Sobel responses (horizontal, vertical).

    Responses are taken on interior pixels only (valid convolution, no
    padding), so the result depends purely on intensity differences.
    """
    gray = np.asarray(gray, dtype=float)
    if gray.ndim != 2:
        raise ValueError(f"expected (H, W) grayscale frame, got shape {gray.shape}")
    if gray.shape[0] < 3 or gray.shape[1] < 3:
        raise ValueError("frame too small for gradient")
    gx = convolve2d(gray, _SOBEL_X, mode="valid")
    gy = convolve2d(gray, _SOBEL_Y, mode="valid")
    return np.array([np.abs(gx).sum(), np.abs(gy).sum()])


def frame_mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared channel difference between two frames of equal shape."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def p95_gray(gray: np.ndarray, mode: str = "nearest-rank") -> float:
    """95th percentile of the grayscale values.

    mode="nearest-rank" (default) picks the sorted value at 1-based rank
    ceil(0.95 * n) with no interpolation; mode="linear" uses linearly
    interpolated percentiles for cross-checking.
    """
    gray = np.asarray(gray)
    if gray.size == 0:
        raise ValueError("empty input")
    flat = np.sort(gray.reshape(-1))
    if mode == "nearest-rank":
        rank = max(1, math.ceil(0.95 * flat.size))
        return float(flat[rank - 1])
    if mode == "linear":
        return float(np.percentile(flat, 95))
    raise ValueError(f"unknown percentile mode: {mode!r}")


# ---------------------------------------------------------------------------
# ingestion


def _numeric_key(name: str):
    parts = re.split(r"(\d+)", name)
    return tuple(int(p) if p.isdigit() else p for p in parts)


def load_png_dir(path, fps: float) -> FrameSequence:
    """Load a directory of numerically-sorted PNG files as a sequence."""
    from PIL import Image

    path = Path(path)
    files = sorted((p for p in path.iterdir() if p.suffix.lower() == ".png"),
                   key=lambda p: _numeric_key(p.name))
    if not files:
        raise ValueError(f"no PNG files in {path}")
    frames = []
    for p in files:
        with Image.open(p) as im:
            frames.append(np.asarray(im.convert("RGB"), dtype=np.uint8))
    shapes = {f.shape for f in frames}
    if len(shapes) != 1:
        raise ValueError(f"frames differ in size: {sorted(shapes)}")
    return FrameSequence(np.stack(frames), fps)


def load_packed_raw(path, fps: float) -> FrameSequence:
    """Load a packed raw video file.

    Layout: 16-byte header {magic b"IWFR", u32-LE width, height, frame count}
    followed by width*height*3 bytes of RGB per frame.
    """
    data = Path(path).read_bytes()
    if len(data) < 16 or data[:4] != RAW_MAGIC:
        raise ValueError(f"{path}: not a packed raw video (bad magic)")
    width, height, count = struct.unpack_from("<III", data, 4)
    if width == 0 or height == 0 or count == 0:
        raise ValueError(f"{path}: bad header dimensions {width}x{height}x{count}")
    expect = 16 + width * height * 3 * count
    if len(data) != expect:
        raise ValueError(f"{path}: expected {expect} bytes, found {len(data)}")
    frames = np.frombuffer(data, dtype=np.uint8, offset=16)
    frames = frames.reshape(count, height, width, 3).copy()
    return FrameSequence(frames, fps)


def write_packed_raw(path, seq: FrameSequence) -> None:
    """Write a FrameSequence in the packed raw layout read by load_packed_raw."""
    t, h, w, _ = seq.frames.shape
    with open(path, "wb") as fh:
        fh.write(RAW_MAGIC)
        fh.write(struct.pack("<III", w, h, t))
        fh.write(seq.frames.tobytes())


def load_video(path, fps: float) -> FrameSequence:
    """Load either ingestion format: a PNG directory or a packed raw file."""
    path = Path(path)
    if path.is_dir():
        return load_png_dir(path, fps)
    return load_packed_raw(path, fps)
