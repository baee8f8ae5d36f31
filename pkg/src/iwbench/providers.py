"""Pluggable per-frame scorer seams with analytic defaults.

Learned scorers (frame quality, noise) are external to this package; they plug
in as callables mapping a frame to a scalar.  The defaults below are cheap
analytic stand-ins built on the variance of the Laplacian, and a JSON sidecar
of externally computed scores can override providers entirely for fidelity
runs.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from scipy.signal import convolve2d

from .frames import to_grayscale

_LAPLACIAN = np.array([[0, 1, 0], [1, -4, 1], [0, 1, 0]], dtype=float)


def laplacian_variance(frame: np.ndarray) -> float:
    """Variance of the Laplacian response; low for blurred/flat frames."""
    gray = to_grayscale(frame).astype(float)
    if gray.shape[0] < 3 or gray.shape[1] < 3:
        raise ValueError("frame too small for Laplacian")
    return float(convolve2d(gray, _LAPLACIAN, mode="valid").var())


def default_noise_score(frame: np.ndarray) -> float:
    """Analytic noise score in (0, 100]; higher means lower apparent quality.

    Stand-in for a learned no-reference scorer: flat or blurred frames score
    high, strongly textured frames score low.
    """
    return 100.0 / (1.0 + laplacian_variance(frame))


def default_quality_score(frame: np.ndarray) -> float:
    """Analytic quality score in [0, 100); the complement of the noise score."""
    return 100.0 - default_noise_score(frame)


def load_sidecar(path) -> dict:
    """Load a per-frame score sidecar: a JSON array of
    {frame_index, quality, noise} objects, keyed here by frame_index."""
    entries = json.loads(Path(path).read_text())
    if not isinstance(entries, list):
        raise ValueError(f"{path}: sidecar must be a JSON array")
    out = {}
    for e in entries:
        out[int(e["frame_index"])] = {
            "quality": float(e["quality"]),
            "noise": float(e["noise"]),
        }
    return out


class SidecarProvider:
    """Frame-index-addressed provider backed by a sidecar score table."""

    def __init__(self, table: dict, field: str):
        self.table = table
        self.field = field

    def score_at(self, index: int) -> float:
        try:
            return self.table[index][self.field]
        except KeyError:
            raise KeyError(f"sidecar has no {self.field!r} score for frame {index}") from None
