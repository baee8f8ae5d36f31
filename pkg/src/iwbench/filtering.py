"""Two-stage video refinement: frame-level anomaly detection followed by
density-based pruning into clean segments.

Stage one flags single frames whose peak brightness jumps away from the local
median or whose frame-to-frame pixel error spikes against a rolling baseline.
Stage two smears the flags into a local anomaly density, keeps the low-density
runs, bridges nearby runs, and drops runs shorter than the minimum duration.

Frame indices in this module are 1-based and segments are inclusive on both
ends, matching the emitted manifests.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import FrameSequence, frame_mse, p95_gray, to_grayscale


@dataclass
class FilterConfig:
    """Thresholds and windows for the refinement pipeline."""

    brightness_k_sigma: float = 3.0
    brightness_floor: float = 10.0
    mse_z_threshold: float = 4.0
    mse_window: int = 31
    density_window: int = 31
    density_tau: float = 0.06
    merge_gap: int = 10
    min_len: int = 81

    def __post_init__(self):
        if not 0 < self.density_tau < 1:
            raise ValueError("density_tau must lie in (0, 1)")
        if self.mse_window < 1 or self.density_window < 1 or self.min_len < 1:
            raise ValueError("windows and min_len must be >= 1")
        if self.merge_gap < 0:
            raise ValueError("merge_gap must be >= 0")


@dataclass(frozen=True)
class Segment:
    """An inclusive 1-based frame index range."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"segment start {self.start} > end {self.end}")

    def __len__(self) -> int:
        return self.end - self.start + 1


def frame_series(seq: FrameSequence):
    """Per-frame 95th-percentile brightness and consecutive-frame MSE series.

    Returns (light, mse): light has one entry per frame; mse[i] is the error
    between frames i+1 and i+2 (1-based), so it has T-1 entries.
    """
    if len(seq) < 2:
        raise ValueError("need at least two frames")
    grays = [to_grayscale(f) for f in seq.frames]
    light = np.array([p95_gray(g) for g in grays])
    mse = np.array([frame_mse(seq.frames[i], seq.frames[i + 1])
                    for i in range(len(seq) - 1)])
    return light, mse


def _centered_median3(light: np.ndarray) -> np.ndarray:
    n = len(light)
    med = np.empty(n)
    for i in range(n):
        lo = max(0, i - 1)
        hi = min(n, i + 2)
        med[i] = np.median(light[lo:hi])
    return med


def detect_anomalies(light: np.ndarray, mse: np.ndarray, cfg: FilterConfig) -> set:
    """Flagged 1-based frame indices from both detection branches.

    Brightness branch: residual against the 3-frame centered median (windows
    truncate at the sequence ends) exceeding max(k_sigma * sigma_res, floor),
    where sigma_res is the deviation of all residuals in the sequence.

    MSE branch: a frame-to-frame error whose z-score against a centered
    rolling window (the value itself excluded) exceeds the threshold flags
    the arriving frame.  Windows with no spread never flag.
    """
    light = np.asarray(light, dtype=float)
    mse = np.asarray(mse, dtype=float)
    flagged = set()

    med = _centered_median3(light)
    residuals = np.abs(light - med)
    sigma_res = float(residuals.std())
    cut = max(cfg.brightness_k_sigma * sigma_res, cfg.brightness_floor)
    for i in np.nonzero(residuals > cut)[0]:
        flagged.add(int(i) + 1)

    half = cfg.mse_window // 2
    n = len(mse)
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        window = np.concatenate([mse[lo:i], mse[i + 1:hi]])
        if window.size < 2:
            continue
        mu = float(window.mean())
        sigma = float(window.std())
        if sigma < 1e-12:
            continue
        if (mse[i] - mu) / sigma > cfg.mse_z_threshold:
            flagged.add(i + 2)  # the arriving frame
    return flagged


def anomaly_density(flags, window: int) -> np.ndarray:
    """Boxcar-smoothed anomaly density.

    ``flags`` is a 0/1 indicator per frame; each output is the windowed flag
    count divided by the fixed window size, with out-of-range positions
    contributing zero (boundary densities are biased low, keeping boundary
    frames safer).  Use an odd window so interior saturation reaches exactly 1.
    """
    flags = np.asarray(flags, dtype=float)
    if window < 1:
        raise ValueError("window must be >= 1")
    half = window // 2
    n = len(flags)
    rho = np.zeros(n)
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        rho[i] = flags[lo:hi].sum() / window
    return rho


def _runs_below(rho: np.ndarray, tau: float) -> list:
    runs = []
    start = None
    for i, v in enumerate(rho):
        if v < tau:
            if start is None:
                start = i + 1
        elif start is not None:
            runs.append(Segment(start, i))
            start = None
    if start is not None:
        runs.append(Segment(start, len(rho)))
    return runs


def _bridge(runs: list, gap: int) -> list:
    merged = []
    for seg in runs:
        if merged and seg.start - merged[-1].end - 1 <= gap:
            merged[-1] = Segment(merged[-1].start, seg.end)
        else:
            merged.append(seg)
    return merged


def clean_segments(rho, cfg: FilterConfig) -> list:
    """Low-density runs, bridged across gaps of at most merge_gap frames
    (gap frames join the merged segment), then pruned below min_len."""
    runs = _runs_below(np.asarray(rho, dtype=float), cfg.density_tau)
    merged = _bridge(runs, cfg.merge_gap)
    return [s for s in merged if len(s) >= cfg.min_len]


def refine(seq: FrameSequence, cfg: FilterConfig) -> list:
    """Full pipeline: series extraction, flagging, density, segment cleanup."""
    light, mse = frame_series(seq)
    flagged = detect_anomalies(light, mse, cfg)
    flags = np.zeros(len(seq), dtype=int)
    for idx in flagged:
        flags[idx - 1] = 1
    rho = anomaly_density(flags, cfg.density_window)
    return clean_segments(rho, cfg)
