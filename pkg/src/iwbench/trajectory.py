"""Trajectory-following metrics: motion smoothness, trajectory accuracy and
trajectory tolerance.

The trajectory scores compare motion directions in the tangent space of the
flattened 12-dim extrinsics (first differences of row-major [R|t]).  Motion
smoothness drops every other frame, reconstructs it from its neighbors, and
scores how well the reconstruction matches.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .frames import FrameSequence, frame_mse
from .poses import PoseSequence
from .transforms import cosine_sim, upper_convex_log

_ZERO_NORM = 1e-12

# BT.601 luma, unrounded: smoothness comparisons need a continuous channel
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass
class SmoothnessWeights:
    """Blend weights for the smoothness deviation score (must sum to 1).

    The perceptual term only contributes when a perceptual-distance provider
    is configured; otherwise its weight is folded proportionally into the
    structural and pixel terms.
    """

    w_ssim: float = 0.5
    w_mse: float = 0.5
    w_perceptual: float = 0.0
    sigma_mse: float = 50.0

    def __post_init__(self):
        total = self.w_ssim + self.w_mse + self.w_perceptual
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total}")
        if min(self.w_ssim, self.w_mse, self.w_perceptual) < 0:
            raise ValueError("weights must be non-negative")


def flatten_pose(pose) -> np.ndarray:
    """Row-major 12-vector of the 3x4 extrinsic block [R|t]."""
    return pose.matrix3x4().reshape(-1)


def tangent_series(seq: PoseSequence) -> np.ndarray:
    """First differences of the flattened extrinsics, shape (T-1, 12)."""
    if len(seq) < 2:
        raise ValueError("need at least two poses")
    flat = np.array([flatten_pose(p) for p in seq])
    return np.diff(flat, axis=0)


def _rotation_between(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimal rotation carrying unit vector a onto unit vector b."""
    v = np.cross(a, b)
    c = float(np.dot(a, b))
    s = float(np.linalg.norm(v))
    if s < _ZERO_NORM:
        if c > 0:
            return np.eye(3)
        # antiparallel: rotate pi about any axis orthogonal to a
        axis = np.cross(a, [1.0, 0.0, 0.0])
        if np.linalg.norm(axis) < _ZERO_NORM:
            axis = np.cross(a, [0.0, 1.0, 0.0])
        axis = axis / np.linalg.norm(axis)
        return 2.0 * np.outer(axis, axis) - np.eye(3)
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx * ((1 - c) / (s * s))


def principal_direction(seq: PoseSequence) -> np.ndarray:
    """Unit vector of the summed translation deltas (net displacement)."""
    t = seq.translations()
    net = t[-1] - t[0]
    norm = float(np.linalg.norm(net))
    if norm < 1e-9:
        return np.zeros(3)
    return net / norm


def align_to_reference(raw: PoseSequence, reference: PoseSequence) -> PoseSequence:
    """Rotate a trajectory so its main motion direction matches the reference.

    A single global rotation is applied to every translation and rotation, so
    all inter-pose distances are preserved.  If either trajectory has no net
    displacement the input is returned unchanged.
    """
    if len(raw) < 2 or len(reference) < 2:
        raise ValueError("need at least two poses in each trajectory")
    p_raw = principal_direction(raw)
    p_ref = principal_direction(reference)
    if not p_raw.any() or not p_ref.any():
        return raw
    q = _rotation_between(p_raw, p_ref)
    from .poses import Pose
    return PoseSequence([Pose(q @ p.rotation, q @ p.translation) for p in raw])


def _mean_abs_cosine(a: PoseSequence, b: PoseSequence, k: float,
                     signed: bool) -> float:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    va = tangent_series(a)
    vb = tangent_series(b)
    total = 0.0
    for t in range(len(va)):
        sim = cosine_sim(va[t], vb[t])  # 0 when either step is zero motion
        sim = max(sim, 0.0) if signed else abs(sim)
        total += upper_convex_log(sim, k)
    return total / len(va)


def trajectory_accuracy(sync: PoseSequence, cmd: PoseSequence, k: float,
                        signed: bool = False) -> float:
    """Mean calibrated |cosine| between generated and commanded motion steps.

    The absolute value makes exactly-reversed motion indistinguishable from
    exact following; pass signed=True to clamp reversed steps to 0 instead
    (a non-standard variant, off by default).
    """
    return _mean_abs_cosine(sync, cmd, k, signed)


def trajectory_tolerance(sync: PoseSequence, gt: PoseSequence, k: float,
                         signed: bool = False) -> float:
    """Same contract as trajectory_accuracy, against the ground-truth trajectory."""
    return _mean_abs_cosine(sync, gt, k, signed)


# ---------------------------------------------------------------------------
# motion smoothness


def _gaussian_kernel(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    x = np.arange(size, dtype=float) - (size - 1) / 2.0
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


_SSIM_KERNEL = _gaussian_kernel()


def _window_mean(img: np.ndarray) -> np.ndarray:
    out = correlate1d(img, _SSIM_KERNEL, axis=0, mode="reflect")
    return correlate1d(out, _SSIM_KERNEL, axis=1, mode="reflect")


def ssim(a: np.ndarray, b: np.ndarray, dynamic_range: float = 255.0) -> float:
    """Single-scale structural similarity on a 2-D (grayscale) image pair.

    11x11 Gaussian window (sigma 1.5), stabilizers (0.01 L)^2 and (0.03 L)^2,
    reflected borders.  Satisfies ssim(a, a) == 1 and symmetry.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 2:
        raise ValueError("ssim expects two equal-shape 2-D images")
    c1 = (0.01 * dynamic_range) ** 2
    c2 = (0.03 * dynamic_range) ** 2
    mu_a = _window_mean(a)
    mu_b = _window_mean(b)
    var_a = _window_mean(a * a) - mu_a * mu_a
    var_b = _window_mean(b * b) - mu_b * mu_b
    cov = _window_mean(a * b) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def blend_reconstructor(prev: np.ndarray, nxt: np.ndarray) -> np.ndarray:
    """Default midpoint reconstruction: the pixel-wise mean of the neighbors."""
    return (np.asarray(prev, dtype=float) + np.asarray(nxt, dtype=float)) / 2.0


class DirectoryReconstructor:
    """Reconstructions precomputed by an external model, one file per dropped
    frame in numeric order (PNG directory or packed raw file).

    The n-th file/frame stands in for the n-th reconstructed frame (1-based
    video indices 2, 4, ...).  Supplying too few reconstructions raises when
    the missing index is requested.
    """

    def __init__(self, path, fps: float = 24.0):
        from .frames import load_video

        self._frames = load_video(path, fps).frames

    def frame_at(self, video_index: int) -> np.ndarray:
        slot = (video_index - 2) // 2
        if not 0 <= slot < len(self._frames):
            raise IndexError(f"no external reconstruction for frame {video_index}")
        return self._frames[slot]


def _luma(frame: np.ndarray) -> np.ndarray:
    f = np.asarray(frame, dtype=float)
    return f[..., 0] * _LUMA[0] + f[..., 1] * _LUMA[1] + f[..., 2] * _LUMA[2]


def motion_smoothness(seq: FrameSequence, reconstructor=blend_reconstructor,
                      weights: SmoothnessWeights | None = None,
                      perceptual=None) -> float:
    """Sampling-reconstruction smoothness score.

    Every interior frame at an even 1-based index is dropped and rebuilt from
    its two surviving neighbors; the per-frame deviation blends SSIM,
    exp(-mse / sigma^2) and optionally (1 - perceptual distance).  The final
    score is the mean over all reconstructed frames; it is exactly 1 when the
    reconstructor reproduces every dropped frame.

    The reconstructor is either a (prev, next) -> frame callable or an object
    with a frame_at(video_index) method (e.g. DirectoryReconstructor wrapping
    externally precomputed reconstructions).
    """
    if weights is None:
        weights = SmoothnessWeights()
    t_total = len(seq)
    if t_total < 3:
        raise ValueError("need at least three frames")
    w_ssim, w_mse, w_perc = weights.w_ssim, weights.w_mse, weights.w_perceptual
    if perceptual is None and w_perc > 0:
        scale = w_ssim + w_mse
        if scale <= 0:
            raise ValueError("no usable smoothness weights without a perceptual provider")
        w_ssim, w_mse, w_perc = w_ssim / scale, w_mse / scale, 0.0
    sigma_sq = weights.sigma_mse ** 2

    by_index = getattr(reconstructor, "frame_at", None)
    scores = []
    for t in range(2, t_total + 1, 2):  # 1-based even indices with both neighbors
        if t + 1 > t_total:
            break
        orig = seq.frames[t - 1]
        if by_index is not None:
            recon = by_index(t)
        else:
            recon = reconstructor(seq.frames[t - 2], seq.frames[t])
        part = w_ssim * ssim(_luma(orig), _luma(recon))
        part += w_mse * float(np.exp(-frame_mse(orig, recon) / sigma_sq))
        if w_perc > 0:
            part += w_perc * (1.0 - float(perceptual(orig, recon)))
        # ssim may dip below zero on anticorrelated pairs; keep scores in [0, 1]
        scores.append(float(np.clip(part, 0.0, 1.0)))
    return float(np.mean(scores))
