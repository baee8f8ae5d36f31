"""Memory-ability metrics for cyclic go-and-return tasks.

Memory symmetry checks pixel-wise consistency of frame pairs mirrored around
the temporal midpoint; trajectory alignment checks that the return half of the
camera path mirrors the outbound half.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import FrameSequence, frame_mse
from .poses import PoseSequence
from .transforms import inverse_decay_weights, upper_convex_log

_ZERO_NORM = 1e-12


@dataclass
class MemoryConfig:
    """Knobs for the memory metrics.

    mse_offset absorbs sub-threshold pixel error before the exponential decay
    controlled by k_val and k_exp; gamma and weight_mode shape the per-pair
    weights (see transforms.inverse_decay_weights for the two modes).
    """

    mse_offset: float = 10.0
    k_val: float = 0.001
    k_exp: float = 1.0
    gamma: float = 0.05
    weight_mode: str = "prose"

    def __post_init__(self):
        if self.mse_offset < 0 or self.k_val <= 0 or self.k_exp <= 0 or self.gamma <= 0:
            raise ValueError("coefficients must be positive (offset may be 0)")


def symmetry_score(pair_mses, total_frames: int, cfg: MemoryConfig) -> float:
    """Scoring core: weighted exp(-k_val * max(0, mse - offset)^k_exp) over
    the mirrored frame pairs (one MSE per pair, outermost first)."""
    pair_mses = np.asarray(pair_mses, dtype=float)
    if total_frames < 2:
        raise ValueError("sequence too short")
    if len(pair_mses) != total_frames // 2:
        raise ValueError("need one MSE per mirrored pair")
    w = inverse_decay_weights(total_frames, cfg.gamma, cfg.weight_mode)
    excess = np.maximum(0.0, pair_mses - cfg.mse_offset)
    return float(np.sum(w * np.exp(-cfg.k_val * excess ** cfg.k_exp)))


def memory_symmetry(seq: FrameSequence, cfg: MemoryConfig) -> float:
    """Pixel-level loop closure: MSE of frames t and T-t+1, decayed and weighted.

    The middle frame of an odd-length sequence has no partner and is excluded.
    """
    t_total = len(seq)
    if t_total < 2:
        raise ValueError("sequence too short")
    mses = [frame_mse(seq.frames[t], seq.frames[t_total - 1 - t])
            for t in range(t_total // 2)]
    return symmetry_score(mses, t_total, cfg)


def mirror_similarity(v_out: np.ndarray, v_back: np.ndarray) -> float:
    """Cosine between an outbound step and the negated mirrored return step.

    Two zero-motion steps mirror each other perfectly and score 1; a zero
    step against a moving one scores 0.
    """
    na = float(np.linalg.norm(v_out))
    nb = float(np.linalg.norm(v_back))
    if na < _ZERO_NORM and nb < _ZERO_NORM:
        return 1.0
    if na < _ZERO_NORM or nb < _ZERO_NORM:
        return 0.0
    return float(np.dot(v_out, -v_back) / (na * nb))


def alignment_score(displacements, k: float) -> float:
    """Scoring core over translation-only step vectors, shape (T-1, 3).

    Pair t (1-based, t = 1..floor(T/2)) mirrors step T-t+1 clamped to the last
    existing step T-1; negative mirror cosines clamp to 0 before calibration.
    """
    v = np.asarray(displacements, dtype=float)
    n_steps = len(v)
    t_total = n_steps + 1
    if t_total < 3:
        raise ValueError("need at least three poses")
    half = t_total // 2
    total = 0.0
    for t in range(1, half + 1):
        mirror = min(t_total - t + 1, t_total - 1)
        sim = mirror_similarity(v[t - 1], v[mirror - 1])
        total += upper_convex_log(max(sim, 0.0), k)
    return total / half


def memory_trajectory_alignment(seq: PoseSequence, k: float) -> float:
    """Mirror symmetry of instantaneous displacement directions on a loop path."""
    if len(seq) < 3:
        raise ValueError("need at least three poses")
    return alignment_score(np.diff(seq.translations(), axis=0), k)
