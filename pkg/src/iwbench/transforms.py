"""Shared scalar machinery for the metric suite.

Every score in the suite is built out of four ingredients: cosine similarity
between feature vectors, two monotone [0,1] -> [0,1] calibration transforms
(one convex, one concave), and normalized exponential temporal weights.
"""
from __future__ import annotations

import math

import numpy as np


def cosine_sim(a, b) -> float:
    """Cosine similarity of two equal-length vectors.

    If either vector has zero norm the result is defined as 0.0 so that
    degenerate inputs (all-black frames, stationary trajectories) never abort
    a batch run.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def modified_softmax(x: float, lam: float) -> float:
    """Convex calibration (e^(lam*x) - 1) / (e^lam - 1) on [0, 1].

    Fixes 0 -> 0 and 1 -> 1; larger ``lam`` steepens the high end, amplifying
    sensitivity near perfect scores.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    return float((math.exp(lam * x) - 1.0) / (math.exp(lam) - 1.0))


def upper_convex_log(x: float, k: float) -> float:
    """Concave calibration ln(1 + k*x) / ln(1 + k) on [0, 1].

    Fixes 0 -> 0 and 1 -> 1; spreads out the low-to-middle score range.
    ``k`` in the 10..20 range is typical.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    return float(math.log1p(k * x) / math.log1p(k))


def decay_weights(length: int, coeff: float) -> np.ndarray:
    """Normalized exponential decay weights over frame distances 1..length-1.

    w(d) = exp(-coeff * d), renormalized to sum to 1 so sequences of different
    lengths are weighted on the same scale.  Weight is largest at distance 1.
    """
    if length < 2:
        raise ValueError("length must be >= 2")
    if coeff <= 0:
        raise ValueError("coeff must be positive")
    d = np.arange(1, length, dtype=float)
    w = np.exp(-coeff * d)
    return w / w.sum()


def inverse_decay_weights(length: int, gamma: float, mode: str = "prose") -> np.ndarray:
    """Normalized weights over the first-half indices t = 1..floor(length/2).

    mode="prose" (default): w_t = exp(-gamma * (t - 1)), largest at t=1, i.e.
    the outermost symmetric frame pair dominates.  mode="formula": distance is
    taken from the sequence midpoint, d = |length/2 - t|, which instead makes
    the innermost pair dominate.  The two conventions disagree; both are kept
    selectable (see the ``memory_weight_mode`` config key).
    """
    if length < 2:
        raise ValueError("length must be >= 2")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    t = np.arange(1, length // 2 + 1, dtype=float)
    if mode == "prose":
        d = t - 1.0
    elif mode == "formula":
        d = np.abs(length / 2.0 - t)
    else:
        raise ValueError(f"unknown weight mode: {mode!r}")
    w = np.exp(-gamma * d)
    return w / w.sum()
