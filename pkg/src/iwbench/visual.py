"""Generation-quality metrics: image quality, brightness consistency, color
temperature constraint, and sharpness retention.

Each metric is split into a feature-extraction stage (per-frame vectors) and a
pure scalar scoring core, so the cores can be validated directly against
hand-transcribed formulas on synthetic feature tracks.  All scores land in
[0, 1] and hit exactly 1 on a sequence of identical frames.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import FrameSequence, brightness_vector, hue_vector, sharpness_vector, to_grayscale
from .transforms import cosine_sim, decay_weights, modified_softmax, upper_convex_log


@dataclass
class VisualConfig:
    """Knobs for the four visual metrics.

    lam / alpha / beta / k are the calibration and decay coefficients; beta
    must exceed alpha so the hue metric's weights decay faster than the
    brightness metric's.  noise_tau and breaker_window control the sharpness
    circuit breaker (window = consecutive high-noise frames that trip it).
    """

    lam: float = 5.0
    alpha: float = 0.05
    beta: float = 0.15
    k: float = 15.0
    dark_max: int = 85
    bright_min: int = 170
    noise_tau: float = 50.0
    breaker_window: int = 5
    breaker_latching: bool = True
    quality_min: float = 0.0
    quality_max: float = 100.0

    def __post_init__(self):
        if not self.beta > self.alpha > 0:
            raise ValueError("need beta > alpha > 0")
        if self.breaker_window < 1:
            raise ValueError("breaker_window must be >= 1")


def image_quality(scores, score_min: float, score_max: float) -> float:
    """Linearly normalized mean of per-frame quality scores, clamped to [0, 1]."""
    scores = np.asarray(scores, dtype=float)
    if scores.size == 0:
        raise ValueError("empty score list")
    if not score_max > score_min:
        raise ValueError("score_max must exceed score_min")
    mean = float(scores.mean())
    return float(np.clip((mean - score_min) / (score_max - score_min), 0.0, 1.0))


def brightness_score(vectors, lam: float, alpha: float) -> float:
    """Scoring core: decay-weighted calibrated similarity of each frame's
    brightness vector to the first frame's."""
    vectors = np.asarray(vectors, dtype=float)
    t_total = len(vectors)
    if t_total < 2:
        raise ValueError("sequence too short")
    w = decay_weights(t_total, alpha)
    score = 0.0
    for d in range(1, t_total):
        score += w[d - 1] * modified_softmax(cosine_sim(vectors[d], vectors[0]), lam)
    return score


def brightness_consistency(seq: FrameSequence, cfg: VisualConfig) -> float:
    """Stability of the dark/mid/bright pixel distribution over time."""
    vecs = [brightness_vector(to_grayscale(f), cfg.dark_max, cfg.bright_min)
            for f in seq.frames]
    return brightness_score(vecs, cfg.lam, cfg.alpha)


def color_score(hue_vectors, lam: float, beta: float) -> float:
    """Scoring core: each frame's similarity is averaged between the first
    frame and the previous frame before calibration and decay weighting."""
    hue_vectors = np.asarray(hue_vectors, dtype=float)
    t_total = len(hue_vectors)
    if t_total < 2:
        raise ValueError("sequence too short")
    w = decay_weights(t_total, beta)
    score = 0.0
    for t in range(2, t_total + 1):  # 1-based frame index
        sim = 0.5 * (cosine_sim(hue_vectors[t - 1], hue_vectors[0])
                     + cosine_sim(hue_vectors[t - 1], hue_vectors[t - 2]))
        score += w[t - 2] * modified_softmax(sim, lam)
    return score


def color_temperature(seq: FrameSequence, cfg: VisualConfig) -> float:
    """Consistency of the hue histogram; penalizes color drift.

    Fully gray frames have an all-zero hue vector, which scores similarity 0
    against anything (including another gray frame).
    """
    vecs = [hue_vector(f) for f in seq.frames]
    return color_score(vecs, cfg.lam, cfg.beta)


def breaker_states(noise_scores, tau: float, window: int, latching: bool = True) -> np.ndarray:
    """Per-frame triggered state of the noise circuit breaker.

    The breaker trips once ``window`` consecutive frames exceed tau, starting
    at the frame that completes the run.  When latching it never releases
    within the sequence; otherwise it releases on the first sub-tau frame.
    """
    noise_scores = np.asarray(noise_scores, dtype=float)
    states = np.zeros(len(noise_scores), dtype=bool)
    run = 0
    tripped = False
    for i, n in enumerate(noise_scores):
        run = run + 1 if n > tau else 0
        if run >= window:
            tripped = True
        elif not latching and run == 0:
            tripped = False
        states[i] = tripped
    return states


def sharpness_score(grad_vectors, noise_scores, cfg: VisualConfig) -> float:
    """Scoring core for sharpness retention.

    A frame in the clean state (breaker untripped and its own noise below tau)
    contributes its gradient-vector similarity to frame 1; otherwise it
    contributes clip(1 - similarity, 0, 0.2).  Contributions go through the
    concave log calibration and decay weighting.
    """
    grad_vectors = np.asarray(grad_vectors, dtype=float)
    noise_scores = np.asarray(noise_scores, dtype=float)
    t_total = len(grad_vectors)
    if t_total < 2:
        raise ValueError("sequence too short")
    if len(noise_scores) != t_total:
        raise ValueError("need one noise score per frame")
    trig = breaker_states(noise_scores, cfg.noise_tau, cfg.breaker_window,
                          cfg.breaker_latching)
    w = decay_weights(t_total, cfg.alpha)
    score = 0.0
    for t in range(2, t_total + 1):  # 1-based frame index
        sim = cosine_sim(grad_vectors[t - 1], grad_vectors[0])
        if not trig[t - 1] and noise_scores[t - 1] < cfg.noise_tau:
            m = sim
        else:
            m = float(np.clip(1.0 - sim, 0.0, 0.2))
        score += w[t - 2] * upper_convex_log(m, cfg.k)
    return score


def sharpness_retention(seq: FrameSequence, noise_provider, cfg: VisualConfig) -> float:
    """Edge-gradient stability with a noise circuit breaker.

    noise_provider maps a frame to its scalar noise score; scores above
    cfg.noise_tau count as high noise.
    """
    grads = [sharpness_vector(to_grayscale(f)) for f in seq.frames]
    noise = [float(noise_provider(f)) for f in seq.frames]
    return sharpness_score(grads, noise, cfg)
