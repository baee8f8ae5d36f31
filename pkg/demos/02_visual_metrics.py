"""
Scoring visual stability
========================

The four generation-quality metrics compare every frame's feature vector
(brightness bands, hue histogram, gradient energy) against the first frame,
calibrate the similarity, and average it under exponentially decaying
temporal weights.
"""
import numpy as np

from iwbench.frames import FrameSequence
from iwbench.providers import default_noise_score, default_quality_score
from iwbench.visual import (
    VisualConfig,
    brightness_consistency,
    color_temperature,
    image_quality,
    sharpness_retention,
)

rng = np.random.default_rng(7)
cfg = VisualConfig()


def video(frames):
    return FrameSequence(np.stack(frames).astype(np.uint8), fps=24.0)


base = rng.integers(0, 256, size=(12, 12, 3))

# A perfectly stable clip: every metric sits at 1.0.
stable = video([base] * 16)
print("stable clip:")
print("  brightness:", round(brightness_consistency(stable, cfg), 4))
print("  color:     ", round(color_temperature(stable, cfg), 4))
print("  sharpness: ", round(sharpness_retention(stable, lambda f: 0.0, cfg), 4))

# A clip that slowly brightens: the brightness bands drift away from frame 1.
fading = video([np.clip(base + 12 * t, 0, 255) for t in range(16)])
print("\nbrightening clip:")
print("  brightness:", round(brightness_consistency(fading, cfg), 4))
print("  color:     ", round(color_temperature(fading, cfg), 4))

# A clip that blurs out: gradients collapse, and once the analytic noise
# score stays high for five consecutive frames the circuit breaker latches.
blurring = []
frame = base.astype(float)
for t in range(16):
    blurring.append(frame)
    frame = (frame + np.roll(frame, 1, axis=0) + np.roll(frame, 1, axis=1)
             + np.roll(frame, -1, axis=0)) / 4.0
blurring = video(blurring)
noise_scores = [default_noise_score(f) for f in blurring.frames]
print("\nblurring clip:")
print("  noise scores (first/last):", round(noise_scores[0], 2), round(noise_scores[-1], 2))
print("  sharpness: ", round(sharpness_retention(blurring, default_noise_score, cfg), 4))

# Image quality normalizes mean per-frame scores into [0, 1].
quality = [default_quality_score(f) for f in stable.frames]
print("\nimage quality (stable clip):",
      round(image_quality(quality, cfg.quality_min, cfg.quality_max), 4))
