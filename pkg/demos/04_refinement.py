"""
Pruning a corrupted video into clean clips
==========================================

The refinement pipeline flags single bad frames (brightness spikes, pixel
error spikes), smears the flags into a local anomaly density, and keeps only
long low-density runs, bridging small gaps.
"""
import numpy as np

from iwbench.filtering import FilterConfig, anomaly_density, detect_anomalies, frame_series, refine
from iwbench.frames import FrameSequence

rng = np.random.default_rng(5)
cfg = FilterConfig()  # min_len 81, density window 31, tau 0.06

# A quiet 300-frame video with a dense 30-frame corruption burst.
frames = np.stack([np.full((8, 8, 3), 60, np.uint8)] * 300)
frames[140:170] = rng.integers(0, 256, size=(30, 8, 8, 3), dtype=np.uint8)
video = FrameSequence(frames, fps=24.0)

light, mse = frame_series(video)
flagged = detect_anomalies(light, mse, cfg)
print(f"flagged {len(flagged)} frames, all inside the burst:",
      min(flagged), "..", max(flagged))

indicator = np.zeros(len(video), dtype=int)
for idx in flagged:
    indicator[idx - 1] = 1
rho = anomaly_density(indicator, cfg.density_window)
print("peak anomaly density:", round(float(rho.max()), 3), f"(threshold {cfg.density_tau})")

print("clean segments kept:")
for seg in refine(video, cfg):
    print(f"  frames {seg.start}..{seg.end}  ({len(seg)} frames)")

# Isolated single-frame exposure spikes flag strongly but stay sparse: the
# density dip around each one is narrow, so bridging keeps one long segment
# when the gap is small enough, and duration pruning drops short leftovers.
frames2 = np.stack([np.full((8, 8, 3), 60, np.uint8)] * 300)
frames2[90] = 255
frames2[100] = 255
video2 = FrameSequence(frames2, fps=24.0)
light2, mse2 = frame_series(video2)
print("\nisolated spikes flag:", sorted(detect_anomalies(light2, mse2, cfg)))
loose = refine(video2, FilterConfig(merge_gap=40))
print("segments with merge_gap=40:", [(s.start, s.end) for s in loose])
tight = refine(video2, FilterConfig(merge_gap=0, min_len=81))
print("segments with merge_gap=0: ", [(s.start, s.end) for s in tight])
