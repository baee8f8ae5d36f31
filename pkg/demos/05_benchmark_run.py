"""
An end-to-end benchmark round
=============================

Generate tasks, score two mock "models" on a memory task, aggregate their
reports into a leaderboard, and emit it as CSV.  (The CLI wraps exactly these
calls; see README for the command-line equivalents.)
"""
import numpy as np

from iwbench.actions import memory_loop_poses, memory_pairs
from iwbench.config import BenchConfig
from iwbench.frames import FrameSequence
from iwbench.harness import aggregate, emit_report, generate_tasks, score_run
from iwbench.poses import Pose, PoseSequence

cfg = BenchConfig()
rng = np.random.default_rng(11)

# Ten deterministic memory tasks (here: exhaustive over the reciprocal pairs).
tasks = generate_tasks("memory", 10, seed=0, exhaustive=True)
print("generated tasks:", [t.memory_pair for t in tasks])

task = tasks[0]
pair = {p.pair_id: p for p in memory_pairs()}[task.memory_pair]
poses = memory_loop_poses(pair, cfg.step_translation, cfg.step_rotation, 6)
texture = rng.integers(0, 256, size=(10, 10, 3), dtype=np.uint8)
sidecar = {i: {"quality": 100.0, "noise": 0.0} for i in range(13)}

# "oracle-model" executes the loop perfectly: palindromic frames, exact poses.
perfect_video = FrameSequence(np.stack([texture] * 13), fps=24.0)
report_a = score_run(perfect_video, poses, task, cfg, sidecar=sidecar,
                     model="oracle-model", video_id="pair1")

# "drifty-model" forgets on the way back: frames decay, the path overshoots.
drift_frames = [texture]
for t in range(1, 13):
    drift = np.clip(texture.astype(int) + 6 * max(0, t - 6), 0, 255)
    drift_frames.append(drift.astype(np.uint8))
drifty_poses = PoseSequence([Pose(p.rotation, p.translation * 1.4) for p in poses[:7]]
                            + [Pose(p.rotation, p.translation + np.array([0.05, 0, 0]))
                               for p in poses[7:]])
report_b = score_run(FrameSequence(np.stack(drift_frames), 24.0), drifty_poses,
                     task, cfg, sidecar=sidecar, model="drifty-model", video_id="pair1")

for report in (report_a, report_b):
    print(f"\n{report.model}:")
    for key, value in sorted(report.scores.items()):
        print(f"  {key:30s} {value:.4f}")

rows = aggregate({"oracle-model": [report_a], "drifty-model": [report_b]})
print("\nleaderboard CSV:")
print(emit_report(rows, "csv").decode())
