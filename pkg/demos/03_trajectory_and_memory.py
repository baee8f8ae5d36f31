"""
Trajectory following and loop closure
=====================================

Camera trajectories arrive as text files in any of four interchangeable
formats.  Trajectory metrics compare motion directions step by step in the
tangent space of the flattened extrinsics; memory metrics check that the
return half of a go-and-return path mirrors the outbound half.
"""
import numpy as np

from iwbench.actions import memory_loop_poses, memory_pairs, to_pose_deltas
from iwbench.memory import memory_trajectory_alignment
from iwbench.poses import Pose, PoseSequence, format_poses, parse_poses
from iwbench.trajectory import align_to_reference, trajectory_accuracy

rng = np.random.default_rng(21)

# Round-trip a trajectory through the text formats.
command = to_pose_deltas(1, 3, step_translation=0.1, step_rotation=0.05, frames=20)
text = format_poses(command, "seven-element")
print("pose file head:")
print("\n".join(text.splitlines()[:2]))
reparsed = parse_poses("seven-element", text)
print("round-trip length:", len(reparsed))

# A generated trajectory that follows the command with small positional noise.
noisy = PoseSequence([Pose(p.rotation, p.translation + rng.normal(scale=0.004, size=3))
                      for p in command])
sync = align_to_reference(noisy, command)
print("\naccuracy, noisy follower:   ", round(trajectory_accuracy(sync, command, k=15.0), 4))

# A follower that moves sideways instead: orthogonal steps score zero.
sideways = PoseSequence([Pose(np.eye(3), np.array([0.1 * t, 0.0, 0.0]))
                         for t in range(20)])
print("accuracy, orthogonal motion:",
      round(trajectory_accuracy(sideways, to_pose_deltas(1, 0, 0.1, 0.05, 20), k=15.0), 4))

# Go-and-return loops from the reciprocal pairs close exactly, so mirror
# alignment is 1; a path that never turns back scores 0.
pair = memory_pairs()[0]
loop = memory_loop_poses(pair, step_translation=0.2, step_rotation=0.1, half_frames=8)
print("\nloop final offset:", np.linalg.norm(loop[-1].translation))
print("alignment, perfect loop:   ", round(memory_trajectory_alignment(loop, k=15.0), 4))

runaway = PoseSequence([Pose(np.eye(3), np.array([0.0, 0.0, 0.2 * t]))
                        for t in range(17)])
print("alignment, runaway path:   ", round(memory_trajectory_alignment(runaway, k=15.0), 4))
