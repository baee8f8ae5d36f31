"""Shared test helpers: synthetic frames, sequences and random rotations."""
from __future__ import annotations

import numpy as np
import pytest

from iwbench.frames import FrameSequence
from iwbench.poses import Pose, PoseSequence


def solid_frame(rgb, h=8, w=8) -> np.ndarray:
    frame = np.zeros((h, w, 3), dtype=np.uint8)
    frame[:] = rgb
    return frame


def textured_frame(h=16, w=16, seed=0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)


def sequence(frames, fps=24.0) -> FrameSequence:
    return FrameSequence(np.stack(frames), fps)


def constant_sequence(rgb, t=10, h=8, w=8, fps=24.0) -> FrameSequence:
    return sequence([solid_frame(rgb, h, w)] * t, fps)


def random_rotation(rng) -> np.ndarray:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def random_pose_sequence(rng, n=5, scale=1.0) -> PoseSequence:
    return PoseSequence([Pose(random_rotation(rng), rng.normal(size=3) * scale)
                         for _ in range(n)])


def straight_line_poses(direction, steps, step=0.1) -> PoseSequence:
    d = np.asarray(direction, dtype=float)
    return PoseSequence([Pose(np.eye(3), d * step * i) for i in range(steps)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
