"""Memory metrics: pixel symmetry and mirror trajectory alignment."""
import numpy as np
import pytest

import oracles
from iwbench.actions import memory_loop_poses, memory_pairs
from iwbench.frames import frame_mse
from iwbench.memory import (
    MemoryConfig,
    alignment_score,
    memory_symmetry,
    memory_trajectory_alignment,
    mirror_similarity,
    symmetry_score,
)
from iwbench.poses import Pose, PoseSequence

from conftest import sequence, solid_frame, straight_line_poses, textured_frame


class TestMemorySymmetry:
    def test_palindrome_is_one(self):
        frames = [textured_frame(8, 8, seed=i) for i in (0, 1, 2, 1, 0)]
        assert memory_symmetry(sequence(frames), MemoryConfig()) == pytest.approx(1.0, abs=1e-12)

    def test_offset_absorbs_small_error(self):
        # mirrored-pair MSEs below the offset map to exactly 1
        a = solid_frame((100, 100, 100))
        b = solid_frame((101, 101, 101))  # mse 1 < offset 10
        seq = sequence([a, textured_frame(8, 8, seed=5), b])
        assert frame_mse(a, b) <= 10.0
        assert memory_symmetry(seq, MemoryConfig(mse_offset=10.0)) == pytest.approx(1.0, abs=1e-12)

    def test_four_frame_hand_case(self):
        # derived case: pair MSEs {100, 400}, offset 10, k_val 0.01, k_exp 1
        cfg = MemoryConfig(mse_offset=10.0, k_val=0.01, k_exp=1.0, gamma=0.05)
        mses = [100.0, 400.0]
        expected = oracles.symmetry_formula(mses, 4, 10.0, 0.01, 1.0, 0.05)
        assert symmetry_score(mses, 4, cfg) == pytest.approx(expected, abs=1e-12)
        # and through real frames whose pair MSEs are exactly 100 and 400
        f1 = solid_frame((0, 0, 0))
        f4 = solid_frame((10, 10, 10))   # mse(f1, f4) = 100
        f2 = solid_frame((50, 50, 50))
        f3 = solid_frame((70, 70, 70))   # mse(f2, f3) = 400
        seq = sequence([f1, f2, f3, f4])
        assert memory_symmetry(seq, cfg) == pytest.approx(expected, abs=1e-12)

    def test_formula_equivalence_random_tracks(self, rng):
        cfg = MemoryConfig()
        for _ in range(30):
            t = int(rng.integers(2, 30))
            mses = rng.uniform(0, 2000, size=t // 2)
            got = symmetry_score(mses, t, cfg)
            expected = oracles.symmetry_formula(mses.tolist(), t, cfg.mse_offset,
                                                cfg.k_val, cfg.k_exp, cfg.gamma)
            assert got == pytest.approx(expected, abs=1e-9)
            assert 0.0 <= got <= 1.0

    def test_reversal_invariance(self, rng):
        frames = [textured_frame(8, 8, seed=i) for i in range(7)]
        cfg = MemoryConfig()
        fwd = memory_symmetry(sequence(frames), cfg)
        rev = memory_symmetry(sequence(frames[::-1]), cfg)
        assert fwd == pytest.approx(rev, abs=1e-12)

    def test_monotone_in_pair_mse(self):
        cfg = MemoryConfig(mse_offset=0.0)
        base = symmetry_score([50.0, 50.0, 50.0], 6, cfg)
        worse = symmetry_score([50.0, 500.0, 50.0], 6, cfg)
        assert worse < base

    def test_middle_frame_excluded(self):
        # odd length: the unpaired middle frame can be anything
        a, b = textured_frame(seed=1), textured_frame(seed=2)
        mid1, mid2 = textured_frame(seed=3), textured_frame(seed=4)
        cfg = MemoryConfig()
        s1 = memory_symmetry(sequence([a, mid1, a]), cfg)
        s2 = memory_symmetry(sequence([a, mid2, a]), cfg)
        assert s1 == s2 == pytest.approx(1.0, abs=1e-12)

    def test_formula_weight_mode(self):
        cfg = MemoryConfig(weight_mode="formula")
        mses = [0.0, 1000.0, 0.0]
        expected = oracles.symmetry_formula(mses, 6, cfg.mse_offset, cfg.k_val,
                                            cfg.k_exp, cfg.gamma, mode="formula")
        assert symmetry_score(mses, 6, cfg) == pytest.approx(expected, abs=1e-12)

    def test_too_short(self):
        with pytest.raises(ValueError):
            memory_symmetry(sequence([solid_frame((0, 0, 0))]), MemoryConfig())


class TestMirrorSimilarity:
    def test_both_zero_is_one(self):
        assert mirror_similarity(np.zeros(3), np.zeros(3)) == 1.0

    def test_one_zero_is_zero(self):
        assert mirror_similarity(np.array([1.0, 0, 0]), np.zeros(3)) == 0.0

    def test_exact_mirror(self):
        v = np.array([0.3, -0.2, 0.9])
        assert mirror_similarity(v, -v) == pytest.approx(1.0)


class TestTrajectoryAlignment:
    def test_out_and_back_is_one(self):
        fwd = [np.array([0.0, 0.0, 0.1 * i]) for i in range(5)]
        back = fwd[-2::-1]
        seq = PoseSequence([Pose(np.eye(3), t) for t in fwd + back])
        assert memory_trajectory_alignment(seq, 15.0) == pytest.approx(1.0, abs=1e-12)

    def test_straight_line_is_zero(self):
        seq = straight_line_poses([0, 0, 1], 8)
        assert memory_trajectory_alignment(seq, 15.0) == pytest.approx(0.0, abs=1e-12)

    def test_perpendicular_return_is_zero(self):
        # out along +z, return rotated 90 degrees in the plane
        pts = [np.array([0.0, 0.0, float(i)]) for i in range(4)]
        pts += [pts[-1] + np.array([float(i + 1), 0.0, 0.0]) for i in range(3)]
        seq = PoseSequence([Pose(np.eye(3), t) for t in pts])
        got = memory_trajectory_alignment(seq, 15.0)
        disp = np.diff(seq.translations(), axis=0)
        assert got == pytest.approx(oracles.alignment_formula(disp.tolist(), 15.0), abs=1e-12)
        assert got == pytest.approx(0.0, abs=1e-12)

    def test_formula_equivalence_random_tracks(self, rng):
        for _ in range(30):
            t = int(rng.integers(3, 25))
            disp = rng.normal(size=(t - 1, 3))
            got = alignment_score(disp, 15.0)
            assert got == pytest.approx(oracles.alignment_formula(disp.tolist(), 15.0), abs=1e-9)
            assert 0.0 <= got <= 1.0

    def test_global_rotation_invariance(self, rng):
        from conftest import random_rotation

        fwd = [np.array([0.0, 0.1 * i, 0.02 * i * i]) for i in range(5)]
        back = fwd[-2::-1]
        seq = PoseSequence([Pose(np.eye(3), t) for t in fwd + back])
        q = random_rotation(rng)
        rotated = PoseSequence([Pose(np.eye(3), q @ p.translation) for p in seq])
        assert memory_trajectory_alignment(rotated, 15.0) == pytest.approx(
            memory_trajectory_alignment(seq, 15.0), abs=1e-9)

    def test_loop_poses_from_all_memory_pairs(self):
        for pair in memory_pairs():
            seq = memory_loop_poses(pair, 0.2, 0.1, 6)
            assert memory_trajectory_alignment(seq, 15.0) == pytest.approx(1.0, abs=1e-9)

    def test_too_short(self):
        with pytest.raises(ValueError):
            memory_trajectory_alignment(straight_line_poses([0, 0, 1], 2), 15.0)


class TestMemoryConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            MemoryConfig(k_val=0.0)
        with pytest.raises(ValueError):
            MemoryConfig(mse_offset=-1.0)
