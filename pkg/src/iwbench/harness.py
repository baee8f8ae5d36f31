"""Benchmark harness: task generation over the action space, per-run scoring,
leaderboard aggregation and report emission.

A run manifest names a video, optionally a pose trajectory and a task; scoring
composes the metric modules according to the task type.  Reports aggregate
per model into leaderboard rows whose average is the arithmetic mean of the
eight leaderboard metrics.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import actions, memory, trajectory, visual
from .config import BenchConfig
from .filtering import refine
from .frames import FrameSequence, load_video, sharpness_vector, to_grayscale
from .poses import PoseSequence, parse_poses
from .providers import SidecarProvider, default_noise_score, default_quality_score, load_sidecar

TASK_TYPES = ("action_d1", "action_d2", "action_d3", "action_d4",
              "memory", "camera_following")

# leaderboard columns, in emission order, with their report keys
LEADERBOARD_COLUMNS = (
    ("IQ", "image_quality"),
    ("BC", "brightness_consistency"),
    ("CTC", "color_temperature_constraint"),
    ("SR", "sharpness_retention"),
    ("MS", "motion_smoothness"),
    ("TA", "trajectory_accuracy"),
    ("MSym", "memory_symmetry"),
    ("TAl", "trajectory_alignment"),
)
LEADERBOARD_METRICS = tuple(key for _, key in LEADERBOARD_COLUMNS)


@dataclass(frozen=True)
class TaskSpec:
    """One benchmark task; exactly the fields its type requires are set."""

    task_type: str
    seed: int
    source_frame: str
    action: tuple | None = None          # (t_id, r_id) for action_d* tasks
    memory_pair: int | None = None       # pair id for memory tasks
    command_poses: str | None = None     # pose-file reference for camera_following

    def __post_init__(self):
        if self.task_type not in TASK_TYPES:
            raise ValueError(f"unknown task type: {self.task_type!r}")
        need_action = self.task_type.startswith("action_d")
        if need_action != (self.action is not None):
            raise ValueError(f"{self.task_type} requires an action iff it is an action task")
        if (self.task_type == "memory") != (self.memory_pair is not None):
            raise ValueError("memory tasks (and only they) carry a memory_pair id")
        if (self.task_type == "camera_following") != (self.command_poses is not None):
            raise ValueError("camera_following tasks (and only they) carry command_poses")

    def to_dict(self) -> dict:
        out = {"task_type": self.task_type, "seed": self.seed,
               "source_frame": self.source_frame}
        if self.action is not None:
            out["action"] = list(self.action)
        if self.memory_pair is not None:
            out["memory_pair"] = self.memory_pair
        if self.command_poses is not None:
            out["command_poses"] = self.command_poses
        return out

    @staticmethod
    def from_dict(d: dict) -> "TaskSpec":
        action = d.get("action")
        return TaskSpec(task_type=d["task_type"], seed=int(d.get("seed", 0)),
                        source_frame=d.get("source_frame", ""),
                        action=tuple(action) if action is not None else None,
                        memory_pair=d.get("memory_pair"),
                        command_poses=d.get("command_poses"))


@dataclass
class MetricReport:
    """Named scores in [0, 1] for one scored run, plus advisory notes."""

    model: str
    video_id: str
    task_type: str
    scores: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"model": self.model, "video_id": self.video_id,
                "task_type": self.task_type, "scores": dict(self.scores),
                "notes": list(self.notes)}

    @staticmethod
    def from_dict(d: dict) -> "MetricReport":
        return MetricReport(model=d["model"], video_id=d["video_id"],
                            task_type=d["task_type"], scores=dict(d["scores"]),
                            notes=list(d.get("notes", [])))


@dataclass
class LeaderboardRow:
    """Per-model metric means, their arithmetic mean, and the rank."""

    model: str
    means: dict
    avg: float
    rank: int


def _action_candidates(level: int) -> list:
    pairs = actions.difficulty_class(level, valid_only=True)
    if not pairs:
        # the difficulty-4 keyboard class has no valid members; use all of it
        pairs = actions.difficulty_class(level, valid_only=False)
    return pairs


def generate_tasks(task_type: str, count: int, seed: int,
                   exhaustive: bool = False, source_frames=None,
                   pose_files=None) -> list:
    """Deterministically generate ``count`` tasks of one type.

    Action tasks sample uniformly from the valid keyboard-subset actions of
    the requested difficulty (falling back to the whole class when no member
    is valid); memory tasks sample the ten reciprocal pairs.  With
    ``exhaustive`` the candidate list is cycled in order instead of sampled.
    camera_following tasks draw from ``pose_files``.
    """
    if task_type not in TASK_TYPES:
        raise ValueError(f"unknown task type: {task_type!r}")
    if count < 1:
        raise ValueError("count must be >= 1")

    if task_type.startswith("action_d"):
        candidates = _action_candidates(int(task_type[-1]))
    elif task_type == "memory":
        candidates = [p.pair_id for p in actions.memory_pairs()]
    else:
        candidates = list(pose_files or [])
    if not candidates:
        raise ValueError(f"empty candidate class for {task_type}")

    rng = random.Random(seed)
    if exhaustive:
        chosen = [candidates[i % len(candidates)] for i in range(count)]
    else:
        chosen = [candidates[rng.randrange(len(candidates))] for _ in range(count)]

    tasks = []
    for i, pick in enumerate(chosen):
        frame = (source_frames[i % len(source_frames)] if source_frames
                 else f"source_{i:04d}.png")
        if task_type.startswith("action_d"):
            tasks.append(TaskSpec(task_type, seed, frame, action=pick))
        elif task_type == "memory":
            tasks.append(TaskSpec(task_type, seed, frame, memory_pair=pick))
        else:
            tasks.append(TaskSpec(task_type, seed, frame, command_poses=pick))
    return tasks


def _memory_command(pair, cfg: BenchConfig, total: int) -> PoseSequence:
    """Go-and-return command trajectory with ``total`` poses.

    The T-1 steps split into ceil/floor halves (equal when total is odd,
    matching the synthesized 2n+1-frame loop videos).
    """
    from .poses import Pose
    n_fwd = math.ceil((total - 1) / 2)
    poses = [Pose.identity()]
    rot = np.eye(3)
    trans = np.zeros(3)
    for action, steps in ((pair.action1, n_fwd), (pair.action2, total - 1 - n_fwd)):
        delta_t, delta_r = actions._step_increments(
            action.t_id, action.r_id, cfg.step_translation, cfg.step_rotation)
        for _ in range(steps):
            trans = trans + delta_t
            rot = rot @ delta_r
            poses.append(Pose(rot, trans))
    return PoseSequence(poses)


def _command_trajectory(task: TaskSpec, cfg: BenchConfig, total: int,
                        base_dir: Path | None) -> PoseSequence:
    if task.task_type.startswith("action_d"):
        t_id, r_id = task.action
        return actions.to_pose_deltas(t_id, r_id, cfg.step_translation,
                                      cfg.step_rotation, total)
    if task.task_type == "memory":
        pair = {p.pair_id: p for p in actions.memory_pairs()}[task.memory_pair]
        return _memory_command(pair, cfg, total)
    raise ValueError(f"no synthetic command for task type {task.task_type}")


def score_run(frames: FrameSequence, poses: PoseSequence | None, task: TaskSpec,
              cfg: BenchConfig, noise_provider=None, quality_provider=None,
              reconstructor=None, perceptual=None, sidecar: dict | None = None,
              command: PoseSequence | None = None, gt: PoseSequence | None = None,
              model: str = "unknown", video_id: str = "run") -> MetricReport:
    """Score one generated video against its task.

    Action tasks report the four visual metrics, motion smoothness and
    trajectory accuracy; memory tasks add memory symmetry and trajectory
    alignment; camera_following replaces accuracy with tolerance against the
    supplied ground-truth trajectory.  Missing poses downgrade the trajectory
    metrics to a note instead of failing the run.
    """
    noise_provider = noise_provider or default_noise_score
    quality_provider = quality_provider or default_quality_score
    reconstructor = reconstructor or trajectory.blend_reconstructor
    report = MetricReport(model=model, video_id=video_id, task_type=task.task_type)
    scores = report.scores
    t_total = len(frames)

    if sidecar:
        quality = [SidecarProvider(sidecar, "quality").score_at(i) for i in range(t_total)]
        noise = [SidecarProvider(sidecar, "noise").score_at(i) for i in range(t_total)]
    else:
        quality = [float(quality_provider(f)) for f in frames.frames]
        noise = [float(noise_provider(f)) for f in frames.frames]

    vcfg = cfg.visual
    scores["image_quality"] = visual.image_quality(quality, vcfg.quality_min, vcfg.quality_max)
    scores["brightness_consistency"] = visual.brightness_consistency(frames, vcfg)
    scores["color_temperature_constraint"] = visual.color_temperature(frames, vcfg)
    grads = [sharpness_vector(to_grayscale(f)) for f in frames.frames]
    scores["sharpness_retention"] = visual.sharpness_score(grads, noise, vcfg)
    if t_total >= 3:
        scores["motion_smoothness"] = trajectory.motion_smoothness(
            frames, reconstructor, cfg.smoothness, perceptual)
    else:
        report.notes.append("motion_smoothness skipped: fewer than 3 frames")

    if task.task_type == "memory":
        mcfg = cfg.memory
        if mcfg.weight_mode == "both":
            for mode, key in (("prose", "memory_symmetry"),
                              ("formula", "memory_symmetry_formula")):
                variant = type(mcfg)(mcfg.mse_offset, mcfg.k_val, mcfg.k_exp,
                                     mcfg.gamma, mode)
                scores[key] = memory.memory_symmetry(frames, variant)
        else:
            scores["memory_symmetry"] = memory.memory_symmetry(frames, mcfg)

    if poses is None or len(poses) < 2:
        report.notes.append("trajectory metrics skipped: no pose trajectory supplied")
        return report

    if task.task_type == "camera_following":
        if gt is None:
            report.notes.append("trajectory_tolerance skipped: no ground-truth trajectory")
        else:
            sync = trajectory.align_to_reference(poses, gt)
            scores["trajectory_tolerance"] = trajectory.trajectory_tolerance(
                sync, gt, cfg.k, cfg.signed_cosine)
    else:
        if command is None:
            command = _command_trajectory(task, cfg, len(poses), None)
        sync = trajectory.align_to_reference(poses, command)
        scores["trajectory_accuracy"] = trajectory.trajectory_accuracy(
            sync, command, cfg.k, cfg.signed_cosine)
        if not np.abs(trajectory.tangent_series(command)).max() > 1e-12:
            report.notes.append("zero-motion command: accuracy follows the zero-vector cosine rule")
        elif not np.abs(trajectory.tangent_series(poses)).max() > 1e-12:
            report.notes.append("zero-motion generated trajectory: accuracy follows the zero-vector cosine rule")

    if task.task_type == "memory" and len(poses) >= 3:
        scores["trajectory_alignment"] = memory.memory_trajectory_alignment(poses, cfg.k)
    return report


def aggregate(reports_by_model: dict) -> list:
    """Collapse per-run reports into ranked leaderboard rows.

    Every model must contribute at least one score for each leaderboard
    metric; the row average is the arithmetic mean of the eight metric means,
    ranked descending with lexicographic tie-breaking on the model name.
    """
    if not reports_by_model:
        raise ValueError("no reports to aggregate")
    rows = []
    for model, reports in reports_by_model.items():
        if not reports:
            raise ValueError(f"model {model!r} has no reports")
        means = {}
        for key in LEADERBOARD_METRICS:
            vals = [r.scores[key] for r in reports if key in r.scores]
            if not vals:
                raise ValueError(f"model {model!r} has no {key!r} scores")
            means[key] = float(np.mean(vals))
        avg = float(np.mean([means[k] for k in LEADERBOARD_METRICS]))
        rows.append(LeaderboardRow(model=model, means=means, avg=avg, rank=0))
    rows.sort(key=lambda r: (-r.avg, r.model))
    for i, row in enumerate(rows, start=1):
        row.rank = i
    return rows


# ---------------------------------------------------------------------------
# report emission


def _canonical_json(value, indent: int = 0) -> str:
    pad = "    " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}    {json.dumps(str(k))}: {_canonical_json(v, indent + 1)}'
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}    {_canonical_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return json.dumps(value)
    if isinstance(value, float):
        return f"{value:.4f}"
    raise TypeError(f"cannot serialize {type(value)}")


def emit_report(rows: list, fmt: str) -> bytes:
    """Render leaderboard rows as canonical JSON or CSV bytes.

    JSON uses a fixed key order and 4-decimal floats; CSV mirrors the
    leaderboard table columns (Model, the eight metrics, Avg).
    """
    if not rows:
        raise ValueError("no rows to emit")
    if fmt == "json":
        payload = []
        for row in rows:
            entry = {"model": row.model, "rank": row.rank}
            for col, key in LEADERBOARD_COLUMNS:
                entry[col] = row.means[key]
            entry["Avg"] = row.avg
            payload.append(entry)
        return (_canonical_json(payload) + "\n").encode("utf-8")
    if fmt == "csv":
        header = "Model," + ",".join(col for col, _ in LEADERBOARD_COLUMNS) + ",Avg"
        lines = [header]
        for row in rows:
            cells = [row.model]
            cells += [f"{row.means[key]:.4f}" for _, key in LEADERBOARD_COLUMNS]
            cells.append(f"{row.avg:.4f}")
            lines.append(",".join(cells))
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format: {fmt!r}")


# ---------------------------------------------------------------------------
# manifest plumbing (shared by the CLI and the batch scorer)


def _resolve(base: Path, ref) -> Path:
    p = Path(ref)
    return p if p.is_absolute() else base / p


def score_manifest_entry(entry: dict, base_dir, cfg: BenchConfig,
                         default_pose_format: str | None = None) -> MetricReport:
    """Score one run described by a manifest entry (paths resolved against
    the manifest's directory).

    The pose format comes from the manifest entry; ``default_pose_format``
    (the --pose-format CLI flag) covers entries that omit it.
    """
    base = Path(base_dir)
    fps = float(entry.get("fps", 24.0))
    frames = load_video(_resolve(base, entry["video"]), fps)
    task = TaskSpec.from_dict(entry["task"])
    fmt = entry.get("pose_format") or default_pose_format or "matrix3x4"

    poses = None
    if entry.get("pose_file"):
        poses = parse_poses(fmt, _resolve(base, entry["pose_file"]).read_text())

    command = gt = None
    if task.task_type == "camera_following":
        ref = entry["task"].get("command_poses") or entry.get("command_poses")
        if ref:
            cmd_fmt = entry.get("command_pose_format", fmt)
            gt = parse_poses(cmd_fmt, _resolve(base, ref).read_text())
    elif entry.get("command_kind", "action") == "poses":
        ref = entry.get("command_poses")
        if ref is None:
            raise ValueError("command_kind is 'poses' but no command_poses given")
        cmd_fmt = entry.get("command_pose_format", fmt)
        command = parse_poses(cmd_fmt, _resolve(base, ref).read_text())

    sidecar = None
    if entry.get("sidecar_scores"):
        sidecar = load_sidecar(_resolve(base, entry["sidecar_scores"]))

    reconstructor = None
    if entry.get("reconstructions"):
        reconstructor = trajectory.DirectoryReconstructor(
            _resolve(base, entry["reconstructions"]), fps)

    video_id = entry.get("video_id") or Path(entry["video"]).stem
    return score_run(frames, poses, task, cfg, reconstructor=reconstructor,
                     sidecar=sidecar, command=command, gt=gt,
                     model=entry.get("model", "unknown"), video_id=video_id)


def run_report_json(reports: list) -> bytes:
    """Deterministic JSON for a list of per-run reports (sorted keys)."""
    payload = [r.to_dict() for r in reports]
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")


def refine_manifest(video_path, fps: float, cfg: BenchConfig) -> dict:
    """Run the refinement pipeline on a video and describe it as a manifest."""
    seq = load_video(video_path, fps)
    from .filtering import detect_anomalies, frame_series
    light, mse = frame_series(seq)
    flagged = sorted(detect_anomalies(light, mse, cfg.filter))
    segments = refine(seq, cfg.filter)
    return {
        "video_id": Path(video_path).stem,
        "segments": [{"start": s.start, "end": s.end} for s in segments],
        "flags": flagged,
        "config": {
            "brightness_k_sigma": cfg.filter.brightness_k_sigma,
            "brightness_floor": cfg.filter.brightness_floor,
            "mse_z_threshold": cfg.filter.mse_z_threshold,
            "mse_window": cfg.filter.mse_window,
            "density_window": cfg.filter.density_window,
            "density_tau": cfg.filter.density_tau,
            "merge_gap": cfg.filter.merge_gap,
            "min_len": cfg.filter.min_len,
        },
    }
