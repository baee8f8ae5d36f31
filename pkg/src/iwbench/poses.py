"""Camera pose parsing, conversion, rectification and clipping.

A pose is the 3x4 world-to-camera extrinsic block [R|t].  Trajectories arrive
in three redundant text formats (flattened matrices, translation+quaternion,
translation+Euler); all of them parse to the same PoseSequence and can be
serialized back.  Rotations are re-orthonormalized on ingest so noisy
SLAM-style sources stay usable.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

POSE_FORMATS = ("matrix3x4", "matrix4x4", "seven-element", "six-dof")

_ARITY = {"matrix3x4": 12, "matrix4x4": 16, "seven-element": 7, "six-dof": 6}

_GIMBAL_EPS = 1e-9


class PoseParseError(ValueError):
    """Raised for malformed pose files; carries the offending row number."""


@dataclass(frozen=True)
class Pose:
    """A rotation matrix plus translation vector (world-to-camera [R|t])."""

    rotation: np.ndarray     # (3, 3), orthonormal, det +1
    translation: np.ndarray  # (3,)

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        t = np.asarray(self.translation, dtype=float)
        if r.shape != (3, 3) or t.shape != (3,):
            raise ValueError("pose needs a 3x3 rotation and a 3-vector translation")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    def matrix3x4(self) -> np.ndarray:
        return np.hstack([self.rotation, self.translation[:, None]])

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.eye(3), np.zeros(3))


@dataclass(frozen=True)
class PoseSequence:
    """An ordered list of poses; index t runs 1..T in the file formats."""

    poses: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "poses", tuple(self.poses))

    def __len__(self) -> int:
        return len(self.poses)

    def __getitem__(self, i):
        return self.poses[i]

    def __iter__(self):
        return iter(self.poses)

    def translations(self) -> np.ndarray:
        return np.array([p.translation for p in self.poses])


def nearest_rotation(m: np.ndarray) -> np.ndarray:
    """Project a 3x3 matrix onto the closest proper rotation (polar factor)."""
    u, _, vt = np.linalg.svd(np.asarray(m, dtype=float))
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] = -u[:, -1]
        r = u @ vt
    return r


def quat_to_matrix(q) -> np.ndarray:
    """Rotation matrix from a scalar-first quaternion (w, x, y, z)."""
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n < 1e-12:
        raise ValueError("zero quaternion")
    w, x, y, z = q / n
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def matrix_to_quat(r: np.ndarray) -> np.ndarray:
    """Scalar-first quaternion (w, x, y, z) from a rotation matrix.

    Uses the largest-diagonal branch for numerical stability; the returned
    quaternion has w >= 0.
    """
    r = np.asarray(r, dtype=float)
    tr = r[0, 0] + r[1, 1] + r[2, 2]
    if tr > 0:
        s = math.sqrt(tr + 1.0) * 2
        q = np.array([0.25 * s,
                      (r[2, 1] - r[1, 2]) / s,
                      (r[0, 2] - r[2, 0]) / s,
                      (r[1, 0] - r[0, 1]) / s])
    elif r[0, 0] >= r[1, 1] and r[0, 0] >= r[2, 2]:
        s = math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2]) * 2
        q = np.array([(r[2, 1] - r[1, 2]) / s,
                      0.25 * s,
                      (r[0, 1] + r[1, 0]) / s,
                      (r[0, 2] + r[2, 0]) / s])
    elif r[1, 1] >= r[2, 2]:
        s = math.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2]) * 2
        q = np.array([(r[0, 2] - r[2, 0]) / s,
                      (r[0, 1] + r[1, 0]) / s,
                      0.25 * s,
                      (r[1, 2] + r[2, 1]) / s])
    else:
        s = math.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1]) * 2
        q = np.array([(r[1, 0] - r[0, 1]) / s,
                      (r[0, 2] + r[2, 0]) / s,
                      (r[1, 2] + r[2, 1]) / s,
                      0.25 * s])
    if q[0] < 0:
        q = -q
    return q / np.linalg.norm(q)


def _rot_x(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]], dtype=float)


def _rot_y(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]], dtype=float)


def _rot_z(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=float)


def euler_zyx_to_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Rotation from intrinsic ZYX (yaw-pitch-roll) Euler angles, radians."""
    return _rot_z(yaw) @ _rot_y(pitch) @ _rot_x(roll)


def matrix_to_euler_zyx(r: np.ndarray) -> tuple:
    """(roll, pitch, yaw) for the intrinsic ZYX convention.

    At the pitch = +/- pi/2 singularity yaw and roll are not separable; the
    canonical solution folds yaw into roll (yaw = 0) and logs a warning.
    """
    r = np.asarray(r, dtype=float)
    sp = -r[2, 0]
    if sp >= 1.0 - _GIMBAL_EPS:
        logger.warning("gimbal lock (pitch +90 deg): returning canonical yaw=0 solution")
        return math.atan2(r[0, 1], r[1, 1]), math.pi / 2, 0.0
    if sp <= -1.0 + _GIMBAL_EPS:
        logger.warning("gimbal lock (pitch -90 deg): returning canonical yaw=0 solution")
        return math.atan2(-r[0, 1], r[1, 1]), -math.pi / 2, 0.0
    pitch = math.asin(sp)
    yaw = math.atan2(r[1, 0], r[0, 0])
    roll = math.atan2(r[2, 1], r[2, 2])
    return roll, pitch, yaw


def _pose_from_row(fmt: str, vals: np.ndarray) -> Pose:
    if fmt == "matrix3x4":
        m = vals.reshape(3, 4)
        return Pose(nearest_rotation(m[:, :3]), m[:, 3])
    if fmt == "matrix4x4":
        m = vals.reshape(4, 4)
        if np.max(np.abs(m[3] - np.array([0.0, 0.0, 0.0, 1.0]))) > 1e-6:
            raise ValueError(f"bottom row must be 0 0 0 1, got {m[3].tolist()}")
        return Pose(nearest_rotation(m[:3, :3]), m[:3, 3])
    if fmt == "seven-element":
        return Pose(quat_to_matrix(vals[3:7]), vals[:3])
    if fmt == "six-dof":
        roll, pitch, yaw = vals[3], vals[4], vals[5]
        return Pose(euler_zyx_to_matrix(roll, pitch, yaw), vals[:3])
    raise ValueError(f"unknown pose format: {fmt!r}")


def parse_poses(fmt: str, text) -> PoseSequence:
    """Parse a pose file: one pose per line, '#' comment lines ignored.

    Values may be separated by whitespace and/or commas.  Row arity must match
    the format (12 / 16 / 7 / 6 values); rotations are projected onto the
    nearest proper rotation and quaternions normalized.  Malformed rows raise
    PoseParseError naming the 1-based row number.
    """
    if fmt not in POSE_FORMATS:
        raise ValueError(f"unknown pose format: {fmt!r} (expected one of {POSE_FORMATS})")
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    arity = _ARITY[fmt]
    poses = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != arity:
            raise PoseParseError(f"row {lineno}: expected {arity} values for {fmt}, got {len(parts)}")
        try:
            vals = np.array([float(p) for p in parts])
        except ValueError:
            raise PoseParseError(f"row {lineno}: non-numeric value") from None
        if not np.all(np.isfinite(vals)):
            raise PoseParseError(f"row {lineno}: non-finite value")
        try:
            poses.append(_pose_from_row(fmt, vals))
        except ValueError as exc:
            raise PoseParseError(f"row {lineno}: {exc}") from None
    return PoseSequence(poses)


def to_quaternion(pose: Pose) -> np.ndarray:
    """Seven-element form (tx ty tz qw qx qy qz)."""
    return np.concatenate([pose.translation, matrix_to_quat(pose.rotation)])


def to_sixdof(pose: Pose) -> np.ndarray:
    """Six-degree-of-freedom form (tx ty tz roll pitch yaw), radians."""
    roll, pitch, yaw = matrix_to_euler_zyx(pose.rotation)
    return np.concatenate([pose.translation, [roll, pitch, yaw]])


def format_poses(seq: PoseSequence, fmt: str) -> str:
    """Serialize a PoseSequence: one pose per line, space-separated.

    Matrix export is the row-major 3x4 block; matrix4x4 appends the 0 0 0 1
    row; the vector forms use to_quaternion / to_sixdof.
    """
    lines = []
    for p in seq:
        if fmt == "matrix3x4":
            vals = p.matrix3x4().reshape(-1)
        elif fmt == "matrix4x4":
            m = np.eye(4)
            m[:3, :4] = p.matrix3x4()
            vals = m.reshape(-1)
        elif fmt == "seven-element":
            vals = to_quaternion(p)
        elif fmt == "six-dof":
            vals = to_sixdof(p)
        else:
            raise ValueError(f"unknown pose format: {fmt!r}")
        lines.append(" ".join(f"{v:.17g}" for v in vals))
    return "\n".join(lines) + "\n"


def rectify(seq: PoseSequence, axis_signs) -> PoseSequence:
    """Apply a diagonal axis-sign correction to every pose.

    With D = diag(axis_signs), rotations become D R D and translations D t.
    D R D has determinant +1 for any sign pattern, so rotations stay proper;
    an odd number of flips is a mirror correction and is logged.
    """
    d = np.asarray(axis_signs, dtype=float)
    if d.shape != (3,) or not np.all(np.abs(d) == 1.0):
        raise ValueError("axis_signs must be three values of +/-1")
    if d.prod() < 0:
        logger.warning("axis correction %s has determinant -1 (mirror); applying as commanded",
                       tuple(int(s) for s in d))
    dm = np.diag(d)
    return PoseSequence([Pose(dm @ p.rotation @ dm, d * p.translation) for p in seq])


def clip_81(seq: PoseSequence) -> list:
    """Split a trajectory into consecutive non-overlapping 81-pose clips.

    The trailing remainder is discarded; sequences shorter than 81 poses
    produce no clips at all.
    """
    size = 81
    n = len(seq) // size
    return [PoseSequence(seq.poses[i * size:(i + 1) * size]) for i in range(n)]
