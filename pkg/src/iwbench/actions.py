"""The unified action space: quadruple encoding, difficulty algebra, validity
tables, keyboard/mouse/text mappings, reciprocal memory pairs, and expansion of
action ids into constant-velocity camera trajectories.

Identifiers: translation ids and rotation ids each run 0..26; the 9x9 block of
ids 0..8 is the keyboard-operable subset with full key/mouse/text encodings.
Difficulty is the number of moving axes summed over both modalities, with
complete stillness assigned difficulty 1.

Camera-frame conventions for trajectory expansion: x = right, y = up,
z = forward; tilting the view up is positive pitch, panning right is positive
yaw (about the up axis), clockwise roll is positive roll.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _tables
from .poses import Pose, PoseSequence, _rot_x, _rot_y, _rot_z

N_IDS = 27

_TRANS_AXES = {
    "Forward": np.array([0.0, 0.0, 1.0]),
    "Backward": np.array([0.0, 0.0, -1.0]),
    "Left": np.array([-1.0, 0.0, 0.0]),
    "Right": np.array([1.0, 0.0, 0.0]),
    "Upward": np.array([0.0, 1.0, 0.0]),
    "Downward": np.array([0.0, -1.0, 0.0]),
}

# rotation direction component -> (channel, sign); channels are pitch/yaw/roll
_ROT_AXES = {
    "Camera Up": ("pitch", 1.0), "Up": ("pitch", 1.0),
    "Camera Down": ("pitch", -1.0), "Down": ("pitch", -1.0),
    "Camera Right": ("yaw", 1.0), "Right": ("yaw", 1.0),
    "Camera Left": ("yaw", -1.0), "Left": ("yaw", -1.0),
    "Clockwise": ("roll", 1.0),
    "Counterclockwise": ("roll", -1.0),
}

_KEY_BITS = {"Forward": 0, "Backward": 1, "Left": 2, "Right": 3}


@dataclass(frozen=True)
class ActionQuadruple:
    """One motion primitive: difficulty, translation id, rotation id, validity."""

    difficulty: int
    t_id: int
    r_id: int
    valid: int


@dataclass(frozen=True)
class ControlSignal:
    """An action rendered into keyboard one-hot, mouse delta and text forms.

    keyboard is the (W, S, A, D) one-hot tuple; mouse is (pitch, yaw) for the
    keyboard subset, extended to (pitch, yaw, roll) for roll-bearing extended
    actions; keys is the human-readable key string ("-" when unbound).
    """

    keyboard: tuple
    mouse: tuple
    text: str
    keys: str

    def __post_init__(self):
        kb = self.keyboard
        if len(kb) != 4 or any(b not in (0, 1) for b in kb):
            raise ValueError("keyboard must be four 0/1 bits")
        if (kb[0] and kb[1]) or (kb[2] and kb[3]):
            raise ValueError("opposed keys cannot both be pressed")
        if any(m not in (-1.0, 0.0, 1.0) for m in self.mouse):
            raise ValueError("mouse components must be -1, 0 or +1")


@dataclass(frozen=True)
class MemoryAction:
    """One half of a reciprocal pair, with its verbatim control encoding."""

    t_id: int
    r_id: int
    direction: str
    keys: str
    keyboard: tuple
    mouse: tuple


@dataclass(frozen=True)
class MemoryPair:
    """A motion and its exact inverse, used to build go-and-return tasks."""

    pair_id: int
    action1: MemoryAction
    action2: MemoryAction
    text: str


def _check_id(i: int, what: str) -> int:
    if not 0 <= i < N_IDS:
        raise ValueError(f"{what} id out of range [0, {N_IDS - 1}]: {i}")
    return i


def _components(name: str) -> list:
    return [] if name == "Stationary" else name.split("+")


def axis_count_translation(t_id: int) -> int:
    """Number of moving axes named by the translation direction (0..3)."""
    _check_id(t_id, "translation")
    return len(_components(_tables.TRANSLATION_DIRECTIONS[t_id][0]))


def axis_count_rotation(r_id: int) -> int:
    """Number of rotating axes named by the rotation direction (0..3)."""
    _check_id(r_id, "rotation")
    return len(_components(_tables.ROTATION_DIRECTIONS[r_id][0]))


def difficulty(t_id: int, r_id: int) -> int:
    """Summed axis counts of both modalities; complete stillness counts as 1."""
    total = axis_count_translation(t_id) + axis_count_rotation(r_id)
    return max(1, total)


_FULL_BY_PAIR = {(t, r): (d, v) for d, t, r, v in _tables.FULL_TABLE_ROWS}
_KEYBOARD_BY_PAIR = {(row[1], row[2]): row for row in _tables.KEYBOARD_TABLE_ROWS}


def full_table() -> list:
    """All 729 motion primitives, ordered by (t_id, r_id).

    Difficulty comes from the axis-sum rule; validity from the embedded
    enumeration data (1 = common action, 0 = complex/rare).
    """
    out = []
    for t in range(N_IDS):
        for r in range(N_IDS):
            d, v = _FULL_BY_PAIR[(t, r)]
            out.append(ActionQuadruple(d, t, r, v))
    return out


def embedded_difficulty(t_id: int, r_id: int) -> int:
    """The difficulty recorded in the embedded enumeration data (for cross-checks)."""
    return _FULL_BY_PAIR[(_check_id(t_id, "translation"), _check_id(r_id, "rotation"))][0]


def _compose_extended(t_id: int, r_id: int) -> ControlSignal:
    t_name = _tables.TRANSLATION_DIRECTIONS[t_id][0]
    r_name = _tables.ROTATION_DIRECTIONS[r_id][0]
    kb = [0, 0, 0, 0]
    for comp in _components(t_name):
        bit = _KEY_BITS.get(comp)
        if bit is not None:
            kb[bit] = 1
    channels = {"pitch": 0.0, "yaw": 0.0, "roll": 0.0}
    for comp in _components(r_name):
        ch, sign = _ROT_AXES[comp]
        channels[ch] = sign
    mouse = (channels["pitch"], channels["yaw"])
    if channels["roll"] != 0.0:
        mouse = mouse + (channels["roll"],)
    text = f"(extended) Translation direction: {t_name}. Rotation direction: {r_name}."
    return ControlSignal(tuple(kb), mouse, text, "-")


def control_signal(t_id: int, r_id: int) -> ControlSignal:
    """Keyboard/mouse/text encoding of an action.

    Pairs inside the keyboard subset reproduce the embedded table exactly;
    others are composed from the direction definitions and flagged extended.
    """
    _check_id(t_id, "translation")
    _check_id(r_id, "rotation")
    row = _KEYBOARD_BY_PAIR.get((t_id, r_id))
    if row is not None:
        _, _, _, keys, _, kb, mouse, text = row
        return ControlSignal(kb, mouse, text, keys)
    return _compose_extended(t_id, r_id)


def keyboard_subset() -> list:
    """The 81 keyboard-operable actions as (ActionQuadruple, ControlSignal) pairs.

    Validity here follows the keyboard table, which disagrees with the full
    enumeration on some pairs (see export metadata); ordered by (t_id, r_id).
    """
    out = []
    for (t, r), row in sorted(_KEYBOARD_BY_PAIR.items()):
        d, _, _, keys, valid, kb, mouse, text = row
        out.append((ActionQuadruple(d, t, r, valid),
                    ControlSignal(kb, mouse, text, keys)))
    return out


def describe(t_id: int, r_id: int) -> str:
    """Deterministic text description of an action.

    Keyboard-subset pairs return the embedded description verbatim; extended
    pairs get a composed description flagged "(extended)".
    """
    return control_signal(t_id, r_id).text


def memory_pairs() -> list:
    """The ten reciprocal action pairs for cyclic memory tasks."""
    out = []
    for pid, a1, a2, text in _tables.MEMORY_TABLE_ROWS:
        out.append(MemoryPair(pid, MemoryAction(*a1), MemoryAction(*a2), text))
    return out


def _step_increments(t_id: int, r_id: int, step_translation: float,
                     step_rotation: float):
    """Per-frame world translation delta and body-frame rotation increment."""
    t_name = _tables.TRANSLATION_DIRECTIONS[t_id][0]
    r_name = _tables.ROTATION_DIRECTIONS[r_id][0]
    direction = np.zeros(3)
    for comp in _components(t_name):
        direction = direction + _TRANS_AXES[comp]
    norm = np.linalg.norm(direction)
    delta_t = step_translation * direction / norm if norm > 0 else np.zeros(3)

    channels = {"pitch": 0.0, "yaw": 0.0, "roll": 0.0}
    for comp in _components(r_name):
        ch, sign = _ROT_AXES[comp]
        channels[ch] = sign
    # pitch up = view toward +y, yaw right = view toward +x, roll clockwise
    delta_r = (_rot_x(-channels["pitch"] * step_rotation)
               @ _rot_y(channels["yaw"] * step_rotation)
               @ _rot_z(-channels["roll"] * step_rotation))
    return delta_t, delta_r


def to_pose_deltas(t_id: int, r_id: int, step_translation: float,
                   step_rotation: float, frames: int) -> PoseSequence:
    """Expand an action into a constant-velocity pose trajectory.

    The first pose is the identity; every later frame adds step_translation
    along the action's unit direction and composes an incremental body-frame
    rotation of step_rotation about each named rotation axis (pitch, then
    yaw, then roll).
    """
    _check_id(t_id, "translation")
    _check_id(r_id, "rotation")
    if frames < 2:
        raise ValueError("frames must be >= 2")
    if step_translation <= 0 or step_rotation <= 0:
        raise ValueError("step sizes must be positive")
    delta_t, delta_r = _step_increments(t_id, r_id, step_translation, step_rotation)
    poses = [Pose.identity()]
    rot = np.eye(3)
    trans = np.zeros(3)
    for _ in range(frames - 1):
        trans = trans + delta_t
        rot = rot @ delta_r
        poses.append(Pose(rot, trans))
    return PoseSequence(poses)


def memory_loop_poses(pair: MemoryPair, step_translation: float,
                      step_rotation: float, half_frames: int) -> PoseSequence:
    """Materialize a go-and-return command: n steps of action1, n of action2.

    Returns 2 * half_frames + 1 poses starting and (by construction) ending at
    the identity, since action2 is the exact inverse of action1.
    """
    if half_frames < 1:
        raise ValueError("half_frames must be >= 1")
    poses = [Pose.identity()]
    rot = np.eye(3)
    trans = np.zeros(3)
    for action in (pair.action1, pair.action2):
        delta_t, delta_r = _step_increments(action.t_id, action.r_id,
                                            step_translation, step_rotation)
        for _ in range(half_frames):
            trans = trans + delta_t
            rot = rot @ delta_r
            poses.append(Pose(rot, trans))
    return PoseSequence(poses)


# ---------------------------------------------------------------------------
# export


def _quad_dict(quad: ActionQuadruple, sig: ControlSignal) -> dict:
    return {
        "difficulty": quad.difficulty,
        "t_id": quad.t_id,
        "r_id": quad.r_id,
        "valid": quad.valid,
        "keyboard": list(sig.keyboard),
        "mouse": list(sig.mouse),
        "keys": sig.keys,
        "text": sig.text,
    }


def _export_metadata() -> dict:
    conflicts = []
    for (t, r), row in sorted(_KEYBOARD_BY_PAIR.items()):
        full_v = _FULL_BY_PAIR[(t, r)][1]
        if full_v != row[4]:
            conflicts.append({"t_id": t, "r_id": r,
                              "full_table_valid": full_v,
                              "keyboard_table_valid": row[4]})
    dup_rot = {}
    for rid, (name, _) in _tables.ROTATION_DIRECTIONS.items():
        dup_rot.setdefault(name, []).append(rid)
    duplicates = [{"direction": name, "r_ids": ids}
                  for name, ids in sorted(dup_rot.items()) if len(ids) > 1]
    return {
        "validity_conflicts": conflicts,
        "duplicate_rotation_directions": duplicates,
        "suspected_errata": [
            "memory pairs 9 and 10 are labeled Upward/Downward translations "
            "but carry the same mouse encodings as the tilt pairs 5 and 6; "
            "stored verbatim",
        ],
    }


def export_actions(table: str = "keyboard") -> dict:
    """JSON-ready export of an action table ("keyboard", "full" or "memory")."""
    if table == "keyboard":
        entries = [_quad_dict(q, s) for q, s in keyboard_subset()]
    elif table == "full":
        entries = [_quad_dict(q, control_signal(q.t_id, q.r_id)) for q in full_table()]
    elif table == "memory":
        entries = []
        for p in memory_pairs():
            entries.append({
                "id": p.pair_id,
                "action1": {"t_id": p.action1.t_id, "r_id": p.action1.r_id,
                            "direction": p.action1.direction, "keys": p.action1.keys,
                            "keyboard": list(p.action1.keyboard),
                            "mouse": list(p.action1.mouse)},
                "action2": {"t_id": p.action2.t_id, "r_id": p.action2.r_id,
                            "direction": p.action2.direction, "keys": p.action2.keys,
                            "keyboard": list(p.action2.keyboard),
                            "mouse": list(p.action2.mouse)},
                "text": p.text,
            })
    else:
        raise ValueError(f"unknown table: {table!r}")
    return {"table": table, "entries": entries, "metadata": _export_metadata()}


def difficulty_class(d: int, valid_only: bool = True) -> list:
    """Keyboard-subset (t_id, r_id) pairs of a given difficulty.

    By default only valid actions are returned.  The difficulty-4 class has no
    valid members in the keyboard table, so callers wanting a usable class
    should fall back to valid_only=False (the task generator does).
    """
    pairs = []
    for (t, r), row in sorted(_KEYBOARD_BY_PAIR.items()):
        if row[0] == d and (row[4] == 1 or not valid_only):
            pairs.append((t, r))
    return pairs
