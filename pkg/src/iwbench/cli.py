"""Command-line front-end.

Subcommands: ``tasks generate``, ``score``, ``refine``, ``aggregate`` and
``actions export``.  Exit codes: 0 on success, 1 on scoring failure, 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import sys
from pathlib import Path

from . import actions as action_space
from . import harness
from .config import load_config
from .frames import FrameSequence, load_video, write_packed_raw

logger = logging.getLogger(__name__)


def _write(out, data: bytes) -> None:
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)


def _load_cfg(args):
    return load_config(getattr(args, "config", None))


def _cmd_tasks_generate(args) -> int:
    tasks = harness.generate_tasks(args.type, args.count, args.seed,
                                   exhaustive=args.exhaustive,
                                   source_frames=args.source_frames or None,
                                   pose_files=args.pose_files or None)
    payload = [t.to_dict() for t in tasks]
    _write(args.out, (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode())
    return 0


def _score_entry_worker(entry: dict, base_dir: str, config_path, pose_format):
    cfg = load_config(config_path)
    return harness.score_manifest_entry(entry, base_dir, cfg,
                                        default_pose_format=pose_format).to_dict()


def _cmd_score(args) -> int:
    manifest_path = Path(args.manifest)
    payload = json.loads(manifest_path.read_text())
    entries = payload if isinstance(payload, list) else [payload]
    base_dir = str(manifest_path.parent)

    try:
        if args.jobs <= 1:
            cfg = _load_cfg(args)
            dicts = [harness.score_manifest_entry(
                e, base_dir, cfg, default_pose_format=args.pose_format).to_dict()
                for e in entries]
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
                futures = [pool.submit(_score_entry_worker, e, base_dir,
                                       args.config, args.pose_format)
                           for e in entries]
                dicts = [f.result() for f in futures]
    except Exception as exc:
        logger.error("scoring failed: %s", exc)
        return 1

    reports = [harness.MetricReport.from_dict(d) for d in dicts]
    _write(args.out, harness.run_report_json(reports))
    return 0


def _cmd_refine(args) -> int:
    cfg = _load_cfg(args)
    try:
        manifest = harness.refine_manifest(args.video, args.fps, cfg)
    except Exception as exc:
        logger.error("refinement failed: %s", exc)
        return 1
    _write(args.out, (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode())
    if args.emit_clips:
        seq = load_video(args.video, args.fps)
        clip_dir = Path(args.emit_clips)
        clip_dir.mkdir(parents=True, exist_ok=True)
        for i, seg in enumerate(manifest["segments"]):
            clip = FrameSequence(seq.frames[seg["start"] - 1:seg["end"]], seq.fps)
            write_packed_raw(clip_dir / f"{manifest['video_id']}_seg{i:03d}.iwfr", clip)
    return 0


def _cmd_aggregate(args) -> int:
    by_model: dict = {}
    for path in args.reports:
        payload = json.loads(Path(path).read_text())
        items = payload if isinstance(payload, list) else [payload]
        for d in items:
            report = harness.MetricReport.from_dict(d)
            by_model.setdefault(report.model, []).append(report)
    try:
        rows = harness.aggregate(by_model)
        data = harness.emit_report(rows, args.format)
    except ValueError as exc:
        logger.error("aggregation failed: %s", exc)
        return 1
    _write(args.out, data)
    return 0


def _cmd_actions_export(args) -> int:
    payload = action_space.export_actions(args.table)
    _write(args.out, (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iwbench",
                                     description="Interactive world-model benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_tasks = sub.add_parser("tasks", help="task generation")
    tasks_sub = p_tasks.add_subparsers(dest="tasks_command", required=True)
    p_gen = tasks_sub.add_parser("generate", help="generate benchmark tasks")
    p_gen.add_argument("--type", required=True, choices=harness.TASK_TYPES)
    p_gen.add_argument("--count", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--exhaustive", action="store_true",
                       help="cycle the candidate list in order instead of sampling")
    p_gen.add_argument("--source-frames", nargs="*", default=None)
    p_gen.add_argument("--pose-files", nargs="*", default=None,
                       help="pose-file references for camera_following tasks")
    p_gen.add_argument("-o", "--out", default=None)
    p_gen.set_defaults(func=_cmd_tasks_generate)

    p_score = sub.add_parser("score", help="score generated runs against their tasks")
    p_score.add_argument("--manifest", required=True,
                         help="run manifest (JSON object or array)")
    p_score.add_argument("--config", default=None)
    p_score.add_argument("--pose-format", default=None, dest="pose_format",
                         choices=["matrix3x4", "matrix4x4", "seven-element", "six-dof"],
                         help="pose format for manifest entries that omit one")
    p_score.add_argument("--jobs", type=int, default=1)
    p_score.add_argument("-o", "--out", default=None)
    p_score.set_defaults(func=_cmd_score)

    p_refine = sub.add_parser("refine", help="run the video refinement pipeline")
    p_refine.add_argument("--video", required=True)
    p_refine.add_argument("--fps", type=float, default=24.0)
    p_refine.add_argument("--config", default=None)
    p_refine.add_argument("--emit-clips", default=None,
                          help="directory for packed-raw clips, one per segment")
    p_refine.add_argument("-o", "--out", default=None)
    p_refine.set_defaults(func=_cmd_refine)

    p_agg = sub.add_parser("aggregate", help="aggregate reports into a leaderboard")
    p_agg.add_argument("--reports", nargs="+", required=True)
    p_agg.add_argument("--format", required=True, choices=["json", "csv"])
    p_agg.add_argument("-o", "--out", default=None)
    p_agg.set_defaults(func=_cmd_aggregate)

    p_actions = sub.add_parser("actions", help="action-space utilities")
    actions_sub = p_actions.add_subparsers(dest="actions_command", required=True)
    p_export = actions_sub.add_parser("export", help="export action tables")
    p_export.add_argument("--format", required=True, choices=["json"])
    p_export.add_argument("--table", default="keyboard",
                          choices=["keyboard", "full", "memory"])
    p_export.add_argument("-o", "--out", default=None)
    p_export.set_defaults(func=_cmd_actions_export)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
