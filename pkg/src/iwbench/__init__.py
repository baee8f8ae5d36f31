"""iwbench: metric engine and benchmark harness for interactive world models.

Submodules: frames (frame containers and per-frame features), poses (camera
trajectory parsing and conversion), transforms (shared scalar machinery),
actions (the unified action space), visual / trajectory / memory (the metric
families), filtering (video refinement), harness (tasks, scoring, leaderboard)
and cli (the command-line front-end).
"""

__version__ = "0.1.0"
