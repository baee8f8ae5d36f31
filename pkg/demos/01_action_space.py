"""
Exploring the unified action space
==================================

Every camera motion is a pair of ids: a translation id and a rotation id,
each in 0..26.  Difficulty counts the moving axes (complete stillness counts
as 1), and the 9x9 block of ids 0..8 carries keyboard/mouse encodings.
"""
import json

from iwbench.actions import (
    describe,
    difficulty,
    export_actions,
    full_table,
    keyboard_subset,
    memory_pairs,
)

# The complete enumeration: 27 x 27 = 729 motion primitives.
table = full_table()
print(f"full table: {len(table)} actions")
per_difficulty = {}
for quad in table:
    per_difficulty[quad.difficulty] = per_difficulty.get(quad.difficulty, 0) + 1
print("actions per difficulty:", dict(sorted(per_difficulty.items())))

# The keyboard-operable subset: 81 actions with key bindings and text.
subset = keyboard_subset()
print(f"\nkeyboard subset: {len(subset)} actions, difficulty 1..4")
for quad, signal in subset[:3]:
    print(f"  T={quad.t_id} R={quad.r_id} D={quad.difficulty} "
          f"keys={signal.keys!r} keyboard={signal.keyboard} mouse={signal.mouse}")

# Text control signals, verbatim for bound actions, composed beyond them.
print("\ndescriptions:")
print(" ", describe(1, 3))    # forward while panning right
print(" ", describe(11, 0))   # an unbound extended action

# Difficulty algebra: axis counts summed across both modalities.
print("\ndifficulty(5, 8) =", difficulty(5, 8), "(two translation + two rotation axes)")

# Reciprocal pairs drive go-and-return memory tasks.
print("\nmemory pairs:")
for pair in memory_pairs()[:4]:
    print(f"  {pair.pair_id}: {pair.action1.direction} then {pair.action2.direction}")

# The JSON export carries the data plus bookkeeping about table disagreements.
payload = export_actions("keyboard")
print("\nexport metadata keys:", sorted(payload["metadata"]))
print("validity conflicts (first):",
      json.dumps(payload["metadata"]["validity_conflicts"][0]))
