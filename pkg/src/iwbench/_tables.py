"""Embedded action-space data: direction definitions for both motion modalities,
the full 27x27 motion enumeration, the 81-action keyboard/mouse subset, and the
ten reciprocal action pairs used by memory tasks.

Row formats:
    TRANSLATION_DIRECTIONS / ROTATION_DIRECTIONS: id -> (direction, keys)
    FULL_TABLE_ROWS:     (difficulty, t_id, r_id, valid)
    KEYBOARD_TABLE_ROWS: (difficulty, t_id, r_id, keys, valid, keyboard, mouse, text)
    MEMORY_TABLE_ROWS:   (pair_id, action1, action2, text) with each action a
                         (t_id, r_id, direction, keys, keyboard, mouse) tuple
"""

TRANSLATION_DIRECTIONS = {
    0: ('Stationary', '-'),
    1: ('Forward', 'W'),
    2: ('Backward', 'S'),
    3: ('Left', 'A'),
    4: ('Right', 'D'),
    5: ('Forward+Left', 'W+A'),
    6: ('Forward+Right', 'W+D'),
    7: ('Backward+Left', 'S+A'),
    8: ('Backward+Right', 'S+D'),
    9: ('Upward', '-'),
    10: ('Downward', '-'),
    11: ('Forward+Upward', '-'),
    12: ('Forward+Downward', '-'),
    13: ('Backward+Upward', '-'),
    14: ('Backward+Downward', '-'),
    15: ('Left+Upward', '-'),
    16: ('Left+Downward', '-'),
    17: ('Right+Upward', '-'),
    18: ('Right+Downward', '-'),
    19: ('Forward+Left+Upward', '-'),
    20: ('Forward+Right+Upward', '-'),
    21: ('Forward+Left+Downward', '-'),
    22: ('Forward+Right+Downward', '-'),
    23: ('Backward+Left+Upward', '-'),
    24: ('Backward+Right+Upward', '-'),
    25: ('Backward+Left+Downward', '-'),
    26: ('Backward+Right+Downward', '-'),
}

# Rotation ids 23/25 and 24/26 carry identical direction labels in the source
# data; kept verbatim and reported in export metadata.
ROTATION_DIRECTIONS = {
    0: ('Stationary', '-'),
    1: ('Camera Up', '↑'),
    2: ('Camera Down', '↓'),
    3: ('Camera Right', '→'),
    4: ('Camera Left', '←'),
    5: ('Camera Up+Right', '↑+→'),
    6: ('Camera Up+Left', '↑+←'),
    7: ('Camera Down+Right', '↓+→'),
    8: ('Camera Down+Left', '↓+←'),
    9: ('Clockwise', '-'),
    10: ('Counterclockwise', '-'),
    11: ('Camera Up+Clockwise', '-'),
    12: ('Camera Up+Counterclockwise', '-'),
    13: ('Camera Down+Clockwise', '-'),
    14: ('Camera Down+Counterclockwise', '-'),
    15: ('Camera Left+Clockwise', '-'),
    16: ('Camera Left+Counterclockwise', '-'),
    17: ('Camera Right+Clockwise', '-'),
    18: ('Camera Right+Counterclockwise', '-'),
    19: ('Camera Up+Right+Clockwise', '-'),
    20: ('Camera Up+Right+Counterclockwise', '-'),
    21: ('Camera Up+Left+Clockwise', '-'),
    22: ('Camera Up+Left+Counterclockwise', '-'),
    23: ('Camera Down+Right+Clockwise', '-'),
    24: ('Camera Down+Left+Counterclockwise', '-'),
    25: ('Camera Down+Right+Clockwise', '-'),
    26: ('Camera Down+Left+Counterclockwise', '-'),
}

FULL_TABLE_ROWS = (
    (1, 0, 0, 0), (1, 0, 1, 0), (1, 0, 2, 0), (1, 0, 3, 0), (1, 0, 4, 0), (2, 0, 5, 0),
    (2, 0, 6, 0), (2, 0, 7, 0), (2, 0, 8, 0), (1, 0, 9, 0), (1, 0, 10, 0), (2, 0, 11, 0),
    (2, 0, 12, 0), (2, 0, 13, 0), (2, 0, 14, 0), (2, 0, 15, 0), (2, 0, 16, 0), (2, 0, 17, 0),
    (2, 0, 18, 0), (3, 0, 19, 0), (3, 0, 20, 0), (3, 0, 21, 0), (3, 0, 22, 0), (3, 0, 23, 0),
    (3, 0, 24, 0), (3, 0, 25, 0), (3, 0, 26, 0), (1, 1, 0, 0), (2, 1, 1, 0), (2, 1, 2, 0),
    (2, 1, 3, 0), (2, 1, 4, 0), (3, 1, 5, 0), (3, 1, 6, 0), (3, 1, 7, 1), (3, 1, 8, 1),
    (2, 1, 9, 0), (2, 1, 10, 0), (3, 1, 11, 1), (3, 1, 12, 1), (3, 1, 13, 1), (3, 1, 14, 1),
    (3, 1, 15, 1), (3, 1, 16, 1), (3, 1, 17, 1), (3, 1, 18, 1), (4, 1, 19, 1), (4, 1, 20, 1),
    (4, 1, 21, 1), (4, 1, 22, 1), (4, 1, 23, 1), (4, 1, 24, 1), (4, 1, 25, 1), (4, 1, 26, 1),
    (1, 2, 0, 0), (2, 2, 1, 0), (2, 2, 2, 0), (2, 2, 3, 0), (2, 2, 4, 0), (3, 2, 5, 1),
    (3, 2, 6, 1), (3, 2, 7, 1), (3, 2, 8, 0), (2, 2, 9, 1), (2, 2, 10, 1), (3, 2, 11, 1),
    (3, 2, 12, 1), (3, 2, 13, 1), (3, 2, 14, 1), (3, 2, 15, 1), (3, 2, 16, 1), (3, 2, 17, 1),
    (3, 2, 18, 1), (4, 2, 19, 1), (4, 2, 20, 1), (4, 2, 21, 1), (4, 2, 22, 1), (4, 2, 23, 1),
    (4, 2, 24, 1), (4, 2, 25, 1), (4, 2, 26, 1), (1, 3, 0, 0), (2, 3, 1, 1), (2, 3, 2, 1),
    (2, 3, 3, 0), (2, 3, 4, 0), (3, 3, 5, 1), (3, 3, 6, 1), (3, 3, 7, 1), (3, 3, 8, 1),
    (2, 3, 9, 1), (2, 3, 10, 1), (3, 3, 11, 1), (3, 3, 12, 1), (3, 3, 13, 1), (3, 3, 14, 1),
    (3, 3, 15, 1), (3, 3, 16, 1), (3, 3, 17, 1), (3, 3, 18, 1), (4, 3, 19, 1), (4, 3, 20, 1),
    (4, 3, 21, 1), (4, 3, 22, 1), (4, 3, 23, 1), (4, 3, 24, 1), (4, 3, 25, 1), (4, 3, 26, 1),
    (1, 4, 0, 0), (2, 4, 1, 1), (2, 4, 2, 1), (2, 4, 3, 0), (2, 4, 4, 0), (3, 4, 5, 1),
    (3, 4, 6, 1), (3, 4, 7, 1), (3, 4, 8, 1), (2, 4, 9, 1), (2, 4, 10, 1), (3, 4, 11, 1),
    (3, 4, 12, 1), (3, 4, 13, 1), (3, 4, 14, 1), (3, 4, 15, 1), (3, 4, 16, 1), (3, 4, 17, 1),
    (3, 4, 18, 1), (4, 4, 19, 1), (4, 4, 20, 1), (4, 4, 21, 1), (4, 4, 22, 1), (4, 4, 23, 1),
    (4, 4, 24, 1), (4, 4, 25, 1), (4, 4, 26, 1), (2, 5, 0, 0), (3, 5, 1, 1), (3, 5, 2, 1),
    (3, 5, 3, 1), (3, 5, 4, 1), (4, 5, 5, 1), (4, 5, 6, 1), (4, 5, 7, 1), (4, 5, 8, 1),
    (3, 5, 9, 1), (3, 5, 10, 1), (4, 5, 11, 1), (4, 5, 12, 1), (4, 5, 13, 1), (4, 5, 14, 1),
    (4, 5, 15, 1), (4, 5, 16, 1), (4, 5, 17, 1), (4, 5, 18, 1), (5, 5, 19, 1), (5, 5, 20, 1),
    (5, 5, 21, 1), (5, 5, 22, 1), (5, 5, 23, 1), (5, 5, 24, 1), (5, 5, 25, 1), (5, 5, 26, 1),
    (2, 6, 0, 0), (3, 6, 1, 1), (3, 6, 2, 1), (3, 6, 3, 1), (3, 6, 4, 1), (4, 6, 5, 1),
    (4, 6, 6, 1), (4, 6, 7, 1), (4, 6, 8, 1), (3, 6, 9, 1), (3, 6, 10, 1), (4, 6, 11, 1),
    (4, 6, 12, 1), (4, 6, 13, 1), (4, 6, 14, 1), (4, 6, 15, 1), (4, 6, 16, 1), (4, 6, 17, 1),
    (4, 6, 18, 1), (5, 6, 19, 1), (5, 6, 20, 1), (5, 6, 21, 1), (5, 6, 22, 1), (5, 6, 23, 1),
    (5, 6, 24, 1), (5, 6, 25, 1), (5, 6, 26, 1), (2, 7, 0, 0), (3, 7, 1, 1), (3, 7, 2, 1),
    (3, 7, 3, 1), (3, 7, 4, 1), (4, 7, 5, 1), (4, 7, 6, 1), (4, 7, 7, 1), (4, 7, 8, 1),
    (3, 7, 9, 1), (3, 7, 10, 1), (4, 7, 11, 1), (4, 7, 12, 1), (4, 7, 13, 1), (4, 7, 14, 1),
    (4, 7, 15, 1), (4, 7, 16, 1), (4, 7, 17, 1), (4, 7, 18, 1), (5, 7, 19, 1), (5, 7, 20, 1),
    (5, 7, 21, 1), (5, 7, 22, 1), (5, 7, 23, 1), (5, 7, 24, 1), (5, 7, 25, 1), (5, 7, 26, 1),
    (2, 8, 0, 0), (3, 8, 1, 1), (3, 8, 2, 1), (3, 8, 3, 1), (3, 8, 4, 1), (4, 8, 5, 1),
    (4, 8, 6, 1), (4, 8, 7, 1), (4, 8, 8, 1), (3, 8, 9, 1), (3, 8, 10, 1), (4, 8, 11, 1),
    (4, 8, 12, 1), (4, 8, 13, 1), (4, 8, 14, 1), (4, 8, 15, 1), (4, 8, 16, 1), (4, 8, 17, 1),
    (4, 8, 18, 1), (5, 8, 19, 1), (5, 8, 20, 1), (5, 8, 21, 1), (5, 8, 22, 1), (5, 8, 23, 1),
    (5, 8, 24, 1), (5, 8, 25, 1), (5, 8, 26, 1), (1, 9, 0, 0), (2, 9, 1, 1), (2, 9, 2, 1),
    (2, 9, 3, 0), (2, 9, 4, 0), (3, 9, 5, 1), (3, 9, 6, 1), (3, 9, 7, 1), (3, 9, 8, 1),
    (2, 9, 9, 1), (2, 9, 10, 1), (3, 9, 11, 1), (3, 9, 12, 1), (3, 9, 13, 1), (3, 9, 14, 1),
    (3, 9, 15, 1), (3, 9, 16, 1), (3, 9, 17, 1), (3, 9, 18, 1), (4, 9, 19, 1), (4, 9, 20, 1),
    (4, 9, 21, 1), (4, 9, 22, 1), (4, 9, 23, 1), (4, 9, 24, 1), (4, 9, 25, 1), (4, 9, 26, 1),
    (1, 10, 0, 0), (2, 10, 1, 1), (2, 10, 2, 1), (2, 10, 3, 0), (2, 10, 4, 0), (3, 10, 5, 1),
    (3, 10, 6, 1), (3, 10, 7, 1), (3, 10, 8, 1), (2, 10, 9, 1), (2, 10, 10, 1), (3, 10, 11, 1),
    (3, 10, 12, 1), (3, 10, 13, 1), (3, 10, 14, 1), (3, 10, 15, 1), (3, 10, 16, 1), (3, 10, 17, 1),
    (3, 10, 18, 1), (4, 10, 19, 1), (4, 10, 20, 1), (4, 10, 21, 1), (4, 10, 22, 1), (4, 10, 23, 1),
    (4, 10, 24, 1), (4, 10, 25, 1), (4, 10, 26, 1), (2, 11, 0, 0), (3, 11, 1, 0), (3, 11, 2, 1),
    (3, 11, 3, 1), (3, 11, 4, 1), (4, 11, 5, 1), (4, 11, 6, 1), (4, 11, 7, 1), (4, 11, 8, 1),
    (3, 11, 9, 1), (3, 11, 10, 1), (4, 11, 11, 1), (4, 11, 12, 1), (4, 11, 13, 1), (4, 11, 14, 1),
    (4, 11, 15, 1), (4, 11, 16, 1), (4, 11, 17, 1), (4, 11, 18, 1), (5, 11, 19, 1), (5, 11, 20, 1),
    (5, 11, 21, 1), (5, 11, 22, 1), (5, 11, 23, 1), (5, 11, 24, 1), (5, 11, 25, 1), (5, 11, 26, 1),
    (2, 12, 0, 0), (3, 12, 1, 1), (3, 12, 2, 0), (3, 12, 3, 1), (3, 12, 4, 1), (4, 12, 5, 1),
    (4, 12, 6, 1), (4, 12, 7, 1), (4, 12, 8, 1), (3, 12, 9, 1), (3, 12, 10, 1), (4, 12, 11, 1),
    (4, 12, 12, 1), (4, 12, 13, 1), (4, 12, 14, 1), (4, 12, 15, 1), (4, 12, 16, 1), (4, 12, 17, 1),
    (4, 12, 18, 1), (5, 12, 19, 1), (5, 12, 20, 1), (5, 12, 21, 1), (5, 12, 22, 1), (5, 12, 23, 1),
    (5, 12, 24, 1), (5, 12, 25, 1), (5, 12, 26, 1), (2, 13, 0, 0), (3, 13, 1, 1), (3, 13, 2, 1),
    (3, 13, 3, 1), (3, 13, 4, 1), (4, 13, 5, 1), (4, 13, 6, 1), (4, 13, 7, 1), (4, 13, 8, 1),
    (3, 13, 9, 1), (3, 13, 10, 1), (4, 13, 11, 1), (4, 13, 12, 1), (4, 13, 13, 1), (4, 13, 14, 1),
    (4, 13, 15, 1), (4, 13, 16, 1), (4, 13, 17, 1), (4, 13, 18, 1), (5, 13, 19, 1), (5, 13, 20, 1),
    (5, 13, 21, 1), (5, 13, 22, 1), (5, 13, 23, 1), (5, 13, 24, 1), (5, 13, 25, 1), (5, 13, 26, 1),
    (2, 14, 0, 0), (3, 14, 1, 1), (3, 14, 2, 1), (3, 14, 3, 1), (3, 14, 4, 1), (4, 14, 5, 1),
    (4, 14, 6, 1), (4, 14, 7, 1), (4, 14, 8, 1), (3, 14, 9, 1), (3, 14, 10, 1), (4, 14, 11, 1),
    (4, 14, 12, 1), (4, 14, 13, 1), (4, 14, 14, 1), (4, 14, 15, 1), (4, 14, 16, 1), (4, 14, 17, 1),
    (4, 14, 18, 1), (5, 14, 19, 1), (5, 14, 20, 1), (5, 14, 21, 1), (5, 14, 22, 1), (5, 14, 23, 1),
    (5, 14, 24, 1), (5, 14, 25, 1), (5, 14, 26, 1), (2, 15, 0, 0), (3, 15, 1, 1), (3, 15, 2, 1),
    (3, 15, 3, 1), (3, 15, 4, 1), (4, 15, 5, 1), (4, 15, 6, 1), (4, 15, 7, 1), (4, 15, 8, 1),
    (3, 15, 9, 1), (3, 15, 10, 1), (4, 15, 11, 1), (4, 15, 12, 1), (4, 15, 13, 1), (4, 15, 14, 1),
    (4, 15, 15, 1), (4, 15, 16, 1), (4, 15, 17, 1), (4, 15, 18, 1), (5, 15, 19, 1), (5, 15, 20, 1),
    (5, 15, 21, 1), (5, 15, 22, 1), (5, 15, 23, 1), (5, 15, 24, 1), (5, 15, 25, 1), (5, 15, 26, 1),
    (2, 16, 0, 0), (3, 16, 1, 1), (3, 16, 2, 1), (3, 16, 3, 1), (3, 16, 4, 1), (4, 16, 5, 1),
    (4, 16, 6, 1), (4, 16, 7, 1), (4, 16, 8, 1), (3, 16, 9, 1), (3, 16, 10, 1), (4, 16, 11, 1),
    (4, 16, 12, 1), (4, 16, 13, 1), (4, 16, 14, 1), (4, 16, 15, 1), (4, 16, 16, 1), (4, 16, 17, 1),
    (4, 16, 18, 1), (5, 16, 19, 1), (5, 16, 20, 1), (5, 16, 21, 1), (5, 16, 22, 1), (5, 16, 23, 1),
    (5, 16, 24, 1), (5, 16, 25, 1), (5, 16, 26, 1), (2, 17, 0, 0), (3, 17, 1, 1), (3, 17, 2, 1),
    (3, 17, 3, 1), (3, 17, 4, 1), (4, 17, 5, 1), (4, 17, 6, 1), (4, 17, 7, 1), (4, 17, 8, 1),
    (3, 17, 9, 1), (3, 17, 10, 1), (4, 17, 11, 1), (4, 17, 12, 1), (4, 17, 13, 1), (4, 17, 14, 1),
    (4, 17, 15, 1), (4, 17, 16, 1), (4, 17, 17, 1), (4, 17, 18, 1), (5, 17, 19, 1), (5, 17, 20, 1),
    (5, 17, 21, 1), (5, 17, 22, 1), (5, 17, 23, 1), (5, 17, 24, 1), (5, 17, 25, 1), (5, 17, 26, 1),
    (2, 18, 0, 0), (3, 18, 1, 1), (3, 18, 2, 1), (3, 18, 3, 1), (3, 18, 4, 1), (4, 18, 5, 1),
    (4, 18, 6, 1), (4, 18, 7, 1), (4, 18, 8, 1), (3, 18, 9, 1), (3, 18, 10, 1), (4, 18, 11, 1),
    (4, 18, 12, 1), (4, 18, 13, 1), (4, 18, 14, 1), (4, 18, 15, 1), (4, 18, 16, 1), (4, 18, 17, 1),
    (4, 18, 18, 1), (5, 18, 19, 1), (5, 18, 20, 1), (5, 18, 21, 1), (5, 18, 22, 1), (5, 18, 23, 1),
    (5, 18, 24, 1), (5, 18, 25, 1), (5, 18, 26, 1), (3, 19, 0, 0), (4, 19, 1, 1), (4, 19, 2, 1),
    (4, 19, 3, 1), (4, 19, 4, 1), (5, 19, 5, 1), (5, 19, 6, 1), (5, 19, 7, 1), (5, 19, 8, 1),
    (4, 19, 9, 1), (4, 19, 10, 1), (5, 19, 11, 1), (5, 19, 12, 1), (5, 19, 13, 1), (5, 19, 14, 1),
    (5, 19, 15, 1), (5, 19, 16, 1), (5, 19, 17, 1), (5, 19, 18, 1), (6, 19, 19, 1), (6, 19, 20, 1),
    (6, 19, 21, 1), (6, 19, 22, 1), (6, 19, 23, 1), (6, 19, 24, 1), (6, 19, 25, 1), (6, 19, 26, 1),
    (3, 20, 0, 0), (4, 20, 1, 1), (4, 20, 2, 1), (4, 20, 3, 1), (4, 20, 4, 1), (5, 20, 5, 1),
    (5, 20, 6, 1), (5, 20, 7, 1), (5, 20, 8, 1), (4, 20, 9, 1), (4, 20, 10, 1), (5, 20, 11, 1),
    (5, 20, 12, 1), (5, 20, 13, 1), (5, 20, 14, 1), (5, 20, 15, 1), (5, 20, 16, 1), (5, 20, 17, 1),
    (5, 20, 18, 1), (6, 20, 19, 1), (6, 20, 20, 1), (6, 20, 21, 1), (6, 20, 22, 1), (6, 20, 23, 1),
    (6, 20, 24, 1), (6, 20, 25, 1), (6, 20, 26, 1), (3, 21, 0, 0), (4, 21, 1, 1), (4, 21, 2, 1),
    (4, 21, 3, 1), (4, 21, 4, 1), (5, 21, 5, 1), (5, 21, 6, 1), (5, 21, 7, 1), (5, 21, 8, 1),
    (4, 21, 9, 1), (4, 21, 10, 1), (5, 21, 11, 1), (5, 21, 12, 1), (5, 21, 13, 1), (5, 21, 14, 1),
    (5, 21, 15, 1), (5, 21, 16, 1), (5, 21, 17, 1), (5, 21, 18, 1), (6, 21, 19, 1), (6, 21, 20, 1),
    (6, 21, 21, 1), (6, 21, 22, 1), (6, 21, 23, 1), (6, 21, 24, 1), (6, 21, 25, 1), (6, 21, 26, 1),
    (3, 22, 0, 0), (4, 22, 1, 1), (4, 22, 2, 1), (4, 22, 3, 1), (4, 22, 4, 1), (5, 22, 5, 1),
    (5, 22, 6, 1), (5, 22, 7, 1), (5, 22, 8, 1), (4, 22, 9, 1), (4, 22, 10, 1), (5, 22, 11, 1),
    (5, 22, 12, 1), (5, 22, 13, 1), (5, 22, 14, 1), (5, 22, 15, 1), (5, 22, 16, 1), (5, 22, 17, 1),
    (5, 22, 18, 1), (6, 22, 19, 1), (6, 22, 20, 1), (6, 22, 21, 1), (6, 22, 22, 1), (6, 22, 23, 1),
    (6, 22, 24, 1), (6, 22, 25, 1), (6, 22, 26, 1), (3, 23, 0, 0), (4, 23, 1, 1), (4, 23, 2, 1),
    (4, 23, 3, 1), (4, 23, 4, 1), (5, 23, 5, 1), (5, 23, 6, 1), (5, 23, 7, 1), (5, 23, 8, 1),
    (4, 23, 9, 1), (4, 23, 10, 1), (5, 23, 11, 1), (5, 23, 12, 1), (5, 23, 13, 1), (5, 23, 14, 1),
    (5, 23, 15, 1), (5, 23, 16, 1), (5, 23, 17, 1), (5, 23, 18, 1), (6, 23, 19, 1), (6, 23, 20, 1),
    (6, 23, 21, 1), (6, 23, 22, 1), (6, 23, 23, 1), (6, 23, 24, 1), (6, 23, 25, 1), (6, 23, 26, 1),
    (3, 24, 0, 0), (4, 24, 1, 1), (4, 24, 2, 1), (4, 24, 3, 1), (4, 24, 4, 1), (5, 24, 5, 1),
    (5, 24, 6, 1), (5, 24, 7, 1), (5, 24, 8, 1), (4, 24, 9, 1), (4, 24, 10, 1), (5, 24, 11, 1),
    (5, 24, 12, 1), (5, 24, 13, 1), (5, 24, 14, 1), (5, 24, 15, 1), (5, 24, 16, 1), (5, 24, 17, 1),
    (5, 24, 18, 1), (6, 24, 19, 1), (6, 24, 20, 1), (6, 24, 21, 1), (6, 24, 22, 1), (6, 24, 23, 1),
    (6, 24, 24, 1), (6, 24, 25, 1), (6, 24, 26, 1), (3, 25, 0, 0), (4, 25, 1, 1), (4, 25, 2, 1),
    (4, 25, 3, 1), (4, 25, 4, 1), (5, 25, 5, 1), (5, 25, 6, 1), (5, 25, 7, 1), (5, 25, 8, 1),
    (4, 25, 9, 1), (4, 25, 10, 1), (5, 25, 11, 1), (5, 25, 12, 1), (5, 25, 13, 1), (5, 25, 14, 1),
    (5, 25, 15, 1), (5, 25, 16, 1), (5, 25, 17, 1), (5, 25, 18, 1), (6, 25, 19, 1), (6, 25, 20, 1),
    (6, 25, 21, 1), (6, 25, 22, 1), (6, 25, 23, 1), (6, 25, 24, 1), (6, 25, 25, 1), (6, 25, 26, 1),
    (3, 26, 0, 0), (4, 26, 1, 1), (4, 26, 2, 1), (4, 26, 3, 1), (4, 26, 4, 1), (5, 26, 5, 1),
    (5, 26, 6, 1), (5, 26, 7, 1), (5, 26, 8, 1), (4, 26, 9, 1), (4, 26, 10, 1), (5, 26, 11, 1),
    (5, 26, 12, 1), (5, 26, 13, 1), (5, 26, 14, 1), (5, 26, 15, 1), (5, 26, 16, 1), (5, 26, 17, 1),
    (5, 26, 18, 1), (6, 26, 19, 1), (6, 26, 20, 1), (6, 26, 21, 1), (6, 26, 22, 1), (6, 26, 23, 1),
    (6, 26, 24, 1), (6, 26, 25, 1), (6, 26, 26, 1),
)

KEYBOARD_TABLE_ROWS = (
    (1, 0, 0, '·', 1,
     (0, 0, 0, 0), (0.0, 0.0),
     "The camera's movement direction remains stationary (·). At the same time, the rotation direction of the camera remains stationary (·)."),
    (1, 0, 1, '↑', 1,
     (0, 0, 0, 0), (1.0, 0.0),
     'The camera tilts up (↑).'),
    (1, 0, 2, '↓', 1,
     (0, 0, 0, 0), (-1.0, 0.0),
     'The camera tilts down (↓).'),
    (1, 0, 3, '→', 1,
     (0, 0, 0, 0), (0.0, 1.0),
     'The camera pans to the right (→).'),
    (1, 0, 4, '←', 1,
     (0, 0, 0, 0), (0.0, -1.0),
     'The camera pans to the left (←).'),
    (1, 1, 0, 'W', 1,
     (1, 0, 0, 0), (0.0, 0.0),
     'The camera pushes forward (W).'),
    (1, 2, 0, 'S', 1,
     (0, 1, 0, 0), (0.0, 0.0),
     'The camera pulls back (S).'),
    (1, 3, 0, 'A', 1,
     (0, 0, 1, 0), (0.0, 0.0),
     'The camera moves to the left (A).'),
    (1, 4, 0, 'D', 1,
     (0, 0, 0, 1), (0.0, 0.0),
     'The camera moves to the right (D).'),
    (2, 0, 5, '↑+→', 1,
     (0, 0, 0, 0), (1.0, 1.0),
     'The camera tilts up and pans to the right (↑→).'),
    (2, 0, 6, '↑+←', 1,
     (0, 0, 0, 0), (1.0, -1.0),
     'The camera tilts up and pans to the left (↑←).'),
    (2, 0, 7, '↓+→', 1,
     (0, 0, 0, 0), (-1.0, 1.0),
     'The camera tilts down and pans to the right (↓→).'),
    (2, 0, 8, '↓+←', 1,
     (0, 0, 0, 0), (-1.0, -1.0),
     'The camera tilts down and pans to the left (↓←).'),
    (2, 5, 0, 'W+A', 1,
     (1, 0, 1, 0), (0.0, 0.0),
     'The camera pushes forward and moves to the left (W+A).'),
    (2, 6, 0, 'W+D', 1,
     (1, 0, 0, 1), (0.0, 0.0),
     'The camera pushes forward and moves to the right (W+D).'),
    (2, 7, 0, 'S+A', 1,
     (0, 1, 1, 0), (0.0, 0.0),
     'The camera pulls back and moves to the left (S+A).'),
    (2, 8, 0, 'S+D', 1,
     (0, 1, 0, 1), (0.0, 0.0),
     'The camera pulls back and moves to the right (S+D).'),
    (2, 1, 1, 'W+↑', 1,
     (1, 0, 0, 0), (1.0, 0.0),
     'The camera pushes forward (W). At the same time, the camera tilts up (↑).'),
    (2, 1, 2, 'W+↓', 0,
     (1, 0, 0, 0), (-1.0, 0.0),
     'The camera pushes forward (W). At the same time, the camera tilts down (↓).'),
    (2, 1, 3, 'W+→', 1,
     (1, 0, 0, 0), (0.0, 1.0),
     'The camera pushes forward (W). At the same time, the camera pans to the right (→).'),
    (2, 1, 4, 'W+←', 1,
     (1, 0, 0, 0), (0.0, -1.0),
     'The camera pushes forward (W). At the same time, the camera pans to the left (←).'),
    (2, 2, 1, 'S+↑', 0,
     (0, 1, 0, 0), (1.0, 0.0),
     'The camera pulls back (S). At the same time, the camera tilts up (↑).'),
    (2, 2, 2, 'S+↓', 0,
     (0, 1, 0, 0), (-1.0, 0.0),
     'The camera pulls back (S). At the same time, the camera tilts down (↓).'),
    (2, 2, 3, 'S+→', 1,
     (0, 1, 0, 0), (0.0, 1.0),
     'The camera pulls back (S). At the same time, the camera pans to the right (→).'),
    (2, 2, 4, 'S+←', 1,
     (0, 1, 0, 0), (0.0, -1.0),
     'The camera pulls back (S). At the same time, the camera pans to the left (←).'),
    (2, 3, 1, 'A+↑', 0,
     (0, 0, 1, 0), (1.0, 0.0),
     'The camera moves to the left (A). At the same time, the camera tilts up (↑).'),
    (2, 3, 2, 'A+↓', 0,
     (0, 0, 1, 0), (-1.0, 0.0),
     'The camera moves to the left (A). At the same time, the camera tilts down (↓).'),
    (2, 3, 3, 'A+→', 1,
     (0, 0, 1, 0), (0.0, 1.0),
     'The camera moves to the left (A). At the same time, the camera pans to the right (→).'),
    (2, 3, 4, 'A+←', 1,
     (0, 0, 1, 0), (0.0, -1.0),
     'The camera moves to the left (A). At the same time, the camera pans to the left (←).'),
    (2, 4, 1, 'D+↑', 0,
     (0, 0, 0, 1), (1.0, 0.0),
     'The camera moves to the right (D). At the same time, the camera tilts up (↑).'),
    (2, 4, 2, 'D+↓', 0,
     (0, 0, 0, 1), (-1.0, 0.0),
     'The camera moves to the right (D). At the same time, the camera tilts down (↓).'),
    (2, 4, 3, 'D+→', 1,
     (0, 0, 0, 1), (0.0, 1.0),
     'The camera moves to the right (D). At the same time, the camera pans to the right (→).'),
    (2, 4, 4, 'D+←', 1,
     (0, 0, 0, 1), (0.0, -1.0),
     'The camera moves to the right (D). At the same time, the camera pans to the left (←).'),
    (3, 1, 5, 'W+↑+→', 1,
     (1, 0, 0, 0), (1.0, 1.0),
     'The camera pushes forward (W). At the same time, the camera tilts up and pans to the right (↑→).'),
    (3, 1, 6, 'W+↑+←', 1,
     (1, 0, 0, 0), (1.0, -1.0),
     'The camera pushes forward (W). At the same time, the camera tilts up and pans to the left (↑←).'),
    (3, 1, 7, 'W+↓+→', 0,
     (1, 0, 0, 0), (-1.0, 1.0),
     'The camera pushes forward (W). At the same time, the camera tilts down and pans to the right (↓→).'),
    (3, 1, 8, 'W+↓+←', 0,
     (1, 0, 0, 0), (-1.0, -1.0),
     'The camera pushes forward (W). At the same time, the camera tilts down and pans to the left (↓←).'),
    (3, 2, 5, 'S+↑+→', 0,
     (0, 1, 0, 0), (1.0, 1.0),
     'The camera pulls back (S). At the same time, the camera tilts up and pans to the right (↑→).'),
    (3, 2, 6, 'S+↑+←', 0,
     (0, 1, 0, 0), (1.0, -1.0),
     'The camera pulls back (S). At the same time, the camera tilts up and pans to the left (↑←).'),
    (3, 2, 7, 'S+↓+→', 0,
     (0, 1, 0, 0), (-1.0, 1.0),
     'The camera pulls back (S). At the same time, the camera tilts down and pans to the right (↓→).'),
    (3, 2, 8, 'S+↓+←', 0,
     (0, 1, 0, 0), (-1.0, -1.0),
     'The camera pulls back (S). At the same time, the camera tilts down and pans to the left (↓←).'),
    (3, 3, 5, 'A+↑+→', 0,
     (0, 0, 1, 0), (1.0, 1.0),
     'The camera moves to the left (A). At the same time, the camera tilts up and pans to the right (↑→).'),
    (3, 3, 6, 'A+↑+←', 0,
     (0, 0, 1, 0), (1.0, -1.0),
     'The camera moves to the left (A). At the same time, the camera tilts up and pans to the left (↑←).'),
    (3, 3, 7, 'A+↓+→', 0,
     (0, 0, 1, 0), (-1.0, 1.0),
     'The camera moves to the left (A). At the same time, the camera tilts down and pans to the right (↓→).'),
    (3, 3, 8, 'A+↓+←', 0,
     (0, 0, 1, 0), (-1.0, -1.0),
     'The camera moves to the left (A). At the same time, the camera tilts down and pans to the left (↓←).'),
    (3, 4, 5, 'D+↑+→', 0,
     (0, 0, 0, 1), (1.0, 1.0),
     'The camera moves to the right (D). At the same time, the camera tilts up and pans to the right (↑→).'),
    (3, 4, 6, 'D+↑+←', 0,
     (0, 0, 0, 1), (1.0, -1.0),
     'The camera moves to the right (D). At the same time, the camera tilts up and pans to the left (↑←).'),
    (3, 4, 7, 'D+↓+→', 0,
     (0, 0, 0, 1), (-1.0, 1.0),
     'The camera moves to the right (D). At the same time, the camera tilts down and pans to the right (↓→).'),
    (3, 4, 8, 'D+↓+←', 0,
     (0, 0, 0, 1), (-1.0, -1.0),
     'The camera moves to the right (D). At the same time, the camera tilts down and pans to the left (↓←).'),
    (3, 5, 1, 'W+A+↑', 0,
     (1, 0, 1, 0), (1.0, 0.0),
     'The camera pushes forward and moves to the left (W+A). At the same time, the camera tilts up (↑).'),
    (3, 5, 2, 'W+A+↓', 0,
     (1, 0, 1, 0), (-1.0, 0.0),
     'The camera pushes forward and moves to the left (W+A). At the same time, the camera tilts down (↓).'),
    (3, 5, 3, 'W+A+→', 1,
     (1, 0, 1, 0), (0.0, 1.0),
     'The camera pushes forward and moves to the left (W+A). At the same time, the camera pans to the right (→).'),
    (3, 5, 4, 'W+A+←', 1,
     (1, 0, 1, 0), (0.0, -1.0),
     'The camera pushes forward and moves to the left (W+A). At the same time, the camera pans to the left (←).'),
    (3, 6, 1, 'W+D+↑', 0,
     (1, 0, 0, 1), (1.0, 0.0),
     'The camera pushes forward and moves to the right (W+D). At the same time, the camera tilts up (↑).'),
    (3, 6, 2, 'W+D+↓', 0,
     (1, 0, 0, 1), (-1.0, 0.0),
     'The camera pushes forward and moves to the right (W+D). At the same time, the camera tilts down (↓).'),
    (3, 6, 3, 'W+D+→', 1,
     (1, 0, 0, 1), (0.0, 1.0),
     'The camera pushes forward and moves to the right (W+D). At the same time, the camera pans to the right (→).'),
    (3, 6, 4, 'W+D+←', 1,
     (1, 0, 0, 1), (0.0, -1.0),
     'The camera pushes forward and moves to the right (W+D). At the same time, the camera pans to the left (←).'),
    (3, 7, 1, 'S+A+↑', 0,
     (0, 1, 1, 0), (1.0, 0.0),
     'The camera pulls back and moves to the left (S+A). At the same time, the camera tilts up (↑).'),
    (3, 7, 2, 'S+A+↓', 0,
     (0, 1, 1, 0), (-1.0, 0.0),
     'The camera pulls back and moves to the left (S+A). At the same time, the camera tilts down (↓).'),
    (3, 7, 3, 'S+A+→', 1,
     (0, 1, 1, 0), (0.0, 1.0),
     'The camera pulls back and moves to the left (S+A). At the same time, the camera pans to the right (→).'),
    (3, 7, 4, 'S+A+←', 1,
     (0, 1, 1, 0), (0.0, -1.0),
     'The camera pulls back and moves to the left (S+A). At the same time, the camera pans to the left (←).'),
    (3, 8, 1, 'S+D+↑', 0,
     (0, 1, 0, 1), (1.0, 0.0),
     'The camera pulls back and moves to the right (S+D). At the same time, the camera tilts up (↑).'),
    (3, 8, 2, 'S+D+↓', 0,
     (0, 1, 0, 1), (-1.0, 0.0),
     'The camera pulls back and moves to the right (S+D). At the same time, the camera tilts down (↓).'),
    (3, 8, 3, 'S+D+→', 1,
     (0, 1, 0, 1), (0.0, 1.0),
     'The camera pulls back and moves to the right (S+D). At the same time, the camera pans to the right (→).'),
    (3, 8, 4, 'S+D+←', 1,
     (0, 1, 0, 1), (0.0, -1.0),
     'The camera pulls back and moves to the right (S+D). At the same time, the camera pans to the left (←).'),
    (4, 5, 5, 'W+A+↑+→', 0,
     (1, 0, 1, 0), (1.0, 1.0),
     'The camera pushes forward and moves to the left (W+A). At the same time, the camera tilts up and pans to the right (↑→).'),
    (4, 5, 6, 'W+A+↑+←', 0,
     (1, 0, 1, 0), (1.0, -1.0),
     'The camera pushes forward and moves to the left (W+A). At the same time, the camera tilts up and pans to the left (↑←).'),
    (4, 5, 7, 'W+A+↓+→', 0,
     (1, 0, 1, 0), (-1.0, 1.0),
     'The camera pushes forward and moves to the left (W+A). At the same time, the camera tilts down and pans to the right (↓→).'),
    (4, 5, 8, 'W+A+↓+←', 0,
     (1, 0, 1, 0), (-1.0, -1.0),
     'The camera pushes forward and moves to the left (W+A). At the same time, the camera tilts down and pans to the left (↓←).'),
    (4, 6, 5, 'W+D+↑+→', 0,
     (1, 0, 0, 1), (1.0, 1.0),
     'The camera pushes forward and moves to the right (W+D). At the same time, the camera tilts up and pans to the right (↑→).'),
    (4, 6, 6, 'W+D+↑+←', 0,
     (1, 0, 0, 1), (1.0, -1.0),
     'The camera pushes forward and moves to the right (W+D). At the same time, the camera tilts up and pans to the left (↑←).'),
    (4, 6, 7, 'W+D+↓+→', 0,
     (1, 0, 0, 1), (-1.0, 1.0),
     'The camera pushes forward and moves to the right (W+D). At the same time, the camera tilts down and pans to the right (↓→).'),
    (4, 6, 8, 'W+D+↓+←', 0,
     (1, 0, 0, 1), (-1.0, -1.0),
     'The camera pushes forward and moves to the right (W+D). At the same time, the camera tilts down and pans to the left (↓←).'),
    (4, 7, 5, 'S+A+↑+→', 0,
     (0, 1, 1, 0), (1.0, 1.0),
     'The camera pulls back and moves to the left (S+A). At the same time, the camera tilts up and pans to the right (↑→).'),
    (4, 7, 6, 'S+A+↑+←', 0,
     (0, 1, 1, 0), (1.0, -1.0),
     'The camera pulls back and moves to the left (S+A). At the same time, the camera tilts up and pans to the left (↑←).'),
    (4, 7, 7, 'S+A+↓+→', 0,
     (0, 1, 1, 0), (-1.0, 1.0),
     'The camera pulls back and moves to the left (S+A). At the same time, the camera tilts down and pans to the right (↓→).'),
    (4, 7, 8, 'S+A+↓+←', 0,
     (0, 1, 1, 0), (-1.0, -1.0),
     'The camera pulls back and moves to the left (S+A). At the same time, the camera tilts down and pans to the left (↓←).'),
    (4, 8, 5, 'S+D+↑+→', 0,
     (0, 1, 0, 1), (1.0, 1.0),
     'The camera pulls back and moves to the right (S+D). At the same time, the camera tilts up and pans to the right (↑→).'),
    (4, 8, 6, 'S+D+↑+←', 0,
     (0, 1, 0, 1), (1.0, -1.0),
     'The camera pulls back and moves to the right (S+D). At the same time, the camera tilts up and pans to the left (↑←).'),
    (4, 8, 7, 'S+D+↓+→', 0,
     (0, 1, 0, 1), (-1.0, 1.0),
     'The camera pulls back and moves to the right (S+D). At the same time, the camera tilts down and pans to the right (↓→).'),
    (4, 8, 8, 'S+D+↓+←', 0,
     (0, 1, 0, 1), (-1.0, -1.0),
     'The camera pulls back and moves to the right (S+D). At the same time, the camera tilts down and pans to the left (↓←).'),
)

MEMORY_TABLE_ROWS = (
    (1,
     (1, 0, 'Forward', 'W', (1, 0, 0, 0), (0.0, 0.0)),
     (2, 0, 'Backward', 'S', (0, 1, 0, 0), (0.0, 0.0)),
     'First, The camera pushes forward (W). Second, The camera pulls back (S). Third, ensure the magnitude of motion before and after is the same.'),
    (2,
     (2, 0, 'Backward', 'S', (0, 1, 0, 0), (0.0, 0.0)),
     (1, 0, 'Forward', 'W', (1, 0, 0, 0), (0.0, 0.0)),
     'First, The camera pulls back (S). Second, The camera pushes forward (W). Third, ensure the magnitude of motion before and after is the same.'),
    (3,
     (3, 0, 'Left', 'A', (0, 0, 1, 0), (0.0, 0.0)),
     (4, 0, 'Right', 'D', (0, 0, 0, 1), (0.0, 0.0)),
     'First, The camera moves to the left (A). Second, The camera moves to the right (D). Third, ensure the magnitude of motion before and after is the same.'),
    (4,
     (4, 0, 'Right', 'D', (0, 0, 0, 1), (0.0, 0.0)),
     (3, 0, 'Left', 'A', (0, 0, 1, 0), (0.0, 0.0)),
     'First, The camera moves to the right (D). Second, The camera moves to the left (A). Third, ensure the magnitude of motion before and after is the same.'),
    (5,
     (0, 1, 'Camera Up', '↑', (0, 0, 0, 0), (1.0, 0.0)),
     (0, 2, 'Camera Down', '↓', (0, 0, 0, 0), (-1.0, 0.0)),
     'First, The camera tilts up (↑). Second, The camera tilts down (↓). Third, ensure the magnitude of motion before and after is the same.'),
    (6,
     (0, 2, 'Camera Down', '↓', (0, 0, 0, 0), (-1.0, 0.0)),
     (0, 1, 'Camera Up', '↑', (0, 0, 0, 0), (1.0, 0.0)),
     'First, The camera tilts down (↓). Second, The camera tilts up (↑). Third, ensure the magnitude of motion before and after is the same.'),
    (7,
     (0, 4, 'Camera Left', '←', (0, 0, 0, 0), (0.0, -1.0)),
     (0, 3, 'Camera Right', '→', (0, 0, 0, 0), (0.0, 1.0)),
     'First, The camera pans to the left (←). Second, The camera pans to the right (→). Third, ensure the magnitude of motion before and after is the same.'),
    (8,
     (0, 3, 'Camera Right', '→', (0, 0, 0, 0), (0.0, 1.0)),
     (0, 4, 'Camera Left', '←', (0, 0, 0, 0), (0.0, -1.0)),
     'First, The camera pans to the right (→). Second, The camera pans to the left (←). Third, ensure the magnitude of motion before and after is the same.'),
    (9,
     (9, 0, 'Upward', '-', (0, 0, 0, 0), (1.0, 0.0)),
     (10, 0, 'Downward', '-', (0, 0, 0, 0), (-1.0, 0.0)),
     'First, The camera tilts up (↑). Second, The camera tilts down (↓). Third, ensure the magnitude of motion before and after is the same.'),
    (10,
     (10, 0, 'Downward', '-', (0, 0, 0, 0), (-1.0, 0.0)),
     (9, 0, 'Upward', '-', (0, 0, 0, 0), (1.0, 0.0)),
     'First, The camera tilts down (↓). Second, The camera tilts up (↑). Third, ensure the magnitude of motion before and after is the same.'),
)
