"""Writes the bundled synthetic forehand used by the examples and tests.

Deterministic: no randomness, positions rounded to 0.1 mm. Up axis is z.
Two racket-tip samples are blanked to exercise gap filling.
"""

import csv
import math
import sys

FRAMES = 60
RATE = 60.0

JOINTS = [
    "head", "neck", "spine",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist", "right_wrist", "left_hand", "right_hand",
    "left_hip", "right_hip", "left_knee", "right_knee",
    "left_ankle", "right_ankle", "racket_tip",
]


def rot_z(p, a):
    c, s = math.cos(a), math.sin(a)
    return (c * p[0] - s * p[1], s * p[0] + c * p[1], p[2])


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def scale(a, k):
    return tuple(x * k for x in a)


def pose(t):
    # u in [0, 1]; smooth swing peaking near 60% of the stroke
    u = t / (FRAMES - 1)
    swing = 0.5 - 0.5 * math.cos(math.pi * min(1.0, u / 0.85))
    trunk = -0.9 + 1.6 * swing
    hip_turn = 0.5 * trunk
    pelvis = (0.0, 0.0, 1.0)
    chest = (0.0, 0.0, 1.45)

    p = {}
    p["spine"] = (0.0, 0.0, 1.2)
    p["neck"] = (0.0, 0.0, 1.5)
    p["head"] = (0.0, 0.0, 1.7)
    p["left_shoulder"] = add(chest, rot_z((0.0, 0.2, 0.0), trunk))
    p["right_shoulder"] = add(chest, rot_z((0.0, -0.2, 0.0), trunk))
    p["left_hip"] = add(pelvis, rot_z((0.0, 0.12, 0.0), hip_turn))
    p["right_hip"] = add(pelvis, rot_z((0.0, -0.12, 0.0), hip_turn))
    p["left_knee"] = add(p["left_hip"], (0.05, 0.0, -0.48))
    p["right_knee"] = add(p["right_hip"], (0.05 + 0.05 * swing, 0.0, -0.47))
    p["left_ankle"] = add(p["left_knee"], (-0.03, 0.0, -0.45))
    p["right_ankle"] = add(p["right_knee"], (-0.03, 0.0, -0.45))

    # Left arm hangs and follows the trunk.
    p["left_elbow"] = add(p["left_shoulder"], rot_z((0.1, 0.05, -0.27), trunk))
    p["left_wrist"] = add(p["left_elbow"], rot_z((0.2, 0.0, -0.1), trunk))
    p["left_hand"] = add(p["left_wrist"], rot_z((0.07, 0.0, -0.02), trunk))

    # Right arm sweeps forward on top of the trunk turn.
    arm = trunk + 1.8 * swing - 0.6
    lift = 0.15 * math.sin(math.pi * swing)
    elbow_bend = 0.9 - 0.6 * swing
    p["right_elbow"] = add(p["right_shoulder"], rot_z((0.0, -0.28, -0.05 + lift), arm))
    forearm = rot_z(scale((math.sin(elbow_bend), -math.cos(elbow_bend), 0.0), 0.26), arm)
    p["right_wrist"] = add(p["right_elbow"], add(forearm, (0.0, 0.0, lift * 0.5)))
    p["right_hand"] = add(p["right_wrist"], scale(forearm, 0.3))
    p["racket_tip"] = add(p["right_hand"], scale(forearm, 2.6))
    return p


def main(path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["frame", "joint", "x", "y", "z"])
        for t in range(FRAMES):
            p = pose(t)
            for j in JOINTS:
                if j == "racket_tip" and t in (21, 22):
                    w.writerow([t, j, "", "", ""])
                    continue
                w.writerow([t, j] + [f"{c:.4f}" for c in p[j]])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/samples/synthetic_forehand.csv")
