# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Topology and forward kinematics of the procedural 2D character.

Coordinates are image pixels (x to the right, y down). A bone's end is
its start plus R(a) . (length, 0) where `a` is the root rotation plus the
angles of every bone on the path from the root, itself included. In image
coordinates a positive angle therefore turns clockwise on screen.

All lengths are given for a 64 px canvas and scale with the canvas.
"""
import colorsys
import math

import numpy as np

__all__ = ['BONES', 'NODES', 'PARTS', 'ANGLE_NAMES', 'KEYPOINTS',
           'BODY_KEYPOINTS', 'HAND_KEYPOINTS', 'HAND_PARTS', 'PALETTE',
           'BACKGROUND', 'chain_positions', 'solve_nodes',
           'forward_kinematics', 'bone_angles', 'bone_lengths']

BASE_CANVAS = 64.
HEAD_RADIUS = 5.
HALF_PI = math.pi / 2

# (name, start node, end node, angle name or None for a fixed bone,
#  rest angle, length, width)
_BODY = [
    ("spine", "pelvis", "neck", "spine", -HALF_PI, 14., 4.5),
    ("neck", "neck", "head", "neck", 0., 6., 2.),
    ("l_clavicle", "neck", "l_shoulder", None, HALF_PI, 5., 2.6),
    ("l_upper_arm", "l_shoulder", "l_elbow", "l_shoulder", HALF_PI, 9., 2.2),
    ("l_forearm", "l_elbow", "l_wrist", "l_elbow", 0., 8., 1.8),
    ("r_clavicle", "neck", "r_shoulder", None, -HALF_PI, 5., 2.6),
    ("r_upper_arm", "r_shoulder", "r_elbow", "r_shoulder", -HALF_PI, 9., 2.2),
    ("r_forearm", "r_elbow", "r_wrist", "r_elbow", 0., 8., 1.8),
    ("l_pelvis", "pelvis", "l_hip", None, 0., 3.5, 3.),
    ("l_thigh", "l_hip", "l_knee", "l_hip", HALF_PI, 10., 2.6),
    ("l_shin", "l_knee", "l_ankle", "l_knee", 0., 9., 2.2),
    ("l_foot", "l_ankle", "l_toe", "l_ankle", -HALF_PI, 3., 1.5),
    ("r_pelvis", "pelvis", "r_hip", None, math.pi, 3.5, 3.),
    ("r_thigh", "r_hip", "r_knee", "r_hip", -HALF_PI, 10., 2.6),
    ("r_shin", "r_knee", "r_ankle", "r_knee", 0., 9., 2.2),
    ("r_foot", "r_ankle", "r_toe", "r_ankle", HALF_PI, 3., 1.5),
]

FINGER_SPREAD = (-0.6, 0., 0.6)


def _hand_bones(side):
    sign = 1. if side == "l" else -1.
    bones = [("%s_palm" % side, "%s_wrist" % side, "%s_palm" % side,
              "%s_wrist" % side, 0., 3., 1.6)]
    for f, spread in enumerate(FINGER_SPREAD):
        mid = "%s_f%d_mid" % (side, f)
        tip = "%s_f%d_tip" % (side, f)
        bones.append(("%s_f%d_a" % (side, f), "%s_palm" % side, mid,
                      "%s_f%d_a" % (side, f), sign * spread, 2.5, 0.8))
        bones.append(("%s_f%d_b" % (side, f), mid, tip,
                      "%s_f%d_b" % (side, f), 0., 2., 0.7))
    return bones


BONES = _BODY + _hand_bones("l") + _hand_bones("r")
BONE_NAMES = [b[0] for b in BONES]
HAND_BONES = frozenset(range(len(_BODY), len(BONES)))

NODES = ["pelvis"] + [b[2] for b in BONES]
NODE_INDEX = dict((name, i) for i, name in enumerate(NODES))

ANGLE_NAMES = ["spine", "neck"]
for _side in ("l", "r"):
    ANGLE_NAMES += ["%s_%s" % (_side, j) for j in
                    ("shoulder", "elbow", "wrist", "hip", "knee", "ankle")]
for _side in ("l", "r"):
    for _f in range(3):
        ANGLE_NAMES += ["%s_f%d_a" % (_side, _f), "%s_f%d_b" % (_side, _f)]
ANGLE_INDEX = dict((name, i) for i, name in enumerate(ANGLE_NAMES))

BODY_KEYPOINTS = ["neck", "head", "l_shoulder", "l_elbow", "l_wrist",
                  "r_shoulder", "r_elbow", "r_wrist", "l_hip", "l_knee",
                  "l_ankle", "r_hip", "r_knee", "r_ankle"]
HAND_KEYPOINTS = []
for _side in ("l", "r"):
    HAND_KEYPOINTS += ["%s_palm" % _side] + [
        "%s_f%d_%s" % (_side, _f, k) for _f in range(3) for k in ("mid", "tip")]
KEYPOINTS = BODY_KEYPOINTS + HAND_KEYPOINTS
KEYPOINT_NODES = np.array([NODE_INDEX[k] for k in KEYPOINTS])
BODY_SUBSET = np.arange(len(BODY_KEYPOINTS))
HAND_SUBSET = np.arange(len(BODY_KEYPOINTS), len(KEYPOINTS))

# drawable parts and the bones they are made of; "head" also gets a disc
PARTS = [
    ("torso", ["spine", "l_clavicle", "r_clavicle", "l_pelvis", "r_pelvis"]),
    ("head", ["neck"]),
]
for _side in ("l", "r"):
    PARTS += [
        ("%s_upper_arm" % _side, ["%s_upper_arm" % _side]),
        ("%s_forearm" % _side, ["%s_forearm" % _side]),
        ("%s_palm" % _side, ["%s_palm" % _side]),
    ] + [("%s_finger%d" % (_side, f), ["%s_f%d_a" % (_side, f), "%s_f%d_b" % (_side, f)])
         for f in range(3)]
for _side in ("l", "r"):
    PARTS += [("%s_thigh" % _side, ["%s_thigh" % _side]),
              ("%s_shin" % _side, ["%s_shin" % _side]),
              ("%s_foot" % _side, ["%s_foot" % _side])]
PART_NAMES = [p[0] for p in PARTS]
PART_INDEX = dict((name, i) for i, name in enumerate(PART_NAMES))
PART_BONES = [[BONE_NAMES.index(b) for b in bones] for _, bones in PARTS]
HEAD_PART = PART_INDEX["head"]
HAND_PARTS = dict(
    l=[PART_INDEX[n] for n in PART_NAMES if n.startswith("l_") and
       (n.endswith("palm") or "finger" in n)],
    r=[PART_INDEX[n] for n in PART_NAMES if n.startswith("r_") and
       (n.endswith("palm") or "finger" in n)],
)


def _palette(n):
    colors = []
    for i in range(n):
        sat = 0.9 if i % 2 == 0 else 0.6
        val = 0.95 if (i // 2) % 2 == 0 else 0.75
        colors.append(colorsys.hsv_to_rgb(i / float(n), sat, val))
    return np.asarray(colors, dtype=np.float32)


PALETTE = _palette(len(PARTS))
BACKGROUND = np.array([0.08, 0.08, 0.08], dtype=np.float32)

_BONE_START = []
for _b in BONES:
    _BONE_START.append(-1 if _b[1] == "pelvis" else BONE_NAMES.index(
        next(x[0] for x in BONES if x[2] == _b[1])))
BONE_PARENTS = np.array(_BONE_START)
REST_ANGLES = np.array([b[4] for b in BONES])
BASE_LENGTHS = np.array([b[5] for b in BONES])
BASE_WIDTHS = np.array([b[6] for b in BONES])
BONE_ANGLE = np.array([-1 if b[3] is None else ANGLE_INDEX[b[3]] for b in BONES])


def chain_positions(root, root_rotation, parents, lengths, angles):
    """ forward kinematics of a generic tree of bones given in
    topological order. `parents[i]` is the index of the bone whose end
    bone i starts from, or -1 for the root. Returns (ends, cumulative
    angles). """
    root = np.asarray(root, dtype=np.float64)
    n = len(lengths)
    ends = np.zeros((n, 2))
    cumulative = np.zeros(n)
    for i in range(n):
        p = parents[i]
        start = root if p < 0 else ends[p]
        base = root_rotation if p < 0 else cumulative[p]
        cumulative[i] = base + angles[i]
        ends[i] = start + lengths[i] * np.array(
            [math.cos(cumulative[i]), math.sin(cumulative[i])])
    return ends, cumulative


def bone_lengths(character, canvas_size=BASE_CANVAS):
    """ pixel lengths of every bone for `character` """
    scale = canvas_size / BASE_CANVAS
    lengths = BASE_LENGTHS * np.asarray(character.limb_scales, dtype=np.float64)
    hand = np.array([i in HAND_BONES for i in range(len(BONES))])
    lengths = np.where(hand, lengths * character.hand_scale, lengths)
    return lengths * scale


def bone_widths(character, canvas_size=BASE_CANVAS):
    scale = canvas_size / BASE_CANVAS
    widths = np.asarray(character.limb_widths, dtype=np.float64)
    hand = np.array([i in HAND_BONES for i in range(len(BONES))])
    widths = np.where(hand, widths * character.hand_scale, widths)
    return widths * scale


def head_radius(character, canvas_size=BASE_CANVAS):
    return HEAD_RADIUS * character.head_radius_scale * canvas_size / BASE_CANVAS


def pose_bone_angles(pose):
    """ per-bone relative angle: rest angle plus the pose angle driving it """
    joint = pose.angle_array()
    driven = np.where(BONE_ANGLE >= 0, joint[np.maximum(BONE_ANGLE, 0)], 0.)
    return REST_ANGLES + driven


def solve_nodes(character, pose, canvas_size=BASE_CANVAS):
    """ pixel position of every skeleton node (NODES order) """
    ends, _ = chain_positions(pose.root_position, pose.root_rotation,
                              BONE_PARENTS, bone_lengths(character, canvas_size),
                              pose_bone_angles(pose))
    return np.vstack([np.asarray(pose.root_position, dtype=np.float64)[None], ends])


def forward_kinematics(character, pose, canvas_size=BASE_CANVAS):
    """ (J, 2) keypoint pixel positions in KEYPOINTS order """
    return solve_nodes(character, pose, canvas_size)[KEYPOINT_NODES]


def bone_vectors(nodes):
    starts = np.array([NODE_INDEX[b[1]] for b in BONES])
    ends = np.array([NODE_INDEX[b[2]] for b in BONES])
    return nodes[ends] - nodes[starts]


def bone_angles(nodes):
    """ absolute angle of every bone recovered from node positions """
    v = bone_vectors(nodes)
    return np.arctan2(v[:, 1], v[:, 0])


# keypoint pairs joined by a body bone, used to measure skeleton size
# from keypoints alone
KEYPOINT_BONES = [(KEYPOINTS.index(a), KEYPOINTS.index(b)) for a, b in (
    ("neck", "head"), ("neck", "l_shoulder"), ("neck", "r_shoulder"),
    ("l_shoulder", "l_elbow"), ("l_elbow", "l_wrist"),
    ("r_shoulder", "r_elbow"), ("r_elbow", "r_wrist"),
    ("l_hip", "r_hip"), ("l_hip", "l_knee"), ("l_knee", "l_ankle"),
    ("r_hip", "r_knee"), ("r_knee", "r_ankle"))]


def skeleton_size(keypoints):
    """ summed length of the KEYPOINT_BONES """
    kp = np.asarray(keypoints, dtype=np.float64)
    a, b = zip(*KEYPOINT_BONES)
    return float(np.linalg.norm(kp[list(a)] - kp[list(b)], axis=-1).sum())


def keypoint_root(keypoints):
    """ mid-hip point of (..., J, 2) keypoints """
    kp = np.asarray(keypoints, dtype=np.float64)
    return 0.5 * (kp[..., KEYPOINTS.index("l_hip"), :] +
                  kp[..., KEYPOINTS.index("r_hip"), :])
