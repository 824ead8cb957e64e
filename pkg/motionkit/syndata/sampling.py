# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Random characters, pose sequences and expression sequences.

Pose sequences are mean-reverting random walks pulled toward a scripted
gesture. Every per-step joint change is clipped to MAX_STEP radians so
clips stay smooth whatever the gesture asks for.
"""
import math

import numpy as np

from ..schema import CharacterSpec, ExpressionSpec, PoseSpec
from ..schema.specs import HAND_SCALE_RANGE, HEAD_SCALE_RANGE, LIMB_SCALE_RANGE
from .skeleton import ANGLE_INDEX, ANGLE_NAMES, BASE_CANVAS, BASE_WIDTHS, \
    BONES, PALETTE, PART_INDEX

__all__ = ['GESTURES', 'sample_character', 'sample_pose_sequence',
           'sample_expression_sequence', 'sample_depth_order']

MAX_STEP = 0.3
COLOR_JITTER = 0.08
WIDTH_RANGE = (0.8, 1.25)
REVERSION = 0.3
ANGLE_NOISE = 0.05
ROOT_STEP = 0.5

# gesture -> probability; crossed hands keeps hand-over-hand occlusion
# in well over a fifth of the clips
GESTURES = (
    ("crossed_hands", 0.35),
    ("wave", 0.2),
    ("finger_point", 0.15),
    ("crouch", 0.15),
    ("idle", 0.15),
)


def sample_character(rng):
    """ a CharacterSpec with every field uniform in its declared range """
    u = rng.uniform
    colors = np.clip(PALETTE + u(-COLOR_JITTER, COLOR_JITTER, PALETTE.shape), 0., 1.)
    return CharacterSpec(
        limb_scales=[float(x) for x in u(*LIMB_SCALE_RANGE, size=len(BONES))],
        limb_widths=[float(x) for x in BASE_WIDTHS * u(*WIDTH_RANGE, size=len(BONES))],
        head_radius_scale=float(u(*HEAD_SCALE_RANGE)),
        hand_scale=float(u(*HAND_SCALE_RANGE)),
        colors=[float(x) for x in colors.ravel()],
        finger_count=3,
    )


def sample_depth_order(rng):
    """ legs behind the torso, arms in front, each side's group in a
    random order and each hand's fingers shuffled """
    order = []
    for side in rng.numpy.permutation(["l", "r"]):
        order += [PART_INDEX["%s_%s" % (side, p)] for p in ("thigh", "shin", "foot")]
    order += [PART_INDEX["torso"], PART_INDEX["head"]]
    for side in rng.numpy.permutation(["l", "r"]):
        fingers = [PART_INDEX["%s_finger%d" % (side, f)]
                   for f in rng.numpy.permutation(3)]
        order += [PART_INDEX["%s_upper_arm" % side], PART_INDEX["%s_forearm" % side],
                  PART_INDEX["%s_palm" % side]] + fingers
    return [int(p) for p in order]


def _set(angles, side, joint, value):
    # right side angles are mirrored
    sign = 1. if side == "l" else -1.
    angles[ANGLE_INDEX["%s_%s" % (side, joint)]] = sign * value


class GestureScript(object):
    """ target joint angles and root offset as a function of the frame """

    def __init__(self, name, rng):
        self.name = name
        self.side = "l" if rng.bernoulli(0.5) else "r"
        self.phase = rng.uniform(0., 2 * math.pi)
        self.period = rng.uniform(4., 10.)
        self.offset = rng.uniform(-0.15, 0.15, len(ANGLE_NAMES))
        self.curl = rng.uniform(-0.1, 0.5)

    def wave_value(self, t, amplitude):
        return amplitude * math.sin(2 * math.pi * t / self.period + self.phase)

    def target(self, t):
        a = self.offset.copy()
        for side in ("l", "r"):
            for f in range(3):
                _set(a, side, "f%d_a" % f, self.curl)
                _set(a, side, "f%d_b" % f, self.curl)
        root_drop = 0.
        if self.name == "crossed_hands":
            # both palms meet on the midline below the pelvis, fingers
            # pointing past it
            for side in ("l", "r"):
                _set(a, side, "shoulder", 0.32 + self.wave_value(t, 0.08))
                _set(a, side, "elbow", -0.1)
                _set(a, side, "wrist", 0.1)
        elif self.name == "wave":
            _set(a, self.side, "shoulder", -2.3)
            _set(a, self.side, "elbow", -0.4 + self.wave_value(t, 0.5))
        elif self.name == "finger_point":
            _set(a, self.side, "shoulder", -1.2)
            _set(a, self.side, "elbow", -0.2)
            for f in (0, 2):
                _set(a, self.side, "f%d_a" % f, 1.2)
                _set(a, self.side, "f%d_b" % f, 1.0)
            _set(a, self.side, "f1_a", 0.)
            _set(a, self.side, "f1_b", 0.)
        elif self.name == "crouch":
            depth = 0.5 - 0.5 * math.cos(2 * math.pi * t / (2 * self.period) + self.phase)
            for side in ("l", "r"):
                _set(a, side, "hip", -0.8 * depth)
                _set(a, side, "knee", 1.5 * depth)
                _set(a, side, "ankle", -0.7 * depth)
            root_drop = 5. * depth
        else:
            a[ANGLE_INDEX["spine"]] += self.wave_value(t, 0.1)
        return np.clip(a, -math.pi, math.pi), root_drop


def pick_gesture(rng):
    names = [g for g, _ in GESTURES]
    probs = np.array([p for _, p in GESTURES])
    return names[int(rng.numpy.choice(len(names), p=probs / probs.sum()))]


def sample_pose_sequence(rng, T, canvas_size=BASE_CANVAS, gesture=None):
    """ T smooth PoseSpecs following one gesture; `gesture` forces the
    script, otherwise it is drawn from GESTURES """
    if T < 1:
        raise ValueError("sequence length must be >= 1, got %r" % T)
    scale = canvas_size / BASE_CANVAS
    script = GestureScript(gesture or pick_gesture(rng), rng)
    depth_order = sample_depth_order(rng)

    base = np.array([canvas_size / 2., 0.59 * canvas_size]) + \
        rng.uniform(-3., 3., 2) * scale
    drift = np.zeros(2)
    rotation = float(rng.uniform(-0.1, 0.1))

    target, drop = script.target(0)
    angles = np.clip(target + rng.numpy.normal(0., ANGLE_NOISE, len(target)),
                     -math.pi, math.pi)
    poses = []
    for t in range(T):
        if t > 0:
            target, drop = script.target(t)
            step = REVERSION * (target - angles) + \
                rng.numpy.normal(0., ANGLE_NOISE, len(angles))
            angles = np.clip(angles + np.clip(step, -MAX_STEP, MAX_STEP),
                             -math.pi, math.pi)
            drift = np.clip(drift + rng.uniform(-ROOT_STEP, ROOT_STEP, 2) * scale,
                            -4. * scale, 4. * scale)
            rotation = float(np.clip(rotation + rng.numpy.normal(0., 0.02),
                                     -0.3, 0.3))
        root = base + drift + np.array([0., drop * scale])
        poses.append(PoseSpec(root_x=float(root[0]), root_y=float(root[1]),
                              root_rotation=rotation,
                              joint_angles=[float(x) for x in angles],
                              limb_depth_order=depth_order))
    return poses


def sample_expression_sequence(rng, T):
    """ mean-reverting expression walk with occasional blinks """
    if T < 1:
        raise ValueError("sequence length must be >= 1, got %r" % T)
    mean = rng.uniform(0.2, 0.9, 4)
    mean[2] = rng.uniform(0., 0.6)
    values = np.clip(mean + rng.numpy.normal(0., 0.1, 4), 0., 1.)
    out = []
    for t in range(T):
        if t > 0:
            step = REVERSION * (mean - values) + rng.numpy.normal(0., 0.08, 4)
            values = np.clip(values + np.clip(step, -MAX_STEP, MAX_STEP), 0., 1.)
        current = values.copy()
        if rng.bernoulli(0.1):
            current[:2] = 0.
        out.append(ExpressionSpec.from_array(current))
    return out
