# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Identity, articulation and facial parameters of procedural subjects.

A `CharacterSpec` is who is moving, a `PoseSpec` is how, an
`ExpressionSpec` is the face. Poses carry no identity: the same PoseSpec
rendered with two characters yields the same joint angles.
"""
import math

import numpy as np
from jsonobject import FloatProperty, IntegerProperty, ListProperty

from ..exceptions import BadValueError
from .base import StaticSpec, each_in_range, in_range

__all__ = ['CharacterSpec', 'PoseSpec', 'ExpressionSpec']

LIMB_SCALE_RANGE = (0.7, 1.4)
HEAD_SCALE_RANGE = (0.6, 2.0)
HAND_SCALE_RANGE = (0.6, 2.0)


class CharacterSpec(StaticSpec):
    limb_scales = ListProperty(float, validators=each_in_range(*LIMB_SCALE_RANGE))
    limb_widths = ListProperty(float)
    head_radius_scale = FloatProperty(default=1., validators=in_range(*HEAD_SCALE_RANGE))
    hand_scale = FloatProperty(default=1., validators=in_range(*HAND_SCALE_RANGE))
    # flat r, g, b per drawable part
    colors = ListProperty(float, validators=each_in_range(0., 1.))
    finger_count = IntegerProperty(default=3, choices=[3])

    def color_array(self):
        return np.asarray(self.colors, dtype=np.float32).reshape(-1, 3)

    def validate(self, required=True):
        super(CharacterSpec, self).validate(required=required)
        from ..syndata.skeleton import BONES, PARTS
        if len(self.limb_scales) != len(BONES):
            raise BadValueError("expected %d limb scales, got %d"
                                % (len(BONES), len(self.limb_scales)))
        if len(self.limb_widths) != len(BONES):
            raise BadValueError("expected %d limb widths, got %d"
                                % (len(BONES), len(self.limb_widths)))
        if any(w <= 0 for w in self.limb_widths):
            raise BadValueError("limb widths must be positive")
        if len(self.colors) != 3 * len(PARTS):
            raise BadValueError("expected %d color components, got %d"
                                % (3 * len(PARTS), len(self.colors)))
        return True


class PoseSpec(StaticSpec):
    root_x = FloatProperty(default=0.)
    root_y = FloatProperty(default=0.)
    root_rotation = FloatProperty(default=0., validators=in_range(-math.pi, math.pi))
    joint_angles = ListProperty(float, validators=each_in_range(-math.pi, math.pi))
    limb_depth_order = ListProperty(int)

    @property
    def root_position(self):
        return (self.root_x, self.root_y)

    def angle_array(self):
        return np.asarray(self.joint_angles, dtype=np.float64)

    def validate(self, required=True):
        super(PoseSpec, self).validate(required=required)
        from ..syndata.skeleton import ANGLE_NAMES, PARTS
        if len(self.joint_angles) != len(ANGLE_NAMES):
            raise BadValueError("expected %d joint angles, got %d"
                                % (len(ANGLE_NAMES), len(self.joint_angles)))
        if sorted(self.limb_depth_order) != list(range(len(PARTS))):
            raise BadValueError("limb_depth_order is not a permutation of "
                                "the %d drawable parts" % len(PARTS))
        return True


class ExpressionSpec(StaticSpec):
    eye_open_left = FloatProperty(default=1., validators=in_range(0., 1.))
    eye_open_right = FloatProperty(default=1., validators=in_range(0., 1.))
    mouth_open = FloatProperty(default=0., validators=in_range(0., 1.))
    brow_raise = FloatProperty(default=0., validators=in_range(0., 1.))

    def as_array(self):
        return np.array([self.eye_open_left, self.eye_open_right,
                         self.mouth_open, self.brow_raise], dtype=np.float32)

    @classmethod
    def from_array(cls, values):
        values = [min(1., max(0., float(v))) for v in values]
        return cls(eye_open_left=values[0], eye_open_right=values[1],
                   mouth_open=values[2], brow_raise=values[3])
