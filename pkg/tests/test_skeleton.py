# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import math
import unittest

import numpy as np

from motionkit.exceptions import BadValueError
from motionkit.schema import PoseSpec
from motionkit.syndata.skeleton import ANGLE_INDEX, ANGLE_NAMES, BONES, \
    BONE_NAMES, HAND_BONES, KEYPOINTS, PARTS, bone_angles, bone_lengths, \
    chain_positions, forward_kinematics, keypoint_root, skeleton_size, \
    solve_nodes

from .helpers import rest_character, rest_pose


class ChainTestCase(unittest.TestCase):

    def testStraightChain(self):
        ends, cumulative = chain_positions((0., 0.), 0., [-1, 0], [1., 1.], [0., 0.])
        self.assertTrue(np.allclose(ends, [[1., 0.], [2., 0.]]))
        self.assertTrue(np.allclose(cumulative, [0., 0.]))

    def testBentChain(self):
        ends, _ = chain_positions((0., 0.), 0., [-1, 0], [1., 1.],
                                  [math.pi / 2, 0.])
        self.assertTrue(np.allclose(ends[-1], [0., 2.]))

    def testRootRotation(self):
        ends, _ = chain_positions((1., 1.), math.pi, [-1], [2.], [0.])
        self.assertTrue(np.allclose(ends[0], [-1., 1.]))


class ForwardKinematicsTestCase(unittest.TestCase):

    def testTables(self):
        self.assertEqual(len(KEYPOINTS), 28)
        self.assertEqual(len(PARTS), 20)
        self.assertEqual(len(ANGLE_NAMES), 26)
        self.assertEqual(len(BONES), 30)

    def testHandBones(self):
        names = sorted(BONE_NAMES[i] for i in HAND_BONES)
        self.assertEqual(len(names), 14)
        for side in ("l", "r"):
            self.assertIn("%s_palm" % side, names)
            for f in range(3):
                self.assertIn("%s_f%d_a" % (side, f), names)
                self.assertIn("%s_f%d_b" % (side, f), names)
        self.assertNotIn("spine", names)
        self.assertNotIn("l_forearm", names)

    def testHandScaleOnlyScalesHandBones(self):
        base = bone_lengths(rest_character(), 64)
        big = bone_lengths(rest_character(hand_scale=1.5), 64)
        for i in range(len(BONES)):
            factor = 1.5 if i in HAND_BONES else 1.
            self.assertAlmostEqual(big[i], factor * base[i])

    def testRestPoseLayout(self):
        kp = forward_kinematics(rest_character(), rest_pose(), 64)
        self.assertEqual(kp.shape, (28, 2))
        index = dict((name, i) for i, name in enumerate(KEYPOINTS))
        # y grows downward: the head is above the neck, ankles below knees
        self.assertLess(kp[index["head"], 1], kp[index["neck"], 1])
        self.assertGreater(kp[index["l_ankle"], 1], kp[index["l_knee"], 1])
        self.assertGreater(kp[index["l_wrist"], 1], kp[index["l_elbow"], 1])
        self.assertTrue(np.allclose(keypoint_root(kp), rest_pose().root_position))

    def testLimbScalesScaleAboutRoot(self):
        pose = rest_pose()
        root = np.asarray(pose.root_position)
        small = forward_kinematics(rest_character(0.7), pose, 64)
        large = forward_kinematics(rest_character(1.4), pose, 64)
        self.assertTrue(np.allclose(large - root, 2. * (small - root)))
        self.assertAlmostEqual(skeleton_size(large), 2. * skeleton_size(small))

    def testCanvasScaling(self):
        pose64, pose32 = rest_pose(64), rest_pose(32)
        kp64 = forward_kinematics(rest_character(), pose64, 64)
        kp32 = forward_kinematics(rest_character(), pose32, 32)
        self.assertTrue(np.allclose(kp64, 2. * kp32))

    def testAnglesDoNotDependOnIdentity(self):
        angles = np.zeros(len(ANGLE_NAMES))
        angles[ANGLE_INDEX["l_elbow"]] = 0.8
        angles[ANGLE_INDEX["r_knee"]] = -0.4
        pose = rest_pose(angles=angles)
        a = bone_angles(solve_nodes(rest_character(0.8, hand_scale=0.7), pose, 64))
        b = bone_angles(solve_nodes(rest_character(1.3, hand_scale=1.9), pose, 64))
        self.assertTrue(np.allclose(a, b))

    def testJointAngleMovesChild(self):
        angles = np.zeros(len(ANGLE_NAMES))
        angles[ANGLE_INDEX["l_elbow"]] = math.pi / 2
        bent = forward_kinematics(rest_character(), rest_pose(angles=angles), 64)
        straight = forward_kinematics(rest_character(), rest_pose(), 64)
        elbow, wrist = KEYPOINTS.index("l_elbow"), KEYPOINTS.index("l_wrist")
        self.assertTrue(np.allclose(bent[elbow], straight[elbow]))
        self.assertFalse(np.allclose(bent[wrist], straight[wrist]))
        # the forearm keeps its length
        self.assertAlmostEqual(np.linalg.norm(bent[wrist] - bent[elbow]),
                               np.linalg.norm(straight[wrist] - straight[elbow]))


class SpecValidationTestCase(unittest.TestCase):

    def testPoseNeedsEveryAngle(self):
        pose = PoseSpec(joint_angles=[0.] * 3,
                        limb_depth_order=list(range(len(PARTS))))
        self.assertRaises(BadValueError, pose.validate)

    def testPoseDepthOrderIsPermutation(self):
        pose = PoseSpec(joint_angles=[0.] * len(ANGLE_NAMES),
                        limb_depth_order=[0] * len(PARTS))
        self.assertRaises(BadValueError, pose.validate)

    def testAngleRange(self):
        self.assertRaises(BadValueError, PoseSpec, joint_angles=[4.])

    def testCharacterValidates(self):
        self.assertTrue(rest_character().validate())
        self.assertRaises(BadValueError, rest_character, 2.5)
