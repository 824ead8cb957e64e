# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import unittest

import numpy as np

from motionkit.schema import ExpressionSpec
from motionkit.syndata.render import capsule_normals, front_hand, \
    keypoint_heatmaps, keypoint_visibility, quantize, render
from motionkit.syndata.skeleton import BACKGROUND, HAND_PARTS, HEAD_PART, \
    NODE_INDEX, forward_kinematics

from .helpers import rest_character, rest_pose


class HeatmapTestCase(unittest.TestCase):

    def testPeakAtKeypoint(self):
        maps = keypoint_heatmaps(np.array([[10., 20.], [3., 4.]]),
                                 np.array([True, False]), 32, 2.)
        self.assertEqual(maps.shape, (2, 32, 32))
        self.assertEqual(maps.dtype, np.float32)
        self.assertEqual(maps[0, 20, 10], 1.)
        self.assertEqual(np.unravel_index(maps[0].argmax(), (32, 32)), (20, 10))
        self.assertEqual(maps[1].max(), 0.)

    def testVisibility(self):
        kp = np.array([[0., 0.], [-0.6, 3.], [31.4, 31.4], [31.5, 2.]])
        self.assertEqual(keypoint_visibility(kp, 32).tolist(),
                         [True, False, True, False])


class CapsuleNormalTestCase(unittest.TestCase):

    def testAxisAndRim(self):
        points = np.array([[0., 0.], [2., 0.], [0., -1.]])
        closest = np.zeros((3, 2))
        normals = capsule_normals(points, closest, 2.)
        self.assertTrue(np.allclose(normals[0], [0., 0., 1.]))
        self.assertTrue(np.allclose(normals[1], [1., 0., 0.]))
        self.assertTrue(np.allclose(np.linalg.norm(normals, axis=1), 1.))
        self.assertTrue(np.allclose(capsule_normals(points, closest, 2., -1.)[0],
                                    [0., 0., -1.]))


class RenderTestCase(unittest.TestCase):

    def setUp(self):
        self.character = rest_character()
        self.pose = rest_pose()
        self.sample = render(self.character, self.pose, ExpressionSpec(), 64)

    def testFrameIsQuantized(self):
        frame = self.sample.frame
        self.assertEqual(frame.shape, (64, 64, 3))
        self.assertTrue(np.array_equal(frame, quantize(frame)))
        self.assertTrue(np.allclose(frame[0, 0], quantize(BACKGROUND)))

    def testKeypointsMatchForwardKinematics(self):
        self.assertTrue(np.allclose(self.sample.keypoints,
                                    forward_kinematics(self.character, self.pose, 64),
                                    atol=1e-4))
        self.assertTrue(self.sample.visible.all())
        self.assertEqual(self.sample.heatmaps.shape, (28, 64, 64))

    def testHeadOwnsHeadNode(self):
        x, y = np.round(self.sample.nodes[NODE_INDEX["head"]]).astype(int)
        self.assertEqual(self.sample.owner[y, x], HEAD_PART)
        self.assertTrue(np.allclose(self.sample.face_box[:2],
                                    self.sample.nodes[NODE_INDEX["head"]]))

    def testHandNormals(self):
        normals = self.sample.hand_normals
        mask = self.sample.hand_mask > 0.5
        self.assertTrue(mask.any())
        self.assertTrue(np.allclose(np.linalg.norm(normals[mask], axis=-1), 1.,
                                    atol=1e-5))
        self.assertEqual(np.abs(normals[~mask]).max(), 0.)

    def testFrontHandFacesCamera(self):
        front = front_hand(self.pose)
        back = "l" if front == "r" else "r"
        z = self.sample.hand_normals[..., 2]
        owner = self.sample.owner
        self.assertTrue((z[np.isin(owner, HAND_PARTS[front])] >= 0).all())
        self.assertTrue((z[np.isin(owner, HAND_PARTS[back])] <= 0).all())

    def testDeterministic(self):
        again = render(self.character, self.pose, ExpressionSpec(), 64)
        self.assertTrue(np.array_equal(again.frame, self.sample.frame))

    def testExpressionChangesOnlyTheFace(self):
        other = render(self.character, self.pose,
                       ExpressionSpec(mouth_open=1., eye_open_left=0.), 64)
        changed = np.abs(other.frame - self.sample.frame).max(axis=-1) > 0
        self.assertTrue(changed.any())
        self.assertTrue((self.sample.owner[changed] == HEAD_PART).all())
