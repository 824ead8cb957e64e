# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import unittest

import numpy as np
import torch

from motionkit.inference import chunk_schedule, frames_to_numpy, \
    guided_velocity, reenact, sample_chunk, sample_video, to_tensor
from motionkit.nn.generator import CondFlags
from motionkit.nn.model import MotionModel
from motionkit.rng import rng_fork

from .helpers import tiny_config
from .test_model import motion_inputs


class ChunkScheduleTestCase(unittest.TestCase):

    def testSingleChunk(self):
        self.assertEqual(chunk_schedule(5, 8, 2), [(0, 5, 0)])
        self.assertEqual(chunk_schedule(8, 8, 2), [(0, 8, 0)])

    def testLastChunkAlignedToEnd(self):
        self.assertEqual(chunk_schedule(12, 8, 2), [(0, 8, 0), (4, 12, 4)])
        self.assertEqual(chunk_schedule(20, 8, 2),
                         [(0, 8, 0), (6, 14, 2), (12, 20, 2)])

    def testCoverage(self):
        for total in range(1, 40):
            schedule = chunk_schedule(total, 6, 2)
            covered = set()
            for i, (start, end, clamp) in enumerate(schedule):
                self.assertLessEqual(end - start, 6)
                if i:
                    self.assertGreaterEqual(clamp, 2)
                    self.assertEqual(set(range(start, start + clamp)) - covered, set())
                covered.update(range(start, end))
            self.assertEqual(covered, set(range(total)))

    def testBadArguments(self):
        self.assertRaises(ValueError, chunk_schedule, 0, 8, 2)
        self.assertRaises(ValueError, chunk_schedule, 10, 4, 4)


class SamplingTestCase(unittest.TestCase):

    def setUp(self):
        torch.manual_seed(0)
        self.config = tiny_config()
        self.model = MotionModel(self.config).eval()
        reference, vectors = motion_inputs(self.config, 1, 4)
        with torch.no_grad():
            self.cond = self.model.condition(reference, vectors, 4)

    def randomize(self):
        with torch.no_grad():
            for p in self.model.gen.parameters():
                p.normal_(std=0.05)

    def testTensorLayout(self):
        frames = np.random.RandomState(0).rand(2, 8, 8, 3).astype(np.float32)
        t = to_tensor(frames)
        self.assertEqual(t.shape, (2, 3, 8, 8))
        self.assertTrue(np.array_equal(frames_to_numpy(t), frames))

    def testChunkShapeAndRange(self):
        frames = sample_chunk(self.model, self.cond, 2, 2., rng_fork(0, "s"))
        self.assertEqual(frames.shape, (1, 4, 3, 32, 32))
        self.assertGreaterEqual(float(frames.min()), 0.)
        self.assertLessEqual(float(frames.max()), 1.)

    def testDeterministic(self):
        self.randomize()
        a = sample_chunk(self.model, self.cond, 2, 2., rng_fork(0, "s"))
        b = sample_chunk(self.model, self.cond, 2, 2., rng_fork(0, "s"))
        self.assertTrue(torch.equal(a, b))

    def testClampedPrefixIsExact(self):
        self.randomize()
        prefix = torch.rand(1, 2, 3, 32, 32)
        frames = sample_chunk(self.model, self.cond, 3, 2., rng_fork(0, "s"), prefix)
        self.assertTrue(torch.equal(frames[:, :2], prefix))

    def testGuidance(self):
        self.randomize()
        x = torch.randn(1, 4, self.config.latent_channels, 8, 8)
        with torch.no_grad():
            v_c = self.model.velocity(x, 0.3, self.cond, CondFlags.full(1))
            v_u = self.model.velocity(x, 0.3, self.cond, CondFlags.full(1, False))
            plain = guided_velocity(self.model, self.cond, 1.)(x, 0.3)
            guided = guided_velocity(self.model, self.cond, 3.)(x, 0.3)
        self.assertTrue(torch.equal(plain, v_c))
        self.assertTrue(torch.allclose(guided, v_u + 3. * (v_c - v_u), atol=1e-5))

    def testVideo(self):
        reference, vectors = motion_inputs(self.config, 1, 6)
        with torch.no_grad():
            cond = self.model.condition(reference, vectors, 6)
        video = sample_video(self.model, cond, 6, 4, 1, 2, 2., rng_fork(0, "v"))
        self.assertEqual(video.shape, (1, 6, 3, 32, 32))

    def testReenact(self):
        driving = torch.rand(5, 3, 32, 32)
        boxes = torch.tensor([[16., 8., 10.], [10., 20., 8.], [22., 20., 8.]])
        video, latents = reenact(self.model, torch.rand(3, 32, 32), driving,
                                 boxes.expand(5, 3, 3), rng_fork(0, "r"), steps=1)
        self.assertEqual(video.shape, (5, 3, 32, 32))
        self.assertEqual(latents.means().shape, (5, 4 * self.config.latent_dim))
