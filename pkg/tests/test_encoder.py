# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import math
import unittest

import torch

from motionkit.exceptions import ShapeMismatchError
from motionkit.nn.encoder import GaussianLatent, MotionEncoder, ViTEncoder, \
    kl_loss, sample_latent
from motionkit.nn.layers import crop_regions, hflip, patchify
from motionkit.rng import rng_fork

from .helpers import tiny_config


class KlTestCase(unittest.TestCase):

    def kl(self, mu, logvar):
        return float(kl_loss(GaussianLatent(torch.tensor([[mu]]),
                                            torch.tensor([[logvar]]))))

    def testClosedForm(self):
        self.assertAlmostEqual(self.kl(0., 0.), 0.)
        self.assertAlmostEqual(self.kl(1., 0.), 0.5, places=6)
        self.assertAlmostEqual(self.kl(0., math.log(2.)), 0.1534, places=4)

    def testSumsOverLatentAxis(self):
        g = GaussianLatent(torch.ones(2, 3), torch.zeros(2, 3))
        self.assertTrue(torch.allclose(kl_loss(g), torch.full((2,), 1.5)))


class SampleLatentTestCase(unittest.TestCase):

    def setUp(self):
        self.g = GaussianLatent(torch.arange(4.).view(1, 4), torch.zeros(1, 4))

    def testEvalModeIsMean(self):
        self.assertTrue(torch.equal(sample_latent(self.g, train_mode=False), self.g.mu))

    def testTrainModeIsSeeded(self):
        a = sample_latent(self.g, rng_fork(0, "z"))
        b = sample_latent(self.g, rng_fork(0, "z"))
        self.assertTrue(torch.equal(a, b))
        self.assertFalse(torch.equal(a, self.g.mu))

    def testZeroVarianceLimit(self):
        g = GaussianLatent(self.g.mu, torch.full((1, 4), -10.))
        z = sample_latent(g, rng_fork(0, "z"))
        self.assertTrue(torch.allclose(z, g.mu, atol=0.05))


class LayersTestCase(unittest.TestCase):

    def testPatchifyOrder(self):
        images = torch.arange(2 * 4 * 4.).view(1, 2, 4, 4)
        patches = patchify(images, 2)
        self.assertEqual(patches.shape, (1, 4, 8))
        # first patch, first pixel: both channels
        self.assertEqual(patches[0, 0, :2].tolist(), [0., 16.])
        self.assertEqual(patches[0, 1, :2].tolist(), [2., 18.])

    def testHflip(self):
        x = torch.arange(3.).view(1, 1, 1, 3)
        self.assertEqual(hflip(x).flatten().tolist(), [2., 1., 0.])

    def testCropOfRamp(self):
        ramp = torch.arange(32.).view(1, 1, 1, 32).expand(1, 3, 32, 32)
        crop = crop_regions(ramp, torch.tensor([[10., 16., 8.]]), 4)
        self.assertEqual(crop.shape, (1, 3, 4, 4))
        self.assertTrue(torch.allclose(crop[0, 0, 0], torch.tensor([7., 9., 11., 13.])))

    def testCropOutsideIsZero(self):
        images = torch.ones(1, 3, 32, 32)
        crop = crop_regions(images, torch.tensor([[-40., -40., 8.]]), 4)
        self.assertEqual(float(crop.abs().max()), 0.)


class MotionEncoderTestCase(unittest.TestCase):

    def setUp(self):
        torch.manual_seed(0)
        self.config = tiny_config()
        self.encoder = MotionEncoder(self.config)
        self.frames = torch.rand(3, 3, 32, 32)
        self.boxes = torch.tensor([[16., 8., 10.], [10., 20., 8.],
                                   [22., 20., 8.]]).expand(3, 3, 3)

    def testShapes(self):
        latents = self.encoder(self.frames, self.boxes)
        for g in latents:
            self.assertEqual(g.mu.shape, (3, 8))
            self.assertEqual(g.logvar.shape, (3, 8))
        self.assertEqual(latents.means().shape, (3, 32))
        self.assertEqual(latents.kl().shape, (3,))

    def testParameterNames(self):
        names = [n.split(".")[0] for n, _ in self.encoder.named_parameters()]
        self.assertEqual(sorted(set(names)), ["face", "global", "hand"])

    def testHandsShareOneMirroredEncoder(self):
        crops = torch.rand(2, 3, 16, 16)
        z_lh, z_rh = self.encoder.encode_hands(crops, hflip(crops))
        self.assertTrue(torch.allclose(z_lh.mu, z_rh.mu, atol=1e-6))

    def testWrongSize(self):
        self.assertRaises(ShapeMismatchError, self.encoder.encode_global,
                          torch.rand(1, 3, 16, 16))

    def testGradientMatchesFiniteDifferences(self):
        torch.manual_seed(1)
        encoder = ViTEncoder(8, 4, 8, 1, 2, 2).double()
        images = torch.rand(1, 3, 8, 8, dtype=torch.float64, requires_grad=True)
        self.assertTrue(torch.autograd.gradcheck(lambda x: encoder(x).mu, (images,)))
