# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import unittest

import torch

from motionkit.exceptions import ShapeMismatchError
from motionkit.flow import flow_mse, noised
from motionkit.nn.generator import CondFlags, VideoDiT, vae_decode, vae_encode

from .helpers import gradient_error, tiny_config


class VaeTestCase(unittest.TestCase):

    def testExactInverse(self):
        clip = torch.rand(2, 3, 3, 64, 64)
        latent = vae_encode(clip, 4)
        self.assertEqual(latent.shape, (2, 3, 48, 16, 16))
        self.assertTrue(torch.equal(vae_decode(latent, 4), clip))

    def testIndivisibleFrame(self):
        self.assertRaises(ShapeMismatchError, vae_encode, torch.rand(1, 3, 30, 32), 4)


class VideoDiTTestCase(unittest.TestCase):

    def setUp(self):
        torch.manual_seed(0)
        self.config = tiny_config()
        self.dit = VideoDiT(self.config)
        self.inputs = self.make_inputs(2, 3)

    def make_inputs(self, b, t):
        c = self.config
        lat = (c.latent_channels, c.latent_size, c.latent_size)
        return dict(noised=torch.randn((b, t) + lat),
                    ref_latent=torch.rand((b,) + lat),
                    guidance=torch.randn(b, t, c.guidance_channels,
                                         c.latent_size, c.latent_size),
                    z_f=torch.randn(b, t, c.latent_dim))

    def velocity(self, inputs, t=0.5, cond=None):
        return self.dit(inputs['noised'], t, inputs['ref_latent'],
                        inputs['guidance'], inputs['z_f'], cond)

    def randomize(self):
        with torch.no_grad():
            for p in self.dit.parameters():
                p.normal_(std=0.05)

    def testTokenLayout(self):
        tokens = self.dit.tokens(self.inputs['noised'])
        grid = self.config.latent_size // 2
        self.assertEqual(tokens.shape, (2, 3, grid ** 2,
                                        self.config.latent_channels * 4))
        self.assertTrue(torch.equal(self.dit.untokens(tokens), self.inputs['noised']))

    def testZeroVelocityAtInit(self):
        v = self.velocity(self.inputs)
        self.assertEqual(v.shape, self.inputs['noised'].shape)
        self.assertEqual(float(v.abs().max()), 0.)

    def testShapeChecks(self):
        bad = dict(self.inputs, z_f=torch.randn(2, 3, 5))
        self.assertRaises(ShapeMismatchError, self.velocity, bad)
        bad = dict(self.inputs, guidance=self.inputs['guidance'][:, :2])
        self.assertRaises(ShapeMismatchError, self.velocity, bad)
        too_long = self.make_inputs(1, self.dit.max_frames + 1)
        self.assertRaises(ShapeMismatchError, self.velocity, too_long)

    def testDroppedConditionsAreIgnored(self):
        self.randomize()
        other = self.make_inputs(2, 3)
        other['noised'] = self.inputs['noised']
        dropped = CondFlags.full(2, False)
        a = self.velocity(self.inputs, cond=dropped)
        b = self.velocity(other, cond=dropped)
        self.assertTrue(torch.allclose(a, b, atol=1e-6))
        self.assertFalse(torch.allclose(self.velocity(self.inputs),
                                        self.velocity(other), atol=1e-6))

    def testPerSampleFlags(self):
        self.randomize()
        other = self.make_inputs(2, 3)
        other['noised'] = self.inputs['noised']
        cond = CondFlags.joint([True, False])
        a = self.velocity(self.inputs, cond=cond)
        b = self.velocity(other, cond=cond)
        self.assertTrue(torch.allclose(a[1], b[1], atol=1e-6))
        self.assertFalse(torch.allclose(a[0], b[0], atol=1e-6))

    def testBatchTimesteps(self):
        self.randomize()
        v = self.velocity(self.inputs, t=torch.tensor([0.2, 0.7]))
        v0 = self.velocity(dict((k, x[:1]) for k, x in self.inputs.items()), t=0.2)
        self.assertTrue(torch.allclose(v[:1], v0, atol=1e-5))

    def testGuidanceFillsChannelsAfterLatent(self):
        c = self.config
        seen = []
        self.dit.embed.register_forward_hook(
            lambda module, inputs, output: seen.append(inputs[0]))
        inputs = self.make_inputs(1, 2)
        inputs['noised'].zero_()
        inputs['ref_latent'].zero_()
        inputs['guidance'].zero_()
        inputs['guidance'][:, :, 3] = 1.
        self.velocity(inputs)
        # (B, T + 1, C_v + C_g, L, L) with the reference in slot 0
        x = self.dit.untokens(seen[0])
        self.assertEqual(x.shape[2], c.latent_channels + c.guidance_channels)
        channel = c.latent_channels + 3
        self.assertTrue(torch.equal(x[:, 1:, channel], torch.ones_like(x[:, 1:, channel])))
        self.assertEqual(float(x[:, 0].abs().max()), 0.)
        x[:, 1:, channel] = 0.
        self.assertEqual(float(x.abs().max()), 0.)

    def testGradientMatchesFiniteDifferences(self):
        torch.manual_seed(1)
        config = tiny_config(dit_width=16, dit_depth=1, dit_heads=2)
        dit = VideoDiT(config).double()
        with torch.no_grad():
            for p in dit.parameters():
                p.normal_(std=0.05)
        lat = (config.latent_channels, config.latent_size, config.latent_size)
        x1 = torch.randn((1, 2) + lat, dtype=torch.float64)
        eps = torch.randn_like(x1)
        ref = torch.rand((1,) + lat, dtype=torch.float64)
        guidance = torch.randn(1, 2, config.guidance_channels, config.latent_size,
                               config.latent_size, dtype=torch.float64)
        z_f = torch.randn(1, 2, config.latent_dim, dtype=torch.float64)

        def loss():
            v = dit(noised(x1, eps, 0.3), 0.3, ref, guidance, z_f)
            return flow_mse(v, x1, eps)

        self.assertLess(gradient_error(loss, dit), 1e-5)
