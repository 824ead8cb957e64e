# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import unittest

import numpy as np
import torch

from motionkit.exceptions import UnknownVariantError
from motionkit.nn.model import MotionModel
from motionkit.nn.retarget import SkeletonGuider
from motionkit.rng import rng_fork
from motionkit.variants import NoLocalVariant, Variant, align_skeleton, \
    load_variant, load_variant_class, skeleton_maps
from motionkit.syndata.skeleton import keypoint_root, skeleton_size

from .helpers import tiny_config


def motion_inputs(config, b, frames):
    d = config.latent_dim
    vectors = dict((name, torch.randn(b * frames, d))
                   for name in ('z', 'z_f', 'z_lh', 'z_rh'))
    return torch.rand(b, 3, config.image_size, config.image_size), vectors


class MotionModelTestCase(unittest.TestCase):

    def setUp(self):
        torch.manual_seed(0)
        self.config = tiny_config()
        self.model = MotionModel(self.config)

    def testParameterGroups(self):
        motion, generator = self.model.parameter_groups()
        self.assertEqual(len(motion) + len(generator),
                         len(list(self.model.parameters())))
        ids = set(id(p) for p in motion)
        self.assertFalse(any(id(p) in ids for p in generator))
        prefixes = set(".".join(name.split(".")[:2])
                       for name, _ in self.model.named_parameters())
        for group in ('enc.global', 'enc.face', 'enc.hand', 'head.hm', 'head.nrm',
                      'head.expr'):
            self.assertIn(group, prefixes)
        self.assertTrue(any(p.startswith('ret.') for p in prefixes))
        self.assertTrue(any(p.startswith('gen.') for p in prefixes))

    def testCondition(self):
        reference, vectors = motion_inputs(self.config, 2, 3)
        cond = self.model.condition(reference, vectors, 3)
        c = self.config
        self.assertEqual(cond.ref_latent.shape, (2, c.latent_channels, c.latent_size,
                                                 c.latent_size))
        self.assertEqual(cond.guidance.shape, (2, 3, c.guidance_channels,
                                               c.latent_size, c.latent_size))
        self.assertEqual(cond.z_f.shape, (2, 3, c.latent_dim))
        self.assertEqual(cond.features.shape, (6, c.guidance_channels, c.grid_size,
                                               c.grid_size))
        part = cond.frames(1, 3)
        self.assertTrue(torch.equal(part.z_f, cond.z_f[:, 1:3]))
        self.assertIsNone(part.features)

    def testMeanVectorsInEvalMode(self):
        latents = self.model.encode(torch.rand(2, 3, 32, 32),
                                    torch.full((2, 3, 3), 16.))
        vectors = self.model.motion_vectors(latents)
        self.assertTrue(torch.equal(vectors['z'], latents.z.mu))
        sampled = self.model.motion_vectors(latents, rng_fork(0, "v"), train_mode=True)
        self.assertFalse(torch.equal(sampled['z'], latents.z.mu))

    def testNoLocalZeroesLocalTokens(self):
        model = MotionModel(tiny_config(variant="no_local"))
        latents = model.encode(torch.rand(2, 3, 32, 32), torch.full((2, 3, 3), 16.))
        vectors = model.motion_vectors(latents)
        for name in ('z_f', 'z_lh', 'z_rh'):
            self.assertEqual(float(vectors[name].abs().max()), 0.)
        self.assertTrue(torch.equal(vectors['z'], latents.z.mu))

    def testSkeletonGuidance(self):
        config = tiny_config(variant="skeleton_align")
        model = MotionModel(config)
        self.assertIsInstance(model.ret, SkeletonGuider)
        reference, vectors = motion_inputs(config, 1, 2)
        maps = torch.rand(1, 2, config.joints, config.latent_size, config.latent_size)
        cond = model.condition(reference, vectors, 2, maps)
        self.assertIsNone(cond.features)
        self.assertEqual(cond.guidance.shape, (1, 2, config.guidance_channels,
                                               config.latent_size, config.latent_size))


class VariantTestCase(unittest.TestCase):

    def testLoad(self):
        self.assertIsInstance(load_variant("no_local"), NoLocalVariant)
        self.assertEqual(load_variant(tiny_config()).name, "full")
        self.assertIs(load_variant_class("motionkit.variants.Variant"), Variant)
        self.assertRaises(UnknownVariantError, load_variant, "nothing")
        self.assertRaises(UnknownVariantError, load_variant_class,
                          "motionkit.variants.Nothing")

    def testTrainingConfig(self):
        config = tiny_config()
        self.assertIs(load_variant("full").training_config(config), config)
        no_dual = load_variant("no_dual").training_config(config)
        self.assertEqual((no_dual.lambda_hm, no_dual.lambda_n), (0., 0.))
        self.assertEqual(no_dual.lambda_f, config.lambda_f)
        self.assertEqual(load_variant("no_synth_pairs").training_config(config).mix_ratio, 0.)
        skeleton = load_variant("skeleton_align").training_config(config)
        self.assertEqual(skeleton.lambda_hm, 0.)
        self.assertEqual(skeleton.mix_ratio, config.mix_ratio)

    def testAlignSkeleton(self):
        rng = np.random.RandomState(0)
        reference = rng.uniform(10, 50, size=(28, 2))
        drive = np.stack([reference * 0.5 + 7., reference * 0.5 + 9.])
        aligned = align_skeleton(drive, reference)
        self.assertEqual(aligned.shape, (2, 28, 2))
        self.assertTrue(np.allclose(aligned[0], reference, atol=1e-4))
        # later frames keep their motion relative to the first, rescaled
        self.assertTrue(np.allclose(aligned[1] - aligned[0], 4., atol=1e-4))
        self.assertAlmostEqual(skeleton_size(aligned[0]), skeleton_size(reference),
                               places=3)
        self.assertTrue(np.allclose(keypoint_root(aligned[0]),
                                    keypoint_root(reference), atol=1e-4))

    def testSkeletonMaps(self):
        kp = np.full((3, 28, 2), 16.)
        kp[:, 0] = -100.
        maps = skeleton_maps(kp, 32, 8, 2.)
        self.assertEqual(maps.shape, (3, 28, 8, 8))
        self.assertEqual(float(np.abs(maps[:, 0]).max()), 0.)
        self.assertGreater(float(maps[:, 1].max()), 0.5)
