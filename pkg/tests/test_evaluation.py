# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import unittest

import numpy as np
import torch

from motionkit.evaluation.ablation import HANDS_CROSSED, ablation_eval_set, \
    config_diff, disentanglement_probes, evaluate_model, held_out_samples, \
    run_ablations
from motionkit.nn.model import MotionModel
from motionkit.syndata.samples import CROSS_IDENTITY, SAME_IDENTITY

from .helpers import tiny_config
from .test_training import tiny_dataset


class HeldOutTestCase(unittest.TestCase):

    def testFixedPerConfig(self):
        config = tiny_config(clip_len=2)
        a = held_out_samples(config, 2, CROSS_IDENTITY)
        b = held_out_samples(config.replace(seed=99), 2, CROSS_IDENTITY)
        self.assertEqual([s.sample_id for s in a], [s.sample_id for s in b])
        for x, y in zip(a, b):
            self.assertTrue(np.array_equal(x.driving, y.driving))
        other = held_out_samples(config.replace(eval_seed=7), 2, CROSS_IDENTITY)
        self.assertFalse(np.array_equal(a[0].driving, other[0].driving))

    def testAblationSet(self):
        samples = ablation_eval_set(tiny_config(clip_len=2, eval_samples=4))
        self.assertEqual(len(samples), 5)
        self.assertEqual(set(s.mode for s in samples), set([CROSS_IDENTITY]))
        self.assertEqual(samples[-1].gesture, HANDS_CROSSED)

    def testConfigDiff(self):
        config = tiny_config()
        self.assertEqual(config_diff(config, config.replace()), [])
        self.assertEqual(config_diff(config, config.replace(variant="no_dual",
                                                            seed=3)),
                         ["seed", "variant"])


class EvaluateTestCase(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        torch.manual_seed(0)
        cls.config = tiny_config(clip_len=3)
        cls.model = MotionModel(cls.config)
        cls.samples = (held_out_samples(cls.config, 1, SAME_IDENTITY) +
                       held_out_samples(cls.config, 1, CROSS_IDENTITY) +
                       held_out_samples(cls.config, 1, CROSS_IDENTITY,
                                        gesture=HANDS_CROSSED))

    def testReport(self):
        report = evaluate_model(self.model, self.samples, steps=1)
        self.assertEqual(report.variant, "full")
        self.assertEqual(report.config_hash, self.config.hash())
        self.assertEqual(len(report.ssim), 1)
        self.assertEqual(len(report.psnr) + report.psnr_infinite, 1)
        self.assertEqual(report.counts["ssim"], 1)
        self.assertIn("ssim", report.means)
        self.assertTrue(report.validate())

    def testDeterministic(self):
        a = evaluate_model(self.model, self.samples[:1], steps=1)
        b = evaluate_model(self.model, self.samples[:1], steps=1)
        self.assertEqual(a.to_json(), b.to_json())

    def testProbes(self):
        probes = disentanglement_probes(self.model, self.samples)
        self.assertEqual(sorted(probes), ["identity_r2", "pose_r2"])
        for value in probes.values():
            self.assertTrue(np.isfinite(value))


class AblationTestCase(unittest.TestCase):

    def testVariantsShareEverythingElse(self):
        config = tiny_config(clip_len=2, eval_samples=1, sample_steps=1)
        reports = run_ablations(config, tiny_dataset(config),
                                variants=("full", "skeleton_align"), steps=1)
        self.assertEqual(sorted(reports), ["full", "skeleton_align"])
        self.assertEqual(reports["skeleton_align"].variant, "skeleton_align")
        self.assertNotEqual(reports["full"].config_hash,
                            reports["skeleton_align"].config_hash)
        for report in reports.values():
            self.assertTrue(report.validate())
