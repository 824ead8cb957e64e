# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import os
import unittest

import numpy as np

from motionkit.exceptions import DatasetError
from motionkit.rng import rng_fork
from motionkit.syndata.dataset import InMemoryDataset, ProceduralDataset, \
    open_dataset, read_dataset, read_png, write_dataset, write_png
from motionkit.syndata.samples import CROSS_IDENTITY, SAME_IDENTITY, \
    make_training_sample

from .helpers import TempDirMixin, tiny_config


class DatasetTestCase(TempDirMixin, unittest.TestCase):

    def setUp(self):
        super(DatasetTestCase, self).setUp()
        self.config = tiny_config(clip_len=2)
        self.samples = [
            make_training_sample(rng_fork(0, "d%d" % i), mode, self.config,
                                 sample_id="s%d" % i)
            for i, mode in enumerate((SAME_IDENTITY, CROSS_IDENTITY))]
        self.root = os.path.join(self.tmp, "data")

    def testPngRoundtrip(self):
        path = os.path.join(self.tmp, "f.png")
        frame = self.samples[0].reference
        write_png(path, frame)
        self.assertTrue(np.array_equal(read_png(path), frame))

    def testRoundtrip(self):
        self.assertEqual(write_dataset(self.samples, self.root), 2)
        loaded = read_dataset(self.root)
        self.assertEqual(len(loaded), 2)
        for before, after in zip(self.samples, loaded):
            self.assertEqual(after.sample_id, before.sample_id)
            self.assertEqual(after.mode, before.mode)
            self.assertTrue(np.array_equal(after.driving, before.driving))
            self.assertTrue(np.array_equal(after.targets, before.targets))
            self.assertTrue(np.array_equal(after.visible, before.visible))
            self.assertTrue(np.allclose(after.keypoints, before.keypoints))
            self.assertTrue(np.allclose(after.hand_normals, before.hand_normals))
            self.assertTrue(np.allclose(after.heatmaps, before.heatmaps, atol=1e-6))
            self.assertEqual(after.reference_character.to_json(),
                             before.reference_character.to_json())

    def testEmptyDirectory(self):
        os.makedirs(self.root)
        self.assertEqual(read_dataset(self.root), [])

    def testMissingDirectory(self):
        self.assertRaises(DatasetError, read_dataset, self.root)

    def testOrphanMetadata(self):
        write_dataset(self.samples, self.root)
        os.remove(os.path.join(self.root, "sample_000001", "drive_001.png"))
        try:
            read_dataset(self.root)
        except DatasetError as e:
            self.assertEqual(e.sample, "sample_000001")
            self.assertIn("drive_001.png", str(e))
        else:
            self.fail("DatasetError not raised")

    def testMissingMeta(self):
        write_dataset(self.samples, self.root)
        os.remove(os.path.join(self.root, "sample_000000", "meta.json"))
        self.assertRaises(DatasetError, open_dataset, self.root)

    def testDrawByMode(self):
        write_dataset(self.samples, self.root)
        for dataset in (InMemoryDataset(self.samples), open_dataset(self.root)):
            drawn = dataset.draw(rng_fork(0, "draw"), CROSS_IDENTITY)
            self.assertEqual(drawn.sample_id, "s1")
        only_same = InMemoryDataset(self.samples[:1])
        self.assertRaises(DatasetError, only_same.draw, rng_fork(0, "draw"),
                          CROSS_IDENTITY)

    def testProceduralDraw(self):
        dataset = ProceduralDataset(self.config)
        a = dataset.draw(rng_fork(0, "p"), SAME_IDENTITY)
        b = dataset.draw(rng_fork(0, "p"), SAME_IDENTITY)
        self.assertEqual(a.mode, SAME_IDENTITY)
        self.assertTrue(np.array_equal(a.driving, b.driving))
