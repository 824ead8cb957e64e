# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import os
import unittest

from motionkit.utils import load_class, read_json, sign_content, write_json
from motionkit.variants import NoDualVariant

from .helpers import TempDirMixin


class LoadClassTestCase(unittest.TestCase):

    def testResolvesDottedUri(self):
        self.assertIs(load_class("motionkit.variants.NoDualVariant"), NoDualVariant)

    def testUnresolvable(self):
        self.assertRaises(ValueError, load_class, "nope")
        self.assertRaises(ImportError, load_class, "motionkit.nothere.Klass")
        self.assertRaises(AttributeError, load_class, "motionkit.variants.Nothing")


class JsonTestCase(TempDirMixin, unittest.TestCase):

    def testWriteRead(self):
        path = os.path.join(self.tmp, "a.json")
        write_json(path, {"b": 1, "a": [1, 2]})
        self.assertEqual(read_json(path), {"a": [1, 2], "b": 1})

    def testMissing(self):
        path = os.path.join(self.tmp, "missing.json")
        self.assertEqual(read_json(path, missing_ok=True), {})
        self.assertRaises(IOError, read_json, path)

    def testSignatureIgnoresKeyOrder(self):
        self.assertEqual(sign_content({"a": 1, "b": 2}), sign_content({"b": 2, "a": 1}))
        self.assertNotEqual(sign_content({"a": 1}), sign_content({"a": 2}))
