# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import json
import logging
import os
import re
from io import StringIO
from unittest import TestCase

import motionkit.logging as mod

from .helpers import TempDirMixin

STEP = dict(step=3, l_flow=0.5, l_kl=0.25, l_hm=0.125, l_nrm=0., l_expr=1.,
            total=1.875, wallclock=2.5)


class TestLogging(TempDirMixin, TestCase):

    def setUp(self):
        super(TestLogging, self).setUp()
        self.log = CaptureLogOutput(mod.training_logger.name)
        self.addCleanup(self.log.close)

    def assertRegex(self, text, regex):
        assert re.search(regex, text), "%r not matched by %r" % (text, regex)

    def test_step_message(self):
        mod.log_step(STEP)
        self.assertRegex(str(self.log),
                         r"^step 3 total 1.87500 flow 0.50000 took 2.50s")

    def test_extra_format(self):
        fmt = "%(step)s %(l_kl)s %(message)s"
        with CaptureLogOutput(mod.training_logger.name, fmt=fmt) as log:
            mod.log_step(STEP)
            self.assertRegex(str(log), r"^3 0.25 step 3 ")

    def test_no_step_log_when_not_installed(self):
        path = os.path.join(self.tmp, "steps.jsonl")
        mod.log_step(STEP)
        self.assertFalse(os.path.exists(path))

    def test_install_step_log(self):
        path = os.path.join(self.tmp, "steps.jsonl")
        uninstall = mod.install_step_log(path)
        mod.log_step(STEP)
        mod.log_step(dict(STEP, step=4))
        uninstall()
        mod.log_step(dict(STEP, step=5))
        with open(path) as f:
            records = [json.loads(line) for line in f]
        self.assertEqual([r["step"] for r in records], [3, 4])
        self.assertEqual(records[0], STEP)

    def test_step_log_restores_level(self):
        logger = logging.getLogger("motionkit.test_step_log")
        logger.setLevel(logging.WARNING)
        uninstall = mod.install_step_log(os.path.join(self.tmp, "s.jsonl"), logger)
        self.assertEqual(logger.level, logging.INFO)
        uninstall()
        self.assertEqual(logger.level, logging.WARNING)

    def test_formatter_passes_plain_records(self):
        record = logging.LogRecord("x", logging.INFO, __file__, 1, "plain %s",
                                   ("text",), None)
        self.assertEqual(mod.StepRecordFormatter().format(record), "plain text")

    def test_stopwatch(self):
        watch = mod.Stopwatch()
        first = watch.restart()
        self.assertGreaterEqual(first, 0.)
        self.assertGreaterEqual(watch.elapsed(), 0.)


class CaptureLogOutput(object):
    """Capture logging output

    Logging output for the given logger is collected immediately upon
    instantiation until closed.
    """

    def __init__(self, logger_name, level=logging.DEBUG, fmt="%(message)s"):
        self.logger = logging.getLogger(logger_name)
        self.original_level = self.logger.level
        self.original_handlers = list(self.logger.handlers)
        for handler in self.original_handlers:
            self.logger.removeHandler(handler)
        self.output = StringIO()
        stream = logging.StreamHandler(self.output)
        stream.setFormatter(logging.Formatter(fmt))
        self.logger.addHandler(stream)
        self.logger.setLevel(level)

    def __str__(self):
        return self.output.getvalue()

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()

    def close(self):
        self.logger.setLevel(self.original_level)
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
        for handler in self.original_handlers:
            self.logger.addHandler(handler)
