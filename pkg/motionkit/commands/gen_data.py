# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import os

from tqdm import tqdm

from ..rng import rng_fork
from ..syndata.dataset import SAMPLE_DIR, write_sample
from ..syndata.samples import MODES, make_training_sample
from ..utils import ensure_dir
from . import BaseCommand


def generate(config, count, out, progress=True):
    """ write `count` samples to `out`, alternating same- and
    cross-identity """
    ensure_dir(out)
    base = rng_fork(config.seed, "gen-data")
    for i in tqdm(range(count), desc="gen-data", disable=not progress):
        mode = MODES[i % len(MODES)]
        sample = make_training_sample(base.fork("sample:%d" % i), mode, config,
                                      sample_id=SAMPLE_DIR % i)
        write_sample(sample, os.path.join(out, SAMPLE_DIR % i))
    return count


class Command(BaseCommand):
    help = 'Render a procedural training dataset.'

    def add_arguments(self, parser):
        parser.add_argument("--out", required=True, help="dataset directory")
        parser.add_argument("--samples", type=int, default=100)

    def handle(self, **options):
        config = self.config(options)
        count = generate(config, options["samples"], options["out"])
        self.write("wrote %d samples to %s" % (count, options["out"]))
