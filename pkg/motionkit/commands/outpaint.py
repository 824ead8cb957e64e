# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import os

from ..inference import frames_to_numpy
from ..motionprior import outpaint, save_motion
from ..rng import rng_fork
from ..syndata.dataset import read_png, read_sample, write_png
from ..utils import ensure_dir, write_json
from . import BaseCommand


class Command(BaseCommand):
    help = ('Extend the motion of a sample\'s first prior_prefix frames with '
            'the motion prior and render it onto the sample\'s reference.')

    def add_arguments(self, parser):
        parser.add_argument("--ckpt", required=True,
                            help="combined checkpoint written by train-prior")
        parser.add_argument("--prefix", required=True, help="sample directory")
        parser.add_argument("--ref", help="reference PNG (default: the "
                            "sample's ref.png)")
        parser.add_argument("--out", required=True, help="output directory")
        parser.add_argument("--steps", type=int)

    def handle(self, **options):
        model, prior, ckpt_config = self.load(options["ckpt"], prior=True)
        config = self.config(options, base=ckpt_config)
        model.config = config
        sample = read_sample(options["prefix"])
        reference = read_png(options["ref"]) if options["ref"] else sample.reference
        video, motion = outpaint(model, prior, reference, sample.driving,
                                 sample.boxes, rng_fork(config.seed, "outpaint"),
                                 options["steps"])
        out = ensure_dir(options["out"])
        for t, frame in enumerate(frames_to_numpy(video)):
            write_png(os.path.join(out, "frame_%03d.png" % t), frame)
        save_motion(os.path.join(out, "motion.bin"), motion, config)
        write_json(os.path.join(out, "report.json"), {
            "prefix": prior.prefix,
            "horizon": prior.horizon,
            "frames": len(motion),
            "config_hash": config.hash(),
        })
        self.write("wrote %d frames (%d extrapolated) to %s"
                   % (len(motion), prior.horizon, out))
