# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

import os

import torch

from ..inference import frames_to_numpy, reenact, to_tensor
from ..logging import Stopwatch
from ..motionprior import save_motion
from ..rng import rng_fork
from ..syndata.dataset import read_png, read_sample, write_png
from ..utils import ensure_dir, write_json
from . import BaseCommand


class Command(BaseCommand):
    help = ('Animate a reference image with the motion of a driving sample '
            'directory; writes frames, motion.bin and report.json.')

    def add_arguments(self, parser):
        parser.add_argument("--ckpt", required=True)
        parser.add_argument("--ref", required=True, help="reference PNG")
        parser.add_argument("--drive", required=True, help="driving sample directory")
        parser.add_argument("--out", required=True, help="output directory")
        parser.add_argument("--steps", type=int, help="Euler steps "
                            "(defaults to the config's sample_steps)")

    def handle(self, **options):
        watch = Stopwatch()
        model, _, ckpt_config = self.load(options["ckpt"])
        config = self.config(options, base=ckpt_config)
        model.config = config
        steps = options["steps"] or config.sample_steps
        drive = read_sample(options["drive"])
        reference = to_tensor(read_png(options["ref"]))
        loaded = watch.restart()

        # skeleton guidance assumes --ref is the sample's own reference
        video, latents = reenact(
            model, reference, to_tensor(drive.driving),
            torch.from_numpy(drive.boxes).float(),
            rng_fork(config.seed, "infer"), steps, config.cfg_scale,
            drive.drive_keypoints, drive.reference_keypoints)
        sampled = watch.restart()

        out = ensure_dir(options["out"])
        frames = frames_to_numpy(video)
        for t, frame in enumerate(frames):
            write_png(os.path.join(out, "frame_%03d.png" % t), frame)
        save_motion(os.path.join(out, "motion.bin"),
                    latents.means().numpy(), config)
        write_json(os.path.join(out, "report.json"), {
            "frames": len(frames),
            "steps": steps,
            "cfg_scale": config.cfg_scale,
            "variant": config.variant,
            "config_hash": config.hash(),
            "seconds": {"load": loaded, "sample": sampled,
                        "write": watch.elapsed()},
        })
        self.write("wrote %d frames to %s" % (len(frames), out))
