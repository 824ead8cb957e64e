# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

from ..evaluation.ablation import disentanglement_probes, evaluate_model, \
    held_out_samples, run_ablations
from ..syndata.dataset import ProceduralDataset, open_dataset, read_dataset
from ..syndata.samples import CROSS_IDENTITY, SAME_IDENTITY
from ..utils import write_json
from . import BaseCommand


class Command(BaseCommand):
    help = ('Score a checkpoint (SSIM/PSNR, KP/KP-H, hand depth order, '
            'probes) or, with --ablation, train and score every variant.')

    def add_arguments(self, parser):
        parser.add_argument("--ckpt", help="checkpoint to score; with "
                            "--ablation only its config is used")
        parser.add_argument("--data", help="evaluation (or, with --ablation, "
                            "training) dataset directory")
        parser.add_argument("--report", required=True, help="json report path")
        parser.add_argument("--ablation", action="store_true")

    def handle(self, **options):
        model, ckpt_config = None, None
        if options["ckpt"]:
            model, _, ckpt_config = self.load(options["ckpt"])
        config = self.config(options, base=ckpt_config)
        if options["ablation"]:
            return self.ablation(config, options)
        if model is None:
            self.write("eval needs --ckpt unless --ablation is given")
            return 2
        model.config = config
        if options["data"]:
            samples = read_dataset(options["data"])
        else:
            count = config.eval_samples
            samples = (held_out_samples(config, count, SAME_IDENTITY) +
                       held_out_samples(config, count, CROSS_IDENTITY))
        report = evaluate_model(model, samples, config)
        report.extra["probes"] = disentanglement_probes(model, samples)
        report.validate()
        write_json(options["report"], report.to_json())
        self.write(" ".join("%s=%.4f" % kv for kv in sorted(report.means.items())))

    def ablation(self, config, options):
        if options["data"]:
            dataset = open_dataset(options["data"])
        else:
            dataset = ProceduralDataset(config)
        reports = run_ablations(config, dataset)
        write_json(options["report"], dict(
            (name, report.to_json()) for name, report in reports.items()))
        for name, report in sorted(reports.items()):
            self.write("%-16s kp=%s kp_h=%s" % (name, report.means.get("kp"),
                                               report.means.get("kp_h")))
