# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

from ..logging import install_step_log
from ..syndata.dataset import ProceduralDataset, open_dataset
from ..training import train
from . import BaseCommand


class Command(BaseCommand):
    help = 'Train a reenactment model.'

    def add_arguments(self, parser):
        parser.add_argument("--data", help="dataset directory; samples are "
                            "rendered on the fly when omitted")
        parser.add_argument("--out", required=True, help="checkpoint path")
        parser.add_argument("--step-log", help="write per-step json records here")

    def handle(self, **options):
        config = self.config(options)
        if options["data"]:
            dataset = open_dataset(options["data"])
        else:
            dataset = ProceduralDataset(config)
        uninstall = None
        if options["step_log"]:
            uninstall = install_step_log(options["step_log"])
        try:
            trainer, history = train(config, dataset, options["out"])
        finally:
            if uninstall is not None:
                uninstall()
        self.write("trained %s for %d steps, final loss %.5f"
                   % (config.variant, len(history), history[-1].total))
