# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

from collections import OrderedDict

from ..checkpoint import save_checkpoint
from ..motionprior import motion_sequences, prior_state, train_prior
from ..rng import rng_fork
from . import BaseCommand


class Command(BaseCommand):
    help = ('Train the motion prior on sequences extracted by a trained '
            'model; writes model and prior to one checkpoint.')

    def add_arguments(self, parser):
        parser.add_argument("--ckpt", required=True, help="trained model checkpoint")
        parser.add_argument("--out", required=True, help="combined checkpoint path")
        parser.add_argument("--sequences", type=int, default=64,
                            help="number of clips to extract motion from")

    def handle(self, **options):
        model, _, ckpt_config = self.load(options["ckpt"])
        config = self.config(options, base=ckpt_config)
        sequences = motion_sequences(model, config, options["sequences"],
                                     rng_fork(config.seed, "prior:data"),
                                     progress=True)
        prior, history = train_prior(config, sequences)
        combined = OrderedDict(model.state_dict())
        combined.update(prior_state(prior))
        save_checkpoint(combined, config, options["out"])
        self.write("prior trained on %d sequences, final loss %.5f"
                   % (len(sequences), history[-1]))
