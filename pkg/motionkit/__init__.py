# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

from .version import version_info, __version__

from .exceptions import BadValueError, CheckpointFormatError, \
ShapeMismatchError, DatasetError, NonFiniteLossError, UnknownVariantError, \
PrefixLengthError

from .schema import (
    Config, CharacterSpec, PoseSpec, ExpressionSpec, LossBreakdown, EvalReport,
    VARIANT_NAMES
)

from .rng import RandomStream, rng_fork
from .checkpoint import save_checkpoint, load_checkpoint, load_into, \
    write_container, read_container
from .nn import MotionModel, MotionLatentSet, CondFlags
from .inference import chunk_schedule, sample_chunk, sample_video, reenact
from .training import Trainer, train, compute_losses
from .motionprior import MotionPrior, extract_motion_sequence, save_motion, \
    load_motion, prior_sample, train_prior, outpaint
from .variants import load_variant, align_skeleton

from .logging import (LOG_LEVELS, set_logging, logger, install_step_log)
