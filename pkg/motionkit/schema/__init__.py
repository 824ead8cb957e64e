# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""\
Schema maps motionkit's value objects to json: each type is a class whose
properties are declared as class attributes, validated on assignment and
serialized with `to_json`::

    from motionkit.schema import Config

    config = Config(image_size=32, latent_dim=16)
    config.validate()
    config.to_file("run.json")
    Config.from_file("run.json", seed=3)

Range checks live on the properties (`validators=`), invariants that
involve several fields live in `validate()`. Both raise `BadValueError`.
"""
from .base import (
        Spec,
        StaticSpec,
        in_range,
        each_in_range,
        positive,
        non_negative,
        finite)

from .config import Config, VARIANT_NAMES

from .specs import CharacterSpec, PoseSpec, ExpressionSpec

from .report import LossBreakdown, EvalReport, LOSS_TERMS
