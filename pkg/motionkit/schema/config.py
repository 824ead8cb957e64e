# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Run configuration. Every scaled-down hyperparameter lives here so the
full-scale values stay reachable from a config file::

    {"latent_dim": 512, "prior_prefix": 9, "prior_horizon": 81}
"""
from jsonobject import BooleanProperty, FloatProperty, IntegerProperty, \
    StringProperty

from ..exceptions import BadValueError
from ..utils import read_json, write_json
from .base import StaticSpec, in_range, non_negative, positive

__all__ = ['Config', 'VARIANT_NAMES']

VARIANT_NAMES = ('full', 'no_local', 'no_dual', 'no_synth_pairs',
                 'skeleton_align')

BODY_JOINTS = 14
HAND_JOINTS = 7


class Config(StaticSpec):
    image_size = IntegerProperty(default=64, validators=positive)
    patch_size = IntegerProperty(default=8, validators=positive)
    crop_size = IntegerProperty(default=32, validators=positive)
    latent_dim = IntegerProperty(default=32, validators=positive)
    clip_len = IntegerProperty(default=8, validators=positive)
    fps = FloatProperty(default=8.0, validators=positive)
    vae_factor = IntegerProperty(default=4, validators=positive)

    dit_depth = IntegerProperty(default=6, validators=positive)
    dit_width = IntegerProperty(default=192, validators=positive)
    dit_heads = IntegerProperty(default=6, validators=positive)
    encoder_depth = IntegerProperty(default=4, validators=positive)
    encoder_width = IntegerProperty(default=128, validators=positive)
    encoder_heads = IntegerProperty(default=4, validators=positive)
    guidance_channels = IntegerProperty(default=64, validators=positive)

    joints = IntegerProperty(default=BODY_JOINTS + 2 * HAND_JOINTS,
                             validators=positive)
    heatmap_sigma = FloatProperty(default=2.0, validators=positive)

    overlap = IntegerProperty(default=2, validators=non_negative)
    chunk = IntegerProperty(default=8, validators=positive)
    cfg_scale = FloatProperty(default=2.0)
    cond_drop_prob = FloatProperty(default=0.1, validators=in_range(0., 1.))
    sample_steps = IntegerProperty(default=25, validators=positive)

    lambda_kl = FloatProperty(default=1e-4, validators=non_negative)
    lambda_hm = FloatProperty(default=1.0, validators=non_negative)
    lambda_n = FloatProperty(default=1.0, validators=non_negative)
    lambda_f = FloatProperty(default=1.0, validators=non_negative)
    lr_generator = FloatProperty(default=1e-4, validators=positive)
    lr_motion = FloatProperty(default=1e-4, validators=positive)
    weight_decay = FloatProperty(default=0.01, validators=non_negative)
    grad_clip = FloatProperty(default=1.0, validators=positive)
    batch_size = IntegerProperty(default=4, validators=positive)
    train_steps = IntegerProperty(default=2000, validators=positive)
    checkpoint_every = IntegerProperty(default=500, validators=positive)
    mix_ratio = FloatProperty(default=0.3, validators=in_range(0., 1.))

    prior_prefix = IntegerProperty(default=4, validators=positive)
    prior_horizon = IntegerProperty(default=16, validators=positive)
    prior_depth = IntegerProperty(default=4, validators=positive)
    prior_width = IntegerProperty(default=128, validators=positive)
    prior_heads = IntegerProperty(default=4, validators=positive)
    lr_prior = FloatProperty(default=1e-4, validators=positive)
    prior_steps = IntegerProperty(default=2000, validators=positive)

    eval_samples = IntegerProperty(default=16, validators=positive)
    eval_seed = IntegerProperty(default=1234)
    variant = StringProperty(default='full', choices=list(VARIANT_NAMES))
    deterministic = BooleanProperty(default=True)
    threads = IntegerProperty(default=1, validators=non_negative)
    seed = IntegerProperty(default=0)

    @property
    def latent_size(self):
        """ spatial side L of the video latent grid """
        return self.image_size // self.vae_factor

    @property
    def latent_channels(self):
        """ channels C_v of the video latent """
        return 3 * self.vae_factor ** 2

    @property
    def grid_size(self):
        """ side G of the ViT token grid """
        return self.image_size // self.patch_size

    @property
    def hand_joints(self):
        return HAND_JOINTS

    @property
    def body_joints(self):
        return self.joints - 2 * HAND_JOINTS

    def validate(self, required=True):
        super(Config, self).validate(required=required)
        if self.image_size % self.patch_size:
            raise BadValueError("image_size %d is not divisible by patch_size %d"
                                % (self.image_size, self.patch_size))
        if self.image_size % self.vae_factor:
            raise BadValueError("image_size %d is not divisible by vae_factor %d"
                                % (self.image_size, self.vae_factor))
        if self.latent_size % 2:
            raise BadValueError("latent side %d is not divisible by the DiT "
                                "patch size 2" % self.latent_size)
        if self.crop_size % self.patch_size:
            raise BadValueError("crop_size %d is not divisible by patch_size %d"
                                % (self.crop_size, self.patch_size))
        if self.patch_size & (self.patch_size - 1):
            raise BadValueError("patch_size %d is not a power of two"
                                % self.patch_size)
        if not self.chunk > self.overlap >= 0:
            raise BadValueError("chunk %d must exceed overlap %d"
                                % (self.chunk, self.overlap))
        if self.cfg_scale < 1:
            raise BadValueError("cfg_scale %r is below 1" % self.cfg_scale)
        if self.joints != BODY_JOINTS + 2 * HAND_JOINTS:
            raise BadValueError("the procedural skeleton has %d joints, not %d"
                                % (BODY_JOINTS + 2 * HAND_JOINTS, self.joints))
        for name, width, heads in (
                ("dit", self.dit_width, self.dit_heads),
                ("encoder", self.encoder_width, self.encoder_heads),
                ("prior", self.prior_width, self.prior_heads)):
            if width % heads:
                raise BadValueError("%s_width %d is not divisible by %s_heads %d"
                                    % (name, width, name, heads))
        return True

    @classmethod
    def from_file(cls, path, **overrides):
        """ read a config from json text, apply overrides and validate """
        obj = read_json(path)
        obj.update(dict((k, v) for k, v in overrides.items() if v is not None))
        config = cls.wrap(obj)
        config.validate()
        return config

    def to_file(self, path):
        write_json(path, self.to_json())

    @classmethod
    def field_defaults(cls):
        """ (name, default) pairs in declaration order, used to build
        command-line flags """
        return sorted(cls().to_json().items())
