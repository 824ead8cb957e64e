# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

from .layers import hflip, crop_regions, patchify, TransformerBlock
from .encoder import GaussianLatent, MotionLatentSet, ViTEncoder, \
    MotionEncoder, kl_loss, sample_latent
from .retarget import RetargetDecoder, Heads, SkeletonGuider, resize_guidance
from .generator import vae_encode, vae_decode, CondFlags, VideoDiT
from .model import MotionModel, Conditioning, PARAMETER_GROUPS
