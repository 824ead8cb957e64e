# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
The whole reenactment model.

Parameter names are grouped by prefix: enc.global, enc.face, enc.hand,
ret, head.hm, head.nrm, head.expr and gen.
"""
from collections import namedtuple

import torch
import torch.nn as nn

from ..variants import load_variant
from .encoder import MotionEncoder, sample_latent
from .generator import VideoDiT, vae_encode, vae_decode
from .retarget import Heads, RetargetDecoder, SkeletonGuider

__all__ = ['MotionModel', 'Conditioning', 'PARAMETER_GROUPS']

PARAMETER_GROUPS = ('enc.global', 'enc.face', 'enc.hand', 'ret', 'head', 'gen')
MOTION_GROUPS = ('enc', 'ret', 'head')


class Conditioning(namedtuple('Conditioning', ['ref_latent', 'guidance', 'z_f',
                                               'features'])):
    """ everything the generator reads besides the noised clip.
    `features` is the pre-resize G x G map (None for skeleton guidance) """

    __slots__ = ()

    def frames(self, start, end):
        """ the conditioning of frames [start, end) """
        return Conditioning(self.ref_latent, self.guidance[:, start:end],
                            self.z_f[:, start:end], None)


class MotionModel(nn.Module):

    def __init__(self, config):
        super(MotionModel, self).__init__()
        self.config = config
        self.variant = load_variant(config)
        self.enc = MotionEncoder(config)
        if self.variant.skeleton_guidance:
            self.ret = SkeletonGuider(config)
        else:
            self.ret = RetargetDecoder(config)
        self.head = Heads(config)
        self.gen = VideoDiT(config)

    def parameter_groups(self):
        """ (motion parameters, generator parameters) """
        motion = [p for name, p in self.named_parameters()
                  if name.split('.')[0] in MOTION_GROUPS]
        return motion, list(self.gen.parameters())

    def vae_encode(self, frames):
        return vae_encode(frames, self.config.vae_factor)

    def vae_decode(self, latent):
        return vae_decode(latent, self.config.vae_factor)

    def encode(self, frames, boxes):
        """ MotionLatentSet of (N, 3, H, W) frames with (N, 3, 3) boxes """
        return self.enc(frames, boxes)

    def motion_vectors(self, latents, rng=None, train_mode=False):
        """ sampled (train) or mean (eval) vectors; variants without local
        tokens see zeros in place of z_f, z_lh and z_rh """
        vectors = [sample_latent(g, rng.fork(name) if rng is not None else None,
                                 train_mode)
                   for name, g in zip(latents._fields, latents)]
        if not self.variant.local_tokens:
            vectors = [vectors[0]] + [torch.zeros_like(v) for v in vectors[1:]]
        return dict(zip(latents._fields, vectors))

    def condition(self, reference, vectors, frames, skeleton=None):
        """ Conditioning for a clip of `frames` frames.

        `reference` is (B, 3, H, W); every vector is (B * frames, d) in
        frame-major order per sample; `skeleton` holds (B, frames, J, L, L)
        keypoint maps for skeleton guidance.
        """
        b = len(reference)
        latent = self.config.latent_size
        if self.variant.skeleton_guidance:
            maps = skeleton.flatten(0, 1).to(reference.dtype)
            features = None
            guidance = self.ret(maps)
        else:
            refs = reference.repeat_interleave(frames, dim=0)
            features, guidance = self.ret(vectors['z'], vectors['z_lh'],
                                          vectors['z_rh'], refs)
        guidance = guidance.view(b, frames, -1, latent, latent)
        z_f = vectors['z_f'].view(b, frames, -1)
        return Conditioning(self.vae_encode(reference), guidance, z_f, features)

    def velocity(self, noised, t, conditioning, cond_flags=None):
        return self.gen(noised, t, conditioning.ref_latent, conditioning.guidance,
                        conditioning.z_f, cond_flags)
