# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Motion encoders.

Three ViT encoders map a driving frame to four Gaussian tokens: the
global body token z from the whole frame, the face token z_f from the
face crop and the two hand tokens from the hand crops. Both hands go
through one encoder; the right-hand crop is mirrored first.
"""
from collections import namedtuple

import torch
import torch.nn as nn

from .layers import TransformerBlock, check_images, crop_regions, hflip, \
    init_weights, patchify

__all__ = ['GaussianLatent', 'MotionLatentSet', 'ViTEncoder', 'MotionEncoder',
           'kl_loss', 'sample_latent', 'LOGVAR_RANGE']

LOGVAR_RANGE = (-10., 10.)


class GaussianLatent(namedtuple('GaussianLatent', ['mu', 'logvar'])):
    """ diagonal Gaussian over the last axis """

    __slots__ = ()

    @property
    def dim(self):
        return self.mu.shape[-1]

    def kl(self):
        return kl_loss(self)


class MotionLatentSet(namedtuple('MotionLatentSet', ['z', 'z_f', 'z_lh', 'z_rh'])):

    __slots__ = ()

    def means(self):
        """ (..., 4d) concatenation [z | z_f | z_lh | z_rh] of the means """
        return torch.cat([g.mu for g in self], dim=-1)

    def kl(self):
        return sum(kl_loss(g) for g in self)


def kl_loss(g):
    """ KL(N(mu, exp(logvar)) || N(0, I)) summed over the latent axis """
    return 0.5 * (g.mu ** 2 + torch.exp(g.logvar) - 1. - g.logvar).sum(dim=-1)


def sample_latent(g, rng=None, train_mode=True):
    """ mu + exp(logvar / 2) * eps in train mode, exactly mu otherwise.
    `rng` is a RandomStream; without one torch's global generator is
    used """
    if not train_mode:
        return g.mu
    if rng is not None:
        eps = rng.normal(g.mu.shape, like=g.mu).to(g.mu.device)
    else:
        eps = torch.randn_like(g.mu)
    return g.mu + torch.exp(0.5 * g.logvar) * eps


class ViTEncoder(nn.Module):
    """ patches + one learned query token -> transformer -> conv head
    giving (mu, logvar) """

    def __init__(self, image_size, patch_size, width, depth, heads, latent_dim):
        super(ViTEncoder, self).__init__()
        self.image_size = image_size
        self.patch_size = patch_size
        self.latent_dim = latent_dim
        tokens = (image_size // patch_size) ** 2
        self.patch = nn.Linear(patch_size * patch_size * 3, width)
        self.query = nn.Parameter(torch.zeros(1, 1, width))
        self.pos = nn.Parameter(torch.zeros(1, tokens + 1, width))
        self.blocks = nn.ModuleList([TransformerBlock(width, heads)
                                     for _ in range(depth)])
        self.norm = nn.LayerNorm(width)
        self.head = nn.Sequential(
            nn.Conv1d(width, width, 1),
            nn.GELU(),
            nn.Conv1d(width, 2 * latent_dim, 1),
        )
        init_weights(self)
        nn.init.normal_(self.query, std=0.02)
        nn.init.normal_(self.pos, std=0.02)

    def forward(self, images):
        check_images(images, self.image_size)
        tokens = self.patch(patchify(images * 2. - 1., self.patch_size))
        x = torch.cat([self.query.expand(len(images), -1, -1), tokens], dim=1)
        x = x + self.pos
        for block in self.blocks:
            x = block(x)
        pooled = self.norm(x[:, 0])
        out = self.head(pooled[:, :, None])[:, :, 0]
        mu, logvar = out.chunk(2, dim=-1)
        return GaussianLatent(mu, logvar.clamp(*LOGVAR_RANGE))


class MotionEncoder(nn.ModuleDict):
    """ the global, face and shared hand encoders, keyed so parameter
    names read enc.global.*, enc.face.* and enc.hand.* """

    def __init__(self, config):
        common = dict(patch_size=config.patch_size, width=config.encoder_width,
                      depth=config.encoder_depth, heads=config.encoder_heads,
                      latent_dim=config.latent_dim)
        super(MotionEncoder, self).__init__({
            'global': ViTEncoder(config.image_size, **common),
            'face': ViTEncoder(config.crop_size, **common),
            'hand': ViTEncoder(config.crop_size, **common),
        })
        self.crop_size = config.crop_size

    def encode_global(self, frames):
        return self['global'](frames)

    def encode_face(self, face_crops):
        return self['face'](face_crops)

    def encode_hands(self, lh_crops, rh_crops):
        """ one pass of the shared encoder over [lh, hflip(rh)] """
        out = self['hand'](torch.cat([lh_crops, hflip(rh_crops)], dim=0))
        n = len(lh_crops)
        return (GaussianLatent(out.mu[:n], out.logvar[:n]),
                GaussianLatent(out.mu[n:], out.logvar[n:]))

    def crops(self, frames, boxes):
        """ (face, left hand, right hand) crops; boxes are (B, 3, 3) """
        boxes = torch.as_tensor(boxes, dtype=frames.dtype, device=frames.device)
        return tuple(crop_regions(frames, boxes[:, k], self.crop_size)
                     for k in range(3))

    def forward(self, frames, boxes):
        face, lh, rh = self.crops(frames, boxes)
        z_lh, z_rh = self.encode_hands(lh, rh)
        return MotionLatentSet(self.encode_global(frames), self.encode_face(face),
                               z_lh, z_rh)
