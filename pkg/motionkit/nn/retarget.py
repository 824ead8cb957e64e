# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Retargeting decoder and the supervised heads hanging off it.

The decoder reads [z, z_lh, z_rh] together with the patches of the
reference image and keeps only the patch tokens, which become a G x G
guidance map in the reference subject's geometry. The heatmap and hand
normal heads read that G x G map before it is resized to the video
latent grid; the expression head reads z_f.
"""
import math

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..exceptions import ShapeMismatchError
from .layers import TransformerBlock, check_images, init_weights, patchify

__all__ = ['RetargetDecoder', 'UpsampleHead', 'ExpressionHead', 'Heads',
           'SkeletonGuider', 'resize_guidance']

MOTION_TOKENS = 3


def resize_guidance(features, latent_size):
    """ bilinear resize of (B, C, G, G) features to the latent grid """
    if features.shape[-1] == latent_size:
        return features
    return F.interpolate(features, size=(latent_size, latent_size),
                         mode="bilinear", align_corners=False)


class RetargetDecoder(nn.Module):

    def __init__(self, config):
        super(RetargetDecoder, self).__init__()
        width = config.encoder_width
        self.image_size = config.image_size
        self.patch_size = config.patch_size
        self.grid = config.grid_size
        self.latent_dim = config.latent_dim
        self.latent_size = config.latent_size
        self.motion = nn.ModuleList([nn.Linear(config.latent_dim, width)
                                     for _ in range(MOTION_TOKENS)])
        self.patch = nn.Linear(config.patch_size ** 2 * 3, width)
        self.pos = nn.Parameter(torch.zeros(1, MOTION_TOKENS + self.grid ** 2, width))
        self.blocks = nn.ModuleList([TransformerBlock(width, config.encoder_heads)
                                     for _ in range(config.encoder_depth)])
        self.norm = nn.LayerNorm(width)
        self.out = nn.Linear(width, config.guidance_channels)
        init_weights(self)
        nn.init.normal_(self.pos, std=0.02)

    def features(self, z, z_lh, z_rh, reference):
        """ (B, C_g, G, G) guidance before the resize """
        check_images(reference, self.image_size, "reference")
        for name, v in (("z", z), ("z_lh", z_lh), ("z_rh", z_rh)):
            if v.dim() != 2 or v.shape[-1] != self.latent_dim or len(v) != len(reference):
                raise ShapeMismatchError("%s must be (%d, %d), got %s"
                                         % (name, len(reference), self.latent_dim,
                                            tuple(v.shape)))
        motion = torch.stack([proj(v) for proj, v in zip(self.motion, (z, z_lh, z_rh))],
                             dim=1)
        patches = self.patch(patchify(reference * 2. - 1., self.patch_size))
        x = torch.cat([motion, patches], dim=1) + self.pos
        for block in self.blocks:
            x = block(x)
        x = self.out(self.norm(x[:, MOTION_TOKENS:]))
        return x.transpose(1, 2).reshape(len(x), -1, self.grid, self.grid)

    def forward(self, z, z_lh, z_rh, reference):
        """ (features G x G, guidance L x L) """
        features = self.features(z, z_lh, z_rh, reference)
        return features, resize_guidance(features, self.latent_size)


class UpsampleHead(nn.Module):
    """ log2(patch) stride-2 transposed convolutions from G to H, then a
    zero-initialized 3x3 projection """

    def __init__(self, channels, out_channels, patch_size):
        super(UpsampleHead, self).__init__()
        stages = []
        for _ in range(int(round(math.log(patch_size, 2)))):
            stages += [nn.ConvTranspose2d(channels, channels, 4, stride=2, padding=1),
                       nn.GELU()]
        self.stages = nn.Sequential(*stages)
        self.proj = nn.Conv2d(channels, out_channels, 3, padding=1)
        nn.init.zeros_(self.proj.weight)
        nn.init.zeros_(self.proj.bias)

    def forward(self, features):
        return self.proj(self.stages(features))


class ExpressionHead(nn.Sequential):

    def __init__(self, latent_dim, hidden=64, outputs=4):
        super(ExpressionHead, self).__init__(
            nn.Linear(latent_dim, hidden),
            nn.GELU(),
            nn.Linear(hidden, outputs),
            nn.Sigmoid(),
        )


class Heads(nn.ModuleDict):
    """ head.hm (joint heatmaps), head.nrm (hand normals) and head.expr
    (expression parameters) """

    def __init__(self, config):
        super(Heads, self).__init__({
            'hm': UpsampleHead(config.guidance_channels, config.joints,
                               config.patch_size),
            'nrm': UpsampleHead(config.guidance_channels, 3, config.patch_size),
            'expr': ExpressionHead(config.latent_dim),
        })

    def decode_heatmaps(self, features):
        """ (B, J, H, W) """
        return self['hm'](features)

    def decode_hand_normals(self, features):
        """ (B, H, W, 3) """
        return self['nrm'](features).permute(0, 2, 3, 1)

    def decode_expression(self, z_f):
        """ (B, 4) in (0, 1) """
        return self['expr'](z_f)


class SkeletonGuider(nn.Module):
    """ guidance straight from keypoint heatmaps drawn at the latent
    resolution, for the bone-length alignment baseline """

    def __init__(self, config):
        super(SkeletonGuider, self).__init__()
        channels = config.guidance_channels
        self.net = nn.Sequential(
            nn.Conv2d(config.joints, channels, 3, padding=1),
            nn.GELU(),
            nn.Conv2d(channels, channels, 3, padding=1),
        )

    def forward(self, heatmaps):
        return self.net(heatmaps)
