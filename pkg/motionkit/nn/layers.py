# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Building blocks shared by the encoders, the retargeting decoder, the
video generator and the motion prior.
"""
import math

import torch
import torch.nn as nn
import torch.nn.functional as F
from einops import rearrange

from ..exceptions import ShapeMismatchError

__all__ = ['Mlp', 'TransformerBlock', 'TimestepEmbedder', 'modulate',
           'patchify', 'hflip', 'crop_regions', 'check_images']


def check_images(images, size, what="images"):
    """ (B, 3, size, size) or ShapeMismatchError """
    if images.dim() != 4 or images.shape[1] != 3 or \
            tuple(images.shape[2:]) != (size, size):
        raise ShapeMismatchError("%s must be (B, 3, %d, %d), got %s"
                                 % (what, size, size, tuple(images.shape)))
    return images


def patchify(images, patch):
    """ (B, C, H, W) -> (B, H/p * W/p, p*p*C), row-major over the grid """
    return rearrange(images, "b c (h p) (w q) -> b (h w) (p q c)", p=patch, q=patch)


def hflip(x):
    """ mirror along the last (width) axis """
    return torch.flip(x, dims=(-1,))


def crop_regions(images, boxes, size):
    """ bilinear square crops. `boxes` is (B, 3) as (cx, cy, side) in
    pixels; samples outside the canvas read as zero """
    b, _, h, w = images.shape
    boxes = torch.as_tensor(boxes, dtype=images.dtype, device=images.device)
    steps = (torch.arange(size, dtype=images.dtype, device=images.device) + 0.5) / size - 0.5
    xs = boxes[:, 0, None] + steps[None] * boxes[:, 2, None]
    ys = boxes[:, 1, None] + steps[None] * boxes[:, 2, None]
    gx = 2. * xs / (w - 1) - 1.
    gy = 2. * ys / (h - 1) - 1.
    grid = torch.stack([gx[:, None, :].expand(b, size, size),
                        gy[:, :, None].expand(b, size, size)], dim=-1)
    return F.grid_sample(images, grid, mode="bilinear", padding_mode="zeros",
                         align_corners=True)


def modulate(x, shift, scale):
    return x * (1 + scale.unsqueeze(1)) + shift.unsqueeze(1)


class Mlp(nn.Sequential):

    def __init__(self, width, ratio=4, out=None):
        super(Mlp, self).__init__(
            nn.Linear(width, width * ratio),
            nn.GELU(),
            nn.Linear(width * ratio, out or width),
        )


class TransformerBlock(nn.Module):
    """ pre-norm self-attention block with an MLP of ratio 4 """

    def __init__(self, width, heads):
        super(TransformerBlock, self).__init__()
        self.norm1 = nn.LayerNorm(width)
        self.attn = nn.MultiheadAttention(width, heads, batch_first=True)
        self.norm2 = nn.LayerNorm(width)
        self.mlp = Mlp(width)

    def forward(self, x):
        h = self.norm1(x)
        x = x + self.attn(h, h, h, need_weights=False)[0]
        return x + self.mlp(self.norm2(x))


class TimestepEmbedder(nn.Module):
    """ sinusoidal features of t in [0, 1] followed by an MLP """

    def __init__(self, width, frequencies=128, max_period=10000.):
        super(TimestepEmbedder, self).__init__()
        self.frequencies = frequencies
        self.max_period = max_period
        self.mlp = nn.Sequential(nn.Linear(frequencies, width), nn.SiLU(),
                                 nn.Linear(width, width))

    def features(self, t):
        half = self.frequencies // 2
        freqs = torch.exp(-math.log(self.max_period) *
                          torch.arange(half, dtype=t.dtype, device=t.device) / half)
        # scale to the diffusion-step range the frequencies were laid out for
        args = 1000. * t[:, None] * freqs[None]
        return torch.cat([torch.cos(args), torch.sin(args)], dim=-1)

    def forward(self, t):
        return self.mlp(self.features(t))


def init_weights(module):
    """ xavier linears, zero biases """
    for m in module.modules():
        if isinstance(m, nn.Linear):
            nn.init.xavier_uniform_(m.weight)
            if m.bias is not None:
                nn.init.zeros_(m.bias)
