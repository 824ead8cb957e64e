# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Video generator.

Latent space
    a parameter-free space-to-depth transform: each frame of H x W x 3
    becomes L x L x 3f^2 with L = H/f. It is exactly invertible.

Backbone
    a DiT over 2x2 latent patches. The reference frame's tokens are
    prepended as frame slot 0; the guidance map is stacked onto the
    noised latent along channels (zeros for the reference slot); per-frame
    face tokens are read through cross-attention. The timestep drives
    every block through adaLN-zero modulation.

Tensors are channels-first: a clip latent is (B, T, C_v, L, L).
"""
from collections import namedtuple

import torch
import torch.nn as nn
from einops import rearrange

from ..exceptions import ShapeMismatchError
from .layers import Mlp, TimestepEmbedder, init_weights, modulate

__all__ = ['vae_encode', 'vae_decode', 'CondFlags', 'DiTBlock', 'VideoDiT']

DIT_PATCH = 2


def vae_encode(clip, factor):
    """ (..., 3, H, W) -> (..., 3 f^2, H/f, W/f) """
    h, w = clip.shape[-2:]
    if h % factor or w % factor:
        raise ShapeMismatchError("frame %dx%d is not divisible by vae factor %d"
                                 % (h, w, factor))
    return rearrange(clip, "... c (h p) (w q) -> ... (c p q) h w", p=factor, q=factor)


def vae_decode(latent, factor):
    """ exact inverse of vae_encode """
    return rearrange(latent, "... (c p q) h w -> ... c (h p) (w q)", p=factor, q=factor)


class CondFlags(namedtuple('CondFlags', ['guidance', 'face', 'reference'])):
    """ per-sample keep flags, (B,) bool tensors. A False entry nulls that
    condition: zero guidance, zero face tokens, the learned null
    reference. """

    __slots__ = ()

    @classmethod
    def full(cls, batch, value=True, device=None):
        flag = torch.full((batch,), bool(value), dtype=torch.bool, device=device)
        return cls(flag, flag, flag)

    @classmethod
    def joint(cls, keep):
        keep = torch.as_tensor(keep, dtype=torch.bool)
        return cls(keep, keep, keep)


class DiTBlock(nn.Module):
    """ adaLN-zero block: self-attention, cross-attention to the face
    tokens, MLP """

    def __init__(self, width, heads):
        super(DiTBlock, self).__init__()
        self.norm1 = nn.LayerNorm(width, elementwise_affine=False, eps=1e-6)
        self.attn = nn.MultiheadAttention(width, heads, batch_first=True)
        self.norm2 = nn.LayerNorm(width, elementwise_affine=False, eps=1e-6)
        self.cross = nn.MultiheadAttention(width, heads, batch_first=True)
        self.norm3 = nn.LayerNorm(width, elementwise_affine=False, eps=1e-6)
        self.mlp = Mlp(width)
        self.ada = nn.Sequential(nn.SiLU(), nn.Linear(width, 9 * width))

    def forward(self, x, c, context):
        (sh1, sc1, g1, sh2, sc2, g2, sh3, sc3, g3) = self.ada(c).chunk(9, dim=-1)
        h = modulate(self.norm1(x), sh1, sc1)
        x = x + g1.unsqueeze(1) * self.attn(h, h, h, need_weights=False)[0]
        h = modulate(self.norm2(x), sh2, sc2)
        x = x + g2.unsqueeze(1) * self.cross(h, context, context, need_weights=False)[0]
        h = modulate(self.norm3(x), sh3, sc3)
        return x + g3.unsqueeze(1) * self.mlp(h)


class VideoDiT(nn.Module):

    def __init__(self, config):
        super(VideoDiT, self).__init__()
        width = config.dit_width
        self.latent_size = config.latent_size
        self.latent_channels = config.latent_channels
        self.guidance_channels = config.guidance_channels
        self.latent_dim = config.latent_dim
        self.grid = config.latent_size // DIT_PATCH
        self.max_frames = max(config.clip_len, config.chunk)
        in_channels = self.latent_channels + self.guidance_channels

        self.embed = nn.Linear(in_channels * DIT_PATCH ** 2, width)
        self.time = TimestepEmbedder(width)
        self.spatial_pos = nn.Parameter(torch.zeros(1, 1, self.grid ** 2, width))
        self.frame_pos = nn.Parameter(torch.zeros(1, self.max_frames + 1, 1, width))
        self.null_reference = nn.Parameter(torch.zeros(1, 1, width))
        self.face = nn.Linear(config.latent_dim, width)
        self.blocks = nn.ModuleList([DiTBlock(width, config.dit_heads)
                                     for _ in range(config.dit_depth)])
        self.final_norm = nn.LayerNorm(width, elementwise_affine=False, eps=1e-6)
        self.final_ada = nn.Sequential(nn.SiLU(), nn.Linear(width, 2 * width))
        self.out = nn.Linear(width, self.latent_channels * DIT_PATCH ** 2)
        self.reset_parameters()

    def reset_parameters(self):
        init_weights(self)
        for p in (self.spatial_pos, self.frame_pos, self.null_reference):
            nn.init.normal_(p, std=0.02)
        for block in self.blocks:
            nn.init.zeros_(block.ada[-1].weight)
            nn.init.zeros_(block.ada[-1].bias)
        nn.init.zeros_(self.final_ada[-1].weight)
        nn.init.zeros_(self.final_ada[-1].bias)
        nn.init.zeros_(self.out.weight)
        nn.init.zeros_(self.out.bias)

    def tokens(self, x):
        """ (B, T, C, L, L) -> (B, T, N, C*4) """
        return rearrange(x, "b t c (h p) (w q) -> b t (h w) (c p q)",
                         p=DIT_PATCH, q=DIT_PATCH)

    def untokens(self, x):
        return rearrange(x, "b t (h w) (c p q) -> b t c (h p) (w q)",
                         h=self.grid, p=DIT_PATCH, q=DIT_PATCH)

    def check(self, noised, ref_latent, guidance, z_f):
        b, t = noised.shape[:2]
        lat = (self.latent_channels, self.latent_size, self.latent_size)
        expected = (
            ("noised", noised, (b, t) + lat),
            ("ref_latent", ref_latent, (b,) + lat),
            ("guidance", guidance, (b, t, self.guidance_channels,
                                    self.latent_size, self.latent_size)),
            ("z_f", z_f, (b, t, self.latent_dim)),
        )
        for name, tensor, shape in expected:
            if tuple(tensor.shape) != shape:
                raise ShapeMismatchError("%s must be %s, got %s"
                                         % (name, shape, tuple(tensor.shape)))
        if t > self.max_frames:
            raise ShapeMismatchError("%d frames exceed the %d frame slots"
                                     % (t, self.max_frames))

    def forward(self, noised, t, ref_latent, guidance, z_f, cond=None):
        """ velocity (B, T, C_v, L, L) for the noised clip at time t """
        self.check(noised, ref_latent, guidance, z_f)
        b, frames = noised.shape[:2]
        if cond is None:
            cond = CondFlags.full(b, device=noised.device)
        keep_g = cond.guidance.to(noised.device, noised.dtype).view(b, 1, 1, 1, 1)
        keep_f = cond.face.to(noised.device, noised.dtype).view(b, 1, 1)
        keep_r = cond.reference.to(noised.device, noised.dtype).view(b, 1, 1)

        x = torch.cat([noised, guidance * keep_g], dim=2)
        ref = torch.cat([ref_latent.unsqueeze(1),
                         torch.zeros_like(guidance[:, :1])], dim=2)
        h = self.embed(self.tokens(torch.cat([ref, x], dim=1)))
        ref_tokens = keep_r * h[:, 0] + (1 - keep_r) * self.null_reference
        h = torch.cat([ref_tokens.unsqueeze(1), h[:, 1:]], dim=1)
        h = h + self.spatial_pos + self.frame_pos[:, :frames + 1]
        h = h.flatten(1, 2)

        t = torch.as_tensor(t, dtype=noised.dtype, device=noised.device)
        if t.dim() == 0:
            t = t.expand(b)
        c = self.time(t)
        context = self.face(z_f * keep_f) + self.frame_pos[:, 1:frames + 1, 0]

        for block in self.blocks:
            h = block(h, c, context)
        shift, scale = self.final_ada(c).chunk(2, dim=-1)
        h = self.out(modulate(self.final_norm(h), shift, scale))
        h = h.view(b, frames + 1, self.grid ** 2, -1)[:, 1:]
        return self.untokens(h)
