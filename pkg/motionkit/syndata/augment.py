# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Motion-invariant 2D augmentations: color jitter, then a uniform scale
about the canvas centre, then a piecewise affine warp.

An `Augmentation` is a frozen set of parameters. It can be applied to
any number of frames and maps keypoints through the same spatial
transform with `forward`.
"""
import numpy as np
import torch
import torch.nn.functional as F

__all__ = ['Augmentation', 'augment']

GAIN_RANGE = (0.7, 1.3)
BIAS_RANGE = (-0.15, 0.15)
SCALE_RANGE = (0.7, 1.3)
GRID = 4
MAX_JITTER = 0.04


def _triangles(grid):
    tris = []
    for i in range(grid - 1):
        for j in range(grid - 1):
            a, b = i * grid + j, i * grid + j + 1
            c, d = (i + 1) * grid + j, (i + 1) * grid + j + 1
            tris += [(a, b, d), (a, d, c)]
    return np.array(tris)


_TRIANGLES = _triangles(GRID)


def barycentric(points, corners):
    """ barycentric coordinates of (N, 2) points in (K, 3, 2) triangles,
    shape (N, K, 3) """
    a, b, c = corners[:, 0], corners[:, 1], corners[:, 2]
    v0, v1 = b - a, c - a
    v2 = points[:, None, :] - a[None]
    d00 = (v0 * v0).sum(-1)
    d01 = (v0 * v1).sum(-1)
    d11 = (v1 * v1).sum(-1)
    d20 = (v2 * v0[None]).sum(-1)
    d21 = (v2 * v1[None]).sum(-1)
    denom = d00 * d11 - d01 * d01
    v = (d11 * d20 - d01 * d21) / denom
    w = (d00 * d21 - d01 * d20) / denom
    return np.stack([1. - v - w, v, w], axis=-1)


def piecewise_affine(points, src, dst):
    """ map points through the mesh src -> dst. Points outside the mesh
    use the affine map of the nearest triangle (the one whose smallest
    barycentric coordinate is largest). """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    bary = barycentric(points, src[_TRIANGLES])
    best = bary.min(axis=-1).argmax(axis=-1)
    weights = bary[np.arange(len(points)), best]
    return np.einsum("nk,nkd->nd", weights, dst[_TRIANGLES[best]])


class Augmentation(object):

    def __init__(self, size, gain, bias, scale, jitter):
        self.size = int(size)
        self.gain = np.asarray(gain, dtype=np.float32)
        self.bias = np.asarray(bias, dtype=np.float32)
        self.scale = float(scale)
        self.jitter = np.asarray(jitter, dtype=np.float64).reshape(GRID * GRID, 2)
        lin = np.linspace(0., self.size - 1., GRID)
        ys, xs = np.meshgrid(lin, lin, indexing="ij")
        self.mesh = np.stack([xs.ravel(), ys.ravel()], axis=1)
        self.centre = (self.size - 1) / 2.

    @classmethod
    def identity(cls, size):
        return cls(size, np.ones(3), np.zeros(3), 1., np.zeros((GRID * GRID, 2)))

    @classmethod
    def sample(cls, rng, size):
        return cls(size,
                   gain=rng.uniform(*GAIN_RANGE, size=3),
                   bias=rng.uniform(*BIAS_RANGE, size=3),
                   scale=rng.uniform(*SCALE_RANGE),
                   jitter=rng.uniform(-MAX_JITTER, MAX_JITTER,
                                      size=(GRID * GRID, 2)) * size)

    @property
    def is_spatial_identity(self):
        return self.scale == 1. and not self.jitter.any()

    def color(self, frame):
        return np.clip(frame * self.gain + self.bias, 0., 1.).astype(np.float32)

    def forward(self, points):
        """ where input pixel coordinates land in the augmented frame """
        p = np.asarray(points, dtype=np.float64)
        shape = p.shape
        p = p.reshape(-1, 2)
        p = self.centre + self.scale * (p - self.centre)
        if self.jitter.any():
            p = piecewise_affine(p, self.mesh, self.mesh + self.jitter)
        return p.reshape(shape)

    def inverse(self, points):
        p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        if self.jitter.any():
            p = piecewise_affine(p, self.mesh + self.jitter, self.mesh)
        return self.centre + (p - self.centre) / self.scale

    def warp(self, frames):
        """ resample (..., H, W, C) frames through the spatial transform """
        frames = np.asarray(frames, dtype=np.float32)
        if self.is_spatial_identity:
            return frames
        lead = frames.shape[:-3]
        stack = frames.reshape((-1,) + frames.shape[-3:])
        ys, xs = np.mgrid[0:self.size, 0:self.size]
        targets = np.stack([xs.ravel(), ys.ravel()], axis=1).astype(np.float64)
        source = self.inverse(targets)
        # grid_sample wants (x, y) in [-1, 1] with corners on pixel centres
        grid = torch.from_numpy(
            (2. * source / (self.size - 1) - 1.).reshape(1, self.size, self.size, 2)
        ).float().expand(len(stack), -1, -1, -1)
        images = torch.from_numpy(np.ascontiguousarray(stack)).permute(0, 3, 1, 2)
        out = F.grid_sample(images, grid, mode="bilinear", padding_mode="border",
                            align_corners=True)
        return out.permute(0, 2, 3, 1).numpy().reshape(lead + out.shape[2:] + (out.shape[1],))

    def apply(self, frames):
        """ color, then scale, then warp """
        return self.warp(self.color(frames))


def augment(frame, rng):
    """ augment one frame; returns (frame, augmentation) so the spatial
    map stays available as `augmentation.forward` """
    aug = Augmentation.sample(rng, frame.shape[0])
    return aug.apply(frame), aug
