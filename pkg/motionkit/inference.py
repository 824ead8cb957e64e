# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Sampling videos from a trained model.

Chunks are integrated with Euler steps from noise (t=0) to data (t=1)
under classifier-free guidance against the fully-null condition. Long
videos are generated chunk by chunk; each chunk after the first has its
leading frames clamped to frames already generated, re-noised to the
current time after every step.
"""
import logging

import numpy as np
import torch

from .flow import cfg_velocity, euler_integrate
from .logging import Stopwatch
from .nn.generator import CondFlags
from .variants import align_skeleton, skeleton_maps

__all__ = ['chunk_schedule', 'sample_chunk', 'sample_chunk_latent',
           'sample_video', 'reenact', 'to_tensor', 'frames_to_numpy']

log = logging.getLogger(__name__)


def to_tensor(frames, dtype=torch.float32):
    """ (..., H, W, 3) numpy frames -> (..., 3, H, W) tensor """
    t = torch.as_tensor(np.ascontiguousarray(frames), dtype=dtype)
    return t.movedim(-1, -3)


def frames_to_numpy(frames):
    """ (..., 3, H, W) tensor -> (..., H, W, 3) float32 array """
    return frames.detach().movedim(-3, -1).cpu().numpy().astype(np.float32)


def chunk_schedule(total, chunk, overlap):
    """ [(start, end, clamp), ...] covering `total` frames. Every chunk
    after the first clamps its first `clamp` frames (at least `overlap`)
    to frames generated before; the last chunk is aligned to the end. """
    if total < 1:
        raise ValueError("total must be >= 1, got %r" % total)
    if not chunk > overlap >= 0:
        raise ValueError("chunk %r must exceed overlap %r" % (chunk, overlap))
    if total <= chunk:
        return [(0, total, 0)]
    schedule = [(0, chunk, 0)]
    end = chunk
    while end < total:
        start = min(end - overlap, total - chunk)
        schedule.append((start, start + chunk, end - start))
        end = start + chunk
    return schedule


def guided_velocity(model, conditioning, scale):
    """ velocity function for euler_integrate. With scale 1 only the
    conditional branch is evaluated. """
    def velocity(x, t):
        b = len(x)
        if scale == 1:
            return model.velocity(x, t, conditioning, CondFlags.full(b, device=x.device))
        flags = CondFlags.joint(torch.cat([torch.ones(b, dtype=torch.bool),
                                           torch.zeros(b, dtype=torch.bool)]))
        doubled = conditioning._replace(
            ref_latent=torch.cat([conditioning.ref_latent] * 2),
            guidance=torch.cat([conditioning.guidance] * 2),
            z_f=torch.cat([conditioning.z_f] * 2))
        v = model.velocity(torch.cat([x, x]), t, doubled, flags)
        v_cond, v_uncond = v[:b], v[b:]
        return cfg_velocity(v_uncond, v_cond, scale)
    return velocity


def sample_chunk_latent(model, conditioning, steps, scale, rng, clamped_prefix=None):
    """ the final latent of one chunk. `clamped_prefix` is a
    (B, k, 3, H, W) tensor of frames the chunk must start with """
    b, frames = conditioning.guidance.shape[:2]
    shape = (b, frames, model.config.latent_channels,
             model.config.latent_size, model.config.latent_size)
    x = rng.normal(shape, like=conditioning.ref_latent)

    after_step = None
    if clamped_prefix is not None and clamped_prefix.shape[1] > 0:
        prefix = model.vae_encode(clamped_prefix.to(x.dtype))
        count = prefix.shape[1]
        noise_rng = rng.fork("clamp")

        def after_step(x, t):
            eps = noise_rng.normal(prefix.shape, like=prefix)
            x = x.clone()
            x[:, :count] = (1 - t) * eps + t * prefix
            return x

    with torch.no_grad():
        return euler_integrate(guided_velocity(model, conditioning, scale), x,
                               steps, after_step)


def sample_chunk(model, conditioning, steps, scale, rng, clamped_prefix=None):
    """ (B, T, 3, H, W) frames of one chunk """
    latent = sample_chunk_latent(model, conditioning, steps, scale, rng,
                                 clamped_prefix)
    return model.vae_decode(latent).clamp(0., 1.)


def sample_video(model, conditioning, total, chunk, overlap, steps, scale, rng):
    """ sliding-window generation of `total` frames """
    schedule = chunk_schedule(total, chunk, overlap)
    b = len(conditioning.ref_latent)
    size = model.config.image_size
    video = torch.zeros(b, total, 3, size, size, dtype=conditioning.ref_latent.dtype)
    for i, (start, end, clamp) in enumerate(schedule):
        watch = Stopwatch()
        prefix = video[:, start:start + clamp] if clamp else None
        frames = sample_chunk(model, conditioning.frames(start, end), steps, scale,
                              rng.fork("chunk:%d" % i), prefix)
        video[:, start:end] = frames
        log.debug("chunk %d/%d frames %d-%d (clamped %d) took %.2fs",
                  i + 1, len(schedule), start, end, clamp, watch.elapsed())
    return video


def driving_conditioning(model, reference, driving, boxes, drive_keypoints=None,
                         reference_keypoints=None):
    """ Conditioning and MotionLatentSet for one driving clip.

    reference (3, H, W), driving (T, 3, H, W), boxes (T, 3, 3); the
    skeleton variant also needs pixel keypoints of both.
    """
    config = model.config
    frames = len(driving)
    with torch.no_grad():
        latents = model.encode(driving, boxes)
        vectors = model.motion_vectors(latents, train_mode=False)
        skeleton = None
        if model.variant.skeleton_guidance:
            if drive_keypoints is None or reference_keypoints is None:
                raise ValueError("skeleton guidance needs driving and reference keypoints")
            aligned = align_skeleton(drive_keypoints, reference_keypoints)
            skeleton = torch.from_numpy(skeleton_maps(
                aligned, config.image_size, config.latent_size,
                config.heatmap_sigma))[None]
        conditioning = model.condition(reference[None], vectors, frames, skeleton)
    return conditioning, latents


def reenact(model, reference, driving, boxes, rng, steps=None, scale=None,
            drive_keypoints=None, reference_keypoints=None):
    """ animate `reference` with the motion of `driving`; returns
    ((T, 3, H, W) frames, MotionLatentSet) """
    config = model.config
    model.eval()
    conditioning, latents = driving_conditioning(
        model, reference, driving, boxes, drive_keypoints, reference_keypoints)
    video = sample_video(model, conditioning, len(driving), config.chunk,
                         config.overlap, steps or config.sample_steps,
                         config.cfg_scale if scale is None else scale, rng)
    return video[0], latents
